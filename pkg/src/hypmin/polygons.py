"""Hyperbolic n-gons with prescribed interior angles.

A polygon with angles ``theta_1..theta_n`` exists iff
``sum(pi - theta_i) > 2 pi``; the space of such polygons (up to
isometry) has dimension n - 3, coordinatized here by the first n - 3
edge lengths, the remaining three being solved from the closing
constraint by Newton iteration.

Placement is canonical: first vertex at (0, 1), first edge developed
along the unit-speed geodesic with initial tangent (1, 0), vertices
counterclockwise.  This makes every constructor reproducible
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .errors import InputError, NewtonError, NonConvexError, SolveError
from .halfplane import (
    Geodesic,
    HPoint,
    Isometry2,
    angle_at,
    dist,
    dist_to_geodesic,
    geodesic_through,
    side_of,
)

#: Newton target for the closing residual
CLOSE_TOL = 1e-10

#: Hadamard-ratio proxy threshold for "ill-conditioned closing Jacobian"
_COND_LIMIT = 1e8


@dataclass(frozen=True)
class AngleSpec:
    """Prescribed interior angles, radians, counterclockwise order."""

    angles: tuple[float, ...]
    strict: bool = False

    def __init__(self, angles, strict: bool = False):
        angles = tuple(float(t) for t in angles)
        if len(angles) < 3:
            raise InputError("need at least 3 angles")
        for t in angles:
            if not (0.0 < t < math.pi) or not math.isfinite(t):
                raise InputError(f"angle {t} outside (0, pi)")
        defect = sum(math.pi - t for t in angles) - 2.0 * math.pi
        if defect <= 0.0:
            raise InputError(
                f"not hyperbolic: sum(pi - theta) - 2 pi = {defect:.6g} <= 0",
                code="not-hyperbolic",
            )
        if strict and any(t > math.pi / 2.0 for t in angles):
            raise InputError("strict mode requires all angles <= pi/2")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "strict", strict)

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def angle_defect(self) -> float:
        """sum(pi - theta_i) - 2 pi, positive for any valid spec."""
        return sum(math.pi - t for t in self.angles) - 2.0 * math.pi

    @property
    def all_acute(self) -> bool:
        return all(t <= math.pi / 2.0 for t in self.angles)


@dataclass(frozen=True)
class WeightSpec:
    """Positive weights, one per edge."""

    weights: tuple[float, ...]

    def __init__(self, weights):
        weights = tuple(float(w) for w in weights)
        if not weights:
            raise InputError("empty weight list")
        for w in weights:
            if not (w > 0.0 and math.isfinite(w)):
                raise InputError(f"weights must be positive, got {w}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def ones(cls, n: int) -> "WeightSpec":
        return cls((1.0,) * n)


@dataclass(frozen=True)
class Polygon:
    """Convex embedded polygon; vertices counterclockwise.

    ``angles`` and ``lengths`` are the prescribed data; construction
    verifies they match the vertex geometry to 1e-8.
    """

    vertices: tuple[HPoint, ...]
    angles: tuple[float, ...]
    lengths: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> HPoint:
        return self.vertices[i % self.n]

    def edge_geodesic(self, i: int) -> Geodesic:
        """Oriented geodesic carrying edge i (vertex i toward i+1)."""
        return geodesic_through(self.vertex(i), self.vertex(i + 1))

    @classmethod
    def from_vertices(cls, vertices, expected_angles=None) -> "Polygon":
        vertices = tuple(vertices)
        n = len(vertices)
        if n < 3:
            raise InputError("polygon needs at least 3 vertices")
        lengths = tuple(
            dist(vertices[i], vertices[(i + 1) % n]) for i in range(n)
        )
        if min(lengths) < 1e-12:
            raise InputError("consecutive vertices coincide")
        angles = tuple(
            angle_at(vertices[i], vertices[i - 1], vertices[(i + 1) % n])
            for i in range(n)
        )
        if expected_angles is not None:
            worst = max(abs(a - t) for a, t in zip(angles, expected_angles))
            if worst > 1e-8:
                raise NonConvexError(
                    f"vertex angles deviate from prescription by {worst:.3g}"
                )
        # convexity and embeddedness: every other vertex strictly left of
        # every directed edge geodesic
        for i in range(n):
            g = geodesic_through(vertices[i], vertices[(i + 1) % n])
            for j in range(n):
                if j in (i, (i + 1) % n):
                    continue
                if side_of(vertices[j], g) <= 0.0:
                    raise NonConvexError(
                        f"vertex {j} not left of edge {i}: polygon is not "
                        "convex and positively oriented"
                    )
        return cls(vertices, angles, lengths)


@dataclass(frozen=True)
class ModuliPoint:
    """A point of the edge-length moduli space of an angle spec."""

    free_lengths: tuple[float, ...]
    solved_lengths: tuple[float, ...]
    angle_spec: AngleSpec
    residual: float = field(default=0.0)

    def __post_init__(self):
        if len(self.free_lengths) != self.angle_spec.n - 3:
            raise InputError("free length count must be n - 3")
        if any(l <= 0 for l in self.free_lengths + self.solved_lengths):
            raise InputError("edge lengths must be positive")
        if self.residual >= CLOSE_TOL:
            raise InputError(f"closing residual {self.residual:.3g} too large")

    @property
    def lengths(self) -> tuple[float, ...]:
        return self.free_lengths + self.solved_lengths


def develop(spec: AngleSpec, lengths) -> tuple[list[HPoint], Isometry2]:
    """Develop the side chain of (angles, lengths) data.

    Returns the n+1 chain points (the last is the image of the start)
    and the holonomy defect, which is +-identity exactly when the chain
    closes into a polygon with the prescribed data.
    """
    lengths = tuple(float(l) for l in lengths)
    if len(lengths) != spec.n:
        raise InputError("need one length per edge")
    if any(l <= 0.0 for l in lengths):
        raise InputError("edge lengths must be positive")
    chain, d = kernels.develop_chain(spec.angles, lengths)
    return [HPoint(x, y) for x, y in chain], Isometry2(*d)


def closing_residual(spec: AngleSpec, lengths) -> float:
    """Max-norm of the three closing coordinates of the defect."""
    res, _ = kernels.closing_system(
        spec.angles, tuple(map(float, lengths)), spec.n - 3, spec.n - 2, spec.n - 1
    )
    return max(abs(r) for r in res)


def _solve3(jac, res):
    """Solve the 3x3 Newton system by Cramer; None if near-singular."""
    a, b, c, d, e, f, g, h, i = jac
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    r0 = math.sqrt(a * a + b * b + c * c)
    r1 = math.sqrt(d * d + e * e + f * f)
    r2 = math.sqrt(g * g + h * h + i * i)
    if abs(det) * _COND_LIMIT < r0 * r1 * r2 or det == 0.0:
        return None
    x, y, z = res
    dx = x * (e * i - f * h) - b * (y * i - f * z) + c * (y * h - e * z)
    dy = a * (y * i - f * z) - x * (d * i - f * g) + c * (d * z - y * g)
    dz = a * (e * z - y * h) - b * (d * z - y * g) + x * (d * h - e * g)
    return dx / det, dy / det, dz / det


def _newton_close(thetas, fixed, free_idx, solve_idx, guess, tol, max_iter):
    n = len(thetas)
    lengths = [0.0] * n
    for i, v in zip(free_idx, fixed):
        lengths[i] = v
    x = [math.log(g) for g in guess]
    best = None
    for _ in range(max_iter):
        for k, i in enumerate(solve_idx):
            if abs(x[k]) > 12.0:
                raise NewtonError("length iterate out of range")
            lengths[i] = math.exp(x[k])
        res, jac = kernels.closing_system(thetas, lengths, *solve_idx)
        norm = max(abs(r) for r in res)
        if norm < tol:
            return tuple(lengths), norm
        step = _solve3(jac, res)
        if step is None:
            raise NewtonError("closing Jacobian ill-conditioned")
        # backtracking: halve the step while the residual grows
        scale = 1.0
        for _ in range(30):
            trial = [xi - scale * si for xi, si in zip(x, step)]
            if max(abs(t) for t in trial) > 12.0:
                scale *= 0.5
                continue
            for k, i in enumerate(solve_idx):
                lengths[i] = math.exp(trial[k])
            new_res, _ = kernels.closing_system(thetas, lengths, *solve_idx)
            if max(abs(r) for r in new_res) < norm or scale < 1e-4:
                x = trial
                break
            scale *= 0.5
        else:
            raise NewtonError("step halving stalled")
        best = norm
    raise NewtonError(
        f"no convergence in {max_iter} iterations (residual {best:.3g})"
    )


def close(
    spec: AngleSpec,
    free_lengths,
    initial_guess,
    *,
    tol: float = CLOSE_TOL,
    max_iter: int = 50,
) -> Polygon:
    """Close the polygon: solve three edge lengths from the defect.

    ``free_lengths`` are the first n-3 edge lengths; the last three are
    solved by Newton iteration on three affine coordinates of the
    defect matrix, with lengths log-reparametrized (so no iterate can
    go negative) and step halving on residual increase.  If the
    Jacobian for the default triple is ill-conditioned, other
    contiguous length triples are tried.
    """
    free_lengths = tuple(float(l) for l in free_lengths)
    initial_guess = tuple(float(g) for g in initial_guess)
    n = spec.n
    if len(free_lengths) != n - 3:
        raise InputError(f"expected {n - 3} free lengths, got {len(free_lengths)}")
    if any(l <= 0.0 for l in free_lengths):
        raise InputError("free lengths must be positive")
    if len(initial_guess) != 3 or any(g <= 0.0 for g in initial_guess):
        raise InputError("initial guess must be 3 positive lengths")

    triples = [tuple(range(n - 3, n))]
    triples += [tuple((s + k) % n for k in range(3)) for s in range(n - 3)]
    failure: SolveError | None = None
    for solve_idx in triples:
        free_idx = [i for i in range(n) if i not in solve_idx]
        try:
            lengths, _ = _newton_close(
                spec.angles, free_lengths, free_idx, solve_idx,
                initial_guess, tol, max_iter,
            )
        except NewtonError as err:
            failure = err
            continue
        chain, defect = develop(spec, lengths)
        if defect.dist_to_identity() > 1e-8:
            failure = NewtonError("converged lengths do not close the chain")
            continue
        return Polygon.from_vertices(chain[:n], expected_angles=spec.angles)
    raise failure if failure is not None else NewtonError("closing failed")


def perimeter(polygon: Polygon) -> float:
    return sum(polygon.lengths)


def w_perimeter(polygon: Polygon, weights: WeightSpec) -> float:
    if len(weights.weights) != polygon.n:
        raise InputError("one weight per edge required")
    return sum(w * l for w, l in zip(weights.weights, polygon.lengths))


def point_inside(polygon: Polygon, p: HPoint) -> bool:
    """Strict interior test (left of every directed edge geodesic)."""
    return all(
        side_of(p, polygon.edge_geodesic(i)) > 1e-14 for i in range(polygon.n)
    )


@dataclass(frozen=True)
class EdgeDistance:
    distance: float
    foot: HPoint
    foot_on_edge: bool


def edge_distances_from_point(polygon: Polygon, p: HPoint) -> list[EdgeDistance]:
    """Distances from an interior point to the edge-carrying geodesics.

    Each entry records whether the perpendicular foot lies on the edge
    segment itself (it does at the characterizing center).
    """
    if not point_inside(polygon, p):
        raise InputError("point is not strictly inside the polygon")
    out = []
    for i in range(polygon.n):
        a, b = polygon.vertex(i), polygon.vertex(i + 1)
        d, foot = dist_to_geodesic(p, polygon.edge_geodesic(i))
        on_edge = dist(a, foot) + dist(foot, b) <= dist(a, b) + 1e-9
        out.append(EdgeDistance(d, foot, on_edge))
    return out


def area(polygon: Polygon) -> float:
    """Gauss-Bonnet area, (n-2) pi - sum of interior angles."""
    return (polygon.n - 2) * math.pi - sum(polygon.angles)


def triangulated_area(polygon: Polygon) -> float:
    """Area as a sum of fan triangles (each pi minus its angle sum)."""
    total = 0.0
    v = polygon.vertices
    for i in range(1, polygon.n - 1):
        corners = (v[0], v[i], v[i + 1])
        s = sum(
            angle_at(corners[k], corners[(k + 1) % 3], corners[(k + 2) % 3])
            for k in range(3)
        )
        total += math.pi - s
    return total


def moduli_point(spec: AngleSpec, polygon: Polygon) -> ModuliPoint:
    res = closing_residual(spec, polygon.lengths)
    return ModuliPoint(
        polygon.lengths[: spec.n - 3], polygon.lengths[spec.n - 3 :], spec, res
    )


def polygon_to_obj(polygon: Polygon) -> dict:
    """JSON-ready dict: {angles, lengths, vertices}."""
    return {
        "angles": list(polygon.angles),
        "lengths": list(polygon.lengths),
        "vertices": [[v.x, v.y] for v in polygon.vertices],
    }


def polygon_from_obj(obj: dict) -> Polygon:
    try:
        vertices = [HPoint(float(x), float(y)) for x, y in obj["vertices"]]
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"malformed polygon object: {err}") from err
    return Polygon.from_vertices(vertices)
