"""Perimeter-minimizing polygons with prescribed angles.

Two independent routes to the same polygon:

* the geometric characterization -- the unweighted minimizer is the
  unique polygon with an inscribed circle tangent to every edge, and
  the weighted minimizer the unique one with an interior point whose
  edge distances satisfy sinh(d_i) = c * w_i -- reduced to scalar root
  finding by kite/right-triangle trigonometry (see README for the
  derivation);
* a derivative-free multi-start search over the edge-length moduli
  space, used as a brute-force oracle.

Both enforce angles <= pi/2 unless ``allow_obtuse`` is passed; obtuse
prescriptions are outside the supported theory and labeled as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sciopt

from .errors import InputError, SolveError
from .halfplane import (
    HPoint,
    apply,
    dist,
    dist_to_geodesic,
    midpoint,
    rotation_about,
)
from .polygons import (
    AngleSpec,
    Polygon,
    WeightSpec,
    close,
    develop,
    edge_distances_from_point,
    point_inside,
    w_perimeter,
)

_CENTER = HPoint(0.0, 1.0)


@dataclass(frozen=True)
class IncircleSolution:
    """Tangent-circle characterization data of the perimeter minimizer."""

    r: float
    psi: tuple[float, ...]
    polygon: Polygon
    center: HPoint


@dataclass(frozen=True)
class WeightedCenterSolution:
    """sinh-proportional center data of the weighted minimizer."""

    c: float
    distances: tuple[float, ...]
    center: HPoint
    polygon: Polygon


@dataclass(frozen=True)
class HessianReport:
    """Finite-difference criticality data over the free edge lengths."""

    matrix: np.ndarray
    min_eigenvalue: float
    gradient_norm: float
    step: float


def _require_acute(spec: AngleSpec, allow_obtuse: bool):
    if not allow_obtuse and not spec.all_acute:
        raise InputError(
            "angles above pi/2 are outside the supported range; pass "
            "allow_obtuse=True to proceed at your own risk"
        )


def incircle_equation(angles, r: float) -> float:
    """Tangency equation g(r) = sum(asin(cos(theta_i/2)/cosh r)) - pi.

    g is strictly decreasing in r and g(0+) = (sum(pi - theta) - 2 pi)/2,
    so a positive root exists exactly when the angle list is hyperbolic.
    Takes a raw angle list so the boundary case can be probed directly.
    """
    ch = math.cosh(r)
    return sum(math.asin(math.cos(t / 2.0) / ch) for t in angles) - math.pi


def _clamped_asin(x: float) -> float:
    return math.asin(min(1.0, max(-1.0, x)))


def _clamped_acosh(x: float) -> float:
    return math.acosh(max(1.0, x))


def _assemble_from_center(gaps, ray_lengths, spec) -> Polygon:
    """Place vertices on rays from (0, 1); gaps[i] separates ray i, i+1."""
    vertices = []
    phi = 0.0
    for i, h in enumerate(ray_lengths):
        g = rotation_about(_CENTER, phi - math.pi / 2.0)
        vertices.append(apply(g, HPoint(0.0, math.exp(h))))
        phi += gaps[i]
    return Polygon.from_vertices(vertices, expected_angles=spec.angles)


def _check_round_trip(spec: AngleSpec, polygon: Polygon):
    _, defect = develop(spec, polygon.lengths)
    gap = defect.dist_to_identity()
    if gap > 1e-8:
        raise SolveError(f"assembled polygon fails to re-develop (defect {gap:.3g})")


def solve_incircle(spec: AngleSpec, *, allow_obtuse: bool = False) -> IncircleSolution:
    """Perimeter minimizer via the inscribed-circle characterization.

    The polygon decomposes into kites around the incenter: the kite at
    vertex i is split by its diagonal into two congruent right
    triangles with angle theta_i/2 at the vertex, central half-angle
    psi_i, and leg r on the edge side, whence
    cos(theta_i/2) = cosh(r) sin(psi_i).  The inradius is the unique
    root of the central-angle budget sum(psi_i) = pi, found by
    bisection.
    """
    _require_acute(spec, allow_obtuse)
    lo, hi = 1e-9, 50.0
    glo = incircle_equation(spec.angles, lo)
    assert glo > 0.0, "unreachable for a validated spec"
    if incircle_equation(spec.angles, hi) >= 0.0:
        raise SolveError("no sign change for the inradius in (1e-9, 50)")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if incircle_equation(spec.angles, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    ch = math.cosh(r)
    psi = tuple(_clamped_asin(math.cos(t / 2.0) / ch) for t in spec.angles)
    # tangent length and center distance at each vertex (Pythagoras:
    # cosh h = cosh r cosh b)
    tangent = [
        _clamped_acosh(math.cos(s) / math.sin(t / 2.0))
        for s, t in zip(psi, spec.angles)
    ]
    ray_lengths = [math.acosh(ch * math.cosh(b)) for b in tangent]
    n = spec.n
    gaps = [psi[i] + psi[(i + 1) % n] for i in range(n)]
    polygon = _assemble_from_center(gaps, ray_lengths, spec)
    _check_round_trip(spec, polygon)
    for e in edge_distances_from_point(polygon, _CENTER):
        if abs(e.distance - r) > 1e-8 or not e.foot_on_edge:
            raise SolveError("incircle tangency check failed after assembly")
    return IncircleSolution(r, psi, polygon, _CENTER)


class _InnerInfeasible(Exception):
    pass


def _vertex_split(theta: float, d_left: float, d_right: float):
    """Split angle theta at a vertex seen from the center.

    Solves for the vertex-to-center distance h from
    gamma + gamma' = theta with sin(gamma) = sinh(d_left)/sinh(h) and
    sin(gamma') = sinh(d_right)/sinh(h) (right triangles over the two
    perpendicular feet).  Returns (gamma, gamma', h).
    """
    sl, sr = math.sinh(d_left), math.sinh(d_right)

    def gap(h):
        sh = math.sinh(h)
        return _clamped_asin(sl / sh) + _clamped_asin(sr / sh) - theta

    lo = max(d_left, d_right) * (1.0 + 1e-14) + 1e-300
    if gap(lo) < 0.0:
        raise _InnerInfeasible
    hi = max(d_left, d_right) + 1.0
    while gap(hi) > 0.0:
        hi *= 2.0
        if hi > 1e8:
            raise _InnerInfeasible
    h = sciopt.brentq(gap, lo, hi, xtol=1e-15, rtol=8.9e-16)
    sh = math.sinh(h)
    return _clamped_asin(sl / sh), _clamped_asin(sr / sh), h


def solve_weighted(
    spec: AngleSpec, weights: WeightSpec, *, allow_obtuse: bool = False
) -> WeightedCenterSolution:
    """Weighted-perimeter minimizer via the sinh-proportional center.

    Outer bisection on the scale c: given c, the distance to edge i is
    d_i = asinh(c w_i); each vertex angle is split by the diagonal to
    the center (``_vertex_split``), and right-triangle identities
    cos(gamma) = cosh(d) sin(alpha) convert the splits into central
    angles.  c is correct when the central angles sum to 2 pi.
    """
    _require_acute(spec, allow_obtuse)
    n = spec.n
    if len(weights.weights) != n:
        raise InputError("one weight per edge required")

    def layout(c):
        d = [math.asinh(c * w) for w in weights.weights]
        splits = [
            _vertex_split(spec.angles[i], d[i - 1], d[i]) for i in range(n)
        ]
        alpha = []
        for i, (gl, gr, _) in enumerate(splits):
            alpha.append(
                (
                    _clamped_asin(math.cos(gl) / math.cosh(d[i - 1])),
                    _clamped_asin(math.cos(gr) / math.cosh(d[i])),
                )
            )
        return d, splits, alpha

    def total_angle(c):
        try:
            _, _, alpha = layout(c)
        except _InnerInfeasible:
            return -1.0  # c too large for these angles; shrink
        return sum(al + ar for al, ar in alpha) - 2.0 * math.pi

    lo = 1e-9
    if total_angle(lo) <= 0.0:
        raise SolveError("weighted center equation has no small-scale bracket")
    hi = 1.0
    while total_angle(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise SolveError("weighted center equation unsolvable below c = 1e6")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if total_angle(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    c = lo  # feasible side
    d, splits, alpha = layout(c)
    gaps = [alpha[i][1] + alpha[(i + 1) % n][0] for i in range(n)]
    ray_lengths = [h for (_, _, h) in splits]
    polygon = _assemble_from_center(gaps, ray_lengths, spec)
    _check_round_trip(spec, polygon)
    feet = edge_distances_from_point(polygon, _CENTER)
    for e, di in zip(feet, d):
        if abs(e.distance - di) > 1e-8 or not e.foot_on_edge:
            raise SolveError("weighted tangency check failed after assembly")
    return WeightedCenterSolution(c, tuple(d), _CENTER, polygon)


_BASE_LENGTH_GRID = (0.8, 1.0, 1.2, 0.6, 1.5, 0.4, 2.0, 0.3, 3.0, 0.2, 5.0, 0.1)


class _Closer:
    """Closing map with a warm-started Newton guess; inf on failure."""

    def __init__(self, spec, weights):
        self.spec = spec
        self.weights = weights
        self.warm: tuple[float, float, float] | None = None
        self.failures = 0

    def close(self, free) -> Polygon | None:
        guesses = [self.warm] if self.warm else []
        guesses += [(1.0, 1.0, 1.0), (0.5, 0.5, 0.5), (2.0, 2.0, 2.0)]
        for g in guesses:
            try:
                p = close(self.spec, free, g)
            except SolveError:
                continue
            self.warm = p.lengths[-3:]
            return p
        self.failures += 1
        return None

    def objective(self, u) -> float:
        p = self.close(tuple(math.exp(v) for v in u))
        if p is None:
            return math.inf
        return w_perimeter(p, self.weights)


def optimize_oracle(
    spec: AngleSpec,
    weights: WeightSpec | None = None,
    *,
    seed: int = 0,
    starts: int = 8,
) -> Polygon:
    """Brute-force minimizer over the moduli space, independent of the
    geometric characterization.

    Multi-start coordinate descent with shrinking steps over the logs
    of the n-3 free edge lengths (feasibility via the Newton closing
    map), followed by a finite-difference gradient polish.
    Deterministic for a fixed seed; ties between starts are broken by
    the lexicographically smallest free-length vector.
    """
    weights = weights or WeightSpec.ones(spec.n)
    if len(weights.weights) != spec.n:
        raise InputError("one weight per edge required")
    rng = np.random.default_rng(seed)
    closer = _Closer(spec, weights)

    base = None
    for L in _BASE_LENGTH_GRID:
        try:
            close(spec, (L,) * (spec.n - 3), (L, L, L))
        except SolveError:
            continue
        base = math.log(L)
        break
    if base is None:
        for _ in range(200):
            u = rng.uniform(math.log(0.05), math.log(5.0), size=spec.n - 3)
            if math.isfinite(closer.objective(u)):
                base = float(np.mean(u)) if spec.n > 3 else 0.0
                break
    if base is None:
        raise SolveError(
            f"all starts failed to close ({closer.failures} attempts) for "
            f"angles {spec.angles}"
        )

    dim = spec.n - 3
    if dim == 0:
        p = closer.close(())
        if p is None:
            raise SolveError("triangle closing failed")
        return p

    def search(u0):
        u = list(u0)
        f = closer.objective(u)
        if not math.isfinite(f):
            return f, u
        step = 0.25
        evals = 0
        while step > 1e-6 and evals < 4000:
            improved = False
            for k in range(dim):
                for s in (step, -step):
                    trial = list(u)
                    trial[k] += s
                    ft = closer.objective(trial)
                    evals += 1
                    if ft < f:
                        u, f = trial, ft
                        improved = True
            if not improved:
                step *= 0.5
        # gradient polish
        h = 1e-5
        for _ in range(25):
            grad = []
            for k in range(dim):
                up, um = list(u), list(u)
                up[k] += h
                um[k] -= h
                grad.append((closer.objective(up) - closer.objective(um)) / (2 * h))
            gn = math.sqrt(sum(g * g for g in grad))
            if not math.isfinite(gn) or gn < 1e-9:
                break
            scale = min(0.1, 0.5 / gn)
            while scale > 1e-12:
                trial = [ui - scale * gi for ui, gi in zip(u, grad)]
                ft = closer.objective(trial)
                if ft < f:
                    u, f = trial, ft
                    break
                scale *= 0.5
            else:
                break
        return f, u

    points = [[base] * dim]
    for _ in range(max(0, starts - 1)):
        points.append(list(base + rng.normal(0.0, 0.45, size=dim)))

    results = []
    for u0 in points:
        closer.warm = None
        f, u = search(u0)
        if math.isfinite(f):
            results.append((f, tuple(math.exp(v) for v in u)))
    if not results:
        raise SolveError(
            f"all starts failed to close ({closer.failures} attempts)"
        )
    fbest = min(f for f, _ in results)
    ties = sorted(free for f, free in results if f <= fbest + 1e-9)
    best = closer.close(ties[0])
    if best is None:
        raise SolveError("winning start failed to re-close")
    return best


def criticality_report(
    polygon: Polygon, weights: WeightSpec, *, step: float = 1e-4
) -> HessianReport:
    """Central-difference gradient and Hessian of the weighted perimeter
    over the free edge lengths at ``polygon``.

    At a minimizer the gradient norm is < 1e-5 and the Hessian is
    positive definite.  For triangles the moduli space is a point and
    the report is trivially critical.
    """
    spec = AngleSpec(polygon.angles)
    dim = spec.n - 3
    closer = _Closer(spec, weights)
    closer.warm = polygon.lengths[-3:]
    base = list(polygon.lengths[:dim])

    def f(v):
        p = closer.close(v)
        if p is None:
            raise SolveError("closing failed at a finite-difference probe")
        return w_perimeter(p, weights)

    if dim == 0:
        return HessianReport(np.zeros((0, 0)), math.inf, 0.0, step)

    f0 = f(base)
    fp, fm = np.zeros(dim), np.zeros(dim)
    for k in range(dim):
        vp, vm = list(base), list(base)
        vp[k] += step
        vm[k] -= step
        fp[k], fm[k] = f(vp), f(vm)
    grad = (fp - fm) / (2.0 * step)
    hess = np.zeros((dim, dim))
    for k in range(dim):
        hess[k, k] = (fp[k] - 2.0 * f0 + fm[k]) / step**2
        for l in range(k + 1, dim):
            vpp, vpm, vmp, vmm = (list(base) for _ in range(4))
            vpp[k] += step; vpp[l] += step
            vpm[k] += step; vpm[l] -= step
            vmp[k] -= step; vmp[l] += step
            vmm[k] -= step; vmm[l] -= step
            hess[k, l] = hess[l, k] = (
                f(vpp) - f(vpm) - f(vmp) + f(vmm)
            ) / (4.0 * step**2)
    min_eig = float(np.linalg.eigvalsh(hess).min())
    return HessianReport(hess, min_eig, float(np.linalg.norm(grad)), step)


def _interior_seed(polygon: Polygon) -> HPoint:
    if polygon.n == 3:
        m = midpoint(polygon.vertices[0], polygon.vertices[1])
        p = midpoint(m, polygon.vertices[2])
    else:
        p = midpoint(polygon.vertices[0], polygon.vertices[polygon.n // 2])
    if not point_inside(polygon, p):
        raise SolveError("failed to find an interior starting point")
    return p


def _distance_ratios(polygon: Polygon, p: HPoint, weights: WeightSpec):
    ratios = []
    for i in range(polygon.n):
        a, b = polygon.vertex(i), polygon.vertex(i + 1)
        d, foot = dist_to_geodesic(p, polygon.edge_geodesic(i))
        if dist(a, foot) + dist(foot, b) > dist(a, b) + 1e-9:
            d = min(dist(p, a), dist(p, b))  # foot off the edge: clamp
        ratios.append(math.sinh(d) / weights.weights[i])
    return ratios


def _minimize_spread(polygon: Polygon, weights: WeightSpec):
    if len(weights.weights) != polygon.n:
        raise InputError("one weight per edge required")
    seed = _interior_seed(polygon)

    def spread(x):
        try:
            p = HPoint(x[0], x[1])
        except InputError:
            return 10.0
        if not point_inside(polygon, p):
            return 10.0 + abs(x[0] - seed.x) + abs(x[1] - seed.y)
        r = _distance_ratios(polygon, p, weights)
        return (max(r) - min(r)) / (sum(r) / len(r))

    res = sciopt.minimize(
        spread,
        [seed.x, seed.y],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
    )
    return float(res.fun), HPoint(res.x[0], res.x[1])


def verify_characterization(polygon: Polygon, weights: WeightSpec) -> float:
    """Minimized relative spread of sinh(d_i)/w_i over interior points.

    Near zero exactly when the polygon is the weighted-perimeter
    minimizer; perturbed polygons score > 1e-3.
    """
    return _minimize_spread(polygon, weights)[0]


def characterization_center(polygon: Polygon, weights: WeightSpec) -> HPoint:
    """The interior point realizing ``verify_characterization``."""
    return _minimize_spread(polygon, weights)[1]
