"""Upper half-plane model of the hyperbolic plane.

Conventions, fixed once for the whole package:

* points are ``HPoint(x, y)`` with ``y > 0``;
* ideal boundary points are projective pairs ``(a, b)`` meaning
  ``a/b``, with ``(1, 0)`` the point at infinity;
* geodesics are oriented, from ``p_minus`` toward ``p_plus``;
* orientation-preserving isometries are unit-determinant real 2x2
  matrices acting as fractional-linear maps, with the sign chosen so
  that the first nonzero entry (row-major) is positive;
* angles are unsigned Riemannian angles in ``(0, pi]`` unless a signed
  convention is stated locally.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateError, InputError

INF = math.inf

#: absolute tolerance for geometric predicates on unit-scale quantities
GEOM_TOL = 1e-10

_DET_TOL = 1e-6


def is_infinite(z) -> bool:
    """True if ``z`` denotes the boundary point at infinity."""
    if isinstance(z, complex):
        return cmath.isinf(z)
    return math.isinf(z)


@dataclass(frozen=True)
class HPoint:
    """Point of the hyperbolic plane, upper half-plane coordinates."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError("HPoint coordinates must be finite")
        if self.y <= 0:
            raise InputError(f"HPoint needs y > 0, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class BoundaryPoint:
    """Ideal boundary point as a projective pair a/b in R u {inf}.

    Canonical form: b >= 0, max(|a|, |b|) = 1, and a > 0 when b = 0.
    """

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if a == 0.0 and b == 0.0:
            raise InputError("BoundaryPoint (0, 0) is not projective")
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InputError("BoundaryPoint entries must be finite")
        if b < 0.0 or (b == 0.0 and a < 0.0):
            a, b = -a, -b
        scale = max(abs(a), abs(b))
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "b", b / scale)

    @classmethod
    def from_value(cls, v: float) -> "BoundaryPoint":
        return cls(1.0, 0.0) if math.isinf(v) else cls(float(v), 1.0)

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(1.0, 0.0)

    @property
    def is_infinity(self) -> bool:
        return self.b == 0.0

    def value(self) -> float:
        """The point as a float, math.inf for the point at infinity."""
        return INF if self.b == 0.0 else self.a / self.b

    def close_to(self, other: "BoundaryPoint", tol: float = GEOM_TOL) -> bool:
        # |cross product| of the projective pairs, both of unit sup-norm
        return abs(self.a * other.b - other.a * self.b) <= tol


@dataclass(frozen=True)
class Geodesic:
    """Oriented complete geodesic, from ``p_minus`` toward ``p_plus``."""

    p_minus: BoundaryPoint
    p_plus: BoundaryPoint

    def __post_init__(self):
        if self.p_minus.close_to(self.p_plus, tol=0.0):
            raise InputError("geodesic endpoints must be distinct")

    @classmethod
    def from_endpoints(cls, u: float, v: float) -> "Geodesic":
        return cls(BoundaryPoint.from_value(u), BoundaryPoint.from_value(v))

    @property
    def is_vertical(self) -> bool:
        return self.p_minus.is_infinity or self.p_plus.is_infinity

    def reversed(self) -> "Geodesic":
        return Geodesic(self.p_plus, self.p_minus)

    def circle(self) -> tuple[float, float]:
        """(center, radius) of the supporting semicircle; InputError if vertical."""
        if self.is_vertical:
            raise InputError("vertical geodesic has no supporting circle")
        u, v = self.p_minus.value(), self.p_plus.value()
        return (u + v) / 2.0, abs(v - u) / 2.0

    def foot_x(self) -> float:
        """x-coordinate of a vertical geodesic's finite endpoint."""
        if not self.is_vertical:
            raise InputError("not a vertical geodesic")
        p = self.p_plus if self.p_minus.is_infinity else self.p_minus
        return p.value()

    def contains(self, p: HPoint, tol: float = 1e-12) -> bool:
        scale = 1.0 + abs(p.x) + p.y
        if self.is_vertical:
            return abs(p.x - self.foot_x()) <= tol * scale
        c, r = self.circle()
        return abs(math.hypot(p.x - c, p.y) - r) <= tol * scale


@dataclass(frozen=True)
class Segment:
    """Geodesic segment between two distinct points."""

    a: HPoint
    b: HPoint

    def __post_init__(self):
        if self.a == self.b:
            raise InputError("segment endpoints must be distinct")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


@dataclass(frozen=True)
class Isometry2:
    """Orientation-preserving isometry as a sign-canonical PSL2(R) matrix."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or det <= 0 or abs(det - 1.0) > _DET_TOL:
            raise InputError(f"matrix is not in SL2(R): det={det}")
        s = 1.0 / math.sqrt(det)
        a, b, c, d = self.a * s, self.b * s, self.c * s, self.d * s
        for e in (a, b, c, d):
            if e != 0.0:
                if e < 0.0:
                    a, b, c, d = -a, -b, -c, -d
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "Isometry2":
        return cls(1.0, 0.0, 0.0, 1.0)

    def __matmul__(self, other: "Isometry2") -> "Isometry2":
        return Isometry2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Isometry2":
        return Isometry2(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def dist_to_identity(self) -> float:
        """Max-norm distance to +-identity (sign already canonical)."""
        return max(abs(self.a - 1.0), abs(self.b), abs(self.c), abs(self.d - 1.0))


def dist(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance: cosh d = 1 + |p - q|^2 / (2 p_y q_y)."""
    u = ((p.x - q.x) ** 2 + (p.y - q.y) ** 2) / (2.0 * p.y * q.y)
    # acosh(1 + u) computed stably for small u
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


def apply(g: Isometry2, p: HPoint) -> HPoint:
    """Fractional-linear action of ``g`` on the upper half-plane."""
    w = (g.a * p.z + g.b) / (g.c * p.z + g.d)
    return HPoint(w.real, w.imag)


def apply_boundary(g: Isometry2, p: BoundaryPoint) -> BoundaryPoint:
    return BoundaryPoint(g.a * p.a + g.b * p.b, g.c * p.a + g.d * p.b)


def apply_geodesic(g: Isometry2, geo: Geodesic) -> Geodesic:
    return Geodesic(apply_boundary(g, geo.p_minus), apply_boundary(g, geo.p_plus))


def geodesic_through(p: HPoint, q: HPoint) -> Geodesic:
    """The complete geodesic through two distinct points.

    Oriented from the ideal endpoint nearer ``p``, so that traveling
    from ``p`` to ``q`` follows the orientation.
    """
    if p == q:
        raise InputError("coincident points do not span a geodesic")
    if abs(p.x - q.x) <= 1e-14 * (1.0 + abs(p.x)):
        x = p.x
        lo, hi = BoundaryPoint.from_value(x), BoundaryPoint.infinity()
        return Geodesic(lo, hi) if q.y > p.y else Geodesic(hi, lo)
    # center on the real axis equidistant (Euclidean) from p and q
    c = (q.x**2 + q.y**2 - p.x**2 - p.y**2) / (2.0 * (q.x - p.x))
    r = math.hypot(p.x - c, p.y)
    left, right = BoundaryPoint.from_value(c - r), BoundaryPoint.from_value(c + r)
    return Geodesic(left, right) if q.x > p.x else Geodesic(right, left)


def direction_at(g: Geodesic, p: HPoint) -> tuple[float, float]:
    """Unit Euclidean tangent of ``g`` at ``p`` pointing toward ``p_plus``.

    Euclidean and Riemannian angles agree (the model is conformal), so
    this is the right vector for angle computations.
    """
    if g.is_vertical:
        return (0.0, 1.0) if g.p_plus.is_infinity else (0.0, -1.0)
    c, _ = g.circle()
    n = math.hypot(p.y, p.x - c)
    if g.p_plus.value() > g.p_minus.value():
        return (p.y / n, (c - p.x) / n)
    return (-p.y / n, (p.x - c) / n)


def side_of(p: HPoint, g: Geodesic) -> float:
    """Signed side of ``p`` relative to oriented ``g``: > 0 means left."""
    if g.is_vertical:
        s = g.foot_x() - p.x
        return s if g.p_plus.is_infinity else -s
    c, r = g.circle()
    s = (p.x - c) ** 2 + p.y**2 - r * r
    return s if g.p_plus.value() > g.p_minus.value() else -s


def angle_at(vertex: HPoint, a: HPoint, b: HPoint) -> float:
    """Riemannian angle in (0, pi] at ``vertex`` between rays to a and b."""
    if a == vertex or b == vertex:
        raise InputError("angle_at needs points distinct from the vertex")
    ux, uy = direction_at(geodesic_through(vertex, a), vertex)
    vx, vy = direction_at(geodesic_through(vertex, b), vertex)
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    ang = math.atan2(abs(cross), dot)
    return math.pi if ang == 0.0 and dot < 0.0 else ang


def ccw_angle(u: tuple[float, float], v: tuple[float, float]) -> float:
    """Counterclockwise angle from ``u`` to ``v`` in [0, 2 pi)."""
    ang = math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])
    return ang if ang >= 0.0 else ang + 2.0 * math.pi


def mobius_to_standard(g: Geodesic) -> Isometry2:
    """Isometry sending ``g`` to the upward imaginary axis (0 -> inf)."""
    am, bm = g.p_minus.a, g.p_minus.b
    ap, bp = g.p_plus.a, g.p_plus.b
    # rows (b-, -a-) and (b+, -a+) send p- to 0 and p+ to inf
    a, b, c, d = bm, -am, bp, -ap
    det = a * d - b * c
    if det < 0:
        a, b = -a, -b
        det = -det
    s = 1.0 / math.sqrt(det)
    return Isometry2(a * s, b * s, c * s, d * s)


def dist_to_geodesic(p: HPoint, g: Geodesic) -> tuple[float, HPoint]:
    """Distance from ``p`` to ``g`` and the foot of the perpendicular."""
    m = mobius_to_standard(g)
    w = apply(m, p)
    d = math.asinh(abs(w.x) / w.y)
    foot = apply(m.inverse(), HPoint(0.0, math.hypot(w.x, w.y)))
    return d, foot


def midpoint(p: HPoint, q: HPoint) -> HPoint:
    """Geodesic midpoint of two points."""
    m = mobius_to_standard(geodesic_through(p, q))
    a, b = apply(m, p), apply(m, q)
    return apply(m.inverse(), HPoint(0.0, math.sqrt(a.y * b.y)))


def translation_along(g: Geodesic, length: float) -> Isometry2:
    """Hyperbolic translation of signed ``length`` along oriented ``g``."""
    if not math.isfinite(length):
        raise InputError("translation length must be finite")
    m = mobius_to_standard(g)
    e = math.exp(length / 2.0)
    return m.inverse() @ Isometry2(e, 0.0, 0.0, 1.0 / e) @ m


def rotation_about(p: HPoint, phi: float) -> Isometry2:
    """Rotation by ``phi`` (counterclockwise) about ``p``."""
    if not -2.0 * math.pi < phi < 2.0 * math.pi:
        raise InputError("rotation angle must lie in (-2 pi, 2 pi)")
    s = math.sqrt(p.y)
    m = Isometry2(s, p.x / s, 0.0, 1.0 / s)  # sends i to p
    ch, sh = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return m @ Isometry2(ch, sh, -sh, ch) @ m.inverse()


def _proj_pair(z) -> tuple[complex, complex]:
    if is_infinite(z):
        return complex(1.0), complex(0.0)
    return complex(z), complex(1.0)


def cross_ratio(z1, z2, z3, z4):
    """Cross ratio (z1-z3)(z2-z4) / ((z2-z3)(z1-z4)) on C u {inf}.

    Arguments may be complex numbers or math.inf; infinities are handled
    projectively rather than by limits of floats.  Returns a complex
    number, or math.inf when the value is the point at infinity.
    """
    pairs = [_proj_pair(z) for z in (z1, z2, z3, z4)]

    def pdiff(i, j):
        (ai, bi), (aj, bj) = pairs[i], pairs[j]
        return ai * bj - aj * bi

    num = pdiff(0, 2) * pdiff(1, 3)
    den = pdiff(1, 2) * pdiff(0, 3)
    if den == 0:
        if num == 0:
            raise DegenerateError("indeterminate cross-ratio (0/0)")
        return INF
    return num / den
