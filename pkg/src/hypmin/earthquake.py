"""Shear (left-earthquake) deformations along weighted disjoint geodesics.

A reference segment sigma is crossed transversally by finitely many
disjoint weighted geodesics (the faults).  The parameter-t shear
translates the far side of each fault by t times its weight; the
deformed length of sigma is read off by composing the fault
translations in crossing order.  Closed forms for the first and second
t-derivatives at t = 0 are

    d|sigma|/dt   = sum_j m_j cos(theta_j)
    d2|sigma|/dt2 = sum_{p,q} m_p m_q cosh|s+_pq| cosh|s-_pq|
                    sin(theta_p) sin(theta_q) / sinh|sigma|

with theta the angle from fault to segment measured counterclockwise
(fault orientation normalized so theta is in (0, pi)), and s+_pq, s-_pq
the two outer components of sigma minus the closed span of the two
crossings (the two subsegments at the crossing when p = q).  Both are
validated against finite differences of the composed-translation
length, which is the independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, TangencyError
from .halfplane import (
    Geodesic,
    HPoint,
    Segment,
    apply,
    ccw_angle,
    direction_at,
    dist,
    geodesic_through,
    mobius_to_standard,
    side_of,
    translation_along,
)


@dataclass(frozen=True)
class Multicurve:
    """Disjoint weighted geodesics (finitely many, positive weights)."""

    components: tuple[tuple[Geodesic, float], ...]

    def __init__(self, components):
        components = tuple((g, float(m)) for g, m in components)
        for _, m in components:
            if not (m > 0.0 and math.isfinite(m)):
                raise InputError(f"fault weights must be positive, got {m}")
        for i in range(len(components)):
            for j in range(i + 1, len(components)):
                _check_disjoint(components[i][0], components[j][0])
        object.__setattr__(self, "components", components)


def _circle_positions(g: Geodesic) -> tuple[float, float]:
    # boundary circle position in [0, 2 pi): doubled RP1 angle of (a, b)
    out = []
    for p in (g.p_minus, g.p_plus):
        out.append((2.0 * math.atan2(p.b, p.a)) % (2.0 * math.pi))
    return out[0], out[1]


def _check_disjoint(g1: Geodesic, g2: Geodesic):
    for p in (g1.p_minus, g1.p_plus):
        for q in (g2.p_minus, g2.p_plus):
            if p.close_to(q, tol=1e-12):
                raise InputError("faults not disjoint: shared endpoint")
    x1, x2 = _circle_positions(g1)
    y1, y2 = _circle_positions(g2)
    span = (x2 - x1) % (2.0 * math.pi)
    inside = sum(1 for y in (y1, y2) if 0.0 < (y - x1) % (2.0 * math.pi) < span)
    if inside == 1:
        raise InputError("faults not disjoint: endpoints are linked")


@dataclass(frozen=True)
class CrossingData:
    """One transversal crossing of the reference segment.

    ``theta`` is the counterclockwise angle from the (normalized) fault
    orientation to the segment direction a -> b, always in (0, pi);
    ``s_minus``/``s_plus`` are the subsegment lengths toward a and b.
    ``fault`` keeps the normalized orientation used for the shear.
    """

    point: HPoint
    theta: float
    s_plus: float
    s_minus: float
    fault: Geodesic
    weight: float = 1.0


def intersect(sigma: Segment, g: Geodesic, weight: float = 1.0) -> CrossingData:
    """Crossing data of a fault with the open reference segment."""
    sa, sb = side_of(sigma.a, g), side_of(sigma.b, g)
    scale = 1e-12 * (1.0 + abs(sa) + abs(sb))
    if abs(sa) <= scale or abs(sb) <= scale or (sa > 0) == (sb > 0):
        raise InputError("fault does not cross the open segment")
    m = mobius_to_standard(g)
    a, b = apply(m, sigma.a), apply(m, sigma.b)
    # images straddle x = 0, so their geodesic is a semicircle over it
    c = (b.x**2 + b.y**2 - a.x**2 - a.y**2) / (2.0 * (b.x - a.x))
    r2 = (a.x - c) ** 2 + a.y**2
    point = apply(m.inverse(), HPoint(0.0, math.sqrt(r2 - c * c)))
    u = direction_at(geodesic_through(sigma.a, sigma.b), point)
    v = direction_at(g, point)
    phi = ccw_angle(v, u)
    fault = g
    if phi > math.pi:
        phi -= math.pi
        fault = g.reversed()
    if min(phi, math.pi - phi) < 1e-6:
        raise TangencyError("fault is tangent to the segment")
    return CrossingData(
        point=point,
        theta=phi,
        s_plus=dist(point, sigma.b),
        s_minus=dist(sigma.a, point),
        fault=fault,
        weight=weight,
    )


@dataclass(frozen=True)
class EarthquakeConfig:
    """Reference segment, multicurve, and the ordered crossing data."""

    sigma: Segment
    lam: Multicurve
    crossings: tuple[CrossingData, ...]

    @classmethod
    def build(cls, sigma: Segment, lam: Multicurve) -> "EarthquakeConfig":
        crossings = sorted(
            (intersect(sigma, g, m) for g, m in lam.components),
            key=lambda c: c.s_minus,
        )
        return cls(sigma, lam, tuple(crossings))

    @property
    def length(self) -> float:
        return self.sigma.length


def earthquake_length(cfg: EarthquakeConfig, t: float) -> float:
    """Length of the sheared segment at parameter t.

    The far endpoint is pulled back through the fault translations,
    nearest fault first; each fault translates by t times its weight in
    its normalized orientation.
    """
    if cfg.crossings:
        if abs(t) * max(c.weight for c in cfg.crossings) >= 10.0:
            raise InputError("t out of guard range (|t| max(m) < 10)")
    if t == 0.0 or not cfg.crossings:
        return cfg.length
    phi = None
    for c in cfg.crossings:
        step = translation_along(c.fault, t * c.weight)
        phi = step if phi is None else phi @ step
    return dist(cfg.sigma.a, apply(phi, cfg.sigma.b))


def first_derivative(cfg: EarthquakeConfig) -> float:
    """Closed-form d|sigma|/dt at t = 0: sum of m cos(theta)."""
    return sum(c.weight * math.cos(c.theta) for c in cfg.crossings)


def second_derivative(cfg: EarthquakeConfig) -> float:
    """Closed-form d2|sigma|/dt2 at t = 0 (see module docstring)."""
    sh = math.sinh(cfg.length)
    total = 0.0
    for p in cfg.crossings:
        for q in cfg.crossings:
            if p is q:
                outer = math.cosh(p.s_minus) * math.cosh(p.s_plus)
            else:
                near, far = (p, q) if p.s_minus <= q.s_minus else (q, p)
                outer = math.cosh(near.s_minus) * math.cosh(far.s_plus)
            total += (
                p.weight * q.weight * outer
                * math.sin(p.theta) * math.sin(q.theta) / sh
            )
    return total


def intersection_number(cfg: EarthquakeConfig) -> float:
    """Total transverse measure: sum of the crossing weights."""
    return sum(c.weight for c in cfg.crossings)


def fd_first_derivative(cfg: EarthquakeConfig, step: float = 1e-5) -> float:
    """Central finite difference of the shear length at t = 0."""
    return (earthquake_length(cfg, step) - earthquake_length(cfg, -step)) / (
        2.0 * step
    )


def fd_second_derivative(cfg: EarthquakeConfig, step: float = 1e-3) -> float:
    """Richardson-extrapolated central second difference at t = 0."""

    def d2(h):
        return (
            earthquake_length(cfg, h)
            - 2.0 * cfg.length
            + earthquake_length(cfg, -h)
        ) / h**2

    return (4.0 * d2(step / 2.0) - d2(step)) / 3.0


def convexity_bound(cfg: EarthquakeConfig, min_angle: float = 0.05) -> float:
    """Second derivative over squared intersection number.

    Positive for every admissible config; the lower bound over a family
    with angles bounded away from tangency is its convexity constant.
    """
    if not cfg.crossings:
        raise InputError("empty multicurve has no convexity bound")
    for c in cfg.crossings:
        if min(c.theta, math.pi - c.theta) < min_angle:
            raise InputError("angle too close to tangency for the bound")
    value = second_derivative(cfg) / intersection_number(cfg) ** 2
    assert value > 0.0
    return value


def convexity_infimum(configs, min_angle: float = 0.05) -> float:
    """Infimum of ``convexity_bound`` over a family of configs."""
    values = [convexity_bound(cfg, min_angle) for cfg in configs]
    if not values:
        raise InputError("empty family")
    return min(values)


def _parse_boundary_value(v) -> float:
    try:
        return float(v)
    except (TypeError, ValueError) as err:
        raise InputError(f"bad geodesic endpoint {v!r}") from err


def config_from_obj(obj: dict) -> EarthquakeConfig:
    """Build a config from {sigma: [[x,y],[x,y]], faults: [...]}.

    Fault endpoints are reals or the strings "inf"/"-inf"; both ideal
    endpoints of a fault must be distinct.
    """
    try:
        (ax, ay), (bx, by) = obj["sigma"]
        faults = obj["faults"]
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"malformed earthquake config: {err}") from err
    sigma = Segment(HPoint(float(ax), float(ay)), HPoint(float(bx), float(by)))
    components = []
    for f in faults:
        try:
            p, q = f["endpoints"]
            weight = float(f["weight"])
        except (KeyError, TypeError, ValueError) as err:
            raise InputError(f"malformed fault entry: {err}") from err
        g = Geodesic.from_endpoints(
            _parse_boundary_value(p), _parse_boundary_value(q)
        )
        components.append((g, weight))
    return EarthquakeConfig.build(sigma, Multicurve(components))


def config_to_obj(cfg: EarthquakeConfig) -> dict:
    def endpoint(p):
        v = p.value()
        return "inf" if math.isinf(v) else v

    return {
        "sigma": [[cfg.sigma.a.x, cfg.sigma.a.y], [cfg.sigma.b.x, cfg.sigma.b.y]],
        "faults": [
            {
                "endpoints": [endpoint(g.p_minus), endpoint(g.p_plus)],
                "weight": m,
            }
            for g, m in cfg.lam.components
        ],
    }
