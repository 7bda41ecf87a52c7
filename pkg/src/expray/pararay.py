"""Parameter rays G_s(t): the parameters kappa with g_{kappa,s}(t) = kappa."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .address import MAX_SUP_NORM, ExternalAddress, check_admissible
from .dynray import (
    TWO_PI_I,
    RayEntry,
    RayPolyline,
    geometric_ts,
    ray_point,
    ray_point_adaptive,
    ray_with_dkappa,
)
from .expcore import potential_orbit, singular_orbit_with_derivative
from .fractaldim import ParabolaRegion, parabola_contains

T_FLOOR_PARAM = 1.0
STEP_CAP = 50
SOLVE_TOL = 1e-8
# |F^n(t)| beyond which a double no longer resolves O(1) offsets of the orbit
PRECISION_HORIZON = 1e13


class NoConvergence(ArithmeticError):
    pass


@dataclass
class ParamRayPoint:
    kappa: complex
    t: float
    residual: float
    newton_steps: int


def _h(kappa, s, t, bound):
    g, dg, _ = ray_with_dkappa(kappa, s, t, tol=1e-15, t_floor=0.0, bound=bound)
    return g - kappa, dg - 1


def solve_parameter_ray_point(
    s: ExternalAddress,
    t: float,
    tol: float = SOLVE_TOL,
    kappa0: Optional[complex] = None,
    step_cap: int = STEP_CAP,
    t_floor: float = T_FLOOR_PARAM,
    bound: int = MAX_SUP_NORM,
) -> ParamRayPoint:
    """Newton's method on h(kappa) = g_{kappa,s}(t) - kappa.

    Starts from t + 2 pi i s_1 unless ``kappa0`` is given. Steps are halved
    while they fail to reduce |h|. Iteration stops once |h| < tol and the
    last step has stalled at rounding level.
    """
    if not t >= t_floor:
        raise ValueError(f"potential t={t} below the parameter-ray floor {t_floor}")
    check_admissible(s, bound)
    kappa = complex(t + TWO_PI_I * s.entry(1)) if kappa0 is None else complex(kappa0)
    h, dh = _h(kappa, s, t, bound)
    for step in range(1, step_cap + 1):
        delta = -h / dh
        lam = 1.0
        while True:
            trial = kappa + lam * delta
            h_new, dh_new = _h(trial, s, t, bound)
            if abs(h_new) < abs(h) or lam < 1e-6 or abs(h) < tol:
                break
            lam *= 0.5
        moved = abs(trial - kappa)
        kappa, h, dh = trial, h_new, dh_new
        if abs(h) < tol and moved <= 1e-9 * max(1.0, abs(kappa)):
            return ParamRayPoint(kappa, t, abs(h), step)
    if abs(h) < tol:
        return ParamRayPoint(kappa, t, abs(h), step_cap)
    raise NoConvergence(f"Newton did not converge for s={s}, t={t}: |h|={abs(h):.3g}")


def trace_parameter_ray(
    s: ExternalAddress,
    t_min: float,
    t_max: float,
    samples: int,
    tol: float = SOLVE_TOL,
    t_floor: float = T_FLOOR_PARAM,
) -> RayPolyline:
    """Continuation from t_max down to t_min, each solve seeded with the previous kappa.

    The first failed solve truncates the curve; entries are stored with t increasing.
    """
    if not t_min >= t_floor:
        raise ValueError(f"t_min={t_min} below the parameter-ray floor {t_floor}")
    line = RayPolyline(s, "PARAMETER")
    seed = None
    for t in reversed(geometric_ts(t_min, t_max, samples)):
        try:
            pt = solve_parameter_ray_point(s, t, tol, kappa0=seed, t_floor=t_floor)
        except (ArithmeticError, ValueError):
            line.truncated = True
            break
        seed = pt.kappa
        line.entries.append(RayEntry(t, pt.kappa, pt.residual))
    line.entries.reverse()
    return line


def verify_residual(point: ParamRayPoint, s: ExternalAddress) -> float:
    """Re-evaluate |g_{kappa,s}(t) - kappa| at twice the depth that converged."""
    res = ray_point_adaptive(point.kappa, s, point.t, tol=1e-15, t_floor=0.0)
    g = ray_point(point.kappa, s, point.t, 2 * res.depth_used, t_floor=0.0)
    return abs(g - point.kappa)


def _resolvable_orbit(point: ParamRayPoint, n_max: int):
    """Singular orbit and potentials up to the precision horizon (n = 0 always kept)."""
    pots = potential_orbit(point.t, n_max)
    orbit = singular_orbit_with_derivative(point.kappa, len(pots) - 1).values
    n = 1
    while n < len(orbit) and abs(pots[n]) <= PRECISION_HORIZON:
        n += 1
    return orbit[:n], pots[:n]


def singular_asymptotics_profile(
    point: ParamRayPoint, s: ExternalAddress, n_max: int
) -> List[float]:
    """delta_n = |E^n(kappa) - F^n(t) - 2 pi i s_{n+1}| while F^n(t) stays resolvable."""
    orbit, pots = _resolvable_orbit(point, n_max)
    return [abs(z - f - TWO_PI_I * s.entry(n + 1)) for n, (z, f) in enumerate(zip(orbit, pots))]


def derivative_growth_profile(point: ParamRayPoint, n_max: int) -> List[float]:
    """|(E^n)'(kappa)| for n = 0 up to the overflow clamp."""
    return [abs(d) for d in singular_orbit_with_derivative(point.kappa, n_max).derivs]


def classify_parabola_membership(
    point: ParamRayPoint, p: float, xi: float, n_max: int
) -> Tuple[Optional[int], bool]:
    """First N with E^n(kappa) in P_{p,xi} for every resolvable n >= N.

    Iterates past the precision horizon have meaningless imaginary parts and
    are not scanned. Returns (None, False) when the last scanned iterate lies
    outside.
    """
    region = ParabolaRegion(p, xi)
    orbit, _ = _resolvable_orbit(point, n_max)
    first = None
    for n in range(len(orbit) - 1, -1, -1):
        if parabola_contains(region, orbit[n]):
            first = n
        else:
            break
    return first, first is not None
