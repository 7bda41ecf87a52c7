"""Seeded verification suites for the derivative lemma, orbit asymptotics and ray derivatives.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a
suite run is reproducible from its seed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .address import ExternalAddress
from .dynray import (
    C_BOUND,
    dkappa_level_margin,
    ray_derivative_kappa,
    ray_derivative_t,
    ray_point,
    ray_point_adaptive,
)
from .expcore import singular_orbit_with_derivative
from .pararay import singular_asymptotics_profile, solve_parameter_ray_point

FD_STEP = 1e-6
FD_RTOL = 1e-4


@dataclass
class Trial:
    index: int
    passed: bool
    detail: str
    worst: float = 0.0


def random_address(rng: np.random.Generator, bound: int = 8) -> ExternalAddress:
    prefix = tuple(int(v) for v in rng.integers(-bound, bound + 1, rng.integers(1, 5)))
    if rng.random() < 0.5:
        return ExternalAddress(prefix)
    return ExternalAddress(prefix, tuple(int(v) for v in rng.integers(-bound, bound + 1, rng.integers(1, 3))))


def random_kappa(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.random())
    return cmath.rect(r, rng.uniform(-math.pi, math.pi))


def derivative_step_violations(values, derivs) -> List[str]:
    """Check |(E^{n+1})'| > e^xi |(E^n)'| - 1 > 2 |(E^n)'| wherever Re E^n > xi > 1 and |(E^n)'| > 2."""
    bad = []
    for n in range(len(derivs) - 1):
        x, d, d1 = values[n].real, abs(derivs[n]), abs(derivs[n + 1])
        if x > 1 and d > 2:
            xi = max(1.0, math.nextafter(x, 0.0))
            mid = math.exp(xi) * d - 1
            if not (d1 > mid > 2 * d):
                bad.append(f"n={n}: |d'|={d1:.6g}, e^xi|d|-1={mid:.6g}, 2|d|={2 * d:.6g}")
    return bad


def strip_expansion_worst(rng: np.random.Generator, pairs: int) -> float:
    """min over sampled pairs of |e^z1 - e^z2| * sqrt(2) / |z1 - z2|; must stay >= 1."""
    x0 = rng.uniform(1.0, 30.0)
    y0 = rng.uniform(-50.0, 50.0)
    w = rng.uniform(0.01, 5.0)
    h = rng.uniform(0.01, math.pi / 2)
    z1 = rng.uniform(x0, x0 + w, pairs) + 1j * rng.uniform(y0, y0 + h, pairs)
    z2 = rng.uniform(x0, x0 + w, pairs) + 1j * rng.uniform(y0, y0 + h, pairs)
    dz = np.abs(z1 - z2)
    keep = dz > 0
    ratio = np.abs(np.exp(z1[keep]) - np.exp(z2[keep])) * math.sqrt(2) / dz[keep]
    return float(ratio.min())


def suite_lemma21(rng: np.random.Generator, index: int) -> Trial:
    kappa = random_kappa(rng, 4.0)
    orb = singular_orbit_with_derivative(kappa, 30)
    bad = derivative_step_violations(orb.values, orb.derivs)
    worst = strip_expansion_worst(rng, 100)
    if worst < 1.0:
        bad.append(f"strip expansion ratio {worst:.6g} < 1")
    return Trial(index, not bad, "; ".join(bad) or f"kappa={kappa:.4g}", worst)


def suite_asymptotics(rng: np.random.Generator, index: int) -> Trial:
    s = random_address(rng)
    t = rng.uniform(5.0, 20.0)
    pt = solve_parameter_ray_point(s, t)
    prof = singular_asymptotics_profile(pt, s, 10)
    worst = max(prof)
    ok = worst < 2 and all(b <= a for a, b in zip(prof[1:], prof[2:]))
    return Trial(index, ok, f"s={s} t={t:.4g} delta={['%.3g' % v for v in prof]}", worst)


def suite_derivatives(rng: np.random.Generator, index: int) -> Trial:
    s = random_address(rng)
    kappa = random_kappa(rng, 3.0)
    # beyond t ~ 8 dg/dkappa is ~1/F(t) and the difference quotient is rounding-dominated
    t = rng.uniform(3.0, 8.0)
    h = FD_STEP
    g = lambda tt: ray_point_adaptive(kappa, s, tt).value
    fd_t = (g(t + h) - g(t - h)) / (2 * h)
    an_t = ray_derivative_t(kappa, s, t)
    depth = ray_point_adaptive(kappa, s, t).depth_used
    gk = lambda k: ray_point(k, s, t, depth)
    fd_k = (gk(kappa + h) - gk(kappa - h)) / (2 * h)
    an_k = ray_derivative_kappa(kappa, s, t, depth)
    err_t = abs(an_t - fd_t) / abs(fd_t)
    err_k = abs(an_k - fd_k) / abs(fd_k)
    worst = max(err_t, err_k)
    return Trial(index, worst < FD_RTOL, f"rel err t: {err_t:.2e}, kappa: {err_k:.2e}", worst)


def suite_dkappa_bound(rng: np.random.Generator, index: int, c: float = C_BOUND) -> Trial:
    s = random_address(rng)
    kappa = random_kappa(rng, 5.0)
    t = rng.uniform(3.0, 20.0)
    depth = ray_point_adaptive(kappa, s, t).depth_used
    margin = dkappa_level_margin(kappa, s, t, depth)
    val = abs(ray_derivative_kappa(kappa, s, t, depth))
    if margin <= c:
        return Trial(index, True, f"outside regime: min Re(g-kappa)={margin:.4g} <= C", 0.0)
    return Trial(index, val < 2 / c, f"min Re(g-kappa)={margin:.4g}, |dg/dkappa|={val:.3e}", val)


SUITES: Dict[str, Callable[[np.random.Generator, int], Trial]] = {
    "lemma21": suite_lemma21,
    "asymptotics": suite_asymptotics,
    "derivatives": suite_derivatives,
    "dkappa-bound": suite_dkappa_bound,
}


def run_suite(name: str, trials: int, seed: int) -> List[Trial]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    fn = SUITES[name]
    out = []
    for i in range(trials):
        try:
            out.append(fn(rng, i))
        except (ArithmeticError, ValueError) as exc:
            out.append(Trial(i, False, f"{type(exc).__name__}: {exc}", math.inf))
    return out
