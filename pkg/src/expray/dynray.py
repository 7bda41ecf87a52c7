"""Dynamic rays g_{kappa,s}(t) as limits of inverse-branch compositions.

g^0_{kappa,s}(t) = t and g^{m+1}_{kappa,s}(t) = L_{s_1}(g^m_{kappa,sigma(s)}(F(t))),
with L_j(z) = log(z - kappa) + 2 pi i j. Evaluation runs inside-out: the
potentials F^k(t) are computed first and the branches applied outward.

Potentials beyond the overflow guard are not truncated. If x = F^r(t) is the
last potential below the float range, the next level is handled in log form,
    L_j(F(x) + c) = x + log(1 + (c - x - kappa) e^{-x}) + 2 pi i j,
which is exact algebra, so g^m is defined for every depth m. The correction
term underflows to zero once x exceeds roughly 745, which is why the depth
sequence becomes stationary after a handful of levels.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .address import MAX_SUP_NORM, ExternalAddress, check_admissible
from .expcore import T_MAX, apply_map, potential_orbit

TWO_PI_I = 2j * math.pi
T_FLOOR = 0.05
B_CHECK = 2.0
C_BOUND = 10.0
TOL = 1e-10
DEPTH_CAP = 256
SINGULAR_EPS = 1e-300


class SingularValueHit(ArithmeticError):
    """An inverse branch was applied at (numerically) the singular value."""

    def __init__(self, message: str, level: Optional[int] = None):
        super().__init__(message)
        self.level = level


class RayBoundViolation(ArithmeticError):
    """Some level violated Re g^m(t') > t' - B_check."""


@dataclass
class RayPointResult:
    value: complex
    depth_used: int
    cauchy_gap: float
    clamped: bool


@dataclass
class RayEntry:
    t: float
    value: Optional[complex]
    residual: float
    error: Optional[str] = None


@dataclass
class RayPolyline:
    address: ExternalAddress
    kind: str  # "DYNAMIC" or "PARAMETER"
    entries: List[RayEntry] = field(default_factory=list)
    truncated: bool = False

    @property
    def ts(self) -> List[float]:
        return [e.t for e in self.entries]

    @property
    def values(self) -> List[complex]:
        return [e.value for e in self.entries if e.value is not None]


def inverse_branch(kappa: complex, branch: int, z: complex) -> complex:
    """L_branch(z) = Log(z - kappa) + 2 pi i branch, principal Log with Im in (-pi, pi]."""
    w = complex(z) - kappa
    if abs(w) < SINGULAR_EPS:
        raise SingularValueHit(f"inverse branch applied at the singular value {kappa!r}")
    if w.imag == 0.0 and w.real < 0:
        # both signed zeros map onto the +pi side of the cut
        w = complex(w.real, 0.0)
    return cmath.log(w) + TWO_PI_I * branch


def _check_inputs(s: ExternalAddress, t: float, t_floor: float, bound: int) -> None:
    if not t >= t_floor:
        raise ValueError(f"potential t={t} below the floor {t_floor}")
    check_admissible(s, bound)


@dataclass
class _Descent:
    value: complex
    dkappa: complex
    min_re_gap: float  # min over levels of Re(w - kappa) at the denominators


def _descend(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    depth: int,
    b_check: Optional[float] = B_CHECK,
) -> _Descent:
    kappa = complex(kappa)
    pots = potential_orbit(t, depth)
    r = len(pots) - 1
    dw = 0j
    min_gap = math.inf
    if depth <= r:
        w = complex(pots[depth])
        level = depth
    else:
        # level r seeded in log form; deeper levels only contribute 2 pi i s_{r+2}
        x = pots[r]
        c = TWO_PI_I * s.entry(r + 2) if depth >= r + 2 else 0j
        ex = math.exp(-x)
        u = (c - x - kappa) * ex
        w = x + u + TWO_PI_I * s.entry(r + 1)
        dw = -ex / (1 + u)
        min_gap = x - kappa.real
        level = r
    for j in range(level, 0, -1):
        denom = w - kappa
        if abs(denom) < SINGULAR_EPS:
            raise SingularValueHit(f"level {j} of the descent hit the singular value", level=j)
        min_gap = min(min_gap, denom.real)
        dw = (dw - 1) / denom
        w = inverse_branch(kappa, s.entry(j), w)
        if b_check is not None and not w.real > pots[j - 1] - b_check:
            raise RayBoundViolation(
                f"Re g at level {j - 1} is {w.real:.6g}, below {pots[j - 1]:.6g} - {b_check}"
            )
    return _Descent(w, dw, min_gap)


def ray_point(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    depth: int,
    t_floor: float = T_FLOOR,
    bound: int = MAX_SUP_NORM,
    b_check: Optional[float] = B_CHECK,
) -> complex:
    """g^depth_{kappa,s}(t)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    _check_inputs(s, t, t_floor, bound)
    return _descend(kappa, s, t, depth, b_check).value


def _adaptive(kappa, s, t, tol, depth_cap, b_check, with_gap=False):
    prev = _descend(kappa, s, t, 0, b_check)
    gap = math.inf
    for m in range(1, depth_cap + 1):
        cur = _descend(kappa, s, t, m, b_check)
        gap = abs(cur.value - prev.value)
        prev = cur
        if gap < tol:
            return cur, m, gap, False
    return prev, depth_cap, gap, True


def ray_point_adaptive(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    tol: float = TOL,
    depth_cap: int = DEPTH_CAP,
    t_floor: float = T_FLOOR,
    bound: int = MAX_SUP_NORM,
    b_check: Optional[float] = B_CHECK,
) -> RayPointResult:
    """Deepen g^m(t) until |g^m - g^{m-1}| < tol or the depth cap is reached."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_inputs(s, t, t_floor, bound)
    d, m, gap, clamped = _adaptive(kappa, s, t, tol, depth_cap, b_check)
    return RayPointResult(d.value, m, gap, clamped)


def ray_with_dkappa(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    tol: float = TOL,
    depth_cap: int = DEPTH_CAP,
    t_floor: float = T_FLOOR,
    bound: int = MAX_SUP_NORM,
    b_check: Optional[float] = B_CHECK,
) -> Tuple[complex, complex, int]:
    """(g, dg/dkappa, depth) at the first depth meeting the Cauchy tolerance."""
    _check_inputs(s, t, t_floor, bound)
    d, m, _, _ = _adaptive(kappa, s, t, tol, depth_cap, b_check)
    return d.value, d.dkappa, m


def functional_residual(
    kappa: complex, s: ExternalAddress, t: float, tol: float = TOL, **kwargs
) -> float:
    """|E_kappa(g_s(t)) - g_{sigma s}(F(t))|; inf when E_kappa(g) overflows."""
    g = ray_point_adaptive(kappa, s, t, tol, **kwargs).value
    image = apply_map(kappa, g)
    if image is None:
        return math.inf
    target = ray_point_adaptive(kappa, s.shift(), math.exp(t) - t, tol, **kwargs).value
    return abs(image - target)


def ray_derivative_t(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    terms: int = 64,
    tol: float = TOL,
    t_floor: float = T_FLOOR,
    bound: int = MAX_SUP_NORM,
) -> complex:
    """dg_{kappa,s}/dt as the product over m of F'(F^{m-1}(t)) / (g_{sigma^m s}(F^m(t)) - kappa).

    Factors past the last representable potential equal 1 to double
    precision, so the product stops there.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    _check_inputs(s, t, t_floor, bound)
    pots = potential_orbit(t, terms)
    prod = 1 + 0j
    for m in range(1, len(pots)):
        g = ray_point_adaptive(kappa, s.shift(m), pots[m], tol, bound=bound).value
        prod *= math.expm1(pots[m - 1]) / (g - kappa)
    return prod


def ray_derivative_kappa(
    kappa: complex,
    s: ExternalAddress,
    t: float,
    depth: int,
    t_floor: float = T_FLOOR,
    bound: int = MAX_SUP_NORM,
    b_check: Optional[float] = B_CHECK,
) -> complex:
    """d/dkappa of g^depth_{kappa,s}(t), via d' = (d - 1) / (w - kappa) from d = 0."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    _check_inputs(s, t, t_floor, bound)
    return _descend(kappa, s, t, depth, b_check).dkappa


def dkappa_level_margin(kappa: complex, s: ExternalAddress, t: float, depth: int) -> float:
    """min of Re(w - kappa) over the denominators w of the derivative recursion.

    These are the levels 1..depth; the outermost value g(t) never divides.
    The 2/C bound applies when this exceeds C.
    """
    return _descend(kappa, s, t, depth, None).min_re_gap


def geometric_ts(t_min: float, t_max: float, samples: int) -> List[float]:
    if samples < 2:
        raise ValueError("need at least two samples")
    if not t_min < t_max:
        raise ValueError("t_min must be below t_max")
    ratio = (t_max / t_min) ** (1.0 / (samples - 1))
    ts = [t_min * ratio**k for k in range(samples)]
    ts[-1] = t_max
    return ts


def trace_dynamic_ray(
    kappa: complex,
    s: ExternalAddress,
    t_min: float,
    t_max: float,
    samples: int,
    tol: float = TOL,
    t_floor: float = T_FLOOR,
) -> RayPolyline:
    """Sample g_{kappa,s} at geometrically spaced potentials.

    Each entry carries the functional-equation residual; failures are kept
    as entries with an error message.
    """
    if not t_min >= t_floor:
        raise ValueError(f"t_min={t_min} below the floor {t_floor}")
    line = RayPolyline(s, "DYNAMIC")
    for t in geometric_ts(t_min, t_max, samples):
        try:
            value = ray_point_adaptive(kappa, s, t, tol, t_floor=t_floor).value
            resid = functional_residual(kappa, s, t, tol, t_floor=t_floor)
            line.entries.append(RayEntry(t, value, resid))
        except (ArithmeticError, ValueError) as exc:
            line.entries.append(RayEntry(t, None, math.nan, str(exc)))
            line.truncated = True
    return line
