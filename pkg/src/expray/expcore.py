"""The exponential family E_kappa(z) = exp(z) + kappa.

Complex points are plain Python ``complex`` values. Any operation that would
need ``exp`` of an argument with real part above ``T_MAX`` reports that as an
overflow instead of producing a non-finite number.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

T_MAX = 700.0
ESCAPE_RE = 50.0
N_MAX = 100


class Status(enum.Enum):
    ESCAPED = "escaped"
    BOUNDED = "bounded"
    OVERFLOW = "overflow"


@dataclass
class EscapeResult:
    status: Status
    escape_index: Optional[int]
    final_value: complex
    orbit: Optional[List[complex]] = None

    @property
    def escaped(self) -> bool:
        """OVERFLOW is an escape verdict as well."""
        return self.status is not Status.BOUNDED


@dataclass
class OrbitWithDerivative:
    values: List[complex] = field(default_factory=list)
    derivs: List[complex] = field(default_factory=list)
    clamped: bool = False


def apply_map(kappa: complex, z: complex, guard: float = T_MAX) -> Optional[complex]:
    """Return exp(z) + kappa, or None when Re(z) exceeds the overflow guard."""
    z = complex(z)
    if z.real > guard:
        return None
    return cmath.exp(z) + kappa


def singular_orbit(
    kappa: complex,
    n_max: int = N_MAX,
    escape_re: float = ESCAPE_RE,
    record_orbit: bool = False,
    guard: float = T_MAX,
) -> EscapeResult:
    """Iterate kappa, E(kappa), E^2(kappa), ... and classify the orbit.

    ESCAPED needs two consecutive iterates with real part above ``escape_re``
    and strictly increasing real part. Reaching an iterate whose real part
    exceeds ``guard`` is reported as OVERFLOW at that index.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not escape_re > 1:
        raise ValueError("escape_re must exceed 1")
    kappa = complex(kappa)
    z = kappa
    orbit = [z] if record_orbit else None
    prev_re = -math.inf
    for n in range(n_max + 1):
        if n > 0:
            z = cmath.exp(z) + kappa
            if orbit is not None:
                orbit.append(z)
        if z.real > escape_re and prev_re > escape_re and z.real > prev_re:
            return EscapeResult(Status.ESCAPED, n, z, orbit)
        if z.real > guard:
            return EscapeResult(Status.OVERFLOW, n, z, orbit)
        prev_re = z.real
    return EscapeResult(Status.BOUNDED, None, z, orbit)


def escape_indices(
    kappas: np.ndarray,
    n_max: int = N_MAX,
    escape_re: float = ESCAPE_RE,
    guard: float = T_MAX,
) -> np.ndarray:
    """Vectorized ``singular_orbit``: escape index per parameter, -1 if bounded.

    Follows the same iteration and the same tests as the scalar routine.
    """
    kappas = np.asarray(kappas, dtype=np.complex128)
    shape = kappas.shape
    c = kappas.ravel().copy()
    out = np.full(c.shape, -1, dtype=np.int64)
    z = c.copy()
    prev_re = np.full(c.shape, -np.inf)
    live = np.arange(c.size)
    for n in range(n_max + 1):
        if n > 0:
            z = np.exp(z) + c[live]
        re = z.real
        done = ((re > escape_re) & (prev_re > escape_re) & (re > prev_re)) | (re > guard)
        if done.any():
            out[live[done]] = n
            keep = ~done
            live, z, re = live[keep], z[keep], re[keep]
        if live.size == 0:
            break
        prev_re = re
    return out.reshape(shape)


def singular_orbit_with_derivative(
    kappa: complex, n_max: int, guard: float = T_MAX
) -> OrbitWithDerivative:
    """Singular orbit together with d/dkappa of each iterate.

    Uses (E^{n+1})' = exp(E^n) (E^n)' + 1 with (E^0)' = 1, stopping early
    (``clamped=True``) when the next step would exponentiate past the guard.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    kappa = complex(kappa)
    out = OrbitWithDerivative([kappa], [1 + 0j])
    z, dz = kappa, 1 + 0j
    for _ in range(n_max):
        if z.real > guard:
            out.clamped = True
            break
        ez = cmath.exp(z)
        z, dz = ez + kappa, ez * dz + 1
        out.values.append(z)
        out.derivs.append(dz)
    return out


def potential_step(t: float) -> float:
    """F(t) = e^t - t."""
    if t < 0:
        raise ValueError("potential must be non-negative")
    if t > T_MAX:
        raise OverflowError(f"F({t}) exceeds the overflow guard")
    return math.exp(t) - t


def potential_iter(t: float, n: int, guard: float = T_MAX) -> Tuple[float, Optional[int]]:
    """F^n(t), or the last representable iterate and the index k that would overflow."""
    if t < 0:
        raise ValueError("potential must be non-negative")
    value = float(t)
    for k in range(1, n + 1):
        if value > guard:
            return value, k
        value = math.exp(value) - value
    return value, None


def potential_orbit(t: float, n: int, guard: float = T_MAX) -> List[float]:
    """[t, F(t), ..., F^m(t)] with m <= n, stopping before the guard is crossed."""
    if t < 0:
        raise ValueError("potential must be non-negative")
    values = [float(t)]
    for _ in range(n):
        if values[-1] > guard:
            break
        values.append(math.exp(values[-1]) - values[-1])
    return values
