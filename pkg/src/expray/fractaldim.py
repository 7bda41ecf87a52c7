"""Squares, truncated parabolas, the standard-square covering tree, and box counting.

Covering generations are held in log space. After one refinement from a
root at real part 20, the children's real parts are about 1e9, and one
generation later they are e^(1e9). Only logarithms of real parts,
multiplicities, chain derivatives and diameters stay representable.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from .expcore import ESCAPE_RE, T_MAX, escape_indices

SIDE = math.pi / 2
SQUARE_DIAM = SIDE * math.sqrt(2)
K_KOEBE = 4.0
M_DEFAULT = 10.0
LOG2 = math.log(2.0)
ROW_BLOCK = 32


class EmptyRefinement(ValueError):
    """No child square meets the parabola."""


class GenerationCapReached(OverflowError):
    """Parent real parts are beyond double range; refine no further."""


class DegenerateFit(ValueError):
    pass


@dataclass(frozen=True)
class StandardSquare:
    center: complex

    side = SIDE

    @property
    def min_re(self) -> float:
        return self.center.real - SIDE / 2

    def corners(self) -> List[complex]:
        h = SIDE / 2
        c = self.center
        return [c + complex(a, b) for a in (-h, h) for b in (-h, h)]

    def double(self) -> "DoubleSquare":
        return DoubleSquare(self.center)


@dataclass(frozen=True)
class DoubleSquare:
    center: complex

    side = math.pi


@dataclass(frozen=True)
class ParabolaRegion:
    p: float
    xi: float

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError("p must exceed 1")
        if not self.xi > 0:
            raise ValueError("xi must be positive")

    def contains(self, z: complex) -> bool:
        return parabola_contains(self, z)


def parabola_contains(region: ParabolaRegion, z: complex) -> bool:
    x, y = z.real, z.imag
    return x > region.xi and abs(y) < x ** (1.0 / region.p)


def square_inside(region: ParabolaRegion, square: StandardSquare) -> bool:
    """Closure of the square inside the region, tested on the corners.

    The region is convex along verticals and its width grows with x, so the
    four corners decide it.
    """
    return all(parabola_contains(region, c) for c in square.corners())


def log_count_covering_squares(p: float, xi0: float, M: float) -> float:
    """log N(xi0); usable for xi0 far beyond the range of exp."""
    lo = xi0 + math.log(math.exp(SIDE) - 0.5 + M * math.exp(-xi0))
    width = (xi0 + SIDE) / p + math.log1p(math.exp(-(xi0 + SIDE) / p))
    return lo + LOG2 + width - 2 * math.log(SIDE)


def count_covering_squares(p: float, xi0: float, M: float) -> int:
    """N(xi0) = (e^{pi/2} e^{xi0} + M - e^{xi0}/2) * 2 (e^{pi/2p} e^{xi0/p} + 1) (pi/2)^-2, rounded up."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    if not xi0 > 0:
        raise ValueError("xi0 must be positive")
    if M < 0:
        raise ValueError("M must be non-negative")
    if xi0 > T_MAX:
        raise OverflowError(f"e^{xi0} exceeds the overflow guard")
    e = math.exp(xi0)
    n = (math.exp(SIDE) * e + M - e / 2) * 2 * (math.exp(SIDE / p) * math.exp(xi0 / p) + 1)
    return math.ceil(n / SIDE**2)


@dataclass
class CoverElement:
    """A class of equivalent covering pieces.

    ``square`` is set for individually enumerated squares. Aggregated
    classes carry ``log_count`` > 0 and are described only through
    ``log_min_re``.
    """

    log_min_re: float
    log_count: float
    log_chain: float
    log_diam: float
    square: Optional[StandardSquare] = None

    @property
    def count(self) -> float:
        return math.exp(self.log_count)

    @property
    def min_re(self) -> float:
        return math.exp(self.log_min_re) if self.log_min_re < T_MAX else math.inf

    @property
    def diam_estimate(self) -> float:
        return math.exp(self.log_diam)

    @property
    def chain_derivative(self) -> float:
        return math.exp(self.log_chain) if self.log_chain < T_MAX else math.inf


@dataclass
class CoverGeneration:
    generation: int
    elements: List[CoverElement] = field(default_factory=list)
    koebe: float = K_KOEBE
    # log of the largest child count produced by one parent, with that parent's log N bound
    worst_count_ratio: Optional[Tuple[float, float]] = None

    @property
    def log_count(self) -> float:
        return float(logsumexp([e.log_count for e in self.elements]))

    @property
    def count(self) -> float:
        return math.exp(self.log_count) if self.log_count < T_MAX else math.inf

    @property
    def log_min_re(self) -> float:
        return min(e.log_min_re for e in self.elements)

    @property
    def min_re(self) -> float:
        return math.exp(self.log_min_re) if self.log_min_re < T_MAX else math.inf


def build_cover_root(xi0: float, koebe: float = K_KOEBE) -> CoverGeneration:
    """Generation 0: the standard square with Re in (xi0, xi0 + pi/2) centred on the real axis.

    Its diameter estimate carries the same distortion allowance as every
    later generation, so sums of different generations compare like with like.
    """
    if not xi0 > 0:
        raise ValueError("xi0 must be positive")
    sq = StandardSquare(complex(xi0 + SIDE / 2, 0.0))
    el = CoverElement(math.log(xi0), 0.0, 0.0, math.log(koebe * SQUARE_DIAM), sq)
    return CoverGeneration(0, [el], koebe)


def _enumerate_children(parent, x_lo, x_hi, region, koebe):
    """Lattice squares (anchored at 0, side pi/2) meeting {x_lo < x < x_hi, |y| < x^(1/p)}."""
    x_lo = max(x_lo, region.xi)
    if x_hi <= x_lo:
        return []
    out = []
    log_kd = math.log(koebe * SQUARE_DIAM)
    for i in range(math.floor(x_lo / SIDE), math.ceil(x_hi / SIDE)):
        left, right = i * SIDE, (i + 1) * SIDE
        y_max = min(right, x_hi) ** (1.0 / region.p)
        rows = math.ceil(y_max / SIDE)
        # only the part of the square inside the strip is covered
        log_min = math.log(max(left, x_lo))
        for j in range(-rows, rows):
            c = complex(left + SIDE / 2, (j + 0.5) * SIDE)
            log_chain = parent.log_chain + math.log(abs(c))
            out.append(
                CoverElement(log_min, parent.log_count, log_chain, log_kd - log_chain, StandardSquare(c))
            )
    return out


def _binned_children(parent, u_lo, u_hi, p, koebe, bins):
    """Aggregated children over log-real-part bins; counts integrate 2 x^(1/p) / (pi/2)^2 dx."""
    q = 1.0 + 1.0 / p
    log_density = math.log(2.0 / (SIDE**2 * q))
    log_kd = math.log(koebe * SQUARE_DIAM)
    edges = np.linspace(u_lo, u_hi, bins + 1)
    out = []
    for u0, u1 in zip(edges[:-1], edges[1:]):
        log_n = log_density + q * u1 + math.log(-math.expm1(q * (u0 - u1)))
        # left edge: smallest |center|, hence the largest diameter in the bin
        log_chain = parent.log_chain + u0
        out.append(CoverElement(float(u0), parent.log_count + log_n, log_chain, log_kd - log_chain))
    return out


def refine_cover(
    gen: CoverGeneration,
    region: ParabolaRegion,
    M: float = M_DEFAULT,
    bins: int = 256,
    enumerate_limit: float = 2e5,
) -> CoverGeneration:
    """Pull the parabola back through one more application of e^z + kappa', |kappa'| <= M.

    For a parent with minimal real part a, the children tile real parts
    (e^a / 2, e^(a + pi/2) + M) inside the parabola. Each child's chain
    derivative is the parent's times |e^z| at the preimage of its centre,
    and its diameter estimate is K * diam(square) / chain derivative.
    Small families are enumerated square by square; large ones are binned
    in log real part.
    """
    children: List[CoverElement] = []
    worst = None
    log_xi = math.log(region.xi)
    for parent in gen.elements:
        a = parent.min_re
        if not math.isfinite(a):
            raise GenerationCapReached(f"parent minimal real part e^{parent.log_min_re:.6g} overflows")
        if a < region.xi * (1 - 1e-12):
            raise ValueError("every parent must lie at real parts above region.xi")
        u_lo = max(a - LOG2, log_xi)
        u_hi = a + SIDE + math.log1p(M * math.exp(-(a + SIDE)))
        if u_hi <= u_lo:
            continue
        log_est = math.log(2 / SIDE**2) + u_hi * (1 + 1 / region.p)
        if log_est < math.log(enumerate_limit):
            kids = _enumerate_children(parent, math.exp(a) / 2, math.exp(u_hi), region, gen.koebe)
        else:
            kids = _binned_children(parent, u_lo, u_hi, region.p, gen.koebe, bins)
        if not kids:
            continue
        log_kids = float(logsumexp([k.log_count for k in kids])) - parent.log_count
        bound = log_count_covering_squares(region.p, a, M)
        if worst is None or log_kids - bound > worst[0] - worst[1]:
            worst = (log_kids, bound)
        children.extend(kids)
    if not children:
        raise EmptyRefinement("no child square meets the parabola")
    return CoverGeneration(gen.generation + 1, children, gen.koebe, worst)


def log_hausdorff_sum(gen: CoverGeneration, d: float) -> float:
    if not d > 0:
        raise ValueError("d must be positive")
    terms = np.array([e.log_count + d * e.log_diam for e in gen.elements])
    return float(logsumexp(terms))


def hausdorff_sum(gen: CoverGeneration, d: float) -> float:
    """Sum of diam^d over all covering pieces (inf if it exceeds double range)."""
    ls = log_hausdorff_sum(gen, d)
    return math.exp(ls) if ls < T_MAX else math.inf


def extrapolate_log_sum(log_sum: float, min_re: float, p: float, d: float) -> Tuple[float, float]:
    """One more generation by the integral estimate; returns (log sum, log minimal real part).

    Sum ratio is about (2/(pi/2)^2) x^(1+1/p-d) / (d-1-1/p) at x = e^min_re / 2;
    with min_re already huge this is 0 or inf.
    """
    q = 1.0 + 1.0 / p
    log_x = min_re - LOG2
    if d == q:
        return math.inf, log_x
    expo = (q - d) * log_x
    if d > q:
        return log_sum + math.log(2 / SIDE**2) - math.log(d - q) + expo, log_x
    # d < q: integral dominated by the upper end
    return log_sum + math.log(2 / SIDE**2) - math.log(q - d) + (q - d) * (min_re + SIDE), log_x


# -- box counting ------------------------------------------------------------

@dataclass
class BoxCountFit:
    epsilons: List[float]
    counts: List[int]
    slope: float
    r_squared: float


def _as_xy(points) -> np.ndarray:
    z = np.asarray(points, dtype=np.complex128).ravel()
    return np.stack([z.real, z.imag], axis=1)


def box_count(points, epsilon: float) -> int:
    """Occupied cells of the epsilon-grid anchored at 0; a point on a cell edge counts for the cell whose lower-left corner it touches."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    xy = _as_xy(points)
    if len(xy) == 0:
        raise ValueError("no points")
    cells = np.floor(xy / epsilon).astype(np.int64)
    return int(len(np.unique(cells, axis=0)))


def box_dimension(points, eps_hi: float, eps_lo: float, levels: int) -> BoxCountFit:
    """Least-squares slope of log N(eps) against log(1/eps) on a geometric ladder."""
    if not eps_hi > eps_lo > 0:
        raise ValueError("need eps_hi > eps_lo > 0")
    if levels < 3:
        raise ValueError("need at least 3 levels")
    eps = np.geomspace(eps_hi, eps_lo, levels)
    counts = [box_count(points, e) for e in eps]
    if len(set(counts)) == 1:
        raise DegenerateFit(f"all box counts equal ({counts[0]})")
    x, y = np.log(1 / eps), np.log(counts)
    slope, icpt = np.polyfit(x, y, 1)
    pred = slope * x + icpt
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return BoxCountFit(list(map(float, eps)), counts, float(slope), 1.0 - ss_res / ss_tot)


# -- escape-set sampling ------------------------------------------------------

def lattice_axis(lo: float, hi: float, n: int) -> np.ndarray:
    """n points from lo to hi; mirrors exactly under (lo, hi) -> (-hi, -lo)."""
    k = np.arange(n, dtype=np.float64)
    return (lo * (n - 1 - k) + hi * k) / (n - 1)


def escape_time_grid(
    lo: complex,
    hi: complex,
    grid: int,
    n_max: int = 50,
    escape_re: float = ESCAPE_RE,
    workers: int = 1,
) -> np.ndarray:
    """Escape indices on a grid x grid lattice, row 0 at the largest imaginary part.

    Rows are processed in fixed blocks so the result does not depend on ``workers``.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    if not (hi.real > lo.real and hi.imag > lo.imag):
        raise ValueError("degenerate rectangle")
    xs = lattice_axis(lo.real, hi.real, grid)
    ys = lattice_axis(lo.imag, hi.imag, grid)[::-1]
    blocks = [(i, min(i + ROW_BLOCK, grid)) for i in range(0, grid, ROW_BLOCK)]

    def run(block):
        a, b = block
        kappas = xs[None, :] + 1j * ys[a:b, None]
        return escape_indices(kappas, n_max, escape_re)

    if workers <= 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    return np.concatenate(parts, axis=0)


def escape_set_sample(
    lo: complex,
    hi: complex,
    grid: int,
    n_max: int = 50,
    escape_re: float = ESCAPE_RE,
    workers: int = 1,
) -> np.ndarray:
    """Lattice parameters in the rectangle whose singular orbit is classified as escaping."""
    idx = escape_time_grid(lo, hi, grid, n_max, escape_re, workers)
    xs = lattice_axis(lo.real, hi.real, grid)
    ys = lattice_axis(lo.imag, hi.imag, grid)[::-1]
    kappas = xs[None, :] + 1j * ys[:, None]
    return kappas[idx >= 0]
