"""Acceptance gate: one check per criterion, each reporting a PASS/FAIL line.

Run under pytest (the lines are collected into the terminal summary) or
directly with ``python tests/test_acceptance.py``.
"""
import hashlib
import math
import tempfile
from pathlib import Path

import numpy as np
import pytest

from expray.address import ExternalAddress
from expray.cli import main, read_points
from expray.dynray import SingularValueHit, functional_residual
from expray.fractaldim import (
    ParabolaRegion,
    box_dimension,
    build_cover_root,
    escape_set_sample,
    log_hausdorff_sum,
    refine_cover,
)
from expray.pararay import (
    singular_asymptotics_profile,
    solve_parameter_ray_point,
    trace_parameter_ray,
    verify_residual,
)
from expray.verify import (
    random_address,
    random_kappa,
    run_suite,
    strip_expansion_worst,
)

SEED = 20240601
REPORT = []


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print(line)
    return ok


def criterion_1():
    rng = np.random.default_rng(SEED)
    residuals, excluded = [], 0
    while len(residuals) < 100:
        s, k, t = random_address(rng, 8), random_kappa(rng, 5.0), rng.uniform(3, 20)
        try:
            residuals.append(functional_residual(k, s, t))
        except SingularValueHit:
            excluded += 1
    bad = sum(r >= 1e-8 for r in residuals)
    return report(
        1, bad == 0,
        f"functional equation: {100 - bad}/100 below 1e-8, max {max(residuals):.3g}, {excluded} excluded",
    )


def criterion_2():
    trials = run_suite("lemma21", 100, SEED)
    rng = np.random.default_rng(SEED + 1)
    worst = min(strip_expansion_worst(rng, 100) for _ in range(100))
    bad = [t.index for t in trials if not t.passed]
    ok = not bad and worst >= 1.0
    return report(2, ok, f"derivative lemma: {len(bad)} violating orbits; strip ratio min {worst:.4f} over 1e4 pairs")


def criterion_3():
    deriv = run_suite("derivatives", 50, SEED)
    bound = run_suite("dkappa-bound", 50, SEED)
    worst = max(t.worst for t in deriv)
    in_regime = [t for t in bound if not t.detail.startswith("outside")]
    ok = all(t.passed for t in deriv) and all(t.passed for t in bound) and in_regime
    return report(
        3, bool(ok),
        f"FD max rel err {worst:.2e}; dkappa bound held on {sum(t.passed for t in in_regime)}/{len(in_regime)} in-regime",
    )


def criterion_4():
    rng = np.random.default_rng(SEED)
    worst_res = 0.0
    for _ in range(50):
        s, t = random_address(rng, 8), rng.uniform(2, 20)
        pt = solve_parameter_ray_point(s, t)
        worst_res = max(worst_res, pt.residual, verify_residual(pt, s))
    zero_im = max(abs(solve_parameter_ray_point(ExternalAddress.zeros(), t).kappa.imag) for t in (2, 5, 10, 20))
    conj = 0.0
    for _ in range(20):
        s, t = random_address(rng, 8), rng.uniform(2, 20)
        a = solve_parameter_ray_point(s, t).kappa
        b = solve_parameter_ray_point(s.negate(), t).kappa
        conj = max(conj, abs(a - b.conjugate()))
    prof = run_suite("asymptotics", 50, SEED)
    ok = worst_res < 1e-8 and zero_im < 1e-9 and conj < 1e-7 and all(t.passed for t in prof)
    return report(
        4, ok,
        f"residual max {worst_res:.2e}, zero-address |Im| {zero_im:.1e}, conjugation {conj:.1e}, "
        f"profiles {sum(t.passed for t in prof)}/50, max delta {max(t.worst for t in prof):.3f}",
    )


def criterion_5():
    region = ParabolaRegion(2, 20)
    gens = [build_cover_root(20, koebe=4.0)]
    for _ in range(2):
        gens.append(refine_cover(gens[-1], region, M=10))
    hi = [log_hausdorff_sum(g, 1.6) for g in gens]
    lo = [log_hausdorff_sum(g, 1.3) for g in gens]
    counts_ok = all(g.worst_count_ratio[0] <= g.worst_count_ratio[1] for g in gens[1:])
    growth_ok = all(b.log_min_re >= a.min_re - math.log(2) - 1e-9 for a, b in zip(gens, gens[1:]))
    ok = hi[0] > hi[1] > hi[2] and lo[0] < lo[1] < lo[2] and counts_ok and growth_ok
    return report(
        5, ok,
        "log sums d=1.6 " + " > ".join(f"{v:.4g}" for v in hi)
        + "; d=1.3 " + " < ".join(f"{v:.4g}" for v in lo)
        + f"; counts within N: {counts_ok}; xi growth: {growth_ok}",
    )


def criterion_6():
    ray = trace_parameter_ray(ExternalAddress.zeros(), 2, 30, 20_000)
    ray_fit = box_dimension(ray.values, 1.0, 0.02, 6)
    esc = escape_set_sample(0j, 1 + 1j, 800, n_max=50)
    esc_fit = box_dimension(esc, 0.1, 0.005, 6)
    seg = np.linspace(0, 1, 100_000) * (1 + 0.5j)
    seg_fit = box_dimension(seg, 0.1, 0.002, 6)
    g = (np.arange(1000) + 0.5) / 1000
    square = (g[:, None] + 1j * g[None, :]).ravel()
    sq_fit = box_dimension(square, 0.1, 0.005, 6)
    parts = {
        "ray": abs(ray_fit.slope - 1) <= 0.15,
        "escape": esc_fit.slope >= 1.8,
        "segment": abs(seg_fit.slope - 1) <= 0.05,
        "square": abs(sq_fit.slope - 2) <= 0.05,
    }
    return report(
        6, all(parts.values()),
        f"ray {ray_fit.slope:.3f}, escape set {esc_fit.slope:.3f} ({len(esc)} points), "
        f"segment {seg_fit.slope:.3f}, square {sq_fit.slope:.3f}; failing: {[k for k, v in parts.items() if not v]}",
    )


def criterion_7():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        digests = set()
        for w in (1, 4, 8):
            out = tmp / f"w{w}.pgm"
            main(["render", "--rect=-1,-1,1,1", "--grid", "300", "--workers", str(w), "--out", str(out)])
            digests.add(hashlib.sha256(out.read_bytes()).hexdigest())
        csv_path = tmp / "ray.csv"
        main(["trace", "par", "--address", "2,-1|1", "--tmin", "2", "--tmax", "25",
              "--samples", "200", "--out", str(csv_path)])
        line = trace_parameter_ray(ExternalAddress.parse("2,-1|1"), 2, 25, 200)
        round_trip = np.array_equal(read_points(str(csv_path)), np.array(line.values))
    return report(7, len(digests) == 1 and round_trip,
                  f"render digests across workers 1/4/8: {len(digests)} distinct; CSV round trip exact: {round_trip}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_acceptance(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
