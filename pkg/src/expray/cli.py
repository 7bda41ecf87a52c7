"""``expray`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 partial or
degenerate result.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from .address import AddressSyntaxError, ExternalAddress
from .dynray import TOL, trace_dynamic_ray
from .expcore import ESCAPE_RE
from .fractaldim import (
    DegenerateFit,
    EmptyRefinement,
    GenerationCapReached,
    ParabolaRegion,
    box_dimension,
    build_cover_root,
    escape_set_sample,
    escape_time_grid,
    extrapolate_log_sum,
    log_hausdorff_sum,
    refine_cover,
)
from .pararay import SOLVE_TOL, trace_parameter_ray
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(x, ".17g")


def fmt_log(log_x: float) -> str:
    """A positive quantity given by its logarithm; exp(...) notation once it leaves double range."""
    if log_x == -math.inf:
        return "0"
    if -700 < log_x < 700:
        return fmt(math.exp(log_x))
    return "inf" if log_x == math.inf else f"exp({fmt(log_x)})"


def write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def trace_csv(entries) -> str:
    lines = ["t,re,im,residual"]
    for e in entries:
        if e.value is not None:
            lines.append(",".join([fmt(e.t), fmt(e.value.real), fmt(e.value.imag), fmt(e.residual)]))
    return "\n".join(lines) + "\n"


def read_points(path: str) -> np.ndarray:
    """Points from a CSV with ``re`` and ``im`` columns (e.g. a trace file)."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    if not rows or "re" not in rows[0] or "im" not in rows[0]:
        raise UsageError(f"{path}: expected a CSV with re and im columns")
    try:
        return np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    except (TypeError, ValueError):
        raise UsageError(f"{path}: non-numeric re/im entry") from None


def parse_address(text: str) -> ExternalAddress:
    try:
        return ExternalAddress.parse(text)
    except AddressSyntaxError as exc:
        raise UsageError(str(exc)) from None


def parse_rect(text: str):
    try:
        a, b, c, d = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad rectangle {text!r}; expected re_lo,im_lo,re_hi,im_hi") from None
    if not (c > a and d > b):
        raise UsageError(f"degenerate rectangle {text!r}")
    return complex(a, b), complex(c, d)


def parse_floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("EXPRAY_WORKERS", "1")))
    except ValueError:
        return 1


# -- subcommands ---------------------------------------------------------------

def cmd_trace(args) -> int:
    s = parse_address(args.address)
    if not args.tmin < args.tmax:
        raise UsageError("--tmin must be below --tmax")
    if args.samples < 2 or not args.tol > 0:
        raise UsageError("--samples must be >= 2 and --tol positive")
    if args.kind == "par":
        line = trace_parameter_ray(s, args.tmin, args.tmax, args.samples, args.tol)
    else:
        line = trace_dynamic_ray(complex(args.kappa), s, args.tmin, args.tmax, args.samples, args.tol)
    write_text(args.out, trace_csv(line.entries))
    return EXIT_PARTIAL if line.truncated else EXIT_OK


def cmd_verify(args) -> int:
    trials = run_suite(args.suite, args.trials, args.seed)
    print(f"suite {args.suite}, {args.trials} trials, seed {args.seed}")
    for tr in trials:
        print(f"{tr.index:5d}  {'PASS' if tr.passed else 'FAIL'}  {tr.detail}")
    failed = [tr.index for tr in trials if not tr.passed]
    finite = [tr.worst for tr in trials if math.isfinite(tr.worst)]
    print(f"passed {len(trials) - len(failed)}/{len(trials)}; max statistic {max(finite, default=math.nan):.6g}")
    if failed:
        print(f"failing trials {failed}; reproduce with --seed {args.seed} --trials {args.trials}")
        return EXIT_FAIL
    return EXIT_OK


def cover_report(p: float, xi0: float, M: float, ds: Sequence[float], generations: int):
    """Rows (generation, count, min_re, d, sum, monotone_decreasing, analytic) with log-valued fields."""
    region = ParabolaRegion(p, xi0)
    gens = [build_cover_root(xi0)]
    rows = []
    for _ in range(generations):
        try:
            gens.append(refine_cover(gens[-1], region, M))
        except GenerationCapReached:
            break
    for d in ds:
        prev, decreasing = None, True
        for g in gens:
            ls = log_hausdorff_sum(g, d)
            if prev is not None:
                decreasing = decreasing and ls < prev
            rows.append((g.generation, g.log_count, g.log_min_re, d, ls, decreasing, False))
            prev = ls
        log_min = gens[-1].log_min_re
        for n in range(len(gens), generations + 1):
            xi_n = math.exp(log_min) if log_min < 700 else math.inf
            ls_new, log_min = extrapolate_log_sum(prev, xi_n, p, d)
            diff = ls_new - prev
            # both sums beyond double range: the exponent 1 + 1/p - d decides the direction
            decreasing = decreasing and (diff < 0 if not math.isnan(diff) else d > 1 + 1 / p)
            rows.append((n, math.nan, log_min, d, ls_new, decreasing, True))
            prev = ls_new
    return rows


def cmd_cover(args) -> int:
    if not args.p > 1:
        raise UsageError("--p must exceed 1")
    if not args.xi0 > 0 or args.M < 0 or args.generations < 0:
        raise UsageError("need --xi0 > 0, --M >= 0, --generations >= 0")
    ds = parse_floats(args.d)
    if not ds or min(ds) <= 0:
        raise UsageError("--d must list positive exponents")
    try:
        rows = cover_report(args.p, args.xi0, args.M, ds, args.generations)
    except EmptyRefinement as exc:
        print(f"empty refinement: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    lines = ["generation,count,min_re,d,sum,monotone_decreasing,analytic"]
    for gen, lc, lm, d, ls, dec, analytic in rows:
        count = "nan" if math.isnan(lc) else fmt_log(lc)
        lines.append(
            f"{gen},{count},{fmt_log(lm)},{fmt(d)},{fmt_log(ls)},{str(dec).lower()},{str(analytic).lower()}"
        )
    write_text(args.out, "\n".join(lines) + "\n")
    for d in ds:
        final = [r for r in rows if r[3] == d][-1]
        print(f"d={d:g} decreasing: {str(final[5]).lower()}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def pgm_bytes(indices: np.ndarray) -> bytes:
    img = np.where(indices < 0, 0, np.minimum(indices, 255)).astype(np.uint8)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def cmd_render(args) -> int:
    lo, hi = parse_rect(args.rect)
    if not 2 <= args.grid <= 16384:
        raise UsageError("--grid must be in [2, 16384]")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    idx = escape_time_grid(lo, hi, args.grid, args.nmax, args.escape_re, args.workers)
    data = pgm_bytes(idx)
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    return EXIT_OK


def cmd_boxdim(args) -> int:
    if args.levels < 3:
        raise UsageError("--levels must be >= 3")
    if not args.eps_hi > args.eps_lo > 0:
        raise UsageError("need --eps-hi > --eps-lo > 0")
    if args.source == "file":
        if not args.points:
            raise UsageError("--points is required for source 'file'")
        pts = read_points(args.points)
    else:
        lo, hi = parse_rect(args.rect)
        pts = escape_set_sample(lo, hi, args.grid, args.nmax, args.escape_re, args.workers)
    if len(pts) == 0:
        print("no points to count", file=sys.stderr)
        return EXIT_PARTIAL
    try:
        fit = box_dimension(pts, args.eps_hi, args.eps_lo, args.levels)
    except DegenerateFit as exc:
        print(f"degenerate fit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"slope {fit.slope:.6f}  r^2 {fit.r_squared:.6f}")
    lines = ["epsilon,count"] + [f"{fmt(e)},{n}" for e, n in zip(fit.epsilons, fit.counts)]
    for line in lines[1:]:
        print("  " + line.replace(",", "  "))
    if args.out not in (None, "-"):
        write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="expray", description="Rays and dimension experiments for e^z + kappa")
    sub = ap.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("trace", help="trace a dynamic or parameter ray to CSV")
    tr.add_argument("kind", choices=["dyn", "par"])
    tr.add_argument("--address", required=True)
    tr.add_argument("--tmin", type=float, required=True)
    tr.add_argument("--tmax", type=float, required=True)
    tr.add_argument("--samples", type=int, default=256)
    tr.add_argument("--tol", type=float, default=None)
    tr.add_argument("--kappa", type=complex, default=0j, help="parameter for dynamic rays, e.g. 0.2+0.1j")
    tr.add_argument("--out")
    tr.set_defaults(func=cmd_trace)

    ve = sub.add_parser("verify", help="run a seeded verification suite")
    ve.add_argument("suite", choices=sorted(SUITES))
    ve.add_argument("--trials", type=int, default=100)
    ve.add_argument("--seed", type=int, default=0)
    ve.set_defaults(func=cmd_verify)

    co = sub.add_parser("cover", help="standard-square covering experiment")
    co.add_argument("--p", type=float, default=2.0)
    co.add_argument("--xi0", type=float, default=20.0)
    co.add_argument("--M", type=float, default=10.0)
    co.add_argument("--d", default="1.6", help="comma-separated exponents")
    co.add_argument("--generations", type=int, default=2)
    co.add_argument("--out")
    co.set_defaults(func=cmd_cover)

    common_grid = argparse.ArgumentParser(add_help=False)
    common_grid.add_argument("--rect", default="0,0,1,1", help="re_lo,im_lo,re_hi,im_hi")
    common_grid.add_argument("--grid", type=int, default=800)
    common_grid.add_argument("--nmax", type=int, default=50)
    common_grid.add_argument("--escape-re", type=float, default=ESCAPE_RE)
    common_grid.add_argument("--workers", type=int, default=default_workers())

    re_ = sub.add_parser("render", parents=[common_grid], help="escape-time PGM of parameter space")
    re_.add_argument("--out")
    re_.set_defaults(func=cmd_render)

    bd = sub.add_parser("boxdim", parents=[common_grid], help="box-counting dimension fit")
    bd.add_argument("source", choices=["file", "render-escape"])
    bd.add_argument("--points", help="CSV with re,im columns")
    bd.add_argument("--eps-hi", type=float, default=0.1)
    bd.add_argument("--eps-lo", type=float, default=0.005)
    bd.add_argument("--levels", type=int, default=6)
    bd.add_argument("--out")
    bd.set_defaults(func=cmd_boxdim)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "tol", "unset") is None:
        args.tol = SOLVE_TOL if args.kind == "par" else TOL
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"expray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
