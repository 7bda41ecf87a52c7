"""
Covering sums around 1 + 1/p
============================

Start from one standard square at real part xi0 and pull the parabola
P_{p,xi} back through e^z + kappa'. Pieces shrink by the chain derivative
and multiply by roughly e^{xi(1 + 1/p)}, so sums of diam^d fall for
d > 1 + 1/p and grow for d < 1 + 1/p.
"""
import math

from expray.fractaldim import (
    GenerationCapReached,
    ParabolaRegion,
    build_cover_root,
    count_covering_squares,
    extrapolate_log_sum,
    log_hausdorff_sum,
    refine_cover,
)

p, xi0, M = 2.0, 20.0, 10.0
region = ParabolaRegion(p, xi0)
print("N(xi0) =", count_covering_squares(p, xi0, M))

gens = [build_cover_root(xi0)]
while True:
    try:
        gens.append(refine_cover(gens[-1], region, M))
    except GenerationCapReached as exc:
        print("stop:", exc)
        break

for g in gens:
    print(f"generation {g.generation}: log count {g.log_count:.6g}, log min Re {g.log_min_re:.6g}")

# everything is kept in logs; sums are printed as log values
for d in (1.3, 1.5, 1.6):
    sums = [log_hausdorff_sum(g, d) for g in gens]
    print(f"d={d}: log sums", ["%.6g" % v for v in sums])
    ls, lm = extrapolate_log_sum(sums[-1], math.inf, p, d)
    print("   next generation by the integral estimate:", ls)
