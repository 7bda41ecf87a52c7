"""
One-dimensional rays, two-dimensional escape locus
==================================================

Box counting on a traced parameter ray gives slope near 1. The escaping
parameters in the unit square give a much larger slope at desk scale,
although hyperbolic components with attracting cycles take up most of
the area there, which keeps the finite-grid estimate below 2.
"""
import numpy as np

from expray import ExternalAddress
from expray.cli import pgm_bytes
from expray.fractaldim import box_dimension, escape_set_sample, escape_time_grid
from expray.pararay import trace_parameter_ray

ray = trace_parameter_ray(ExternalAddress.zeros(), 2.0, 30.0, 5000)
fit = box_dimension(ray.values, 1.0, 0.02, 6)
print("parameter ray: slope %.3f, r^2 %.4f" % (fit.slope, fit.r_squared))

pts = escape_set_sample(0j, 1 + 1j, 400, n_max=50)
print("escaping fraction of the grid:", len(pts) / 400**2)
fit = box_dimension(pts, 0.1, 0.01, 5)
print("escape set:    slope %.3f, r^2 %.4f" % (fit.slope, fit.r_squared))
for e, n in zip(fit.epsilons, fit.counts):
    print("   eps=%.4f  boxes=%d" % (e, n))

# a picture of a wider window, written as a PGM
idx = escape_time_grid(-4 - 4j, 4 + 4j, 400, n_max=50, workers=2)
with open("escape.pgm", "wb") as fh:
    fh.write(pgm_bytes(idx))
print("bounded pixels:", int(np.sum(idx < 0)), "of", idx.size)
