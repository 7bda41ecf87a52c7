"""
Dynamic rays of e^z + kappa
===========================

A dynamic ray is built from the inside out: push the potential t forward
with F(t) = e^t - t, then pull back through logarithm branches chosen by
the external address. Each pull-back contracts by about e^(-Re), so a few
levels are enough.
"""
import cmath

from expray import ExternalAddress
from expray.dynray import (
    functional_residual,
    ray_derivative_kappa,
    ray_derivative_t,
    ray_point,
    ray_point_adaptive,
    trace_dynamic_ray,
)

kappa = 0.2 + 0.1j
s = ExternalAddress.parse("1,0,-1")

# watch the approximations g^m settle
for m in range(6):
    print(m, ray_point(kappa, s, 4.0, m))

res = ray_point_adaptive(kappa, s, 4.0)
print("adaptive:", res.value, "depth", res.depth_used, "gap", res.cauchy_gap)

# the ray is mapped onto the ray of the shifted address at potential F(t)
print("functional equation residual:", functional_residual(kappa, s, 4.0))

# derivatives along the ray and in the parameter
print("dg/dt     =", ray_derivative_t(kappa, s, 4.0))
print("dg/dkappa =", ray_derivative_kappa(kappa, s, 4.0, res.depth_used))

# a short trace; far out the ray hugs the line Im = 2 pi s_1
line = trace_dynamic_ray(kappa, s, 3.0, 12.0, 8)
for e in line.entries:
    print(f"t={e.t:7.3f}  g={e.value:.6f}  residual={e.residual:.1e}")

# conjugate parameter and negated address give the mirror image
a = ray_point_adaptive(kappa, s, 5.0).value
b = ray_point_adaptive(kappa.conjugate(), s.negate(), 5.0).value
print("mirror check:", abs(a - b.conjugate()))
