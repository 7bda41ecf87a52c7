"""
Parameter rays
==============

kappa lies on the parameter ray G_s at potential t exactly when the dynamic
ray g_{kappa,s} passes through kappa at t. Newton's method on
h(kappa) = g_{kappa,s}(t) - kappa solves this; h'(kappa) is close to -1, so
convergence is quick.
"""
from expray import ExternalAddress
from expray.expcore import singular_orbit
from expray.pararay import (
    classify_parabola_membership,
    derivative_growth_profile,
    singular_asymptotics_profile,
    solve_parameter_ray_point,
    trace_parameter_ray,
)

s = ExternalAddress.parse("1,-2")
pt = solve_parameter_ray_point(s, 6.0)
print("kappa =", pt.kappa, "residual", pt.residual, "steps", pt.newton_steps)

# parameters on rays escape
print(singular_orbit(pt.kappa))

# the singular orbit follows F^n(t) + 2 pi i s_{n+1}
print("deviation:", [round(d, 6) for d in singular_asymptotics_profile(pt, s, 10)])
print("|(E^n)'|: ", ["%.3g" % d for d in derivative_growth_profile(pt, 10)])
print("parabola p=2, xi=1:", classify_parabola_membership(pt, 2, 1, 10))

# continuation from far out toward small potentials
line = trace_parameter_ray(s, 1.0, 30.0, 12)
for e in line.entries:
    print(f"t={e.t:7.3f}  kappa={e.value:.6f}")
print("truncated:", line.truncated)
