"""
From topological recursion to kappa_{g,1}
=========================================

Both spectral curves live on x = z + 1/z with branch points z = +1 and z = -1.
The recursion produces W_1^{(g)} as exact polar parts there.  Integrating it
from z = infinity to z = 0 gives kappa_{g,1}, once a single orientation sign
is fixed at one calibration point.
"""

from virteuler.onept import ode_series_solve
from virteuler.tr import (
    calibrate_orientation,
    curve_preset,
    sw_chain_check,
    sw_t0_integral,
    tr_correlator,
    tr_property_checks,
    x_expansion,
)

legendre, gue = curve_preset("legendre"), curve_preset("gue")
print(legendre.regularity, gue.regularity)

w11 = tr_correlator(legendre, 1, 1)
print("Legendre W_1^(1) polar parts:", {k: str(v) for k, v in w11.terms.items()})

# Re-expanded at x = infinity it matches the ODE table up to sign.
print([str(v) for v in x_expansion(w11, 4)])
print([str(-v) for v in ode_series_solve(1, 4).row(1)])

orientation = calibrate_orientation()
print("orientation:", orientation)
print("Legendre:", [str(sw_t0_integral(legendre, g, orientation)) for g in (1, 2, 3)])
print("GUE:", [str(sw_t0_integral(gue, g, orientation)) for g in (1, 2)])

print(sw_chain_check(legendre, 3))
print(sw_chain_check(gue, 2))
print(sw_chain_check(legendre, 3, orientation=-orientation))

print(tr_property_checks(gue, 2))
