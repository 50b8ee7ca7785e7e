"""
Virtual Euler characteristics along two routes
==============================================

The Gaussian free energy is a sum of genus terms read off from the asymptotics
of log G(N + 1).  Differentiating each term in t0 gives kappa_{g,s}.  Here we
compare that route with the closed forms and look at the sign relation between
them.
"""

from fractions import Fraction

from virteuler.genfunc import (
    barnes_genus_terms,
    kappa_closed_gaussian,
    kappa_sw_route,
    reconcile_conventions,
)

# Genus terms up to g = 4; each is a single power of t0 beyond genus one.
terms = barnes_genus_terms(4)
for F in terms:
    print(f"2g = {F.two_g}: powers {F.powers}, log terms {F.log_terms}")

# The t0-derivative route.
table = kappa_sw_route(terms, s_max=4, ensemble="gaussian")
for (two_g, s), value in table.sorted_entries():
    closed = kappa_closed_gaussian(two_g // 2, s)
    print(f"g={two_g // 2} s={s}: derivative route {value}, closed form {closed}, "
          f"ratio {value / closed}")

# The ratio is (-1)^s for g >= 1 and -1 on the sphere; the check asserts this.
print(reconcile_conventions("gaussian", g_max=6, s_max=8))

# One-face values equal zeta(1 - 2g).
print([kappa_closed_gaussian(g, 1) for g in range(1, 6)])
print(Fraction(-1, 12) == kappa_closed_gaussian(1, 1))
