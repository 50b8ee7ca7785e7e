"""
Legendre one-point function, genus by genus
===========================================

The one-point resolvent of the Legendre ensemble satisfies a third-order linear
ODE in x.  Solving it on Laurent coefficients at x = infinity gives every
genus.  The table is then compared with exact finite-N moments.
"""

from virteuler.onept import (
    f_table,
    five_term_oracle_check,
    kappa_g1_sum,
    kappa_n_table,
    normalization_ratio_check,
    ode_series_solve,
    r_table,
)
from virteuler.oracle import genus_extract, moments_exact

table = ode_series_solve(g_max=3, k_max=5)
for g in range(4):
    print(f"eps_{g}:", [str(v) for v in table.row(g)])

# <tr M^2> at finite N is 2N - 2N/(4N^2 - 1); its large-N expansion
# reproduces the k = 1 column.
print([moments_exact("legendre", 1, N) for N in (1, 2, 3)])
print("oracle k=1:", [str(v) for v in genus_extract("legendre", 1, 3)])

# The five-term recursion with the commonly printed leading coefficient 4k^2
# disagrees with the oracle; the corrected one (2k-1)^2 agrees.
print("printed f_1:", [str(v) for v in f_table("printed", 1, 4).row(1, "f")])
print("corrected f_1:", [str(v) for v in f_table("corrected", 1, 4).row(1, "f")])
print(five_term_oracle_check("printed"))
print(five_term_oracle_check("corrected"))

# u-basis coefficients and the kappa_n recursion.
r = r_table(4)
print("r rows:", {g: [str(v) for v in r.r_row(g)] for g in range(1, 5)})
k = kappa_n_table(4)
print("kappa rows:", {g: [str(v) for v in k.kappa_row(g)] for g in range(1, 5)})
print("row sums:", [str(kappa_g1_sum(g)) for g in range(1, 5)])

# The two normalisations differ by exactly -1/2.
print(normalization_ratio_check(4, 8))
