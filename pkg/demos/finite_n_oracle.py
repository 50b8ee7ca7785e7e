"""
Exact finite-N ground truth
===========================

Orthogonal polynomials give exact norms, partition functions and moments.
Moments are rational functions of N; reconstructing them and expanding at
N = infinity yields genus coefficients with no asymptotics involved.
"""

from virteuler.oracle import (
    appendix_ode_check,
    genus_extract,
    moments_by_polynomials,
    moments_exact,
    norms_and_partition,
    partition_identity_check,
    rational_reconstruct,
)

h, Z = norms_and_partition("legendre", 4)
print("norms:", [str(v) for v in h], "Z =", Z)
print(partition_identity_check(N_max=30))

# Jacobi-matrix moments and explicit polynomial integrals agree.
for k in range(4):
    print(k, moments_exact("legendre", k, 5), moments_by_polynomials("legendre", k, 5))

P, Q = rational_reconstruct(lambda n: moments_exact("legendre", 2, n))
print("<tr M^4> =", P, "/", Q)
for k in range(5):
    print(f"k={k}:", [str(v) for v in genus_extract("legendre", k, 3)])

print(appendix_ode_check(N_max=8, k_max=8))
