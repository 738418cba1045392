"""
Least-squares distance to the constant 1
========================================

delta_hat(F, N, M) minimizes ||1 - pF|| over polynomials p built from the
monomials indexed 1..N, looking only at coefficients up to M. It is evidence,
never a verdict: cyclic series drift toward 0, series with a zero stay above
the kernel bound.
"""

from bohrkit import delta_sweep, kozlov_F, noncyclicity_bound
from bohrkit.cyclicity import RECIPROCAL_PRIMES, strip_kernel
from bohrkit.dilation import noor_series
from bohrkit.series import Point, reciprocal_kernel

M = 4096
Ns = [1, 4, 16, 64, 256]

# A reproducing kernel is annihilated once the dictionary covers the window
print("K_p     ", [f"{r.value:.2e}" for r in delta_sweep(reciprocal_kernel(512), [1, 64, 512], 512)])

# A cyclic series: slow decay
print("noor m=2", [f"{r.value:.4f}" for r in delta_sweep(noor_series(2, M), Ns, M)])

# A series with a zero: the values stay above 1/||K_lambda||
F = kozlov_F("1/3", M)
print("F_1/3   ", [f"{r.value:.4f}" for r in delta_sweep(F, Ns, M)])
G, _ = strip_kernel(F, RECIPROCAL_PRIMES)
print("bound at the zero (-1/2, -1/3):", round(noncyclicity_bound(G, Point({1: -0.5, 2: -1 / 3})), 6))
