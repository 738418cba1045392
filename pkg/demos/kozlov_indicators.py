"""
Indicator functions and their dilation systems
==============================================

The indicator of (0, theta), extended odd and 2-periodic, becomes a Bohr
series F_theta. Dividing out the series sum 1/n leaves G_theta, which for a
few rational theta is a short polynomial in the first two variables.
"""

import math

from bohrkit import finite_support_evidence, kozlov_G
from bohrkit.dilation import kozlov_decide

N = 5000
scale = 1 / (math.sqrt(2) * math.pi)

# The quotient, shown in units of 1/(sqrt 2 pi)
for theta in ("1", "1/2", "2/3", "1/3"):
    G = kozlov_G(theta, N).pruned(1e-12)
    terms = {n: round(v.real / scale, 12) for n, v in G}
    print(f"theta={theta:>3}  G = {terms}")

# Verdicts: divide by the kernel, then factor or search for a zero
for theta in ("1", "1/2", "2/3", "1/3"):
    v = kozlov_decide(theta, N)
    print(f"theta={theta:>3}  {v.status:<9} rules {v.rules}")

# For theta=1/3 the engine finds a zero of G; the certified distance bound
v = kozlov_decide("1/3", N)
print("zero", v.certificate["zero"], "bound", round(v.certificate["bound"], 6))

# Other theta: coefficients at primes do not vanish, so G needs infinitely many variables
for theta in ("1/4", "2/5", 1 / math.pi):
    ev = finite_support_evidence(kozlov_G(theta, N), 30)
    print(f"theta={theta}  |G_p| for p<=30:", [f"{c:.3f}" for _, c in ev])
