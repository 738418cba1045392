"""
A threshold in the alternating family
=====================================

a_n = (-1)^n / n^s is a kernel with the 2-adic factor flipped. After the
kernel is stripped, a linear factor in the first variable remains; it has a
zero inside the disk exactly when |a_2| = 2^(-s) exceeds 1/2.
"""

from bohrkit import BohrSeries, decide

N = 4000

for s in (0.5, 0.6, 0.8, 0.95, 1.0, 1.2, 1.5, 2.0):
    F = BohrSeries.from_function(N, lambda n: (-1.0) ** n / n.astype(float) ** s)
    v = decide(F)
    factor = next(step.inputs["factor"] for step in v.trace if step.rule == "R7")
    print(f"s={s:<4}  |a_2|={2 ** -s:.3f}  factor {[round(c.real, 4) for c in factor]}  -> {v.status}")

# The trace is a readable certificate
v = decide(BohrSeries.from_function(N, lambda n: (-1.0) ** n / n.astype(float) ** 0.6))
for step in v.trace:
    print(step.rule, step.conclusion, {k: step.inputs[k] for k in list(step.inputs)[:3]})
