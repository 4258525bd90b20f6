"""
T after fitting a straight line
===============================

Fitting the slope and intercept pulls the model toward the data, so the
largest run shrinks and the critical values drop well below the no-fit ones.
"""

import numpy as np

from runstat import fit_study

result = fit_study(n=10, k=10_000, slope=1.0, intercept=0.0, sigma=1.0, seed=0)

for alpha in (0.05, 0.01, 0.001):
    fitted = result.critical_values["both"][alpha]
    print(f"alpha={alpha}: fitted {fitted:.2f}  no fit {result.nofit_critical_values[alpha]:.2f}")

print()
print(f"{'t':>5} {'p fitted':>9} {'p no fit':>9}")
for t, p, se, p0 in result.pvalue_curve(np.arange(2.0, 16.0, 2.0), "success"):
    print(f"{t:5.1f} {p:9.4f} {p0:9.4f}")
