"""
Critical values and their growth with N
=======================================

Small N uses the exact distribution, large N uses simulation. The
critical value grows roughly like a line in ln N.
"""

from runstat import critical_value_scaling

alphas = (0.05, 0.01, 0.001)
ns = (5, 10, 25, 50, 100, 500)

# K = 20000 keeps this quick; the table entries above N = 50 wobble by a few tenths
result = critical_value_scaling(alphas, ns, k=20_000, seed=3)

print("alpha  " + "".join(f"{n:>8}" for n in ns))
for a in alphas:
    cells = "".join(f"{result.table[(a, n)]:8.2f}" for n in ns)
    print(f"{a:<7}{cells}")

for a, (slope, intercept) in result.fits.items():
    print(f"alpha={a}: T_crit ~ {slope:.2f} ln N + {intercept:.2f}")
