"""
How many terms does the exact sum have?
=======================================

Every success sequence is summarized by its multiset of run lengths. The
number of such classes for N observations is p(N+1) - 1, which grows
quickly enough to put a practical ceiling on the exact method.
"""

from runstat import count_partitions, enumerate_partitions, hardy_ramanujan_estimate, inequivalent_sequence_count

# The three partitions of 5 into 3 parts, largest part first
print([p.parts for p in enumerate_partitions(5, 3)])

for n in (10, 20, 40, 60, 80):
    nu = inequivalent_sequence_count(n)
    print(f"N={n:3d}  classes={nu:>12,}  estimate ratio={hardy_ramanujan_estimate(n) / nu:.3f}")

# Exact arithmetic stays exact well past 64 bits
print("p(1000) =", count_partitions(1000))
