"""Integer partitions: counting tables, streaming enumeration and the
sequence-counting identities used to size the exact p-value computation.

Counts are Python integers (arbitrary precision); p(n) leaves the 64-bit
range near n = 416.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "PartitionCounts",
    "PartitionView",
    "count_partitions",
    "count_partitions_exact_parts",
    "count_partitions_max_part",
    "enumerate_partitions",
    "inequivalent_sequence_count",
    "hardy_ramanujan_estimate",
]


@dataclass(frozen=True)
class PartitionView:
    """One partition of ``total`` into ``len(parts)`` parts, largest first."""

    parts: tuple

    def __post_init__(self):
        parts = self.parts
        if any(p < 1 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be non-increasing")

    @property
    def total(self):
        return sum(self.parts)

    @property
    def count(self):
        return len(self.parts)

    def run_lengths(self, n=None):
        """Multiplicity vector (n_1, ..., n_n): how many parts equal each length.

        ``n`` defaults to the largest part.
        """
        size = n if n is not None else (self.parts[0] if self.parts else 0)
        vec = [0] * size
        for p in self.parts:
            vec[p - 1] += 1
        return tuple(vec)

    @classmethod
    def from_run_lengths(cls, n):
        parts = []
        for length in range(len(n), 0, -1):
            parts.extend([length] * n[length - 1])
        return cls(tuple(parts))


class PartitionCounts:
    """Table of p(n, k) for 0 <= k <= n <= n_max, built once and shared read-only.

    Use :meth:`build`, which caches one table per ``n_max``.
    """

    def __init__(self, n_max):
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        self.n_max = n_max
        # p(n, k) = p(n - 1, k - 1) + p(n - k, k)
        table = [[0] * (n_max + 1) for _ in range(n_max + 1)]
        table[0][0] = 1
        for n in range(1, n_max + 1):
            row = table[n]
            for k in range(1, n + 1):
                row[k] = table[n - 1][k - 1] + table[n - k][k]
        self._exact = table
        self._total = [sum(row) for row in table]

    @classmethod
    @lru_cache(maxsize=None)
    def build(cls, n_max):
        return cls(n_max)

    def total(self, n):
        return self._total[n]

    def exact_parts(self, n, k):
        if k > n:
            return 0
        return self._exact[n][k]

    def max_part(self, n, i):
        # Conjugation: largest part <= i  <=>  at most i parts.
        if n == 0:
            return 1
        return sum(self._exact[n][1 : min(i, n) + 1])


def _table_for(n):
    # Round up so nearby queries share a table.
    size = max(64, 1 << max(0, n - 1).bit_length())
    return PartitionCounts.build(size)


@lru_cache(maxsize=None)
def _pentagonal_table(n_max):
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = g1 + k
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def count_partitions(n):
    """Number of partitions p(n) of ``n``; p(0) = 1.

    Uses Euler's pentagonal-number recurrence, independent of the
    two-parameter table behind the other counts.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    size = max(64, 1 << max(0, n).bit_length())
    return _pentagonal_table(size)[n]


def count_partitions_exact_parts(n, k):
    """Number of partitions of ``n`` into exactly ``k`` parts."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be nonnegative")
    if k > n:
        return 0
    return _table_for(n).exact_parts(n, k)


def count_partitions_max_part(n, i):
    """Number of partitions of ``n`` into parts of size at most ``i``."""
    if n < 0 or i < 0:
        raise ValueError("arguments must be nonnegative")
    return _table_for(n).max_part(n, i)


def enumerate_partitions(r, m):
    """Yield every partition of ``r`` into exactly ``m`` parts, once each.

    Order is descending lexicographic on the part tuple, e.g. for (8, 3):
    (6,1,1), (5,2,1), (4,3,1), (4,2,2), (3,3,2). Memory is O(m).
    """
    if m < 1 or m > r:
        return
    # Work on the excess over one: b[k] = part[k] - 1, a partition of r - m
    # into at most m parts padded with zeros.
    b = [0] * m
    b[0] = r - m
    while True:
        yield PartitionView(tuple(x + 1 for x in b))
        # Rightmost position whose decrement can be absorbed to its right.
        suffix = b[m - 1]
        i = m - 2
        while i >= 0:
            v = b[i] - 1
            if v >= 0 and suffix + 1 <= v * (m - 1 - i):
                break
            suffix += b[i]
            i -= 1
        if i < 0:
            return
        v = b[i] - 1
        b[i] = v
        rest = suffix + 1
        for k in range(i + 1, m):
            take = v if rest > v else rest
            b[k] = take
            rest -= take


def inequivalent_sequence_count(n):
    """Number of run-length classes of success/failure sequences of length ``n``
    with at least one success.

    Computed two ways, as the double sum of p(r, M) over
    1 <= r <= n, 1 <= M <= min(r, n - r + 1), and as p(n + 1) - 1; the two
    must agree.
    """
    if n < 1:
        raise ValueError("n must be positive")
    table = _table_for(n)
    double_sum = 0
    for r in range(1, n + 1):
        for m in range(1, min(r, n - r + 1) + 1):
            double_sum += table.exact_parts(r, m)
    closed = count_partitions(n + 1) - 1
    if double_sum != closed:
        raise ArithmeticError(
            f"partition identity violated at n={n}: {double_sum} != {closed}"
        )
    return closed


def hardy_ramanujan_estimate(n):
    """Asymptotic estimate of :func:`inequivalent_sequence_count`, i.e. of p(n + 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    m = n + 1
    return math.exp(math.pi * math.sqrt(2.0 / 3.0 * m)) / (4.0 * math.sqrt(3.0) * m)
