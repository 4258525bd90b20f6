import math
from itertools import product

import numpy as np
import pytest
from scipy.special import gammainc


def brute_partitions(n, largest=None):
    """All partitions of n as non-increasing tuples, by plain recursion."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in brute_partitions(n - k, k):
            yield (k,) + rest


def success_runs(bits):
    runs, run = [], 0
    for b in bits:
        if b:
            run += 1
        elif run:
            runs.append(run)
            run = 0
    if run:
        runs.append(run)
    return runs


def all_sequences(n):
    return product((False, True), repeat=n)


def generating_function_cdf(t, n):
    """P(T < t | N) from the multinomial theorem: the sum over partitions of r
    into M parts of prod F_l^{n_l} M!/prod n_l! equals [x^r] (sum_l F_l x^l)^M.

    Uses scipy's incomplete gamma and never enumerates a partition.
    """
    f = np.zeros(n + 1)
    f[1:] = gammainc(np.arange(1, n + 1) / 2.0, t / 2.0)
    power = np.zeros(n + 1)
    power[0] = 1.0
    total = 0.0
    for m in range(1, n + 1):
        power = np.convolve(power, f)[: n + 1]
        for r in range(m, n + 1):
            if m <= n - r + 1:
                total += math.comb(n - r + 1, m) * power[r]
    return total / (2.0 ** n - 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
