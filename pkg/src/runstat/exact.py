"""Exact null distribution of T by summing over run-length classes.

P(T < t | N) is a sum over r successes, M success runs and every partition
of r into M parts. Each partition with part-multiplicities n_l contributes

    prod_l F_l(t)^{n_l} * (N - r + 2 - M)_M / ((2^N - 1) * prod_l n_l!)

where F_l is the chi-square CDF with l degrees of freedom. The number of
terms is p(N + 1) - 1.

Two arithmetic modes are available. Exact mode keeps multiplicities as
Python integers and walks :func:`enumerate_partitions`; it is meant for
N <= 30. Log mode runs a compiled kernel per (r, M) cell with log-space,
max-rescaled, compensated accumulation and is used up to the cutover.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numba
import numpy as np

from .errors import CapabilityError
from .partitions import PartitionView, enumerate_partitions
from .special import chi2_cdf, chi2_cdf_table

__all__ = [
    "ExactConfig",
    "SequenceClassTerm",
    "ExactCdf",
    "multiplicity",
    "run_count_sequences",
    "sequence_classes",
    "exact_cdf",
    "exact_cdf_detailed",
    "brute_force_cdf",
    "exact_pvalue",
    "exact_critical_value",
    "BRUTE_FORCE_MAX_N",
]

BRUTE_FORCE_MAX_N = 16
LOG_SPACE_ABOVE = 30


@dataclass(frozen=True)
class ExactConfig:
    """``log_space=None`` picks log mode for N > 30. ``threads=None`` uses all CPUs."""

    max_n: int = 80
    log_space: bool | None = None
    threads: int | None = None

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError("max_n must be at least 1")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be at least 1")

    def use_log_space(self, n):
        return n > LOG_SPACE_ABOVE if self.log_space is None else self.log_space


DEFAULT_CONFIG = ExactConfig()


def _check_n(n, config):
    if n < 1:
        raise ValueError(f"N must be positive, got {n}")
    if n > config.max_n:
        raise CapabilityError(
            f"exact evaluation limited to N <= {config.max_n} (got N={n}); "
            "use the Monte Carlo method or raise the cutover"
        )


def multiplicity(n, N):
    """Number of length-N sequences whose success runs have length counts ``n``.

    ``n[l-1]`` is the number of runs of length l. Equals the multinomial
    M!/prod(n_l!) times binomial(N - r + 1, M).
    """
    if any(c < 0 for c in n):
        raise ValueError("run-length counts must be nonnegative")
    r = sum((l + 1) * c for l, c in enumerate(n))
    m = sum(n)
    if r > N or m > N - r + 1:
        raise ValueError(f"run-length vector {tuple(n)} impossible for N={N}")
    numerator = math.perm(N - r + 1, m)
    denominator = math.prod(math.factorial(c) for c in n)
    return numerator // denominator


def run_count_sequences(m, r, N):
    """Number of length-N sequences with r successes forming exactly m runs."""
    if m < 1 or r < 1 or m > min(r, N - r + 1):
        return 0
    return math.comb(r - 1, m - 1) * math.comb(N - r + 1, m)


@dataclass(frozen=True)
class SequenceClassTerm:
    partition: PartitionView
    run_lengths: tuple
    successes: int
    n_runs: int
    weight: int
    total: int

    @property
    def probability(self):
        return self.weight / self.total


def sequence_classes(N):
    """Yield every run-length class of length-N sequences with at least one
    success, with its exact multiplicity. Order: r ascending, M ascending,
    partitions descending-lexicographic."""
    total = 2 ** N - 1
    for r in range(1, N + 1):
        for m in range(1, min(r, N - r + 1) + 1):
            rising = math.perm(N - r + 1, m)
            for pi in enumerate_partitions(r, m):
                n = pi.run_lengths(N)
                w = rising // math.prod(math.factorial(c) for c in n if c > 1)
                yield SequenceClassTerm(pi, n, r, m, w, total)


class ExactCdf(NamedTuple):
    values: np.ndarray
    terms: int
    log_space: bool


@numba.njit(cache=True, nogil=True)
def _cell_log_sum(N, r, m, log_f, log_fact):
    """Log-space sum over partitions of r into m parts for each row of log_f.

    Returns (shift, scaled_sum, count) with cell total = exp(shift) * scaled_sum.
    """
    n_t = log_f.shape[0]
    shift = np.full(n_t, -np.inf)
    acc = np.zeros(n_t)
    comp = np.zeros(n_t)
    lengths = np.empty(m, np.int64)
    counts = np.empty(m, np.int64)
    b = np.zeros(m, np.int64)
    b[0] = r - m
    log_rising = log_fact[N - r + 1] - log_fact[N - r + 1 - m]
    count = 0
    while True:
        count += 1
        groups = 0
        log_w = log_rising
        k = 0
        while k < m:
            v = b[k]
            c = 1
            while k + c < m and b[k + c] == v:
                c += 1
            lengths[groups] = v + 1
            counts[groups] = c
            log_w -= log_fact[c]
            groups += 1
            k += c
        for ti in range(n_t):
            lt = log_w
            for g in range(groups):
                lt += counts[g] * log_f[ti, lengths[g]]
            if lt == -np.inf:
                continue
            if lt > shift[ti]:
                scale = math.exp(shift[ti] - lt)
                acc[ti] *= scale
                comp[ti] *= scale
                shift[ti] = lt
            # Kahan-compensated add
            y = math.exp(lt - shift[ti]) - comp[ti]
            s = acc[ti] + y
            comp[ti] = (s - acc[ti]) - y
            acc[ti] = s
        # next partition, descending lexicographic
        suffix = b[m - 1]
        i = m - 2
        while i >= 0:
            v = b[i] - 1
            if v >= 0 and suffix + 1 <= v * (m - 1 - i):
                break
            suffix += b[i]
            i -= 1
        if i < 0:
            break
        v = b[i] - 1
        b[i] = v
        rest = suffix + 1
        for k in range(i + 1, m):
            take = v if rest > v else rest
            b[k] = take
            rest -= take
    return shift, acc, count


def _thread_count(config):
    return config.threads if config.threads is not None else (os.cpu_count() or 1)


def _log_mode(ts, N, config):
    table = chi2_cdf_table(ts, N)
    with np.errstate(divide="ignore"):
        log_f = np.log(table)
    log_fact = np.array([math.lgamma(k + 1.0) for k in range(N + 2)])
    cells = [(r, m) for r in range(1, N + 1) for m in range(1, min(r, N - r + 1) + 1)]

    def run(cell):
        return _cell_log_sum(N, cell[0], cell[1], log_f, log_fact)

    threads = _thread_count(config)
    if threads == 1:
        results = [run(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, cells))
    # log(2^N - 1)
    log_norm = N * math.log(2.0) + math.log1p(-(2.0 ** -N))
    shifts = np.array([res[0] for res in results])
    sums = np.array([res[1] for res in results])
    with np.errstate(invalid="ignore"):
        parts = np.where(np.isfinite(shifts), sums * np.exp(shifts - log_norm), 0.0)
    values = np.array([math.fsum(parts[:, i]) for i in range(parts.shape[1])])
    terms = sum(res[2] for res in results)
    return values, terms


def _integer_mode(ts, N):
    table = chi2_cdf_table(ts, N)
    sums = [[] for _ in range(table.shape[0])]
    terms = 0
    for cls in sequence_classes(N):
        terms += 1
        lengths = [(l + 1, c) for l, c in enumerate(cls.run_lengths) if c]
        for i in range(table.shape[0]):
            prob = 1.0
            for l, c in lengths:
                prob *= table[i, l] ** c
            sums[i].append(cls.weight * prob)
    total = 2 ** N - 1
    values = np.array([math.fsum(s) / total for s in sums])
    return values, terms


def exact_cdf_detailed(t, N, config=DEFAULT_CONFIG):
    """Like :func:`exact_cdf` for an array of thresholds, also reporting how
    many partition terms were visited."""
    _check_n(N, config)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < 0) or np.any(np.isnan(ts)):
        raise ValueError("thresholds must be nonnegative")
    log_space = config.use_log_space(N)
    if log_space:
        values, terms = _log_mode(ts, N, config)
    else:
        values, terms = _integer_mode(ts, N)
    return ExactCdf(np.clip(values, 0.0, 1.0), terms, log_space)


def exact_cdf(t, N, config=DEFAULT_CONFIG):
    """P(T < t | N) under the null, given at least one success.

    ``t`` may be a scalar or an array; arrays are evaluated in a single pass
    over the partitions.
    """
    result = exact_cdf_detailed(t, N, config).values
    return float(result[0]) if np.ndim(t) == 0 else result


def exact_pvalue(t_obs, N, config=DEFAULT_CONFIG):
    """P(T >= t_obs | N)."""
    cdf = exact_cdf(t_obs, N, config)
    return 1.0 - cdf


@lru_cache(maxsize=32)
def _success_run_lengths(N):
    classes = []
    for bits in product((False, True), repeat=N):
        if not any(bits):
            continue
        lengths = []
        run = 0
        for b in bits:
            if b:
                run += 1
            elif run:
                lengths.append(run)
                run = 0
        if run:
            lengths.append(run)
        classes.append(tuple(lengths))
    return tuple(classes)


def brute_force_cdf(t, N):
    """P(T < t | N) by averaging over all 2^N - 1 sign sequences with a success."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if N > BRUTE_FORCE_MAX_N:
        raise CapabilityError(f"brute force limited to N <= {BRUTE_FORCE_MAX_N}, got {N}")
    f = [1.0] + [chi2_cdf(t, l) for l in range(1, N + 1)]
    terms = []
    for lengths in _success_run_lengths(N):
        prob = 1.0
        for l in lengths:
            prob *= f[l]
        terms.append(prob)
    return math.fsum(terms) / (2 ** N - 1)


def exact_critical_value(alpha, N, config=DEFAULT_CONFIG, tol=1e-6):
    """Threshold t with P(T >= t | N) = alpha, by bracketing and bisection."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    _check_n(N, config)
    lo, hi = 0.0, 10.0
    p_hi = exact_pvalue(hi, N, config)
    while p_hi > alpha:
        lo, hi = hi, 2.0 * hi
        p_hi = exact_pvalue(hi, N, config)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        p = exact_pvalue(mid, N, config)
        if abs(p - alpha) < tol:
            break
        if p > alpha:
            lo = mid
        else:
            hi = mid
    return mid
