"""Monte Carlo null distribution of T for large N: sampling, ECDF p-values,
critical values and their log N scaling."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .exact import ExactConfig, exact_critical_value
from .errors import DataValidationError, EmptySampleError, InsufficientTailError
from .runs import FAILURE, SIDES, SUCCESS, max_run_weights

__all__ = [
    "McConfig",
    "Ecdf",
    "NullSampleSet",
    "McPValue",
    "ScalingResult",
    "simulate_statistics",
    "simulate_null",
    "mc_pvalue",
    "mc_critical_value",
    "critical_value_scaling",
]

SIDE_POLICIES = SIDES + ("both",)
_CSV_MAGIC = "# runstat null samples v1"


@dataclass(frozen=True)
class McConfig:
    n: int
    k: int = 100_000
    seed: int = 0
    side: str = "both"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("K must be at least 1")
        if self.n < 1:
            raise ValueError("N must be at least 1")
        if self.side not in SIDE_POLICIES:
            raise ValueError(f"side must be one of {SIDE_POLICIES}, got {self.side!r}")

    @property
    def sides(self):
        return SIDES if self.side == "both" else (self.side,)


@dataclass(frozen=True)
class Ecdf:
    """Empirical CDF through the points ``(x_(i), (i - 1/2) / K)``, linear in
    between, 0 below the smallest sample and 1 above the largest."""

    x: np.ndarray
    cumulative: np.ndarray

    @classmethod
    def from_sorted(cls, values):
        k = values.size
        return cls(values, (np.arange(1, k + 1) - 0.5) / k)

    def __call__(self, t):
        return np.interp(t, self.x, self.cumulative, left=0.0, right=1.0)

    def inverse(self, q):
        """Smallest t with ECDF(t) = q, interpolating between order statistics."""
        return float(np.interp(q, self.cumulative, self.x))


@dataclass(frozen=True, eq=False)
class NullSampleSet:
    """Sorted null values of T for one side, plus how many experiments had
    no run of that side and were dropped."""

    side: str
    values: np.ndarray
    discarded: int
    config: McConfig = field(default=None)

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=float))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def retained(self):
        return self.values.size

    @property
    def k(self):
        return self.retained + self.discarded

    def ecdf(self):
        if self.retained == 0:
            raise EmptySampleError(f"no {self.side} samples retained")
        return Ecdf.from_sorted(self.values)

    def __eq__(self, other):
        if not isinstance(other, NullSampleSet):
            return NotImplemented
        return (
            self.side == other.side
            and self.discarded == other.discarded
            and self.config == other.config
            and np.array_equal(self.values, other.values)
        )

    def to_csv(self, path):
        cfg = self.config
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(_CSV_MAGIC + "\n")
            fh.write(f"# side={self.side}\n")
            if cfg is not None:
                fh.write(f"# n={cfg.n}\n# k={cfg.k}\n# seed={cfg.seed}\n# policy={cfg.side}\n")
            fh.write(f"# retained={self.retained}\n# discarded={self.discarded}\n")
            fh.write("t_obs\n")
            for v in self.values.tolist():
                fh.write(f"{v!r}\n")

    @classmethod
    def from_csv(cls, path):
        meta = {}
        values = []
        with open(path, newline="", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
            if first != _CSV_MAGIC:
                raise DataValidationError(f"{path}: not a runstat null-sample file", row=1)
            lineno = 1
            header_seen = False
            for line in fh:
                lineno += 1
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    meta[key.strip()] = value.strip()
                    continue
                if not header_seen:
                    if line != "t_obs":
                        raise DataValidationError(f"expected header 't_obs', got {line!r}", row=lineno)
                    header_seen = True
                    continue
                try:
                    values.append(float(line))
                except ValueError:
                    raise DataValidationError(f"not a number: {line!r}", row=lineno) from None
        try:
            side = meta["side"]
            discarded = int(meta["discarded"])
            config = None
            if "n" in meta:
                config = McConfig(n=int(meta["n"]), k=int(meta["k"]), seed=int(meta["seed"]),
                                  side=meta.get("policy", side))
        except (KeyError, ValueError) as exc:
            raise DataValidationError(f"{path}: bad or missing header field: {exc}") from None
        if "retained" in meta and int(meta["retained"]) != len(values):
            raise DataValidationError(
                f"{path}: header says {meta['retained']} values, file has {len(values)}"
            )
        return cls(side, np.array(values), discarded, config)


def simulate_statistics(k, n, seed, stream=0, transform=None, threads=None):
    """T for both sides over ``k`` simulated experiments of ``n`` standard
    normals, in experiment order; NaN marks a missing side.

    ``transform(z, first_row)`` may replace the standardized residuals of a
    block before the runs are scored.
    """
    def run(block):
        index, rows = block
        z = rng.normal_block(seed, index, rows, n, stream=stream)
        if transform is not None:
            z = transform(z, index * rng.BLOCK_SIZE)
        return max_run_weights(z)

    work = rng.blocks(k)
    threads = threads if threads is not None else (os.cpu_count() or 1)
    if threads == 1 or len(work) == 1:
        parts = [run(b) for b in work]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, work))
    succ = np.concatenate([p[0] for p in parts])
    fail = np.concatenate([p[1] for p in parts])
    return succ, fail


def _sample_sets(succ, fail, config):
    out = {}
    for side, arr in ((SUCCESS, succ), (FAILURE, fail)):
        if side not in config.sides:
            continue
        keep = arr[~np.isnan(arr)]
        if keep.size == 0:
            raise EmptySampleError(f"all {config.k} experiments lack a {side} run")
        out[side] = NullSampleSet(side, keep, int(arr.size - keep.size), config)
    return out


def simulate_null(config, threads=None):
    """Sample the null distribution of T; returns ``{side: NullSampleSet}``."""
    succ, fail = simulate_statistics(config.k, config.n, config.seed, threads=threads)
    return _sample_sets(succ, fail, config)


@dataclass(frozen=True)
class McPValue:
    p: float
    se: float
    beyond_support: bool


def mc_pvalue(t_obs, samples):
    """Fraction of retained null samples at or above ``t_obs``, with its
    binomial standard error."""
    k = samples.retained
    if k == 0:
        raise EmptySampleError(f"no {samples.side} samples retained")
    below = int(np.searchsorted(samples.values, t_obs, side="left"))
    p = (k - below) / k
    se = math.sqrt(p * (1.0 - p) / k)
    return McPValue(p, se, bool(t_obs > samples.values[-1]))


def mc_critical_value(alpha, samples):
    """t with 1 - ECDF(t) = alpha, interpolated between order statistics."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k = samples.retained
    if k == 0:
        raise EmptySampleError(f"no {samples.side} samples retained")
    if k * min(alpha, 1.0 - alpha) < 10:
        raise InsufficientTailError(
            f"only {k} samples: need K * min(alpha, 1 - alpha) >= 10 for alpha={alpha}; increase K"
        )
    return samples.ecdf().inverse(1.0 - alpha)


@dataclass(frozen=True)
class ScalingResult:
    """Critical values per ``(alpha, N)`` with the least-squares line
    ``T_crit = slope * ln N + intercept`` per alpha."""

    table: dict
    fits: dict
    methods: dict

    def rows(self):
        alphas = sorted({a for a, _ in self.table}, reverse=True)
        ns = sorted({n for _, n in self.table})
        return alphas, ns


def critical_value_scaling(alphas, ns, k=100_000, seed=0, exact_max=50, side=SUCCESS, threads=None):
    """Critical values over an (alpha, N) grid and a line fit in ln N per alpha.

    N up to ``exact_max`` uses the exact distribution; larger N uses Monte
    Carlo with ``k`` experiments.
    """
    ns = sorted(set(int(n) for n in ns))
    if len(ns) < 2:
        raise ValueError("need at least two distinct N to fit a line")
    table, methods = {}, {}
    for n in ns:
        if n <= exact_max:
            cfg = ExactConfig(max_n=max(exact_max, n), threads=threads)
            for a in alphas:
                table[(a, n)] = exact_critical_value(a, n, cfg)
            methods[n] = "exact"
        else:
            samples = simulate_null(McConfig(n=n, k=k, seed=seed, side=side), threads=threads)[side]
            for a in alphas:
                table[(a, n)] = mc_critical_value(a, samples)
            methods[n] = "mc"
    log_n = np.log(np.array(ns, dtype=float))
    fits = {}
    for a in alphas:
        slope, intercept = np.polyfit(log_n, [table[(a, n)] for n in ns], 1)
        fits[a] = (float(slope), float(intercept))
    return ScalingResult(table, fits, methods)
