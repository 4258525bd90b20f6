"""Power of the runs statistic T against the classic chi-square test under a
localized peak, and the distribution of T after a straight-line fit."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError
from .exact import DEFAULT_CONFIG as EXACT_DEFAULT
from .exact import exact_critical_value, exact_pvalue
from .montecarlo import McConfig, NullSampleSet, mc_critical_value, mc_pvalue, simulate_null, simulate_statistics
from .runs import FAILURE, SUCCESS
from .special import chi2_cdf

__all__ = [
    "PeakAlternative",
    "PowerCurve",
    "FitStudyResult",
    "cauchy_peak",
    "gauss_peak",
    "chi2_total_pvalue",
    "power_study",
    "fit_study",
    "FIT_ALPHAS",
]

FIT_ALPHAS = (0.05, 0.01, 0.001)
# Philox stream tags keep the studies' draws apart from the null tables.
_POWER_STREAM = 1 << 32
_FIT_STREAM = 2 << 32


@dataclass(frozen=True)
class PeakAlternative:
    amplitude: float
    location: float = 5.5
    scale: float = 2.0
    shape: str = "cauchy"
    baseline: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"peak scale must be positive, got {self.scale}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be nonnegative, got {self.amplitude}")
        if self.shape not in ("cauchy", "gauss"):
            raise ValueError(f"peak shape must be 'cauchy' or 'gauss', got {self.shape!r}")

    def signal(self, x):
        if self.shape == "cauchy":
            return cauchy_peak(x, self)
        return gauss_peak(x, self)


def cauchy_peak(x, alt):
    """A / (1 + (x - location)^2 / scale^2)."""
    x = np.asarray(x, dtype=float)
    return alt.amplitude / (1.0 + ((x - alt.location) / alt.scale) ** 2)


def gauss_peak(x, alt):
    """Gaussian bump with the same height and half width at half maximum as
    :func:`cauchy_peak`."""
    x = np.asarray(x, dtype=float)
    width = alt.scale / math.sqrt(2.0 * math.log(2.0))
    return alt.amplitude * np.exp(-0.5 * ((x - alt.location) / width) ** 2)


def chi2_total_pvalue(series):
    """p-value of the classic chi-square test with N degrees of freedom."""
    return 1.0 - chi2_cdf(series.chi2, len(series))


def _chi2_upper(values, dof):
    return np.array([1.0 - chi2_cdf(float(v), dof) for v in values])


@dataclass(frozen=True)
class PowerCurve:
    amplitudes: np.ndarray
    power_t: np.ndarray
    se_t: np.ndarray
    power_chi2: np.ndarray
    se_chi2: np.ndarray
    se_diff: np.ndarray
    k: int
    alpha: float
    seed: int
    t_critical: float

    def rows(self):
        return [
            (float(a), float(pt), float(st), float(pc), float(sc))
            for a, pt, st, pc, sc in zip(self.amplitudes, self.power_t, self.se_t, self.power_chi2, self.se_chi2)
        ]

    def to_csv(self, fh):
        fh.write("A,power_T,se_T,power_chi2,se_chi2\n")
        for row in self.rows():
            fh.write(",".join(repr(v) for v in row) + "\n")


def _binomial_se(p, k):
    return np.sqrt(p * (1.0 - p) / k)


def power_study(alternatives, n=10, k=10_000, alpha=0.05, seed=0, x=None, null_k=100_000, null_seed=None, threads=None, exact_config=EXACT_DEFAULT):
    """Rejection rates of the success-side T test and the chi-square test.

    Data are drawn with means ``baseline + signal(x_i)`` and unit sigma and
    analyzed against ``baseline``. T rejects when it reaches the null critical
    value, exact when ``n`` is within the exact cutover and otherwise from an
    independent Monte Carlo table (``null_k`` experiments, ``null_seed``).
    Each alternative gets its own random stream.
    """
    if k < 100:
        raise ValueError("K must be at least 100")
    if not alternatives:
        raise ValueError("need at least one alternative")
    x = np.arange(1, n + 1, dtype=float) if x is None else np.asarray(x, dtype=float)
    if x.size != n:
        raise ValueError("design points must have length n")
    if n <= exact_config.max_n:
        t_crit = exact_critical_value(alpha, n, exact_config)
    else:
        seed_null = seed + 1 if null_seed is None else null_seed
        table = simulate_null(McConfig(n=n, k=null_k, seed=seed_null, side=SUCCESS), threads=threads)[SUCCESS]
        t_crit = mc_critical_value(alpha, table)

    amps, pt, pc, sd = [], [], [], []
    for idx, alt in enumerate(alternatives):
        shift = alt.signal(x)
        chi2_values = []

        def add_signal(z, first_row, shift=shift, chi2_values=chi2_values):
            y = z + shift
            chi2_values.append(np.sum(y * y, axis=1))
            return y

        succ, _ = simulate_statistics(k, n, seed, stream=_POWER_STREAM + idx, transform=add_signal, threads=1)
        reject_t = np.nan_to_num(succ, nan=-1.0) >= t_crit
        reject_c = _chi2_upper(np.concatenate(chi2_values), n) <= alpha
        amps.append(alt.amplitude)
        pt.append(reject_t.mean())
        pc.append(reject_c.mean())
        d = reject_t.astype(float) - reject_c.astype(float)
        sd.append(d.std(ddof=1) / math.sqrt(k))
    pt, pc = np.array(pt), np.array(pc)
    return PowerCurve(
        np.array(amps), pt, _binomial_se(pt, k), pc, _binomial_se(pc, k), np.array(sd), k, alpha, seed, t_crit
    )


@dataclass(frozen=True)
class FitStudyResult:
    samples: dict
    critical_values: dict
    nofit_critical_values: dict
    n: int
    k: int
    seed: int

    def pvalue_curve(self, ts, side=SUCCESS):
        """Rows ``(t, fitted p, its standard error, no-fit exact p)``."""
        rows = []
        for t in ts:
            mc = mc_pvalue(t, self.samples[side])
            rows.append((float(t), mc.p, mc.se, exact_pvalue(float(t), self.n)))
        return rows


def fit_study(n=10, k=10_000, slope=1.0, intercept=0.0, sigma=1.0, seed=0, x=None, alphas=FIT_ALPHAS, threads=None):
    """Null distribution of T when the straight line is fitted to the data.

    Each experiment draws ``y_i ~ N(slope * x_i + intercept, sigma^2)``, fits
    the line by least squares and scores the residuals. Critical values are
    reported for each side and for both sides pooled ("both"): residual signs
    flip under reflection of the noise, so the two sides share one law.
    """
    if n < 3:
        raise DataValidationError(f"fit study needs at least 3 points for a 2-parameter fit, got {n}")
    if not sigma > 0:
        raise DataValidationError(f"sigma must be positive, got {sigma}")
    x = np.arange(1, n + 1, dtype=float) if x is None else np.asarray(x, dtype=float)
    if x.size != n:
        raise ValueError("design points must have length n")
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    if sxx == 0:
        raise DataValidationError("all design points are equal; the line fit is degenerate")

    def refit(z, first_row):
        y = slope * x + intercept + sigma * z
        ybar = y.mean(axis=1, keepdims=True)
        m = ((y - ybar) @ xc / sxx)[:, None]
        fitted = ybar + m * xc
        return (y - fitted) / sigma

    succ, fail = simulate_statistics(k, n, seed, stream=_FIT_STREAM, transform=refit, threads=threads)
    config = McConfig(n=n, k=k, seed=seed)
    samples = {}
    for side, arr in ((SUCCESS, succ), (FAILURE, fail)):
        keep = arr[~np.isnan(arr)]
        samples[side] = NullSampleSet(side, keep, int(arr.size - keep.size), config)
    both = np.concatenate([succ, fail])
    keep = both[~np.isnan(both)]
    samples["both"] = NullSampleSet("both", keep, int(both.size - keep.size), config)
    critical = {
        side: {a: mc_critical_value(a, s) for a in alphas} for side, s in samples.items()
    }
    nofit = {a: exact_critical_value(a, n) for a in alphas}
    return FitStudyResult(samples, critical, nofit, n, k, seed)
