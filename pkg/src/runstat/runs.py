"""Success/failure run decomposition of an observation series and the
weighted-runs statistic T (largest chi-square of any run of one side)."""

from dataclasses import dataclass

import numba
import numpy as np

from .errors import DataValidationError

__all__ = [
    "SUCCESS",
    "FAILURE",
    "SIDES",
    "ObservationSeries",
    "RunDecomposition",
    "StatisticValue",
    "decompose_runs",
    "run_weight",
    "compute_statistic",
    "max_run_weights",
]

SUCCESS = "success"
FAILURE = "failure"
SIDES = (SUCCESS, FAILURE)


def _check_side(side):
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")


@dataclass(frozen=True, eq=False)
class ObservationSeries:
    """Ordered observations with Gaussian expectations.

    ``x`` is an ordering label only; it plays no role in the statistic.
    """

    x: np.ndarray
    observed: np.ndarray
    mean: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("x", "observed", "mean", "sigma"):
            arr = np.array(getattr(self, name), dtype=float).ravel()
            arr.setflags(write=False)
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        n = arrays["observed"].size
        if n < 1:
            raise DataValidationError("series must contain at least one observation")
        if any(a.size != n for a in arrays.values()):
            raise DataValidationError("x, observed, mean and sigma must have equal length")
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                bad = int(np.flatnonzero(~np.isfinite(arr))[0])
                raise DataValidationError(f"non-finite {name} at index {bad}")
        if np.any(arrays["sigma"] <= 0):
            bad = int(np.flatnonzero(arrays["sigma"] <= 0)[0])
            raise DataValidationError(f"sigma must be positive, got {arrays['sigma'][bad]} at index {bad}")

    @classmethod
    def from_residuals(cls, z):
        """Series with zero means and unit sigmas whose observations are ``z``."""
        z = np.asarray(z, dtype=float).ravel()
        return cls(np.arange(1, z.size + 1), z, np.zeros(z.size), np.ones(z.size))

    def __len__(self):
        return self.observed.size

    @property
    def residuals(self):
        """Standardized residuals (X_i - mu_i) / sigma_i."""
        return (self.observed - self.mean) / self.sigma

    @property
    def chi2(self):
        return float(np.sum(self.residuals ** 2))

    def negated(self):
        """Series with every residual's sign flipped (observed reflected about the mean)."""
        return ObservationSeries(self.x, 2.0 * self.mean - self.observed, self.mean, self.sigma)


@dataclass(frozen=True)
class RunDecomposition:
    signs: tuple
    success_runs: tuple
    failure_runs: tuple
    run_lengths: tuple
    successes: int
    n_runs: int

    @property
    def n(self):
        return len(self.signs)

    def runs(self, side):
        _check_side(side)
        return self.success_runs if side == SUCCESS else self.failure_runs

    def sign_string(self):
        return "".join("S" if s else "F" for s in self.signs)


def decompose_runs(series):
    """Split ``series`` into maximal success and failure runs.

    An observation is a success iff it is strictly above its mean; exact ties
    count as failures. Runs are ``range`` objects over 0-based indices.
    """
    signs = tuple(bool(v) for v in series.observed > series.mean)
    return _decompose_signs(signs)


def _decompose_signs(signs):
    n = len(signs)
    success, failure = [], []
    start = 0
    for i in range(1, n + 1):
        if i == n or signs[i] != signs[start]:
            (success if signs[start] else failure).append(range(start, i))
            start = i
    lengths = [0] * n
    for run in success:
        lengths[len(run) - 1] += 1
    return RunDecomposition(
        signs=signs,
        success_runs=tuple(success),
        failure_runs=tuple(failure),
        run_lengths=tuple(lengths),
        successes=sum(signs),
        n_runs=len(success),
    )


def run_weight(series, run):
    """Chi-square of the observations in ``run`` (a range of indices)."""
    if len(run) and (run.start < 0 or run[-1] >= len(series)):
        raise IndexError(f"run {run} outside series of length {len(series)}")
    z = series.residuals[run.start : run.stop]
    return float(np.sum(z * z))


@dataclass(frozen=True)
class StatisticValue:
    """T for one side; ``t_obs`` is None when the side has no run at all."""

    side: str
    t_obs: float | None
    argmax_run: range | None
    weights: tuple

    @property
    def present(self):
        return self.t_obs is not None


def compute_statistic(series, side=SUCCESS, decomposition=None):
    _check_side(side)
    dec = decomposition if decomposition is not None else decompose_runs(series)
    runs = dec.runs(side)
    weights = tuple(run_weight(series, run) for run in runs)
    if not weights:
        return StatisticValue(side, None, None, ())
    best = int(np.argmax(weights))
    return StatisticValue(side, weights[best], runs[best], weights)


@numba.njit(cache=True, nogil=True)
def _max_run_weights(z, succ, fail):
    k, n = z.shape
    for j in range(k):
        best_s = -1.0
        best_f = -1.0
        acc = 0.0
        for i in range(n):
            v = z[j, i]
            up = v > 0.0
            if i > 0 and up != (z[j, i - 1] > 0.0):
                if up:
                    if acc > best_f:
                        best_f = acc
                else:
                    if acc > best_s:
                        best_s = acc
                acc = 0.0
            acc += v * v
        if z[j, n - 1] > 0.0:
            if acc > best_s:
                best_s = acc
        else:
            if acc > best_f:
                best_f = acc
        succ[j] = best_s if best_s >= 0.0 else np.nan
        fail[j] = best_f if best_f >= 0.0 else np.nan


def max_run_weights(z):
    """Per-row T for both sides of a ``(K, N)`` array of standardized residuals.

    Returns ``(success, failure)`` arrays of length K; NaN marks a row with no
    run of that side. Same tie rule as :func:`decompose_runs`.
    """
    z = np.ascontiguousarray(np.atleast_2d(z), dtype=np.float64)
    succ = np.empty(z.shape[0])
    fail = np.empty(z.shape[0])
    if z.shape[1] == 0:
        succ[:] = np.nan
        fail[:] = np.nan
        return succ, fail
    _max_run_weights(z, succ, fail)
    return succ, fail
