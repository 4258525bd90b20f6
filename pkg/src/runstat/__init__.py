"""Weighted-runs test statistic for ordered observations with Gaussian
uncertainties: exact and Monte Carlo p-values, critical values, and power
studies against the chi-square test."""

__version__ = "0.1.0"

from .errors import (
    CapabilityError,
    DataValidationError,
    EmptySampleError,
    InsufficientTailError,
    NumericalError,
    RunstatError,
)
from .exact import (
    ExactConfig,
    brute_force_cdf,
    exact_cdf,
    exact_critical_value,
    exact_pvalue,
    multiplicity,
)
from .montecarlo import (
    McConfig,
    NullSampleSet,
    critical_value_scaling,
    mc_critical_value,
    mc_pvalue,
    simulate_null,
)
from .partitions import (
    count_partitions,
    count_partitions_exact_parts,
    count_partitions_max_part,
    enumerate_partitions,
    hardy_ramanujan_estimate,
    inequivalent_sequence_count,
)
from .power import PeakAlternative, chi2_total_pvalue, fit_study, power_study
from .runs import ObservationSeries, compute_statistic, decompose_runs
from .special import chi2_cdf, regularized_lower_gamma
