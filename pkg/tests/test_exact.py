import math
from collections import Counter, defaultdict

import numpy as np
import pytest

from conftest import all_sequences, generating_function_cdf, success_runs
from runstat.errors import CapabilityError
from runstat.exact import (
    ExactConfig,
    brute_force_cdf,
    exact_cdf,
    exact_cdf_detailed,
    exact_critical_value,
    exact_pvalue,
    multiplicity,
    run_count_sequences,
    sequence_classes,
)
from runstat.partitions import inequivalent_sequence_count
from runstat.special import chi2_cdf

INTEGER = ExactConfig(log_space=False)
LOG = ExactConfig(log_space=True)
T_GRID = np.linspace(0.25, 30.0, 20)


def run_vector(bits, n):
    vec = [0] * n
    for l in success_runs(bits):
        vec[l - 1] += 1
    return tuple(vec)


def test_multiplicity_examples():
    assert multiplicity((0, 1), 3) == 2
    for n in (1, 4, 9):
        assert multiplicity((0,) * (n - 1) + (1,), n) == 1
    assert multiplicity((2, 0, 1), 8) == 12


def test_multiplicity_matches_sequence_count():
    for n in range(1, 12):
        counts = Counter(run_vector(bits, n) for bits in all_sequences(n) if any(bits))
        for vec, count in counts.items():
            assert multiplicity(vec, n) == count


def test_multiplicity_rejects_impossible_vectors():
    with pytest.raises(ValueError):
        multiplicity((3,), 4)  # three isolated successes need N >= 5
    with pytest.raises(ValueError):
        multiplicity((0, 0, 0, 1), 3)
    with pytest.raises(ValueError):
        multiplicity((-1,), 3)


def test_run_count_sequences_examples():
    assert run_count_sequences(1, 2, 3) == 2
    for r in range(1, 8):
        assert run_count_sequences(r, r, 2 * r - 1) == 1
    assert run_count_sequences(2, 3, 6) == 12
    assert run_count_sequences(4, 3, 6) == 0
    assert run_count_sequences(0, 3, 6) == 0


def test_run_count_sequences_brute_force():
    for n in range(1, 13):
        counts = Counter()
        for bits in all_sequences(n):
            if any(bits):
                counts[(sum(bits), len(success_runs(bits)))] += 1
        for r in range(1, n + 1):
            for m in range(1, n + 1):
                assert run_count_sequences(m, r, n) == counts[(r, m)]


def test_normalization_exact_up_to_40():
    for n in range(1, 41):
        assert sum(c.weight for c in sequence_classes(n)) == 2 ** n - 1


def test_class_weights_sum_to_run_counts():
    for n in range(1, 26):
        cells = defaultdict(int)
        for c in sequence_classes(n):
            assert c.weight >= 1
            cells[(c.successes, c.n_runs)] += c.weight
        for (r, m), w in cells.items():
            assert w == run_count_sequences(m, r, n)


def test_class_probability():
    classes = list(sequence_classes(2))
    assert [(c.run_lengths, c.weight) for c in classes] == [((1, 0), 2), ((0, 1), 1)]
    assert math.fsum(c.probability for c in classes) == pytest.approx(1.0)


def test_n_equals_one_is_chi2_one_dof():
    for t in (0.0, 0.3, 1.0, 3.84, 10.0):
        assert exact_cdf(t, 1) == pytest.approx(chi2_cdf(t, 1), abs=1e-15)
        assert brute_force_cdf(t, 1) == pytest.approx(chi2_cdf(t, 1), abs=1e-15)


def test_n_equals_two_by_hand():
    for t in (0.5, 2.0, 6.0):
        expected = (2 * chi2_cdf(t, 1) + chi2_cdf(t, 2)) / 3
        assert brute_force_cdf(t, 2) == pytest.approx(expected, abs=1e-15)
        assert exact_cdf(t, 2) == pytest.approx(expected, abs=1e-15)


def test_brute_force_averages_sequences():
    # Independent restatement: average over sequences, no caching or grouping.
    t, n = 4.0, 7
    probs = []
    for bits in all_sequences(n):
        if any(bits):
            probs.append(math.prod(chi2_cdf(t, l) for l in success_runs(bits)))
    assert brute_force_cdf(t, n) == pytest.approx(math.fsum(probs) / len(probs), abs=1e-15)


@pytest.mark.parametrize("n", range(1, 15))
@pytest.mark.parametrize("config", [INTEGER, LOG], ids=["integer", "log"])
def test_exact_equals_brute_force(n, config):
    got = exact_cdf(T_GRID, n, config)
    for t, value in zip(T_GRID, got):
        assert abs(value - brute_force_cdf(t, n)) < 1e-10


@pytest.mark.parametrize("n", [20, 35, 50, 80])
def test_exact_equals_generating_function(n):
    ts = np.array([1.0, 8.0, 15.0, 25.0])
    got = exact_cdf(ts, n)
    for t, value in zip(ts, got):
        assert value == pytest.approx(generating_function_cdf(t, n), abs=1e-10)


def test_log_space_matches_integer_mode():
    for n in range(1, 31):
        a = exact_cdf(T_GRID, n, INTEGER)
        b = exact_cdf(T_GRID, n, LOG)
        assert np.allclose(b, a, rtol=1e-9, atol=0)


def test_log_space_normalization():
    for n in range(1, 31):
        assert exact_cdf(np.inf, n, LOG) == pytest.approx(1.0, rel=1e-9)


def test_term_count_is_nu():
    for n in range(1, 31):
        for config in (INTEGER, LOG):
            result = exact_cdf_detailed(5.0, n, config)
            assert result.terms == inequivalent_sequence_count(n)


def test_default_mode_switch():
    assert not exact_cdf_detailed(1.0, 30).log_space
    assert exact_cdf_detailed(1.0, 31).log_space


def test_limits_and_monotonicity():
    ts = np.linspace(0, 60, 241)
    for n in (3, 12, 40):
        values = exact_cdf(ts, n)
        assert values[0] == 0.0
        assert np.all(np.diff(values) >= 0)
        assert values[-1] > 1 - 1e-9
        assert exact_cdf(np.inf, n) == pytest.approx(1.0, abs=1e-12)


def test_scalar_and_array_forms():
    assert isinstance(exact_cdf(3.0, 5), float)
    assert exact_cdf(np.array([3.0]), 5).shape == (1,)


def test_pvalue():
    assert exact_pvalue(0.0, 25) == 1.0
    ts = np.linspace(0, 30, 61)
    p = 1 - exact_cdf(ts, 25)
    assert np.all(np.diff(p) < 0)
    assert np.max(np.abs(np.diff(p))) < 0.1
    assert exact_pvalue(11.5, 25) == pytest.approx(0.05, abs=0.005)


@pytest.mark.parametrize("alpha, n, expected", [(0.05, 5, 6.8), (0.001, 50, 23.8), (0.01, 25, 15.7)])
def test_critical_value_examples(alpha, n, expected):
    t = exact_critical_value(alpha, n)
    assert abs(t - expected) <= 0.05
    assert abs(exact_pvalue(t, n) - alpha) < 1e-6


def test_thread_count_does_not_change_result():
    ts = np.array([2.0, 9.0, 17.0])
    one = exact_cdf(ts, 45, ExactConfig(threads=1))
    many = exact_cdf(ts, 45, ExactConfig(threads=4))
    assert np.array_equal(one, many)


def test_capability_limits():
    with pytest.raises(CapabilityError):
        exact_cdf(1.0, 81)
    with pytest.raises(CapabilityError):
        exact_critical_value(0.05, 12, ExactConfig(max_n=10))
    with pytest.raises(CapabilityError):
        brute_force_cdf(1.0, 17)
    with pytest.raises(ValueError):
        exact_cdf(1.0, 0)
    with pytest.raises(ValueError):
        exact_cdf(-1.0, 3)
    with pytest.raises(ValueError):
        exact_critical_value(1.5, 3)
