"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines go
straight to the terminal even when output capture is on.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy import stats

from conftest import all_sequences, success_runs
from runstat.cli import main
from runstat.exact import (
    ExactConfig,
    brute_force_cdf,
    exact_cdf,
    exact_critical_value,
    exact_pvalue,
    sequence_classes,
)
from runstat.montecarlo import McConfig, critical_value_scaling, mc_pvalue, simulate_null
from runstat.partitions import (
    PartitionCounts,
    count_partitions,
    count_partitions_exact_parts,
    count_partitions_max_part,
    inequivalent_sequence_count,
)
from runstat.power import PeakAlternative, fit_study, power_study
from runstat.runs import FAILURE, SUCCESS
from runstat.special import chi2_cdf

pytestmark = pytest.mark.acceptance

ALPHAS = (0.05, 0.01, 0.001)
TABLE_EXACT = {
    5: (6.8, 10.4, 15.5),
    10: (8.8, 12.8, 18.3),
    25: (11.5, 15.7, 21.6),
    50: (13.4, 17.7, 23.8),
}
TABLE_MC = {
    100: (15.3, 19.6, 25.6),
    500: (19.8, 24.1, 30.1),
    1000: (21.6, 25.9, 32.1),
}
SCALING_NS = (5, 10, 25, 50, 100, 500, 1000)


@pytest.fixture
def verdict(capsys):
    def report(number, name, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}: {name} | {detail}")
        assert ok, detail

    return report


@pytest.fixture(scope="module")
def scaling():
    start = time.perf_counter()
    result = critical_value_scaling(ALPHAS, SCALING_NS, k=100_000, seed=1)
    return result, time.perf_counter() - start


def test_01_exact_table(verdict):
    start = time.perf_counter()
    worst, misses = 0.0, []
    for n, row in TABLE_EXACT.items():
        for a, expected in zip(ALPHAS, row):
            got = exact_critical_value(a, n)
            worst = max(worst, abs(got - expected))
            if abs(got - expected) > 0.05:
                misses.append((n, a, round(got, 3)))
    elapsed = time.perf_counter() - start
    ok = not misses and elapsed < 10
    verdict(1, "exact critical values", ok, f"max |diff|={worst:.3f} (tol 0.05), {elapsed:.1f}s (limit 10s), misses={misses}")


def test_02_mc_table(verdict, scaling):
    result, elapsed = scaling
    worst, misses = 0.0, []
    for n, row in TABLE_MC.items():
        for a, expected in zip(ALPHAS, row):
            got = result.table[(a, n)]
            worst = max(worst, abs(got - expected))
            if abs(got - expected) > 0.5:
                misses.append((n, a, round(got, 2)))
    ok = not misses and all(result.methods[n] == "mc" for n in TABLE_MC)
    verdict(2, "Monte Carlo critical values, K=1e5", ok, f"max |diff|={worst:.2f} (tol 0.5), grid built in {elapsed:.1f}s, misses={misses}")


def test_03_mc_matches_exact_n25(verdict):
    samples = simulate_null(McConfig(n=25, k=10_000, seed=2025))
    ts = np.linspace(0.5, 22.0, 30)
    truth = 1 - exact_cdf(ts, 25)
    worst = 0.0
    for side in (SUCCESS, FAILURE):
        k = samples[side].retained
        se = np.sqrt(truth * (1 - truth) / k)
        mc = np.array([mc_pvalue(t, samples[side]).p for t in ts])
        worst = max(worst, float(np.max(np.abs(mc - truth) / np.maximum(se, 1 / k))))
    verdict(3, "MC vs exact p-value curve, N=25", worst <= 3, f"max |diff|/SE={worst:.2f} (limit 3) over 30 points, both sides")


def test_04_oracle_equivalence(verdict):
    ts = np.linspace(0.25, 30.0, 20)
    worst = 0.0
    for n in range(1, 15):
        got = exact_cdf(ts, n)
        ref = np.array([brute_force_cdf(t, n) for t in ts])
        worst = max(worst, float(np.max(np.abs(got - ref))))
    verdict(4, "exact vs brute force, N<=14", worst < 1e-10, f"max |diff|={worst:.2e} (tol 1e-10)")


def test_05_partition_identity(verdict):
    table = PartitionCounts.build(64)
    bad = []
    for n in range(1, 61):
        double_sum = sum(table.exact_parts(r, m) for r in range(1, n + 1) for m in range(1, min(r, n - r + 1) + 1))
        if double_sum != count_partitions(n + 1) - 1:
            bad.append(n)
    for n in range(1, 15):
        classes = {tuple(sorted(success_runs(bits))) for bits in all_sequences(n) if any(bits)}
        if len(classes) != inequivalent_sequence_count(n):
            bad.append(("brute", n))
    verdict(5, "nu(N) = p(N+1)-1", not bad, f"N=1..60 double sum, N=1..14 brute force, mismatches={bad}")


def test_06_small_partition_counts(verdict):
    got = (count_partitions(5), count_partitions_exact_parts(5, 3), count_partitions_max_part(5, 2))
    verdict(6, "small partition counts", got == (7, 2, 3), f"p(5), p(5,3), p<=(5,2) = {got}")


def test_07_normalization(verdict):
    bad = [n for n in range(1, 41) if sum(c.weight for c in sequence_classes(n)) != 2 ** n - 1]
    ts = np.linspace(0.25, 30.0, 20)
    rel = 0.0
    for n in range(1, 31):
        a = exact_cdf(ts, n, ExactConfig(log_space=False))
        b = exact_cdf(ts, n, ExactConfig(log_space=True))
        rel = max(rel, float(np.max(np.abs(b - a) / a)))
    ok = not bad and rel < 1e-9
    verdict(7, "weights sum to 2^N-1; log mode agrees", ok, f"integer mismatches={bad}, log-vs-integer max rel={rel:.1e} (tol 1e-9)")


def test_08_scaling_law(verdict, scaling):
    result, _ = scaling
    targets = {0.05: (2.8, 2.5), 0.001: (3.0, 11.6)}
    parts, ok = [], True
    for a, (c, b) in targets.items():
        slope, intercept = result.fits[a]
        ok &= abs(slope - c) <= 0.3 and abs(intercept - b) <= 1.0
        parts.append(f"alpha={a}: c={slope:.2f} (want {c}+-0.3), b={intercept:.2f} (want {b}+-1.0)")
    verdict(8, "critical value vs ln N line", ok, "; ".join(parts))


def test_09_power_study(verdict):
    amps = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0)
    curve = power_study([PeakAlternative(a, 5.5, 2.0) for a in amps], n=10, k=10_000, alpha=0.05, seed=0)
    null_se = math.sqrt(0.05 * 0.95 / curve.k)
    null_ok = abs(curve.power_t[0] - 0.05) <= 3 * null_se and abs(curve.power_chi2[0] - 0.05) <= 3 * null_se
    large_ok = curve.power_t[-1] >= 0.99 and curve.power_chi2[-1] >= 0.99
    window = (curve.power_t > 0.1) & (curve.power_t < 0.9) & (curve.power_chi2 > 0.1) & (curve.power_chi2 < 0.9)
    gap = curve.power_t - curve.power_chi2
    z = gap[window] / curve.se_diff[window]
    gap_ok = bool(window.any()) and bool(np.all(z > 3)) and 0.1 <= gap.max() <= 0.4
    detail = (
        f"A=0: T={curve.power_t[0]:.3f} chi2={curve.power_chi2[0]:.3f}; "
        f"A=10: T={curve.power_t[-1]:.3f} chi2={curve.power_chi2[-1]:.3f}; "
        f"window A={np.array(amps)[window].tolist()} min z={z.min() if z.size else float('nan'):.1f}; max gap={gap.max():.3f}"
    )
    verdict(9, "power of T vs chi-square", null_ok and large_ok and gap_ok, detail)


def test_10_fit_study(verdict):
    result = fit_study(n=10, k=10_000, seed=0)
    expected = dict(zip(ALPHAS, (6.0, 8.5, 12.4)))
    got = result.critical_values["both"]
    diffs = {a: got[a] - expected[a] for a in ALPHAS}
    nofit = exact_critical_value(0.05, 10)
    ok = all(abs(d) <= 0.4 for d in diffs.values()) and abs(nofit - 8.8) <= 0.05
    shown = ", ".join(f"{a}: {got[a]:.2f}" for a in ALPHAS)
    verdict(10, "critical values after a line fit", ok, f"pooled sides {shown} (tol 0.4); no-fit 5% = {nofit:.3f}")


def test_11_half_normal_sums(verdict):
    pvalues = {}
    for dof in (1, 2, 5):
        rng = np.random.default_rng(7000 + dof)
        z = np.abs(rng.standard_normal((100_000, dof)))
        sums = np.sum(z * z, axis=1)
        pvalues[dof] = stats.kstest(sums, np.vectorize(lambda t, d=dof: chi2_cdf(t, d))).pvalue
    ok = all(p > 0.01 for p in pvalues.values())
    verdict(11, "sum of squared half-normals is chi-square", ok, "KS p-values " + ", ".join(f"l={d}: {p:.3f}" for d, p in pvalues.items()))


def _cli_output(tmp_path, name, argv):
    target = tmp_path / name
    code = main(argv + ["--out", str(target)])
    text = target.read_text()
    if text.startswith("{"):
        data = json.loads(text)
        data.pop("timestamp", None)
        return code, data
    return code, text


def test_12_determinism(verdict, tmp_path):
    data = tmp_path / "data.csv"
    rng = np.random.default_rng(12)
    rows = ["x,observed,mean,sigma"] + [f"{i},{v!r},0.0,1.0" for i, v in enumerate(rng.standard_normal(40).tolist())]
    data.write_text("\n".join(rows) + "\n")
    commands = {
        "test-mc": ["test", str(data), "--method", "mc", "--mc-samples", "4000", "--seed", "12"],
        "test-exact": ["test", str(data), "--seed", "12"],
        "critical": ["critical", "--n", "120", "--mc-samples", "5000", "--seed", "12"],
        "power": ["power", "--amplitudes", "0,1.5", "--k", "1000", "--seed", "12"],
        "fit-study": ["fit-study", "--k", "10000", "--seed", "12"],
    }
    differing = []
    for name, argv in commands.items():
        outs = [_cli_output(tmp_path, f"{name}-{i}", argv + ["--threads", str(t)]) for i, t in enumerate((1, 1, 4))]
        if not all(o == outs[0] for o in outs) or outs[0][0] != 0:
            differing.append(name)
    verdict(12, "fixed seed gives identical output", not differing, f"{len(commands)} commands x (1, 1, 4 threads); differing={differing}")


def test_13_performance(verdict):
    start = time.perf_counter()
    exact_pvalue(13.4, 50)
    t50 = time.perf_counter() - start
    start = time.perf_counter()
    exact_pvalue(16.0, 80)
    t80 = time.perf_counter() - start
    ok = t50 < 5 and t80 < 600
    verdict(13, "exact p-value runtime", ok, f"N=50: {t50:.2f}s (limit 5s), N=80: {t80:.1f}s (limit 600s)")
