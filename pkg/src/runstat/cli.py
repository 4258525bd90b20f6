"""``runstat`` command line.

Exit codes: 0 success, 1 usage or flag validation, 2 data error,
3 numerical or capability error.
"""

import datetime
import io
import json
import sys

import click

from . import __version__
from .errors import CapabilityError, DataValidationError, NumericalError, RunstatError
from .exact import ExactConfig, exact_critical_value, exact_pvalue
from .io import read_observations
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
    hardy_ramanujan_estimate,
    inequivalent_sequence_count,
)
from .power import FIT_ALPHAS, PeakAlternative, fit_study, power_study
from .rng import fresh_seed
from .runs import SIDES, compute_statistic, decompose_runs

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

TABLE_NS = (5, 10, 25, 50, 100, 500, 1000)
TABLE_ALPHAS = (0.05, 0.01, 0.001)

probability = click.FloatRange(0, 1, min_open=True, max_open=True)
positive_int = click.IntRange(min=1)


def _emit(text, out):
    if out is None or out == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _seed(seed):
    return fresh_seed() if seed is None else seed


def _common_meta():
    return {
        "tool": "runstat",
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def _parse_floats(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of numbers: {text!r}") from None
    if not values:
        raise click.BadParameter("amplitude list is empty")
    return values


@click.group()
@click.version_option(__version__, prog_name="runstat")
def cli():
    """Weighted-runs test statistic T for ordered Gaussian data."""


def _load_tables(paths):
    tables = {}
    for path in paths:
        table = NullSampleSet.from_csv(path)
        tables[table.side] = table
    return tables


@cli.command("test")
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--method", type=click.Choice(["auto", "exact", "mc"]), default="auto", show_default=True)
@click.option("--side", type=click.Choice(["success", "failure", "both"]), default="both", show_default=True)
@click.option("--mc-samples", "k", type=positive_int, default=100_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed for Monte Carlo; drawn at random if omitted.")
@click.option("--alpha", type=probability, default=0.05, show_default=True)
@click.option("--cutover", type=positive_int, default=80, show_default=True, help="Largest N evaluated exactly.")
@click.option("--mc-table", "tables", multiple=True, type=click.Path(dir_okay=False), help="Cached null table(s) from 'mc-table export'.")
@click.option("--threads", type=positive_int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_test(input_path, method, side, k, seed, alpha, cutover, tables, threads, out):
    """Compute T and its p-value for the observations in INPUT_PATH."""
    series = read_observations(input_path)
    n = len(series)
    seed = _seed(seed)
    if method == "auto":
        method = "exact" if n <= cutover and not tables else "mc"
    if method == "exact" and n > cutover:
        raise CapabilityError(f"exact method limited to N <= {cutover} (cutover); got N={n}")
    sides = SIDES if side == "both" else (side,)
    dec = decompose_runs(series)
    exact_cfg = ExactConfig(max_n=cutover, threads=threads)

    null = {}
    if method == "mc":
        null = _load_tables(tables)
        for s in sides:
            if s in null and null[s].config is not None and null[s].config.n != n:
                raise DataValidationError(f"null table for {s} has N={null[s].config.n}, data has N={n}")
        missing = [s for s in sides if s not in null]
        if missing:
            policy = missing[0] if len(missing) == 1 else "both"
            null.update(simulate_null(McConfig(n=n, k=k, seed=seed, side=policy), threads=threads))

    report = _common_meta()
    report.update({"n": n, "method": method, "alpha": alpha, "seed": seed})
    if method == "mc":
        report["mc"] = {s: {"k": null[s].k, "retained": null[s].retained} for s in sides}
    report["runs"] = {
        "signs": dec.sign_string(),
        "successes": dec.successes,
        "success_runs": len(dec.success_runs),
        "failure_runs": len(dec.failure_runs),
        "run_lengths": list(dec.run_lengths[: max((len(r) for r in dec.success_runs), default=0)]),
        "chi2": series.chi2,
    }
    report["sides"] = {}
    for s in sides:
        stat = compute_statistic(series, s, dec)
        entry = {"t_obs": stat.t_obs}
        if not stat.present:
            entry.update({"p_value": None, "reject": None, "note": f"no {s} run; p-value not computable"})
        else:
            entry["argmax_run"] = [stat.argmax_run.start, stat.argmax_run.stop]
            entry["run_weights"] = list(stat.weights)
            if method == "exact":
                entry["p_value"] = exact_pvalue(stat.t_obs, n, exact_cfg)
            else:
                res = mc_pvalue(stat.t_obs, null[s])
                entry["p_value"] = res.p
                entry["se"] = res.se
                entry["beyond_mc_support"] = res.beyond_support
            entry["reject"] = entry["p_value"] <= alpha
        report["sides"][s] = entry
    _emit(_dump(report), out)


@cli.command("critical")
@click.option("--n", "n", type=positive_int, default=None)
@click.option("--alpha", type=probability, default=0.05, show_default=True)
@click.option("--method", type=click.Choice(["auto", "exact", "mc"]), default="auto", show_default=True)
@click.option("--mc-samples", "k", type=positive_int, default=100_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--cutover", type=positive_int, default=80, show_default=True)
@click.option("--side", type=click.Choice(["success", "failure"]), default="success", show_default=True)
@click.option("--table", is_flag=True, help="Emit the full critical-value grid as CSV.")
@click.option("--threads", type=positive_int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_critical(n, alpha, method, k, seed, cutover, side, table, threads, out):
    """Critical value of T at level ALPHA for N observations."""
    seed = _seed(seed)
    if table:
        result = critical_value_scaling(TABLE_ALPHAS, TABLE_NS, k=k, seed=seed, exact_max=50, side=side, threads=threads)
        buf = io.StringIO()
        buf.write("alpha," + ",".join(str(v) for v in TABLE_NS) + ",slope,intercept\n")
        for a in TABLE_ALPHAS:
            cells = [f"{result.table[(a, v)]:.1f}" for v in TABLE_NS]
            slope, intercept = result.fits[a]
            buf.write(f"{a}," + ",".join(cells) + f",{slope:.2f},{intercept:.2f}\n")
        buf.write(f"# seed={seed} k={k} methods=" + ";".join(f"{v}:{m}" for v, m in result.methods.items()) + "\n")
        _emit(buf.getvalue(), out)
        return
    if n is None:
        raise click.UsageError("--n is required unless --table is given")
    if method == "auto":
        method = "exact" if n <= cutover else "mc"
    if method == "exact":
        if n > cutover:
            raise CapabilityError(f"exact method limited to N <= {cutover} (cutover); got N={n}")
        value = exact_critical_value(alpha, n, ExactConfig(max_n=cutover, threads=threads))
        extra = {}
    else:
        samples = simulate_null(McConfig(n=n, k=k, seed=seed, side=side), threads=threads)[side]
        value = mc_critical_value(alpha, samples)
        extra = {"k": k, "retained": samples.retained, "side": side}
    report = _common_meta()
    report.update({"n": n, "alpha": alpha, "method": method, "seed": seed, "critical_value": value})
    report["critical_value_rounded"] = round(value, 1)
    report.update(extra)
    _emit(_dump(report), out)


@cli.command("power")
@click.option("--n", "n", type=positive_int, default=10, show_default=True)
@click.option("--amplitudes", default="0,0.5,1,1.5,2,2.5,3,4,6,10", show_default=True)
@click.option("--beta", type=float, default=5.5, show_default=True, help="Peak location.")
@click.option("--gamma", type=click.FloatRange(0, min_open=True), default=2.0, show_default=True, help="Peak scale.")
@click.option("--k", "k", type=click.IntRange(min=100), default=10_000, show_default=True)
@click.option("--alpha", type=probability, default=0.05, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--peak", type=click.Choice(["cauchy", "gauss"]), default="cauchy", show_default=True)
@click.option("--threads", type=positive_int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_power(n, amplitudes, beta, gamma, k, alpha, seed, peak, threads, out):
    """Power of T and chi-square versus peak amplitude, as CSV."""
    amps = _parse_floats(amplitudes)
    if any(a < 0 for a in amps):
        raise click.BadParameter("amplitudes must be nonnegative")
    seed = _seed(seed)
    alts = [PeakAlternative(a, beta, gamma, peak) for a in amps]
    curve = power_study(alts, n=n, k=k, alpha=alpha, seed=seed, threads=threads)
    buf = io.StringIO()
    curve.to_csv(buf)
    buf.write(f"# seed={seed} n={n} k={k} alpha={alpha} peak={peak} beta={beta} gamma={gamma} t_crit={curve.t_critical!r}\n")
    _emit(buf.getvalue(), out)


@cli.command("partitions")
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--exact-parts", type=click.IntRange(min=0), default=None)
@click.option("--max-part", type=click.IntRange(min=0), default=None)
@click.option("--nu", is_flag=True, help="Count run-length classes both ways.")
@click.option("--estimate", is_flag=True, help="Add the asymptotic estimate of nu(n).")
def cmd_partitions(n, exact_parts, max_part, nu, estimate):
    """Integer-partition counts."""
    out = {"n": n, "p": str(count_partitions(n))}
    if exact_parts is not None:
        out["exact_parts"] = {"k": exact_parts, "count": str(count_partitions_exact_parts(n, exact_parts))}
    if max_part is not None:
        out["max_part"] = {"i": max_part, "count": str(count_partitions_max_part(n, max_part))}
    if (nu or estimate) and n < 1:
        raise click.BadParameter("--nu and --estimate need n >= 1", param_hint="--n")
    if nu or estimate:
        value = inequivalent_sequence_count(n)
        if nu:
            out["nu"] = {"double_sum": str(value), "p_n_plus_1_minus_1": str(count_partitions(n + 1) - 1), "agree": True}
        if estimate:
            est = hardy_ramanujan_estimate(n)
            out["estimate"] = {"value": est, "ratio_to_nu": est / value}
    click.echo(_dump(out), nl=False)


@cli.command("fit-study")
@click.option("--n", "n", type=click.IntRange(min=3), default=10, show_default=True)
@click.option("--k", "k", type=positive_int, default=10_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--slope", type=float, default=1.0, show_default=True)
@click.option("--intercept", type=float, default=0.0, show_default=True)
@click.option("--sigma", type=click.FloatRange(0, min_open=True), default=1.0, show_default=True)
@click.option("--threads", type=positive_int, default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Write the fitted-T p-value curve here.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_fit_study(n, k, seed, slope, intercept, sigma, threads, csv_path, out):
    """Distribution of T after a straight-line least-squares fit."""
    seed = _seed(seed)
    result = fit_study(n=n, k=k, slope=slope, intercept=intercept, sigma=sigma, seed=seed, threads=threads)
    report = _common_meta()
    report.update({"n": n, "k": k, "seed": seed, "slope": slope, "intercept": intercept, "sigma": sigma})
    report["critical_values"] = {
        side: {str(a): v for a, v in values.items()} for side, values in result.critical_values.items()
    }
    report["nofit_exact_critical_values"] = {str(a): v for a, v in result.nofit_critical_values.items()}
    if csv_path is not None:
        ts = [0.25 * i for i in range(0, 81)]
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("t,p_fit_success,se_fit_success,p_fit_failure,se_fit_failure,p_nofit_exact\n")
            succ = result.pvalue_curve(ts, "success")
            fail = result.pvalue_curve(ts, "failure")
            for (t, ps, ses, pe), (_, pf, sef, _) in zip(succ, fail):
                fh.write(f"{t!r},{ps!r},{ses!r},{pf!r},{sef!r},{pe!r}\n")
    _emit(_dump(report), out)


@cli.group("mc-table")
def mc_table():
    """Export or inspect cached Monte Carlo null tables."""


@mc_table.command("export")
@click.option("--n", "n", type=positive_int, required=True)
@click.option("--k", "k", type=positive_int, default=100_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--side", type=click.Choice(["success", "failure"]), default="success", show_default=True)
@click.option("--threads", type=positive_int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def mc_table_export(n, k, seed, side, threads, out):
    """Simulate a null table and write it as CSV."""
    seed = _seed(seed)
    samples = simulate_null(McConfig(n=n, k=k, seed=seed, side=side), threads=threads)[side]
    samples.to_csv(out)
    click.echo(_dump({"path": out, "side": side, "n": n, "k": k, "seed": seed, "retained": samples.retained}), nl=False)


@mc_table.command("import")
@click.argument("path", type=click.Path(dir_okay=False))
def mc_table_import(path):
    """Read a null table and summarize it."""
    samples = NullSampleSet.from_csv(path)
    summary = {"path": path, "side": samples.side, "retained": samples.retained, "discarded": samples.discarded}
    if samples.config is not None:
        summary.update({"n": samples.config.n, "k": samples.config.k, "seed": samples.config.seed})
    crit = {}
    for a in FIT_ALPHAS:
        try:
            crit[str(a)] = mc_critical_value(a, samples)
        except RunstatError:
            crit[str(a)] = None
    summary["critical_values"] = crit
    click.echo(_dump(summary), nl=False)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="runstat", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except DataValidationError as exc:
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    except (CapabilityError, NumericalError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_NUMERICAL
    except RunstatError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_NUMERICAL
    except ValueError as exc:
        click.echo(f"invalid argument: {exc}", err=True)
        return EXIT_USAGE
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
