"""
Command-line interface for Clifford+kT enumeration and robustness
"""

import json
import logging
import sys

import click

from . import __version__, reference
from .ckts import completed_layers, layer_path, read_state_set, write_state_set
from .config import load_settings
from .enumeration import (
    count_cliffords,
    count_stabilizer_states,
    enumerate_layers,
    strict_partition,
)
from .errors import BudgetExceededError, InfeasibleError, ParseError
from .ma_normal import GateWord, TCountOracle, oracle_agreement, proposition_report, random_words, to_normal_form
from .pauli_algebra import PauliOperator
from .robustness import (
    growth_threshold,
    lower_bound,
    lower_bound_ceiling,
    robustness,
)
from .sampler import SamplingPlan, estimate
from .symmetry import SYMMETRY_FLAGS, SymmetrySpec
from .targets import build_target
from .utils import format_value, grid_rows, render_table, write_csv
from .verify import SUITES, Verifier, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


def _exit_code(error: Exception) -> int:
    if isinstance(error, (ParseError, click.UsageError)):
        return EXIT_USAGE
    if isinstance(error, InfeasibleError):
        return EXIT_INFEASIBLE
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET
    return EXIT_FAILURE


def _fail(error: Exception) -> None:
    click.echo(f"❌ Error: {str(error)}", err=True)
    sys.exit(_exit_code(error))


def _symmetry(sym: str) -> SymmetrySpec:
    flags = [flag.strip() for flag in sym.split(",") if flag.strip()] if sym else []
    try:
        return SymmetrySpec.from_flags(flags)
    except ValueError as e:
        raise click.UsageError(str(e))


def _emit_json(data, json_output) -> None:
    text = json.dumps(data, indent=2, default=str)
    if json_output:
        with open(json_output, "w") as f:
            f.write(text + "\n")
        click.echo(f"📝 Results saved to: {json_output}", err=True)
    else:
        click.echo(text)


@click.group()
@click.version_option(version=__version__, prog_name="clifford-kt")
@click.option("--config", "config_path", type=click.Path(), help="INI config file")
@click.option("--verbose", "-v", is_flag=True, help="Verbose logging")
@click.option("--workers", type=int, help="Worker processes for enumeration")
@click.option("--memory-budget", help="Memory budget, e.g. 8G")
@click.option("--solver", type=click.Choice(["highs", "simplex"]), help="LP backend")
@click.option("--data-dir", type=click.Path(), help="Directory for CKTS layers")
@click.option("--progress/--no-progress", default=None, help="Show progress bars")
@click.pass_context
def main(ctx, config_path, verbose, workers, memory_budget, solver, data_dir, progress):
    """
    clifford-kt - Clifford+kT state enumeration and robustness

    Enumerate Clifford+kT states exactly, compute robustness with dual
    certificates and simulate quasi-probability sampling.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    ctx.ensure_object(dict)
    try:
        ctx.obj["settings"] = load_settings(
            config_path,
            workers=workers,
            memory_budget_bytes=memory_budget,
            solver=solver,
            data_dir=data_dir,
            progress=progress,
        )
    except ValueError as e:
        raise click.UsageError(str(e))


@main.command(name="enumerate")
@click.argument("n", type=click.IntRange(1))
@click.argument("k", type=click.IntRange(0))
@click.option("-o", "--out", "out_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--resume", is_flag=True, help="Continue from layers already in the directory")
@click.option("--csv", "csv_path", type=click.Path(), help="Write the count row as CSV")
@click.pass_context
def enumerate_command(ctx, n, k, out_dir, resume, csv_path):
    """Enumerate cumulative and strict Clifford+kT states up to level K."""
    settings = ctx.obj["settings"]
    out_dir = out_dir or settings.data_dir

    try:
        layers = completed_layers(out_dir, n)[: k + 1] if resume else []
        if layers:
            click.echo(f"Resuming n={n} after level {layers[-1].k}")
        counts = []

        def record(layer, previous):
            strict = strict_partition(layer, previous)
            write_state_set(layer, layer_path(out_dir, n, layer.k))
            write_state_set(strict, layer_path(out_dir, n, layer.k, strict.kind))
            counts.append((layer.k, len(layer), len(strict)))
            click.echo(f"   n={n} k={layer.k}: {len(layer)} cumulative, {len(strict)} strict")

        for i, layer in enumerate(layers):
            strict = strict_partition(layer, layers[i - 1] if i else None)
            counts.append((layer.k, len(layer), len(strict)))
        for layer in enumerate_layers(n, k, start=layers, settings=settings):
            record(layer, layers[-1] if layers else None)
            layers.append(layer)

        click.echo(f"✅ Enumerated n={n} up to k={k} in {out_dir}")
        click.echo("   k: " + " ".join(str(c[0]) for c in counts))
        click.echo("   cumulative: " + " ".join(str(c[1]) for c in counts))
        click.echo("   strict: " + " ".join(str(c[2]) for c in counts))
        if csv_path:
            write_csv(csv_path, ["n", "k", "cumulative", "strict"], [(n,) + c for c in counts])

    except Exception as e:
        _fail(e)


@main.command(name="robustness")
@click.argument("target")
@click.option("-k", "--k", "k", type=click.IntRange(0), default=0, help="T-level")
@click.option("--states", "states_path", default="auto", help="CKTS file or 'auto'")
@click.option("--sym", default="", help=f"Comma-separated symmetries from {SYMMETRY_FLAGS}")
@click.option("--fast-path", is_flag=True, help="Enumerate orbit representatives only")
@click.option("--table", is_flag=True, help="Sweep a grid of copies and levels for TARGET")
@click.option("--n-max", type=click.IntRange(1), default=2, help="Largest copy count in --table")
@click.option("--k-max", type=click.IntRange(0), default=3, help="Largest level in --table")
@click.option("--csv", "csv_path", type=click.Path(), help="Write the --table grid as CSV")
@click.option("--json-output", type=click.Path(), help="Save result JSON to a file")
@click.pass_context
def robustness_command(ctx, target, k, states_path, sym, fast_path, table, n_max, k_max, csv_path, json_output):
    """Compute the Clifford+kT robustness of TARGET."""
    settings = ctx.obj["settings"]

    try:
        spec = _symmetry(sym)
        if table:
            grid = {}
            for n in range(1, n_max + 1):
                rho = build_target(f"{target}^{n}", settings.max_qubits)
                for level in range(k_max + 1):
                    grid[(n, level)] = robustness(rho, level, symmetry=spec, settings=settings, fast_path=fast_path).value
            click.echo(render_table(f"R_k({target}^n)", grid, format_value))
            if csv_path:
                k_values = list(range(k_max + 1))
                write_csv(csv_path, ["n"] + [f"k={v}" for v in k_values], grid_rows(grid, list(range(1, n_max + 1)), k_values))
            return

        rho = build_target(target, settings.max_qubits)
        states = None if states_path == "auto" else read_state_set(states_path)
        result = robustness(rho, k, states=states, symmetry=spec, settings=settings, fast_path=fast_path)
        _emit_json(result.to_dict(), json_output)

    except Exception as e:
        _fail(e)


@main.command(name="lower-bound")
@click.argument("target")
@click.option("-k", "--k", "k", type=click.IntRange(0), default=0, help="T-level")
@click.pass_context
def lower_bound_command(ctx, target, k):
    """Evaluate the analytic lower bound on R_k(TARGET)."""
    settings = ctx.obj["settings"]
    try:
        rho = build_target(target, settings.max_qubits)
        _emit_json(
            {
                "target": target,
                "n": rho.n,
                "k": k,
                "lower_bound": lower_bound(rho, k),
                "ceiling": lower_bound_ceiling(rho.n, k),
                "thresholds": {"H": growth_threshold("H"), "SH": growth_threshold("SH")},
            },
            None,
        )
    except Exception as e:
        _fail(e)


@main.command(name="sample")
@click.option("--target", required=True, help="Target expression")
@click.option("--pauli", required=True, help="Pauli label, qubit 0 first (e.g. XZ)")
@click.option("-k", "--k", "k", type=click.IntRange(0), default=0, help="T-level of the mixture")
@click.option("--delta", type=float, default=0.05, help="Additive error")
@click.option("--eps", type=float, default=0.01, help="Failure probability")
@click.option("--seed", type=int, default=0, help="PRNG seed")
@click.option("--json-output", type=click.Path(), help="Save result JSON to a file")
@click.pass_context
def sample_command(ctx, target, pauli, k, delta, eps, seed, json_output):
    """Estimate Tr(P rho) by sampling the optimal pseudo-mixture."""
    settings = ctx.obj["settings"]
    try:
        rho = build_target(target, settings.max_qubits)
        observable = PauliOperator.from_label(pauli)
        if observable.n != rho.n:
            raise click.UsageError(f"Pauli {pauli} has {observable.n} qubits, target has {rho.n}")

        states = list(enumerate_layers(rho.n, k, settings=settings))[-1]
        result = robustness(rho, k, states=states, settings=settings)
        plan = SamplingPlan.create(result.decomposition, observable, delta, eps, seed)
        outcome = estimate(plan, states, workers=settings.workers)
        exact = float(rho.expectations[observable.index])
        _emit_json(
            {
                "plan": plan.to_dict(),
                "mean": outcome.mean,
                "exact": exact,
                "abs_error": abs(outcome.mean - exact),
                "max_abs_sample": outcome.max_abs_sample,
            },
            json_output,
        )
    except Exception as e:
        _fail(e)


@main.command(name="ma-normal")
@click.argument("word", required=False, default="")
@click.option("--check", "check_k", type=click.IntRange(0), help="Check gate properties up to this T-count")
@click.option("--oracle", "oracle_words", type=click.IntRange(1), help="Compare N random words with the exact oracle")
@click.option("--seed", type=int, default=0, help="Seed for --oracle")
def ma_normal_command(word, check_k, oracle_words, seed):
    """Print the Matsumoto-Amano normal form of WORD over {H, S, T}."""
    try:
        if word:
            nf = to_normal_form(GateWord.parse(word))
            click.echo(json.dumps(nf.to_dict(), indent=2))
        if check_k is not None:
            for level in range(1, check_k + 1):
                failures = proposition_report(level)
                gates = failures.pop("gates")
                status = "✅" if not any(failures.values()) else "❌"
                click.echo(f"{status} T-count {level}: {gates} gates, failures {failures}")
        if oracle_words:
            mismatches = oracle_agreement(random_words(oracle_words, 20, seed), TCountOracle())
            click.echo(f"Oracle mismatches: {mismatches} of {oracle_words}")
            if mismatches:
                sys.exit(EXIT_FAILURE)
    except Exception as e:
        _fail(e)


@main.command(name="verify")
@click.argument("suites", nargs=-1)
@click.option("--list", "list_suites", is_flag=True, help="List available suites")
@click.pass_context
def verify_command(ctx, suites, list_suites):
    """Run named property suites; exit nonzero on any failure."""
    if list_suites or not suites:
        click.echo("🧪 Available suites:")
        for name in SUITES:
            click.echo(f"   • {name}")
        return
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise click.UsageError(f"Unknown suite(s): {', '.join(unknown)}")

    verifier = Verifier(ctx.obj["settings"])
    failed = False
    try:
        for name in suites:
            report = run_suite(name, verifier)
            marker = "✅" if report.passed else "❌"
            click.echo(f"{marker} {report.summary()}")
            for message in report.failures:
                click.echo(f"   - {message}")
            failed = failed or not report.passed
    except Exception as e:
        _fail(e)
    if failed:
        sys.exit(EXIT_FAILURE)


@main.command(name="counts")
@click.option("--n-max", type=click.IntRange(1, 4), default=4, help="Largest qubit count")
@click.option("--csv", "csv_path", type=click.Path(), help="Write the count grids as CSV")
def counts_command(n_max, csv_path):
    """Print the known state counts and the Clifford/stabilizer formulas."""
    cumulative = {key: v for key, v in reference.CUMULATIVE_COUNTS.items() if key[0] <= n_max}
    strict = {key: v for key, v in reference.STRICT_COUNTS.items() if key[0] <= n_max}
    click.echo(render_table("Cumulative Clifford+kT states", cumulative))
    click.echo()
    click.echo(render_table("Strict Clifford+kT states", strict))
    click.echo()
    click.echo("📐 Closed forms:")
    for n in range(1, n_max + 1):
        click.echo(
            f"   n={n}: {count_stabilizer_states(n)} stabilizer states, "
            f"{count_cliffords(n)} Cliffords"
        )
    click.echo("   n=1 strict: 6·2^k")
    if csv_path:
        rows = [
            (n, k, cumulative[(n, k)], strict.get((n, k), ""))
            for n, k in sorted(cumulative)
        ]
        write_csv(csv_path, ["n", "k", "cumulative", "strict"], rows)


if __name__ == "__main__":
    main()
