"""Command-line interface for thomason-lab."""

import json
import sys
from pathlib import Path
from typing import Optional

import click
from loguru import logger

from .core.config import get_config
from .core.errors import LabError
from .core.experiments import (
    SweepResult,
    load_instance,
    report as write_report,
    sweep_steps,
    trace_payload,
    verify_lemma_bounce,
    verify_lemma_fill,
    verify_lemma_init,
)
from .core.family import search_gadget_wirings
from .core.graph import graph_from_json, graph_to_dot, graph_to_json
from .core.lollipop import LOG_LEVELS, run_thomason
from .core.oracle import build_lollipop_graph, enumerate_ham_cycles
from .core.words import asymptotics as compute_asymptotics
from .core.words import build_j_automaton, enumerate_language
from .utils.logger import setup_logger, start_run
from .utils.snapshot import load_canonical_wiring, save_snapshot


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Written to {out}")
    else:
        click.echo(text, nl=False)


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _load_graph(path: str):
    try:
        return graph_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
    except (OSError, ValueError) as e:
        raise click.ClickException(f"cannot read graph {path}: {e}")


@click.group()
@click.version_option(version="1.0.0")
@click.option("--log-level", default=None, help="Console log level (overrides LOG_LEVEL)")
@click.pass_context
def main(ctx: click.Context, log_level: Optional[str]):
    """thomason-lab: exponential runs of Thomason's lollipop algorithm on the family G_n."""
    config = get_config(log_level=log_level)
    setup_logger(config, start_run(ctx.invoked_subcommand or "main"))
    ctx.obj = config


@main.command()
@click.option("--n", "n", type=int, required=True, help="Number of gadgets")
@click.option("--emit", type=click.Choice(["json", "dot"]), default="json", help="Output format")
@click.option("--out", "-o", help="Output file (default: stdout)")
@click.pass_obj
def build(config, n: int, emit: str, out: Optional[str]):
    """Build G_n on the canonical wiring."""
    try:
        instance = load_instance(n, config)
        if emit == "dot":
            colors = {instance.green_edge: "green", instance.red_edge: "red"}
            labels = {instance.lambda_vertex: f"{instance.lambda_vertex} (Λ)"}
            text = graph_to_dot(instance.graph, f"G_{n}", colors, labels)
        else:
            payload = graph_to_json(instance.graph)
            payload.update(
                n=n,
                wiring=instance.wiring.model_dump(mode="json"),
                lambda_vertex=instance.lambda_vertex,
                green_edge=list(instance.green_edge),
                red_edge=list(instance.red_edge),
                c0=list(instance.c0.order),
                c1=list(instance.c1.order),
            )
            text = _json(payload)
        _emit(text, out)
    except LabError as e:
        logger.error(f"Error building G_{n}: {e}")
        sys.exit(1)


@main.command()
@click.option("--max-n", type=int, default=None, help="Largest n checked (overrides SEARCH_MAX_N)")
@click.option("--out", "-o", default=None, help="Snapshot path (default: configured snapshot)")
@click.pass_obj
def search(config, max_n: Optional[int], out: Optional[str]):
    """Search gadget wirings and write the wiring snapshot."""
    try:
        result = search_gadget_wirings(max_n or config.search_max_n, config.oracle_max_vertices)
        save_snapshot(result, out or config.snapshot_path)
        for i, wiring in enumerate(result.candidates):
            marker = " (canonical)" if i == result.canonical else ""
            logger.info(f"  {wiring.name} {wiring.shift}{marker}")
    except LabError as e:
        logger.error(f"Wiring search failed: {e}")
        sys.exit(1)


@main.group()
def oracle():
    """Brute-force Hamiltonian cycles and lollipop graphs."""


@oracle.command("cycles")
@click.option("--graph", "graph_path", required=True, help="Graph JSON file")
@click.pass_obj
def oracle_cycles(config, graph_path: str):
    """List every Hamiltonian cycle of a graph."""
    try:
        cycles = enumerate_ham_cycles(_load_graph(graph_path), config.oracle_max_vertices)
        click.echo(_json({"count": len(cycles), "cycles": [list(c.order) for c in cycles]}), nl=False)
    except LabError as e:
        logger.error(f"Oracle failed: {e}")
        sys.exit(1)


@oracle.command("lollipop")
@click.option("--graph", "graph_path", required=True, help="Graph JSON file")
@click.option("--start", type=int, default=None, help="Restrict to paths starting at this vertex")
@click.option("--emit", type=click.Choice(["dot", "summary"]), default="summary", help="Output format")
@click.option("--out", "-o", help="Output file (default: stdout)")
@click.pass_obj
def oracle_lollipop(config, graph_path: str, start: Optional[int], emit: str, out: Optional[str]):
    """Materialize the lollipop graph and show its components."""
    try:
        view = build_lollipop_graph(_load_graph(graph_path), start, config.lollipop_node_budget)
        if emit == "dot":
            text = view.to_dot()
        else:
            text = _json(
                {
                    "nodes": len(view.nodes),
                    "degree_one": len(view.degree_one_nodes()),
                    "components": len(view.components),
                    "path_components": sum(view.is_path_component(c) for c in view.components),
                }
            )
        _emit(text, out)
    except LabError as e:
        logger.error(f"Oracle failed: {e}")
        sys.exit(1)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Number of gadgets")
@click.option("--log", "log_level", type=click.Choice(LOG_LEVELS), default="counts", help="What the trace keeps")
@click.option("--budget", type=int, default=None, help="Step budget (overrides STEP_BUDGET)")
@click.option("--out", "-o", help="Trace JSON file (default: stdout)")
@click.pass_obj
def run(config, n: int, log_level: str, budget: Optional[int], out: Optional[str]):
    """Run Thomason's algorithm on G_n from C_0 through the green edge."""
    try:
        instance = load_instance(n, config)
        trace = run_thomason(
            instance,
            log_level,  # type: ignore[arg-type]
            budget=budget or config.step_budget,
            checkpoint_every=config.checkpoint_every,
        )
        if trace.end_cycle != list(instance.c1.order):
            logger.error(f"G_{n}: walk ended on a cycle other than C_1")
            sys.exit(1)
        _emit(_json(trace_payload(instance, trace)), out)
    except LabError as e:
        logger.error(f"Run failed: {e}")
        sys.exit(1)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Word length")
@click.option("--emit", type=click.Choice(["list", "count"]), default="list", help="Output format")
def words(n: int, emit: str):
    """Words of L_n, sorted, one per line."""
    try:
        language = enumerate_language(n)
        click.echo(str(len(language)) if emit == "count" else "\n".join(language))
    except LabError as e:
        logger.error(f"Word enumeration failed: {e}")
        sys.exit(1)


@main.command()
@click.option("--out", "-o", help="DOT file (default: stdout)")
def automaton(out: Optional[str]):
    """Export the rightmost-path automaton as DOT."""
    _emit(build_j_automaton().to_dot(), out)


@main.command()
@click.option("--kmax", type=int, default=40, help="Largest k of the table")
def asymptotics(kmax: int):
    """Recurrence table, series cross-check and the growth constant c."""
    try:
        result = compute_asymptotics(kmax)
        click.echo(_json(result.model_dump(mode="json")), nl=False)
    except LabError as e:
        logger.error(f"Asymptotics failed: {e}")
        sys.exit(1)


@main.command()
@click.option(
    "--lemma",
    type=click.Choice(["init", "bounce", "fill", "all"]),
    default="all",
    help="Which lemma to check",
)
@click.option("--n-min", type=int, default=3, help="Smallest n")
@click.option("--n-max", type=int, default=8, help="Largest n")
@click.option("--out", "-o", help="Write the reports as JSON")
@click.pass_obj
def verify(config, lemma: str, n_min: int, n_max: int, out: Optional[str]):
    """Check the counter, bouncing and filling lemmas on the canonical wiring."""
    try:
        wiring = load_canonical_wiring(config.snapshot_path)
        n_range = range(n_min, n_max + 1)
        reports = []
        if lemma in ("init", "all"):
            reports.append(verify_lemma_init(n_range, wiring, config))
        if lemma in ("bounce", "all"):
            for n in n_range:
                if 2 * n + 6 <= config.oracle_max_vertices:
                    reports.append(verify_lemma_bounce(n, wiring, config))
        if lemma in ("fill", "all"):
            for n in n_range:
                reports.append(verify_lemma_fill(n, wiring, config))

        if out:
            _emit(_json([r.model_dump(mode="json") for r in reports]), out)
        failed = [r for r in reports if not r.passed]
        if failed:
            logger.error(f"❌ {len(failed)}/{len(reports)} lemma reports failed")
            sys.exit(1)
        logger.info(f"✅ {len(reports)} lemma reports passed")
    except LabError as e:
        logger.error(f"Verification failed: {e}")
        sys.exit(1)


@main.command()
@click.option("--n-min", type=int, default=None, help="Smallest n (overrides SWEEP_N_MIN)")
@click.option("--n-max", type=int, default=None, help="Largest n (overrides SWEEP_N_MAX)")
@click.option("--workers", type=int, default=None, help="Parallel workers (overrides MAX_WORKERS)")
@click.option("--out", "-o", help="Sweep result JSON")
@click.pass_obj
def sweep(config, n_min: Optional[int], n_max: Optional[int], workers: Optional[int], out: Optional[str]):
    """Measure T(n) across a range and fit the growth rate."""
    try:
        if workers:
            config.max_workers = workers
        wiring = load_canonical_wiring(config.snapshot_path)
        result = sweep_steps(n_min or config.sweep_n_min, n_max or config.sweep_n_max, wiring, config)
        if out:
            write_report(result, out, "json")
        logger.info(
            f"Slope {result.slope} vs ln c {result.reference_log_c:.6f}; "
            f"T(n)/a_n in {result.ratio_band}; n0={result.n0}"
        )
        if result.partial:
            sys.exit(1)
    except LabError as e:
        logger.error(f"Sweep failed: {e}")
        sys.exit(1)


@main.command()
@click.option("--input", "input_path", required=True, help="Sweep result JSON")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", help="Report format")
@click.option("--out", "-o", required=True, help="Report file")
def report(input_path: str, fmt: str, out: str):
    """Render a stored sweep result as CSV or normalized JSON."""
    try:
        result = SweepResult.model_validate_json(Path(input_path).read_text(encoding="utf-8"))
        write_report(result, out, fmt)  # type: ignore[arg-type]
    except (OSError, ValueError) as e:
        logger.error(f"Cannot read sweep result {input_path}: {e}")
        sys.exit(1)
    except LabError as e:
        logger.error(f"Report failed: {e}")
        sys.exit(1)


@main.command()
@click.pass_obj
def validate_config(config):
    """Validate configuration settings."""
    logger.info("Configuration validation:")
    logger.info(f"  Step budget: {config.step_budget:,}")
    logger.info(f"  Oracle bound: {config.oracle_max_vertices} vertices")
    logger.info(f"  Sweep range: {config.sweep_n_min}..{config.sweep_n_max}")
    logger.info(f"  Workers: {config.max_workers}")
    logger.info(f"  Snapshot: {config.snapshot_path}")
    try:
        wiring = load_canonical_wiring(config.snapshot_path)
        logger.info(f"  Canonical wiring: {wiring.name} {wiring.shift}")
        logger.info("✅ Configuration is valid")
    except LabError as e:
        logger.error(f"❌ Configuration validation failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
