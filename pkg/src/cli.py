"""Command-line interface: simulate, run, evaluate and export-plots."""
import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path as FilePath
from typing import Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from src.config import Config, RunConfig, load_run_config
from src.errors import ConfigError, OccupancyError
from src.export.protocol import dumps
from src.export.records import (
    EVALUATION_FILE,
    ensure_directory,
    export_plots,
    load_evaluation,
    write_run,
    write_text,
    write_trajectory,
)
from src.sim.experiment import (
    predict_with_control_set,
    run_experiment,
    simulate,
    sweep_horizons,
    worst_case_baseline,
)
from src.sim.metrics import MetricsReport, compute_metrics

logger = logging.getLogger(__name__)


def _int_list(text: str) -> list[int]:
    """Parse ``"3,4,5"`` or a range ``"3-10"``."""
    try:
        if "-" in text and "," not in text:
            low, high = (int(x) for x in text.split("-", 1))
            return list(range(low, high + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 3,4,5 or 3-10, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="occupancy-sets",
        description="Set-based occupancy prediction for a surrounding vehicle.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_run_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", type=str, default=None, help="TOML config file")
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--iterations", type=int, default=None)
        sub.add_argument("--out", dest="output_dir", type=str, default=None, help="output directory")

    simulate_parser = commands.add_parser("simulate", help="write trajectory and measurement CSVs")
    add_run_options(simulate_parser)

    run_parser = commands.add_parser("run", help="run the full prediction pipeline")
    add_run_options(run_parser)
    run_parser.add_argument("--np", dest="horizon", type=int, default=None, help="prediction horizon")
    run_parser.add_argument("--window", type=int, default=None, help="control window size")
    run_parser.add_argument("--generators", type=int, default=None, help="Control-Input set generators")
    run_parser.add_argument("--dilation", type=float, default=None, help="occupancy dilation radius (m)")
    run_parser.add_argument("--baseline", action="store_true", help="also score the worst-case baseline")
    run_parser.add_argument(
        "--sweep-horizons", type=_int_list, nargs="?", const=list(Config.SWEEP_HORIZONS), default=None,
        help="time the prediction stages for each horizon (default 3-10)",
    )
    run_parser.add_argument("--seeds", type=_int_list, default=None, help="run several seeds, e.g. 1,2,3")
    run_parser.add_argument("--jobs", type=int, default=1, help="parallel processes for --seeds")

    evaluate_parser = commands.add_parser("evaluate", help="print success-rate and timing tables")
    evaluate_parser.add_argument("record_dir", type=str)
    evaluate_parser.add_argument("--format", choices=("table", "json"), default="table")

    plots_parser = commands.add_parser("export-plots", help="write plot-data CSV bundles")
    plots_parser.add_argument("record_dir", type=str)
    plots_parser.add_argument("--steps", type=_int_list, default=None, help="iterations k to export polygons for")

    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "seed": args.seed,
        "iterations": args.iterations,
        "output_dir": args.output_dir,
    }
    if hasattr(args, "horizon"):
        overrides.update(
            horizon=args.horizon,
            window=args.window,
            generators=args.generators,
            dilation=None if args.dilation is None else (args.dilation, args.dilation),
        )
    return load_run_config(args.config, **overrides)


def execute_run(
    config: RunConfig, baseline: bool = False, horizons: Optional[Sequence[int]] = None
) -> MetricsReport:
    """Run, score and write one record into ``config.output_dir``."""
    ensure_directory(config.output_dir)
    record = run_experiment(config)
    baseline_set = baseline_pass = None
    if baseline:
        baseline_set = worst_case_baseline(record)
        baseline_pass = predict_with_control_set(record, baseline_set)
    report = compute_metrics(record, baseline_pass=baseline_pass, baseline_set=baseline_set)
    sweep = sweep_horizons(record, horizons) if horizons else None
    write_run(config.output_dir, record, report, sweep)
    return report


def _rates_table(title: str, report: MetricsReport) -> Table:
    table = Table(title=title)
    table.add_column("Step", justify="right")
    table.add_column("Success (%)", justify="right")
    table.add_column("Mean area (m²)", justify="right")
    if report.baseline is not None:
        table.add_column("Baseline (%)", justify="right")
        table.add_column("Baseline area (m²)", justify="right")
    for j, (rate, area) in enumerate(zip(report.step_success_rates, report.mean_areas), start=1):
        row = [str(j), f"{rate:.2f}", f"{area:.2f}"]
        if report.baseline is not None:
            row += [f"{report.baseline.step_success_rates[j - 1]:.2f}", f"{report.baseline.mean_areas[j - 1]:.2f}"]
        table.add_row(*row)
    return table


def cmd_simulate(args: argparse.Namespace, console: Console) -> int:
    config = _config_from_args(args)
    ensure_directory(config.output_dir)
    samples = simulate(config)
    written = write_trajectory(config.output_dir, samples)
    console.print(f"[green]Wrote {len(samples)} samples[/green] to {', '.join(str(p) for p in written)}")
    return 0


def cmd_run(args: argparse.Namespace, console: Console) -> int:
    config = _config_from_args(args)
    if not args.seeds:
        report = execute_run(config, args.baseline, args.sweep_horizons)
        console.print(_rates_table(f"Occupancy success, seed {config.scenario.seed}", report))
        console.print(
            f"Control containment: {report.control_containment_rate:.2f}%  "
            f"overall occupancy success: {report.overall_rate:.2f}%"
        )
        return 0

    root = FilePath(config.output_dir)
    configs = [
        config.with_overrides(seed=seed, output_dir=str(root / f"seed_{seed}"))
        for seed in args.seeds
    ]
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be at least 1, got {args.jobs}")
    logger.info("running %d seeds with %d job(s)", len(configs), args.jobs)
    if args.jobs == 1:
        reports = [execute_run(c, args.baseline, args.sweep_horizons) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(execute_run, c, args.baseline, args.sweep_horizons) for c in configs]
            reports = [f.result() for f in futures]

    table = Table(title="Multi-seed summary")
    table.add_column("Seed", justify="right")
    table.add_column("Control containment (%)", justify="right")
    table.add_column("Overall success (%)", justify="right")
    table.add_column("Output")
    for c, report in zip(configs, reports):
        table.add_row(
            str(c.scenario.seed), f"{report.control_containment_rate:.2f}",
            f"{report.overall_rate:.2f}", c.output_dir,
        )
    console.print(table)
    return 0


def cmd_evaluate(args: argparse.Namespace, console: Console) -> int:
    evaluation = load_evaluation(args.record_dir)
    metrics, timing = evaluation["metrics"], evaluation["timing"]
    write_text(FilePath(args.record_dir) / EVALUATION_FILE, dumps(evaluation))
    if args.format == "json":
        sys.stdout.write(dumps(evaluation))
        return 0

    baseline = metrics.get("baseline")
    rates = Table(title="Successful rate predicting the occupancy sets")
    rates.add_column("N_p", justify="right")
    rates.add_column("Success (%)", justify="right")
    rates.add_column("Mean area (m²)", justify="right")
    if baseline:
        rates.add_column("Baseline (%)", justify="right")
        rates.add_column("Baseline area (m²)", justify="right")
    for j, rate in enumerate(metrics["step_success_rates"], start=1):
        row = [str(j), f"{rate:.2f}", f"{metrics['mean_areas'][j - 1]:.2f}"]
        if baseline:
            row += [f"{baseline['step_success_rates'][j - 1]:.2f}", f"{baseline['mean_areas'][j - 1]:.2f}"]
        rates.add_row(*row)
    rates.add_row("all", f"{metrics['overall_rate']:.2f}", "", *([""] * (2 if baseline else 0)))
    console.print(rates)
    console.print(f"Control containment rate: {metrics['control_containment_rate']:.2f}%")

    cost = Table(title="Computational cost vs. prediction horizon")
    cost.add_column("N_p", justify="right")
    cost.add_column("Time per iteration (ms)", justify="right")
    sweep = evaluation.get("timing_sweep") or {str(timing["horizon"]): timing["mean_iteration_time"]}
    for horizon, seconds in sorted(sweep.items(), key=lambda item: int(item[0])):
        cost.add_row(horizon, f"{1e3 * seconds:.2f}")
    console.print(cost)
    return 0


def cmd_export_plots(args: argparse.Namespace, console: Console) -> int:
    written = export_plots(args.record_dir, args.steps)
    for path in written:
        console.print(f"[green]wrote[/green] {path}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "run": cmd_run,
    "evaluate": cmd_evaluate,
    "export-plots": cmd_export_plots,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the command and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    console = Console()
    try:
        return COMMANDS[args.command](args, console)
    except OccupancyError as e:
        Console(stderr=True).print(f"[red]error:[/red] {escape(str(e))}")
        return e.exit_code
