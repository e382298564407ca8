"""
Command-Line Front-End

``decoherence-lab`` runs one scenario from a TOML configuration and writes its artifacts. It is non-interactive:
everything but the output directory, the seed override and the verbosity lives in the configuration file.

Exit codes: 0 success, 1 invalid configuration or model/capacity/fit error, 2 verification failure,
3 output error.
"""

import logging
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from decoherence_toolkit.config import apply_overrides, load_config
from decoherence_toolkit.errors import DecoherenceToolkitError
from decoherence_toolkit.scenarios import ScenarioResult
from decoherence_toolkit.toolkit import DecoherenceToolkit

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="decoherence-lab",
    help="Run decoherence scenarios (spin-bath, sid, two-times, verify) and write CSV/JSON artifacts.",
    add_completion=False,
)


def configure_logging(quiet: bool) -> None:
    """Route the package's log records to stderr through rich"""
    package_logger = logging.getLogger("decoherence_toolkit")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
    handler = RichHandler(console=Console(stderr=True), show_path=False, show_time=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.WARNING if quiet else logging.INFO)
    package_logger.propagate = False


def _format_time(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def summary_table(result: ScenarioResult) -> Table:
    """Console table of the headline results of a run"""
    summary = result.summary
    table = Table(title=f"{summary.scenario} (seed {summary.seed})")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_column("method")

    methods = summary.methods or {}
    for key in ("t_ds", "t_rs", "t_ru"):
        value = getattr(summary, key)
        if value is not None:
            table.add_row(key, _format_time(value), methods.get(key, ""))
    if summary.ordering_ok is not None:
        table.add_row("ordering t_DS <= t_RS <= t_RU", str(summary.ordering_ok), "")
    if summary.decay is not None:
        table.add_row("gamma", _format_time(summary.decay.gamma), "envelope-fit")
        table.add_row("fit residual", _format_time(summary.decay.residual), "flagged" if summary.decay.flagged else "")
    if summary.asymptotic_value is not None:
        table.add_row("asymptotic value", _format_time(summary.asymptotic_value), "")
    for viewpoint, verdict in (summary.convergence or {}).items():
        table.add_row(f"converged ({viewpoint})", str(verdict.converged), "")
    if result.verification:
        failed = sum(not r.passed for r in result.verification)
        table.add_row("verification", "passed" if failed == 0 else f"{failed} failed", "oracle")
    return table


@app.command()
def main(
    config: Path = typer.Option(..., "--config", help="TOML run configuration"),
    out: Path = typer.Option(Path("out"), "--out", help="Output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the configuration seed"),  # noqa: UP007
    quiet: bool = typer.Option(False, "--quiet", help="Only log warnings and errors; no summary table"),
) -> None:
    """Run the scenario a configuration file describes."""
    configure_logging(quiet)
    try:
        run_config = load_config(config)
        if seed is not None:
            run_config = apply_overrides(run_config, seed=seed)
        result = DecoherenceToolkit(out_dir=out).run(run_config)
    except DecoherenceToolkitError as e:
        logger.error("%s", e)
        raise typer.Exit(code=e.exit_code) from e

    if not quiet:
        Console().print(summary_table(result))


if __name__ == "__main__":
    app()
