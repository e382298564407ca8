"""
Artifact Writer Module

Writes the artifacts of a scenario run into an output directory:

- ``series.csv``: header ``t,value_re,value_im,envelope``, one row per grid point, shortest round-trip float
  text, empty envelope cells where the envelope is not defined, '\\n' line endings
- ``summary.json``: the run summary in field order; every key is present, null where it does not apply or is
  not finite
- ``verification.csv``: one row per (operation, N) for verification runs

All files are produced by one writer after the run, so repeated runs with equal configurations are byte-identical.
"""

import csv
import io
import logging
import math
from pathlib import Path

from decoherence_toolkit.errors import OutputError
from decoherence_toolkit.scenarios import ScenarioResult
from decoherence_toolkit.schemas import OutputSection, RunSummary, SeriesTable, VerificationRecord

logger = logging.getLogger(__name__)

SERIES_HEADER = ("t", "value_re", "value_im", "envelope")
VERIFICATION_HEADER = ("operation", "n_env", "trials", "max_abs_deviation", "tolerance", "passed")


def _number(value: float) -> str:
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _write_text(path: Path, text: str) -> Path:
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OutputError(f"Cannot write {path}: {e.strerror or e}") from e
    logger.debug("Wrote %s (%d bytes)", path, len(text))
    return path


class ArtifactWriter:
    """
    Artifact writer

    Renders artifacts to text with ``render_*`` and writes them with ``write``.

    Example:
        ```python
        paths = ArtifactWriter.write(result, config.output, Path("out"))
        paths["summary"].read_text()
        ```
    """

    @staticmethod
    def render_series(series: SeriesTable) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SERIES_HEADER)
        for row in zip(series.grid.times(), series.value_re, series.value_im, series.envelope):
            writer.writerow([_number(v) for v in row])
        return buffer.getvalue()

    @staticmethod
    def render_summary(summary: RunSummary) -> str:
        return summary.model_dump_json(indent=2) + "\n"

    @staticmethod
    def render_verification(records: list[VerificationRecord]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(VERIFICATION_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.operation,
                    r.n_env,
                    r.trials,
                    _number(r.max_abs_deviation),
                    _number(r.tolerance),
                    "true" if r.passed else "false",
                ]
            )
        return buffer.getvalue()

    @staticmethod
    def write(result: ScenarioResult, output: OutputSection, out_dir: Path) -> dict[str, Path]:
        """
        Write every artifact of a run

        Args:
            result: Scenario result
            output: Artifact file names
            out_dir: Output directory, created if missing

        Returns:
            dict[str, Path]: Written files keyed by artifact ("series", "summary", "verification")

        Raises:
            OutputError: If the directory cannot be created or a file cannot be written
        """
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(f"Cannot create output directory {out_dir}: {e.strerror or e}") from e

        paths: dict[str, Path] = {}
        if result.series is not None:
            paths["series"] = _write_text(out_dir / output.series, ArtifactWriter.render_series(result.series))
        paths["summary"] = _write_text(out_dir / output.summary, ArtifactWriter.render_summary(result.summary))
        if result.verification:
            paths["verification"] = _write_text(
                out_dir / output.verification, ArtifactWriter.render_verification(result.verification)
            )
        logger.info("Wrote %s to %s", ", ".join(p.name for p in paths.values()), out_dir)
        return paths
