"""
Decoherence Toolkit Module

This module provides the main interface for running decoherence scenarios. The DecoherenceToolkit class is the core
of the toolkit: it picks the scenario a run configuration names, runs it, and writes its artifacts once, from a
single writer, after every sub-task has finished.

Main features:
- Run a scenario from a RunConfig, synchronously or asynchronously
- Write series, summary and verification artifacts
- Turn failed verifications into a VerificationError after the artifacts are on disk
"""

import logging
from functools import partial
from pathlib import Path
from typing import Any

import anyio
from pydantic import BaseModel, ConfigDict, Field

from decoherence_toolkit.config import apply_overrides, load_config
from decoherence_toolkit.errors import VerificationError
from decoherence_toolkit.factory import ScenarioFactory
from decoherence_toolkit.scenarios import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import RunConfig
from decoherence_toolkit.writers import ArtifactWriter

logger = logging.getLogger(__name__)


class DecoherenceToolkit(BaseModel):
    """
    Decoherence Toolkit for running scenarios and writing their artifacts

    This class is the main entry point for decoherence-toolkit, used by the ``decoherence-lab`` command and
    usable directly from Python.

    Attributes:
        out_dir: Output directory for the artifacts
        factory: Scenario factory instance, used to look up scenarios by name

    Example:
        ```python
        toolkit = DecoherenceToolkit(out_dir=Path("out"))
        result = toolkit.run(parse_config(text))
        result.summary.t_ds

        # Or, inside an event loop
        result = await toolkit.arun(config)
        ```
    """

    out_dir: Path = Field(default=Path("out"), description="Output directory for the artifacts")
    factory: ScenarioFactory = Field(default_factory=ScenarioFactory)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def get_scenario(self, config: RunConfig) -> BaseScenario:
        """Scenario named by the configuration"""
        return self.factory.create_scenario(config.scenario)

    async def arun(self, config: RunConfig) -> ScenarioResult:
        """
        Run the configured scenario and write its artifacts

        Parameters:
            config: Validated run configuration

        Returns:
            ScenarioResult: Artifacts of the run, as written to ``out_dir``

        Exceptions:
            VerificationError: If a verification record exceeds its tolerance (artifacts are written first)
            OutputError: If the artifacts cannot be written
            DecoherenceToolkitError: Any model, capacity or fit error raised by the scenario
        """
        scenario = self.get_scenario(config)
        logger.info("Running scenario '%s' (seed=%d)", scenario.name, config.seed)
        result = await scenario.arun(config)
        ArtifactWriter.write(result, config.output, self.out_dir)

        failed = [r for r in result.verification if not r.passed]
        if failed:
            details = ", ".join(f"{r.operation} at N={r.n_env} ({r.max_abs_deviation:.3g})" for r in failed)
            raise VerificationError(f"{len(failed)} verification checks failed: {details}")
        return result

    def run(self, config: RunConfig) -> ScenarioResult:
        """Synchronous wrapper around ``arun``"""
        result: ScenarioResult = anyio.run(partial(self.arun, config))
        return result

    def run_file(self, path: Path, **overrides: Any) -> ScenarioResult:
        """
        Load a configuration file and run it

        Parameters:
            path: TOML configuration file
            **overrides: Top-level fields to replace (e.g. ``seed``), validated like the file

        Returns:
            ScenarioResult: Artifacts of the run
        """
        config = apply_overrides(load_config(path), **overrides)
        return self.run(config)

    @classmethod
    def from_out_dir(cls, out_dir: Path | str) -> "DecoherenceToolkit":
        """Create a toolkit writing into ``out_dir``"""
        return cls(out_dir=Path(out_dir))
