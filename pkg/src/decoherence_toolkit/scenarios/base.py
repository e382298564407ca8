"""
Decoherence Base Scenario Module

This module defines the base class for scenarios; every runnable scenario inherits from it.
A scenario turns a validated RunConfig into in-memory artifacts. Writing them to disk is left to the toolkit,
so each scenario stays free of I/O.

Main contents:
- ScenarioResult: Artifacts produced by one scenario run
- BaseScenario: Base class for scenarios, parent class for all specific scenarios
"""

from collections.abc import Callable, Mapping
from functools import partial
from typing import Any

import anyio
import anyio.to_thread
from pydantic import BaseModel, ConfigDict, Field

from decoherence_toolkit.schemas import RunConfig, RunSummary, SeriesTable, VerificationRecord


class ScenarioResult(BaseModel):
    """
    Scenario Result

    Attributes:
        series: Time series for ``series.csv``, None for scenarios without one
        summary: Content of ``summary.json``
        verification: Oracle comparison records for ``verification.csv``, empty unless the scenario verifies
    """

    model_config = ConfigDict(frozen=True)

    series: SeriesTable | None = Field(default=None, description="Sampled series, one row per grid point")
    summary: RunSummary = Field(..., description="Run summary")
    verification: list[VerificationRecord] = Field(default_factory=list, description="Verification records")

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.verification)


class BaseScenario(BaseModel):
    """
    Decoherence Base Scenario Class

    Base class for all scenarios, providing a unified interface and behavior.
    Subclasses implement the _run method. Scenarios run asynchronously; ``arun`` calls ``_run``, and independent
    numerical sub-tasks are dispatched to worker threads with ``in_threads``.

    Attributes:
        name: Scenario name, the value of ``scenario`` in the run configuration
        description: Scenario description

    Example:
        ```python
        class ConstantScenario(BaseScenario):
            name: str = "constant"
            description: str = "Constant series"

            async def _run(self, config: RunConfig) -> ScenarioResult:
                return ScenarioResult(summary=RunSummary(scenario=self.name, seed=config.seed))

        result = await ConstantScenario().arun(config)
        ```
    """

    name: str = ""
    description: str = ""

    async def _run(self, config: RunConfig) -> ScenarioResult:
        """
        Abstract method to run the scenario, must be overridden by subclasses

        Parameters:
            config: Validated run configuration

        Returns:
            ScenarioResult: Artifacts of the run

        Exceptions:
            NotImplementedError: If the subclass does not implement this method
        """
        raise NotImplementedError("Subclasses must implement the _run method")

    async def arun(self, config: RunConfig) -> ScenarioResult:
        """
        Method to run the scenario asynchronously

        This method is already implemented and will automatically call the _run method. Usually, you don't need
        to override this method in subclasses.

        Parameters:
            config: Validated run configuration

        Returns:
            ScenarioResult: Artifacts of the run
        """
        return await self._run(config)

    @staticmethod
    async def in_threads(tasks: Mapping[str, Callable[[], Any]]) -> dict[str, Any]:
        """
        Run independent callables in worker threads and gather their results

        The callables must not raise toolkit errors: arguments are validated before dispatch, so that errors
        surface as themselves rather than wrapped in an exception group.

        Parameters:
            tasks: Callables keyed by result name

        Returns:
            dict[str, Any]: Results keyed like ``tasks``, in the same order
        """
        results: dict[str, Any] = {}

        async def collect(key: str, func: Callable[[], Any]) -> None:
            results[key] = await anyio.to_thread.run_sync(func)

        async with anyio.create_task_group() as tg:
            for key, func in tasks.items():
                tg.start_soon(partial(collect, key, func))

        return {key: results[key] for key in tasks}
