"""
Spin-Bath Scenario Module

Runs the spin-bath model from one relevant-observable viewpoint and reports its characteristic times.

- system-only: <O^S0>(t), envelope |r(t)|, converges to |a|^2 s00 + |b|^2 s11
- full: <O>(t) for a closed-system observable, envelope |Gamma1(t)|, no convergence
- single-env: <O^Sj>(t), periodic, no envelope
"""

import logging
from collections.abc import Callable
from functools import partial
from typing import Any

import numpy as np

from decoherence_toolkit.errors import ModelError
from decoherence_toolkit.scenarios.base import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import (
    ObservableKind,
    ObservableSection,
    ObservableSpec,
    RunConfig,
    RunSummary,
    SeriesTable,
    SpinBathConfig,
    SpinBathSection,
)
from decoherence_toolkit.services import AnalyticService, SpinBathModelService, TimescaleService

logger = logging.getLogger(__name__)


class SpinBathScenario(BaseScenario):
    """
    Spin-bath scenario

    Builds the closed system from explicit spins or a Haar-sampled environment, samples the expectation value
    of the selected observable on the run grid and reports t_DS, t_RS and t_RU.

    Example:
        ```python
        scenario = SpinBathScenario()
        result = await scenario.arun(config)
        result.summary.t_rs
        ```
    """

    name: str = "spin-bath"
    description: str = "Spin-bath model seen from the full, system-only or single-env viewpoint"

    @staticmethod
    def build_model(section: SpinBathSection, run_seed: int) -> SpinBathConfig:
        """Closed-system configuration; the sampling seed defaults to the run seed

        Raises:
            ModelError: If the configuration violates a normalisation invariant
        """
        if section.sampling is not None:
            seed = section.sampling.seed if section.sampling.seed is not None else run_seed
            spins = SpinBathModelService.sample_environment(section.sampling.n, seed, section.sampling.g_max)
        else:
            spins = list(section.spins or [])
        model = SpinBathConfig(a=section.a, b=section.b, spins=tuple(spins), hbar=section.hbar)
        violations = SpinBathModelService.validate(model)
        if violations:
            raise ModelError("; ".join(violations))
        return model

    @staticmethod
    def build_observable(section: ObservableSection, n: int) -> ObservableSpec:
        """Observable for the selected viewpoint on an environment of n spins

        Raises:
            ModelError: If explicit environment blocks do not match n or the spin index is out of range
        """
        if section.kind is ObservableKind.SYSTEM_ONLY:
            return SpinBathModelService.observable_system_only(section.system, n)
        if section.kind is ObservableKind.SINGLE_ENV:
            return SpinBathModelService.observable_single_env(section.index, section.env_block, n)
        env = section.env if section.env is not None else [section.env_block] * n
        if len(env) != n:
            raise ModelError(f"Observable has {len(env)} environment blocks for N={n}")
        return SpinBathModelService.observable_full(section.system, env)

    async def _run(self, config: RunConfig) -> ScenarioResult:
        if config.spin_bath is None:
            raise ModelError("spin-bath scenario needs a [spin_bath] section")
        section = config.spin_bath
        model = self.build_model(section, config.seed)
        obs = self.build_observable(section.observable, model.n_env)
        grid = config.grid
        logger.info("Running spin-bath scenario: N=%d, viewpoint %s", model.n_env, obs.kind.value)

        tasks: dict[str, Callable[[], Any]] = {
            "report": partial(
                TimescaleService.spin_bath_report, model, grid, config.timescales.threshold_ratio
            ),
        }
        if obs.kind is ObservableKind.SYSTEM_ONLY:
            tasks["values"] = partial(AnalyticService.series, "expectation_s0", model, obs, grid)
            tasks["envelope"] = partial(AnalyticService.series, "overlap_r", model, None, grid)
        elif obs.kind is ObservableKind.FULL:
            tasks["values"] = partial(AnalyticService.series, "expectation_full", model, obs, grid)
            tasks["envelope"] = partial(AnalyticService.series, "gamma1", model, obs, grid)
        else:
            tasks["values"] = partial(AnalyticService.series, "expectation_single_env", model, obs, grid)
        results = await self.in_threads(tasks)

        values = results["values"]
        envelope = np.abs(results["envelope"].values) if "envelope" in results else None
        asymptotic = None
        if obs.kind is ObservableKind.SYSTEM_ONLY:
            asymptotic = model.a.abs2() * obs.system.d0 + model.b.abs2() * obs.system.d1

        summary = RunSummary.from_report(
            self.name,
            config.seed,
            results["report"],
            n_env=model.n_env,
            asymptotic_value=asymptotic,
            convergence={obs.kind.value: TimescaleService.convergence_check(values)},
        )
        return ScenarioResult(series=SeriesTable.from_values(grid, values.values, envelope), summary=summary)
