"""
SID Scenario Module

Closed-system decoherence on a quasi-continuous spectrum: samples the van Hove expectation value of a kernel
family, fits the decay of its off-diagonal envelope and, optionally, checks convergence under energy-grid
refinement.
"""

import logging
from collections.abc import Callable
from functools import partial
from typing import Any

import numpy as np

from decoherence_toolkit.errors import ModelError
from decoherence_toolkit.scenarios.base import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import RealSeries, RunConfig, RunSummary, SeriesTable, TableFamily
from decoherence_toolkit.services import SidService, TimescaleService

logger = logging.getLogger(__name__)


class SidScenario(BaseScenario):
    """
    SID scenario

    ``series.csv`` carries the expectation value (``value_re``), the imaginary round-off of the off-diagonal
    sum (``value_im``) and the off-diagonal envelope. The summary reports t_RU = hbar / gamma from the envelope
    fit; the open-system times do not apply and stay null.
    """

    name: str = "sid"
    description: str = "Self-induced decoherence of a van Hove observable"

    async def _run(self, config: RunConfig) -> ScenarioResult:
        if config.sid is None:
            raise ModelError("sid scenario needs a [sid] section")
        section = config.sid
        grid = config.grid
        kernel = SidService.build_kernel(
            section.family, section.omega_min, section.omega_max, section.n_omega, section.hbar
        )
        revival = SidService.revival_time(kernel)
        logger.info(
            "Running SID scenario: %s kernel, n_omega=%d, revival time %.6g",
            section.family.kind,
            kernel.n_omega,
            revival,
        )
        if grid.t_end > revival:
            logger.warning("Grid extends past the revival time %.6g of the energy grid", revival)

        tasks: dict[str, Callable[[], Any]] = {
            "offdiag": partial(SidService.offdiag_term, kernel, grid.times()),
        }
        if len(section.refinement) >= 2:
            if isinstance(section.family, TableFamily):
                raise ModelError("sid.refinement needs a built-in kernel family")
            tasks["refinement"] = partial(
                SidService.grid_refinement_check,
                section.family,
                section.refinement,
                section.omega_min,
                section.omega_max,
                section.hbar,
                section.refinement_time,
            )
        results = await self.in_threads(tasks)

        offdiag = results["offdiag"]
        asymptotic = SidService.asymptotic_value(kernel)
        values = RealSeries(grid=grid, values=asymptotic + offdiag.real)
        envelope = RealSeries(grid=grid, values=np.abs(offdiag.real))
        decay = SidService.fit_decay(envelope, kernel.hbar, revival)

        summary = RunSummary(
            scenario=self.name,
            seed=config.seed,
            t_ru=decay.t_relax,
            methods={"t_ru": "envelope-fit"},
            decay=decay,
            asymptotic_value=asymptotic,
            convergence={"sid": TimescaleService.convergence_check(values)},
            refinement=results.get("refinement"),
        )
        series = SeriesTable(
            grid=grid,
            value_re=values.values,
            value_im=offdiag.imag,
            envelope=envelope.values,
        )
        return ScenarioResult(series=series, summary=summary)
