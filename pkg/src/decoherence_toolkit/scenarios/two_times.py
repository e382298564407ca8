"""
Two-Times Scenario Module

Synthesises the relaxation of a system strongly coupled to a weakly self-interacting environment and recovers
both stages from the sampled series alone.
"""

import logging

from decoherence_toolkit.errors import ModelError
from decoherence_toolkit.scenarios.base import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import RunConfig, RunSummary, SeriesTable
from decoherence_toolkit.services import TimescaleService

logger = logging.getLogger(__name__)


class TwoStageScenario(BaseScenario):
    """
    Two-times scenario

    The fast stage gives t_RS, the slow stage t_RU ("infinite" when the tail is flat) and t_DS = M * t_RS with
    the configured macroscopicity coefficient M.
    """

    name: str = "two-times"
    description: str = "Two-stage relaxation: fast system-environment, slow intra-environment"

    async def _run(self, config: RunConfig) -> ScenarioResult:
        if config.two_times is None:
            raise ModelError("two-times scenario needs a [two_times] section")
        sc = config.two_times
        logger.info("Running two-times scenario: gamma_se=%g, gamma_e=%g", sc.gamma_se, sc.gamma_e)

        series = TimescaleService.two_times_series(sc, config.grid)
        stages = TimescaleService.detect_two_stages(series, sc.hbar)
        report = TimescaleService.report_from_stages(stages, config.timescales.macroscopicity)
        summary = RunSummary.from_report(
            self.name,
            config.seed,
            report,
            two_stage=stages,
            convergence={"two-times": TimescaleService.convergence_check(series)},
        )
        return ScenarioResult(series=SeriesTable.from_values(config.grid, series.values), summary=summary)
