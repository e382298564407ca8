"""
Time-Scale Service Module

Estimates and relates the three characteristic times of a decohering system:

- t_DS, decoherence time of the open system (threshold crossing, or M * t_RS)
- t_RS, relaxation time of the open system (pole formula, or the fast stage of a two-stage fit)
- t_RU, relaxation time of the whole closed system (pole formula, or the slow stage of a two-stage fit)

Infinite and unreached times are explicit markers ("infinite", "not reached"), never sentinel floats.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import linregress

from decoherence_toolkit.errors import DetectionError, ModelError
from decoherence_toolkit.schemas import (
    INFINITE,
    NOT_REACHED,
    ConvergenceVerdict,
    RealSeries,
    SpinBathConfig,
    TimeGrid,
    TimeScaleReport,
    TimeValue,
    TwoStageResult,
    TwoTimesScenario,
)
from decoherence_toolkit.services.analytic_service import AnalyticService

logger = logging.getLogger(__name__)

CROSSING_DEBOUNCE = 3
SINGLE_STAGE_TOLERANCE = 0.05
FLAT_TAIL_TOLERANCE = 1e-3
PEEL_FLOOR = 1e-8
MIN_DYNAMIC_RANGE = 100.0
_MIN_SEGMENT = 3


def _segment_sse(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares line SSE of every prefix and suffix split; entry k splits before index k"""
    n = t.shape[0]
    t = t - t.mean()
    y = y - y.mean()
    sums = [np.concatenate(([0.0], np.cumsum(v))) for v in (np.ones(n), t, t * t, y, y * y, t * y)]

    def sse(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        count, st, stt, sy, syy, sty = (s[hi] - s[lo] for s in sums)
        sxx = stt - st * st / count
        sxy = sty - st * sy / count
        syy_c = syy - sy * sy / count
        return np.maximum(syy_c - sxy * sxy / sxx, 0.0)

    k = np.arange(_MIN_SEGMENT, n - _MIN_SEGMENT + 1)
    return sse(np.zeros_like(k), k) + sse(k, np.full_like(k, n))


def _line(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    fit = linregress(t, y)
    return float(fit.slope), float(fit.intercept)


def _dual_exponential(t: np.ndarray, a: float, k1: float, b: float, k2: float) -> np.ndarray:
    return a * np.exp(-k1 * t) + b * np.exp(-k2 * t)


class TimescaleService:
    """
    Time-scale service

    Example:
        ```python
        TimescaleService.pole_relaxation_time(1.0, hbar=6.582e-16)  # ~6.6e-16 s
        M = TimescaleService.macroscopicity(1e-10, 1e-2)            # 1e-16
        TimescaleService.decoherence_time_from_relaxation(1.0, M)

        series = TimescaleService.two_times_series(TwoTimesScenario(gamma_se=1.0, gamma_e=1e-3), grid)
        TimescaleService.detect_two_stages(series, hbar=1.0)
        ```
    """

    @staticmethod
    def pole_relaxation_time(V: float, hbar: float = 1.0, n_subsystems: int = 1) -> TimeValue:  # noqa: N803
        """Relaxation time hbar / gamma with gamma ~ V, for an interaction of n_subsystems parts of strength V

        Args:
            V: Interaction energy per subsystem
            hbar: Reduced Planck constant in matching units
            n_subsystems: Number of interacting subsystems; the total interaction is n_subsystems * V

        Returns:
            TimeValue: hbar / (n_subsystems * V), or "infinite" for a free system (V <= 0)
        """
        total = n_subsystems * V
        if not total > 0:
            return INFINITE
        return hbar / total

    @staticmethod
    def closest_pole_relaxation_time(gammas: Sequence[float], hbar: float = 1.0) -> TimeValue:
        """Relaxation time from the pole closest to the real axis (the smallest decay rate)

        Raises:
            ModelError: If no rates are given
        """
        if len(gammas) == 0:
            raise ModelError("Need at least one decay rate")
        gamma = min(gammas)
        if not gamma > 0:
            return INFINITE
        return hbar / gamma

    @staticmethod
    def macroscopicity(micro_length: float, macro_length: float, *, halved: bool = False) -> float:
        """Macroscopicity coefficient (micro / macro)^2, or (micro / 2 macro)^2 when ``halved``

        Raises:
            ModelError: If a length is not positive
        """
        if not (micro_length > 0 and macro_length > 0):
            raise ModelError("Lengths must be positive")
        ratio = micro_length / (2.0 * macro_length if halved else macro_length)
        return ratio * ratio

    @staticmethod
    def decoherence_time_from_relaxation(t_rs: TimeValue, M: float) -> TimeValue:  # noqa: N803
        """t_DS = M * t_RS

        Raises:
            ModelError: If t_rs or M is not positive, or t_rs is "not reached"
        """
        if not M > 0:
            raise ModelError(f"Macroscopicity must be positive, got {M}")
        if t_rs == INFINITE:
            return INFINITE
        if t_rs == NOT_REACHED or not float(t_rs) > 0:
            raise ModelError(f"Relaxation time must be positive, got {t_rs}")
        return M * float(t_rs)

    @staticmethod
    def crossing_time(series: RealSeries, threshold_ratio: float = math.exp(-1.0)) -> TimeValue:
        """First time the series falls below threshold_ratio of its initial value and stays there

        The crossing must hold at the sample itself and the next ``CROSSING_DEBOUNCE`` samples.

        Args:
            series: Non-negative series, typically an interference envelope
            threshold_ratio: Ratio in (0, 1)

        Returns:
            TimeValue: Grid time of the crossing, or "not reached"

        Raises:
            ModelError: If the ratio is outside (0, 1) or the series has negative values
        """
        if not 0.0 < threshold_ratio < 1.0:
            raise ModelError(f"threshold_ratio must lie in (0, 1), got {threshold_ratio}")
        values = series.values
        if np.any(values < 0):
            raise ModelError("crossing_time needs a non-negative series")
        if not values[0] > 0 or values.shape[0] <= CROSSING_DEBOUNCE:
            return NOT_REACHED

        below = values < threshold_ratio * values[0]
        held = np.lib.stride_tricks.sliding_window_view(below, CROSSING_DEBOUNCE + 1).all(axis=1)
        hits = np.nonzero(held)[0]
        if hits.size == 0:
            return NOT_REACHED
        return float(series.times[hits[0]])

    @staticmethod
    def two_times_series(sc: TwoTimesScenario, grid: TimeGrid) -> RealSeries:
        """A exp(-gamma_se t / hbar) + B exp(-gamma_e t / hbar) on the grid"""
        if sc.gamma_se < sc.gamma_e:
            logger.warning(
                "gamma_se=%g < gamma_e=%g: the environment is not weakly self-interacting", sc.gamma_se, sc.gamma_e
            )
        t = grid.times()
        values = sc.weight_a * np.exp(-sc.gamma_se * t / sc.hbar) + sc.weight_b * np.exp(-sc.gamma_e * t / sc.hbar)
        return RealSeries(grid=grid, values=values)

    @staticmethod
    def detect_two_stages(series: RealSeries, hbar: float = 1.0) -> TwoStageResult:
        """Recover a fast and a slow relaxation stage from a decaying series

        Steps:
        1. Change point: the split minimising the summed SSE of two straight lines through log y.
        2. Single stage: if both segment slopes agree within 5%, one line through the whole series, which must
           span two decades.
        3. Curve peeling: fit the tail line on the second half, subtract it, and fit the fast remainder over
           the leading run of samples where it exceeds 1e-8 of y.
        4. Polish: weighted dual-exponential least squares, kept only if it lowers the weighted residual;
           the faster rate is then reported as gamma_se.

        Args:
            series: Positive series
            hbar: Reduced Planck constant

        Returns:
            TwoStageResult: t_r1 = hbar / gamma_se and t_r2 = hbar / gamma_e, "infinite" for a flat tail

        Raises:
            DetectionError: If the series is too short, non-positive or flat, a single stage spans fewer than
                two decades, or the fast stage is not resolved over two decades in the first half
        """
        t = series.times
        y = series.values
        n = t.shape[0]
        if n < 2 * _MIN_SEGMENT + 2:
            raise DetectionError(f"Series too short for two-stage detection ({n} points)")
        if np.any(y <= 0):
            raise DetectionError("Two-stage detection needs a positive series")
        log_y = np.log(y)
        if np.ptp(log_y) <= 1e-12:
            raise DetectionError("Series is flat: no relaxation stage to detect")

        t_span = float(t[-1] - t[0])
        split = _MIN_SEGMENT + int(np.argmin(_segment_sse(t, log_y)))
        s_head, _ = _line(t[:split], log_y[:split])
        s_tail, _ = _line(t[split:], log_y[split:])
        logger.debug("Change point at t=%g (slopes %g, %g)", t[split], s_head, s_tail)

        if abs(s_head - s_tail) <= SINGLE_STAGE_TOLERANCE * max(abs(s_head), abs(s_tail)):
            if np.ptp(log_y) < math.log(MIN_DYNAMIC_RANGE):
                raise DetectionError(
                    f"Insufficient dynamic range: the series spans {math.exp(np.ptp(log_y)):.3g}x, "
                    f"need {MIN_DYNAMIC_RANGE:g}x"
                )
            slope, _ = _line(t, log_y)
            if not -slope > 0:
                raise DetectionError("Series does not decay")
            t_r = 1.0 / (-slope)
            logger.info("Single relaxation stage, t_r=%g", t_r)
            return TwoStageResult(
                t_r1=t_r,
                t_r2=t_r,
                gamma_se=-slope * hbar,
                gamma_e=-slope * hbar,
                single_stage=True,
                split_time=float(t[split]),
            )

        # The tail line comes from the second half only, where the fast stage has died out
        tail_start = n // 2
        s2, c2 = _line(t[tail_start:], log_y[tail_start:])
        fast = y - np.exp(c2 + s2 * t)
        resolved = fast > PEEL_FLOOR * y
        head_end = int(np.argmin(resolved)) if not resolved.all() else n
        if head_end < _MIN_SEGMENT:
            raise DetectionError("Fast stage not resolved above the tail")
        if head_end > tail_start:
            raise DetectionError("Fast stage does not die out within the first half of the series")
        head = fast[:head_end]
        if head.max() / head.min() < MIN_DYNAMIC_RANGE:
            raise DetectionError("Fast stage spans fewer than two decades")
        s1, c1 = _line(t[:head_end], np.log(head))

        params = np.array([math.exp(c1), -s1, math.exp(c2), max(-s2, 0.0)])
        params = TimescaleService._polish(t, y, params)
        if params[1] < params[3]:
            params = params[[2, 3, 0, 1]]
        k1, k2 = float(params[1]), float(params[3])
        if not k1 > 0:
            raise DetectionError("Fast stage does not decay")

        t_r2: TimeValue = INFINITE if k2 * t_span <= FLAT_TAIL_TOLERANCE else 1.0 / k2
        logger.info("Two stages: gamma_se=%g, gamma_e=%g", k1 * hbar, k2 * hbar)
        return TwoStageResult(
            t_r1=1.0 / k1,
            t_r2=t_r2,
            gamma_se=k1 * hbar,
            gamma_e=0.0 if t_r2 == INFINITE else k2 * hbar,
            single_stage=False,
            split_time=float(t[split]),
        )

    @staticmethod
    def _polish(t: np.ndarray, y: np.ndarray, params: np.ndarray) -> np.ndarray:
        def weighted_sse(p: np.ndarray) -> float:
            return float(np.sum(((_dual_exponential(t, *p) - y) / y) ** 2))

        try:
            polished, _ = curve_fit(_dual_exponential, t, y, p0=params, sigma=y, bounds=(0.0, np.inf))
        except (RuntimeError, ValueError) as e:
            logger.debug("Dual-exponential polish failed, keeping peeled estimate: %s", e)
            return params
        if weighted_sse(polished) < weighted_sse(params):
            return np.asarray(polished)
        return params

    @staticmethod
    def spin_bath_report(
        config: SpinBathConfig, grid: TimeGrid, threshold_ratio: float = math.exp(-1.0)
    ) -> TimeScaleReport:
        """Characteristic times of the spin-bath model

        t_DS is the debounced crossing of |r(t)|. t_RS follows from the pole formula with
        V_SE = hbar * sqrt(sum g_i^2) / 2, infinite without coupling. t_RU is always infinite because the
        environment spins do not interact among themselves.
        """
        r = AnalyticService.series("overlap_r", config, None, grid)
        envelope = RealSeries(grid=grid, values=np.abs(r.values))
        t_ds = TimescaleService.crossing_time(envelope, threshold_ratio)

        _, _, g = config.env_arrays()
        v_se = 0.5 * config.hbar * float(np.sqrt(np.sum(g * g)))
        t_rs = TimescaleService.pole_relaxation_time(v_se, config.hbar)
        return TimeScaleReport(
            t_ds=t_ds,
            t_rs=t_rs,
            t_ru=INFINITE,
            methods={"t_ds": "threshold-crossing", "t_rs": "pole-formula", "t_ru": "pole-formula"},
        )

    @staticmethod
    def two_times_report(sc: TwoTimesScenario, grid: TimeGrid, M: float = 1e-2) -> TimeScaleReport:  # noqa: N803
        """Report for a synthesised two-times scenario; t_DS = M * t_RS"""
        stages = TimescaleService.detect_two_stages(TimescaleService.two_times_series(sc, grid), sc.hbar)
        return TimescaleService.report_from_stages(stages, M)

    @staticmethod
    def report_from_stages(stages: TwoStageResult, M: float = 1e-2) -> TimeScaleReport:  # noqa: N803
        """t_RS and t_RU from the fast and slow stages, t_DS = M * t_RS"""
        return TimeScaleReport(
            t_ds=TimescaleService.decoherence_time_from_relaxation(stages.t_r1, M),
            t_rs=stages.t_r1,
            t_ru=stages.t_r2,
            methods={"t_ds": "macroscopicity", "t_rs": "envelope-fit", "t_ru": "envelope-fit"},
        )

    @staticmethod
    def convergence_check(
        series: RealSeries, tail_fraction: float = 0.1, relative_tolerance: float = 0.05
    ) -> ConvergenceVerdict:
        """Does an expectation series approach a stable value?

        Compares the peak-to-peak spread over the last ``tail_fraction`` of the series with the spread over the
        whole series. A constant series counts as converged.
        """
        values = series.values
        tail = values[-max(2, int(round(tail_fraction * values.shape[0]))) :]
        tail_spread = float(np.ptp(tail))
        initial_spread = float(np.ptp(values))
        converged = tail_spread <= max(relative_tolerance * initial_spread, 1e-12)
        return ConvergenceVerdict(
            converged=converged,
            limit=float(np.mean(tail)),
            tail_spread=tail_spread,
            initial_spread=initial_spread,
        )
