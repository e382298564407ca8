"""Time-Scale Service Test Module"""

import math

import numpy as np
import pytest

from decoherence_toolkit.errors import DetectionError, ModelError
from decoherence_toolkit.schemas import (
    INFINITE,
    NOT_REACHED,
    ComplexAmplitude,
    RealSeries,
    SpinBathConfig,
    TimeGrid,
    TwoTimesScenario,
)
from decoherence_toolkit.services import AnalyticService, SpinBathModelService, TimescaleService


def series_of(values: np.ndarray, t_end: float = 10.0) -> RealSeries:
    return RealSeries(grid=TimeGrid(t_end=t_end, n_points=len(values)), values=values)


class TestRelaxationFormulas:
    """Test pole formulas, macroscopicity and t_DS"""

    def test_pole_relaxation_time_atomic(self) -> None:
        """Test V = 1 eV with hbar in eV s gives a relaxation time of order 1e-16 s"""
        t_r = TimescaleService.pole_relaxation_time(1.0, hbar=6.582e-16)
        assert isinstance(t_r, float)
        assert 5e-16 <= t_r <= 8e-16

    def test_pole_relaxation_time_macroscopic(self) -> None:
        """Test 1e24 interacting subsystems shorten the relaxation time by 24 orders"""
        t_r = TimescaleService.pole_relaxation_time(1.0, hbar=6.582e-16, n_subsystems=10**24)
        assert t_r == pytest.approx(6.582e-40)

    def test_pole_relaxation_time_free(self) -> None:
        """Test a vanishing interaction never relaxes"""
        assert TimescaleService.pole_relaxation_time(0.0) == INFINITE

    def test_closest_pole(self) -> None:
        """Test the smallest rate sets the relaxation time"""
        assert TimescaleService.closest_pole_relaxation_time([0.5, 0.1, 2.0]) == pytest.approx(10.0)
        assert TimescaleService.closest_pole_relaxation_time([0.0, 1.0]) == INFINITE
        with pytest.raises(ModelError):
            TimescaleService.closest_pole_relaxation_time([])

    def test_macroscopicity(self) -> None:
        """Test M = (micro / macro)^2, optionally with the halved macro length"""
        assert TimescaleService.macroscopicity(1e-10, 1e-2) == pytest.approx(1e-16)
        assert TimescaleService.macroscopicity(1e-10, 1e-2, halved=True) == pytest.approx(2.5e-17)
        with pytest.raises(ModelError):
            TimescaleService.macroscopicity(0.0, 1e-2)

    def test_decoherence_time_from_relaxation(self) -> None:
        """Test t_DS = M t_RS and the infinite marker"""
        assert TimescaleService.decoherence_time_from_relaxation(1.0, 1e-16) == pytest.approx(1e-16)
        assert TimescaleService.decoherence_time_from_relaxation(INFINITE, 1e-2) == INFINITE

    def test_decoherence_time_invalid(self) -> None:
        """Test non-positive M and unreached relaxation times are rejected"""
        with pytest.raises(ModelError):
            TimescaleService.decoherence_time_from_relaxation(1.0, 0.0)
        with pytest.raises(ModelError):
            TimescaleService.decoherence_time_from_relaxation(NOT_REACHED, 1e-2)
        with pytest.raises(ModelError):
            TimescaleService.decoherence_time_from_relaxation(-1.0, 1e-2)


class TestCrossingTime:
    """Test threshold crossings"""

    def test_exponential(self) -> None:
        """Test e^{-t} crosses e^{-1} at t = 1"""
        grid = TimeGrid(t_end=10.0, n_points=1001)
        series = RealSeries(grid=grid, values=np.exp(-grid.times()))
        t_ds = TimescaleService.crossing_time(series)
        assert isinstance(t_ds, float)
        assert t_ds == pytest.approx(1.0, abs=0.02)

    def test_single_dip_is_ignored(self) -> None:
        """Test a dip shorter than the debounce window is not a crossing"""
        values = np.ones(50)
        values[10] = 0.1
        assert TimescaleService.crossing_time(series_of(values)) == NOT_REACHED

    def test_constant_never_crosses(self) -> None:
        """Test a constant series is not reached"""
        assert TimescaleService.crossing_time(series_of(np.ones(20))) == NOT_REACHED

    def test_invalid_arguments(self) -> None:
        """Test a ratio outside (0, 1) and negative series are rejected"""
        with pytest.raises(ModelError, match="threshold_ratio"):
            TimescaleService.crossing_time(series_of(np.ones(20)), threshold_ratio=1.5)
        with pytest.raises(ModelError, match="non-negative"):
            TimescaleService.crossing_time(series_of(-np.ones(20)))

    def test_spin_bath_envelope_shrinks_with_n(self) -> None:
        """Test |r(t)| of Haar environments reaches 1% in finite time, sooner for N=40 than for N=20"""
        grid = TimeGrid(t_end=20.0, n_points=2001)

        def crossings(n: int) -> list[float]:
            times = []
            for seed in range(10):
                config = SpinBathModelService.sample_config(n=n, seed=seed)
                r = AnalyticService.series("overlap_r", config, None, grid)
                t_ds = TimescaleService.crossing_time(RealSeries(grid=grid, values=np.abs(r.values)), 0.01)
                assert isinstance(t_ds, float)
                times.append(t_ds)
            return times

        assert np.median(crossings(40)) < np.median(crossings(20))


class TestTwoStages:
    """Test two-stage detection"""

    def test_recovers_both_rates(self) -> None:
        """Test gamma_se / gamma_e = 1e3 is resolved into t_R1 << t_R2"""
        grid = TimeGrid(t_end=3000.0, n_points=30001)
        series = TimescaleService.two_times_series(TwoTimesScenario(gamma_se=1.0, gamma_e=1e-3), grid)
        stages = TimescaleService.detect_two_stages(series)
        assert not stages.single_stage
        assert stages.gamma_se == pytest.approx(1.0, rel=0.05)
        assert stages.gamma_e == pytest.approx(1e-3, rel=0.05)
        assert isinstance(stages.t_r1, float) and isinstance(stages.t_r2, float)
        assert stages.t_r1 / stages.t_r2 == pytest.approx(1e-3, rel=0.1)

    def test_non_interacting_environment(self) -> None:
        """Test gamma_e = 0 leaves a flat tail and an infinite t_R2"""
        grid = TimeGrid(t_end=3000.0, n_points=30001)
        series = TimescaleService.two_times_series(TwoTimesScenario(gamma_se=1.0, gamma_e=0.0), grid)
        stages = TimescaleService.detect_two_stages(series)
        assert stages.t_r2 == INFINITE
        assert stages.gamma_e == 0.0
        assert stages.t_r1 == pytest.approx(1.0, rel=0.05)

    def test_single_stage(self) -> None:
        """Test equal rates collapse into one stage"""
        grid = TimeGrid(t_end=40.0, n_points=401)
        series = TimescaleService.two_times_series(TwoTimesScenario(gamma_se=0.5, gamma_e=0.5), grid)
        stages = TimescaleService.detect_two_stages(series)
        assert stages.single_stage
        assert stages.t_r1 == pytest.approx(2.0, rel=1e-6)
        assert stages.t_r2 == stages.t_r1

    def test_hbar_scales_rates(self) -> None:
        """Test rates are reported in energy units"""
        grid = TimeGrid(t_end=3000.0, n_points=30001)
        sc = TwoTimesScenario(gamma_se=2.0, gamma_e=2e-3, hbar=2.0)
        stages = TimescaleService.detect_two_stages(TimescaleService.two_times_series(sc, grid), hbar=sc.hbar)
        assert stages.gamma_se == pytest.approx(2.0, rel=0.05)
        assert stages.t_r1 == pytest.approx(1.0, rel=0.05)

    @pytest.mark.parametrize("ratio", [1e2, 3e2, 1e3])
    def test_recovers_rates_over_ratios(self, ratio: float) -> None:
        """Test both rates within 5% for gamma_se / gamma_e >= 1e2 on a grid spanning 3 hbar / gamma_e"""
        gamma_e = 1.0 / ratio
        grid = TimeGrid(t_end=3.0 / gamma_e, n_points=30001)
        series = TimescaleService.two_times_series(TwoTimesScenario(gamma_se=1.0, gamma_e=gamma_e), grid)
        stages = TimescaleService.detect_two_stages(series)
        assert not stages.single_stage
        assert stages.gamma_se == pytest.approx(1.0, rel=0.05)
        assert stages.gamma_e == pytest.approx(gamma_e, rel=0.05)

    def test_fast_stage_reported_first(self) -> None:
        """Test the faster rate is gamma_se even when the fast stage carries the smaller weight"""
        grid = TimeGrid(t_end=900.0, n_points=2001)
        sc = TwoTimesScenario(gamma_se=1.0, gamma_e=1.0 / 300, weight_a=0.2, weight_b=1.0)
        stages = TimescaleService.detect_two_stages(TimescaleService.two_times_series(sc, grid))
        assert stages.gamma_se > stages.gamma_e
        assert stages.gamma_se == pytest.approx(1.0, rel=0.05)
        assert stages.gamma_e == pytest.approx(1.0 / 300, rel=0.05)

    def test_insufficient_dynamic_range(self) -> None:
        """Test a single stage spanning less than two decades is rejected"""
        grid = TimeGrid(t_end=10.0, n_points=101)
        series = RealSeries(grid=grid, values=np.exp(-1e-3 * grid.times()))
        with pytest.raises(DetectionError, match="dynamic range"):
            TimescaleService.detect_two_stages(series)

    def test_rejects_bad_series(self) -> None:
        """Test short, non-positive and flat series are rejected"""
        with pytest.raises(DetectionError, match="too short"):
            TimescaleService.detect_two_stages(series_of(np.exp(-np.arange(5.0))))
        with pytest.raises(DetectionError, match="positive"):
            TimescaleService.detect_two_stages(series_of(np.linspace(1.0, 0.0, 20)))
        with pytest.raises(DetectionError, match="flat"):
            TimescaleService.detect_two_stages(series_of(np.full(20, 0.5)))

    def test_two_times_report(self) -> None:
        """Test t_DS = M t_RS, t_RU from the slow stage, and the ordering check"""
        grid = TimeGrid(t_end=3000.0, n_points=30001)
        report = TimescaleService.two_times_report(TwoTimesScenario(gamma_se=1.0, gamma_e=1e-3), grid, M=1e-2)
        assert isinstance(report.t_rs, float) and isinstance(report.t_ds, float)
        assert report.t_ds == pytest.approx(1e-2 * report.t_rs)
        assert report.methods == {"t_ds": "macroscopicity", "t_rs": "envelope-fit", "t_ru": "envelope-fit"}
        assert report.ordering_ok


class TestSpinBathReport:
    """Test the spin-bath time-scale report"""

    def test_sampled_environment(self) -> None:
        """Test a large environment decoheres in finite time and never relaxes as a whole"""
        config = SpinBathModelService.sample_config(n=50, seed=1)
        report = TimescaleService.spin_bath_report(config, TimeGrid(t_end=20.0, n_points=2001))
        assert isinstance(report.t_ds, float)
        _, _, g = config.env_arrays()
        assert report.t_rs == pytest.approx(2.0 / math.sqrt(float(np.sum(g * g))))
        assert report.t_ru == INFINITE
        assert report.methods["t_ds"] == "threshold-crossing"

    def test_empty_environment(self) -> None:
        """Test N=0 never decoheres and never relaxes"""
        config = SpinBathConfig(a=ComplexAmplitude(re=0.6), b=ComplexAmplitude(re=0.8))
        report = TimescaleService.spin_bath_report(config, TimeGrid(t_end=10.0, n_points=101))
        assert report.t_ds == NOT_REACHED
        assert report.t_rs == INFINITE
        assert report.t_ru == INFINITE
        assert report.ordering_ok


class TestConvergenceCheck:
    """Test convergence verdicts"""

    def test_constant(self) -> None:
        """Test a constant series converges to its value"""
        verdict = TimescaleService.convergence_check(series_of(np.full(100, 0.25)))
        assert verdict.converged
        assert verdict.limit == pytest.approx(0.25)

    def test_decaying(self) -> None:
        """Test a decaying series converges"""
        grid = TimeGrid(t_end=50.0, n_points=501)
        verdict = TimescaleService.convergence_check(RealSeries(grid=grid, values=0.5 + np.exp(-grid.times())))
        assert verdict.converged
        assert verdict.limit == pytest.approx(0.5, abs=1e-6)

    def test_oscillating(self) -> None:
        """Test an undamped oscillation does not converge"""
        grid = TimeGrid(t_end=50.0, n_points=501)
        verdict = TimescaleService.convergence_check(RealSeries(grid=grid, values=np.cos(grid.times())))
        assert not verdict.converged
