"""Data Model Unit Test"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from decoherence_toolkit.schemas import (
    INFINITE,
    NOT_REACHED,
    ComplexAmplitude,
    DecayEstimate,
    HermitianBlock2,
    ObservableKind,
    ObservableSpec,
    ReducedState2,
    RunConfig,
    RunSummary,
    SeriesTable,
    SidSection,
    TimeGrid,
    TimeScaleReport,
    VerificationRecord,
)


class TestSpinBathModels:
    """Test spin-bath data models"""

    def test_complex_amplitude_inputs(self) -> None:
        """Test numbers, complex values and [re, im] pairs are accepted"""
        assert ComplexAmplitude.model_validate(0.5).value == 0.5
        assert ComplexAmplitude.model_validate(0.6 - 0.8j).value == 0.6 - 0.8j
        assert ComplexAmplitude.model_validate([0.0, 1.0]).value == 1j
        assert ComplexAmplitude.from_complex(np.complex128(3 + 4j)).abs2() == 25.0

    def test_complex_amplitude_finite(self) -> None:
        """Test NaN and infinite components are rejected"""
        with pytest.raises(ValidationError):
            ComplexAmplitude(re=math.nan)
        with pytest.raises(ValidationError):
            ComplexAmplitude(re=0.0, im=math.inf)

    def test_hermitian_block_matrix(self) -> None:
        """Test the stored off-diagonal entry is (0, 1) and its conjugate is (1, 0)"""
        block = HermitianBlock2(d0=1.0, d1=-2.0, off=ComplexAmplitude(re=0.5, im=0.25))
        m = block.matrix()
        assert m[0, 1] == 0.5 + 0.25j
        assert m[1, 0] == 0.5 - 0.25j
        assert np.allclose(m, m.conj().T)
        assert HermitianBlock2.identity().is_identity()
        assert not HermitianBlock2.pauli_x().is_identity()

    def test_observable_kind_consistency(self) -> None:
        """Test kind tags that disagree with the blocks are rejected"""
        with pytest.raises(ValidationError, match="system-only"):
            ObservableSpec(
                system=HermitianBlock2.pauli_x(),
                env=(HermitianBlock2.pauli_z(),),
                kind=ObservableKind.SYSTEM_ONLY,
            )
        with pytest.raises(ValidationError, match="single-env"):
            ObservableSpec(
                system=HermitianBlock2.pauli_x(),
                env=(HermitianBlock2.pauli_z(),),
                kind=ObservableKind.SINGLE_ENV,
                index=0,
            )

    def test_time_grid(self) -> None:
        """Test uniform sampling and ordering"""
        grid = TimeGrid(t_start=0.0, t_end=50.0, n_points=1001)
        assert grid.step == pytest.approx(0.05)
        assert grid.times()[-1] == 50.0
        with pytest.raises(ValidationError):
            TimeGrid(t_start=1.0, t_end=1.0, n_points=3)
        with pytest.raises(ValidationError):
            TimeGrid(t_end=1.0, n_points=1)

    def test_reduced_state_invariants(self) -> None:
        """Test trace and positivity are enforced"""
        state = ReducedState2(p0=0.5, p1=0.5, coh=ComplexAmplitude(re=0.5))
        assert state.purity() == pytest.approx(1.0)
        with pytest.raises(ValidationError, match="trace"):
            ReducedState2(p0=0.5, p1=0.6, coh=ComplexAmplitude())
        with pytest.raises(ValidationError, match="exceeds"):
            ReducedState2(p0=0.5, p1=0.5, coh=ComplexAmplitude(re=0.6))


class TestTimeScaleModels:
    """Test time-scale data models"""

    def test_ordering(self) -> None:
        """Test t_DS <= t_RS <= t_RU with infinite above every finite time"""
        assert TimeScaleReport(t_ds=0.1, t_rs=1.0, t_ru=INFINITE).ordering_ok
        assert not TimeScaleReport(t_ds=2.0, t_rs=1.0, t_ru=INFINITE).ordering_ok
        assert not TimeScaleReport(t_ds=0.1, t_rs=INFINITE, t_ru=5.0).ordering_ok

    def test_ordering_skips_not_reached(self) -> None:
        """Test "not reached" entries are left out of the ordering"""
        assert TimeScaleReport(t_ds=NOT_REACHED, t_rs=3.0, t_ru=INFINITE).ordering_ok

    def test_decay_estimate_relaxation_time(self) -> None:
        """Test t_relax = hbar / gamma exactly"""
        estimate = DecayEstimate(gamma=0.2, hbar=6.582e-16, residual=0.01, window=(1.0, 2.0))
        assert estimate.t_relax == 6.582e-16 / 0.2
        with pytest.raises(ValidationError):
            DecayEstimate(gamma=0.0, residual=0.0, window=(1.0, 2.0))

    def test_verification_record(self) -> None:
        """Test a record passes when its deviation is within tolerance"""
        record = VerificationRecord(operation="purity", n_env=4, trials=10, max_abs_deviation=1e-12, tolerance=1e-10)
        assert record.passed
        assert not record.model_copy(update={"max_abs_deviation": math.inf}).passed


class TestRunArtifacts:
    """Test run artifact models"""

    def test_series_table_from_values(self) -> None:
        """Test complex values split into real and imaginary columns, NaN envelope by default"""
        grid = TimeGrid(t_end=1.0, n_points=3)
        table = SeriesTable.from_values(grid, np.array([1 + 2j, 3j, 4.0]))
        assert list(table.value_re) == [1.0, 0.0, 4.0]
        assert list(table.value_im) == [2.0, 3.0, 0.0]
        assert np.isnan(table.envelope).all()

    def test_series_table_length(self) -> None:
        """Test every column needs one value per grid point"""
        grid = TimeGrid(t_end=1.0, n_points=3)
        with pytest.raises(ValidationError, match="one value per grid point"):
            SeriesTable(grid=grid, value_re=[1.0, 2.0], value_im=[0.0] * 3, envelope=[0.0] * 3)

    def test_summary_keeps_every_key(self) -> None:
        """Test summary JSON lists every key, null where it does not apply, non-finite as null"""
        summary = RunSummary(scenario="sid", seed=0, asymptotic_value=math.inf)
        data = summary.model_dump(mode="json")
        assert list(data)[:3] == ["scenario", "seed", "n_env"]
        assert data["t_ds"] is None
        assert '"asymptotic_value": null' in summary.model_dump_json(indent=2)


class TestRunConfig:
    """Test run configuration models"""

    def test_scenario_needs_section(self) -> None:
        """Test a scenario without its section is rejected"""
        with pytest.raises(ValidationError, match=r"needs a \[two_times\] section"):
            RunConfig(scenario="two-times", grid=TimeGrid(t_end=1.0, n_points=3))

    def test_verify_needs_no_section(self) -> None:
        """Test verify runs on the default verification section"""
        config = RunConfig(scenario="verify", grid=TimeGrid(t_end=1.0, n_points=3))
        assert config.verify.sizes == [1, 2, 4, 8, 12]
        assert config.verify.tolerance == 1e-10

    def test_refinement_must_increase(self) -> None:
        """Test refinement resolutions must increase"""
        with pytest.raises(ValidationError, match="increasing"):
            SidSection(family={"kind": "lorentzian", "center": 12.775, "width": 0.2}, refinement=[256, 128])
