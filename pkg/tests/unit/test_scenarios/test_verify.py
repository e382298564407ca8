"""Verification Scenario Test Module"""

import numpy as np
import pytest

from decoherence_toolkit.errors import CapacityError
from decoherence_toolkit.scenarios import VerifyScenario
from decoherence_toolkit.scenarios.verify import (
    UNITARITY_TOLERANCE,
    VERIFY_OPERATIONS,
    random_config,
    verify_size,
)
from decoherence_toolkit.schemas import RunConfig, TimeGrid, VerifySection
from decoherence_toolkit.services import SpinBathModelService


def verify_config(sizes: list[int], trials: int = 5, tolerance: float = 1e-10, seed: int = 0) -> RunConfig:
    return RunConfig(
        scenario="verify",
        seed=seed,
        grid=TimeGrid(t_end=1.0, n_points=2),
        verify=VerifySection(sizes=sizes, trials=trials, tolerance=tolerance),
    )


class TestVerifySize:
    """Test verify_size"""

    @pytest.mark.parametrize("n", [1, 2, 4, 8, 12])
    def test_closed_forms_match_oracle(self, n: int) -> None:
        """Test every closed form agrees with the oracle to 1e-10 on 100 random triples"""
        records = verify_size(n, trials=100, tolerance=1e-10, seed=0)
        assert [r.operation for r in records] == list(VERIFY_OPERATIONS)
        for record in records:
            assert record.n_env == n
            assert record.trials == 100
            assert record.passed, f"{record.operation}: {record.max_abs_deviation:.3g}"

    def test_empty_environment(self) -> None:
        """Test N=0 skips the single-env comparison"""
        records = verify_size(0, trials=10, tolerance=1e-10, seed=0)
        operations = [r.operation for r in records]
        assert "expectation_single_env" not in operations
        assert len(operations) == len(VERIFY_OPERATIONS) - 1
        assert all(r.passed for r in records)

    def test_unitarity_tolerance(self) -> None:
        """Test unitarity is held to its own tolerance"""
        records = verify_size(2, trials=3, tolerance=1e-6, seed=0)
        tolerances = {r.operation: r.tolerance for r in records}
        assert tolerances["unitarity"] == UNITARITY_TOLERANCE
        assert tolerances["purity"] == 1e-6

    def test_reproducible(self) -> None:
        """Test the records depend only on (n, trials, tolerance, seed)"""
        assert verify_size(3, 10, 1e-10, seed=7) == verify_size(3, 10, 1e-10, seed=7)

    def test_random_config_is_normalised(self) -> None:
        """Test random configurations satisfy every normalisation invariant"""
        rng = np.random.default_rng(0)
        for n in (0, 1, 5):
            config = random_config(rng, n)
            assert config.n_env == n
            assert SpinBathModelService.validate(config) == []


class TestVerifyScenario:
    """Test VerifyScenario class"""

    def test_initialization(self) -> None:
        """Test initialization"""
        scenario = VerifyScenario()
        assert scenario.name == "verify"
        assert scenario.description

    @pytest.mark.asyncio
    async def test_run(self) -> None:
        """Test records come in size order and the summary carries the pass flag"""
        result = await VerifyScenario().arun(verify_config([4, 1, 4]))
        assert result.series is None
        assert result.passed
        assert [r.n_env for r in result.verification] == [4] * 9 + [1] * 9

        verification = result.summary.verification
        assert verification is not None
        assert verification["passed"] is True
        assert verification["sizes"] == [4, 1]
        assert verification["trials"] == 5
        assert set(verification["worst"]) >= {"operation", "n_env", "max_abs_deviation", "tolerance"}

    @pytest.mark.asyncio
    async def test_failing_tolerance(self) -> None:
        """Test a tolerance below round-off fails without raising"""
        result = await VerifyScenario().arun(verify_config([2], tolerance=1e-300))
        assert not result.passed
        assert result.summary.verification is not None
        assert result.summary.verification["passed"] is False

    @pytest.mark.asyncio
    async def test_capacity(self) -> None:
        """Test sizes beyond the oracle's capacity are refused"""
        with pytest.raises(CapacityError, match="24"):
            await VerifyScenario().arun(verify_config([2, 25]))
