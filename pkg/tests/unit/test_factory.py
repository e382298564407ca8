"""Factory Class Unit Test"""

import pytest

from decoherence_toolkit.factory import ScenarioFactory
from decoherence_toolkit.scenarios import (
    BaseScenario,
    SidScenario,
    SpinBathScenario,
    TwoStageScenario,
    VerifyScenario,
)


class TestScenarioFactory:
    """Test ScenarioFactory class"""

    def test_names(self) -> None:
        """Test the registered names match the configuration's scenario values"""
        assert ScenarioFactory().names == ["spin-bath", "sid", "two-times", "verify"]

    @pytest.mark.parametrize(
        ("name", "cls"),
        [
            ("spin-bath", SpinBathScenario),
            ("sid", SidScenario),
            ("two-times", TwoStageScenario),
            ("verify", VerifyScenario),
        ],
    )
    def test_create_scenario(self, name: str, cls: type[BaseScenario]) -> None:
        """Test creating a scenario by name"""
        scenario = ScenarioFactory().create_scenario(name)
        assert isinstance(scenario, cls)
        assert scenario.name == name
        assert scenario.description

    def test_create_unknown_scenario(self) -> None:
        """Test an unknown name is rejected with the known names"""
        with pytest.raises(ValueError, match="Unknown scenario 'open-system'"):
            ScenarioFactory().create_scenario("open-system")

    def test_create_returns_fresh_instances(self) -> None:
        """Test every call returns a new instance"""
        factory = ScenarioFactory()
        assert factory.create_scenario("sid") is not factory.create_scenario("sid")

    def test_create_all_scenarios(self) -> None:
        """Test creating every scenario"""
        scenarios = ScenarioFactory().create_all_scenarios()
        assert isinstance(scenarios, list)
        assert len(scenarios) == 4
        assert all(isinstance(scenario, BaseScenario) for scenario in scenarios)

    def test_get_scenarios_by_names(self) -> None:
        """Test getting scenarios by names"""
        scenarios = ScenarioFactory().get_scenarios_by_names(["sid", "verify"])
        assert [scenario.name for scenario in scenarios] == ["sid", "verify"]

    def test_get_scenarios_by_nonexistent_names(self) -> None:
        """Test unknown names are skipped"""
        scenarios = ScenarioFactory().get_scenarios_by_names(["nonexistent", "two-times"])
        assert len(scenarios) == 1
        assert isinstance(scenarios[0], TwoStageScenario)
