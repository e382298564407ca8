"""
Decoherence Scenario Factory Module

This module provides a factory class for creating scenario instances. ScenarioFactory maps the ``scenario`` names
of a run configuration onto scenario classes, and is one of the core components of DecoherenceToolkit.

Main features:
- Create a scenario by name
- Create the complete scenario collection
- Get specific scenarios by name
"""

from decoherence_toolkit.scenarios import (
    BaseScenario,
    SidScenario,
    SpinBathScenario,
    TwoStageScenario,
    VerifyScenario,
)


class ScenarioFactory:
    """
    Scenario Factory class, used to create scenario instances

    Scenarios are stateless, so every call returns fresh instances.

    Attributes:
        _registry: Scenario classes keyed by scenario name

    Example:
        ```python
        factory = ScenarioFactory()

        # Get one scenario
        scenario = factory.create_scenario("spin-bath")

        # Get specific scenarios by name
        scenarios = factory.get_scenarios_by_names(["sid", "verify"])
        ```
    """

    def __init__(self) -> None:
        """
        Initialize scenario factory

        Registers the built-in scenarios under their configuration names.
        """
        self._registry: dict[str, type[BaseScenario]] = {
            scenario.model_fields["name"].default: scenario
            for scenario in (SpinBathScenario, SidScenario, TwoStageScenario, VerifyScenario)
        }

    @property
    def names(self) -> list[str]:
        """Registered scenario names"""
        return list(self._registry)

    def create_scenario(self, name: str) -> BaseScenario:
        """
        Create a scenario by name

        Args:
            name: Scenario name, as written in the ``scenario`` key of a run configuration

        Returns:
            BaseScenario: Scenario instance

        Raises:
            ValueError: If no scenario is registered under the name

        Example:
            ```python
            scenario = ScenarioFactory().create_scenario("two-times")
            result = await scenario.arun(config)
            ```
        """
        if name not in self._registry:
            raise ValueError(f"Unknown scenario '{name}', expected one of {self.names}")
        return self._registry[name]()

    def create_all_scenarios(self) -> list[BaseScenario]:
        """Create one instance of every registered scenario"""
        return [scenario() for scenario in self._registry.values()]

    def get_scenarios_by_names(self, names: list[str]) -> list[BaseScenario]:
        """
        Get scenarios by names

        Returns a list of scenarios matching the specified names.
        If a scenario is not found, it will be skipped.

        Args:
            names: List of scenario names to retrieve

        Returns:
            list[BaseScenario]: List of found scenarios
        """
        return [self.create_scenario(name) for name in names if name in self._registry]
