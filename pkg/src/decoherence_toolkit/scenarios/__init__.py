"""
Decoherence Scenarios Module

This module contains the runnable scenarios of the toolkit:
- SpinBathScenario: spin-bath model from the full, system-only or single-env viewpoint
- SidScenario: self-induced decoherence of a van Hove observable
- TwoStageScenario: two-stage relaxation of a system in a weakly self-interacting environment
- VerifyScenario: closed forms against the brute-force oracle
"""

from decoherence_toolkit.scenarios.base import BaseScenario, ScenarioResult
from decoherence_toolkit.scenarios.sid import SidScenario
from decoherence_toolkit.scenarios.spin_bath import SpinBathScenario
from decoherence_toolkit.scenarios.two_times import TwoStageScenario
from decoherence_toolkit.scenarios.verify import VerifyScenario

__all__ = [
    "BaseScenario",
    "ScenarioResult",
    "SpinBathScenario",
    "SidScenario",
    "TwoStageScenario",
    "VerifyScenario",
]
