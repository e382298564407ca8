"""
Decoherence Toolkit

This package computes and compares decoherence in an exactly solvable spin-bath model and in a closed system with a
quasi-continuous spectrum. The same closed system decoheres or not depending on the set of relevant observables
it is looked at through; the toolkit makes that concrete.

Main features:
- Closed-form expectation values, reduced states and decoherence factors of the spin-bath model
- A brute-force state-vector oracle for small environments
- Self-induced decoherence of van Hove observables with exponential decay fitting
- Characteristic times t_DS, t_RS and t_RU, including two-stage relaxation
- A batch command-line front-end writing deterministic CSV and JSON artifacts

Usage:
```python
from decoherence_toolkit import AnalyticService, DecoherenceToolkit, SpinBathModelService, parse_config

config = SpinBathModelService.sample_config(n=20, seed=1)
AnalyticService.overlap_r(config, 3.0)

toolkit = DecoherenceToolkit(out_dir="out")
toolkit.run(parse_config(open("run.toml").read()))
```
"""

__version__ = "0.1.0"

from decoherence_toolkit.config import apply_overrides, dump_config, load_config, parse_config
from decoherence_toolkit.errors import (
    CapacityError,
    ConfigError,
    DecoherenceToolkitError,
    DetectionError,
    FitDomainError,
    ModelError,
    OutputError,
    VerificationError,
)
from decoherence_toolkit.factory import ScenarioFactory
from decoherence_toolkit.scenarios import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import (
    ComplexAmplitude,
    ComplexSeries,
    DecayEstimate,
    EnvSpin,
    GaussianFamily,
    HermitianBlock2,
    LorentzianFamily,
    ObservableKind,
    ObservableSpec,
    RealSeries,
    ReducedState2,
    RunConfig,
    RunSummary,
    SidKernel,
    SpinBathConfig,
    TableFamily,
    TimeGrid,
    TimeScaleReport,
    TwoStageResult,
    TwoTimesScenario,
)
from decoherence_toolkit.services import (
    AnalyticService,
    FullState,
    OracleService,
    SidService,
    SpinBathModelService,
    TimescaleService,
)
from decoherence_toolkit.toolkit import DecoherenceToolkit

__all__ = [
    "DecoherenceToolkit",
    "ScenarioFactory",
    "BaseScenario",
    "ScenarioResult",
    "SpinBathModelService",
    "AnalyticService",
    "OracleService",
    "FullState",
    "SidService",
    "TimescaleService",
    # Configuration
    "parse_config",
    "load_config",
    "dump_config",
    "apply_overrides",
    # Data models
    "ComplexAmplitude",
    "ComplexSeries",
    "DecayEstimate",
    "EnvSpin",
    "GaussianFamily",
    "HermitianBlock2",
    "LorentzianFamily",
    "ObservableKind",
    "ObservableSpec",
    "RealSeries",
    "ReducedState2",
    "RunConfig",
    "RunSummary",
    "SidKernel",
    "SpinBathConfig",
    "TableFamily",
    "TimeGrid",
    "TimeScaleReport",
    "TwoStageResult",
    "TwoTimesScenario",
    # Errors
    "DecoherenceToolkitError",
    "ConfigError",
    "ModelError",
    "CapacityError",
    "FitDomainError",
    "DetectionError",
    "VerificationError",
    "OutputError",
]
