"""Decoherence Service Layer Module"""

from decoherence_toolkit.services.analytic_service import AnalyticService
from decoherence_toolkit.services.model_service import SpinBathModelService
from decoherence_toolkit.services.oracle_service import FullState, OracleService
from decoherence_toolkit.services.sid_service import SidService
from decoherence_toolkit.services.timescale_service import TimescaleService

__all__ = [
    "SpinBathModelService",
    "AnalyticService",
    "OracleService",
    "FullState",
    "SidService",
    "TimescaleService",
]
