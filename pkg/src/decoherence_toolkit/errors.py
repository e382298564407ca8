"""
Decoherence Toolkit Exceptions

The base class ``DecoherenceToolkitError`` derives from ``Exception``; every concrete error also derives from the
builtin ``ValueError`` (bad input) or ``RuntimeError`` (failed operation) so that callers who only know the
builtins keep working. Each class carries the CLI exit code it maps to.
"""


class DecoherenceToolkitError(Exception):
    """Base class for toolkit errors"""

    exit_code: int = 1


class ConfigError(DecoherenceToolkitError, ValueError):
    """
    Invalid run configuration

    Attributes:
        messages: Path-qualified messages, one per violation (e.g. ``spin_bath.a: ...``)
    """

    exit_code = 1

    def __init__(self, messages: list[str]) -> None:
        self.messages = list(messages)
        super().__init__("Invalid configuration:\n" + "\n".join(f"  {m}" for m in self.messages))


class ModelError(DecoherenceToolkitError, ValueError):
    """Invalid arguments to a model, analytic or kernel operation"""

    exit_code = 1


class CapacityError(DecoherenceToolkitError, RuntimeError):
    """The brute-force oracle was asked for more environment spins than it can hold"""

    exit_code = 1


class FitDomainError(DecoherenceToolkitError, ValueError):
    """A decay fit was requested on data outside its domain (non-positive or empty window)"""

    exit_code = 1


class DetectionError(DecoherenceToolkitError, RuntimeError):
    """Two-stage detection could not resolve any stage in the series"""

    exit_code = 1


class VerificationError(DecoherenceToolkitError, RuntimeError):
    """Oracle and closed-form results disagree beyond tolerance"""

    exit_code = 2


class OutputError(DecoherenceToolkitError, RuntimeError):
    """Artifacts could not be written"""

    exit_code = 3
