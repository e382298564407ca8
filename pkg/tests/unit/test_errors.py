"""Exception Hierarchy Unit Test"""

import pytest

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


class TestErrors:
    """Test toolkit exceptions"""

    def test_base_class(self) -> None:
        """Test the base class is a plain Exception"""
        assert DecoherenceToolkitError.__bases__ == (Exception,)
        assert not issubclass(DecoherenceToolkitError, (ValueError, RuntimeError))

    @pytest.mark.parametrize(
        ("cls", "builtin", "exit_code"),
        [
            (ModelError, ValueError, 1),
            (FitDomainError, ValueError, 1),
            (CapacityError, RuntimeError, 1),
            (DetectionError, RuntimeError, 1),
            (VerificationError, RuntimeError, 2),
            (OutputError, RuntimeError, 3),
        ],
    )
    def test_concrete_errors(
        self, cls: type[DecoherenceToolkitError], builtin: type[Exception], exit_code: int
    ) -> None:
        """Test every concrete error derives from the toolkit base and one builtin"""
        assert issubclass(cls, DecoherenceToolkitError)
        assert issubclass(cls, builtin)
        assert cls.exit_code == exit_code

    def test_config_error_messages(self) -> None:
        """Test ConfigError keeps its path-qualified messages"""
        error = ConfigError(["grid.n_points: must be at least 2"])
        assert isinstance(error, ValueError)
        assert error.exit_code == 1
        assert error.messages == ["grid.n_points: must be at least 2"]
        assert "grid.n_points" in str(error)
