"""Run Configuration Unit Test"""

from collections.abc import Callable
from pathlib import Path

import pytest

from decoherence_toolkit.config import apply_overrides, dump_config, load_config, parse_config
from decoherence_toolkit.errors import ConfigError
from decoherence_toolkit.schemas import LorentzianFamily, ObservableKind, TableFamily


class TestParseConfig:
    """Test parse_config"""

    def test_explicit_spins(self, spin_bath_toml: str) -> None:
        """Test an explicit environment of three spins"""
        config = parse_config(spin_bath_toml)
        assert config.scenario == "spin-bath"
        assert config.seed == 3
        assert config.spin_bath is not None
        assert len(config.spin_bath.spins or []) == 3
        assert config.spin_bath.spins[1].beta.value == 0.6j  # type: ignore[index]
        assert config.spin_bath.observable.kind is ObservableKind.SYSTEM_ONLY

    def test_defaults(self) -> None:
        """Test omitted sections take their defaults"""
        config = parse_config(
            """
scenario = "two-times"

[grid]
t_end = 100.0
n_points = 1001

[two_times]
gamma_se = 1.0
gamma_e = 0.01
"""
        )
        assert config.seed == 0
        assert config.grid.t_start == 0.0
        assert config.timescales.macroscopicity == 1e-2
        assert config.output.summary == "summary.json"

    def test_round_trip(self, spin_bath_toml: str) -> None:
        """Test parse_config(dump_config(c)) == c"""
        config = parse_config(spin_bath_toml)
        assert parse_config(dump_config(config)) == config

    def test_round_trip_sid(self) -> None:
        """Test a SID configuration survives serialisation with its kernel family"""
        config = parse_config(
            """
scenario = "sid"

[grid]
t_end = 60.0
n_points = 1201

[sid]
refinement = [128, 256]

[sid.family]
kind = "lorentzian"
center = 12.775
width = 0.2
"""
        )
        assert isinstance(config.sid.family, LorentzianFamily)  # type: ignore[union-attr]
        assert parse_config(dump_config(config)) == config

    def test_unnormalised_system(self) -> None:
        """Test |a|^2 + |b|^2 = 2 is reported with its path"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[spin_bath]
a = 1.0
b = 1.0
"""
            )
        assert exc_info.value.messages[0].startswith("spin_bath.a:")
        assert exc_info.value.exit_code == 1

    def test_unnormalised_spin(self) -> None:
        """Test an unnormalised spin is reported with its index"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[[spin_bath.spins]]
alpha = 0.6
beta = 0.6
g = 1.0
"""
            )
        messages = exc_info.value.messages
        assert len(messages) == 1
        assert messages[0].startswith("spin_bath.spins[0]:")

    def test_unknown_key(self) -> None:
        """Test unknown keys are rejected with their location"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(
                """
scenario = "two-times"
colour = "blue"

[grid]
t_end = 10.0
n_points = 11

[two_times]
gamma_se = 1.0
gamma_e = 0.0
"""
            )
        assert any(m.startswith("colour:") for m in exc_info.value.messages)

    def test_nested_location(self) -> None:
        """Test errors inside arrays of tables carry their index"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[[spin_bath.spins]]
alpha = 1.0
beta = 0.0
g = "fast"
"""
            )
        assert any(m.startswith("spin_bath.spins[0].g:") for m in exc_info.value.messages)

    def test_syntax_error(self) -> None:
        """Test malformed TOML is a configuration error"""
        with pytest.raises(ConfigError, match="document"):
            parse_config("scenario = ")

    def test_spins_and_sampling(self) -> None:
        """Test explicit spins and a sampling spec are mutually exclusive"""
        with pytest.raises(ConfigError, match="not both"):
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[spin_bath.sampling]
n = 2

[[spin_bath.spins]]
alpha = 1.0
beta = 0.0
g = 1.0
"""
            )

    def test_single_env_index_out_of_range(self) -> None:
        """Test a single-env index beyond N is reported"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[spin_bath.sampling]
n = 2

[spin_bath.observable]
kind = "single-env"
index = 2
"""
            )
        assert exc_info.value.messages == ["spin_bath.observable.index: 2 is not a spin index for N=2"]

    def test_full_env_length(self) -> None:
        """Test explicit full-observable blocks must match N"""
        with pytest.raises(ConfigError, match="spin_bath.observable.env"):
            parse_config(
                """
scenario = "spin-bath"

[grid]
t_end = 10.0
n_points = 11

[spin_bath.sampling]
n = 2

[spin_bath.observable]
kind = "full"

[[spin_bath.observable.env]]
d0 = 1.0
d1 = 0.5
"""
            )

    def test_table_refinement(self) -> None:
        """Test refinement is refused for table kernels"""
        with pytest.raises(ConfigError, match="sid.refinement"):
            parse_config(
                """
scenario = "sid"

[grid]
t_end = 10.0
n_points = 11

[sid]
refinement = [64, 128]

[sid.family]
kind = "table"
diag_path = "diag.txt"
offdiag_path = "offdiag.txt"
"""
            )


class TestLoadConfig:
    """Test load_config and apply_overrides"""

    def test_load(self, write_config: Callable[..., Path], spin_bath_toml: str) -> None:
        """Test loading from a file"""
        assert load_config(write_config(spin_bath_toml)) == parse_config(spin_bath_toml)

    def test_missing_file(self, tmp_path: Path) -> None:
        """Test an unreadable file is a configuration error"""
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "missing.toml")

    def test_table_paths_relative_to_file(self, write_config: Callable[..., Path], tmp_path: Path) -> None:
        """Test table kernel paths resolve against the configuration's directory"""
        path = write_config(
            """
scenario = "sid"

[grid]
t_end = 10.0
n_points = 11

[sid.family]
kind = "table"
diag_path = "tables/diag.txt"
offdiag_path = "tables/offdiag.txt"
"""
        )
        config = load_config(path)
        assert isinstance(config.sid.family, TableFamily)  # type: ignore[union-attr]
        assert config.sid.family.diag_path == tmp_path / "tables" / "diag.txt"  # type: ignore[union-attr]

    def test_seed_override(self, spin_bath_toml: str) -> None:
        """Test overriding the seed revalidates the configuration"""
        config = apply_overrides(parse_config(spin_bath_toml), seed=11)
        assert config.seed == 11
        with pytest.raises(ConfigError, match="seed"):
            apply_overrides(config, seed=-1)

    def test_no_override(self, spin_bath_toml: str) -> None:
        """Test no overrides returns the configuration unchanged"""
        config = parse_config(spin_bath_toml)
        assert apply_overrides(config) is config
