"""
Run Configuration Module

Reads and writes run configurations as TOML documents. Parsing validates the whole document against RunConfig and
then checks the model invariants the schema alone cannot see (normalisation, observable fit to the environment),
collecting every violation as a path-qualified message.

Main features:
- parse_config: TOML text to a validated RunConfig
- load_config: the same for a file, with table-kernel paths taken relative to the file
- dump_config: RunConfig back to TOML text
- apply_overrides: command-line overrides of top-level fields
"""

import logging
import sys
from pathlib import Path
from typing import Any

import tomli_w
from pydantic import ValidationError

from decoherence_toolkit.errors import ConfigError
from decoherence_toolkit.schemas import (
    ObservableKind,
    RunConfig,
    SpinBathConfig,
    SpinBathSection,
    TableFamily,
)
from decoherence_toolkit.services import SpinBathModelService

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)


def _location(loc: tuple[int | str, ...]) -> str:
    path = ""
    for part in loc:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "document"


def _validation_messages(error: ValidationError) -> list[str]:
    messages = []
    for item in error.errors():
        msg = item["msg"].removeprefix("Value error, ")
        messages.append(f"{_location(item['loc'])}: {msg}")
    return messages


def _spin_bath_violations(section: SpinBathSection) -> list[str]:
    spins = tuple(section.spins or ())
    model = SpinBathConfig(a=section.a, b=section.b, spins=spins, hbar=section.hbar)
    violations = [f"spin_bath.{v}" for v in SpinBathModelService.validate(model)]

    n = section.sampling.n if section.sampling is not None else len(spins)
    observable = section.observable
    if observable.kind is ObservableKind.SINGLE_ENV and observable.index >= n:
        violations.append(f"spin_bath.observable.index: {observable.index} is not a spin index for N={n}")
    if observable.kind is ObservableKind.FULL and observable.env is not None and len(observable.env) != n:
        violations.append(f"spin_bath.observable.env: {len(observable.env)} blocks for N={n}")
    if observable.kind is not ObservableKind.FULL and observable.env is not None:
        violations.append("spin_bath.observable.env: only full observables take explicit blocks")
    return violations


def config_violations(config: RunConfig) -> list[str]:
    """Model invariants of a schema-valid configuration, as path-qualified messages"""
    violations: list[str] = []
    if config.spin_bath is not None:
        violations.extend(_spin_bath_violations(config.spin_bath))
    if config.sid is not None and isinstance(config.sid.family, TableFamily) and config.sid.refinement:
        violations.append("sid.refinement: grid refinement needs a built-in kernel family")
    return violations


def parse_config(text: str) -> RunConfig:
    """
    Parse a TOML run configuration

    Args:
        text: TOML document

    Returns:
        RunConfig: Validated configuration

    Raises:
        ConfigError: With one path-qualified message per syntax error, unknown key, missing field or invariant
            violation

    Example:
        ```python
        config = parse_config(
            '''
            scenario = "spin-bath"
            seed = 1

            [grid]
            t_end = 50.0
            n_points = 1001

            [spin_bath.sampling]
            n = 4
            '''
        )
        ```
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError([f"document: {e}"]) from e

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_validation_messages(e)) from e

    violations = config_violations(config)
    if violations:
        raise ConfigError(violations)
    logger.debug("Parsed %s configuration (seed=%d)", config.scenario, config.seed)
    return config


def load_config(path: Path) -> RunConfig:
    """
    Load a TOML run configuration from a file

    Relative table-kernel paths are resolved against the file's directory.

    Raises:
        ConfigError: If the file cannot be read or does not hold a valid configuration
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError([f"{path}: cannot read configuration ({e})"]) from e

    config = parse_config(text)
    if config.sid is not None and isinstance(config.sid.family, TableFamily):
        base = Path(path).parent
        family = config.sid.family
        family = family.model_copy(
            update={"diag_path": base / family.diag_path, "offdiag_path": base / family.offdiag_path}
        )
        config = config.model_copy(update={"sid": config.sid.model_copy(update={"family": family})})
    return config


def dump_config(config: RunConfig) -> str:
    """Serialise a configuration to TOML; ``parse_config`` of the result equals the input"""
    data: dict[str, Any] = config.model_dump(mode="json", exclude_none=True)
    return tomli_w.dumps(data)


def apply_overrides(config: RunConfig, **overrides: Any) -> RunConfig:
    """
    Replace top-level fields of a configuration (e.g. ``seed`` from the command line)

    Raises:
        ConfigError: If the overridden configuration is invalid
    """
    if not overrides:
        return config
    try:
        return RunConfig.model_validate({**config.model_dump(), **overrides})
    except ValidationError as e:
        raise ConfigError(_validation_messages(e)) from e
