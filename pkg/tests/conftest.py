"""Global Test Fixtures Configuration"""

import sys
from collections.abc import Callable
from pathlib import Path

import pytest

from decoherence_toolkit.schemas import ComplexAmplitude, EnvSpin, HermitianBlock2, SpinBathConfig

# Add project root and source directories to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))
sys.path.insert(0, str(project_root / "src"))

HALF = 2**-0.5


@pytest.fixture
def bell_config() -> SpinBathConfig:
    """Equal superposition of the system coupled to one spin with alpha=0.6, beta=0.8, g=1"""
    return SpinBathConfig(
        a=ComplexAmplitude(re=HALF),
        b=ComplexAmplitude(re=HALF),
        spins=(EnvSpin(alpha=ComplexAmplitude(re=0.6), beta=ComplexAmplitude(re=0.8), g=1.0),),
    )


@pytest.fixture
def commensurate_config() -> SpinBathConfig:
    """Four spins with integer couplings 1..4, so every factor recurs after 2 pi"""
    spins = tuple(
        EnvSpin(alpha=ComplexAmplitude(re=0.6), beta=ComplexAmplitude(re=0.8), g=float(g)) for g in (1, 2, 3, 4)
    )
    return SpinBathConfig(a=ComplexAmplitude(re=HALF), b=ComplexAmplitude(re=HALF), spins=spins)


@pytest.fixture
def generic_block() -> HermitianBlock2:
    """Hermitian block with unequal diagonal and a small complex off-diagonal entry"""
    return HermitianBlock2(d0=1.0, d1=0.5, off=ComplexAmplitude(re=0.1, im=0.05))


@pytest.fixture
def spin_bath_toml() -> str:
    """Minimal spin-bath run configuration with three explicit spins"""
    return """
scenario = "spin-bath"
seed = 3

[grid]
t_end = 20.0
n_points = 401

[[spin_bath.spins]]
alpha = 0.6
beta = 0.8
g = 1.0

[[spin_bath.spins]]
alpha = 0.8
beta = [0.0, 0.6]
g = 0.5

[[spin_bath.spins]]
alpha = 1.0
beta = 0.0
g = 2.0
"""


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write a TOML document to a temporary run.toml and return its path"""

    def write(text: str, name: str = "run.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
