"""
Brute-Force Oracle Service Module

Independent verification path for the analytic formulas: the full state vector of U = S0 ∪ E in the
2^(N+1)-dimensional product basis.

The state is held as a tensor of shape (2,) * (N + 1): axis 0 is the system (index 0 = |0>), axis i is spin S_i
(index 0 = |up>). The interaction Hamiltonian is diagonal in this basis, so evolution multiplies each amplitude by
exp(+i t s sum_i g_i sigma_i / 2) with s, sigma_i = +1 for |0>, |up> and -1 otherwise. Nothing here uses the
conditional-state closed form. Observables are applied block by block and never materialised as dense matrices.
"""

import logging
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from decoherence_toolkit.errors import CapacityError, ModelError
from decoherence_toolkit.schemas import (
    STATE_TOLERANCE,
    ComplexAmplitude,
    ObservableSpec,
    ReducedState2,
    SpinBathConfig,
    readonly_array,
)

logger = logging.getLogger(__name__)

MAX_ORACLE_SPINS = 24


class FullState(BaseModel):
    """
    Full State Vector

    Pure state of the closed system. ``amplitudes[s, b1, ..., bN]`` is the amplitude of |s> ⊗ |b1 ... bN>.

    Attributes:
        n_env: Number of environment spins
        amplitudes: Read-only complex tensor of shape (2,) * (n_env + 1)
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_env: int = Field(..., ge=0, le=MAX_ORACLE_SPINS, description="Number of environment spins")
    amplitudes: np.ndarray = Field(..., description="Amplitude tensor, shape (2,) * (n_env + 1)")

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return readonly_array(np.asarray(value, dtype=complex))

    @model_validator(mode="after")
    def _check_state(self) -> "FullState":
        if self.amplitudes.shape != (2,) * (self.n_env + 1):
            raise ValueError(f"amplitude shape {self.amplitudes.shape} does not match n_env={self.n_env}")
        norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm2 - 1.0) > STATE_TOLERANCE:
            raise ValueError(f"squared norm {norm2} != 1")
        return self

    def flat(self) -> np.ndarray:
        """Amplitudes as a vector; the system bit is the most significant"""
        return self.amplitudes.reshape(-1)


def _coupling_field(g: np.ndarray) -> np.ndarray:
    """sum_i g_i sigma_i over the environment basis, shape (2,) * N"""
    field = np.zeros(())
    for g_i in g:
        field = np.add.outer(field, np.array([g_i, -g_i]))
    return field


class OracleService:
    """
    Oracle service

    Desk-scale brute force for at most ``MAX_ORACLE_SPINS`` environment spins. Memory grows as 2^(N+1) complex
    amplitudes (512 MiB at the cap).

    Example:
        ```python
        state = OracleService.build_initial(config)
        state_t = OracleService.evolve(state, config, 2.37)
        OracleService.expectation(state_t, obs)
        OracleService.partial_trace(state_t)
        ```
    """

    @staticmethod
    def build_initial(config: SpinBathConfig) -> FullState:
        """Tensor-product expansion of (a|0> + b|1>) ⊗_i (alpha_i|up> + beta_i|down>)

        Args:
            config: Spin-bath configuration

        Returns:
            FullState: Initial state

        Raises:
            CapacityError: If the environment has more than MAX_ORACLE_SPINS spins
        """
        if config.n_env > MAX_ORACLE_SPINS:
            raise CapacityError(
                f"Oracle holds at most {MAX_ORACLE_SPINS} environment spins, got {config.n_env}"
            )
        psi = np.array([config.a.value, config.b.value], dtype=complex)
        for spin in config.spins:
            psi = np.multiply.outer(psi, np.array([spin.alpha.value, spin.beta.value], dtype=complex))
        logger.debug("Built oracle state with %d amplitudes", psi.size)
        return FullState(n_env=config.n_env, amplitudes=psi)

    @staticmethod
    def evolve(state: FullState, config: SpinBathConfig, t: float) -> FullState:
        """Evolve under the interaction Hamiltonian by amplitude-wise phases

        Args:
            state: State at time 0 (or any time t0; the result is then at t0 + t)
            config: Configuration providing the couplings
            t: Evolution time

        Returns:
            FullState: Evolved state

        Raises:
            ModelError: If the state and configuration disagree on N
        """
        if state.n_env != config.n_env:
            raise ModelError(f"State has {state.n_env} spins, configuration has {config.n_env}")
        _, _, g = config.env_arrays()
        field = _coupling_field(g)
        signed_field = np.stack([field, -field])
        phases = np.exp(0.5j * t * signed_field)
        return FullState(n_env=state.n_env, amplitudes=state.amplitudes * phases)

    @staticmethod
    def apply(state: FullState, obs: ObservableSpec) -> np.ndarray:
        """O|psi> as a tensor of the state's shape, applying one 2x2 block per axis"""
        if obs.n_env != state.n_env:
            raise ModelError(f"Observable has {obs.n_env} environment blocks for N={state.n_env}")
        phi = state.amplitudes
        for axis, block in enumerate((obs.system, *obs.env)):
            if block.is_identity():
                continue
            phi = np.moveaxis(np.tensordot(block.matrix(), phi, axes=([1], [axis])), 0, axis)
        return phi

    @staticmethod
    def expectation(state: FullState, obs: ObservableSpec) -> float:
        """<psi|O|psi> for a product observable

        Raises:
            ModelError: If the observable does not carry one block per spin, or the result is not real
        """
        value = complex(np.vdot(state.amplitudes, OracleService.apply(state, obs)))
        if abs(value.imag) > STATE_TOLERANCE * max(1.0, abs(value.real)):
            raise ModelError(f"Expectation value has imaginary part {value.imag:g}")
        return value.real

    @staticmethod
    def density_matrix(state: FullState) -> np.ndarray:
        """2x2 reduced density matrix of S0, tracing out the environment"""
        m = state.amplitudes.reshape(2, -1)
        return m @ m.conj().T

    @staticmethod
    def partial_trace(state: FullState) -> ReducedState2:
        return ReducedState2.from_matrix(OracleService.density_matrix(state))

    @staticmethod
    def overlap(state: FullState, config: SpinBathConfig) -> ComplexAmplitude:
        """<E1|E0> read off the two system branches a|E0> and b|E1>

        Raises:
            ModelError: If a or b vanishes (one branch carries no information)
        """
        a, b = config.a.value, config.b.value
        if a == 0 or b == 0:
            raise ModelError("overlap needs both system amplitudes to be non-zero")
        branch = state.amplitudes.reshape(2, -1)
        return ComplexAmplitude.from_complex(np.vdot(branch[1], branch[0]) / (a * b.conjugate()))

    @staticmethod
    def purity(state: FullState) -> float:
        rho = OracleService.density_matrix(state)
        return float(np.trace(rho @ rho).real)

    @staticmethod
    def norm(state: FullState) -> float:
        return float(np.linalg.norm(state.flat()))
