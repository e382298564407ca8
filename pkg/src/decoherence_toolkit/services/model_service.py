"""
Spin-Bath Model Service Module

Validation, reproducible sampling and relevant-observable construction for the spin-bath model. All methods are
pure: their results depend only on their arguments.

Main features:
- Diagnose normalisation violations of a configuration
- Sample Haar-uniform environments with uniform couplings from a seed
- Build observables for the three viewpoints (full, system-only, single environment spin)
- Build the product observables whose sum is the interaction Hamiltonian
"""

import logging

import numpy as np

from decoherence_toolkit.errors import ModelError
from decoherence_toolkit.schemas import (
    NORM_TOLERANCE,
    ComplexAmplitude,
    EnvSpin,
    HermitianBlock2,
    ObservableKind,
    ObservableSpec,
    SpinBathConfig,
    observable_kind_violations,
)

logger = logging.getLogger(__name__)


def _haar_qubits(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    # two complex Gaussians per qubit, normalised
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z[:, 0], z[:, 1]


class SpinBathModelService:
    """
    Spin-bath model service

    Stateless collection of model operations. Methods are static so the service can be used without an instance,
    and an instance can be shared freely between threads.

    Example:
        ```python
        spins = SpinBathModelService.sample_environment(n=20, seed=7, g_max=1.0)
        config = SpinBathConfig(a=2 ** -0.5, b=2 ** -0.5, spins=tuple(spins))
        assert SpinBathModelService.validate(config) == []

        obs = SpinBathModelService.observable_system_only(HermitianBlock2.pauli_x(), n=20)
        ```
    """

    @staticmethod
    def validate(config: SpinBathConfig) -> list[str]:
        """
        Diagnose a configuration

        Args:
            config: Configuration to check

        Returns:
            list[str]: Path-qualified violations, empty when every normalisation invariant holds
        """
        violations: list[str] = []
        norm = config.a.abs2() + config.b.abs2()
        if abs(norm - 1.0) > NORM_TOLERANCE:
            violations.append(f"a: |a|^2 + |b|^2 = {norm:.17g} (expected 1 within {NORM_TOLERANCE:g})")
        for i, spin in enumerate(config.spins):
            norm = spin.alpha.abs2() + spin.beta.abs2()
            if abs(norm - 1.0) > NORM_TOLERANCE:
                violations.append(
                    f"spins[{i}]: |alpha|^2 + |beta|^2 = {norm:.17g} (expected 1 within {NORM_TOLERANCE:g})"
                )
        return violations

    @staticmethod
    def sample_environment(n: int, seed: int, g_max: float = 1.0) -> list[EnvSpin]:
        """
        Sample an environment of N spins

        Each (alpha, beta) is Haar-uniform on the single-qubit state space and each g is uniform on (0, g_max].
        The result is a pure function of (n, seed, g_max).

        Args:
            n: Number of spins, n >= 0
            seed: Seed of the numpy Generator
            g_max: Upper coupling bound, > 0

        Returns:
            list[EnvSpin]: Sampled spins

        Raises:
            ModelError: If n < 0 or g_max <= 0
        """
        if n < 0:
            raise ModelError(f"Number of spins must be non-negative, got {n}")
        if not g_max > 0:
            raise ModelError(f"g_max must be positive, got {g_max}")

        rng = np.random.default_rng(seed)
        alpha, beta = _haar_qubits(rng, n)
        # 1 - U[0, 1) lies in (0, 1]
        g = g_max * (1.0 - rng.random(n))
        logger.debug("Sampled %d spins (seed=%d, g_max=%g)", n, seed, g_max)
        return [
            EnvSpin(
                alpha=ComplexAmplitude.from_complex(alpha[i]),
                beta=ComplexAmplitude.from_complex(beta[i]),
                g=float(g[i]),
            )
            for i in range(n)
        ]

    @staticmethod
    def haar_system_state(seed: int) -> tuple[ComplexAmplitude, ComplexAmplitude]:
        """Haar-uniform system amplitudes (a, b)"""
        a, b = _haar_qubits(np.random.default_rng(seed), 1)
        return ComplexAmplitude.from_complex(a[0]), ComplexAmplitude.from_complex(b[0])

    @staticmethod
    def sample_config(n: int, seed: int, g_max: float = 1.0, hbar: float = 1.0) -> SpinBathConfig:
        """Haar-uniform system and environment from one seed"""
        rng = np.random.default_rng(seed)
        system_seed, env_seed = (int(s) for s in rng.integers(0, 2**63 - 1, size=2))
        a, b = SpinBathModelService.haar_system_state(system_seed)
        spins = SpinBathModelService.sample_environment(n, env_seed, g_max)
        return SpinBathConfig(a=a, b=b, spins=tuple(spins), hbar=hbar)

    @staticmethod
    def observable_full(system: HermitianBlock2, env: list[HermitianBlock2]) -> ObservableSpec:
        """Generic product observable, closed-system viewpoint"""
        return ObservableSpec(system=system, env=tuple(env), kind=ObservableKind.FULL)

    @staticmethod
    def observable_system_only(s: HermitianBlock2, n: int) -> ObservableSpec:
        """
        Observable that observes only S0

        Args:
            s: System block
            n: Number of environment spins

        Returns:
            ObservableSpec: ``s ⊗ I ⊗ ... ⊗ I`` tagged ``system-only``
        """
        if n < 0:
            raise ModelError(f"Number of spins must be non-negative, got {n}")
        identity = HermitianBlock2.identity()
        return ObservableSpec(system=s, env=(identity,) * n, kind=ObservableKind.SYSTEM_ONLY)

    @staticmethod
    def observable_single_env(j: int, e: HermitianBlock2, n: int) -> ObservableSpec:
        """
        Observable that observes only the environment spin S_j

        Args:
            j: Spin index, 0 <= j < n
            e: Block acting on S_j
            n: Number of environment spins

        Returns:
            ObservableSpec: ``I ⊗ ... ⊗ e (at j) ⊗ ... ⊗ I`` tagged ``single-env``

        Raises:
            ModelError: If j is out of range
        """
        if not 0 <= j < n:
            raise ModelError(f"Spin index {j} out of range for N={n}")
        identity = HermitianBlock2.identity()
        env = tuple(e if i == j else identity for i in range(n))
        return ObservableSpec(system=identity, env=env, kind=ObservableKind.SINGLE_ENV, index=j)

    @staticmethod
    def identity_observable(n: int) -> ObservableSpec:
        return SpinBathModelService.observable_system_only(HermitianBlock2.identity(), n)

    @staticmethod
    def interaction_terms(config: SpinBathConfig) -> list[ObservableSpec]:
        """
        Product observables whose sum is the interaction Hamiltonian

        Term i is diag(1/2, -1/2) on S0 times diag(g_i, -g_i) on S_i, identities elsewhere (angular-frequency
        units; multiply by hbar for energies).
        """
        identity = HermitianBlock2.identity()
        system = HermitianBlock2.diagonal(0.5, -0.5)
        terms = []
        for i, spin in enumerate(config.spins):
            env = [identity] * config.n_env
            env[i] = HermitianBlock2.diagonal(spin.g, -spin.g)
            terms.append(ObservableSpec(system=system, env=tuple(env), kind=ObservableKind.FULL))
        return terms

    @staticmethod
    def audit_observable(obs: ObservableSpec, n: int | None = None) -> list[str]:
        """
        Structural audit of an observable's kind tag

        Args:
            obs: Observable, possibly built without validation
            n: Expected number of environment blocks

        Returns:
            list[str]: Violations, empty when the tag matches the blocks
        """
        violations = observable_kind_violations(obs)
        if n is not None and obs.n_env != n:
            violations.append(f"env: {obs.n_env} blocks for N={n}")
        return violations
