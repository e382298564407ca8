"""
Analytic Spin-Bath Service Module

Closed-form time evolution of the spin-bath model. The conditional environment states are

    |E0(t)> = ⊗_i (alpha_i e^{+i g_i t/2} |up> + beta_i e^{-i g_i t/2} |down>),    |E1(t)> = |E0(-t)>

and every quantity below is a product of per-spin factors:

- r(t) = <E1|E0> = prod_i (|alpha_i|^2 e^{i g_i t} + |beta_i|^2 e^{-i g_i t})
- Gamma0(t) = <E0|eps|E0>, Gamma1(t) = <E1|eps|E0> for a product environment block eps
- <O>(t) = |a|^2 s00 Gamma0(t) + |b|^2 s11 Gamma0(-t) + 2 Re[a conj(b) s10 Gamma1(t)]

Per-spin factors are fused into one (time x spin) pass per chunk of time points; no per-spin series are kept.
Above LOG_PRODUCT_MIN_SPINS spins the products are accumulated as log-magnitude plus phase, since |r| can fall
far below the smallest normal double.
"""

import logging
from collections.abc import Callable, Iterator
from typing import Literal

import numpy as np

from decoherence_toolkit.errors import ModelError
from decoherence_toolkit.schemas import (
    ComplexAmplitude,
    ComplexSeries,
    HermitianBlock2,
    ObservableKind,
    ObservableSpec,
    RealSeries,
    ReducedState2,
    SpinBathConfig,
    TimeGrid,
)
from decoherence_toolkit.services.model_service import SpinBathModelService

logger = logging.getLogger(__name__)

LOG_PRODUCT_MIN_SPINS = 1000
_CHUNK_ELEMENTS = 1 << 20

AnalyticOperation = Literal[
    "overlap_r",
    "overlap_r_squared",
    "gamma0",
    "gamma1",
    "expectation_full",
    "expectation_s0",
    "expectation_single_env",
    "purity",
    "interaction_energy",
]


def _chunks(times: np.ndarray, n_spins: int) -> Iterator[slice]:
    rows = max(1, _CHUNK_ELEMENTS // max(n_spins, 1))
    for start in range(0, times.shape[0], rows):
        yield slice(start, start + rows)


def _product(factors: np.ndarray) -> np.ndarray:
    """Product over the spin axis (last axis) of a (time, spin) factor table"""
    if factors.shape[-1] <= LOG_PRODUCT_MIN_SPINS:
        return np.prod(factors, axis=-1)
    with np.errstate(divide="ignore"):
        log_magnitude = np.sum(np.log(np.abs(factors)), axis=-1)
    phase = np.sum(np.angle(factors), axis=-1)
    return np.exp(log_magnitude) * np.exp(1j * phase)


def _env_blocks(obs: ObservableSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d0 = np.array([e.d0 for e in obs.env], dtype=float)
    d1 = np.array([e.d1 for e in obs.env], dtype=float)
    off = np.array([e.off.value for e in obs.env], dtype=complex)
    return d0, d1, off


def _fused(
    config: SpinBathConfig,
    times: np.ndarray,
    factor: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    """Evaluate prod_i factor(g_i t) chunk by chunk; ``factor`` receives e^{i g t} of shape (time, spin)"""
    times = np.asarray(times, dtype=float)
    out = np.empty(times.shape[0], dtype=complex)
    if config.n_env == 0:
        out[:] = 1.0
        return out
    _, _, g = config.env_arrays()
    for rows in _chunks(times, config.n_env):
        rotation = np.exp(1j * np.outer(times[rows], g))
        out[rows] = _product(factor(rotation))
    return out


def _overlap(config: SpinBathConfig, times: np.ndarray) -> np.ndarray:
    alpha, beta, _ = config.env_arrays()
    pa, pb = np.abs(alpha) ** 2, np.abs(beta) ** 2
    return _fused(config, times, lambda rot: pa * rot + pb * rot.conj())


def _overlap_squared(config: SpinBathConfig, times: np.ndarray) -> np.ndarray:
    alpha, beta, _ = config.env_arrays()
    pa, pb = np.abs(alpha) ** 2, np.abs(beta) ** 2
    # |pa e^{igt} + pb e^{-igt}|^2 = pa^2 + pb^2 + 2 pa pb cos(2gt)
    values = _fused(config, times, lambda rot: pa * pa + pb * pb + 2.0 * pa * pb * (rot * rot).real)
    return values.real


def _gamma0(config: SpinBathConfig, obs: ObservableSpec, times: np.ndarray) -> np.ndarray:
    alpha, beta, _ = config.env_arrays()
    d0, d1, off = _env_blocks(obs)
    pa, pb = np.abs(alpha) ** 2, np.abs(beta) ** 2
    cross = alpha.conj() * beta * off
    return _fused(config, times, lambda rot: pa * d0 + pb * d1 + 2.0 * (cross * rot.conj()).real)


def _gamma1(config: SpinBathConfig, obs: ObservableSpec, times: np.ndarray) -> np.ndarray:
    alpha, beta, _ = config.env_arrays()
    d0, d1, off = _env_blocks(obs)
    pa, pb = np.abs(alpha) ** 2, np.abs(beta) ** 2
    cross = 2.0 * (alpha.conj() * beta * off).real
    return _fused(config, times, lambda rot: pa * d0 * rot + pb * d1 * rot.conj() + cross)


def _expectation_full(config: SpinBathConfig, obs: ObservableSpec, times: np.ndarray) -> np.ndarray:
    a, b = config.a.value, config.b.value
    s = obs.system
    s10 = s.off.value.conjugate()
    value = abs(a) ** 2 * s.d0 * _gamma0(config, obs, times).real
    value += abs(b) ** 2 * s.d1 * _gamma0(config, obs, -np.asarray(times, dtype=float)).real
    if s10 != 0:
        value += 2.0 * (a * b.conjugate() * s10 * _gamma1(config, obs, times)).real
    return value


def _expectation_s0(config: SpinBathConfig, s: HermitianBlock2, times: np.ndarray) -> np.ndarray:
    a, b = config.a.value, config.b.value
    s10 = s.off.value.conjugate()
    populations = abs(a) ** 2 * s.d0 + abs(b) ** 2 * s.d1
    return populations + 2.0 * (a * b.conjugate() * s10 * _overlap(config, times)).real


def _single_env_factor(config: SpinBathConfig, j: int, e: HermitianBlock2, times: np.ndarray) -> np.ndarray:
    spin = config.spins[j]
    alpha, beta = spin.alpha.value, spin.beta.value
    cross = alpha.conjugate() * beta * e.off.value
    rotation = np.exp(-1j * spin.g * np.asarray(times, dtype=float))
    return spin.alpha.abs2() * e.d0 + spin.beta.abs2() * e.d1 + 2.0 * (cross * rotation).real


def _expectation_single_env(config: SpinBathConfig, j: int, e: HermitianBlock2, times: np.ndarray) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    return config.a.abs2() * _single_env_factor(config, j, e, times) + config.b.abs2() * _single_env_factor(
        config, j, e, -times
    )


def _purity(config: SpinBathConfig, times: np.ndarray) -> np.ndarray:
    p0, p1 = config.a.abs2(), config.b.abs2()
    return p0 * p0 + p1 * p1 + 2.0 * p0 * p1 * _overlap_squared(config, times)


def _interaction_energy(config: SpinBathConfig, times: np.ndarray) -> np.ndarray:
    total = np.zeros(np.asarray(times).shape[0])
    for term in SpinBathModelService.interaction_terms(config):
        total += _expectation_full(config, term, times)
    return config.hbar * total


def _check_env_length(config: SpinBathConfig, obs: ObservableSpec) -> None:
    if obs.n_env != config.n_env:
        raise ModelError(f"Observable has {obs.n_env} environment blocks for N={config.n_env}")


def _check_spin_index(config: SpinBathConfig, j: int) -> None:
    if not 0 <= j < config.n_env:
        raise ModelError(f"Spin index {j} out of range for N={config.n_env}")


def _scalar(values: np.ndarray) -> complex:
    return complex(values[0])


class AnalyticService:
    """
    Analytic spin-bath service

    Exact expectation values for the three observable viewpoints of the spin-bath model:

    - closed system (full observables): Gamma0/Gamma1 products, no decoherence
    - open system S0 (system-only observables): interference term carried by r(t)
    - single environment spin S_j: periodic with period 2 pi / g_j, no limit

    Scalar methods and ``series`` share the same vectorised kernels, so sampling a grid reproduces the scalar
    calls point by point. Time may be negative.

    Example:
        ```python
        config = SpinBathModelService.sample_config(n=20, seed=3)
        AnalyticService.overlap_r(config, 2.5).value
        AnalyticService.series("overlap_r", config, None, TimeGrid(t_end=50.0, n_points=1001))
        ```
    """

    @staticmethod
    def overlap_r(config: SpinBathConfig, t: float) -> ComplexAmplitude:
        """Decoherence factor r(t) = <E1(t)|E0(t)>

        Args:
            config: Spin-bath configuration
            t: Time

        Returns:
            ComplexAmplitude: r(t); 1 for an empty environment or at t = 0
        """
        return ComplexAmplitude.from_complex(_scalar(_overlap(config, np.array([t], dtype=float))))

    @staticmethod
    def overlap_r_squared(config: SpinBathConfig, t: float) -> float:
        """|r(t)|^2 from its own product of real factors, independent of ``overlap_r``"""
        return float(_overlap_squared(config, np.array([t], dtype=float))[0])

    @staticmethod
    def gamma0(config: SpinBathConfig, obs: ObservableSpec, t: float) -> ComplexAmplitude:
        """Gamma0(t) = <E0(t)| ⊗_i eps_i |E0(t)>

        Each factor is |alpha|^2 eps_upup + |beta|^2 eps_dndn + 2 Re(conj(alpha) beta eps_updn e^{-i g t}), a real
        number, so Gamma0 is real.

        Raises:
            ModelError: If ``obs`` does not carry one block per spin
        """
        _check_env_length(config, obs)
        return ComplexAmplitude.from_complex(_scalar(_gamma0(config, obs, np.array([t], dtype=float))))

    @staticmethod
    def gamma1(config: SpinBathConfig, obs: ObservableSpec, t: float) -> ComplexAmplitude:
        """Gamma1(t) = <E1(t)| ⊗_i eps_i |E0(t)>

        Each factor is |alpha|^2 eps_upup e^{i g t} + |beta|^2 eps_dndn e^{-i g t} + 2 Re(conj(alpha) beta eps_updn).
        With identity blocks Gamma1 reduces to r(t).

        Raises:
            ModelError: If ``obs`` does not carry one block per spin
        """
        _check_env_length(config, obs)
        return ComplexAmplitude.from_complex(_scalar(_gamma1(config, obs, np.array([t], dtype=float))))

    @staticmethod
    def expectation_full(config: SpinBathConfig, obs: ObservableSpec, t: float) -> float:
        """Expectation value of a product observable in the closed-system viewpoint

        Args:
            config: Spin-bath configuration
            obs: Observable with one environment block per spin (any kind tag)
            t: Time

        Returns:
            float: |a|^2 s00 Gamma0(t) + |b|^2 s11 Gamma0(-t) + 2 Re[a conj(b) s10 Gamma1(t)]

        Raises:
            ModelError: If ``obs`` does not carry one block per spin
        """
        _check_env_length(config, obs)
        return float(_expectation_full(config, obs, np.array([t], dtype=float))[0])

    @staticmethod
    def expectation_s0(config: SpinBathConfig, s: HermitianBlock2, t: float) -> float:
        """Expectation value of ``s ⊗ I ⊗ ... ⊗ I``

        Args:
            config: Spin-bath configuration
            s: System block
            t: Time

        Returns:
            float: |a|^2 s00 + |b|^2 s11 + 2 Re[a conj(b) s10 r(t)] (the interference term carries the factor 2
            of the direct inner product)
        """
        return float(_expectation_s0(config, s, np.array([t], dtype=float))[0])

    @staticmethod
    def expectation_single_env(config: SpinBathConfig, j: int, e: HermitianBlock2, t: float) -> float:
        """Expectation value of an observable acting on environment spin S_j only

        Args:
            config: Spin-bath configuration
            j: Spin index
            e: Block acting on S_j
            t: Time

        Returns:
            float: |a|^2 f_j(t) + |b|^2 f_j(-t) with
            f_j(t) = |alpha_j|^2 eps_upup + |beta_j|^2 eps_dndn + 2 Re(conj(alpha_j) beta_j eps_updn e^{-i g_j t})

        Raises:
            ModelError: If j is out of range
        """
        _check_spin_index(config, j)
        return float(_expectation_single_env(config, j, e, np.array([t], dtype=float))[0])

    @staticmethod
    def reduced_state(config: SpinBathConfig, t: float) -> ReducedState2:
        """Reduced state of S0 in the (static) pointer basis

        Returns:
            ReducedState2: p0 = |a|^2, p1 = |b|^2, coh = a conj(b) r(t)
        """
        r = _scalar(_overlap(config, np.array([t], dtype=float)))
        a, b = config.a.value, config.b.value
        return ReducedState2(
            p0=config.a.abs2(),
            p1=config.b.abs2(),
            coh=ComplexAmplitude.from_complex(a * b.conjugate() * r),
        )

    @staticmethod
    def coarse_grained_state(config: SpinBathConfig, t: float) -> ReducedState2:
        """Diagonal part of the reduced state: the decohered state the open system approaches"""
        state = AnalyticService.reduced_state(config, t)
        return ReducedState2(p0=state.p0, p1=state.p1, coh=ComplexAmplitude())

    @staticmethod
    def pointer_basis() -> np.ndarray:
        """Pointer basis {|0>, |1>} as matrix columns; static because the system has no self-Hamiltonian"""
        return np.eye(2, dtype=complex)

    @staticmethod
    def purity(config: SpinBathConfig, t: float) -> float:
        """Tr rho_S^2 = |a|^4 + |b|^4 + 2 |a|^2 |b|^2 |r(t)|^2, in [1/2, 1] for normalised amplitudes"""
        return float(_purity(config, np.array([t], dtype=float))[0])

    @staticmethod
    def interaction_energy(config: SpinBathConfig, t: float) -> float:
        """<H_SE>(t), the hbar-scaled sum of ``expectation_full`` over the interaction terms; constant in t"""
        return float(_interaction_energy(config, np.array([t], dtype=float))[0])

    @staticmethod
    def series(
        op: AnalyticOperation,
        config: SpinBathConfig,
        obs: ObservableSpec | None,
        grid: TimeGrid,
    ) -> ComplexSeries | RealSeries:
        """Sample an analytic operation over a time grid

        ``obs`` is required by ``gamma0``, ``gamma1``, ``expectation_full`` (all blocks),
        ``expectation_s0`` (system block) and ``expectation_single_env`` (``obs.index`` and its block); the
        other operations ignore it.

        Args:
            op: Operation name
            config: Spin-bath configuration
            obs: Observable, when the operation needs one
            grid: Sample times

        Returns:
            ComplexSeries | RealSeries: Complex for ``overlap_r``/``gamma0``/``gamma1``, real otherwise

        Raises:
            ModelError: If the operation is unknown, needs an observable that was not given, or the observable
                does not fit the configuration
        """
        times = grid.times()
        logger.debug("Sampling %s on %d points (N=%d)", op, grid.n_points, config.n_env)

        if op == "overlap_r":
            return ComplexSeries(grid=grid, values=_overlap(config, times))
        if op == "overlap_r_squared":
            return RealSeries(grid=grid, values=_overlap_squared(config, times))
        if op == "purity":
            return RealSeries(grid=grid, values=_purity(config, times))
        if op == "interaction_energy":
            return RealSeries(grid=grid, values=_interaction_energy(config, times))

        if obs is None:
            raise ModelError(f"Operation '{op}' needs an observable")
        if op == "expectation_s0":
            return RealSeries(grid=grid, values=_expectation_s0(config, obs.system, times))
        if op == "expectation_single_env":
            if obs.kind is not ObservableKind.SINGLE_ENV or obs.index is None:
                raise ModelError("expectation_single_env needs a single-env observable")
            _check_spin_index(config, obs.index)
            block = obs.env[obs.index]
            return RealSeries(grid=grid, values=_expectation_single_env(config, obs.index, block, times))

        _check_env_length(config, obs)
        if op == "gamma0":
            return ComplexSeries(grid=grid, values=_gamma0(config, obs, times))
        if op == "gamma1":
            return ComplexSeries(grid=grid, values=_gamma1(config, obs, times))
        if op == "expectation_full":
            return RealSeries(grid=grid, values=_expectation_full(config, obs, times))
        raise ModelError(f"Unknown analytic operation: {op}")
