"""
Decoherence Toolkit Data Model Definitions

This module defines the data models used throughout the toolkit: the spin-bath configuration of the closed system
U = S0 ∪ E, relevant-observable selections, time grids and sampled series, SID kernels, decay estimates, time-scale
reports and the run configuration consumed by the command-line front-end.

This module mainly includes:
- Spin-bath models: ComplexAmplitude, EnvSpin, SpinBathConfig, HermitianBlock2, ObservableSpec
- Evolution results: TimeGrid, ComplexSeries, RealSeries, ReducedState2
- SID models: kernel families, SidKernel, DecayEstimate, RefinementReport
- Time-scale models: TwoTimesScenario, TwoStageResult, TimeScaleReport, ConvergenceVerdict
- Run artifacts: VerificationRecord, SeriesTable, RunSummary
- Run configuration: RunConfig and its sections

All models are based on Pydantic's BaseModel and are immutable after construction. Models that carry sampled
arrays store read-only numpy arrays.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, ClassVar, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    FiniteFloat,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    computed_field,
    field_validator,
    model_validator,
)

INFINITE = "infinite"
NOT_REACHED = "not reached"

TimeValue = float | Literal["infinite", "not reached"]
"""A characteristic time: a finite number of time units, or an explicit marker (never a sentinel float)."""

TimeMethod = Literal["threshold-crossing", "envelope-fit", "pole-formula", "macroscopicity"]

NORM_TOLERANCE = 1e-12
STATE_TOLERANCE = 1e-10


def readonly_array(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


# Spin-bath models
class ComplexAmplitude(BaseModel):
    """
    Complex Amplitude

    A finite complex number. Houses the system amplitudes a, b, the per-spin amplitudes alpha, beta and the
    off-diagonal entries of Hermitian blocks.

    A bare number, a Python/numpy complex, or a ``[re, im]`` pair are accepted as input.

    Example:
        ```python
        a = ComplexAmplitude(re=0.6, im=0.0)
        b = ComplexAmplitude.from_complex(0.8j)
        assert abs(a.abs2() + b.abs2() - 1.0) < 1e-12
        ```
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    re: FiniteFloat = Field(default=0.0, description="Real part (dimensionless)")
    im: FiniteFloat = Field(default=0.0, description="Imaginary part (dimensionless)")

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, bool):
            return data
        if isinstance(data, complex):
            return {"re": data.real, "im": data.imag}
        if isinstance(data, (int, float)):
            return {"re": float(data), "im": 0.0}
        if isinstance(data, (list, tuple)) and len(data) == 2:
            return {"re": data[0], "im": data[1]}
        return data

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexAmplitude":
        """Build an amplitude from a Python or numpy complex number"""
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    @property
    def value(self) -> complex:
        """The amplitude as a Python complex"""
        return complex(self.re, self.im)

    def abs2(self) -> float:
        """Squared modulus"""
        return self.re * self.re + self.im * self.im


class EnvSpin(BaseModel):
    """
    Environment Spin

    One spin S_i of the environment: initial state alpha|up> + beta|down> and coupling g to the system.

    Attributes:
        alpha: Amplitude of |up>
        beta: Amplitude of |down>
        g: Coupling strength, angular-frequency units
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: ComplexAmplitude = Field(..., description="Amplitude of |up>")
    beta: ComplexAmplitude = Field(..., description="Amplitude of |down>")
    g: FiniteFloat = Field(..., description="Coupling strength (angular frequency)")


class SpinBathConfig(BaseModel):
    """
    Spin-Bath Configuration

    Full description of the closed system U = S0 ∪ E starting in the product state
    (a|0> + b|1>) ⊗_i (alpha_i|up> + beta_i|down>).

    Normalisation is not enforced at construction; ``SpinBathModelService.validate`` reports violations and the
    configuration parser rejects them. An empty environment is legal.

    Attributes:
        a: Amplitude of |0>
        b: Amplitude of |1>
        spins: Environment spins, possibly empty
        hbar: Reduced Planck constant in the chosen action units

    Example:
        ```python
        config = SpinBathConfig(
            a=ComplexAmplitude(re=2 ** -0.5),
            b=ComplexAmplitude(re=2 ** -0.5),
            spins=(EnvSpin(alpha=0.6, beta=0.8, g=1.0),),
        )
        config.n_env  # 1
        ```
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: ComplexAmplitude = Field(..., description="Amplitude of |0>")
    b: ComplexAmplitude = Field(..., description="Amplitude of |1>")
    spins: tuple[EnvSpin, ...] = Field(default=(), description="Environment spins")
    hbar: PositiveFloat = Field(default=1.0, description="Reduced Planck constant (action units)")

    @property
    def n_env(self) -> int:
        """Number of environment spins N"""
        return len(self.spins)

    def env_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (alpha, beta, g) as numpy arrays of length N"""
        alpha = np.array([s.alpha.value for s in self.spins], dtype=complex)
        beta = np.array([s.beta.value for s in self.spins], dtype=complex)
        g = np.array([s.g for s in self.spins], dtype=float)
        return alpha, beta, g


class HermitianBlock2(BaseModel):
    """
    Hermitian 2x2 Block

    ``[[d0, off], [conj(off), d1]]``. Row/column 0 is |0> for the system block and |up> for spin blocks, so ``off``
    holds s01 (system) or eps_up_down (spin); s10 is ``conj(off)``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    d0: FiniteFloat = Field(..., description="Entry (0, 0)")
    d1: FiniteFloat = Field(..., description="Entry (1, 1)")
    off: ComplexAmplitude = Field(default_factory=ComplexAmplitude, description="Entry (0, 1)")

    @classmethod
    def identity(cls) -> "HermitianBlock2":
        return cls(d0=1.0, d1=1.0)

    @classmethod
    def diagonal(cls, d0: float, d1: float) -> "HermitianBlock2":
        return cls(d0=d0, d1=d1)

    @classmethod
    def pauli_x(cls) -> "HermitianBlock2":
        return cls(d0=0.0, d1=0.0, off=ComplexAmplitude(re=1.0))

    @classmethod
    def pauli_z(cls) -> "HermitianBlock2":
        return cls(d0=1.0, d1=-1.0)

    def is_identity(self) -> bool:
        return self.d0 == 1.0 and self.d1 == 1.0 and self.off.re == 0.0 and self.off.im == 0.0

    def matrix(self) -> np.ndarray:
        """Dense 2x2 complex matrix"""
        off = self.off.value
        return np.array([[self.d0, off], [off.conjugate(), self.d1]], dtype=complex)


class ObservableKind(str, Enum):
    """Relevant-observable viewpoint"""

    FULL = "full"
    SYSTEM_ONLY = "system-only"
    SINGLE_ENV = "single-env"


def observable_kind_violations(spec: "ObservableSpec") -> list[str]:
    """Structural audit of an observable's kind tag against its block contents"""
    violations: list[str] = []
    if spec.kind is ObservableKind.SYSTEM_ONLY:
        violations.extend(
            f"env[{i}]: system-only observable needs an identity block"
            for i, block in enumerate(spec.env)
            if not block.is_identity()
        )
    elif spec.kind is ObservableKind.SINGLE_ENV:
        if spec.index is None or not 0 <= spec.index < len(spec.env):
            violations.append(f"index: {spec.index} is not a spin index for N={len(spec.env)}")
        if not spec.system.is_identity():
            violations.append("system: single-env observable needs an identity system block")
        violations.extend(
            f"env[{i}]: single-env observable needs an identity block away from index {spec.index}"
            for i, block in enumerate(spec.env)
            if i != spec.index and not block.is_identity()
        )
    return violations


class ObservableSpec(BaseModel):
    """
    Observable Specification

    A product observable O = S ⊗_i eps_i on U = S0 ∪ E, tagged with the viewpoint it belongs to:

    - ``full``: generic blocks (closed-system viewpoint)
    - ``system-only``: every environment block is the identity (observes S0 only)
    - ``single-env``: the system block and every environment block but ``index`` are identities (observes S_j)

    Construction rejects tags inconsistent with the blocks.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    system: HermitianBlock2 = Field(..., description="System block (s00, s01, s11)")
    env: tuple[HermitianBlock2, ...] = Field(default=(), description="Environment blocks, one per spin")
    kind: ObservableKind = Field(default=ObservableKind.FULL, description="Viewpoint tag")
    index: int | None = Field(default=None, description="Observed spin for single-env observables")

    @model_validator(mode="after")
    def _check_kind(self) -> "ObservableSpec":
        violations = observable_kind_violations(self)
        if violations:
            raise ValueError("; ".join(violations))
        return self

    @property
    def n_env(self) -> int:
        return len(self.env)


class TimeGrid(BaseModel):
    """
    Time Grid

    Uniformly spaced sample times from ``t_start`` to ``t_end`` inclusive.

    Example:
        ```python
        grid = TimeGrid(t_start=0.0, t_end=50.0, n_points=1001)
        grid.step  # 0.05
        ```
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    t_start: FiniteFloat = Field(default=0.0, description="First sample time")
    t_end: FiniteFloat = Field(..., description="Last sample time")
    n_points: int = Field(..., ge=2, description="Number of samples")

    @model_validator(mode="after")
    def _check_order(self) -> "TimeGrid":
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must be greater than t_start ({self.t_start})")
        return self

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.n_points - 1)

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)


class ReducedState2(BaseModel):
    """
    Reduced State of S0

    ``[[p0, coh], [conj(coh), p1]]`` in the pointer basis {|0>, |1>}. The pointer basis is static because the
    system self-Hamiltonian vanishes.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    p0: float = Field(..., description="Population of |0>")
    p1: float = Field(..., description="Population of |1>")
    coh: ComplexAmplitude = Field(..., description="Coherence, entry (0, 1)")

    @model_validator(mode="after")
    def _check_state(self) -> "ReducedState2":
        tol = STATE_TOLERANCE
        for name, p in (("p0", self.p0), ("p1", self.p1)):
            if not -tol <= p <= 1.0 + tol:
                raise ValueError(f"{name}={p} outside [0, 1]")
        if abs(self.p0 + self.p1 - 1.0) > tol:
            raise ValueError(f"trace {self.p0 + self.p1} != 1")
        if self.coh.abs2() > self.p0 * self.p1 + tol:
            raise ValueError(f"|coh|^2={self.coh.abs2()} exceeds p0*p1={self.p0 * self.p1}")
        return self

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "ReducedState2":
        return cls(
            p0=float(rho[0, 0].real),
            p1=float(rho[1, 1].real),
            coh=ComplexAmplitude.from_complex(rho[0, 1]),
        )

    def matrix(self) -> np.ndarray:
        coh = self.coh.value
        return np.array([[self.p0, coh], [coh.conjugate(), self.p1]], dtype=complex)

    def purity(self) -> float:
        """Tr rho^2"""
        return self.p0 * self.p0 + self.p1 * self.p1 + 2.0 * self.coh.abs2()


class _Series(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: TimeGrid = Field(..., description="Sample times")
    values: np.ndarray = Field(..., description="One value per grid point")

    dtype: ClassVar[type] = float

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return readonly_array(np.asarray(value, dtype=cls.dtype))

    @model_validator(mode="after")
    def _check_length(self) -> "_Series":
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(f"{self.values.shape[0]} values for {self.grid.n_points} grid points")
        return self

    @property
    def times(self) -> np.ndarray:
        return self.grid.times()


class ComplexSeries(_Series):
    """Complex values sampled on a time grid (r(t), Gamma0(t), Gamma1(t))"""

    dtype: ClassVar[type] = complex


class RealSeries(_Series):
    """Real values sampled on a time grid (expectation values, envelopes)"""

    dtype: ClassVar[type] = float


# SID models
class _ProfileKernel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    center: FiniteFloat = Field(..., description="Center of the energy profile h(omega)")
    width: PositiveFloat = Field(..., description="Width of the off-diagonal kernel in nu = omega - omega'")
    amplitude: FiniteFloat = Field(default=1.0, description="Off-diagonal amplitude C")
    spread: PositiveFloat = Field(default=2.0, description="Standard deviation W of the energy profile")
    diag_amplitude: FiniteFloat = Field(default=1.0, description="Diagonal amplitude D")


class LorentzianFamily(_ProfileKernel):
    """
    Lorentzian Kernel Family

    offdiag(w, w') = C h((w + w')/2) (width/pi) / ((w - w')^2 + width^2); diag(w) = D h(w). The off-diagonal term
    decays as exp(-width t / hbar): the single-pole picture with gamma = width.
    """

    kind: Literal["lorentzian"] = "lorentzian"


class GaussianFamily(_ProfileKernel):
    """
    Gaussian Kernel Family

    offdiag(w, w') = C h((w + w')/2) N(w - w'; 0, width); decays as exp(-width^2 t^2 / 2 hbar^2), not exponentially.
    """

    kind: Literal["gaussian"] = "gaussian"


class TableFamily(BaseModel):
    """
    Table-Driven Kernel Family

    Kernel values read from text files: ``diag_path`` holds two columns (omega, value) on a uniform grid and
    ``offdiag_path`` holds three columns (flat index i*n_omega + j, re, im). Unlisted off-diagonal entries are zero.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["table"] = "table"
    diag_path: Path = Field(..., description="Two-column diagonal table")
    offdiag_path: Path = Field(..., description="Three-column off-diagonal table")


KernelFamily = Annotated[LorentzianFamily | GaussianFamily | TableFamily, Field(discriminator="kind")]


class SidKernel(BaseModel):
    """
    SID Kernel

    Sampled van Hove expectation kernel on a uniform energy grid: the diagonal weight rho(w)O(w) and the
    off-diagonal kernel rho(w, w')O(w, w'). The off-diagonal table must be Hermitian so that the expectation
    value is real.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega_min: NonNegativeFloat = Field(default=0.0, description="First grid energy")
    omega_max: PositiveFloat = Field(..., description="Last grid energy")
    diag: np.ndarray = Field(..., description="Diagonal weights, shape (n_omega,)")
    offdiag: np.ndarray = Field(..., description="Off-diagonal kernel, shape (n_omega, n_omega)")
    hbar: PositiveFloat = Field(default=1.0, description="Reduced Planck constant")

    @field_validator("diag", mode="before")
    @classmethod
    def _diag_array(cls, value: Any) -> np.ndarray:
        return readonly_array(np.asarray(value, dtype=float))

    @field_validator("offdiag", mode="before")
    @classmethod
    def _offdiag_array(cls, value: Any) -> np.ndarray:
        return readonly_array(np.asarray(value, dtype=complex))

    @model_validator(mode="after")
    def _check_tables(self) -> "SidKernel":
        n = self.diag.shape[0]
        if self.diag.ndim != 1 or n < 2:
            raise ValueError("diag must be a 1-D table with at least two points")
        if self.offdiag.shape != (n, n):
            raise ValueError(f"offdiag shape {self.offdiag.shape} does not match n_omega={n}")
        if not self.omega_max > self.omega_min:
            raise ValueError("omega_max must exceed omega_min")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise ValueError("kernel values must be finite")
        scale = max(float(np.max(np.abs(self.offdiag))), 1.0)
        if not np.allclose(self.offdiag, self.offdiag.conj().T, rtol=0.0, atol=1e-12 * scale):
            raise ValueError("offdiag is not Hermitian: entry(w, w') != conj(entry(w', w))")
        return self

    @property
    def n_omega(self) -> int:
        return int(self.diag.shape[0])

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_omega - 1)

    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_omega)

    def weights(self) -> np.ndarray:
        """Trapezoid weights on the energy grid"""
        w = np.full(self.n_omega, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w


class DecayEstimate(BaseModel):
    """
    Decay Estimate

    Result of an exponential fit to a decaying envelope: rate gamma (energy units) and relaxation time
    t_relax = hbar / gamma.

    Attributes:
        gamma: Fitted decay rate
        hbar: Reduced Planck constant used for the conversion
        residual: RMS residual of the log-envelope fit
        flagged: True when the residual exceeds the exponential-fit threshold
        window: Fit window (t_a, t_b)
    """

    model_config = ConfigDict(frozen=True)

    gamma: PositiveFloat = Field(..., description="Fitted decay rate (energy units)")
    hbar: PositiveFloat = Field(default=1.0, description="Reduced Planck constant")
    residual: NonNegativeFloat = Field(..., description="RMS log-residual of the fit")
    flagged: bool = Field(default=False, description="Decay is not exponential within threshold")
    window: tuple[float, float] = Field(..., description="Fit window (t_a, t_b)")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def t_relax(self) -> float:
        return self.hbar / self.gamma


class RefinementReport(BaseModel):
    """Convergence of expectation_at under energy-grid refinement at a fixed time"""

    model_config = ConfigDict(frozen=True)

    time: float
    resolutions: list[int]
    spacings: list[float]
    values: list[float]
    differences: list[float] = Field(description="|value(k+1) - value(k)| between successive resolutions")
    orders: list[float | None] = Field(description="Observed orders; None where differences hit round-off")
    revival_times: list[float] = Field(description="2 pi hbar / spacing per resolution")


# Time-scale models
class TwoTimesScenario(BaseModel):
    """
    Two-Times Scenario

    Synthetic relaxation A exp(-gamma_se t / hbar) + B exp(-gamma_e t / hbar) of a system strongly coupled to an
    environment (gamma_se) whose parts interact weakly among themselves (gamma_e). gamma_e = 0 encodes a
    non-interacting environment.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_se: NonNegativeFloat = Field(..., description="Rate from the system-environment interaction")
    gamma_e: NonNegativeFloat = Field(..., description="Rate from interactions inside the environment")
    weight_a: PositiveFloat = Field(default=1.0, description="Weight A of the fast stage")
    weight_b: PositiveFloat = Field(default=1.0, description="Weight B of the slow stage")
    hbar: PositiveFloat = Field(default=1.0, description="Reduced Planck constant")


class TwoStageResult(BaseModel):
    """Relaxation times recovered by two-stage detection"""

    model_config = ConfigDict(frozen=True)

    t_r1: TimeValue = Field(..., description="Fast-stage relaxation time, identified with t_RS")
    t_r2: TimeValue = Field(..., description="Slow-stage relaxation time, identified with t_RU")
    gamma_se: float = Field(..., description="Fitted fast rate")
    gamma_e: float = Field(..., description="Fitted slow rate (0 for a flat tail)")
    single_stage: bool = Field(default=False, description="Only one stage was resolved")
    split_time: float = Field(..., description="Change point between stages")


def _as_ordered(value: TimeValue) -> float | None:
    if value == INFINITE:
        return math.inf
    if value == NOT_REACHED:
        return None
    return float(value)


class TimeScaleReport(BaseModel):
    """
    Time-Scale Report

    The three characteristic times t_DS (decoherence of the open system), t_RS (relaxation of the open system)
    and t_RU (relaxation of the whole closed system), each with the method that produced it.

    ``ordering_ok`` checks t_DS <= t_RS <= t_RU over the entries that are not "not reached", treating
    "infinite" as larger than every finite time.
    """

    model_config = ConfigDict(frozen=True)

    t_ds: TimeValue = Field(..., description="Decoherence time of the open system")
    t_rs: TimeValue = Field(..., description="Relaxation time of the open system")
    t_ru: TimeValue = Field(..., description="Relaxation time of the closed system")
    methods: dict[str, TimeMethod] = Field(default_factory=dict, description="Method per entry")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ordering_ok(self) -> bool:
        ordered = [v for v in map(_as_ordered, (self.t_ds, self.t_rs, self.t_ru)) if v is not None]
        return all(x <= y for x, y in zip(ordered, ordered[1:]))


class ConvergenceVerdict(BaseModel):
    """Whether an expectation series approaches a stable value over the sampled window"""

    model_config = ConfigDict(frozen=True)

    converged: bool
    limit: float = Field(..., description="Mean over the tail window")
    tail_spread: float = Field(..., description="Peak-to-peak over the tail window")
    initial_spread: float = Field(..., description="Peak-to-peak over the whole series")


class VerificationRecord(BaseModel):
    """Maximum oracle-vs-closed-form deviation of one operation at one environment size"""

    model_config = ConfigDict(frozen=True)

    operation: str
    n_env: int
    trials: int
    max_abs_deviation: float
    tolerance: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tolerance


# Run artifacts
class SeriesTable(BaseModel):
    """
    Series Table

    Rows of ``series.csv``: one per grid point. ``envelope`` holds NaN where the envelope is not defined for the
    scenario; the writer leaves those cells empty.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: TimeGrid
    value_re: np.ndarray
    value_im: np.ndarray
    envelope: np.ndarray

    @field_validator("value_re", "value_im", "envelope", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return readonly_array(np.asarray(value, dtype=float))

    @model_validator(mode="after")
    def _check_lengths(self) -> "SeriesTable":
        for name in ("value_re", "value_im", "envelope"):
            if getattr(self, name).shape != (self.grid.n_points,):
                raise ValueError(f"{name} does not have one value per grid point")
        return self

    @classmethod
    def from_values(cls, grid: TimeGrid, values: np.ndarray, envelope: np.ndarray | None = None) -> "SeriesTable":
        values = np.asarray(values)
        return cls(
            grid=grid,
            value_re=values.real,
            value_im=values.imag if np.iscomplexobj(values) else np.zeros(values.shape),
            envelope=np.full(values.shape, np.nan) if envelope is None else envelope,
        )


class RunSummary(BaseModel):
    """
    Run Summary

    Content of ``summary.json``. Every key is present for every scenario; entries that do not apply are null.
    """

    model_config = ConfigDict(frozen=True)

    scenario: str
    seed: int
    n_env: int | None = None
    t_ds: TimeValue | None = None
    t_rs: TimeValue | None = None
    t_ru: TimeValue | None = None
    methods: dict[str, TimeMethod] | None = None
    ordering_ok: bool | None = None
    decay: DecayEstimate | None = None
    two_stage: TwoStageResult | None = None
    asymptotic_value: float | None = None
    convergence: dict[str, ConvergenceVerdict] | None = None
    refinement: RefinementReport | None = None
    verification: dict[str, Any] | None = Field(default=None, description="Overall pass flag and worst case")

    @classmethod
    def from_report(cls, scenario: str, seed: int, report: TimeScaleReport, **extra: Any) -> "RunSummary":
        return cls(
            scenario=scenario,
            seed=seed,
            t_ds=report.t_ds,
            t_rs=report.t_rs,
            t_ru=report.t_ru,
            methods=dict(report.methods),
            ordering_ok=report.ordering_ok,
            **extra,
        )


# Run configuration
class SamplingSection(BaseModel):
    """Haar sampling of the environment; ``seed`` defaults to the run seed"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=0, description="Number of environment spins")
    g_max: PositiveFloat = Field(default=1.0, description="Couplings are uniform on (0, g_max]")
    seed: int | None = Field(default=None, ge=0, description="Sampling seed, defaults to the run seed")


class ObservableSection(BaseModel):
    """Relevant-observable selection for the spin-bath scenario"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ObservableKind = Field(default=ObservableKind.SYSTEM_ONLY, description="Viewpoint")
    system: HermitianBlock2 = Field(default_factory=HermitianBlock2.pauli_x, description="System block")
    env: list[HermitianBlock2] | None = Field(default=None, description="Environment blocks (full only)")
    index: int = Field(default=0, ge=0, description="Observed spin (single-env only)")
    env_block: HermitianBlock2 = Field(default_factory=HermitianBlock2.pauli_x, description="Block on spin index")


class SpinBathSection(BaseModel):
    """Spin-bath scenario parameters: explicit spins or a sampling spec"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: ComplexAmplitude = Field(default_factory=lambda: ComplexAmplitude(re=2**-0.5))
    b: ComplexAmplitude = Field(default_factory=lambda: ComplexAmplitude(re=2**-0.5))
    hbar: PositiveFloat = Field(default=1.0)
    spins: list[EnvSpin] | None = Field(default=None, description="Explicit environment")
    sampling: SamplingSection | None = Field(default=None, description="Sampled environment")
    observable: ObservableSection = Field(default_factory=ObservableSection)

    @model_validator(mode="after")
    def _one_environment(self) -> "SpinBathSection":
        if self.spins is not None and self.sampling is not None:
            raise ValueError("give either 'spins' or 'sampling', not both")
        return self


class SidSection(BaseModel):
    """SID scenario parameters"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: KernelFamily = Field(..., description="Kernel family")
    omega_min: NonNegativeFloat = Field(default=0.0)
    omega_max: PositiveFloat = Field(default=25.55)
    n_omega: int = Field(default=512, ge=2)
    hbar: PositiveFloat = Field(default=1.0)
    refinement: list[int] = Field(default_factory=list, description="n_omega values for the refinement check")
    refinement_time: NonNegativeFloat = Field(default=10.0)

    @field_validator("refinement")
    @classmethod
    def _increasing(cls, value: list[int]) -> list[int]:
        if any(n < 2 for n in value) or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"refinement must be increasing n_omega values >= 2, got {value}")
        return value


class TimescaleSection(BaseModel):
    """Time-scale estimation parameters"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    threshold_ratio: float = Field(default=math.exp(-1.0), gt=0.0, lt=1.0, description="Decoherence crossing ratio")
    macroscopicity: PositiveFloat = Field(default=1e-2, description="M in t_DS = M t_RS")


class VerifySection(BaseModel):
    """Oracle verification parameters"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sizes: list[NonNegativeInt] = Field(
        default_factory=lambda: [1, 2, 4, 8, 12], min_length=1, description="Environment sizes N"
    )
    trials: int = Field(default=100, ge=1)
    tolerance: PositiveFloat = Field(default=1e-10)


class OutputSection(BaseModel):
    """Artifact file names inside the output directory"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    series: str = Field(default="series.csv")
    summary: str = Field(default="summary.json")
    verification: str = Field(default="verification.csv")


Scenario = Literal["spin-bath", "sid", "two-times", "verify"]


class RunConfig(BaseModel):
    """
    Run Configuration

    Everything a batch run needs. Two runs with equal configurations produce identical artifacts.

    Example:
        ```python
        config = RunConfig(
            scenario="spin-bath",
            seed=1,
            grid=TimeGrid(t_end=50.0, n_points=1001),
            spin_bath=SpinBathSection(sampling=SamplingSection(n=4)),
        )
        ```
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: Scenario = Field(..., description="Scenario to run")
    seed: int = Field(default=0, ge=0, description="Run seed")
    grid: TimeGrid = Field(..., description="Time grid")
    spin_bath: SpinBathSection | None = None
    sid: SidSection | None = None
    two_times: TwoTimesScenario | None = None
    timescales: TimescaleSection = Field(default_factory=TimescaleSection)
    verify: VerifySection = Field(default_factory=VerifySection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _scenario_section(self) -> "RunConfig":
        section = {"spin-bath": self.spin_bath, "sid": self.sid, "two-times": self.two_times}
        if self.scenario in section and section[self.scenario] is None:
            raise ValueError(f"scenario '{self.scenario}' needs a [{self.scenario.replace('-', '_')}] section")
        return self
