"""
SID Service Module

Closed-system engine: the van Hove expectation value on a quasi-continuous energy grid

    <O>(t) = sum_w W(w) diag(w) + sum_{w, w'} W(w) W(w') offdiag(w, w') e^{i (w - w') t / hbar}

with trapezoid weights W. The first (diagonal) term is the asymptotic value the expectation converges to; the
second term vanishes for large t by destructive interference, until the grid's discreteness makes it revive at
t_rev = 2 pi hbar / spacing.

This module mainly includes:
- Kernel construction for the built-in families and for table files
- Expectation values, off-diagonal envelopes and the asymptotic value
- Exponential decay fitting with a non-exponential flag
- Grid refinement checks with observed convergence orders
"""

import logging
import math
from pathlib import Path

import numpy as np
from pydantic import ValidationError
from scipy.integrate import trapezoid
from scipy.stats import cauchy, linregress, norm

from decoherence_toolkit.errors import FitDomainError, ModelError
from decoherence_toolkit.schemas import (
    DecayEstimate,
    GaussianFamily,
    KernelFamily,
    LorentzianFamily,
    RealSeries,
    RefinementReport,
    SidKernel,
    TableFamily,
    TimeGrid,
)

logger = logging.getLogger(__name__)

MASS_CONTAINMENT = 1.0 - 1e-6
EXPONENTIAL_FIT_THRESHOLD = 0.05
ENVELOPE_FLOOR = 1e-10
TRANSIENT_E_FOLDINGS = 3.0
_CHUNK_ROWS = 2048


def _profile_kernel(
    family: LorentzianFamily | GaussianFamily, omegas: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    mass = norm.cdf(omegas[-1], family.center, family.spread) - norm.cdf(omegas[0], family.center, family.spread)
    if mass < MASS_CONTAINMENT:
        raise ModelError(
            f"Energy profile (center={family.center}, spread={family.spread}) keeps only {mass:.9f} of its mass "
            f"inside [{omegas[0]}, {omegas[-1]}]; at least {MASS_CONTAINMENT} is required"
        )

    mean = 0.5 * (omegas[:, None] + omegas[None, :])
    nu = omegas[:, None] - omegas[None, :]
    if isinstance(family, LorentzianFamily):
        shape = cauchy.pdf(nu, scale=family.width)
    else:
        shape = norm.pdf(nu, scale=family.width)
    offdiag = family.amplitude * norm.pdf(mean, family.center, family.spread) * shape
    diag = family.diag_amplitude * norm.pdf(omegas, family.center, family.spread)
    return diag, offdiag


def _phases(kernel: SidKernel, times: np.ndarray) -> np.ndarray:
    return kernel.weights() * np.exp(1j * np.outer(times, kernel.omegas()) / kernel.hbar)


class SidService:
    """
    SID service

    Kernels are immutable; every method is a pure function of its arguments. Time-vectorised evaluation goes
    through one matrix product per chunk of time points.

    Example:
        ```python
        kernel = SidService.build_kernel(LorentzianFamily(center=12.775, width=0.2))
        envelope = SidService.offdiag_envelope(kernel, TimeGrid(t_end=60.0, n_points=1201))
        estimate = SidService.fit_decay(envelope, kernel.hbar, SidService.revival_time(kernel))
        estimate.t_relax  # close to 5.0
        ```
    """

    @staticmethod
    def build_kernel(
        family: KernelFamily,
        omega_min: float = 0.0,
        omega_max: float = 25.55,
        n_omega: int = 512,
        hbar: float = 1.0,
    ) -> SidKernel:
        """Sample a kernel family on a uniform energy grid

        Built-in families use offdiag(w, w') = C h((w + w')/2) K(w - w') and diag(w) = D h(w), where h is a
        unit-mass Gaussian energy profile and K the Lorentzian or Gaussian shape in w - w'. Table families read
        their own grid from file and ignore the grid arguments.

        Args:
            family: Kernel family
            omega_min: First grid energy
            omega_max: Last grid energy
            n_omega: Number of grid points
            hbar: Reduced Planck constant

        Returns:
            SidKernel: Sampled kernel

        Raises:
            ModelError: If the energy profile leaks more than 1e-6 of its mass outside the grid, or the
                table files are unusable
        """
        if isinstance(family, TableFamily):
            return SidService.load_table_kernel(family.diag_path, family.offdiag_path, hbar)
        if n_omega < 2 or not omega_max > omega_min:
            raise ModelError(f"Invalid energy grid [{omega_min}, {omega_max}] with {n_omega} points")

        omegas = np.linspace(omega_min, omega_max, n_omega)
        diag, offdiag = _profile_kernel(family, omegas)
        logger.debug("Built %s kernel on %d points (spacing %g)", family.kind, n_omega, omegas[1] - omegas[0])
        return SidService.kernel_from_arrays(omegas, diag, offdiag, hbar)

    @staticmethod
    def kernel_from_arrays(omegas: np.ndarray, diag: np.ndarray, offdiag: np.ndarray, hbar: float = 1.0) -> SidKernel:
        """Wrap sampled tables in a validated kernel

        Raises:
            ModelError: If the grid is not uniform, or the tables are malformed, non-finite or non-Hermitian
        """
        omegas = np.asarray(omegas, dtype=float)
        if omegas.ndim != 1 or omegas.shape[0] < 2:
            raise ModelError("Energy grid needs at least two points")
        steps = np.diff(omegas)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ModelError("Energy grid must be uniformly spaced")
        try:
            return SidKernel(
                omega_min=float(omegas[0]),
                omega_max=float(omegas[-1]),
                diag=diag,
                offdiag=offdiag,
                hbar=hbar,
            )
        except ValidationError as e:
            raise ModelError(f"Invalid SID kernel: {e.errors()[0]['msg']}") from e

    @staticmethod
    def load_table_kernel(diag_path: Path, offdiag_path: Path, hbar: float = 1.0) -> SidKernel:
        """Load a kernel from text tables

        The diagonal file has two columns (omega, value) on a uniform grid. The off-diagonal file has three
        columns (flat index i * n_omega + j, real part, imaginary part); missing entries are zero. Lines starting
        with ``#`` are comments.

        Raises:
            ModelError: If a file cannot be read or parsed, or an index is out of range
        """
        try:
            diag_table = np.loadtxt(diag_path, ndmin=2)
            offdiag_table = np.loadtxt(offdiag_path, ndmin=2)
        except (OSError, ValueError) as e:
            raise ModelError(f"Cannot read kernel tables: {e}") from e
        if diag_table.shape[1] != 2 or (offdiag_table.size and offdiag_table.shape[1] != 3):
            raise ModelError("Kernel tables need 2 (diagonal) and 3 (off-diagonal) columns")

        n = diag_table.shape[0]
        offdiag = np.zeros(n * n, dtype=complex)
        if offdiag_table.size:
            index = offdiag_table[:, 0].astype(np.int64)
            if np.any(index < 0) or np.any(index >= n * n) or np.any(index != offdiag_table[:, 0]):
                raise ModelError(f"Off-diagonal indices must be integers in [0, {n * n})")
            offdiag[index] = offdiag_table[:, 1] + 1j * offdiag_table[:, 2]
        logger.debug("Loaded table kernel with %d points from %s", n, diag_path)
        return SidService.kernel_from_arrays(diag_table[:, 0], diag_table[:, 1], offdiag.reshape(n, n), hbar)

    @staticmethod
    def asymptotic_value(kernel: SidKernel) -> float:
        """Diagonal term alone: the stable value the expectation converges to"""
        return float(trapezoid(kernel.diag, dx=kernel.spacing))

    @staticmethod
    def offdiag_term(kernel: SidKernel, times: np.ndarray) -> np.ndarray:
        """Complex off-diagonal double sum at each time; its imaginary part is round-off for Hermitian kernels"""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.empty(times.shape[0], dtype=complex)
        for start in range(0, times.shape[0], _CHUNK_ROWS):
            rows = slice(start, start + _CHUNK_ROWS)
            u = _phases(kernel, times[rows])
            out[rows] = np.sum((u @ kernel.offdiag) * u.conj(), axis=1)
        return out

    @staticmethod
    def expectation_at(kernel: SidKernel, t: float) -> float:
        """Expectation value at time t

        Args:
            kernel: Sampled kernel
            t: Time

        Returns:
            float: Diagonal term plus the real off-diagonal double sum
        """
        return SidService.asymptotic_value(kernel) + float(SidService.offdiag_term(kernel, np.array([t]))[0].real)

    @staticmethod
    def expectation_series(kernel: SidKernel, grid: TimeGrid) -> RealSeries:
        values = SidService.asymptotic_value(kernel) + SidService.offdiag_term(kernel, grid.times()).real
        return RealSeries(grid=grid, values=values)

    @staticmethod
    def offdiag_envelope(kernel: SidKernel, grid: TimeGrid) -> RealSeries:
        """|<O>(t) - asymptotic value| per grid time, taken from the off-diagonal term itself"""
        return RealSeries(grid=grid, values=np.abs(SidService.offdiag_term(kernel, grid.times()).real))

    @staticmethod
    def revival_time(kernel: SidKernel) -> float:
        """t_rev = 2 pi hbar / spacing, where the discrete sum returns to its t = 0 value"""
        return 2.0 * math.pi * kernel.hbar / kernel.spacing

    @staticmethod
    def fit_decay(envelope: RealSeries, hbar: float = 1.0, revival_time: float | None = None) -> DecayEstimate:
        """Fit an exponential decay to an envelope

        The rate is first guessed from the first e-folding crossing, t_e. The fit window starts after
        ``TRANSIENT_E_FOLDINGS`` e-foldings (t_a = 3 t_e) and ends at the earliest of the grid end, the first
        point below ``ENVELOPE_FLOOR`` of the initial value, and t_rev/2 - t_a. The window mirrors the transient
        about t_rev/2 because a discrete grid makes the envelope symmetric about that point.

        Args:
            envelope: Non-negative envelope series
            hbar: Reduced Planck constant
            revival_time: Revival time of the grid that produced the envelope, if any

        Returns:
            DecayEstimate: gamma = -slope * hbar, the RMS log-residual and the non-exponential flag

        Raises:
            FitDomainError: If the envelope is non-positive in the window, the window holds fewer than three
                points, or the envelope does not decay
        """
        times = envelope.times
        values = envelope.values
        t0, y0 = times[0], values[0]
        if not y0 > 0:
            raise FitDomainError(f"Envelope must start positive, got {y0}")

        crossed = np.nonzero(values <= y0 * math.exp(-1.0))[0]
        if crossed.size:
            t_a = t0 + TRANSIENT_E_FOLDINGS * (times[crossed[0]] - t0)
        else:
            logger.warning("Envelope never falls by a factor e; fitting from the first sample")
            t_a = t0

        end = times.shape[0]
        if revival_time is not None:
            t_b = t0 + 0.5 * revival_time - (t_a - t0)
            end = min(end, int(np.searchsorted(times, t_b, side="right")))
        floor = np.nonzero(values < ENVELOPE_FLOOR * y0)[0]
        if floor.size:
            end = min(end, int(floor[0]))
        start = int(np.searchsorted(times, t_a, side="left"))

        if end - start < 3:
            raise FitDomainError(f"Fit window [{t_a:g}, {times[end - 1]:g}] holds fewer than three samples")
        t_window, y_window = times[start:end], values[start:end]
        if np.any(y_window <= 0):
            raise FitDomainError("Envelope has non-positive values inside the fit window")

        log_y = np.log(y_window)
        fit = linregress(t_window, log_y)
        gamma = -fit.slope * hbar
        if not gamma > 0:
            raise FitDomainError(f"Envelope does not decay in the fit window (slope {fit.slope:g})")

        residual = float(np.sqrt(np.mean((log_y - (fit.intercept + fit.slope * t_window)) ** 2)))
        flagged = residual > EXPONENTIAL_FIT_THRESHOLD
        if flagged:
            logger.warning("Decay is not exponential: RMS log-residual %.3g > %.3g", residual, EXPONENTIAL_FIT_THRESHOLD)
        logger.debug("Fitted gamma=%.6g on [%g, %g]", gamma, t_window[0], t_window[-1])
        return DecayEstimate(
            gamma=float(gamma),
            hbar=hbar,
            residual=residual,
            flagged=flagged,
            window=(float(t_window[0]), float(t_window[-1])),
        )

    @staticmethod
    def grid_refinement_check(
        family: KernelFamily,
        resolutions: list[int],
        omega_min: float = 0.0,
        omega_max: float = 25.55,
        hbar: float = 1.0,
        time: float = 10.0,
    ) -> RefinementReport:
        """Evaluate expectation_at(time) across energy-grid resolutions

        The observed order between resolutions k and k+1 is log(d_k / d_{k+1}) / log(h_k / h_{k+1}) for the
        successive differences d and spacings h; it is None once a difference reaches round-off. Smooth
        kernels converge at least quadratically (the trapezoid rule), often spectrally.

        Args:
            family: Built-in kernel family
            resolutions: Increasing n_omega values, at least two
            omega_min: First grid energy
            omega_max: Last grid energy
            hbar: Reduced Planck constant
            time: Evaluation time

        Returns:
            RefinementReport: Values, differences, observed orders and revival times per resolution

        Raises:
            ModelError: If fewer than two increasing resolutions are given or the family is table-driven
        """
        if isinstance(family, TableFamily):
            raise ModelError("Grid refinement needs a built-in kernel family")
        if len(resolutions) < 2 or any(b <= a for a, b in zip(resolutions, resolutions[1:])):
            raise ModelError(f"Need at least two increasing resolutions, got {resolutions}")

        values, spacings, revivals = [], [], []
        for n_omega in resolutions:
            kernel = SidService.build_kernel(family, omega_min, omega_max, n_omega, hbar)
            values.append(SidService.expectation_at(kernel, time))
            spacings.append(kernel.spacing)
            revivals.append(SidService.revival_time(kernel))

        differences = [abs(b - a) for a, b in zip(values, values[1:])]
        noise = 1e-13 * max(1.0, max(abs(v) for v in values))
        orders: list[float | None] = []
        for k in range(len(differences) - 1):
            d_k, d_next = differences[k], differences[k + 1]
            if d_k <= noise or d_next <= noise:
                orders.append(None)
            else:
                orders.append(math.log(d_k / d_next) / math.log(spacings[k] / spacings[k + 1]))

        logger.info("Grid refinement at t=%g: orders %s", time, orders)
        return RefinementReport(
            time=time,
            resolutions=list(resolutions),
            spacings=spacings,
            values=values,
            differences=differences,
            orders=orders,
            revival_times=revivals,
        )
