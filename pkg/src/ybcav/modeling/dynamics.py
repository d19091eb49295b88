"""Mean-field dynamics of the atoms and the cavity field"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import isfinite

import numpy

from ..components.drive import OperatingPoint
from ..utils.decorators import timer
from ..utils.errors import BelowThresholdError, IntegrationDivergedError, StiffnessError
from ..utils.math import TWO_PI, angular, hermitian_part
from .bloch import (
    DIM,
    E,
    G,
    DensityMatrix,
    commutator_superoperator,
    liouvillian_parts,
    sigma,
    unvec,
    vec,
)
from .params import derived_params
from .pump import pump_rate
from .spectrum import hann_spectrum, line_contrast, peak_frequency

logger = logging.getLogger("ybcav")

RENORMALIZE_EVERY = 1000
RESIDUAL_TOL = 1e-6
CONTROL_SPAN = 10.0
MAX_HALVINGS = 4
LINE_CONTRAST = 10.0
NYQUIST_MARGIN = 5.0

# ⟨σ_ge⟩ = ρ[e, g] sits at this entry of vec(ρ)
_POLARIZATION = E + DIM * G


@dataclass(frozen=True)
class SimConfig:
    """
    Integration and spectral-analysis settings.

    :param dt: RK4 step, µs. Defaults to 5e-4.
    :type dt: float
    :param t_transient: Discarded start of the run, µs. Defaults to 200.
    :type t_transient: float
    :param t_window: Analysed window, µs. Defaults to 256.
    :type t_window: float
    :param sample_stride: Steps between field samples. Defaults to 20.
    :type sample_stride: int
    :param seed_amp: Initial field magnitude, √photons. Defaults to 1e-3.
    :type seed_amp: float
    :param rng_seed: Seed of the initial field phase. Defaults to 0.
    :type rng_seed: int
    :param detect_photons: Mean photon number below which no line is reported. Defaults to 1e-6.
    :type detect_photons: float
    :param control_tol: Step-doubling tolerance over the first 10 µs. Defaults to 1e-6.
    :type control_tol: float
    :param coherent_pump: Drive the pump coherently instead of through w. Defaults to False.
    :type coherent_pump: bool
    """

    dt: float = 5e-4
    t_transient: float = 200.0
    t_window: float = 256.0
    sample_stride: int = 20
    seed_amp: float = 1e-3
    rng_seed: int = 0
    detect_photons: float = 1e-6
    control_tol: float = 1e-6
    coherent_pump: bool = False

    def __post_init__(self):
        if not (isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be strictly positive, got {self.dt}")
        if not self.t_transient >= 0:
            raise ValueError(f"t_transient must be non-negative, got {self.t_transient}")
        if not self.t_window >= 64:
            raise ValueError(f"t_window must be at least 64 µs, got {self.t_window}")
        if not (isinstance(self.sample_stride, int) and self.sample_stride >= 1):
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride}")
        if not self.seed_amp > 0:
            raise ValueError(f"seed_amp must be strictly positive, got {self.seed_amp}")
        if not self.detect_photons > 0:
            raise ValueError(f"detect_photons must be strictly positive, got {self.detect_photons}")
        if not self.control_tol > 0:
            raise ValueError(f"control_tol must be strictly positive, got {self.control_tol}")

    @property
    def sample_dt(self) -> float:
        """Spacing of the field samples, µs"""
        return self.dt * self.sample_stride

    @property
    def nyquist(self) -> float:
        """Nyquist frequency of the field samples, MHz"""
        return 1 / (2 * self.sample_dt)

    @property
    def resolution(self) -> float:
        """Spectral bin width, MHz"""
        return 1 / self.t_window

    def check_nyquist(self, op: OperatingPoint):
        """The field line, within a few MHz of Δ_cavity, must be resolved"""
        needed = abs(op.delta_cavity) + NYQUIST_MARGIN
        if not self.nyquist > needed:
            raise ValueError(
                f"sampling Nyquist {self.nyquist:.2f} MHz does not exceed {needed:.2f} MHz",
            )


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Field samples of one run in the bare-green frame.

    :param times: Uniform sample times, µs.
    :type times: numpy.ndarray
    :param field: Field amplitude at those times, √photons.
    :type field: numpy.ndarray
    :param state_checks: Rows of (t, trace error, Hermiticity error, negative eigenvalue)
        recorded before each renormalization.
    :type state_checks: numpy.ndarray
    :param dt: Step the run was accepted at, µs.
    :type dt: float
    :param rho: Final atomic state.
    :type rho: DensityMatrix
    """

    times: numpy.ndarray
    field: numpy.ndarray
    state_checks: numpy.ndarray
    dt: float
    rho: DensityMatrix

    @property
    def photons(self) -> numpy.ndarray:
        """|a|²"""
        return numpy.abs(self.field) ** 2


@dataclass(frozen=True)
class LasingReport:
    """
    Spectral summary of a run.

    :param mean_photons: Mean |a|² over the window.
    :type mean_photons: float
    :param f_peak: Line frequency in the bare-green frame, MHz.
    :type f_peak: float
    :param shift: f_peak − Δ_cavity, MHz. NaN when no line is found.
    :type shift: float
    :param lasing: Whether the mean photon number exceeds 1.
    :type lasing: bool
    :param output_watts: Power leaving one mirror, W.
    :type output_watts: float
    :param experimental: Set for runs with the coherent pump.
    :type experimental: bool
    """

    mean_photons: float
    f_peak: float
    shift: float
    lasing: bool
    output_watts: float
    experimental: bool = False


class _Equations:
    """Right-hand side on y = [vec(ρ), a] with the generator parts stacked"""

    def __init__(self, op: OperatingPoint, cfg: SimConfig):
        w = 0.0 if cfg.coherent_pump else pump_rate(op)
        base, raising, lowering = liouvillian_parts(op, 0.0, w)
        parts = [base, raising, lowering]

        self.coherent_pump = cfg.coherent_pump
        if cfg.coherent_pump:
            half_rabi = angular(op.omega_pump) / 2
            parts += [
                commutator_superoperator(half_rabi * sigma(E, G)),
                commutator_superoperator(half_rabi * sigma(G, E)),
            ]
            self.pump_detuning = angular(op.delta_pump)

        self.stacked = numpy.vstack(parts)
        self.n_parts = len(parts)
        self.field_rate = -1j * angular(op.delta_cavity) - angular(op.cavity.kappa) / 2
        self.coupling = -1j * angular(op.cavity.g0) * op.cavity.n_atoms

    def __call__(self, t: float, y: numpy.ndarray) -> numpy.ndarray:
        rho, a = y[:-1], y[-1]
        terms = (self.stacked @ rho).reshape(self.n_parts, DIM * DIM)
        d_rho = terms[0] + a * terms[1] + a.conjugate() * terms[2]
        if self.coherent_pump:
            phase = numpy.exp(-1j * self.pump_detuning * t)
            d_rho = d_rho + phase * terms[3] + phase.conjugate() * terms[4]
        d_a = self.field_rate * a + self.coupling * rho[_POLARIZATION]
        return numpy.append(d_rho, d_a)


def rk4_step(f, t: float, y: numpy.ndarray, h: float) -> numpy.ndarray:
    """Classic fourth-order Runge-Kutta step"""
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _initial_state(cfg: SimConfig) -> numpy.ndarray:
    phase = numpy.random.default_rng(cfg.rng_seed).uniform(0.0, TWO_PI)
    return numpy.append(vec(sigma(G, G)), cfg.seed_amp * numpy.exp(1j * phase))


def _control_error(f, y: numpy.ndarray, dt: float, span: float) -> float:
    """Largest full-step against two-half-step difference over the span, mixed tolerance"""
    worst = 0.0
    t = 0.0
    for _ in range(int(round(span / dt))):
        full = rk4_step(f, t, y, dt)
        half = rk4_step(f, t, y, dt / 2)
        half = rk4_step(f, t + dt / 2, half, dt / 2)
        if not numpy.all(numpy.isfinite(full)):
            return numpy.inf
        worst = max(worst, float(numpy.max(numpy.abs(full - half) / (1 + numpy.abs(half)))))
        y = full
        t += dt
    return worst


def _renormalize(y: numpy.ndarray, t: float) -> tuple[numpy.ndarray, tuple]:
    rho = unvec(y[:-1]).copy()
    if not numpy.all(numpy.isfinite(y)):
        raise IntegrationDivergedError((t, numpy.inf, numpy.inf, numpy.inf))

    residuals = (t, *DensityMatrix(rho.copy()).residuals())
    if max(residuals[1:]) > RESIDUAL_TOL:
        raise IntegrationDivergedError(residuals)

    rho = hermitian_part(rho)
    rho /= numpy.trace(rho).real
    return numpy.append(vec(rho), y[-1]), residuals


@timer(logger, kind='integrate', level=logging.DEBUG)
def integrate(op: OperatingPoint, cfg: SimConfig) -> Trajectory:
    """
    Fixed-step RK4 run from |g⟩⟨g| and a seeded field in the bare-green frame

    Over the first 10 µs, one step is checked against two half steps; on failure dt is
    halved (at most 4 times) with the sample stride doubled, so the sample grid is unchanged.

    :param op: operating point
    :type op: OperatingPoint
    :param cfg: integration settings
    :type cfg: SimConfig

    :rtype: Trajectory

    :raises StiffnessError: if the step check still fails after 4 halvings
    :raises IntegrationDivergedError: if ρ leaves the physical set by more than 1e-6
    """
    cfg.check_nyquist(op)
    if cfg.coherent_pump:
        logger.warning("⚠  Coherent pump mode is experimental, reports are marked as such")

    f = _Equations(op, cfg)
    y = _initial_state(cfg)
    t_total = cfg.t_transient + cfg.t_window

    dt, stride = cfg.dt, cfg.sample_stride
    for halving in range(MAX_HALVINGS + 1):
        error = _control_error(f, y, dt, min(CONTROL_SPAN, t_total))
        if error <= cfg.control_tol:
            break
        if halving == MAX_HALVINGS:
            raise StiffnessError(dt, error)
        logger.warning(f"⚠  Step check failed ({error:.2e}), halving dt to {dt / 2:.2e} µs")
        dt, stride = dt / 2, stride * 2

    n_samples = int(round(t_total / (dt * stride))) + 1
    field = numpy.empty(n_samples, dtype=complex)
    field[0] = y[-1]
    checks = []

    t = 0.0
    step = 0
    for sample in range(1, n_samples):
        for _ in range(stride):
            y = rk4_step(f, t, y, dt)
            step += 1
            t = step * dt
            if step % RENORMALIZE_EVERY == 0:
                y, residuals = _renormalize(y, t)
                checks.append(residuals)
        field[sample] = y[-1]

    y, residuals = _renormalize(y, t)
    checks.append(residuals)

    return Trajectory(
        times=numpy.arange(n_samples) * dt * stride,
        field=field,
        state_checks=numpy.array(checks, dtype=float).reshape(-1, 4),
        dt=dt,
        rho=DensityMatrix(hermitian_part(unvec(y[:-1]))),
    )


def analyze(traj: Trajectory, op: OperatingPoint, cfg: SimConfig) -> LasingReport:
    """
    Photon number and line frequency over the analysis window

    :param traj: field samples covering the transient and the window
    :type traj: Trajectory
    :param op: operating point the run was made at
    :type op: OperatingPoint
    :param cfg: integration settings
    :type cfg: SimConfig

    :rtype: LasingReport

    :raises BelowThresholdError: if no line stands 10× above the median floor, or the field
        holds fewer than ``detect_photons`` photons on average
    """
    sample_dt = traj.times[1] - traj.times[0]
    start = int(numpy.searchsorted(traj.times, cfg.t_transient - sample_dt / 2))
    n = int(round(cfg.t_window / sample_dt))
    window = traj.field[start : start + n]
    if len(window) < n:
        raise ValueError(
            f"trajectory ends at {traj.times[-1]:.1f} µs, short of the analysis window",
        )

    mean_photons = float(numpy.mean(numpy.abs(window) ** 2))
    output_watts = mean_photons * derived_params(op.cavity, op.atom).watts_per_photon
    freqs, power = hann_spectrum(window, sample_dt)

    if line_contrast(power) <= LINE_CONTRAST or mean_photons <= cfg.detect_photons:
        raise BelowThresholdError(
            LasingReport(
                mean_photons=mean_photons,
                f_peak=numpy.nan,
                shift=numpy.nan,
                lasing=False,
                output_watts=output_watts,
                experimental=cfg.coherent_pump,
            ),
        )

    f_peak = peak_frequency(freqs, power)
    return LasingReport(
        mean_photons=mean_photons,
        f_peak=f_peak,
        shift=f_peak - op.delta_cavity,
        lasing=mean_photons > 1,
        output_watts=output_watts,
        experimental=cfg.coherent_pump,
    )


def simulate(op: OperatingPoint, cfg: SimConfig | None = None) -> LasingReport:
    """Integrates and analyses one operating point"""
    cfg = cfg or SimConfig()
    return analyze(integrate(op, cfg), op, cfg)
