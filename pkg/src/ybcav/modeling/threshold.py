"""Small-signal gain, lasing threshold and gain clamping"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import sqrt
from typing import Iterable

import numpy
import pandas
from scipy import optimize

from ..components.drive import OperatingPoint, PowerCalibration
from ..utils.decorators import timer
from ..utils.errors import (
    GainNotConvergedError,
    GainNotMonotoneError,
    NoThresholdError,
    PullingNotConvergedError,
)
from ..utils.math import angular, relative_change, technical
from .bloch import FrameSpec, build_generator, polarization, steady_state
from .params import derived_params
from .pump import pump_rate

logger = logging.getLogger("ybcav")

TEST_AMP = 1e-2
GAIN_RTOL = 0.01
GAIN_HALVINGS = 10

POWER_TOL_MW = 0.05
PHOTON_RTOL = 0.01
PHOTON_CAP = 1e12

PULL_TOL_MHZ = 1e-6
PULL_ITERATIONS = 50

# axes a gain profile can be taken along
PROFILE_AXES = ("delta_pump", "delta_cavity", "delta_mot", "omega_mot", "omega_pump")


@dataclass(frozen=True)
class GainResult:
    """
    Photon-number gain of the atoms against the cavity loss, rad/µs.

    :param gain: Gain G, positive when the atoms amplify.
    :type gain: float
    :param kappa: Cavity loss rate κ̃.
    :type kappa: float
    :param margin: G − κ̃.
    :type margin: float
    :param test_amp: Test field the gain was read at, √photons.
    :type test_amp: float
    :param converged: Whether halving the test field changed G by less than 1%.
    :type converged: bool
    """

    gain: float
    kappa: float
    margin: float
    test_amp: float
    converged: bool

    @property
    def gain_mhz(self) -> float:
        """G in technical MHz"""
        return technical(self.gain)


def field_response(
    op: OperatingPoint,
    w: float,
    amplitude: float,
    delta_green: float | None = None,
) -> complex:
    """
    g̃₀·N·⟨σ_ge⟩/a with the field frozen at a real amplitude, rad/µs

    Twice the imaginary part is the gain; the real part pulls the oscillation frequency.

    :param op: operating point
    :type op: OperatingPoint
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param amplitude: frozen field, √photons
    :type amplitude: float
    :param delta_green: frame frequency, MHz. Defaults to the empty-cavity frequency.
    :type delta_green: float | None

    :rtype: complex
    """
    if delta_green is None:
        delta_green = op.delta_cavity
    frame = FrameSpec(delta_green=delta_green, field_amp=amplitude)
    rho = steady_state(build_generator(op, frame, w))
    coupling = angular(op.cavity.g0) * op.cavity.n_atoms
    return coupling * polarization(rho) / amplitude


def field_gain(op: OperatingPoint, w: float, amplitude: float) -> float:
    """
    G = 2·g̃₀·N·Im(⟨σ_ge⟩·a*)/|a|² with the field frozen at a real amplitude

    The green frame sits on the empty-cavity frequency.

    :param op: operating point
    :type op: OperatingPoint
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param amplitude: frozen field, √photons
    :type amplitude: float

    :rtype: float
    """
    return 2 * field_response(op, w, amplitude).imag


def oscillation_frequency(op: OperatingPoint, w: float, amplitude: float) -> float:
    """
    Frequency at which a stationary field of this amplitude is self-consistent

    Iterates ω ← Δ_cavity + Re(g̃₀N⟨σ_ge⟩/a)/2π from the empty-cavity frequency.

    :param op: operating point
    :type op: OperatingPoint
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param amplitude: field, √photons
    :type amplitude: float

    :return: frame frequency relative to the bare green line, MHz
    :rtype: float

    :raises PullingNotConvergedError: if 50 iterations do not settle ω to 1e-6 MHz
    """
    frequency = op.delta_cavity
    for _ in range(PULL_ITERATIONS):
        pulled = op.delta_cavity + technical(field_response(op, w, amplitude, frequency).real)
        if abs(pulled - frequency) < PULL_TOL_MHZ:
            return pulled
        frequency, previous = pulled, frequency

    raise PullingNotConvergedError((previous, frequency))


@timer(logger, kind='gain', level=logging.DEBUG)
def small_signal_gain(op: OperatingPoint) -> GainResult:
    """
    Weak-field gain, refined by halving the test field from 1e-2 √photons

    :param op: operating point
    :type op: OperatingPoint

    :rtype: GainResult

    :raises GainNotConvergedError: if 10 halvings do not settle G to 1%
    """
    w = pump_rate(op)
    kappa = angular(op.cavity.kappa)

    amplitude = TEST_AMP
    gains = [field_gain(op, w, amplitude)]

    for _ in range(GAIN_HALVINGS):
        amplitude /= 2
        gains.append(field_gain(op, w, amplitude))
        if relative_change(gains[-1], gains[-2]) < GAIN_RTOL:
            gain = gains[-1]
            return GainResult(
                gain=gain,
                kappa=kappa,
                margin=gain - kappa,
                test_amp=amplitude,
                converged=True,
            )

    raise GainNotConvergedError(gains)


def is_lasing(op: OperatingPoint) -> tuple[bool, float]:
    """
    Lasing predicate

    :return: (G > κ̃, G − κ̃ in rad/µs)
    :rtype: tuple[bool, float]
    """
    result = small_signal_gain(op)
    return result.margin > 0, result.margin


@timer(logger, kind='threshold', level=logging.INFO)
def threshold_pump_power(
    op: OperatingPoint,
    calib: PowerCalibration,
    bracket: tuple[float, float] = (0.0, 20.0),
) -> float:
    """
    Pump power at which G = κ̃, by bisection to 0.05 mW

    :param op: operating point, its ``omega_pump`` is replaced
    :type op: OperatingPoint
    :param calib: pump power calibration
    :type calib: PowerCalibration
    :param bracket: pump powers (mW), below and above threshold
    :type bracket: tuple[float, float]

    :return: midpoint of the final bracket, mW
    :rtype: float

    :raises NoThresholdError: if the bracket does not straddle the threshold
    """
    low, high = bracket
    if not 0 <= low < high:
        raise ValueError(f"bracket must satisfy 0 <= low < high, got {bracket}")

    def lasing(power: float) -> bool:
        return is_lasing(op.but(omega_pump=calib.omega_pump(power)))[0]

    if lasing(low):
        raise NoThresholdError(f"already lasing at the bracket low end {low} mW")
    if not lasing(high):
        raise NoThresholdError(f"not lasing at the bracket high end {high} mW")

    while high - low >= POWER_TOL_MW:
        middle = (low + high) / 2
        if lasing(middle):
            high = middle
        else:
            low = middle

    return (low + high) / 2


@dataclass(frozen=True)
class ClampedState:
    """
    Stationary mean-field laser with the gain clamped to κ̃.

    :param photons: Intracavity photon number, 0 below threshold.
    :type photons: float
    :param frequency: Pulled oscillation frequency from the bare green line, MHz. NaN below
        threshold.
    :type frequency: float
    :param delta_cavity: Empty-cavity frequency it was pulled from, MHz.
    :type delta_cavity: float
    """

    photons: float
    frequency: float
    delta_cavity: float

    @property
    def shift(self) -> float:
        """Pulled minus empty-cavity frequency, MHz"""
        return self.frequency - self.delta_cavity


@timer(logger, kind='photons', level=logging.DEBUG)
def clamped_state(op: OperatingPoint) -> ClampedState:
    """
    Photon number n at which G(√n), read at the pulled frequency, is clamped to κ̃

    Each trial n first settles its own oscillation frequency, so the result is the
    stationary solution of the mean-field equations.

    :param op: operating point
    :type op: OperatingPoint

    :rtype: ClampedState

    :raises GainNotMonotoneError: if G(n) does not decrease across the bracket
    """
    below = ClampedState(photons=0.0, frequency=float("nan"), delta_cavity=op.delta_cavity)

    lasing, _ = is_lasing(op)
    if not lasing:
        return below

    w = pump_rate(op)
    kappa = angular(op.cavity.kappa)

    def gain_at(n: float) -> float:
        amplitude = sqrt(n)
        frequency = oscillation_frequency(op, w, amplitude)
        return 2 * field_response(op, w, amplitude, frequency).imag

    low = TEST_AMP**2
    if gain_at(low) <= kappa:
        logger.debug(f"⚠  {op}: the pulled field has no gain over κ, no stationary lasing")
        return below

    high = 1.0
    samples = [(high, gain_at(high))]
    while samples[-1][1] > kappa:
        if high >= PHOTON_CAP:
            raise GainNotMonotoneError(samples)
        high *= 10
        samples.append((high, gain_at(high)))

    # two samples per decade across the bracket
    decades = int(round(numpy.log10(high / low)))
    grid = numpy.logspace(numpy.log10(low), numpy.log10(high), 2 * decades + 1)
    profile = [(float(n), gain_at(float(n))) for n in grid]
    for (_, before), (_, after) in zip(profile, profile[1:]):
        if after > before + 1e-6 * abs(before) + 1e-12:
            raise GainNotMonotoneError(profile)

    photons = float(
        optimize.bisect(lambda n: gain_at(n) - kappa, low, high, xtol=1e-12, rtol=PHOTON_RTOL),
    )
    return ClampedState(
        photons=photons,
        frequency=oscillation_frequency(op, w, sqrt(photons)),
        delta_cavity=op.delta_cavity,
    )


def saturated_photon_number(op: OperatingPoint) -> float:
    """
    Intracavity photon number of the stationary laser, 0 below threshold

    :param op: operating point
    :type op: OperatingPoint

    :rtype: float

    :raises GainNotMonotoneError: if G(n) does not decrease across the bracket
    """
    return clamped_state(op).photons


def power_curve(
    op: OperatingPoint,
    calib: PowerCalibration,
    powers_mw: Iterable[float],
) -> pandas.DataFrame:
    """
    Output power against pump power from gain clamping

    :param op: operating point, its ``omega_pump`` is replaced
    :type op: OperatingPoint
    :param calib: pump power calibration
    :type calib: PowerCalibration
    :param powers_mw: pump powers, mW
    :type powers_mw: Iterable[float]

    :return: columns p_pump_mw, omega_pump_mhz, lasing, margin_mhz, photons, output_w
    :rtype: pandas.DataFrame
    """
    watts_per_photon = derived_params(op.cavity, op.atom).watts_per_photon
    rows = []
    for power in powers_mw:
        point = op.but(omega_pump=calib.omega_pump(power))
        lasing, margin = is_lasing(point)
        photons = saturated_photon_number(point) if lasing else 0.0
        rows.append(
            {
                "p_pump_mw": float(power),
                "omega_pump_mhz": point.omega_pump,
                "lasing": lasing,
                "margin_mhz": technical(margin),
                "photons": photons,
                "output_w": photons * watts_per_photon,
            },
        )
    return pandas.DataFrame(
        rows,
        columns=["p_pump_mw", "omega_pump_mhz", "lasing", "margin_mhz", "photons", "output_w"],
    )


def gain_profile(op: OperatingPoint, axis: str, values: Iterable[float]) -> pandas.Series:
    """
    Small-signal gain along a one-dimensional cut

    :param op: operating point
    :type op: OperatingPoint
    :param axis: OperatingPoint field varied along the cut
    :type axis: str
    :param values: values of that field, MHz
    :type values: Iterable[float]

    :return: G in rad/µs indexed by the cut values
    :rtype: pandas.Series
    """
    if axis not in PROFILE_AXES:
        raise ValueError(f"axis must be one of {PROFILE_AXES}, got {axis!r}")
    values = [float(v) for v in values]
    gains = [small_signal_gain(op.but(**{axis: v})).gain for v in values]
    return pandas.Series(gains, index=pandas.Index(values, name=axis), name="gain")
