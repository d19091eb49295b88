from math import sqrt

import numpy
import pytest

from ybcav import (
    CALIBRATION,
    MAP_CENTRE,
    THRESHOLD_CURVE,
    FrameSpec,
    build_generator,
    dressed_states,
    is_lasing,
    power_curve,
    pump_rate,
    saturated_photon_number,
    small_signal_gain,
    steady_state,
    threshold_pump_power,
)
from ybcav.modeling.bloch import E, G
from ybcav.modeling.threshold import (
    clamped_state,
    field_gain,
    field_response,
    gain_profile,
    oscillation_frequency,
)
from ybcav.utils.errors import NoThresholdError
from ybcav.utils.math import angular, technical


@pytest.fixture
def bare_line():
    # MOT off, pump and cavity on the bare green line
    return THRESHOLD_CURVE.but(omega_mot=0.0, delta_cavity=0.0, omega_pump=1.5)


def test_absorption_without_pump():
    result = small_signal_gain(THRESHOLD_CURVE.but(omega_pump=0.0, omega_mot=0.0))
    assert result.gain < 0
    assert result.margin < 0
    assert result.converged


def _two_level_gain(op):
    w = pump_rate(op)
    rho = steady_state(build_generator(op, FrameSpec(delta_green=0.0), w))
    inversion = rho[E, E].real - rho[G, G].real

    # the stimulated leg of a broadband pump dephases the line at w/2 more
    stimulated = w if op.pump_model == "broadband" else 0.0
    dephasing = (angular(op.atom.gamma_g) + w + stimulated) / 2
    g0 = angular(op.cavity.g0)
    return inversion, 2 * op.cavity.n_atoms * g0**2 * inversion / dephasing


def test_two_level_gain(bare_line):
    inversion, expected = _two_level_gain(bare_line)
    assert inversion < 0
    assert small_signal_gain(bare_line).gain == pytest.approx(expected, rel=0.02)

    one_way = bare_line.but(pump_model="one-way")
    inversion, expected = _two_level_gain(one_way)
    assert inversion > 0
    assert small_signal_gain(one_way).gain == pytest.approx(expected, rel=0.02)


def test_gain_is_linear_at_the_test_field():
    result = small_signal_gain(MAP_CENTRE)
    w = pump_rate(MAP_CENTRE)
    at_test = field_gain(MAP_CENTRE, w, result.test_amp)
    at_double = field_gain(MAP_CENTRE, w, 2 * result.test_amp)
    assert abs(at_test - at_double) < 0.01 * max(abs(at_test), abs(at_double))
    assert result.gain_mhz == pytest.approx(result.gain / (2 * numpy.pi), rel=1e-12)


def test_is_lasing():
    lasing, margin = is_lasing(MAP_CENTRE)
    assert lasing
    assert margin > 0

    # cavity on the bare line, and on the |−⟩ → e line itself
    assert not is_lasing(MAP_CENTRE.but(delta_cavity=0.0))[0]
    assert not is_lasing(MAP_CENTRE.but(delta_cavity=MAP_CENTRE.delta_pump))[0]
    assert not is_lasing(THRESHOLD_CURVE.but(delta_cavity=0.0))[0]

    # a one-way pump inverts the bare line and lases there
    assert is_lasing(MAP_CENTRE.but(delta_cavity=0.0, pump_model="one-way"))[0]

    # no pump
    assert not is_lasing(MAP_CENTRE.but(omega_pump=0.0))[0]


def test_raman_gain_peak():
    pair = dressed_states(MAP_CENTRE.delta_mot, MAP_CENTRE.omega_mot)
    profile = gain_profile(MAP_CENTRE, "delta_cavity", numpy.linspace(-40.0, -20.0, 81))

    assert profile.name == "gain"
    assert profile.index.name == "delta_cavity"
    peak = profile.idxmax()
    assert abs(peak - MAP_CENTRE.delta_mot) <= abs(pair.lambda_minus) + 1.0
    assert profile.max() > max(profile.iloc[0], profile.iloc[-1])

    with pytest.raises(ValueError):
        gain_profile(MAP_CENTRE, "kappa", [0.07])


def test_raman_peak_tracks_mot_detuning():
    peaks = []
    for delta_mot in (-25.0, -35.0):
        pair = dressed_states(delta_mot, MAP_CENTRE.omega_mot)
        op = MAP_CENTRE.but(delta_mot=delta_mot, delta_pump=0.85 * pair.stark_shift)
        cut = numpy.linspace(delta_mot - 10.0, delta_mot + 10.0, 81)
        profile = gain_profile(op, "delta_cavity", cut)

        assert 0 < profile.values.argmax() < len(cut) - 1
        peaks.append(profile.idxmax())

    slope = (peaks[1] - peaks[0]) / (-35.0 + 25.0)
    assert 0.7 <= slope <= 1.3


def test_no_threshold_in_bracket():
    with pytest.raises(NoThresholdError):
        threshold_pump_power(THRESHOLD_CURVE, CALIBRATION, bracket=(0.0, 0.001))

    with pytest.raises(ValueError):
        threshold_pump_power(THRESHOLD_CURVE, CALIBRATION, bracket=(2.0, 1.0))


@pytest.mark.slow
def test_threshold_pump_power():
    threshold = threshold_pump_power(THRESHOLD_CURVE, CALIBRATION)
    assert 0.7 <= threshold <= 6.0

    # twice the atoms, lower threshold
    crowded = threshold_pump_power(THRESHOLD_CURVE.but(n_atoms=150000.0), CALIBRATION)
    assert crowded < threshold


def test_saturated_photon_number():
    assert saturated_photon_number(MAP_CENTRE.but(omega_pump=0.0)) == 0.0
    assert numpy.isnan(clamped_state(MAP_CENTRE.but(omega_pump=0.0)).shift)

    state = clamped_state(MAP_CENTRE)
    assert 0 < state.photons < 1e12
    assert saturated_photon_number(MAP_CENTRE) == state.photons

    # the absorbing bare line above the cavity pulls the field to the red
    assert state.shift < 0

    # at the pulled frequency the gain is clamped to the losses
    w = pump_rate(MAP_CENTRE)
    kappa = angular(MAP_CENTRE.cavity.kappa)
    response = field_response(MAP_CENTRE, w, sqrt(state.photons), state.frequency)
    assert 2 * response.imag == pytest.approx(kappa, rel=0.02)
    assert MAP_CENTRE.delta_cavity + technical(response.real) == pytest.approx(
        state.frequency, abs=1e-5
    )


def test_oscillation_frequency_without_atoms():
    empty = MAP_CENTRE.but(n_atoms=0.0)
    assert oscillation_frequency(empty, 1.0, 1.0) == empty.delta_cavity


@pytest.mark.slow
def test_photons_at_twice_threshold():
    threshold = threshold_pump_power(THRESHOLD_CURVE, CALIBRATION)
    doubled = THRESHOLD_CURVE.but(omega_pump=CALIBRATION.omega_pump(2 * threshold))

    photons = saturated_photon_number(doubled)
    assert 0 < photons < 1e12
    assert numpy.isfinite(photons)

    # further above threshold, more photons
    tripled = THRESHOLD_CURVE.but(omega_pump=CALIBRATION.omega_pump(3 * threshold))
    assert saturated_photon_number(tripled) > photons


def test_power_curve():
    curve = power_curve(THRESHOLD_CURVE, CALIBRATION, [0.0, 0.001])

    assert list(curve.columns) == [
        "p_pump_mw",
        "omega_pump_mhz",
        "lasing",
        "margin_mhz",
        "photons",
        "output_w",
    ]
    assert not curve["lasing"].any()
    assert (curve["photons"] == 0.0).all()
    assert (curve["output_w"] == 0.0).all()
    assert curve["omega_pump_mhz"].iloc[0] == 0.0
