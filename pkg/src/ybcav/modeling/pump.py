"""Effective incoherent pump rate of the green pump beam"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable

import numpy
import pandas

from ..components.cavity import CavitySpec
from ..components.drive import OperatingPoint
from ..utils.errors import PumpRateNotConvergedError
from ..utils.math import angular, relative_change
from .bloch import E, FrameSpec, build_generator, steady_state
from .dressed import dressed_states

if TYPE_CHECKING:
    from ..components.atom import AtomSpec

logger = logging.getLogger("ybcav")

# weak-probe refinement: starting Rabi frequency (MHz), tolerance, halvings
PROBE_START = 0.02
PROBE_RTOL = 0.01
PROBE_HALVINGS = 12


@lru_cache(maxsize=65536)
def pump_susceptibility(
    delta_pump: float,
    delta_mot: float,
    omega_mot: float,
    atom: AtomSpec,
) -> float:
    """
    Linear response χ = Γ̃_g·ρ_ee/Ω_test² of the MOT-dressed atom to a weak green probe

    The probe sits at the pump frequency with the cavity off. Ω_test starts at 0.02 MHz
    and is halved until χ changes by less than 1%.

    :param delta_pump: probe detuning from the bare green line, MHz
    :type delta_pump: float
    :param delta_mot: MOT detuning, MHz
    :type delta_mot: float
    :param omega_mot: MOT Rabi frequency, MHz
    :type omega_mot: float
    :param atom: atomic constants
    :type atom: AtomSpec

    :return: rad/µs per MHz² of pump Rabi frequency
    :rtype: float

    :raises PumpRateNotConvergedError: if 12 halvings do not reach linear response
    """
    op = OperatingPoint(
        delta_mot=delta_mot,
        delta_pump=delta_pump,
        delta_cavity=0.0,
        omega_mot=omega_mot,
        omega_pump=0.0,
        atom=atom,
        cavity=CavitySpec(),
    )
    frame = FrameSpec(delta_green=delta_pump, field_amp=0.0)

    def response(probe: float) -> float:
        rho = steady_state(build_generator(op, frame, w=0.0, probe_rabi=probe))
        return angular(atom.gamma_g) * float(rho.populations[E]) / probe**2

    probe = PROBE_START
    previous = response(probe)

    for _ in range(PROBE_HALVINGS):
        probe /= 2
        current = response(probe)
        if relative_change(current, previous) < PROBE_RTOL:
            return current
        previous = current

    raise PumpRateNotConvergedError((previous, current))


def pump_rate(op: OperatingPoint) -> float:
    """
    Incoherent pump rate w(Δ_pump) = χ(Δ_pump)·Ω_pump², rad/µs

    :param op: operating point
    :type op: OperatingPoint

    :rtype: float
    """
    if op.omega_pump == 0.0:
        return 0.0
    chi = pump_susceptibility(op.delta_pump, op.delta_mot, op.omega_mot, op.atom)
    return chi * op.omega_pump**2


def pump_rate_lorentzian(op: OperatingPoint) -> float:
    """
    Secular pump rate out of both dressed ground states, rad/µs

    Each dressed state |±⟩ is pumped on a Lorentzian centred at Δ_pump = −λ±, with half-width
    (Γ̃_g + cb±²Γ̃_b)/2, weighted by its secular population.
    Interference between the two dressed paths is dropped, so the peak sits on −λ− while the
    exact response peaks a few tenths of a MHz lower.

    :param op: operating point
    :type op: OperatingPoint

    :rtype: float
    """
    pair = dressed_states(op.delta_mot, op.omega_mot)
    omega = angular(op.omega_pump)
    gamma_g, gamma_b = angular(op.atom.gamma_g), angular(op.atom.gamma_b)

    # secular balance, P+/P− = (cb−/cg−)⁴
    weights = pair.cg_minus**4, pair.cb_minus**4
    populations = (weights[0] / sum(weights), weights[1] / sum(weights))

    rate = 0.0
    for population, lam, cg, cb in (
        (populations[0], pair.lambda_minus, pair.cg_minus, pair.cb_minus),
        (populations[1], pair.lambda_plus, pair.cg_plus, pair.cb_plus),
    ):
        width = (gamma_g + cb**2 * gamma_b) / 2
        detuning = angular(op.delta_pump + lam)
        rate += population * omega**2 * cg**2 / 2 * width / (detuning**2 + width**2)

    return rate


def pump_rate_closed_form(op: OperatingPoint) -> float:
    """
    Exact linear response of the MOT-dressed atom to the pump, rad/µs

    Solves the first-order equations for (ρ_eg, ρ_eb) sourced by the MOT-only steady
    state; ρ_ee then follows from dρ_ee/dt = −Ω̃_pump·Im ρ_eg − Γ̃_g·ρ_ee = 0. Unlike the
    secular double Lorentzian it keeps the interference between the two dressed paths,
    which pulls the peak below −λ−.

    :param op: operating point
    :type op: OperatingPoint

    :rtype: float
    """
    gamma_g, gamma_b = angular(op.atom.gamma_g), angular(op.atom.gamma_b)
    delta_mot, omega_mot = angular(op.delta_mot), angular(op.omega_mot)
    delta = angular(op.delta_pump)

    # MOT-only g↔b steady state
    saturation = omega_mot**2 / (4 * delta_mot**2 + gamma_b**2)
    rho_bb = saturation / (1 + 2 * saturation)
    rho_bg = 0.5j * omega_mot * (1 - 2 * rho_bb) / (1j * delta_mot - gamma_b / 2)

    coupling = numpy.array(
        [
            [1j * delta - gamma_g / 2, 0.5j * omega_mot],
            [0.5j * omega_mot, 1j * (delta - delta_mot) - (gamma_g + gamma_b) / 2],
        ],
    )
    source = 0.5j * numpy.array([1 - rho_bb, numpy.conj(rho_bg)])
    rho_eg, _ = numpy.linalg.solve(coupling, source)
    return -angular(op.omega_pump) ** 2 * float(rho_eg.imag)


def pump_rate_scan(op: OperatingPoint, deltas: Iterable[float]) -> pandas.DataFrame:
    """
    w over a list of pump detunings, next to both closed forms

    :param op: operating point, its ``delta_pump`` is replaced
    :type op: OperatingPoint
    :param deltas: pump detunings, MHz
    :type deltas: Iterable[float]

    :return: columns delta_pump_mhz, w_rad_per_us, w_closed_form_rad_per_us,
        w_lorentzian_rad_per_us
    :rtype: pandas.DataFrame
    """
    deltas = numpy.asarray(list(deltas), dtype=float)
    rows = [op.but(delta_pump=float(d)) for d in deltas]
    return pandas.DataFrame(
        {
            "delta_pump_mhz": deltas,
            "w_rad_per_us": [pump_rate(p) for p in rows],
            "w_closed_form_rad_per_us": [pump_rate_closed_form(p) for p in rows],
            "w_lorentzian_rad_per_us": [pump_rate_lorentzian(p) for p in rows],
        },
    )
