"""Derived cavity and coupling parameters"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from scipy.constants import c, h

from ..components.atom import AtomSpec
from ..components.cavity import CavitySpec


@dataclass(frozen=True)
class DerivedParams:
    """
    Quantities that follow from the atom and cavity constants.

    :param omega_cavity_collective: Collective Rabi frequency g₀√N, technical MHz.
    :type omega_cavity_collective: float
    :param c1: Single-atom cooperativity g₀²/(κΓ_g).
    :type c1: float
    :param round_trip_s: Cavity round-trip time 2L/c, s.
    :type round_trip_s: float
    :param watts_per_photon: Power leaving one mirror per intracavity photon, W.
    :type watts_per_photon: float
    :param fsr_hz: Free spectral range c/2L, Hz.
    :type fsr_hz: float
    :param finesse: FSR/κ.
    :type finesse: float
    :param cooperativity: Collective cooperativity N·C₁.
    :type cooperativity: float
    """

    omega_cavity_collective: float
    c1: float
    round_trip_s: float
    watts_per_photon: float
    fsr_hz: float
    finesse: float
    cooperativity: float

    def as_dict(self) -> dict[str, float]:
        """Field name to value"""
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def derived_params(cavity: CavitySpec, atom: AtomSpec) -> DerivedParams:
    """
    Collective coupling, cooperativity and output-power conversion

    :param cavity: cavity constants and atom number
    :type cavity: CavitySpec
    :param atom: atomic constants
    :type atom: AtomSpec

    :rtype: DerivedParams
    """
    c1 = cavity.g0**2 / (cavity.kappa * atom.gamma_g)
    round_trip_s = 2 * cavity.length_m / c
    photon_energy_j = h * c / (atom.lambda_g * 1e-9)
    fsr_hz = 1 / round_trip_s

    return DerivedParams(
        omega_cavity_collective=cavity.g0 * sqrt(cavity.n_atoms),
        c1=c1,
        round_trip_s=round_trip_s,
        watts_per_photon=photon_energy_j * cavity.t_mirror / round_trip_s,
        fsr_hz=fsr_hz,
        finesse=fsr_hz / (cavity.kappa * 1e6),
        cooperativity=cavity.n_atoms * c1,
    )
