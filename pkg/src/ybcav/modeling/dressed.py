"""Dressed ground state under the MOT light"""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot

import numpy


@dataclass(frozen=True)
class DressedPair:
    """
    Eigenstates of the MOT-dressed g–b system in the frame rotating with the MOT.

    |±⟩ = cg±|g⟩ + cb±|b⟩ with energies λ±, technical MHz.

    :param lambda_minus: Lower dressed energy.
    :type lambda_minus: float
    :param lambda_plus: Upper dressed energy.
    :type lambda_plus: float
    :param cg_minus: g amplitude of |−⟩.
    :type cg_minus: float
    :param cb_minus: b amplitude of |−⟩.
    :type cb_minus: float
    :param cg_plus: g amplitude of |+⟩.
    :type cg_plus: float
    :param cb_plus: b amplitude of |+⟩.
    :type cb_plus: float
    """

    lambda_minus: float
    lambda_plus: float
    cg_minus: float
    cb_minus: float
    cg_plus: float
    cb_plus: float

    @property
    def splitting(self) -> float:
        """λ+ − λ−"""
        return self.lambda_plus - self.lambda_minus

    @property
    def stark_shift(self) -> float:
        """Pump detuning of the lower dressed state resonance, −λ−"""
        return -self.lambda_minus


def dressed_states(delta_mot: float, omega_mot: float) -> DressedPair:
    """
    Diagonalizes H = [[0, Ω/2], [Ω/2, −Δ]] on (g, b)

    :param delta_mot: MOT detuning, technical MHz
    :type delta_mot: float
    :param omega_mot: MOT Rabi frequency, technical MHz
    :type omega_mot: float

    :return: dressed energies and amplitudes, ``minus`` being the lower one
    :rtype: DressedPair

    :raises ValueError: for a negative Rabi frequency
    """
    if not omega_mot >= 0:
        raise ValueError(f"omega_mot must be non-negative, got {omega_mot}")

    root = hypot(delta_mot, omega_mot)
    product = -(omega_mot**2) / 4

    # larger-magnitude root first, the other through the product (no cancellation)
    if delta_mot <= 0:
        lambda_plus = (-delta_mot + root) / 2
        lambda_minus = product / lambda_plus if lambda_plus else 0.0
    else:
        lambda_minus = (-delta_mot - root) / 2
        lambda_plus = product / lambda_minus

    hamiltonian = numpy.array(
        [[0.0, omega_mot / 2], [omega_mot / 2, -delta_mot]],
    )
    _, vectors = numpy.linalg.eigh(hamiltonian)

    amplitudes = []
    for column in vectors.T:
        # sign fixed by the dominant component
        sign = 1.0 if column[numpy.argmax(numpy.abs(column))] > 0 else -1.0
        amplitudes.append(sign * column)

    (cg_minus, cb_minus), (cg_plus, cb_plus) = amplitudes

    return DressedPair(
        lambda_minus=lambda_minus,
        lambda_plus=lambda_plus,
        cg_minus=float(cg_minus),
        cb_minus=float(cb_minus),
        cg_plus=float(cg_plus),
        cb_plus=float(cb_plus),
    )
