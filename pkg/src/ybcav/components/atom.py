"""Atom"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite


@dataclass(frozen=True)
class AtomSpec:
    """
    The two transitions out of the ground state that matter here:
    the broad blue line used by the MOT and the narrow green line that lases.

    :param gamma_b: Decay rate of ¹P₁ (blue line), technical MHz. Defaults to 29.1.
    :type gamma_b: float
    :param gamma_g: Decay rate of ³P₁ (green line), technical MHz. Defaults to 0.1824.
    :type gamma_g: float
    :param lambda_b: Blue wavelength, nm. Defaults to 399.
    :type lambda_b: float
    :param lambda_g: Green wavelength, nm. Defaults to 556.
    :type lambda_g: float

    :raises ValueError: If a rate or wavelength is not strictly positive,
        or if the blue line is not broader than the green one.
    """

    gamma_b: float = 29.1
    gamma_g: float = 0.1824
    lambda_b: float = 399.0
    lambda_g: float = 556.0

    def __post_init__(self):
        for name in ("gamma_b", "gamma_g", "lambda_b", "lambda_g"):
            value = getattr(self, name)
            if not (isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")

        if self.gamma_b <= self.gamma_g:
            raise ValueError(
                f"gamma_b ({self.gamma_b}) must exceed gamma_g ({self.gamma_g})",
            )
