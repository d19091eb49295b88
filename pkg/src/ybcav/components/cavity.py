"""Cavity"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite


@dataclass(frozen=True)
class CavitySpec:
    """
    Single TEM₀₀ mode resonant near the green line, with the atoms coupled to it.

    :param kappa: Energy (photon-number) decay rate, technical MHz. Defaults to 0.070.
    :type kappa: float
    :param g0: Vacuum Rabi frequency, technical MHz. Defaults to 0.066.
    :type g0: float
    :param length_m: Mirror spacing, m. Defaults to 0.0478.
    :type length_m: float
    :param t_mirror: Power transmission per mirror. Defaults to 1.5e-6.
    :type t_mirror: float
    :param n_atoms: Effective number of atoms coupled to the mode. Defaults to 75000.
    :type n_atoms: float

    :raises ValueError: If any field is outside its physical range.

    .. note::
        - ``n_atoms`` is an effective number; waist averaging is folded into it.
        - the field amplitude decays at κ̃/2.
    """

    kappa: float = 0.070
    g0: float = 0.066
    length_m: float = 0.0478
    t_mirror: float = 1.5e-6
    n_atoms: float = 75000.0

    def __post_init__(self):
        if not (isfinite(self.kappa) and self.kappa > 0):
            raise ValueError(f"kappa must be strictly positive, got {self.kappa}")
        if not (isfinite(self.g0) and self.g0 > 0):
            raise ValueError(f"g0 must be strictly positive, got {self.g0}")
        if not (isfinite(self.length_m) and self.length_m > 0):
            raise ValueError(f"length_m must be strictly positive, got {self.length_m}")
        if not 0 < self.t_mirror < 1:
            raise ValueError(f"t_mirror must lie in (0, 1), got {self.t_mirror}")
        if not (isfinite(self.n_atoms) and self.n_atoms >= 0):
            raise ValueError(f"n_atoms must be non-negative, got {self.n_atoms}")
