"""Drives: operating point and power calibration"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import isfinite, sqrt
from typing import TYPE_CHECKING, Literal

from .atom import AtomSpec
from .cavity import CavitySpec

if TYPE_CHECKING:
    from typing import Self

PumpModel = Literal["broadband", "one-way"]

# "broadband": the green pump drives g→e and e→g at the same rate w
# "one-way": only g→e, which inverts the bare green line
PUMP_MODELS: tuple[PumpModel, ...] = ("broadband", "one-way")


def rabi_from_power(power_mw: float, k: float) -> float:
    """
    Rabi frequency of a beam from its power, Ω = k·√P

    :param power_mw: beam power, mW
    :type power_mw: float
    :param k: calibration, MHz per √mW
    :type k: float

    :return: Rabi frequency, technical MHz
    :rtype: float

    :raises ValueError: for negative power or non-positive calibration
    """
    if not power_mw >= 0:
        raise ValueError(f"power must be non-negative, got {power_mw} mW")
    if not k > 0:
        raise ValueError(f"calibration must be strictly positive, got {k}")
    return k * sqrt(power_mw)


def power_from_rabi(omega: float, k: float) -> float:
    """
    Beam power that yields a Rabi frequency, P = (Ω/k)²

    :param omega: Rabi frequency, technical MHz
    :type omega: float
    :param k: calibration, MHz per √mW
    :type k: float

    :return: power, mW
    :rtype: float
    """
    if not omega >= 0:
        raise ValueError(f"Rabi frequency must be non-negative, got {omega} MHz")
    if not k > 0:
        raise ValueError(f"calibration must be strictly positive, got {k}")
    return (omega / k) ** 2


@dataclass(frozen=True)
class PowerCalibration:
    """
    Square-root intensity scaling between beam power and Rabi frequency.

    :param k_pump: Green pump, MHz per √mW. Defaults to 1.5/√5.7.
    :type k_pump: float
    :param k_mot: Blue MOT, MHz per √mW. Defaults to 19/√20.
    :type k_mot: float
    """

    k_pump: float = 1.5 / sqrt(5.7)
    k_mot: float = 19.0 / sqrt(20.0)

    def __post_init__(self):
        if not (self.k_pump > 0 and self.k_mot > 0):
            raise ValueError(
                f"calibrations must be strictly positive, got {self.k_pump}, {self.k_mot}",
            )

    def omega_pump(self, power_mw: float) -> float:
        """Pump Rabi frequency (MHz) for a pump power (mW)"""
        return rabi_from_power(power_mw, self.k_pump)

    def omega_mot(self, power_mw: float) -> float:
        """MOT Rabi frequency (MHz) for a MOT power (mW)"""
        return rabi_from_power(power_mw, self.k_mot)


@dataclass(frozen=True)
class OperatingPoint:
    """
    Everything needed to evaluate one cell of a map.

    Detunings are referenced to the respective atomic line centres (the cavity
    detuning to the green line), all in technical MHz.

    :param delta_mot: MOT detuning on the blue line. Defaults to -30.
    :type delta_mot: float
    :param delta_pump: Pump detuning on the green line. Defaults to 0.
    :type delta_pump: float
    :param delta_cavity: Empty-cavity detuning from the green line. Defaults to -30.
    :type delta_cavity: float
    :param omega_mot: MOT Rabi frequency. Defaults to 19.
    :type omega_mot: float
    :param omega_pump: Pump Rabi frequency. Defaults to 1.5.
    :type omega_pump: float
    :param atom: Atomic constants.
    :type atom: AtomSpec
    :param cavity: Cavity constants and atom number.
    :type cavity: CavitySpec
    :param pump_model: How the incoherent pump rate enters the master equation, one of
        ``PUMP_MODELS``. Defaults to "broadband".
    :type pump_model: str

    :raises ValueError: For negative Rabi frequencies, non-finite detunings or an unknown
        pump model.
    """

    delta_mot: float = -30.0
    delta_pump: float = 0.0
    delta_cavity: float = -30.0
    omega_mot: float = 19.0
    omega_pump: float = 1.5
    atom: AtomSpec = field(default_factory=AtomSpec)
    cavity: CavitySpec = field(default_factory=CavitySpec)
    pump_model: PumpModel = "broadband"

    def __post_init__(self):
        if self.pump_model not in PUMP_MODELS:
            raise ValueError(f"pump_model must be one of {PUMP_MODELS}, got {self.pump_model!r}")

        for name in ("delta_mot", "delta_pump", "delta_cavity"):
            if not isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)}")

        for name in ("omega_mot", "omega_pump"):
            value = getattr(self, name)
            if not (isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative, got {value}")

    def but(self, **changes) -> Self:
        """Copy with some fields changed; cavity fields are accepted directly"""
        cavity_changes = {
            k: changes.pop(k)
            for k in ("kappa", "g0", "length_m", "t_mirror", "n_atoms")
            if k in changes
        }
        if cavity_changes:
            changes["cavity"] = replace(self.cavity, **cavity_changes)
        return replace(self, **changes)
