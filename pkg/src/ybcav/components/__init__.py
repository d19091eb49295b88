"""ybcav.components module"""

from .atom import AtomSpec
from .cavity import CavitySpec
from .drive import OperatingPoint, PowerCalibration, power_from_rabi, rabi_from_power

__all__ = [
    "AtomSpec",
    "CavitySpec",
    "OperatingPoint",
    "PowerCalibration",
    "power_from_rabi",
    "rabi_from_power",
]
