"""ybcav Imports"""

from .components.atom import AtomSpec
from .components.cavity import CavitySpec
from .components.drive import OperatingPoint, PowerCalibration, rabi_from_power
from .library.defaults import CALIBRATION, CAVITY, MAP_CENTRE, THRESHOLD_CURVE, YB174
from .modeling.bloch import DensityMatrix, FrameSpec, Generator, build_generator, rhs, steady_state
from .modeling.dressed import DressedPair, dressed_states
from .modeling.dynamics import LasingReport, SimConfig, Trajectory, analyze, integrate, simulate
from .modeling.params import DerivedParams, derived_params
from .modeling.pump import pump_rate, pump_rate_closed_form, pump_rate_lorentzian
from .modeling.threshold import (
    ClampedState,
    GainResult,
    clamped_state,
    is_lasing,
    power_curve,
    saturated_photon_number,
    small_signal_gain,
    threshold_pump_power,
)
from .represent.contour import extract_contour
from .represent.sweep import GridSpec, Map2D, region_stats, run_map, run_panels
from .utils.config import RunConfig, parse_config, render_config
from .utils.export import export_map, read_map_csv
from .utils.plot import render_heatmap

__all__ = [
    "CALIBRATION",
    "CAVITY",
    "MAP_CENTRE",
    "THRESHOLD_CURVE",
    "YB174",
    "AtomSpec",
    "CavitySpec",
    "ClampedState",
    "DensityMatrix",
    "DerivedParams",
    "DressedPair",
    "FrameSpec",
    "GainResult",
    "Generator",
    "GridSpec",
    "LasingReport",
    "Map2D",
    "OperatingPoint",
    "PowerCalibration",
    "RunConfig",
    "SimConfig",
    "Trajectory",
    "analyze",
    "build_generator",
    "clamped_state",
    "derived_params",
    "dressed_states",
    "export_map",
    "extract_contour",
    "integrate",
    "is_lasing",
    "parse_config",
    "power_curve",
    "pump_rate",
    "pump_rate_closed_form",
    "pump_rate_lorentzian",
    "rabi_from_power",
    "read_map_csv",
    "region_stats",
    "render_config",
    "render_heatmap",
    "rhs",
    "run_map",
    "run_panels",
    "saturated_photon_number",
    "simulate",
    "small_signal_gain",
    "steady_state",
    "threshold_pump_power",
]
__version__ = "0.1.0"
