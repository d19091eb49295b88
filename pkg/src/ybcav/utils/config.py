"""Line-based run configuration

One ``key = value`` pair per line, ``#`` starts a comment. Frequencies are technical MHz,
powers mW. A drive is set either by its Rabi frequency or by its power, never both.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from math import isfinite

from ..components.atom import AtomSpec
from ..components.cavity import CavitySpec
from ..components.drive import PUMP_MODELS, OperatingPoint, PowerCalibration
from ..library.defaults import CALIBRATION, CAVITY, MAP_CENTRE, YB174
from ..modeling.dynamics import SimConfig
from ..represent.sweep import TASKS, GridSpec
from .errors import ConfigError

# default Rabi frequencies when neither Rabi frequency nor power is given
DEFAULT_OMEGA_MOT = MAP_CENTRE.omega_mot
DEFAULT_OMEGA_PUMP = MAP_CENTRE.omega_pump

# drive: (Rabi key, power key)
DRIVES = {
    "mot": ("omega_mot_mhz", "p_mot_mw"),
    "pump": ("omega_pump_mhz", "p_pump_mw"),
}


@dataclass
class RunConfig:
    """Every setting of a run, flat"""

    gamma_b_mhz: float = YB174.gamma_b
    gamma_g_mhz: float = YB174.gamma_g
    lambda_b_nm: float = YB174.lambda_b
    lambda_g_nm: float = YB174.lambda_g
    kappa_mhz: float = CAVITY.kappa
    g0_mhz: float = CAVITY.g0
    length_m: float = CAVITY.length_m
    t_mirror: float = CAVITY.t_mirror
    n_atoms: float = CAVITY.n_atoms
    delta_mot_mhz: float = MAP_CENTRE.delta_mot
    delta_pump_mhz: float = MAP_CENTRE.delta_pump
    delta_cavity_mhz: float = MAP_CENTRE.delta_cavity
    pump_model: str = MAP_CENTRE.pump_model
    omega_mot_mhz: float | None = None
    p_mot_mw: float | None = None
    omega_pump_mhz: float | None = None
    p_pump_mw: float | None = None
    k_pump: float = CALIBRATION.k_pump
    k_mot: float = CALIBRATION.k_mot
    dt_us: float = 5e-4
    t_transient_us: float = 200.0
    t_window_us: float = 256.0
    sample_stride: int = 20
    seed_amp: float = 1e-3
    rng_seed: int = 0
    detect_photons: float = 1e-6
    control_tol: float = 1e-6
    coherent_pump: bool = False
    x_min_mhz: float = -4.0
    x_max_mhz: float = 8.0
    nx: int = 60
    y_min_mhz: float = -40.0
    y_max_mhz: float = -20.0
    ny: int = 60
    task: str = "threshold"
    scan_min_mhz: float = -4.0
    scan_max_mhz: float = 8.0
    n_scan: int = 121
    p_min_mw: float = 0.0
    p_max_mw: float = 20.0
    n_power: int = 41
    bracket_low_mw: float = 0.0
    bracket_high_mw: float = 20.0
    workers: int = 1
    out: str = "ybcav"
    checkpoint: str | None = None

    def __post_init__(self):
        for drive, (rabi, power) in DRIVES.items():
            if getattr(self, rabi) is not None and getattr(self, power) is not None:
                raise ConfigError(f"{drive} drive set by both {rabi} and {power}")
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.pump_model not in PUMP_MODELS:
            raise ConfigError(f"pump_model must be one of {PUMP_MODELS}, got {self.pump_model!r}")

    def atom(self) -> AtomSpec:
        return AtomSpec(
            gamma_b=self.gamma_b_mhz,
            gamma_g=self.gamma_g_mhz,
            lambda_b=self.lambda_b_nm,
            lambda_g=self.lambda_g_nm,
        )

    def cavity(self) -> CavitySpec:
        return CavitySpec(
            kappa=self.kappa_mhz,
            g0=self.g0_mhz,
            length_m=self.length_m,
            t_mirror=self.t_mirror,
            n_atoms=self.n_atoms,
        )

    def calibration(self) -> PowerCalibration:
        return PowerCalibration(k_pump=self.k_pump, k_mot=self.k_mot)

    def omega_mot(self) -> float:
        """MOT Rabi frequency, from the power when given"""
        if self.p_mot_mw is not None:
            return self.calibration().omega_mot(self.p_mot_mw)
        return DEFAULT_OMEGA_MOT if self.omega_mot_mhz is None else self.omega_mot_mhz

    def omega_pump(self) -> float:
        """Pump Rabi frequency, from the power when given"""
        if self.p_pump_mw is not None:
            return self.calibration().omega_pump(self.p_pump_mw)
        return DEFAULT_OMEGA_PUMP if self.omega_pump_mhz is None else self.omega_pump_mhz

    def operating_point(self) -> OperatingPoint:
        return OperatingPoint(
            delta_mot=self.delta_mot_mhz,
            delta_pump=self.delta_pump_mhz,
            delta_cavity=self.delta_cavity_mhz,
            omega_mot=self.omega_mot(),
            omega_pump=self.omega_pump(),
            atom=self.atom(),
            cavity=self.cavity(),
            pump_model=self.pump_model,
        )

    def sim_config(self) -> SimConfig:
        return SimConfig(
            dt=self.dt_us,
            t_transient=self.t_transient_us,
            t_window=self.t_window_us,
            sample_stride=self.sample_stride,
            seed_amp=self.seed_amp,
            rng_seed=self.rng_seed,
            detect_photons=self.detect_photons,
            control_tol=self.control_tol,
            coherent_pump=self.coherent_pump,
        )

    def grid_spec(self, task: str | None = None) -> GridSpec:
        return GridSpec(
            x_min=self.x_min_mhz,
            x_max=self.x_max_mhz,
            nx=self.nx,
            y_min=self.y_min_mhz,
            y_max=self.y_max_mhz,
            ny=self.ny,
            base=self.operating_point(),
            task=task or self.task,
        )

    def validate(self):
        """Builds every record once

        :raises ConfigError: with the record's complaint
        """
        try:
            self.operating_point()
            self.sim_config()
            self.grid_spec()
        except ValueError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e)) from e


def _kind(annotation: str) -> str:
    return annotation.replace(" | None", "")


KINDS = {f.name: _kind(str(f.type)) for f in fields(RunConfig)}


def _value(key: str, text: str) -> float | int | bool | str:
    kind = KINDS[key]
    if kind == "float":
        value = float(text)
        if not isfinite(value):
            raise ValueError(f"{key} must be finite, got {text!r}")
        return value
    if kind == "int":
        return int(text)
    if kind == "bool":
        if text not in ("true", "false"):
            raise ValueError(f"{key} must be true or false, got {text!r}")
        return text == "true"
    if not text:
        raise ValueError(f"{key} needs a value")
    return text


def parse_config(text: str) -> RunConfig:
    """
    Reads a ``key = value`` document

    :param text: the document
    :type text: str

    :rtype: RunConfig

    :raises ConfigError: for unknown or duplicate keys, malformed values or a drive given
        both ways, with the line number
    """
    values = {}
    lines = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", number)

        key, _, text_value = (part.strip() for part in line.partition("="))
        if key not in KINDS:
            raise ConfigError(f"unknown key {key!r}", number)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}, first set at line {lines[key]}", number)

        try:
            values[key] = _value(key, text_value)
        except ValueError as e:
            raise ConfigError(f"malformed value for {key}: {e}", number) from e
        lines[key] = number

        for rabi, power in DRIVES.values():
            if {rabi, power} <= values.keys():
                raise ConfigError(f"{rabi} and {power} both given", number)

    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def render_config(cfg: RunConfig) -> str:
    """Document that parses back to ``cfg``"""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
