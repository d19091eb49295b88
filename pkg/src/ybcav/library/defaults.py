"""Reference parameter sets of the cold ytterbium laser"""

from math import sqrt

from ..components.atom import AtomSpec
from ..components.cavity import CavitySpec
from ..components.drive import OperatingPoint, PowerCalibration

# ¹⁷⁴Yb, blue ¹S₀↔¹P₁ and green ¹S₀↔³P₁
YB174 = AtomSpec(gamma_b=29.1, gamma_g=0.1824, lambda_b=399.0, lambda_g=556.0)

# 4.78 cm, finesse ~45000, N from the threshold simulations
CAVITY = CavitySpec(
    kappa=0.070,
    g0=0.066,
    length_m=0.0478,
    t_mirror=1.5e-6,
    n_atoms=75000.0,
)

# Ω_pump = 1.5 MHz at 5.7 mW, Ω_MOT = 19 MHz at 20 mW
CALIBRATION = PowerCalibration(k_pump=1.5 / sqrt(5.7), k_mot=19.0 / sqrt(20.0))

# threshold-curve setting: pump on the bare line, cavity on the Raman condition
THRESHOLD_CURVE = OperatingPoint(
    delta_mot=-30.0,
    delta_pump=0.0,
    delta_cavity=-30.0,
    omega_mot=19.0,
    omega_pump=1.5,
    atom=YB174,
    cavity=CAVITY,
)

# centre of the detuning maps, pump on the Stark-shifted lower dressed state
MAP_CENTRE = OperatingPoint(
    delta_mot=-30.0,
    delta_pump=2.8,
    delta_cavity=-30.0,
    omega_mot=19.0,
    omega_pump=1.5,
    atom=YB174,
    cavity=CAVITY,
)

# detuning maps: Δ_pump along X, Δ_cavity along Y, MHz
PUMP_AXIS = (-4.0, 8.0)
CAVITY_AXIS = (-40.0, -20.0)

# panel matrix of the threshold maps: Δ_MOT rows, Ω_MOT columns, MHz
PANEL_DELTA_MOT = (-25.0, -30.0, -35.0)
PANEL_OMEGA_MOT = (13.0, 19.0, 26.0)
