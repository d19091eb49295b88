"""Three-level Bloch equations over (g, b, e)

Frame: rotating with the MOT on g↔b and with the green frame frequency on g↔e.

    H/ħ = −Δ̃_MOT σ_bb − δ̃_green σ_ee + (Ω̃_MOT/2)(σ_bg + σ_gb) + g̃₀(a σ_eg + a* σ_ge)
    dρ/dt = −i[H, ρ] + Γ̃_b D[σ_gb]ρ + Γ̃_g D[σ_ge]ρ + w D[σ_eg]ρ (+ w D[σ_ge]ρ)
    da/dt = (−i·2π(Δ_cavity − δ_green) − κ̃/2)·a − i·g̃₀·N·⟨σ_ge⟩

The bracketed term is the stimulated e→g leg of a broadband pump, dropped for the
"one-way" pump model.

σ_xy = |x⟩⟨y|, D[c]ρ = cρc† − ½{c†c, ρ}. Density matrices are vectorized column-major,
vec(ρ)[i + 3j] = ρ[i, j], so that vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy
from scipy import linalg

from ..utils.decorators import timer
from ..utils.errors import SingularGeneratorError
from ..utils.math import angular, hermitian_part

if TYPE_CHECKING:
    from typing import Self

    from ..components.drive import OperatingPoint

logger = logging.getLogger("ybcav")

BASIS = ("g", "b", "e")
G, B, E = 0, 1, 2
DIM = 3

# rows of an ill-posed trace-constrained system blow past this
MAX_CONDITION = 1e12

_IDENTITY = numpy.eye(DIM)


def sigma(i: int, j: int) -> numpy.ndarray:
    """|i⟩⟨j|"""
    out = numpy.zeros((DIM, DIM), dtype=complex)
    out[i, j] = 1.0
    return out


def vec(rho: numpy.ndarray) -> numpy.ndarray:
    """Column-major vectorization"""
    return numpy.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(vector: numpy.ndarray) -> numpy.ndarray:
    """Inverse of vec"""
    return numpy.asarray(vector).reshape(DIM, DIM, order="F")


# d(trace)/dt = TRACE_FUNCTIONAL · vec(dρ/dt)
TRACE_FUNCTIONAL = vec(_IDENTITY).real

# row of vec(dρ/dt) holding dρ_gg/dt, replaced by the trace constraint
_REPLACED_ROW = G + DIM * G


def commutator_superoperator(hamiltonian: numpy.ndarray) -> numpy.ndarray:
    """Superoperator of ρ ↦ −i[H, ρ]"""
    return -1j * (numpy.kron(_IDENTITY, hamiltonian) - numpy.kron(hamiltonian.T, _IDENTITY))


def dissipator_superoperator(jump: numpy.ndarray) -> numpy.ndarray:
    """Superoperator of ρ ↦ cρc† − ½{c†c, ρ}"""
    number = jump.conj().T @ jump
    return (
        numpy.kron(jump.conj(), jump)
        - 0.5 * numpy.kron(_IDENTITY, number)
        - 0.5 * numpy.kron(number.T, _IDENTITY)
    )


@dataclass(frozen=True)
class FrameSpec:
    """
    Rotating-frame bookkeeping on the green line.

    :param delta_green: Frame frequency relative to the bare g↔e line, technical MHz.
    :type delta_green: float
    :param field_amp: Cavity field amplitude in that frame, √photons.
    :type field_amp: complex
    """

    delta_green: float = 0.0
    field_amp: complex = 0.0

    def __post_init__(self):
        if not (numpy.isfinite(self.delta_green) and numpy.isfinite(self.field_amp)):
            raise ValueError(f"frame must be finite, got {self}")


@dataclass(frozen=True, eq=False)
class Generator:
    """
    Vectorized time-independent Liouvillian, vec(dρ/dt) = L·vec(ρ).

    :param matrix: 9×9 complex matrix, made read-only.
    :type matrix: numpy.ndarray
    """

    matrix: numpy.ndarray

    def __post_init__(self):
        if self.matrix.shape != (DIM * DIM, DIM * DIM):
            raise ValueError(f"generator must be 9×9, got {self.matrix.shape}")
        self.matrix.setflags(write=False)

    @property
    def trace_residual(self) -> float:
        """Largest entry of the d(trace)/dt functional, zero for a valid generator"""
        return float(numpy.max(numpy.abs(TRACE_FUNCTIONAL @ self.matrix)))

    def apply(self, rho: numpy.ndarray | DensityMatrix) -> numpy.ndarray:
        """dρ/dt as a 3×3 matrix"""
        if isinstance(rho, DensityMatrix):
            rho = rho.matrix
        return unvec(self.matrix @ vec(rho))

    def eigenvalues(self) -> numpy.ndarray:
        """Spectrum of L, rad/µs"""
        return numpy.linalg.eigvals(self.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Atomic state over the ordered basis (g, b, e).

    :param matrix: 3×3 complex Hermitian unit-trace matrix, made read-only.
    :type matrix: numpy.ndarray
    """

    matrix: numpy.ndarray

    def __post_init__(self):
        if self.matrix.shape != (DIM, DIM):
            raise ValueError(f"density matrix must be 3×3, got {self.matrix.shape}")
        self.matrix.setflags(write=False)

    @classmethod
    def ground(cls) -> Self:
        """|g⟩⟨g|"""
        return cls(sigma(G, G))

    @property
    def populations(self) -> numpy.ndarray:
        """(ρ_gg, ρ_bb, ρ_ee)"""
        return numpy.diag(self.matrix).real.copy()

    def __getitem__(self, key: tuple[int, int]) -> complex:
        return complex(self.matrix[key])

    def residuals(self) -> tuple[float, float, float]:
        """
        Distance from the physical set

        :return: |trace − 1|, max|ρ − ρ†|, most negative eigenvalue (0 if none)
        :rtype: tuple[float, float, float]
        """
        trace_error = abs(numpy.trace(self.matrix) - 1.0)
        hermiticity_error = float(numpy.max(numpy.abs(self.matrix - self.matrix.conj().T)))
        lowest = float(numpy.linalg.eigvalsh(hermitian_part(self.matrix))[0])
        return float(trace_error), hermiticity_error, max(0.0, -lowest)

    def is_physical(self, tol: float = 1e-8) -> bool:
        """Hermitian and unit trace within 1e-10, eigenvalues ≥ −tol"""
        trace_error, hermiticity_error, negativity = self.residuals()
        return trace_error < 1e-10 and hermiticity_error < 1e-10 and negativity <= tol


def polarization(rho: numpy.ndarray | DensityMatrix) -> complex:
    """⟨σ_ge⟩ = Tr(ρ|g⟩⟨e|) = ρ[e, g], the atomic source of the cavity field"""
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    return complex(rho[E, G])


@lru_cache(maxsize=4096)
def liouvillian_parts(
    op: OperatingPoint,
    delta_green: float,
    w: float,
    probe_rabi: float = 0.0,
) -> tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
    """
    Splits L = L0 + a·L₊ + a*·L₋ so the field can change without rebuilding L0

    :param op: operating point
    :type op: OperatingPoint
    :param delta_green: green frame frequency relative to the bare line, technical MHz
    :type delta_green: float
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param probe_rabi: coherent green drive at the frame frequency, technical MHz
    :type probe_rabi: float

    :return: read-only (L0, L₊, L₋)
    :rtype: tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]
    """
    if not w >= 0:
        raise ValueError(f"pump rate must be non-negative, got {w}")

    hamiltonian = (
        -angular(op.delta_mot) * sigma(B, B)
        - angular(delta_green) * sigma(E, E)
        + angular(op.omega_mot) / 2 * (sigma(B, G) + sigma(G, B))
        + angular(probe_rabi) / 2 * (sigma(E, G) + sigma(G, E))
    )

    base = (
        commutator_superoperator(hamiltonian)
        + angular(op.atom.gamma_b) * dissipator_superoperator(sigma(G, B))
        + angular(op.atom.gamma_g) * dissipator_superoperator(sigma(G, E))
        + w * dissipator_superoperator(sigma(E, G))
    )
    if op.pump_model == "broadband":
        base = base + w * dissipator_superoperator(sigma(G, E))

    g0 = angular(op.cavity.g0)
    # H_field = g̃₀(a σ_eg + a* σ_ge) is linear in a and a*
    raising = commutator_superoperator(g0 * sigma(E, G))
    lowering = commutator_superoperator(g0 * sigma(G, E))

    for part in (base, raising, lowering):
        part.setflags(write=False)

    return base, raising, lowering


def build_generator(
    op: OperatingPoint,
    frame: FrameSpec,
    w: float,
    probe_rabi: float = 0.0,
) -> Generator:
    """
    Liouvillian with the cavity field frozen at ``frame.field_amp``

    :param op: operating point
    :type op: OperatingPoint
    :param frame: green frame frequency and frozen field
    :type frame: FrameSpec
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param probe_rabi: coherent green drive at the frame frequency, technical MHz.
        Only the pump-rate probe uses it. Defaults to 0.
    :type probe_rabi: float

    :rtype: Generator
    """
    base, raising, lowering = liouvillian_parts(op, frame.delta_green, w, probe_rabi)
    a = complex(frame.field_amp)
    return Generator(base + a * raising + a.conjugate() * lowering)


@timer(logger, kind='steady', level=logging.DEBUG)
def steady_state(generator: Generator) -> DensityMatrix:
    """
    Unique ρ with L·vec(ρ) = 0 and unit trace

    The dρ_gg/dt row is replaced by the trace constraint and the 9×9 system solved directly.

    :param generator: trace-preserving Liouvillian
    :type generator: Generator

    :rtype: DensityMatrix

    :raises SingularGeneratorError: if the steady manifold is degenerate
    """
    system = numpy.array(generator.matrix, dtype=complex)
    system[_REPLACED_ROW, :] = TRACE_FUNCTIONAL
    rhs = numpy.zeros(DIM * DIM, dtype=complex)
    rhs[_REPLACED_ROW] = 1.0

    condition = float(numpy.linalg.cond(system))
    if not numpy.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularGeneratorError(condition)

    solution = linalg.solve(system, rhs)
    return DensityMatrix(hermitian_part(unvec(solution)))


def field_derivative(
    rho: numpy.ndarray | DensityMatrix,
    a: complex,
    op: OperatingPoint,
    frame: FrameSpec,
) -> complex:
    """da/dt in the frame, rad/µs·√photons"""
    detuning = angular(op.delta_cavity - frame.delta_green)
    decay = angular(op.cavity.kappa) / 2
    coupling = angular(op.cavity.g0) * op.cavity.n_atoms
    return (-1j * detuning - decay) * a - 1j * coupling * polarization(rho)


def rhs(
    rho: numpy.ndarray | DensityMatrix,
    a: complex,
    op: OperatingPoint,
    w: float,
    frame: FrameSpec,
) -> tuple[numpy.ndarray, complex]:
    """
    Mean-field derivatives of the atoms and the cavity field, ⟨aσ⟩ = ⟨a⟩⟨σ⟩

    ``frame.field_amp`` is ignored; the field is ``a``.

    :param rho: atomic state
    :type rho: numpy.ndarray | DensityMatrix
    :param a: field amplitude, √photons
    :type a: complex
    :param op: operating point
    :type op: OperatingPoint
    :param w: incoherent pump rate, rad/µs
    :type w: float
    :param frame: green frame
    :type frame: FrameSpec

    :return: (dρ/dt as 3×3, da/dt)
    :rtype: tuple[numpy.ndarray, complex]
    """
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    generator = build_generator(op, FrameSpec(frame.delta_green, a), w)
    return generator.apply(rho), field_derivative(rho, a, op, frame)
