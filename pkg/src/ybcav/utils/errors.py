"""Exceptions"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..modeling.dynamics import LasingReport


class NumericalError(Exception):
    """Raised when a numerical procedure fails to deliver a trustworthy result."""


class PumpRateNotConvergedError(NumericalError):
    """Raised when the weak-probe pump rate does not settle under probe halving.

    :param iterates: The last two pump responses.
    :type iterates: tuple[float, float]
    """

    def __init__(self, iterates: tuple[float, float]):
        self.iterates = iterates
        super().__init__(
            f"pump rate did not reach linear response, last iterates {iterates}",
        )


class SingularGeneratorError(NumericalError):
    """Raised when the steady state is not unique (degenerate steady manifold).

    :param condition: Condition number of the trace-constrained system.
    :type condition: float
    """

    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"steady state is ill-conditioned (cond = {condition:.3e})")


class GainNotConvergedError(NumericalError):
    """Raised when the small-signal gain depends on the test amplitude.

    :param gains: Gain sequence under test-amplitude halving, rad/µs.
    :type gains: list[float]
    """

    def __init__(self, gains: list[float]):
        self.gains = gains
        super().__init__(f"small-signal gain did not converge: {gains}")


class GainNotMonotoneError(NumericalError):
    """Raised when G(n) is not decreasing over the photon-number bracket.

    :param samples: (photon number, gain) pairs.
    :type samples: list[tuple[float, float]]
    """

    def __init__(self, samples: list[tuple[float, float]]):
        self.samples = samples
        super().__init__(f"gain is not saturating over the bracket: {samples}")


class PullingNotConvergedError(NumericalError):
    """Raised when the pulled oscillation frequency does not settle under iteration.

    :param frequencies: Last two frame frequencies tried, MHz.
    :type frequencies: tuple[float, float]
    """

    def __init__(self, frequencies: tuple[float, float]):
        self.frequencies = frequencies
        super().__init__(f"oscillation frequency did not settle, last iterates {frequencies}")


class NoThresholdError(NumericalError):
    """Raised when the pump-power bracket does not straddle the lasing threshold."""


class IntegrationDivergedError(NumericalError):
    """Raised when the density matrix leaves the physical set during integration.

    :param residuals: (time, trace error, Hermiticity error, negative eigenvalue).
    :type residuals: tuple[float, float, float, float]
    """

    def __init__(self, residuals: tuple[float, float, float, float]):
        self.residuals = residuals
        super().__init__(f"integration diverged at t = {residuals[0]:.3f} µs: {residuals[1:]}")


class StiffnessError(NumericalError):
    """Raised when step-doubling control fails after the allowed dt halvings.

    :param dt: Last step size tried, µs.
    :type dt: float
    """

    def __init__(self, dt: float, error: float):
        self.dt = dt
        self.error = error
        super().__init__(
            f"step-doubling control failed down to dt = {dt:.3e} µs (error {error:.3e})",
        )


class BelowThresholdError(NumericalError):
    """Raised when no lasing line stands out of the field spectrum.

    :param report: The report, with ``lasing`` False and ``shift`` NaN.
    :type report: LasingReport
    """

    def __init__(self, report: LasingReport):
        self.report = report
        super().__init__(
            f"no spectral line above the floor (mean photons {report.mean_photons:.3e})",
        )


class ConfigError(ValueError):
    """Raised for a malformed configuration document.

    :param message: What went wrong.
    :type message: str
    :param line: 1-based line number, 0 when not tied to a line.
    :type line: int
    """

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class CheckpointMismatchError(ValueError):
    """Raised when a checkpoint was written for a different grid or simulation setup."""
