"""Unit conversions and small numerical helpers"""

from math import pi

import numpy

TWO_PI = 2 * pi


def angular(f_mhz: float) -> float:
    """
    Technical frequency to angular rate

    :param f_mhz: frequency in MHz
    :type f_mhz: float

    :return: angular rate in rad/µs
    :rtype: float
    """
    return TWO_PI * f_mhz


def technical(w: float) -> float:
    """
    Angular rate to technical frequency

    :param w: angular rate in rad/µs
    :type w: float

    :return: frequency in MHz
    :rtype: float
    """
    return w / TWO_PI


def relative_change(new: float, old: float) -> float:
    """Relative change between two iterates, zero if both vanish"""
    scale = max(abs(new), abs(old))
    if scale == 0.0:
        return 0.0
    return abs(new - old) / scale


def quadratic_vertex(alpha: float, beta: float, gamma: float) -> float:
    """
    Offset of the vertex of the parabola through (-1, alpha), (0, beta), (1, gamma)

    :return: offset in (-0.5, 0.5) when beta is the largest of the three
    :rtype: float
    """
    denominator = alpha - 2 * beta + gamma
    if denominator == 0.0:
        return 0.0
    return 0.5 * (alpha - gamma) / denominator


def hermitian_part(matrix: numpy.ndarray) -> numpy.ndarray:
    """(M + M†)/2"""
    return 0.5 * (matrix + matrix.conj().T)
