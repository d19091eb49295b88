"""Spectral line of a sampled complex field"""

import numpy
from scipy import fft
from scipy.signal import windows

from ..utils.math import quadratic_vertex


def hann_spectrum(samples: numpy.ndarray, dt: float) -> tuple[numpy.ndarray, numpy.ndarray]:
    """
    Hann-windowed power spectrum of a complex signal

    A component rotating as e^{−i·2π·f·t} shows up at +f.

    :param samples: uniformly sampled complex signal
    :type samples: numpy.ndarray
    :param dt: sample spacing, µs
    :type dt: float

    :return: ascending frequencies (MHz) and power
    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    """
    samples = numpy.asarray(samples, dtype=complex)
    n = len(samples)
    if n < 3:
        raise ValueError(f"need at least 3 samples, got {n}")

    power = numpy.abs(fft.fft(samples * windows.hann(n, sym=False))) ** 2
    freqs = fft.fftfreq(n, dt)

    # negate the FFT frequency axis, then sort ascending
    order = numpy.argsort(-freqs, kind="stable")
    return -freqs[order], power[order]


def peak_frequency(freqs: numpy.ndarray, power: numpy.ndarray) -> float:
    """
    Dominant line refined by a parabola through the log-power of the three bins around it

    Neighbours wrap around the ends of the axis.

    :param freqs: uniform ascending frequencies, MHz
    :type freqs: numpy.ndarray
    :param power: power per bin
    :type power: numpy.ndarray

    :rtype: float
    """
    n = len(power)
    k = int(numpy.argmax(power))
    step = freqs[1] - freqs[0]

    log_power = numpy.log(numpy.maximum(power, numpy.finfo(float).tiny))
    offset = quadratic_vertex(log_power[(k - 1) % n], log_power[k], log_power[(k + 1) % n])
    return float(freqs[k] + offset * step)


def line_contrast(power: numpy.ndarray) -> float:
    """Peak power over the median floor"""
    floor = float(numpy.median(power))
    peak = float(numpy.max(power))
    if floor == 0.0:
        return numpy.inf if peak > 0 else 0.0
    return peak / floor
