"""The map between the spectral parameter and the unit-disk parameter.

The resolvent set of the free operator is parametrised by a point ``k`` in the
punctured open unit disk through

    lambda**2 = m**2 + 2 - k - 1/k,

which is two-to-one in ``lambda``.  All functions accept scalars or numpy
arrays and broadcast.
"""
from dataclasses import dataclass

import numpy as np

from .errors import SpectralPoint, UnitDisk

#: relative tolerance used to decide that a point lies on the essential spectrum
SPECTRUM_RTOL = 1e-14


@dataclass(frozen=True)
class SpectrumIntervals:
    """Two closed real intervals ``[-sqrt(m^2+4), -m]`` and ``[m, sqrt(m^2+4)]``."""

    intervals: tuple

    @property
    def endpoints(self):
        (a, b), (c, d) = self.intervals
        return (a, b, c, d)


@dataclass(frozen=True)
class KPoint:
    """A point of the punctured unit disk together with its mass and lambda.

    Fields may be numpy arrays of a common shape.
    """

    k: complex
    m: float
    lam: complex

    @property
    def abs_k(self):
        return np.abs(self.k)


def _check_mass(m):
    if not np.isfinite(m) or m < 0:
        raise ValueError(f"mass must be a finite non-negative number, got {m!r}")
    return float(m)


def essential_spectrum(m):
    """Return the essential spectrum of the free operator as two intervals."""
    m = _check_mass(m)
    top = np.sqrt(m * m + 4.0)
    return SpectrumIntervals(((-top, -m), (m, top)))


def dist_to_spectrum(lam, m):
    """Euclidean distance from ``lam`` to the essential spectrum.

    Parameters
    ----------
    lam : complex or array_like
        Spectral parameter(s).
    m : float
        Mass.
    """
    m = _check_mass(m)
    lam = np.asarray(lam, dtype=complex)
    x, y = lam.real, lam.imag
    top = np.sqrt(m * m + 4.0)
    ax = np.abs(x)
    # the spectrum is symmetric, so fold onto the right interval
    dx = ax - np.clip(ax, m, top)
    d = np.hypot(dx, y)
    return d if d.ndim else float(d)


def on_spectrum(lam, m):
    """Boolean mask of the points treated as lying in the essential spectrum."""
    lam = np.asarray(lam, dtype=complex)
    return np.asarray(dist_to_spectrum(lam, m)) <= SPECTRUM_RTOL * (1.0 + np.abs(lam))


def _k_of_lambda(lam, m):
    s = m * m + 2.0 - lam * lam
    d = np.sqrt(s * s - 4.0)
    # sign-matched root: |s + d| >= |s - d|, so s + d is the large root
    flip = (s.real * d.real + s.imag * d.imag) < 0
    d = np.where(flip, -d, d)
    big = 0.5 * (s + d)
    return 1.0 / big


def k_from_lambda(lam, m):
    """Return the :class:`KPoint` of ``lam``, i.e. the root of
    ``k**2 - (m**2 + 2 - lam**2) k + 1 = 0`` inside the unit disk.

    Raises
    ------
    SpectralPoint
        If any ``lam`` lies in the essential spectrum (including its endpoints).
    """
    m = _check_mass(m)
    lam_arr = np.asarray(lam, dtype=complex)
    if np.any(on_spectrum(lam_arr, m)):
        raise SpectralPoint("lambda lies in the essential spectrum")
    k = _k_of_lambda(lam_arr, m)
    if np.any(np.abs(k) >= 1.0):
        raise SpectralPoint("lambda lies in the essential spectrum")
    if lam_arr.ndim == 0:
        return KPoint(complex(k), m, complex(lam_arr))
    return KPoint(k, m, lam_arr)


def lambda_pair_from_k(k, m):
    """Return the two spectral parameters ``(lam, -lam)`` belonging to ``k``.

    The first element has non-negative imaginary part; on the real axis it has
    non-negative real part.
    """
    m = _check_mass(m)
    k = np.asarray(k, dtype=complex)
    ak = np.abs(k)
    if np.any((ak >= 1.0) | (ak == 0.0)):
        raise UnitDisk("k must satisfy 0 < |k| < 1")
    lam = np.sqrt(m * m + 2.0 - k - 1.0 / k)
    flip = (lam.imag < 0) | ((lam.imag == 0) & (lam.real < 0))
    lam = np.where(flip, -lam, lam)
    if lam.ndim == 0:
        lam = complex(lam)
    return lam, -lam
