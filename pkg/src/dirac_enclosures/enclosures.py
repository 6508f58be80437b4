"""Spectral enclosures for perturbed discrete Dirac operators.

Each bound function ``F(lam, m, ...)`` has the property that a spectral
parameter with ``F * ||V||_p < 1`` cannot be an eigenvalue of ``D0 + V``.
The l1 enclosure is a closed algebraic region and is defined on all of C;
the others are defined off the essential spectrum only.

All functions broadcast over array-valued ``lam``.
"""
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from .errors import AtThreshold, BadExponent, RegimeViolation, SpectralPoint
from .resolvent import t0_spectral_norm, t1_spectral_norm
from .spectral_map import _check_mass, dist_to_spectrum, k_from_lambda

THRESHOLD_TOL = 1e-12


class Kind(str, Enum):
    L1 = "l1"
    STEIN = "stein"
    YOUNG = "young"
    YOUNG_HS = "young-hs"
    STEIN_IMPROVED = "stein-improved"


class Topology(str, Enum):
    FOUR_LOOPS = "four-loops"
    TWO_LOOPS = "two-loops"
    ONE_LOOP = "one-loop"


def conjugate_exponent(p):
    """Hoelder conjugate ``q`` of ``p`` (``q = inf`` for ``p = 1``, ``q = 1`` for ``p = inf``)."""
    p = float(p)
    if not p >= 1:
        raise BadExponent(f"exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class EnclosureSpec:
    """One enclosure: which bound, for which mass, exponent and budget ``Q = ||V||_p``."""

    kind: Kind
    m: float
    p: float
    Q: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        _check_mass(self.m)
        if not self.p >= 1:
            raise BadExponent(f"exponent must be >= 1, got {self.p}")
        if self.kind is Kind.L1 and self.p != 1:
            raise BadExponent("the l1 enclosure needs p = 1")
        if self.kind in (Kind.STEIN, Kind.YOUNG_HS) and self.p == 1:
            raise BadExponent(f"the {self.kind.value} enclosure needs p > 1")
        if not self.Q >= 0:
            raise ValueError("budget must be non-negative")

    @property
    def q(self):
        return conjugate_exponent(self.p)

    def bound(self, lam):
        """Bound function value at ``lam`` (not defined for ``kind = L1``)."""
        if self.kind is Kind.L1:
            return l1_prefactor(lam, self.m)
        if self.kind is Kind.STEIN:
            return g_p(lam, self.m, self.p)
        if self.kind is Kind.YOUNG:
            return h_q(lam, self.m, self.q)
        if self.kind is Kind.YOUNG_HS:
            return f_q(lam, self.m, self.q)
        return psi_q(lam, self.m, self.q)

    def contains(self, lam):
        """True where ``lam`` is not excluded, i.e. may be an eigenvalue."""
        if self.kind is Kind.L1:
            return in_l1_enclosure(lam, self.m, self.Q)
        return np.asarray(self.bound(lam)) * self.Q >= 1.0


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def l1_boundary_function(lam, m, Q):
    """Polynomial whose non-positive set is the l1 enclosure."""
    lam = np.asarray(lam, dtype=complex)
    l2 = lam * lam - m * m
    lhs = np.abs(l2) * np.abs(l2 - 4.0)
    rhs = (np.abs(lam + m) + np.abs(lam - m)) ** 2 * Q * Q
    return _scalar(lhs - rhs)


def in_l1_enclosure(lam, m, Q):
    """Membership in the l1 enclosure; valid on all of C, spectrum included."""
    return _scalar(np.asarray(l1_boundary_function(lam, m, Q)) <= 0.0)


def l1_prefactor(lam, m):
    """``(|lam-m| + |lam+m|) / sqrt(|lam^2-m^2| |lam^2-m^2-4|)``."""
    lam = np.asarray(lam, dtype=complex)
    k_from_lambda(lam, m)
    l2 = lam * lam - m * m
    return _scalar((np.abs(lam - m) + np.abs(lam + m)) / np.sqrt(np.abs(l2) * np.abs(l2 - 4.0)))


def g_p(lam, m, p):
    """Bound function obtained by complex interpolation, ``1 < p <= inf``."""
    p = float(p)
    if not p > 1:
        raise BadExponent("g_p needs p > 1")
    lam = np.asarray(lam, dtype=complex)
    k_from_lambda(lam, m)
    dist = np.asarray(dist_to_spectrum(lam, m))
    if math.isinf(p):
        return _scalar(1.0 / dist)
    l2 = lam * lam - m * m
    num = (np.abs(lam - m) + np.abs(lam + m)) ** (1.0 / p)
    den = (np.abs(l2) * np.abs(l2 - 4.0)) ** (0.5 / p) * dist ** (1.0 - 1.0 / p)
    return _scalar(num / den)


def _t_norms(lam, m):
    kp = k_from_lambda(lam, m)
    return kp, np.asarray(t0_spectral_norm(kp)), np.asarray(t1_spectral_norm(kp))


def h_q(lam, m, q):
    """Bound function from the discrete Young inequality, ``1 <= q <= inf``."""
    q = float(q)
    if not q >= 1:
        raise BadExponent("h_q needs q >= 1")
    kp, n0, n1 = _t_norms(lam, m)
    if math.isinf(q):
        return _scalar(np.maximum(n0, n1))
    aq = np.abs(kp.k) ** q
    return _scalar((n0 ** q + 2.0 / (1.0 - aq) * n1 ** q) ** (1.0 / q))


def f_q(lam, m, q):
    """Explicit (Hilbert-Schmidt) weakening of :func:`h_q`, ``1 <= q < inf``."""
    q = float(q)
    if not (q >= 1 and math.isfinite(q)):
        raise BadExponent("f_q needs 1 <= q < inf")
    kp = k_from_lambda(lam, m)
    aq = np.abs(kp.k) ** q
    pref = np.asarray(l1_prefactor(lam, m))
    return _scalar(pref * (1.0 + 2.0 * np.sqrt(aq) / (1.0 - aq)) ** (1.0 / q))


def psi_q(lam, m, q):
    """Interpolated improvement: ``max(|T0|, |T1|)^(1-1/q) * dist^(-1/q)``."""
    q = float(q)
    if not q >= 1:
        raise BadExponent("psi_q needs q >= 1")
    _, n0, n1 = _t_norms(lam, m)
    big = np.maximum(n0, n1)
    if math.isinf(q):
        return _scalar(big)
    dist = np.asarray(dist_to_spectrum(lam, m))
    return _scalar(big ** (1.0 - 1.0 / q) * dist ** (-1.0 / q))


def topology_thresholds(m):
    """The two squared budgets at which the l1 boundary changes topology."""
    m = _check_mass(m)
    return m * m / 2.0 + 1.0 - m * math.sqrt(m * m / 4.0 + 1.0), m * m / 4.0 + 1.0


def classify_topology(m, Q):
    """Number of loops of the l1 enclosure boundary for budget ``Q``.

    Raises
    ------
    AtThreshold
        If ``Q**2`` is within ``1e-12`` of either threshold.
    """
    lo, hi = topology_thresholds(m)
    q2 = Q * Q
    if abs(q2 - lo) <= THRESHOLD_TOL or abs(q2 - hi) <= THRESHOLD_TOL:
        raise AtThreshold(f"Q^2 = {q2!r} sits on a topology threshold")
    if q2 < lo:
        return Topology.FOUR_LOOPS
    if q2 < hi:
        return Topology.TWO_LOOPS
    return Topology.ONE_LOOP


def lambda_pm(m, Q):
    """End points ``(lambda_minus, lambda_plus)`` of the eigenvalue-free part
    of the positive band, valid in the four-loop regime."""
    lo, _ = topology_thresholds(m)
    if not (Q > 0 and Q * Q < lo):
        raise RegimeViolation("lambda_pm needs 0 < Q^2 below the first topology threshold")
    a = 1.0 - Q * Q
    root = math.sqrt(a * a - Q * Q * m * m)
    # m^2 + 2 (a - root) with the difference written without cancellation
    lam_minus = m * math.sqrt(1.0 + 2.0 * Q * Q / (a + root))
    return lam_minus, math.sqrt(m * m + 2.0 * (a + root))


def in_region_D(lam, m):
    """Diagonal dominance of the free resolvent, ``|T0(k)| >= |T1(k)|``."""
    _, n0, n1 = _t_norms(lam, m)
    return _scalar(n0 >= n1)


def bound_function(kind, m, p=None, q=None):
    """Return ``lam -> bound`` for the given kind with exactly one of ``p``/``q``."""
    kind = Kind(kind)
    if (p is None) == (q is None) and kind is not Kind.L1:
        raise BadExponent("give exactly one of p or q")
    if q is None and p is not None:
        q = conjugate_exponent(p)
    if kind is Kind.L1:
        return lambda lam: l1_prefactor(lam, m)
    if kind is Kind.STEIN:
        pp = p if p is not None else (1.0 / (1.0 - 1.0 / q) if q > 1 else math.inf)
        return lambda lam: g_p(lam, m, pp)
    if kind is Kind.YOUNG:
        return lambda lam: h_q(lam, m, q)
    if kind is Kind.YOUNG_HS:
        return lambda lam: f_q(lam, m, q)
    return lambda lam: psi_q(lam, m, q)
