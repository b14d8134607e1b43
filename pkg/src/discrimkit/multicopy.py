"""Collective discrimination of M identical copies and the standard error bounds.

All bounds here are the equal-prior forms: fidelity bounds, quantum
Bhattacharya bounds and the quantum Chernoff bound ``Q_min**M / 2`` with
``Q(s) = Tr(rho0**s rho1**(1-s))``.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import operators as ops
from .errors import DomainError
from .helstrom import BinaryEnsemble, optimal_discrimination

GOLDEN_TOL = 1e-8
#: ``Q_min`` at or below this counts as disjoint supports
DISJOINT_Q = 1e-14
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_UNIT_SNAP = 8 * np.finfo(float).eps


def golden_section_min(f, lo=0.0, hi=1.0, tol=GOLDEN_TOL):
    """Minimize a convex scalar function on ``[lo, hi]``.

    Returns ``(x, f(x))``. The endpoints are compared against the interior
    result so boundary minima are reported exactly.
    """
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    best = min([(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)])
    return best[1], best[0]


def _same_dim(rho0, rho1, name):
    if np.shape(rho0) != np.shape(rho1):
        raise DomainError(f"{name}: dimension mismatch {np.shape(rho0)} vs {np.shape(rho1)}")


def _require_copies(m):
    if int(m) != m or m < 1:
        raise DomainError(f"number of copies must be a positive integer, got {m}")
    return int(m)


def exact_mcopy_error(ensemble, m, cap=None):
    """Helstrom error on ``rho0**(⊗m)`` vs ``rho1**(⊗m)`` with the ensemble priors."""
    m = _require_copies(m)
    ops.check_dim(ensemble.dim**m, cap)
    big = BinaryEnsemble(
        ops.tensor_power(ensemble.rho0, m, cap),
        ops.tensor_power(ensemble.rho1, m, cap),
        ensemble.prior0,
        ensemble.prior1,
    )
    return optimal_discrimination(big).error_probability


def pure_mcopy_error(overlap_sq, m):
    """Closed form ``(1 - sqrt(1 - overlap_sq**m)) / 2`` for equal priors."""
    m = _require_copies(m)
    if not 0.0 <= overlap_sq <= 1.0:
        raise DomainError(f"overlap_sq must lie in [0, 1], got {overlap_sq}")
    return _lower_from(overlap_sq**m)


def chernoff_q(rho0, rho1, s):
    """``Tr(rho0**s rho1**(1-s))`` with the support convention at the endpoints."""
    _same_dim(rho0, rho1, "chernoff_q")
    a = ops.fractional_power(rho0, s)
    b = ops.fractional_power(rho1, 1.0 - s)
    return float(np.real(np.sum(a * b.T)))


def _chernoff_min(q):
    s_star, q_min = golden_section_min(q)
    if q_min <= DISJOINT_Q:
        return 0.0, s_star, math.inf
    q_min = min(q_min, 1.0)
    return q_min, s_star, max(-math.log(q_min), 0.0)


def quantum_chernoff(rho0, rho1):
    """Minimize ``Q(s)`` over ``s`` in [0, 1].

    Returns ``(q_min, s_star, exponent)`` with ``exponent = -log q_min``;
    disjoint supports give ``q_min = 0`` and ``exponent = math.inf``.
    """
    _same_dim(rho0, rho1, "quantum_chernoff")
    return _chernoff_min(lambda s: chernoff_q(rho0, rho1, s))


def classical_chernoff_exponent(p0, p1):
    """Chernoff exponent ``-log min_s sum p0**s p1**(1-s)`` of two distributions."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    for name, p in (("p0", p0), ("p1", p1)):
        if p.ndim != 1 or p.size == 0:
            raise DomainError(f"{name}: expected a non-empty probability vector")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise DomainError(f"{name}: not a probability distribution")
    if p0.shape != p1.shape:
        raise DomainError(f"distributions have different lengths {p0.size} and {p1.size}")
    both = (p0 > 0) & (p1 > 0)
    a, b = p0[both], p1[both]

    def q(s):
        # 0**s = 0 on [0, 1]: only the common support contributes
        return float(np.sum(a**s * b ** (1.0 - s)))

    return _chernoff_min(q)[2]


def qcb_bound(rho0, rho1, m):
    """Quantum Chernoff bound ``Q_min**m / 2`` on the m-copy error."""
    m = _require_copies(m)
    q_min, _, _ = quantum_chernoff(rho0, rho1)
    return 0.5 * q_min**m


def fidelity_bounds(rho0, rho1, m):
    m = _require_copies(m)
    _same_dim(rho0, rho1, "fidelity_bounds")
    f = ops.fidelity(rho0, rho1)
    return _bound_pair(f, m)


def bhattacharya_coefficient(rho0, rho1):
    """``Tr(sqrt(rho0) sqrt(rho1))``, equal to ``Q(1/2)``."""
    return chernoff_q(rho0, rho1, 0.5)


def bhattacharya_bounds(rho0, rho1, m):
    m = _require_copies(m)
    _same_dim(rho0, rho1, "bhattacharya_bounds")
    t = bhattacharya_coefficient(rho0, rho1)
    return _bound_pair(t * t, m)


def _lower_from(x):
    """``(1 - sqrt(1 - x)) / 2`` without cancellation for small ``x``."""
    return 0.5 * x / (1.0 + math.sqrt(max(1.0 - x, 0.0)))


def _bound_pair(f, m):
    f = min(max(f, 0.0), 1.0)
    # sqrt(1 - f**m) turns a round-off deficit of 1e-16 into 1e-8
    if f > 1.0 - _UNIT_SNAP:
        f = 1.0
    lower = _lower_from(f**m)
    upper = 0.5 * math.sqrt(f) ** m
    return lower, upper


@dataclass(frozen=True)
class BoundReport:
    m_copies: int
    exact_error: float
    fidelity_lower: float
    fidelity_upper: float
    bhattacharya_lower: float
    bhattacharya_upper: float
    qcb_upper: float
    chernoff_exponent: float
    optimal_s: float
    q_min: float
    fidelity: float

    def as_dict(self):
        return asdict(self)

    def rows(self):
        """``(name, value)`` pairs in a stable order; exact error omitted when absent."""
        return [(k, v) for k, v in self.as_dict().items() if v is not None]


def bound_report(ensemble, m, cap=None, require_exact=False):
    """All m-copy bounds for an equal-prior ensemble.

    ``exact_error`` is ``None`` when ``d**m`` exceeds the cap, unless
    ``require_exact`` is set, in which case the :class:`ResourceError` propagates.
    """
    m = _require_copies(m)
    if abs(ensemble.prior0 - 0.5) > 1e-12:
        raise DomainError("bound_report: the multi-copy bounds assume equal priors")
    rho0, rho1 = ensemble.rho0, ensemble.rho1
    exact = None
    if require_exact or ensemble.dim**m <= ops.dim_cap(cap):
        exact = exact_mcopy_error(ensemble, m, cap)
    f = ops.fidelity(rho0, rho1)
    fl, fu = _bound_pair(f, m)
    bl, bu = bhattacharya_bounds(rho0, rho1, m)
    q_min, s_star, exponent = quantum_chernoff(rho0, rho1)
    return BoundReport(
        m_copies=m,
        exact_error=exact,
        fidelity_lower=fl,
        fidelity_upper=fu,
        bhattacharya_lower=bl,
        bhattacharya_upper=bu,
        qcb_upper=0.5 * q_min**m,
        chernoff_exponent=exponent,
        optimal_s=s_star,
        q_min=q_min,
        fidelity=f,
    )

