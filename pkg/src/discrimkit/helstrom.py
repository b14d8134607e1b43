"""Single-copy binary state discrimination.

Minimum-error (Helstrom) measurement, the Bayes average cost of an arbitrary
strategy, and zero-error (unambiguous) discrimination of two pure states.
"""
from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .errors import DomainError, ValidationError

PRIOR_TOL = 1e-12
POVM_TOL = 1e-10
UNAMBIGUOUS_TOL = 1e-10


@dataclass(frozen=True)
class BinaryEnsemble:
    """Two hypotheses ``rho0``/``rho1`` with prior probabilities.

    ``prior1`` defaults to ``1 - prior0``. Both states are validated on
    construction.
    """

    rho0: np.ndarray
    rho1: np.ndarray
    prior0: float = 0.5
    prior1: float = None

    def __post_init__(self):
        rho0 = ops.validate_density(self.rho0, "rho0")
        rho1 = ops.validate_density(self.rho1, "rho1")
        if rho0.shape != rho1.shape:
            raise ValidationError(
                f"ensemble: states have different dimensions {rho0.shape[0]} and {rho1.shape[0]}"
            )
        p0 = float(self.prior0)
        p1 = 1.0 - p0 if self.prior1 is None else float(self.prior1)
        if not (0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0):
            raise ValidationError(f"ensemble: priors must lie in [0, 1], got ({p0}, {p1})")
        if abs(p0 + p1 - 1.0) > PRIOR_TOL:
            raise ValidationError(f"ensemble: priors must sum to 1, got {p0} + {p1}")
        object.__setattr__(self, "rho0", rho0)
        object.__setattr__(self, "rho1", rho1)
        object.__setattr__(self, "prior0", p0)
        object.__setattr__(self, "prior1", p1)

    @property
    def dim(self):
        return self.rho0.shape[0]

    @classmethod
    def from_pure(cls, psi0, psi1, prior0=0.5):
        psi0 = ops.validate_pure(psi0, "psi0")
        psi1 = ops.validate_pure(psi1, "psi1")
        return cls(ops.pure_to_density(psi0), ops.pure_to_density(psi1), prior0)

    def swapped(self):
        return BinaryEnsemble(self.rho1, self.rho0, self.prior1, self.prior0)

    def state(self, h):
        return self.rho1 if h else self.rho0


@dataclass(frozen=True)
class Povm:
    """Positive operators, one per outcome label, summing to the identity."""

    elements: tuple

    def __post_init__(self):
        els = tuple(ops.hermitize(ops.as_matrix(e, "POVM element")) for e in self.elements)
        if not els:
            raise ValidationError("POVM: needs at least one element")
        d = els[0].shape[0]
        for k, e in enumerate(els):
            if e.shape != (d, d):
                raise ValidationError(f"POVM: element {k} has shape {e.shape}, expected {(d, d)}")
            lmin = float(np.linalg.eigvalsh(e)[0])
            if lmin < -POVM_TOL:
                raise ValidationError(
                    f"POVM: element {k} is not positive semidefinite (min eigenvalue {lmin:.3g})"
                )
        resid = np.max(np.abs(sum(els) - np.eye(d)))
        if resid > POVM_TOL:
            raise ValidationError(f"POVM: elements do not sum to the identity (residual {resid:.3g})")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)

    @property
    def dim(self):
        return self.elements[0].shape[0]

    def probabilities(self, rho):
        """Outcome probabilities ``Tr(rho E_k)``."""
        return np.array([np.trace(rho @ e).real for e in self.elements])


@dataclass(frozen=True)
class DiscriminationResult:
    error_probability: float
    povm: Povm
    type1_error: float
    type2_error: float
    gamma_eigenvalues: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class UnambiguousResult:
    povm: Povm
    q0: float
    q1: float
    inconclusive_probability: float
    clamped: bool = False


def helstrom_matrix(ensemble):
    """``prior1 * rho1 - prior0 * rho0``."""
    return ensemble.prior1 * ensemble.rho1 - ensemble.prior0 * ensemble.rho0


def helstrom_povm(gamma):
    """Two-outcome measurement deciding outcome 1 on the positive part of ``gamma``.

    Eigenvectors whose eigenvalue lies within the cutoff of zero go to outcome 0.
    Returns ``(E0, E1, eigenvalues)``.
    """
    sd = ops.spectral_decompose(gamma)
    positive = sd.eigenvalues > sd.cutoff()
    e1 = sd.projector(positive)
    e0 = sd.projector(~positive)
    return e0, e1, sd.eigenvalues


def optimal_discrimination(ensemble):
    """Minimum-error measurement for a binary ensemble.

    The error probability is ``(1 - ||Gamma||_1) / 2``; the type I/II errors
    are recomputed from the constructed projectors.
    """
    gamma = helstrom_matrix(ensemble)
    e0, e1, lam = helstrom_povm(gamma)
    pe = 0.5 * (1.0 - float(np.sum(np.abs(lam))))
    pe = min(max(pe, 0.0), 0.5)
    t1 = float(np.trace(ensemble.rho0 @ e1).real)
    t2 = float(np.trace(ensemble.rho1 @ e0).real)
    return DiscriminationResult(pe, Povm((e0, e1)), t1, t2, lam)


def error_probability(ensemble, povm):
    """Average error ``prior0 Tr(rho0 E1) + prior1 Tr(rho1 E0)`` of a two-outcome POVM."""
    if len(povm) != 2:
        raise DomainError(f"error_probability: expected a two-outcome POVM, got {len(povm)} outcomes")
    e0, e1 = povm.elements
    return float(
        ensemble.prior0 * np.trace(ensemble.rho0 @ e1).real
        + ensemble.prior1 * np.trace(ensemble.rho1 @ e0).real
    )


def pure_state_error(psi0, psi1, prior0=0.5):
    psi0 = ops.validate_pure(psi0, "psi0")
    psi1 = ops.validate_pure(psi1, "psi1")
    if psi0.shape != psi1.shape:
        raise DomainError("pure_state_error: states have different dimensions")
    if prior0 == 0.5:
        ov2 = min(abs(np.vdot(psi0, psi1)) ** 2, 1.0)
        return 0.5 * ov2 / (1.0 + np.sqrt(1.0 - ov2))
    ens = BinaryEnsemble.from_pure(psi0, psi1, prior0)
    return optimal_discrimination(ens).error_probability


def average_cost(states, priors, costs, povm):
    """Bayes average cost ``sum_ab prior_a C_ab Tr(rho_a E_b)``.

    With ``C_ab = 1 - delta_ab`` this is the average error probability.
    """
    priors = np.asarray(priors, dtype=float)
    costs = np.asarray(costs, dtype=float)
    n = len(states)
    if priors.shape != (n,):
        raise DomainError(f"average_cost: {n} states but {priors.size} priors")
    if costs.shape != (n, n):
        raise DomainError(f"average_cost: cost matrix must be {n}x{n}, got {costs.shape}")
    if len(povm) != n:
        raise DomainError(f"average_cost: POVM has {len(povm)} outcomes for {n} hypotheses")
    if abs(priors.sum() - 1.0) > PRIOR_TOL:
        raise DomainError(f"average_cost: priors must sum to 1, got {priors.sum()}")
    probs = np.array([povm.probabilities(rho) for rho in states])
    return float(np.sum(priors[:, None] * costs * probs))


def bayes_costs(n):
    return 1.0 - np.eye(n)


# ---------------------------------------------------------------------------
# unambiguous discrimination
# ---------------------------------------------------------------------------

def _unambiguous_elements(psi0, psi1, q0, q1):
    """Zero-error elements with success probabilities ``q0``, ``q1``."""
    s = np.vdot(psi0, psi1)
    w = 1.0 - abs(s) ** 2
    perp1 = psi0 - np.vdot(psi1, psi0) * psi1
    perp0 = psi1 - s * psi0
    perp1 = perp1 / np.linalg.norm(perp1)
    perp0 = perp0 / np.linalg.norm(perp0)
    e0 = (q0 / w) * np.outer(perp1, perp1.conj())
    e1 = (q1 / w) * np.outer(perp0, perp0.conj())
    e2 = np.eye(psi0.size) - e0 - e1
    return e0, e1, e2


def _min_eig(a):
    return float(np.linalg.eigvalsh(ops.hermitize(a))[0])


def _largest_feasible(make_e2, tol=1e-14):
    """Largest ``q`` in [0, 1] keeping ``E2(q)`` positive semidefinite (bisection)."""
    if _min_eig(make_e2(1.0)) >= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _min_eig(make_e2(mid)) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def _failure(a, b, overlap):
    """``sqrt(a / b) * overlap`` with ``b = 0`` mapped to infinity."""
    if overlap == 0.0:
        return 0.0
    if b == 0.0:
        return np.inf
    return np.sqrt(a / b) * overlap


def unambiguous_discrimination(psi0, psi1, prior0=0.5):
    """Three-outcome zero-error measurement for two pure states.

    The failure (inconclusive) probabilities per hypothesis are
    ``sqrt(prior1/prior0)|<psi0|psi1>|`` and ``sqrt(prior0/prior1)|<psi0|psi1>|``.
    When one of them exceeds 1 the corresponding success probability is set
    to zero and the other is pushed to the edge of the feasible region, found
    by bisection on the smallest eigenvalue of the inconclusive element.
    """
    psi0 = ops.validate_pure(psi0, "psi0")
    psi1 = ops.validate_pure(psi1, "psi1")
    if psi0.shape != psi1.shape:
        raise DomainError("unambiguous_discrimination: states have different dimensions")
    p0 = float(prior0)
    if not 0.0 <= p0 <= 1.0:
        raise DomainError(f"unambiguous_discrimination: prior0 must lie in [0, 1], got {p0}")
    p1 = 1.0 - p0
    overlap = float(abs(np.vdot(psi0, psi1)))
    if overlap >= 1.0 - 1e-12:
        raise DomainError("states not unambiguously distinguishable (overlap 1)")

    f0 = _failure(p1, p0, overlap)
    f1 = _failure(p0, p1, overlap)
    clamped = False
    if f0 <= 1.0 and f1 <= 1.0:
        q0, q1 = 1.0 - f0, 1.0 - f1
        if _min_eig(_unambiguous_elements(psi0, psi1, q0, q1)[2]) < -UNAMBIGUOUS_TOL:
            clamped = True
    else:
        clamped = True
    if clamped:
        if f1 > f0:
            q1 = 0.0
            q0 = _largest_feasible(lambda q: _unambiguous_elements(psi0, psi1, q, 0.0)[2])
        else:
            q0 = 0.0
            q1 = _largest_feasible(lambda q: _unambiguous_elements(psi0, psi1, 0.0, q)[2])

    povm = Povm(_unambiguous_elements(psi0, psi1, q0, q1))
    p_inc = p0 * (1.0 - q0) + p1 * (1.0 - q1)
    return UnambiguousResult(povm, float(q0), float(q1), float(p_inc), clamped)
