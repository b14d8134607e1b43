"""Measurement strategies on M copies: analytic errors and Monte Carlo sampling.

Three strategies are supported:

* ``fixed_individual``: the same two-outcome POVM on every copy; decide H1
  unless every copy gave outcome 0.
* ``adaptive_local``: per-copy Helstrom measurement for the current posterior,
  Bayes update after each outcome, maximum-posterior decision (ties -> H0).
* ``collective``: the Helstrom measurement on the full tensor power.

Randomness comes from numpy's counter-based Philox generator keyed by the
seed, with the trial index placed in the counter. Every trial therefore owns
a fixed substream, and results do not depend on chunking or thread count.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import operators as ops
from .errors import DomainError
from .helstrom import BinaryEnsemble, Povm, helstrom_povm, optimal_discrimination
from .multicopy import exact_mcopy_error

KINDS = ("fixed_individual", "adaptive_local", "collective")
PROB_RENORM_TOL = 1e-9
_CHUNK = 4096


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    m_copies: int
    fixed_povm: Povm = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown strategy {self.kind!r}; expected one of {', '.join(KINDS)}")
        if int(self.m_copies) != self.m_copies or self.m_copies < 1:
            raise DomainError(f"m_copies must be a positive integer, got {self.m_copies}")
        if self.kind == "fixed_individual":
            if self.fixed_povm is None:
                raise DomainError("fixed_individual strategy requires a single-copy POVM")
            if len(self.fixed_povm) != 2:
                raise DomainError(
                    f"fixed_individual strategy requires a two-outcome POVM, got {len(self.fixed_povm)}"
                )
        elif self.fixed_povm is not None:
            raise DomainError(f"a fixed POVM only applies to fixed_individual, not {self.kind}")


@dataclass(frozen=True)
class SimulationConfig:
    ensemble: BinaryEnsemble
    trials: int
    seed: int

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SimulationReport:
    strategy: str
    m_copies: int
    empirical_error: float
    standard_error: float
    analytic_error: float
    trials: int
    seed: int
    errors: int

    def as_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# analytic values
# ---------------------------------------------------------------------------

def _check_outcome_probs(p):
    """Clamp to [0, 1] and renormalize small deviations."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    total = p.sum()
    if abs(total - 1.0) > PROB_RENORM_TOL:
        raise RuntimeError(f"outcome probabilities sum to {total!r}, not 1")
    return p / total


def fixed_individual_error(ensemble, povm, m):
    """Error of the fixed per-copy POVM with the "H1 unless all outcomes are 0" rule.

    ``prior0 (1 - Tr(rho0 E0)**m) + prior1 Tr(rho1 E0)**m``; for a pure rho0
    measured with its own projector this reduces to ``Tr(rho1 E0)**m / 2``.
    """
    if len(povm) != 2:
        raise DomainError(f"fixed_individual_error: expected a two-outcome POVM, got {len(povm)}")
    if povm.dim != ensemble.dim:
        raise DomainError("fixed_individual_error: POVM and states have different dimensions")
    m = int(m)
    if m < 1:
        raise DomainError(f"number of copies must be positive, got {m}")
    a = _check_outcome_probs(povm.probabilities(ensemble.rho0))[0]
    b = _check_outcome_probs(povm.probabilities(ensemble.rho1))[0]
    return float(ensemble.prior0 * (1.0 - a**m) + ensemble.prior1 * b**m)


def support_projector_povm(rho):
    """``{P, I - P}`` with ``P`` the support projector of ``rho``."""
    p = ops.fractional_power(rho, 0.0)
    return Povm((p, np.eye(p.shape[0]) - p))


def _posterior_povm(ensemble, pi0):
    gamma = (1.0 - pi0) * ensemble.rho1 - pi0 * ensemble.rho0
    e0, e1, _ = helstrom_povm(gamma)
    return e0, e1


def _likelihoods(ensemble, e0):
    """``Tr(rho_h E0)`` for h = 0, 1."""
    return (
        float(np.clip(np.trace(ensemble.rho0 @ e0).real, 0.0, 1.0)),
        float(np.clip(np.trace(ensemble.rho1 @ e0).real, 0.0, 1.0)),
    )


def _bayes(pi0, l0, l1):
    num = pi0 * l0
    den = num + (1.0 - pi0) * l1
    return pi0 if den == 0.0 else num / den


def adaptive_exact_error(ensemble, m):
    """Exact error of the adaptive Bayesian policy by enumerating outcome histories.

    Exponential in ``m``; intended as an oracle for the sampler.
    """
    m = int(m)
    if m < 1:
        raise DomainError(f"number of copies must be positive, got {m}")
    total = 0.0
    # (posterior pi0, P(history | H0), P(history | H1))
    frontier = [(ensemble.prior0, 1.0, 1.0)]
    for _ in range(m):
        nxt = []
        for pi0, w0, w1 in frontier:
            e0, _ = _posterior_povm(ensemble, pi0)
            a, b = _likelihoods(ensemble, e0)
            for l0, l1 in ((a, b), (1.0 - a, 1.0 - b)):
                if w0 * l0 == 0.0 and w1 * l1 == 0.0:
                    continue
                nxt.append((_bayes(pi0, l0, l1), w0 * l0, w1 * l1))
        frontier = nxt
    for pi0, w0, w1 in frontier:
        if 1.0 - pi0 > pi0:
            total += ensemble.prior0 * w0
        else:
            total += ensemble.prior1 * w1
    return float(total)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def trial_uniforms(seed, start, stop, width):
    """Uniforms in [0, 1) of shape ``(stop - start, width)``.

    Row ``i`` is drawn from Philox keyed by ``seed`` with the trial index
    ``start + i`` in the second counter word, so it depends only on
    ``(seed, trial)``.
    """
    out = np.empty((stop - start, width))
    for row, trial in enumerate(range(start, stop)):
        raw = np.random.Philox(key=int(seed), counter=[0, trial, 0, 0]).random_raw(width)
        out[row] = (raw >> np.uint64(11)) * (1.0 / 9007199254740992.0)
    return out


def _draw_hypotheses(u, prior0):
    return (u >= prior0).astype(np.int8)


def _fixed_chunk(ensemble, povm, m, u):
    truth = _draw_hypotheses(u[:, 0], ensemble.prior0)
    p_zero = np.array(
        [
            _check_outcome_probs(povm.probabilities(ensemble.rho0))[0],
            _check_outcome_probs(povm.probabilities(ensemble.rho1))[0],
        ]
    )
    outcomes = (u[:, 1 : m + 1] >= p_zero[truth][:, None]).astype(np.int8)
    decide = outcomes.any(axis=1).astype(np.int8)
    return int(np.sum(decide != truth))


def _collective_chunk(p_zero, prior0, u):
    truth = _draw_hypotheses(u[:, 0], prior0)
    decide = (u[:, 1] >= p_zero[truth]).astype(np.int8)
    return int(np.sum(decide != truth))


class _AdaptivePolicy:
    """Posterior-dependent measurement cached by outcome history."""

    def __init__(self, ensemble):
        self.ensemble = ensemble
        self._cache = {}

    def step(self, history, depth):
        key = (depth, history)
        hit = self._cache.get(key)
        if hit is None:
            pi0 = self.posterior(history, depth)
            e0, _ = _posterior_povm(self.ensemble, pi0)
            hit = _likelihoods(self.ensemble, e0)
            self._cache[key] = hit
        return hit

    def posterior(self, history, depth):
        if depth == 0:
            return self.ensemble.prior0
        key = ("post", depth, history)
        hit = self._cache.get(key)
        if hit is None:
            prev = history >> 1
            pi0 = self.posterior(prev, depth - 1)
            a, b = self.step(prev, depth - 1)
            if history & 1:
                hit = _bayes(pi0, 1.0 - a, 1.0 - b)
            else:
                hit = _bayes(pi0, a, b)
            self._cache[key] = hit
        return hit


def _adaptive_chunk(policy, m, u):
    ens = policy.ensemble
    truth = _draw_hypotheses(u[:, 0], ens.prior0)
    history = np.zeros(len(truth), dtype=np.int64)
    for depth in range(m):
        p_zero = np.empty(len(truth))
        for h in np.unique(history):
            a, b = policy.step(int(h), depth)
            sel = history == h
            p_zero[sel] = np.where(truth[sel] == 0, a, b)
        outcome = (u[:, depth + 1] >= p_zero).astype(np.int64)
        history = (history << 1) | outcome
    decide = np.empty(len(truth), dtype=np.int8)
    for h in np.unique(history):
        pi0 = policy.posterior(int(h), m)
        decide[history == h] = 1 if 1.0 - pi0 > pi0 else 0
    return int(np.sum(decide != truth))


def _collective_p_zero(ensemble, m, cap):
    big = BinaryEnsemble(
        ops.tensor_power(ensemble.rho0, m, cap),
        ops.tensor_power(ensemble.rho1, m, cap),
        ensemble.prior0,
        ensemble.prior1,
    )
    res = optimal_discrimination(big)
    return np.array(
        [
            _check_outcome_probs(res.povm.probabilities(big.rho0))[0],
            _check_outcome_probs(res.povm.probabilities(big.rho1))[0],
        ]
    ), res.error_probability


def simulate(strategy, config, threads=1, cap=None):
    """Monte Carlo estimate of a strategy's error probability.

    Trials are processed in fixed chunks; per-chunk error counts are summed,
    so the report is identical for any ``threads``.
    """
    ens = config.ensemble
    m = int(strategy.m_copies)
    if strategy.kind == "fixed_individual":
        if strategy.fixed_povm.dim != ens.dim:
            raise DomainError("fixed POVM and states have different dimensions")
        analytic = fixed_individual_error(ens, strategy.fixed_povm, m)
        width = m + 1

        def run(u):
            return _fixed_chunk(ens, strategy.fixed_povm, m, u)

    elif strategy.kind == "collective":
        ops.check_dim(ens.dim**m, cap)
        p_zero, analytic = _collective_p_zero(ens, m, cap)
        width = 2

        def run(u):
            return _collective_chunk(p_zero, ens.prior0, u)

    else:
        analytic = None
        width = m + 1
        if m > 62:
            raise DomainError(f"adaptive strategy supports at most 62 copies, got {m}")
        # cache entries are pure functions of their key, so concurrent fills agree
        policy = _AdaptivePolicy(ens)

        def run(u):
            return _adaptive_chunk(policy, m, u)

    bounds = [(s, min(s + _CHUNK, config.trials)) for s in range(0, config.trials, _CHUNK)]

    def work(b):
        return run(trial_uniforms(config.seed, b[0], b[1], width))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            errors = sum(pool.map(work, bounds))
    else:
        errors = sum(map(work, bounds))

    p_hat = errors / config.trials
    return SimulationReport(
        strategy=strategy.kind,
        m_copies=m,
        empirical_error=p_hat,
        standard_error=math.sqrt(p_hat * (1.0 - p_hat) / config.trials),
        analytic_error=analytic,
        trials=int(config.trials),
        seed=int(config.seed),
        errors=int(errors),
    )


def adaptive_local_error(config, m, threads=1):
    return simulate(StrategySpec("adaptive_local", m), config, threads=threads)


def collective_error(ensemble, m, cap=None):
    return exact_mcopy_error(ensemble, m, cap)
