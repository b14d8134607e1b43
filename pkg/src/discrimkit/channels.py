"""Binary discrimination of quantum channels given as Kraus operators.

A probe state is sent through one of two channels and the outputs are
discriminated with the Helstrom measurement (equal priors). Probes may be
single-system or bipartite, with the channel acting on the first factor.
The probe searches are multi-start hill climbs over pure states; their
result is a lower bound on the optimal distinguishability (for the extended
search, on the diamond norm).
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .errors import DomainError, ValidationError

TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple
    name: str = field(default="channel", compare=False)

    def __post_init__(self):
        ks = tuple(ops.as_matrix(k, f"{self.name} Kraus operator") for k in self.kraus_ops)
        if not ks:
            raise ValidationError(f"{self.name}: needs at least one Kraus operator")
        shape = ks[0].shape
        for i, k in enumerate(ks):
            if k.shape != shape:
                raise ValidationError(
                    f"{self.name}: Kraus operator {i} has shape {k.shape}, expected {shape}"
                )
        resid = np.max(np.abs(sum(k.conj().T @ k for k in ks) - np.eye(shape[1])))
        if resid > TP_TOL:
            raise ValidationError(
                f"{self.name}: Kraus operators violate trace preservation (residual {resid:.3g})"
            )
        object.__setattr__(self, "kraus_ops", ks)

    @property
    def dim_in(self):
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus_ops[0].shape[0]

    def superoperator(self, ancilla_dim=1):
        """Matrix of ``rho -> (Phi ⊗ id)(rho)`` acting on row-major ``vec(rho)``."""
        eye = np.eye(ancilla_dim)
        out = 0
        for k in self.kraus_ops:
            kk = np.kron(k, eye)
            out = out + np.kron(kk, kk.conj())
        return out


@dataclass(frozen=True)
class ProbeResult:
    probe: np.ndarray
    error_probability: float
    used_ancilla: bool
    norm: float
    heuristic: bool = False
    history: tuple = ()


@dataclass(frozen=True)
class SearchConfig:
    starts: int = 32
    seed: int = 0
    initial_step: float = 0.5
    min_step: float = 1e-7
    improvement_tol: float = 1e-9
    max_sweeps: int = 20000
    threads: int = 1


# ---------------------------------------------------------------------------
# channel construction and action
# ---------------------------------------------------------------------------

def identity_channel(d):
    return KrausChannel((np.eye(d),), name=f"identity({d})")


def unitary_channel(u, name="unitary"):
    return KrausChannel((np.asarray(u, dtype=complex),), name=name)


def weyl_operators(d):
    """Clock-and-shift unitaries ``X**j Z**k`` for ``j, k`` in ``range(d)``."""
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [
        np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k)
        for j in range(d)
        for k in range(d)
    ]


def depolarizing_channel(d):
    """Completely depolarizing channel ``rho -> I/d`` with Kraus set ``W_jk / d``."""
    if int(d) != d or d < 2:
        raise DomainError(f"depolarizing_channel: dimension must be an integer >= 2, got {d}")
    return KrausChannel(tuple(w / d for w in weyl_operators(int(d))), name=f"depolarizing({d})")


def random_channel(d, n_kraus, rng):
    """Kraus operators cut from a random isometry."""
    g = rng.standard_normal((d * n_kraus, d)) + 1j * rng.standard_normal((d * n_kraus, d))
    q, _ = np.linalg.qr(g)
    return KrausChannel(tuple(q[i * d : (i + 1) * d] for i in range(n_kraus)), name="random")


def apply(channel, rho):
    """``sum_k K rho K^dagger``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim_in, channel.dim_in):
        raise DomainError(
            f"{channel.name}: input dimension {rho.shape[0]} does not match channel input {channel.dim_in}"
        )
    return ops.hermitize(sum(k @ rho @ k.conj().T for k in channel.kraus_ops))


def apply_extended(channel, rho_ab, dims):
    """``(Phi ⊗ id)(rho_ab)`` with the channel on subsystem A."""
    da, db = (int(x) for x in dims)
    rho_ab = np.asarray(rho_ab, dtype=complex)
    if da != channel.dim_in:
        raise DomainError(
            f"{channel.name}: subsystem A has dimension {da}, channel input is {channel.dim_in}"
        )
    if rho_ab.shape != (da * db, da * db):
        raise DomainError(f"probe of shape {rho_ab.shape} does not factor as {da}x{db}")
    eye = np.eye(db)
    out = 0
    for k in channel.kraus_ops:
        kk = np.kron(k, eye)
        out = out + kk @ rho_ab @ kk.conj().T
    return ops.hermitize(out)


def _check_pair(phi0, phi1):
    if phi0.dim_in != phi1.dim_in or phi0.dim_out != phi1.dim_out:
        raise DomainError(
            f"channels act on different spaces: {phi0.dim_in}->{phi0.dim_out} "
            f"vs {phi1.dim_in}->{phi1.dim_out}"
        )


def _check_prior(prior0):
    if prior0 != 0.5:
        raise DomainError("channel discrimination uses equal priors; skewed priors are not supported")


def discriminate_with_probe(phi0, phi1, probe, extended=False, dims=None, prior0=0.5):
    """Helstrom error ``(1 - ||out0 - out1||_1 / 2) / 2`` for a given probe.

    With ``extended`` the probe is bipartite of shape ``dims = (dA, dB)``;
    ``dims`` defaults to ``(d, size // d)``.
    """
    _check_prior(prior0)
    _check_pair(phi0, phi1)
    probe = ops.validate_density(probe, "probe")
    if extended:
        if dims is None:
            d = phi0.dim_in
            if probe.shape[0] % d:
                raise DomainError(f"probe dimension {probe.shape[0]} is not a multiple of {d}")
            dims = (d, probe.shape[0] // d)
        out0 = apply_extended(phi0, probe, dims)
        out1 = apply_extended(phi1, probe, dims)
    else:
        out0 = apply(phi0, probe)
        out1 = apply(phi1, probe)
    norm = ops.trace_norm(out0 - out1)
    pe = min(max(0.5 * (1.0 - 0.5 * norm), 0.0), 0.5)
    return ProbeResult(probe, pe, bool(extended), norm)


# ---------------------------------------------------------------------------
# probe search
# ---------------------------------------------------------------------------

class _NormObjective:
    """``||(Delta ⊗ id)(|psi><psi|)||_1`` for the channel difference ``Delta``."""

    def __init__(self, phi0, phi1, ancilla_dim):
        self.delta = phi0.superoperator(ancilla_dim) - phi1.superoperator(ancilla_dim)
        self.n = phi0.dim_in * ancilla_dim
        self.n_out = phi0.dim_out * ancilla_dim

    def state(self, x):
        n = self.n
        psi = x[:n] * np.exp(1j * x[n:])
        return psi / np.linalg.norm(psi)

    def __call__(self, x):
        psi = self.state(x)
        rho = np.outer(psi, psi.conj()).reshape(-1)
        diff = (self.delta @ rho).reshape(self.n_out, self.n_out)
        return float(np.sum(np.abs(np.linalg.eigvalsh(ops.hermitize(diff)))))


def _hill_climb(f, x, cfg):
    """Coordinate-wise pattern search on amplitudes and phases."""
    best = f(x)
    step = cfg.initial_step
    for _ in range(cfg.max_sweeps):
        start = best
        for i in range(x.size):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sign * step
                val = f(trial)
                if val > best:
                    x, best = trial, val
                    break
        if best - start < cfg.improvement_tol:
            step *= 0.5
            if step < cfg.min_step:
                break
    return x, best


def _initial_point(rng, n):
    psi = ops.random_pure(n, rng)
    return np.concatenate([np.abs(psi), np.angle(psi)])


def _point_from_state(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.concatenate([np.abs(psi), np.angle(psi)])


def _search(phi0, phi1, ancilla_dim, cfg, seeds):
    _check_pair(phi0, phi1)
    if cfg.starts < 1:
        raise DomainError(f"search needs at least one start, got {cfg.starts}")
    f = _NormObjective(phi0, phi1, ancilla_dim)
    starts = list(seeds)
    for k in range(cfg.starts):
        starts.append(_initial_point(np.random.default_rng([cfg.seed, k]), f.n))

    def run(x0):
        return _hill_climb(f, x0, cfg)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x0) for x0 in starts]

    history = []
    best_idx, best_val = 0, -np.inf
    for idx, (_, val) in enumerate(results):
        if val > best_val:
            best_idx, best_val = idx, val
        history.append(best_val)
    psi = f.state(results[best_idx][0])
    return psi, best_val, tuple(history)


def best_unentangled_probe(phi0, phi1, search_config=None):
    """Best single-system pure probe found by multi-start search (heuristic)."""
    cfg = search_config or SearchConfig()
    psi, norm, history = _search(phi0, phi1, 1, cfg, [])
    pe = min(max(0.5 * (1.0 - 0.5 * norm), 0.0), 0.5)
    return ProbeResult(ops.pure_to_density(psi), pe, False, norm, True, history)


def best_entangled_probe(phi0, phi1, ancilla_dim=None, search_config=None):
    """Best pure bipartite probe found by multi-start search (heuristic).

    The achieved norm is a certified lower bound on the diamond norm of
    ``phi0 - phi1``. The best unentangled probe (with the ancilla in ``|0>``)
    seeds the search, so the result is never worse than the unentangled one.
    """
    cfg = search_config or SearchConfig()
    _check_pair(phi0, phi1)
    db = phi0.dim_in if ancilla_dim is None else int(ancilla_dim)
    if db < 1:
        raise DomainError(f"ancilla dimension must be >= 1, got {db}")
    single = best_unentangled_probe(phi0, phi1, cfg)
    psi_a = np.linalg.eigh(single.probe)[1][:, -1]
    seed = _point_from_state(np.kron(psi_a, ops.basis_ket(0, db)))
    psi, norm, history = _search(phi0, phi1, db, cfg, [seed])
    pe = min(max(0.5 * (1.0 - 0.5 * norm), 0.0), 0.5)
    return ProbeResult(ops.pure_to_density(psi), pe, True, norm, True, history)
