"""Hermitian linear algebra on finite-dimensional density operators.

Matrices are plain complex ``numpy`` arrays. The ``validate_*`` helpers check
the invariants of density operators and pure states and return a clean
complex copy; everything else assumes validated input.
"""
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError, ValidationError

#: relative eigenvalue cutoff below which an eigenvalue counts as zero
EIG_CUTOFF = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12

DEFAULT_DIM_CAP = 4096
DIM_CAP_ENV = "DISCRIMKIT_DIM_CAP"


def dim_cap(override=None):
    """Largest dense dimension allowed for tensor powers.

    An explicit ``override`` wins, then the ``DISCRIMKIT_DIM_CAP`` environment
    variable, then :data:`DEFAULT_DIM_CAP`.
    """
    if override is not None:
        return int(override)
    env = os.environ.get(DIM_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{DIM_CAP_ENV} must be an integer, got {env!r}")
    return DEFAULT_DIM_CAP


def check_dim(dim, cap=None):
    cap = dim_cap(cap)
    if dim > cap:
        raise ResourceError(
            f"dimension {dim} exceeds the dimension cap {cap} "
            f"(raise it with {DIM_CAP_ENV})",
            size=dim,
        )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def as_matrix(a, name="matrix"):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValidationError(f"{name}: expected a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name}: entries must be finite")
    return m


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(float(np.max(np.abs(a))), 1.0) if a.size else 1.0
    return float(np.max(np.abs(a - a.conj().T))) <= tol * scale


def hermitize(a):
    return 0.5 * (a + a.conj().T)


def validate_density(rho, name="state"):
    """Check the density-operator invariants and return a Hermitian copy.

    Raises :class:`ValidationError` naming the first failing check
    ("square", "Hermitian", "unit trace" or "positive semidefinite").
    """
    m = as_matrix(rho, name)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name}: density operator must be square, got shape {m.shape}")
    if not is_hermitian(m):
        raise ValidationError(f"{name}: density operator is not Hermitian")
    m = hermitize(m)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"{name}: density operator violates unit trace (trace = {tr:.12g})")
    lmin = float(np.linalg.eigvalsh(m)[0])
    if lmin < -PSD_TOL:
        raise ValidationError(
            f"{name}: density operator is not positive semidefinite (min eigenvalue {lmin:.3g})"
        )
    return m


def validate_pure(psi, name="pure state"):
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError(f"{name}: amplitudes must be a non-empty vector")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name}: amplitudes must be finite")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValidationError(f"{name}: pure state violates unit norm (<psi|psi> = {norm2:.12g})")
    return v


def pure_to_density(psi):
    v = np.asarray(psi, dtype=complex)
    return np.outer(v, v.conj())


# ---------------------------------------------------------------------------
# spectral tools
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) with eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projector(self, mask):
        """Orthogonal projector onto the span of the selected eigenvectors."""
        v = self.eigenvectors[:, np.asarray(mask, dtype=bool)]
        return v @ v.conj().T

    def cutoff(self):
        """Absolute threshold separating numerical noise from real eigenvalues."""
        top = float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0
        return EIG_CUTOFF * top


def spectral_decompose(a):
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"spectral_decompose: matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("spectral_decompose: entries must be finite")
    if not is_hermitian(m):
        raise DomainError("spectral_decompose: matrix is not Hermitian")
    w, v = np.linalg.eigh(hermitize(m))
    return SpectralDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def trace_norm(a):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(spectral_decompose(a).eigenvalues)))


def fractional_power(rho, s):
    """``rho**s`` on the support of ``rho`` for ``0 <= s <= 1``.

    Eigenvalues below the relative cutoff are dropped, so ``s = 0`` yields the
    projector onto the support of ``rho``.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"fractional_power: exponent must lie in [0, 1], got {s}")
    sd = spectral_decompose(rho)
    keep = sd.eigenvalues > sd.cutoff()
    lam = sd.eigenvalues[keep]
    v = sd.eigenvectors[:, keep]
    return (v * lam**s) @ v.conj().T


def fidelity(rho0, rho1):
    """Uhlmann fidelity ``[Tr sqrt(sqrt(rho0) rho1 sqrt(rho0))]**2``.

    Evaluated as the squared trace norm of ``sqrt(rho0) sqrt(rho1)`` (sum of
    singular values), which avoids square roots of round-off eigenvalues.
    """
    rho0 = np.asarray(rho0)
    rho1 = np.asarray(rho1)
    if rho0.shape != rho1.shape:
        raise DomainError(f"fidelity: dimension mismatch {rho0.shape} vs {rho1.shape}")
    x = fractional_power(rho0, 0.5) @ fractional_power(rho1, 0.5)
    root_f = float(np.sum(np.linalg.svd(x, compute_uv=False)))
    return min(root_f**2, 1.0)


# ---------------------------------------------------------------------------
# composite systems
# ---------------------------------------------------------------------------

def tensor_power(rho, m, cap=None):
    """``rho`` tensored with itself ``m`` times; copy 1 is the most significant factor."""
    if int(m) != m or m < 1:
        raise DomainError(f"tensor_power: number of copies must be a positive integer, got {m}")
    rho = np.asarray(rho, dtype=complex)
    check_dim(rho.shape[0] ** int(m), cap)
    out = rho
    for _ in range(int(m) - 1):
        out = np.kron(out, rho)
    return out


def partial_trace(rho_ab, dims, trace_out="B"):
    """Trace out subsystem ``"A"`` or ``"B"`` of a bipartite operator."""
    da, db = (int(x) for x in dims)
    rho_ab = np.asarray(rho_ab, dtype=complex)
    if rho_ab.shape != (da * db, da * db):
        raise DomainError(
            f"partial_trace: dims {da}x{db} do not factor a {rho_ab.shape[0]}-dimensional operator"
        )
    t = rho_ab.reshape(da, db, da, db)
    if trace_out == "B":
        return np.einsum("ijkj->ik", t)
    if trace_out == "A":
        return np.einsum("ijil->jl", t)
    raise DomainError(f"partial_trace: subsystem must be 'A' or 'B', got {trace_out!r}")


# ---------------------------------------------------------------------------
# standard states and samplers
# ---------------------------------------------------------------------------

def basis_ket(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def plus_ket():
    return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


def minus_ket():
    return np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)


def maximally_entangled(d):
    """``(1/sqrt d) sum_i |i>|i>`` as a vector of length ``d**2``."""
    return np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)


def maximally_mixed(d):
    return np.eye(d, dtype=complex) / d


def random_density(d, rng):
    """Ginibre sample ``G G^dagger / Tr(G G^dagger)``."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return hermitize(rho / np.trace(rho).real)


def random_pure(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_unitary(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
