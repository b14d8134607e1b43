import numpy as np
import pytest

from discrimkit import operators as ops

KET0 = ops.basis_ket(0, 2)
KET1 = ops.basis_ket(1, 2)
PLUS = ops.plus_ket()
RHO_A = np.diag([0.75, 0.25]).astype(complex)
RHO_B = np.diag([0.25, 0.75]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def proj(psi):
    return ops.pure_to_density(psi)
