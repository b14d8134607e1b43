import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from discrimkit import helstrom as hl
from discrimkit import multicopy as mc
from discrimkit import operators as ops
from discrimkit.errors import DomainError, ResourceError

from conftest import KET0, PLUS, RHO_A, RHO_B, proj

PURE_HALF = hl.BinaryEnsemble.from_pure(KET0, PLUS)
COMMUTING = hl.BinaryEnsemble(RHO_A, RHO_B)


def classical_map_error(p0, p1, m):
    """Bayes error of m i.i.d. trials by enumerating every outcome string."""
    total = 0.0
    for xs in itertools.product(range(len(p0)), repeat=m):
        a = math.prod(p0[x] for x in xs)
        b = math.prod(p1[x] for x in xs)
        total += 0.5 * min(a, b)
    return total


def grid_q_min(p0, p1, n=10_001):
    s = np.linspace(0, 1, n)[:, None]
    return float(np.min(np.sum(p0**s * p1 ** (1 - s), axis=1)))


# -- exact / closed form ------------------------------------------------------------

def test_exact_mcopy_examples():
    assert mc.exact_mcopy_error(PURE_HALF, 1) == pytest.approx(
        hl.optimal_discrimination(PURE_HALF).error_probability, abs=1e-14
    )
    assert mc.exact_mcopy_error(PURE_HALF, 2) == pytest.approx(0.5 * (1 - math.sqrt(0.75)), abs=1e-12)
    assert mc.exact_mcopy_error(PURE_HALF, 2) == pytest.approx(0.066987, abs=1e-6)
    same = hl.BinaryEnsemble(RHO_A, RHO_A)
    for m in (1, 2, 3):
        assert mc.exact_mcopy_error(same, m) == pytest.approx(0.5)


def test_exact_mcopy_resource_cap():
    with pytest.raises(ResourceError, match="8192"):
        mc.exact_mcopy_error(PURE_HALF, 13)
    assert mc.exact_mcopy_error(PURE_HALF, 3, cap=8) == pytest.approx(0.5 * (1 - math.sqrt(7 / 8)))
    with pytest.raises(ResourceError):
        mc.exact_mcopy_error(PURE_HALF, 4, cap=8)


def test_pure_mcopy_examples():
    assert mc.pure_mcopy_error(0.0, 5) == 0.0
    assert mc.pure_mcopy_error(0.5, 1) == pytest.approx(0.146447, abs=1e-6)
    exact = mc.pure_mcopy_error(0.5, 4)
    assert exact == pytest.approx(0.015877, abs=1e-6)
    approx = 0.25 * 0.5**4
    assert approx == 0.015625
    assert abs(exact - approx) / exact < 0.02


@settings(max_examples=100, deadline=None)
@given(ov=hst.floats(0, 1), m=hst.integers(1, 40))
def test_pure_mcopy_monotone(ov, m):
    assert mc.pure_mcopy_error(ov, m + 1) <= mc.pure_mcopy_error(ov, m) + 1e-15


def test_pure_mcopy_vanishes():
    assert mc.pure_mcopy_error(0.9, 500) < 1e-20


def test_exact_matches_closed_form(rng):
    for _ in range(10):
        psi0, psi1 = ops.random_pure(2, rng), ops.random_pure(2, rng)
        ens = hl.BinaryEnsemble.from_pure(psi0, psi1)
        ov2 = abs(np.vdot(psi0, psi1)) ** 2
        for m in (1, 2, 3):
            assert mc.exact_mcopy_error(ens, m) == pytest.approx(mc.pure_mcopy_error(ov2, m), abs=1e-10)


# -- chernoff -------------------------------------------------------------------------------

def test_chernoff_q_examples(rng):
    rho = ops.random_density(3, rng)
    for s in (0.0, 0.3, 1.0):
        assert mc.chernoff_q(rho, rho, s) == pytest.approx(1.0, abs=1e-12)
        assert mc.chernoff_q(proj(KET0), proj(PLUS), s) == pytest.approx(0.5, abs=1e-12)
    assert mc.chernoff_q(RHO_A, RHO_B, 0.5) == pytest.approx(2 * math.sqrt(0.1875), abs=1e-12)


def test_quantum_chernoff_examples(rng):
    rho = ops.random_density(2, rng)
    q, _, xi = mc.quantum_chernoff(rho, rho)
    assert q == pytest.approx(1.0, abs=1e-12)
    assert xi == pytest.approx(0.0, abs=1e-12)

    q, s, xi = mc.quantum_chernoff(RHO_A, RHO_B)
    assert q == pytest.approx(0.866025, abs=1e-6)
    assert s == pytest.approx(0.5, abs=1e-6)
    assert xi == pytest.approx(0.143841, abs=1e-6)

    q, _, xi = mc.quantum_chernoff(proj(KET0), proj(PLUS))
    assert q == pytest.approx(0.5, abs=1e-12)
    assert xi == pytest.approx(math.log(2), abs=1e-12)


def test_quantum_chernoff_disjoint_support():
    q, _, xi = mc.quantum_chernoff(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert q == 0.0
    assert xi == math.inf


def test_quantum_chernoff_against_grid(rng):
    for _ in range(5):
        r0, r1 = ops.random_density(3, rng), ops.random_density(3, rng)
        q, s, _ = mc.quantum_chernoff(r0, r1)
        grid = min(mc.chernoff_q(r0, r1, t) for t in np.linspace(0, 1, 201))
        assert q <= grid + 1e-12
        assert q == pytest.approx(mc.chernoff_q(r0, r1, s), abs=1e-14)


def test_q_convex_in_s(rng):
    grid = np.linspace(0, 1, 11)
    for _ in range(20):
        r0, r1 = ops.random_density(2, rng), ops.random_density(2, rng)
        q = {s: mc.chernoff_q(r0, r1, s) for s in grid}
        for a, b in itertools.combinations(grid, 2):
            for lam in (0.25, 0.5, 0.75):
                mid = lam * a + (1 - lam) * b
                assert mc.chernoff_q(r0, r1, mid) <= lam * q[a] + (1 - lam) * q[b] + 1e-9


def test_quantum_chernoff_symmetric(rng):
    for _ in range(20):
        r0, r1 = ops.random_density(3, rng), ops.random_density(3, rng)
        q01, s01, _ = mc.quantum_chernoff(r0, r1)
        q10, s10, _ = mc.quantum_chernoff(r1, r0)
        assert q01 == pytest.approx(q10, abs=1e-9)
        assert s01 == pytest.approx(1 - s10, abs=1e-4)


def test_classical_chernoff_examples():
    assert mc.classical_chernoff_exponent([0.3, 0.7], [0.3, 0.7]) == pytest.approx(0.0, abs=1e-12)
    assert mc.classical_chernoff_exponent([0.75, 0.25], [0.25, 0.75]) == pytest.approx(0.143841, abs=1e-6)
    assert mc.classical_chernoff_exponent([1, 0], [0, 1]) == math.inf
    with pytest.raises(DomainError):
        mc.classical_chernoff_exponent([0.5, 0.6], [0.5, 0.5])
    with pytest.raises(DomainError):
        mc.classical_chernoff_exponent([1.0], [0.5, 0.5])


def test_commuting_reduction(rng):
    for _ in range(20):
        p0, p1 = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        _, _, xi = mc.quantum_chernoff(np.diag(p0), np.diag(p1))
        assert xi == pytest.approx(mc.classical_chernoff_exponent(p0, p1), abs=1e-9)
        assert xi == pytest.approx(-math.log(grid_q_min(p0, p1)), abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(c=hst.floats(0.05, 0.95), k=hst.floats(0.1, 10))
def test_golden_section_on_parabola(c, k):
    x, fx = mc.golden_section_min(lambda t: k * (t - c) ** 2 + 1.0)
    assert x == pytest.approx(c, abs=1e-7)
    assert fx == pytest.approx(1.0, abs=1e-12)


def test_golden_section_boundary_minimum():
    assert mc.golden_section_min(lambda t: t)[0] == 0.0
    assert mc.golden_section_min(lambda t: -t)[0] == 1.0


# -- bounds -------------------------------------------------------------------------------

def test_qcb_examples():
    assert mc.qcb_bound(RHO_A, RHO_A, 1) == pytest.approx(0.5)
    assert mc.qcb_bound(proj(KET0), proj(PLUS), 3) == pytest.approx(0.0625, abs=1e-12)
    # exact 3-copy error from the closed form, below the QCB
    exact3 = mc.pure_mcopy_error(0.5, 3)
    assert exact3 == pytest.approx(0.0322928, abs=1e-7)
    assert exact3 <= 0.0625
    assert mc.qcb_bound(RHO_A, RHO_B, 2) == pytest.approx(0.375, abs=1e-9)
    with pytest.raises(DomainError):
        mc.qcb_bound(RHO_A, RHO_B, 0)


def test_fidelity_bounds_examples():
    assert mc.fidelity_bounds(RHO_A, RHO_A, 3) == pytest.approx((0.5, 0.5))
    lo, _ = mc.fidelity_bounds(proj(KET0), proj(PLUS), 1)
    assert lo == pytest.approx(0.146447, abs=1e-6)
    assert lo == pytest.approx(mc.exact_mcopy_error(PURE_HALF, 1), abs=1e-12)
    lo, hi = mc.fidelity_bounds(RHO_A, RHO_B, 2)
    assert lo == pytest.approx(0.5 * (1 - math.sqrt(1 - 0.5625)), abs=1e-12)
    assert lo == pytest.approx(0.169, abs=1e-3)
    assert hi == pytest.approx(0.375, abs=1e-12)


def test_fidelity_lower_equals_exact_for_pure(rng):
    for _ in range(10):
        psi0, psi1 = ops.random_pure(2, rng), ops.random_pure(2, rng)
        ens = hl.BinaryEnsemble.from_pure(psi0, psi1)
        for m in (1, 2, 3):
            lo, _ = mc.fidelity_bounds(ens.rho0, ens.rho1, m)
            assert lo == pytest.approx(mc.exact_mcopy_error(ens, m), abs=1e-10)


def test_bhattacharya_examples(rng):
    p = proj(PLUS)
    assert mc.bhattacharya_bounds(p, p, 2) == pytest.approx((0.5, 0.5), abs=1e-12)
    t = mc.bhattacharya_coefficient(RHO_A, RHO_B)
    assert t == pytest.approx(0.866025, abs=1e-6)
    assert t == pytest.approx(mc.chernoff_q(RHO_A, RHO_B, 0.5), abs=1e-15)
    for _ in range(100):
        r0, r1 = ops.random_density(2, rng), ops.random_density(2, rng)
        assert mc.bhattacharya_coefficient(r0, r1) <= math.sqrt(ops.fidelity(r0, r1)) + 1e-9
        for m in (1, 2):
            assert mc.bhattacharya_bounds(r0, r1, m)[1] <= mc.fidelity_bounds(r0, r1, m)[1] + 1e-9


def _check_report(rep):
    assert rep.fidelity_lower <= rep.exact_error + 1e-9
    assert rep.exact_error <= rep.qcb_upper + 1e-9
    assert rep.exact_error <= rep.bhattacharya_upper + 1e-9
    assert rep.exact_error <= rep.fidelity_upper + 1e-9
    assert rep.bhattacharya_upper <= rep.fidelity_upper + 1e-9
    assert rep.chernoff_exponent >= 0
    assert 0 <= rep.optimal_s <= 1


def test_bound_report_examples(rng):
    _check_report(mc.bound_report(PURE_HALF, 2))
    rep = mc.bound_report(hl.BinaryEnsemble(RHO_A, RHO_A), 2)
    for v in (rep.exact_error, rep.fidelity_lower, rep.fidelity_upper, rep.qcb_upper, rep.bhattacharya_upper):
        assert v == pytest.approx(0.5, abs=1e-9)
    assert rep.chernoff_exponent == pytest.approx(0.0, abs=1e-12)
    rep = mc.bound_report(COMMUTING, 3)
    assert rep.exact_error == pytest.approx(classical_map_error([0.75, 0.25], [0.25, 0.75], 3), abs=1e-12)
    assert rep.exact_error == pytest.approx(0.15625, abs=1e-12)
    _check_report(rep)


def test_bound_report_commuting_matches_enumeration(rng):
    for _ in range(5):
        p0, p1 = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        rep = mc.bound_report(hl.BinaryEnsemble(np.diag(p0), np.diag(p1)), 3)
        assert rep.exact_error == pytest.approx(classical_map_error(p0, p1, 3), abs=1e-12)


def test_bound_report_cap_behaviour():
    rep = mc.bound_report(PURE_HALF, 13)
    assert rep.exact_error is None
    assert "exact_error" not in dict(rep.rows())
    with pytest.raises(ResourceError):
        mc.bound_report(PURE_HALF, 13, require_exact=True)


def test_bound_report_requires_equal_priors():
    with pytest.raises(DomainError, match="equal priors"):
        mc.bound_report(hl.BinaryEnsemble(RHO_A, RHO_B, 0.3), 2)


@pytest.mark.parametrize("d", [2, 3])
def test_ordering_chain(rng, d):
    for _ in range(30):
        ens = hl.BinaryEnsemble(ops.random_density(d, rng), ops.random_density(d, rng))
        for m in (1, 2, 3):
            _check_report(mc.bound_report(ens, m))


def test_exponential_rate_trend():
    rates = [-math.log(mc.exact_mcopy_error(PURE_HALF, m)) / m for m in range(1, 7)]
    gaps = [r - math.log(2) for r in rates]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    # P_e ~ 2**-M / 4 leaves a log(4)/M offset at finite M
    for m, g in zip(range(1, 7), gaps):
        assert g == pytest.approx(math.log(4) / m, abs=0.5 / m)


def test_exponential_rate_large_m():
    for m in (30, 60, 200):
        rate = -math.log(mc.pure_mcopy_error(0.5, m)) / m
        assert abs(rate - math.log(2)) <= 0.05
        assert rate == pytest.approx(math.log(2) + math.log(4) / m, abs=1e-9)


def test_pure_mcopy_small_values_accurate():
    x = 0.5**60
    assert mc.pure_mcopy_error(0.5, 60) == pytest.approx(x / 4 * (1 + x / 4), rel=1e-14)
