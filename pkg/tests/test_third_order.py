import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsk import DiskGrid, KernelParams
from bsk.errors import DegenerateDenominatorError, DegenerateTargetError, DomainError
from bsk.kernel import eval_series
from bsk.targets import DilatedTarget, FunctionTarget, MobiusTarget, PolynomialTarget, identity_target
from bsk.third_order import (
    AdmissibilityProbe,
    BetaQuadruple,
    admissibility_check,
    admissible_betas,
    beta_transforms,
    chain_identities_residuals,
    eval_g,
    g_recurrence_residual,
    image_dominance,
    inverse_beta,
    make_probe,
    numeric_dominance,
)

complexes = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


# -- g and its recurrence -----------------------------------------------------------


def test_eval_g_examples(pinned):
    assert eval_g(0.5, 0.5) == pytest.approx(math.expm1(0.5), abs=1e-14)
    assert eval_g(3.0, 0.0) == 0
    assert eval_g(2.0, 0.3) == 0.3 * eval_series(KernelParams(2.0), 0.3)
    assert np.allclose(eval_g(1.2, pinned), pinned * eval_series(KernelParams(1.2), pinned), rtol=0, atol=1e-15)


@pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0, 3.0])
def test_g_recurrence_pinned(alpha, pinned):
    assert np.max(np.abs(g_recurrence_residual(alpha, pinned))) <= 1e-10


def test_g_recurrence_examples():
    assert abs(g_recurrence_residual(1.5, 0.4 + 0.2j)) < 1e-10
    assert g_recurrence_residual(2.0, 0.0) == 0
    assert abs(g_recurrence_residual(1.0, 0.9)) < 1e-9
    with pytest.raises(DomainError):
        g_recurrence_residual(0.5, 0.1)


# -- chain identities ----------------------------------------------------------------


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0])
def test_chain_identities(alpha, pinned):
    r = chain_identities_residuals(alpha, pinned)
    assert max(np.max(np.abs(x)) for x in r) <= 1e-8


def test_chain_examples():
    assert all(abs(x) < 1e-8 for x in chain_identities_residuals(2.5, 0.3))
    assert all(x == 0 for x in chain_identities_residuals(3.0, 0.0))
    assert all(abs(x) < 1e-8 for x in chain_identities_residuals(2.5, 0.6j))


def test_chain_printed_coefficients_diagnostic(pinned):
    # first step agrees; the second and third as typeset do not vanish
    r = chain_identities_residuals(3.0, pinned, variant="printed")
    assert np.max(np.abs(r.r1)) <= 1e-10
    assert np.max(np.abs(r.r2)) > 1e-4
    assert np.max(np.abs(r.r3)) > 1e-4


def test_chain_domain():
    with pytest.raises(DomainError):
        chain_identities_residuals(1.5, 0.2)


# -- beta maps -------------------------------------------------------------------


def test_beta_examples():
    q = beta_transforms(1, 0, 0, 0, 2.0)
    assert q.as_tuple() == pytest.approx((1, 1, 0.625, 0.3125), abs=1e-15)
    assert q.source == (1, 0, 0, 0, 2.0)
    assert beta_transforms(0, 0, 0, 0, 2.0).as_tuple() == (0, 0, 0, 0)
    assert inverse_beta(BetaQuadruple(0, 0, 0, 0), 2.0) == (0, 0, 0, 0)
    assert inverse_beta(q, 2.0) == pytest.approx((1, 0, 0, 0), abs=1e-13)


def test_beta_against_linear_solve():
    a = 2.0
    mat = np.array([beta_transforms(*e, a).as_tuple() for e in np.eye(4)]).T
    rng = np.random.default_rng(3)
    for _ in range(10):
        beta = rng.normal(size=4)
        expect = np.linalg.solve(mat, beta)
        got = inverse_beta(BetaQuadruple(*beta), a)
        assert np.allclose(got, expect, rtol=1e-12, atol=1e-12)


def test_round_trip_random_quadruples():
    rng = np.random.default_rng(11)
    # back substitution multiplies by 8a(a^2 - 1), so the bound grows with alpha
    for alpha, tol in ((3.0, 1e-12), (7.5, 1e-11), (1.2, 1e-12)):
        for _ in range(100):
            x = rng.normal(size=4) + 1j * rng.normal(size=4)
            back = np.array(inverse_beta(beta_transforms(*x, alpha), alpha))
            assert np.max(np.abs(back - x)) <= tol * max(1.0, np.max(np.abs(x)))


@settings(max_examples=60, deadline=None)
@given(st.lists(complexes, min_size=8, max_size=8), complexes, complexes, st.floats(1.05, 20.0))
def test_beta_linearity(v, a, b, alpha):
    x, y = np.array(v[:4]), np.array(v[4:])
    lhs = np.array(beta_transforms(*(a * x + b * y), alpha).as_tuple())
    rhs = a * np.array(beta_transforms(*x, alpha).as_tuple()) + b * np.array(beta_transforms(*y, alpha).as_tuple())
    scale = 1.0 + np.max(np.abs(a * x)) + np.max(np.abs(b * y))
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * scale * 100  # forward map entries are O(10) at most


def test_printed_inverse_discrepancy():
    q = beta_transforms(1, 0, 0, 0, 2.0)
    printed = inverse_beta(q, 2.0, variant="printed")
    assert printed == pytest.approx((1, 0, 30, 906), abs=1e-12)
    # s = 2(a+1)(b2-b1) is twice the consistent value
    q = beta_transforms(0, 1, 0, 0, 2.0)
    assert inverse_beta(q, 2.0, variant="printed")[1] == pytest.approx(2.0)
    assert inverse_beta(q, 2.0)[1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        inverse_beta(q, 2.0, variant="other")


def test_beta_alpha_domain():
    with pytest.raises(DomainError):
        beta_transforms(1, 0, 0, 0, 1.0)


# -- admissibility -----------------------------------------------------------------


def test_probe_validation():
    with pytest.raises(DomainError):
        AdmissibilityProbe(1, 1, 0, 0, 0.5, 2, 2.0)
    with pytest.raises(DomainError):
        AdmissibilityProbe(1, 1, 0, 0, 1.0, 1.5, 2.0)
    with pytest.raises(DomainError):
        AdmissibilityProbe(1, 1, 0, 0, 1.0, 2, 1.0)
    with pytest.raises(DomainError):
        make_probe(MobiusTarget(1, -1), complex(math.cos(1e-8), math.sin(1e-8)), 2, 2.0)


def test_admissibility_identity_example():
    probe = make_probe(identity_target(), 1.0, 2, 2.0)
    b1, b2 = admissible_betas(probe)
    assert b1 == 1 and b2 == pytest.approx(5 / 3)
    q = BetaQuadruple(b1, b2, 0.7, 0.1)
    cond = admissibility_check(probe, q)
    assert cond.cond1


@pytest.mark.parametrize("theta", [0.0, 1.0, 2.5, -2.0])
def test_cond2_rhs_is_m_for_identity(theta):
    # q'' = 0 so the right side of cond2 is m; pick t to sit exactly on it
    zeta = complex(math.cos(theta), math.sin(theta))
    m, a = 3.0, 2.5
    probe = make_probe(identity_target(), zeta, m, a)
    b1, b2 = admissible_betas(probe)
    s = 2 * (a + 1) * (b2 - b1)
    for t_over_s, expected in ((m - 1.0 + 1e-9, True), (m - 1.0 - 1e-9, False)):
        t = t_over_s * s
        b3 = (t - 8 * a * (a + 1) * b2 + (4 * a * a + 8 * a + 1) * b1) / (4 * a * (a + 1))
        assert admissibility_check(probe, BetaQuadruple(b1, b2, b3, 0)).cond2 is expected


def test_cond3_variants_differ_for_cubic_curvature():
    q = PolynomialTarget((0, 1, 0, 0.2))
    probe = make_probe(q, 1.0, 2, 2.0)
    b1, b2 = admissible_betas(probe)
    s = 2 * (2.0 + 1) * (b2 - b1)
    # choose u so that Re(u/s) = 1: above the q'' reading (q''(1) = 1.2), below the q''' one
    assert probe.d2q == pytest.approx(1.2) and probe.d3q == pytest.approx(1.2)
    # u enters through beta4 only
    def quad_with(u_over_s):
        a = 2.0
        t = 0.0
        u = u_over_s * s
        b3 = (t - 8 * a * (a + 1) * b2 + (4 * a * a + 8 * a + 1) * b1) / (4 * a * (a + 1))
        b4 = (u + 4 * a * (a + 1) * (6 * a - 1) * b3 - 2 * (a + 1) * (36 * a * a - 12 * a - 1) * b2
              - (40 * a**3 + 16 * a * a - 18 * a - 6) * b1) / (8 * a * (a * a - 1))
        return BetaQuadruple(b1, b2, b3, b4)

    rhs_printed = 4 * (probe.d2q / probe.dq).real
    assert admissibility_check(probe, quad_with(rhs_printed + 1e-6)).cond3
    assert not admissibility_check(probe, quad_with(rhs_printed - 1e-6)).cond3
    rhs_third = 4 * (probe.d3q / probe.dq).real
    assert admissibility_check(probe, quad_with(rhs_third + 1e-6), variant="third_derivative").cond3


def test_admissibility_degenerate():
    probe = make_probe(identity_target(), 1.0, 2, 2.0)
    with pytest.raises(DegenerateDenominatorError):
        admissibility_check(probe, BetaQuadruple(1, 1, 0, 0))
    flat = AdmissibilityProbe(0, 0, 1, 0, 1.0, 2, 2.0)
    with pytest.raises(DegenerateDenominatorError):
        admissibility_check(flat, BetaQuadruple(1, 2, 0, 0))


# -- targets -------------------------------------------------------------------------


def test_target_derivatives():
    z = np.array([0.3 + 0.1j, -0.5j])
    mob = MobiusTarget(0.8, -0.4)
    fd = FunctionTarget(lambda w: (0.8 + 0.4) * w / (1 - 0.4 * w))
    for k, tol in ((1, 1e-9), (2, 1e-7), (3, 1e-5)):
        assert np.allclose(mob.derivative(z, k), fd.derivative(z, k), rtol=tol, atol=0)
    dil = DilatedTarget(PolynomialTarget((0, 1, 1)), 0.5)
    assert np.allclose(dil(z), 0.5 * z + 0.25 * z * z)
    assert np.allclose(dil.derivative(z, 1), 0.5 + 0.5 * z)
    with pytest.raises(DomainError):
        MobiusTarget(-1, -1)


# -- dominance --------------------------------------------------------------------


def test_dominance_stubs(default_grid):
    inside = image_dominance(lambda z: z, identity_target(2.0), default_grid)
    assert inside.dominated and inside.min_margin == pytest.approx(1.0, abs=2e-3)
    outside = image_dominance(lambda z: 2 * z, identity_target(), default_grid)
    assert not outside.dominated and outside.min_margin < 0


def test_scaled_self_target(default_grid):
    alpha = 1.5
    bound = 1.1 * np.max(np.abs(eval_g(alpha + 1, default_grid.points)))
    res = numeric_dominance(alpha, identity_target(bound), default_grid)
    assert res.dominated and res.min_margin > 0


def test_scaling_monotone():
    grid = DiskGrid(16, 32)
    base = numeric_dominance(2.0, MobiusTarget(1, -1), grid)
    assert base.dominated
    for c in (1.5, 3.0):
        q = FunctionTarget(lambda w, c=c: c * MobiusTarget(1, -1)(w), exceptional=(-1 + 0j,))
        res = numeric_dominance(2.0, q, grid)
        assert res.dominated and res.min_margin >= base.min_margin - 1e-9


def test_dominance_rejects_bad_targets():
    grid = DiskGrid(8, 16)
    with pytest.raises(DegenerateTargetError):
        numeric_dominance(2.0, PolynomialTarget((0, 1, 2)), grid)
    with pytest.raises(DomainError):
        numeric_dominance(2.0, PolynomialTarget((1, 1)), grid)
    with pytest.raises(DomainError):
        numeric_dominance(1.0, identity_target(), grid)


def test_dilated_target_dominance():
    grid = DiskGrid(16, 32)
    res = numeric_dominance(1.5, identity_target(5.0).dilated(0.5), grid)
    assert res.dominated
