import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqlax import correspondence as corr
from cqlax import jets as J
from cqlax.errors import DomainExit, FamilyMismatch, TrajectoryBlowup, WindowError, ZeroDenominator
from cqlax.fields import ScalarField, constant
from cqlax.laxpair import (MatrixField, assemble_lax, catalog_pair, classical_potential, gauge_matrix, gauge_reduce,
                           ho_trajectory_exact, integrate_newton, quantum_potential, quantum_shift, zcc_residual)
from cqlax.laxpair.matrix import LaxPairBundle, richardson_dt

HO = {"omega": 1.0, "l": 1.0}
PIV = {"alpha": 1.0, "beta": -0.5}
PV = {"sigma": 0.25, "xi": 0.125, "zeta": 0.125}


def ho_traj(n=2001, E=3.0, l=1.0, w=1.0):
    return ho_trajectory_exact(E, l, w, np.linspace(0.0, math.pi, n))


# ----------------------------------------------------------------- gauge
def generic_pair():
    def U(X, t):
        return [[X * t, X * X + 1.0 + t], [J.sin(X), -X * t]]

    def V(X, t):
        return [[t + 0 * X, X * t * t], [1.0 + 0 * X, -t + 0 * X]]

    return MatrixField(U, "Ut"), MatrixField(V, "Vt")


def fd_x(fn, x, t, h=1e-5):
    return (fn(x + h, t) - fn(x - h, t)) / (2 * h)


def fd_t(fn, x, t, h=1e-5):
    return (fn(x, t + h) - fn(x, t - h)) / (2 * h)


def test_gauge_reduce_matches_transformation_law():
    Ut, Vt = generic_pair()
    U, V = gauge_reduce(Ut, Vt, dt_fd=1e-3)
    x = np.linspace(0.3, 2.0, 9)
    t = np.linspace(0.1, 0.9, 9)
    T = gauge_matrix(Ut, x, t)
    Ti = np.linalg.inv(T)
    Tx = fd_x(lambda a, b: gauge_matrix(Ut, a, b), x, t)
    Tt = fd_t(lambda a, b: gauge_matrix(Ut, a, b), x, t)
    # psi = T phi
    np.testing.assert_allclose(U(x, t), Ti @ Ut(x, t) @ T - Ti @ Tx, atol=1e-8)
    np.testing.assert_allclose(V(x, t), Ti @ Vt(x, t) @ T - Ti @ Tt, atol=1e-7)


def test_gauge_reduce_structure():
    Ut, Vt = generic_pair()
    U, V = gauge_reduce(Ut, Vt)
    x, t = np.linspace(0.3, 2.0, 5), np.full(5, 0.4)
    M, N = U(x, t), V(x, t)
    np.testing.assert_allclose(M[..., 0, 0], 0.0, atol=1e-14)
    np.testing.assert_allclose(M[..., 1, 1], 0.0, atol=1e-14)
    np.testing.assert_allclose(M[..., 0, 1], Ut(x, t)[..., 0, 1])
    np.testing.assert_allclose(N[..., 0, 0] + N[..., 1, 1], 0.0, atol=1e-14)


def test_gauge_reduce_guards_zero_entry():
    Ut = MatrixField(lambda X, t: [[X, X - 1.0], [X, -X]])
    U, _ = gauge_reduce(Ut, Ut)
    with pytest.raises(ZeroDenominator):
        U(np.array([1.0]), np.array([0.0]))


def test_zcc_is_gauge_covariant_for_catalog_pair():
    tr = ho_traj()
    pair = catalog_pair("ho", HO, tr)
    U, V = gauge_reduce(pair.U, pair.V, dt_fd=1e-4)
    red = LaxPairBundle(U, V, tr)
    x = np.linspace(0.5, 4.0, 20)
    r = zcc_residual(red, x, (0.3, 2.5), 1e-4, n_t=9, locus_margin=0.1)
    assert r.max_abs < 1e-5


def test_richardson_is_fourth_order():
    f = np.sin
    errs = [abs(richardson_dt(f, 0.7, h) - math.cos(0.7)) for h in (0.1, 0.05)]
    assert 14 < errs[0] / errs[1] < 18


# --------------------------------------------------------------- catalog
@pytest.mark.parametrize("fam,params,ic,span", [
    ("ho", HO, (0.0, 1.2, 0.3), (0.0, 1.0)),
    ("piv", PIV, (0.5, 0.8, 0.0), (0.49, 1.51)),
    ("pv", PV, (0.0, 1.0, 0.0), (0.0, 0.16)),
])
def test_catalog_pairs_are_traceless(fam, params, ic, span):
    t0, u0, v0 = ic
    tr = integrate_newton(fam, params, u0, v0, span, 1e-3, t_initial=t0)
    p = catalog_pair(fam, params, tr)
    x = np.linspace(0.6, 1.9, 7)
    t = np.linspace(span[0] + 0.02, span[1] - 0.02, 7)
    for M in (p.U(x, t), p.V(x, t)):
        np.testing.assert_allclose(M[..., 0, 0] + M[..., 1, 1], 0.0, atol=1e-12)


def test_catalog_rejects_family_mismatch():
    tr = ho_traj(11)
    with pytest.raises(FamilyMismatch):
        catalog_pair("piv", PIV, tr)
    with pytest.raises(FamilyMismatch):
        catalog_pair("ho", {"omega": 2.0, "l": 1.0}, tr)


def test_ho_catalog_zcc_small_and_perturbation_visible():
    tr = ho_traj()
    x = np.linspace(0.5, 4.0, 30)
    r = zcc_residual(catalog_pair("ho", HO, tr), x, (0.2, 2.8), 3e-5, n_t=11, locus_margin=0.1)
    rp = zcc_residual(catalog_pair("ho", HO, tr.scaled(1.01)), x, (0.2, 2.8), 3e-5, n_t=11, locus_margin=0.1)
    assert r.max_abs < 1e-6
    assert rp.max_abs > 1e3 * r.max_abs


@settings(max_examples=10)
@given(st.floats(0.8, 1.5), st.floats(0.3, 1.5), st.floats(1.05, 2.0))
def test_ho_catalog_zcc_property(w, l, ratio):
    E = ratio * l * w
    tr = ho_trajectory_exact(E, l, w, np.linspace(0.0, math.pi / w, 801))
    pair = catalog_pair("ho", {"omega": w, "l": l}, tr)
    r = zcc_residual(pair, np.linspace(0.4, 3.0, 12), (0.1, math.pi / w - 0.1), 1e-4, n_t=7, locus_margin=0.1)
    assert r.max_rel < 1e-6


def test_zcc_window_must_fit_trajectory():
    tr = ho_traj(11)
    with pytest.raises(WindowError):
        zcc_residual(catalog_pair("ho", HO, tr), np.linspace(1, 2, 3), (0.0, 1.0), 1e-3)


def test_zcc_constant_commuting_pair():
    M = np.diag([2.0, -2.0])
    pair = LaxPairBundle(MatrixField.constant(M), MatrixField.constant(3 * M))
    r = zcc_residual(pair, np.linspace(0, 1, 5), (0.0, 1.0), n_t=3)
    assert r.max_abs == 0.0


def test_zcc_noncommuting_pair_by_hand():
    Um = np.array([[0, 1], [0, 0]], complex)
    V = MatrixField(lambda X, t: [[X, 0 * X], [0 * X, -X]])
    pair = LaxPairBundle(MatrixField.constant(Um), V)
    # Z = -V_x + [U, V] = -diag(1, -1) + [[0, -2x], [0, 0]]
    x = np.array([0.5, 1.5])
    r = zcc_residual(pair, x, (0.0, 1.0), n_t=2)
    np.testing.assert_allclose(r.norms[0], np.sqrt(2 + 4 * x ** 2), rtol=1e-14)


# -------------------------------------------------------------- assembly
def test_assembled_pair_matches_ho_catalog():
    tr = ho_traj(11)
    b = corr.BSplit(corr.square_field(), corr.square_field("u^2"))
    asm = assemble_lax(b, corr.ho_quantum_potential(1.0, 1.0, 3.0), tr)
    cat = catalog_pair("ho", HO, tr)
    rng = np.random.default_rng(7)
    x = rng.uniform(0.5, 4.0, 200)
    t = rng.uniform(0.0, math.pi, 200)
    u, _ = tr.state(t)
    keep = np.abs(x * x - u * u) > 0.1
    x, t = x[keep], t[keep]
    np.testing.assert_allclose(asm.U(x, t), cat.U(x, t), atol=1e-9, rtol=1e-10)
    np.testing.assert_allclose(asm.V(x, t), cat.V(x, t), atol=1e-9, rtol=1e-10)


def test_assembled_exponential_b1_by_hand():
    tr = ho_traj(11)
    zero = constant(0.0, (0, math.inf))
    b1 = ScalarField(lambda X: J.exp(X), (0, math.inf), "e^x")
    Vq = ScalarField(lambda X: X * X, (0, math.inf))
    asm = assemble_lax(corr.BSplit(b1, zero), Vq, tr)
    x, t = np.linspace(0.2, 2.0, 6), np.full(6, 0.5)
    U, V = asm.U(x, t), asm.V(x, t)
    ex = np.exp(x)
    alpha = 2 * (x * x - 0.25) / ex
    np.testing.assert_allclose(V[..., 0, 0], -0.25j, atol=1e-15)
    np.testing.assert_allclose(V[..., 0, 1], 0.5j * ex, rtol=1e-14)
    np.testing.assert_allclose(U[..., 0, 1], ex, rtol=1e-14)
    np.testing.assert_allclose(U[..., 1, 0], alpha, rtol=1e-13)
    np.testing.assert_allclose(V[..., 1, 0], 0.5j * alpha, rtol=1e-13)


def test_assemble_guards_b_locus():
    tr = ho_traj(11)
    b = corr.BSplit(corr.square_field(), corr.square_field("u^2"))
    asm = assemble_lax(b, corr.ho_quantum_potential(1.0, 1.0, 3.0), tr)
    u, _ = tr.state(np.array([0.5]))
    with pytest.raises(ZeroDenominator):
        asm.U(u, np.array([0.5]))


# ----------------------------------------------------------- trajectories
def test_integrate_newton_matches_exact_ho():
    ex = ho_trajectory_exact(3.0, 1.0, 1.0, np.linspace(0, 2, 5))
    u0, v0 = ex.state(np.array(0.0))
    tr = integrate_newton("ho", HO, float(u0), float(v0), (0.0, 2.0), 1e-3)
    u, ud = ex.state(tr.t)
    assert np.max(np.abs(tr.u - u)) < 1e-8
    assert np.max(np.abs(tr.udot - ud)) < 1e-8
    assert tr.energy_drift() < 1e-10
    assert tr.newton_residual() < 1e-6


def test_integrate_newton_cosine():
    tr = integrate_newton("ho", {"omega": 1.0, "l": 0.0}, 1.0, 0.0, (0.0, 3.0), 1e-3)
    np.testing.assert_allclose(tr.u, np.cos(tr.t), atol=1e-11)


def test_integrate_newton_two_sided():
    tr = integrate_newton("ho", {"omega": 1.0, "l": 0.0}, 1.0, 0.0, (-1.0, 1.0), 1e-3, t_initial=0.0)
    assert tr.t[0] == pytest.approx(-1.0) and tr.t[-1] == pytest.approx(1.0)
    assert np.all(np.diff(tr.t) > 0)
    np.testing.assert_allclose(tr.u, np.cos(tr.t), atol=1e-11)


def test_hermite_interpolation_between_samples():
    tr = integrate_newton("ho", {"omega": 1.0, "l": 0.0}, 1.0, 0.0, (0.0, 2.0), 1e-2)
    t = np.linspace(0.003, 1.997, 37)
    u, ud = tr.state(t)
    np.testing.assert_allclose(u, np.cos(t), atol=1e-9)
    np.testing.assert_allclose(ud, -np.sin(t), atol=1e-8)


def test_trajectory_errors():
    with pytest.raises(DomainExit):
        integrate_newton("ho", HO, -1.0, 0.0, (0, 1), 1e-2)
    with pytest.raises(TrajectoryBlowup):
        integrate_newton("piv", PIV, 3.0, 0.0, (0, 2), 1e-3, bound=1e3)
    with pytest.raises(WindowError):
        ho_traj(11).state(np.array([4.0]))
    with pytest.raises(ValueError):
        integrate_newton("ho", HO, 1.0, 0.0, (0, 1), 0.0)
    with pytest.raises(FamilyMismatch):
        classical_potential("morse", {})


def test_exact_trajectory_is_stationary_at_threshold():
    tr = ho_trajectory_exact(1.0, 1.0, 1.0, np.linspace(0, 1, 5))
    np.testing.assert_allclose(tr.u, 1.0)
    np.testing.assert_allclose(tr.udot, 0.0)


def test_exact_trajectory_on_energy_shell():
    tr = ho_traj(101, E=2.5, l=0.7, w=1.3)
    np.testing.assert_allclose(tr.energy(), 2.5, rtol=1e-13)


# ------------------------------------------------------- quantum shifts
Q = np.linspace(0.3, 2.0, 9)


def test_piv_quantum_shift():
    d = quantum_potential("piv", PIV)(Q, 0.4) - classical_potential("piv", PIV)(Q, 0.4)
    np.testing.assert_allclose(d, 1 / (8 * Q ** 2), rtol=1e-12)


def test_ho_quantum_shift():
    d = quantum_potential("ho", HO)(Q) - classical_potential("ho", HO)(Q)
    np.testing.assert_allclose(d, -1 / (8 * Q ** 2), rtol=1e-12)


def test_pv_quantum_shift():
    d = quantum_potential("pv", PV)(Q, 0.1) - classical_potential("pv", PV)(Q, 0.1)
    np.testing.assert_allclose(d, -1 / (8 * np.cosh(Q) ** 2) + 1 / (8 * np.sinh(Q) ** 2), rtol=1e-11)


def test_quantum_shift_map_and_aliases():
    assert quantum_shift("Painleve-IV")({"beta": 1.0}) == {"beta": 1.5}


@pytest.mark.parametrize("fam,params", [("ho", HO), ("piv", PIV), ("pv", PV)])
def test_potential_gradient_matches_fd(fam, params):
    V = classical_potential(fam, params)
    h = 1e-6
    np.testing.assert_allclose(V.dq(Q, 0.3), (V(Q + h, 0.3) - V(Q - h, 0.3)) / (2 * h), rtol=1e-6)


# ------------------------------------------------- further worked examples
def test_gauge_reduce_identity_on_canonical_input():
    def U(X, t):
        return [[0 * X, X * X + 1.0], [J.sin(X) * t, 0 * X]]

    def V(X, t):
        return [[X * t, X + 0 * X], [t + 0 * X, -X * t]]

    Uc, Vc = MatrixField(U), MatrixField(V)
    Ur, Vr = gauge_reduce(Uc, Vc)
    x, t = np.linspace(0.2, 2, 7), np.linspace(0.1, 0.7, 7)
    np.testing.assert_allclose(Ur(x, t), Uc(x, t), atol=1e-15)
    np.testing.assert_allclose(Vr(x, t), Vc(x, t), atol=1e-15)


def test_piv_gauge_covariance():
    tr = integrate_newton("piv", PIV, 0.8, 0.0, (0.49, 1.51), 1e-3, t_initial=0.5)
    pair = catalog_pair("piv", PIV, tr)
    U, V = gauge_reduce(pair.U, pair.V, dt_fd=1e-3)
    red = LaxPairBundle(U, V, tr)
    from cqlax.laxpair import zcc_matrix
    x = np.linspace(0.5, 2.0, 8)
    t = np.linspace(0.6, 1.4, 8)
    Z0, _ = zcc_matrix(pair, x, t, 1e-3)
    Z1, _ = zcc_matrix(red, x, t, 1e-3)
    T = gauge_matrix(pair.U, x, t)
    np.testing.assert_allclose(Z1, np.linalg.inv(T) @ Z0 @ T, atol=1e-7)


def test_exact_trajectory_newton_residual_and_period():
    t = np.linspace(0.0, 2 * math.pi, 4001)
    tr = ho_trajectory_exact(4.0, 1.0, 1.0, t)
    # u^2 = E - r sin 2t  =>  u u'' = 2 r sin 2t - u'^2
    r = math.sqrt(15.0)
    udd = (2 * r * np.sin(2 * t) - tr.udot ** 2) / tr.u
    assert np.max(np.abs(udd - 1.0 / tr.u ** 3 + tr.u)) < 1e-9
    assert tr.newton_residual() < 1e-6
    u2 = tr.u ** 2
    np.testing.assert_allclose(np.interp(t[:2000] + math.pi, t, u2), u2[:2000], atol=1e-6)


def test_rk4_energy_drift_one_period():
    ex = ho_trajectory_exact(3.0, 1.0, 1.0, np.linspace(0, 1, 3))
    u0, v0 = ex.state(np.array(0.0))
    tr = integrate_newton("ho", HO, float(u0), float(v0), (0.0, math.pi), 1e-3)
    assert tr.energy_drift() < 1e-9
