import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from cqlax import evolve as ev
from cqlax.errors import DomainError, ZeroDenominator
from cqlax.laxpair import ho_trajectory_exact

X = np.linspace(0.2, 4.0, 40)


# ---------------------------------------------------------- stationary
def test_chi_low_orders():
    l, w = 1.5, 1.2
    g = np.exp(-w * X ** 2 / 2) * X ** (l + 0.5)
    np.testing.assert_allclose(ev.chi(0, l, w, X), g, rtol=1e-14)
    np.testing.assert_allclose(ev.chi(1, l, w, X), g * (l + 1 - w * X ** 2), rtol=1e-12)
    np.testing.assert_array_equal(ev.chi(-1, l, w, X), 0.0)


def test_chi_rejects_nonpositive_x():
    with pytest.raises(DomainError):
        ev.chi(0, 1.0, 1.0, np.array([0.0]))


@pytest.mark.parametrize("n,l,w", [(0, 0.0, 1.0), (2, 1.0, 1.0), (3, 2.5, 0.7)])
def test_chi_norm_matches_quadrature(n, l, w):
    val, _ = quad(lambda x: float(ev.chi(n, l, w, np.array([x]))[0]) ** 2, 1e-12, 40, limit=200)
    assert ev.chi_norm2(n, l, w) == pytest.approx(val, rel=1e-9)


@given(st.integers(0, 5), st.floats(0.0, 3.0), st.floats(0.4, 2.0))
def test_stationary_residual_property(n, l, w):
    x = np.linspace(0.2, 5.0 / math.sqrt(w), 30)
    assert ev.stationary_residual(n, l, w, x).max_rel < 1e-9


@given(st.integers(0, 4), st.floats(0.0, 3.0), st.floats(0.5, 2.0), st.floats(1.05, 3.0))
def test_recurrence_identities_property(n, l, w, ratio):
    E = max(ratio * l * w, 0.5 * w)
    r = ev.recurrence_identities(n, l, w, X, E, np.linspace(0, 3, 25))
    for key in ("i", "ii", "iii", "iv"):
        assert r[key].max_rel < 1e-10, key


def test_recurrence_identities_without_time():
    assert set(ev.recurrence_identities(1, 1.0, 1.0, X)) == {"i", "ii"}


# -------------------------------------------------------------- two-term
@pytest.mark.parametrize("n,l", [(n, l) for n in range(3) for l in range(3)])
def test_two_term_solution(n, l):
    s = ev.two_term_solution(n, l, 1.0)
    assert s.E == pytest.approx(2 * n + l + 2)
    assert s.ratio == pytest.approx(-1j * math.sqrt(n + 1) / math.sqrt(n + l + 1))
    assert s.E1 < s.E < s.E2
    assert s.energies[n] == pytest.approx(-1.0) and s.energies[n + 1] == pytest.approx(1.0)
    cs = ev.coefficient_system(s.coefficients, s.E, n + 3, l, 1.0)
    for v in cs.values():
        assert np.max(np.abs(v)) < 1e-12
    assert s.phi1.norm2() == pytest.approx(1.0, rel=1e-10)


def test_two_term_ground_example():
    s = ev.two_term_solution(0, 1, 1.0)
    assert s.E == 3.0
    assert s.ratio == pytest.approx(-1j / math.sqrt(2))


def test_coefficient_system_negative_control():
    s = ev.two_term_solution(1, 1, 1.0)
    bad = dict(s.coefficients)
    bad[2] *= 1.1
    cs = ev.coefficient_system(bad, s.E, 4, 1, 1.0)
    assert max(np.max(np.abs(v)) for v in cs.values()) > 1e-2


def test_coefficient_system_accepts_sequences_and_checks_energy():
    s = ev.two_term_solution(0, 1, 1.0)
    seq = [s.coefficients[0], s.coefficients[1]]
    cs = ev.coefficient_system(seq, s.E, 3, 1, 1.0)
    assert np.max(np.abs(cs["alpha"])) < 1e-12
    with pytest.raises(DomainError):
        ev.coefficient_system(seq, 0.5, 3, 1, 1.0)


def test_energy_sandwich_exact():
    assert all(ev.energy_sandwich(n, l) for n in range(4) for l in (0, 1, 2, 0.5))


def test_two_term_validation():
    with pytest.raises(ValueError):
        ev.two_term_solution(-1, 1, 1.0)
    with pytest.raises(DomainError):
        ev.two_term_solution(0, 1, 0.0)


def traj_for(s, t):
    return ho_trajectory_exact(s.E, s.l, s.omega, t)


@pytest.mark.parametrize("n,l", [(0, 1), (1, 2), (2, 0)])
def test_two_term_residuals(n, l):
    s = ev.two_term_solution(n, l, 1.0)
    # 24 samples avoid t = pi/4, where u = 0 for l = 0
    t = np.linspace(0.0, math.pi, 24)
    tr = traj_for(s, t)
    assert ev.schrodinger_residual(s.phi1, X, t).max_rel < 1e-10
    assert ev.constraint_residual(s.phi1, tr, X, t).max_rel < 1e-10


def test_constraint_negative_control():
    s = ev.two_term_solution(1, 1, 1.0)
    t = np.linspace(0.0, math.pi, 25)
    assert ev.constraint_residual(s.phi1, traj_for(s, t).scaled(1.05), X, t).max_rel > 1e-3
    wrong = ev.SeriesWave(1, 1.0, s.E, {1: 1.0, 2: -s.ratio})
    assert ev.constraint_residual(wrong, traj_for(s, t), X, t).max_rel > 1e-3


def test_lsp_residuals_off_locus():
    s = ev.two_term_solution(1, 1, 1.0)
    t_all = np.linspace(0.0, math.pi, 30)
    tr = traj_for(s, t_all)
    T, Xg = np.meshgrid(t_all, X, indexing="ij")
    u, _ = tr.state(T)
    keep = np.abs(Xg ** 2 - u ** 2) > 0.1
    rx, rt = ev.lsp_residuals(s.phi1, tr, Xg[keep], T[keep])
    assert rx.max_rel < 1e-10 and rt.max_rel < 1e-8


def test_phi2_guards_locus():
    s = ev.two_term_solution(0, 1, 1.0)
    tr = traj_for(s, np.linspace(0, 1, 5))
    u, _ = tr.state(np.array(0.5))
    with pytest.raises(ZeroDenominator):
        ev.phi2_from_phi1(s.phi1, tr)(np.array(float(u)), np.array(0.5))


def test_stationary_solution():
    w, l = 1.0, 2.0
    phi = ev.stationary_solution(l, w)
    t = np.linspace(0, 2, 11)
    tr = ho_trajectory_exact(w * l, l, w, t)
    np.testing.assert_allclose(tr.u, math.sqrt(l / w))
    assert ev.constraint_residual(phi, tr, X, t).max_rel < 1e-12
    assert ev.schrodinger_residual(phi, X, t).max_rel < 1e-12


# --------------------------------------------------------------- density
def test_density_norm_conserved_and_period():
    w = 1.0
    s = ev.two_term_solution(1, 1, w)
    x = np.linspace(0.0, 9.0, 1801)
    t = np.linspace(0.0, 2 * math.pi / w, 400)
    obs = ev.density_observables(s.phi1, x, t)
    assert obs["norm_drift_rel"] < 1e-9
    assert obs["density_variation"] > 1e-2
    for p in obs["periods"].values():
        assert p == pytest.approx(math.pi / w, rel=1e-9)


def test_density_of_eigenstate_is_static():
    phi = ev.SeriesWave(1.0, 1.0, 2.0, {0: 1.0})
    obs = ev.density_observables(phi, np.linspace(0, 8, 801), np.linspace(0, 3, 50))
    assert all(math.isinf(p) for p in obs["periods"].values())


# -------------------------------------------------------- Crank-Nicolson
def test_cn_eigenphase_second_order():
    e1 = ev.eigenphase_error(0, 2.0, 1.0, 2e-3, dx=1e-2)
    e2 = ev.eigenphase_error(0, 2.0, 1.0, 1e-3, dx=1e-2)
    assert 3.8 < e1["phase_error"] / e2["phase_error"] < 4.2
    assert e2["phase_error"] < 1e-3
    assert e2["norm_drift_per_step"] < 1e-13
    assert e2["modulus_error"] < 1e-3


def test_cn_exact_reference_limited_by_space_step():
    e = ev.eigenphase_error(0, 2.0, 1.0, 1e-3, dx=1e-2, reference="exact")
    assert e["phase_error_exact"] < 1e-2


def test_cn_free_gaussian_variance():
    sigma = 0.5
    w0 = ev.gaussian_wavefield(sigma, -12.0, 12.0, 0.01)
    w = ev.crank_nicolson_evolve(lambda x: 0 * x, w0, 1e-3, 1000, store_every=250)
    var = ev.position_variance(w)
    exact = sigma ** 2 + w.t ** 2 / (4 * sigma ** 2)
    np.testing.assert_allclose(var, exact, rtol=1e-4)
    assert w.norm_drift_rel() < 1e-12
    assert len(w.t) == 5


def test_cn_validation():
    w0 = ev.gaussian_wavefield(0.5, -2, 2, 0.1)
    with pytest.raises(ValueError):
        ev.crank_nicolson_evolve(lambda x: 0 * x, w0, -1e-3, 10)
    bad = ev.WaveField(np.array([0.0, 0.1, 0.3, 0.4]), np.array([0.0]), np.zeros((1, 4), complex))
    with pytest.raises(ValueError):
        ev.crank_nicolson_evolve(lambda x: 0 * x, bad, 1e-3, 1)


def test_discrete_hamiltonian_expectation_near_eigenvalue():
    w0 = ev.eigenstate_wavefield(1, 1.0, 1.0, dx=5e-3)
    lam = ev.discrete_hamiltonian_expectation(lambda x: x * x / 2 + (1 - 0.25) / (2 * x * x), w0)
    assert lam == pytest.approx(4.0, rel=1e-4)


# ------------------------------------------------- further worked examples
def test_chi_unit_point():
    assert ev.chi(0, 0.0, 1.0, np.array([1.0]))[0] == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_chi_ratio_is_first_laguerre():
    np.testing.assert_allclose(ev.chi(1, 0.7, 1.3, X) / ev.chi(0, 0.7, 1.3, X), 1.7 - 1.3 * X ** 2, rtol=1e-12)


def test_identity_iv_degenerates_at_threshold():
    r = ev.recurrence_identities(1, 2.0, 1.0, X, 2.0, np.linspace(0, 1, 7))
    np.testing.assert_allclose(np.abs(r["iv"].values), 0.0, atol=1e-15)


def test_coefficient_system_off_energy_and_zero():
    s = ev.two_term_solution(1, 1, 1.0)
    cs = ev.coefficient_system(s.coefficients, s.E + 0.1, 4, 1, 1.0)
    assert max(np.max(np.abs(v)) for v in cs.values()) > 1e-2
    zero = ev.coefficient_system({}, s.E, 4, 1, 1.0)
    assert all(np.all(v == 0) for v in zero.values())


def test_single_eigenstate_violates_constraint():
    t = np.linspace(0.0, math.pi, 24)
    E = 3.3
    phi = ev.SeriesWave(1.0, 1.0, E, {1: 1.0})
    assert ev.constraint_residual(phi, ho_trajectory_exact(E, 1.0, 1.0, t), X, t).max_rel > 1e-2


def test_stationary_phi2_is_pure_phase():
    w, l = 1.0, 2.0
    phi = ev.stationary_solution(l, w)
    t = np.linspace(0, 2, 9)
    tr = ho_trajectory_exact(w * l, l, w, t)
    x = np.full_like(t, 2.5)
    p2 = ev.phi2_from_phi1(phi, tr)(x, t)
    np.testing.assert_allclose(p2 * np.exp(1j * w * t), p2[0], rtol=1e-13)


def test_cn_eigenstate_one_period_fine_step():
    e = ev.eigenphase_error(0, 2.0, 1.0, 1e-4, dx=5e-3, reference="exact")
    assert e["modulus_error"] < 1e-5
    assert e["phase_error_exact"] < 1e-4
    assert e["norm_drift_per_step"] < 1e-10
