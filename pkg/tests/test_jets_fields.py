import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cqlax import jets
from cqlax.errors import DomainError
from cqlax.fields import Residual, ScalarField, constant, exp_of, identity
from cqlax.jets import Jet

X = sp.Symbol("x")


def sympy_derivs(expr, x0, order):
    return [float(sp.diff(expr, X, k).subs(X, x0)) for k in range(order + 1)]


CASES = [
    (lambda J: J * J * J - 2 * J, X ** 3 - 2 * X),
    (lambda J: jets.exp(-J * J / 2) * J, sp.exp(-X ** 2 / 2) * X),
    (lambda J: jets.log(J) * jets.sin(J), sp.log(X) * sp.sin(X)),
    (lambda J: 1 / (J * J + 1), 1 / (X ** 2 + 1)),
    (lambda J: jets.power(J, 2.5), X ** sp.Rational(5, 2)),
    (lambda J: jets.cosh(J) / jets.sinh(J), sp.cosh(X) / sp.sinh(X)),
    (lambda J: jets.cos(J) ** 3, sp.cos(X) ** 3),
]


@pytest.mark.parametrize("fn,expr", CASES)
@pytest.mark.parametrize("x0", [0.4, 1.3])
def test_jet_derivatives_match_symbolic(fn, expr, x0):
    got = fn(Jet.variable(np.array(x0), 4)).derivs()
    ref = sympy_derivs(expr, x0, 4)
    for g, r in zip(got, ref):
        assert float(g) == pytest.approx(r, rel=1e-11, abs=1e-12)


def test_jet_truncate_and_derivative():
    J = Jet.variable(np.array(0.7), 4)
    f = J * J * J
    d = f.derivative()
    assert d.order == 3
    assert float(d.deriv(1)) == pytest.approx(6 * 0.7)
    assert f.truncate(2).order == 2


def test_log_of_negative_uses_magnitude():
    J = Jet.variable(np.array(-2.0), 2)
    d = jets.log(J).derivs()
    assert float(d[0]) == pytest.approx(math.log(2.0))
    assert float(d[1]) == pytest.approx(-0.5)


@given(st.floats(-3, 3), st.floats(0.1, 2.0))
def test_compose_chain_rule(a, w):
    # d/dx exp(w x) via compose with exp derivatives
    J = Jet.variable(np.array(a), 3)
    inner = J * w
    v = math.exp(w * a)
    out = jets.compose([np.array(v)] * 4, inner).derivs()
    for k in range(4):
        assert float(out[k]) == pytest.approx(v * w ** k, rel=1e-12)


def test_scalar_field_arithmetic_and_domain():
    x = identity((0.0, math.inf))
    f = x * x + constant(1.0) - x / (x + 1)
    xs = np.array([0.5, 2.0])
    np.testing.assert_allclose(f(xs), xs ** 2 + 1 - xs / (xs + 1))
    np.testing.assert_allclose(f.deriv(xs), 2 * xs - 1 / (xs + 1) ** 2)
    with pytest.raises(DomainError):
        f(np.array([-1.0]))


def test_scalar_field_derivs_shape_and_fd():
    f = exp_of(ScalarField(lambda J: jets.sin(J), name="sin"))
    xs = np.linspace(0.1, 2.0, 5)
    d = f.derivs(xs, 2)
    assert d.shape == (3, 5)
    h = 1e-5
    np.testing.assert_allclose(d[1], (f(xs + h) - f(xs - h)) / (2 * h), rtol=1e-6)
    np.testing.assert_allclose(f.derivative()(xs), d[1], rtol=1e-14)


def test_residual_statistics():
    r = Residual(np.arange(3.0), np.array([1e-3, -2e-3, 0.0]), [np.array([1.0, 10.0, 1.0])])
    assert r.max_abs == 2e-3
    assert r.max_rel == pytest.approx(1e-3)
    assert r.summary() == {"residual_max": 2e-3, "residual_rel": pytest.approx(1e-3)}
