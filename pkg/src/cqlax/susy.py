"""Shape-invariant potential factory.

Each family record builds ``rho = e^W`` (kept with its sign, so that
``b1 = rho * psi`` reproduces the closed forms even where the polynomial
factor of ``rho`` is negative), the catalog eigenfunction ``phi`` of
``a^dagger a``, and from them ``psi = a phi`` and ``b1 = e^W psi``.

Ladder operators act as ``a f = -f' + W' f`` and ``a^dagger f = f' + W' f``,
hence ``a^dagger a = -d^2 + W'^2 + W''`` and ``a a^dagger = -d^2 + W'^2 - W''``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields as dc_fields
from typing import Callable, Sequence

import numpy as np

from . import jets
from .errors import DegenerateParameters, DomainError
from .fields import Residual, ScalarField
from .jets import Jet
from .orthopoly import exc_jacobi, exc_laguerre, jacobi_jet, laguerre_jet


def _check_index(name, v):
    if int(v) != v or v < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {v}")


# ----------------------------------------------------------------- families
@dataclass(frozen=True)
class HarmonicOscillator:
    omega: float
    l: float
    N: int = 0
    n: int = 0
    family = "ho"
    domain = (0.0, math.inf)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        _check_index("N", self.N)
        _check_index("n", self.n)

    def rho(self, X: Jet) -> Jet:
        w, l = self.omega, self.l
        return jets.exp(0.5 * w * X * X) * jets.power(X, l) * laguerre_jet(self.N, l - 0.5, -w * X * X)

    def phi(self, X: Jet) -> Jet:
        w, l = self.omega, self.l
        return jets.exp(-0.5 * w * X * X) * jets.power(X, l) * laguerre_jet(self.n, l - 0.5, w * X * X)

    def eigenvalue(self) -> float:
        return self.omega * (4 * self.l + 2 + 4 * self.N + 4 * self.n)

    def k1(self) -> float:
        return self.omega ** 2 / 2 * (2 * self.l + 1 + 2 * self.N + 2 * self.n) ** 2

    def vq_closed_form(self, x):
        w, l = self.omega, self.l
        x = np.asarray(x, float)
        return w ** 2 / 2 * x ** 2 + l * (l - 1) / (2 * x ** 2) + w * (self.N - self.n)

    def b1_closed_form(self, x):
        w, l = self.omega, self.l
        x = np.asarray(x, float)
        return 2 * w * x ** (2 * l + 1) * exc_laguerre(self.N, self.n, l, w * x ** 2)


@dataclass(frozen=True)
class PoschlTellerTrig:
    g: float
    h: float
    N: int = 0
    n: int = 0
    family = "pt"
    domain = (0.0, math.pi / 2)

    def __post_init__(self):
        _check_index("N", self.N)
        _check_index("n", self.n)

    def rho(self, X: Jet) -> Jet:
        g, h, N = self.g, self.h, self.N
        return (jets.power(jets.sin(X), -(g + N)) * jets.power(jets.cos(X), h + N - 1)
                * jacobi_jet(N, -g - N - 0.5, h + N - 1.5, jets.cos(2 * X)))

    def phi(self, X: Jet) -> Jet:
        g, h, N = self.g, self.h, self.N
        return (jets.power(jets.sin(X), g + N + 1) * jets.power(jets.cos(X), h + N - 1)
                * jacobi_jet(self.n, g + N + 0.5, h + N - 1.5, jets.cos(2 * X)))

    def eigenvalue(self) -> float:
        return (2 * self.n + 1 + 2 * self.g) * (4 * self.N + 2 * self.n + 2 * self.h - 1)

    def k1(self) -> float:
        return (2 * self.n + 1 + 2 * self.g) ** 2 * (2 * self.n + 2 * self.h + 4 * self.N - 1) ** 2 / 8

    def vq_closed_form(self, x):
        g, h, N, n = self.g, self.h, self.N, self.n
        x = np.asarray(x, float)
        return ((g + N) * (g + N + 1) / (2 * np.sin(x) ** 2)
                + (h + N - 1) * (h + N - 2) / (2 * np.cos(x) ** 2)
                - ((2 * N + h - g - 1) ** 2 + (2 * n + g + h + 2 * N) ** 2) / 4)

    def b1_closed_form(self, x):
        g, h, N, n = self.g, self.h, self.N, self.n
        x = np.asarray(x, float)
        return -(2 * n + 1 + 2 * g) * np.cos(x) ** (2 * h + 2 * N - 1) * exc_jacobi(n, N, g, h, np.cos(2 * x))


@dataclass(frozen=True)
class Hydrogen:
    mu: float
    l: float
    N: int = 0
    n: int = 0
    family = "hydrogen"
    domain = (0.0, math.inf)

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not self.l > 0:
            raise ValueError("l must be positive")
        _check_index("N", self.N)
        _check_index("n", self.n)
        if self.N == self.l:
            raise DegenerateParameters("hydrogen prepotential requires N != l")

    def rho(self, X: Jet) -> Jet:
        mu, l, N = self.mu, self.l, self.N
        return (jets.exp(-mu / (2 * (N - l)) * X) * jets.power(X, -l)
                * laguerre_jet(N, -2 * l - 1, mu / (N - l) * X))

    def phi(self, X: Jet) -> Jet:
        mu, l, n = self.mu, self.l, self.n
        s = l + n + 1
        return jets.exp(-mu / (2 * s) * X) * jets.power(X, l + 1) * laguerre_jet(n, 2 * l + 1, mu / s * X)

    def eigenvalue(self) -> float:
        mu, l = self.mu, self.l
        return mu ** 2 / (4 * (l - self.N) ** 2) - mu ** 2 / (4 * (l + self.n + 1) ** 2)

    def k1(self) -> float:
        mu, l, N, n = self.mu, self.l, self.N, self.n
        return (2 * mu ** 4 * (N ** 2 - (n + 1) ** 2 - 2 * l * (N + n + 1)) ** 2
                / (4 ** 4 * (l - N) ** 4 * (l + n + 1) ** 4))

    def vq_closed_form(self, x):
        # from W'^2 + W'' = mu^2/(4(l-N)^2) - mu/x + l(l+1)/x^2
        mu, l, N = self.mu, self.l, self.N
        x = np.asarray(x, float)
        return (mu ** 2 / (4 * (l - N) ** 2) - mu / x + l * (l + 1) / x ** 2
                + epsilon(self) * math.sqrt(2 * self.k1())) / 2

    def b1_closed_form(self, x):
        if self.n != 0 or self.N != 0:
            raise NotImplementedError("closed-form hydrogen b1 is only available for n = N = 0")
        mu, l = self.mu, self.l
        x = np.asarray(x, float)
        return np.exp(mu * x / (2 * l * (l + 1))) * (2 * l + 1) / (2 * l) * (2 * l - x * mu / (l + 1))

    def vc_closed_form(self, u):
        """Classical potential k1 b^2 / b_u^2 for n = N = 0 with b2 = b1."""
        if self.n != 0 or self.N != 0:
            raise NotImplementedError("closed-form hydrogen V_c is only available for n = N = 0")
        mu, l = self.mu, self.l
        u = np.asarray(u, float)
        return (2 * l + 1) ** 2 / (8 * l * (l + 1)) * (l * (l + 1) / u ** 2 - mu / u + mu ** 2 / (4 * l * (l + 1)))


PrepotentialSpec = HarmonicOscillator | PoschlTellerTrig | Hydrogen

FAMILIES = {"ho": HarmonicOscillator, "pt": PoschlTellerTrig, "hydrogen": Hydrogen}


def make_spec(family: str, **params) -> PrepotentialSpec:
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown SUSY family {family!r}; expected one of {sorted(FAMILIES)}") from None
    names = {f.name for f in dc_fields(cls)}
    unknown = set(params) - names
    if unknown:
        raise ValueError(f"unknown parameters for {family}: {sorted(unknown)}")
    for k in ("N", "n"):
        if k in params:
            v = params[k]
            if int(v) != v:
                raise ValueError(f"{k} must be an integer")
            params[k] = int(v)
    return cls(**params)


# -------------------------------------------------------------- operations
def epsilon(spec: PrepotentialSpec) -> int:
    """Sign in W'^2 + W'' = 2 V_q - eps sqrt(2 k1).

    psi = a phi solves (a a^dagger + 2 eps sqrt(2 k1)) psi = 0 exactly when
    2 sqrt(2 k1) = -eps * lambda, so eps = -sign(lambda); the catalog
    families all have lambda > 0 in the tested ranges, i.e. eps = -1.
    """
    return -1 if spec.eigenvalue() >= 0 else 1


def rho(spec: PrepotentialSpec) -> ScalarField:
    return ScalarField(spec.rho, spec.domain, f"rho[{spec.family}]")


def prepotential(spec: PrepotentialSpec) -> ScalarField:
    """W = log|rho| with analytic derivatives."""
    return ScalarField(lambda X: jets.log(spec.rho(X)), spec.domain, f"W[{spec.family}]")


def eigenfunction(spec: PrepotentialSpec) -> ScalarField:
    return ScalarField(spec.phi, spec.domain, f"phi[{spec.family}]")


def k1_value(spec: PrepotentialSpec) -> float:
    return spec.k1()


def vq_from_prepotential(W: ScalarField, k1: float, eps: int = -1) -> ScalarField:
    """V_q = (W'^2 + W'' + eps sqrt(2 k1)) / 2."""
    if k1 < 0:
        raise ValueError("k1 must be nonnegative")
    if eps not in (-1, 1):
        raise ValueError("epsilon must be +1 or -1")
    s = eps * math.sqrt(2 * k1)

    def fn(X: Jet) -> Jet:
        d = W.fn(Jet.variable(X.value, X.order + 2))
        w1 = d.derivative()
        w2 = w1.derivative()
        w1 = w1.truncate(X.order)
        return (w1 * w1 + w2 + s) * 0.5

    return ScalarField(fn, W.domain, f"Vq[{W.name}]")


def quantum_potential(spec: PrepotentialSpec) -> ScalarField:
    return vq_from_prepotential(prepotential(spec), spec.k1(), epsilon(spec))


class LadderPair:
    """a f = -f' + W' f,  a^dagger f = f' + W' f."""

    def __init__(self, W: ScalarField):
        self.W = W
        self.Wx = W.derivative()

    def annihilate(self, f: ScalarField) -> ScalarField:
        return -f.derivative() + self.Wx * f

    def create(self, f: ScalarField) -> ScalarField:
        return f.derivative() + self.Wx * f

    def adag_a(self, f: ScalarField) -> ScalarField:
        return self.create(self.annihilate(f))

    def a_adag(self, f: ScalarField) -> ScalarField:
        return self.annihilate(self.create(f))

    def potential_adag_a(self) -> ScalarField:
        """W'^2 + W'', the potential of a^dagger a."""
        return self.Wx * self.Wx + self.Wx.derivative()

    def potential_a_adag(self) -> ScalarField:
        """W'^2 - W'', the potential of a a^dagger."""
        return self.Wx * self.Wx - self.Wx.derivative()


def ladder(spec: PrepotentialSpec) -> LadderPair:
    return LadderPair(prepotential(spec))


def build_psi(spec: PrepotentialSpec) -> ScalarField:
    """psi = a phi."""
    psi = ladder(spec).annihilate(eigenfunction(spec))
    psi.name = f"psi[{spec.family}]"
    return psi


def build_b1(spec: PrepotentialSpec) -> ScalarField:
    """b1 = e^W psi."""
    b1 = rho(spec) * build_psi(spec)
    b1.name = f"b1[{spec.family}]"
    return b1


# --------------------------------------------------- shape-invariance ladders
@dataclass(frozen=True)
class LadderCatalog:
    """A ladder family W_lambda whose parameters listed in ``shifted`` move by delta."""

    name: str
    params: tuple
    shifted: tuple
    domain: tuple
    make_W: Callable[..., ScalarField]

    def build(self, params: dict) -> LadderPair:
        missing = set(self.params) - set(params)
        extra = set(params) - set(self.params)
        if missing or extra:
            raise ValueError(f"{self.name} ladder needs parameters {self.params}")
        return LadderPair(self.make_W(**params))

    def shift(self, params: dict, delta: float) -> dict:
        return {k: (v + delta if k in self.shifted else v) for k, v in params.items()}


def _ho_ladder_W(omega, l):
    # W' = -omega x + l / x
    return ScalarField(lambda X: -0.5 * omega * X * X + l * jets.log(X), (0.0, math.inf), "W[ho-ladder]")


def _pt_hyperbolic_W(l, g):
    # W' = g coth x + l tanh x
    return ScalarField(lambda X: g * jets.log(jets.sinh(X)) + l * jets.log(jets.cosh(X)),
                       (0.0, math.inf), "W[pt-hyperbolic-ladder]")


HO_LADDER = LadderCatalog("ho", ("omega", "l"), ("l",), (0.0, math.inf), _ho_ladder_W)
PT_HYPERBOLIC_LADDER = LadderCatalog("pt-hyperbolic", ("l", "g"), ("l", "g"), (0.0, math.inf), _pt_hyperbolic_W)
LADDERS = {c.name: c for c in (HO_LADDER, PT_HYPERBOLIC_LADDER)}


def shape_invariance_constant(catalog: LadderCatalog, params: dict, delta: float = 1.0) -> float:
    """Constant of a_l a_l^dagger - a_{l+delta}^dagger a_{l+delta}, from the catalog potentials.

    HO: (-2 omega l + omega) - (-2 omega (l+delta) - omega) = 2 omega (1 + delta),
    PT: (g+l)^2 - (g+l+2 delta)^2.  The 1/x^2 (resp. 1/sinh^2, 1/cosh^2) parts
    cancel only for delta = 1.
    """
    if catalog.name == "ho":
        return 2 * params["omega"] * (1 + delta)
    if catalog.name == "pt-hyperbolic":
        s = params["g"] + params["l"]
        return s ** 2 - (s + 2 * delta) ** 2
    raise ValueError(f"no closed-form constant for {catalog.name}")


def shape_invariance_defect(catalog: LadderCatalog, params: dict, delta: float,
                            probes: Sequence[ScalarField], x) -> tuple[float, float]:
    """Estimate the shape-invariance constant and its deviation from constancy.

    Applies a_l a_l^dagger - a_{l+delta}^dagger a_{l+delta} to each probe and
    divides pointwise by the probe.  Returns (mean ratio, max |ratio - mean|).
    """
    x = np.asarray(x, float)
    lo = catalog.build(params)
    hi = catalog.build(catalog.shift(params, delta))
    ratios = []
    for f in probes:
        fv = f(x)
        if np.any(np.abs(fv) < 1e-300) or np.any(np.abs(fv) < 1e-12 * np.max(np.abs(fv))):
            raise DomainError(f"probe {f.name or '?'} vanishes on the grid")
        diff = lo.a_adag(f)(x) - hi.adag_a(f)(x)
        ratios.append(diff / fv)
    r = np.concatenate(ratios)
    c = float(np.mean(r))
    return c, float(np.max(np.abs(r - c)))


# ------------------------------------------------------------- residuals
def eigen_residual(spec: PrepotentialSpec, x) -> Residual:
    """a^dagger a phi - lambda phi."""
    x = np.asarray(x, float)
    phi = eigenfunction(spec)
    lhs = ladder(spec).adag_a(phi)(x)
    rhs = spec.eigenvalue() * phi(x)
    return Residual(x, lhs - rhs, [lhs, rhs])


def intertwining_residual(spec: PrepotentialSpec, x) -> Residual:
    """a a^dagger psi + 2 eps sqrt(2 k1) psi for psi = a phi."""
    x = np.asarray(x, float)
    psi = build_psi(spec)
    lhs = ladder(spec).a_adag(psi)(x)
    shift = 2 * epsilon(spec) * math.sqrt(2 * spec.k1()) * psi(x)
    return Residual(x, lhs + shift, [lhs, shift])


def factorization_residual(W: ScalarField, f: ScalarField, x) -> tuple[Residual, Residual]:
    """a^dagger a f - (-f'' + (W'^2 + W'') f) and a a^dagger f - (-f'' + (W'^2 - W'') f)."""
    x = np.asarray(x, float)
    L = LadderPair(W)
    fd = f.derivs(x, 2)
    out = []
    for comp, pot in ((L.adag_a(f), L.potential_adag_a()), (L.a_adag(f), L.potential_a_adag())):
        lhs = comp(x)
        terms = [lhs, -fd[2], pot(x) * fd[0]]
        out.append(Residual(x, lhs + fd[2] - terms[2], terms))
    return out[0], out[1]
