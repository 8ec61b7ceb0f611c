"""Residuals and solvers for the classical/quantum reduction of the zero-curvature condition.

With ``b(x, u) = b1(x) - b2(u)`` the compatibility condition splits into

* ``V_c b2_u^2 = k1 b2^2 + k2 b2 + k3``                                  (classical)
* ``V_q b1_x^2 = k1 b1^2 + k2 b1 + k3 + b1_x b1_xxx / 4 - b1_xx^2 / 8``  (quantum)

and the functions below evaluate those, their Gambier / fourth-order /
Sturm-Liouville reformulations, and the unsplit master PDE.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import fields
from .errors import EnergyViolation, SignMismatch, TurningPointProximity, ZeroCrossing
from .fields import Residual, ScalarField

TURNING_MARGIN = 1e-3
GAMBIER_ZERO_MARGIN = 1e-2


@dataclass(frozen=True)
class KCoefficients:
    k1: float
    k2: float = 0.0
    k3: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.k1, self.k2, self.k3)):
            raise ValueError("k coefficients must be finite")

    def quadratic(self, b):
        return self.k1 * b ** 2 + self.k2 * b + self.k3

    def as_dict(self):
        return {"k1": self.k1, "k2": self.k2, "k3": self.k3}


@dataclass(frozen=True)
class BSplit:
    """b(x, u) = b1(x) - b2(u)."""

    b1: ScalarField
    b2: ScalarField

    def __call__(self, x, u):
        return self.b1(x) - self.b2(u)

    def partials(self, x, u) -> dict:
        x = np.asarray(x, float)
        u = np.asarray(u, float)
        d1 = self.b1.derivs(x, 4)
        d2 = self.b2.derivs(u, 2)
        zero = np.zeros(np.broadcast_shapes(x.shape, u.shape))
        return {
            "b": d1[0] - d2[0],
            "b_x": d1[1] + zero, "b_xx": d1[2] + zero, "b_xxx": d1[3] + zero, "b_xxxx": d1[4] + zero,
            "b_u": -d2[1] + zero, "b_uu": -d2[2] + zero,
            # mixed partials of a split function vanish identically
            "b_xu": zero, "b_xxu": zero,
        }


# ------------------------------------------------------------- residuals
def vc_residual(Vc: ScalarField, b2, k: KCoefficients, u_grid) -> Residual:
    """V_c b2_u^2 - (k1 b2^2 + k2 b2 + k3) at each u."""
    u = np.asarray(u_grid, float)
    v = Vc(u)
    d = b2.derivs(u, 1)
    terms = [v * d[1] ** 2, k.k1 * d[0] ** 2, k.k2 * d[0], k.k3 + 0 * u]
    return Residual(u, terms[0] - terms[1] - terms[2] - terms[3], terms)


def vq_residual(Vq: ScalarField, b1: ScalarField, k: KCoefficients, x_grid) -> Residual:
    """V_q b1'^2 - (k1 b1^2 + k2 b1 + k3 + b1' b1''' / 4 - b1''^2 / 8)."""
    x = np.asarray(x_grid, float)
    v = Vq(x)
    d = b1.derivs(x, 3)
    terms = [v * d[1] ** 2, k.k1 * d[0] ** 2, k.k2 * d[0], k.k3 + 0 * x,
             d[1] * d[3] / 4, -d[2] ** 2 / 8]
    return Residual(x, terms[0] - sum(terms[1:]), terms)


def _check_zero_free(b1v: np.ndarray, name="b1", rel=1e-8):
    scale = np.max(np.abs(b1v))
    if np.any(np.abs(b1v) <= rel * scale) or np.any(np.sign(b1v[1:]) != np.sign(b1v[:-1])):
        raise ZeroCrossing(f"{name} vanishes on or between grid points")


def zero_free_windows(b1: ScalarField, lo: float, hi: float, n: int = 4001,
                      margin: float = GAMBIER_ZERO_MARGIN) -> list[tuple[float, float]]:
    """Split (lo, hi) at the sign changes of b1, keeping ``margin`` away from each zero."""
    x = np.linspace(lo, hi, n)
    v = b1(x)
    cuts = [0.5 * (x[i] + x[i + 1]) for i in np.nonzero(np.sign(v[1:]) != np.sign(v[:-1]))[0]]
    edges = [lo] + cuts + [hi]
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        a2 = a + (margin if a != lo else 0.0)
        b2 = b - (margin if b != hi else 0.0)
        if b2 > a2:
            out.append((a2, b2))
    return out


def gambier_residual(b1: ScalarField, Vq: ScalarField, k1: float, x_grid) -> Residual:
    """f f'' + 4 k1 - 4 V_q f^2 + 2 f^2 f' - f'^2 / 2 + f^4 / 2 for f = (log b1)'."""
    x = np.asarray(x_grid, float)
    _check_zero_free(b1(x))
    f = b1.derivative() / b1
    fd = f.derivs(x, 2)
    v = Vq(x)
    terms = [fd[0] * fd[2], 4 * k1 + 0 * x, -4 * v * fd[0] ** 2, 2 * fd[0] ** 2 * fd[1],
             -fd[1] ** 2 / 2, fd[0] ** 4 / 2]
    return Residual(x, sum(terms), terms)


def linear4_residual(b1: ScalarField, Vq: ScalarField, k1: float, x_grid) -> Residual:
    """V_q' b1' + 2 V_q b1'' - 2 k1 b1 - b1'''' / 4."""
    x = np.asarray(x_grid, float)
    d = b1.derivs(x, 4)
    v = Vq.derivs(x, 1)
    terms = [v[1] * d[1], 2 * v[0] * d[2], -2 * k1 * d[0], -d[4] / 4]
    return Residual(x, sum(terms), terms)


def sturm_pair_check(W: ScalarField, psi: ScalarField, k1: float, eps: int, x_grid,
                     Vq: ScalarField | None = None) -> tuple[Residual, Residual]:
    """Residuals of rho'' = (2 V_q - eps sqrt(2k1)) rho and b1'' = 2 (rho'/rho) b1' + 2 eps sqrt(2k1) b1.

    rho = e^W and b1 = e^W psi.  When ``Vq`` is omitted it is derived from W,
    which makes the first residual an identity check of the prepotential.
    """
    from .susy import vq_from_prepotential

    x = np.asarray(x_grid, float)
    s = eps * math.sqrt(2 * k1)
    if Vq is None:
        Vq = vq_from_prepotential(W, k1, eps)
    rho = fields.exp_of(W)
    r = rho.derivs(x, 2)
    v = Vq(x)
    t_rho = [r[2], -2 * v * r[0], s * r[0]]
    res_rho = Residual(x, sum(t_rho), t_rho)
    b1 = rho * psi
    b = b1.derivs(x, 2)
    t_b = [b[2], -2 * r[1] / r[0] * b[1], -2 * s * b[0]]
    return res_rho, Residual(x, sum(t_b), t_b)


def master_residual(b: BSplit, Vc: ScalarField, Vq: ScalarField, trajectory, x_grid,
                    t_grid=None, energy_tol: float = 1e-8) -> Residual:
    """Full master PDE residual on the grid (t, x); complex valued.

    4i u' (b b_xxu - b_x b_xu) - 8 V_c b_u^2 + 8 V_q b_x^2 + b_xx^2 - 2 b_x b_xxx
      + b (4 V_c' b_u + 8 V_c b_uu - 4 V_q' b_x - 8 V_q b_xx + b_xxxx)

    The trajectory must satisfy u'^2/2 + V_c(u) = 0.
    """
    x = np.asarray(x_grid, float)
    if t_grid is None:
        t = np.asarray(trajectory.t, float)
        u, ud = np.asarray(trajectory.u, float), np.asarray(trajectory.udot, float)
    else:
        t = np.asarray(t_grid, float)
        u, ud = trajectory.state(t)
    vc = Vc.derivs(u, 1)
    energy = 0.5 * ud ** 2 + vc[0]
    escale = np.maximum(np.maximum(0.5 * ud ** 2, np.abs(vc[0])), 1.0)
    if np.any(np.abs(energy) > energy_tol * escale):
        raise EnergyViolation(
            f"trajectory violates u'^2/2 + V_c = 0 (max {np.max(np.abs(energy)):.3e})")
    X, T = np.meshgrid(x, t)
    U = np.broadcast_to(u[:, None], X.shape)
    UD = np.broadcast_to(ud[:, None], X.shape)
    VC = np.broadcast_to(vc[0][:, None], X.shape)
    VCp = np.broadcast_to(vc[1][:, None], X.shape)
    vq = Vq.derivs(x, 1)
    VQ = np.broadcast_to(vq[0][None, :], X.shape)
    VQp = np.broadcast_to(vq[1][None, :], X.shape)
    p = b.partials(X, U)
    terms = [
        4j * UD * (p["b"] * p["b_xxu"] - p["b_x"] * p["b_xu"]),
        -8 * VC * p["b_u"] ** 2,
        8 * VQ * p["b_x"] ** 2,
        p["b_xx"] ** 2,
        -2 * p["b_x"] * p["b_xxx"],
        4 * p["b"] * VCp * p["b_u"],
        8 * p["b"] * VC * p["b_uu"],
        -4 * p["b"] * VQp * p["b_x"],
        -8 * p["b"] * VQ * p["b_xx"],
        p["b"] * p["b_xxxx"],
    ]
    return Residual(np.stack([T, X]), sum(terms), terms)


# ------------------------------------------------------- b2 by quadrature
@dataclass
class B2Solution:
    """Numerical b2(u) on the admissible part of a grid, with dense output."""

    u: np.ndarray
    b2: np.ndarray
    excluded: np.ndarray
    _legs: list
    _rhs: object

    def _eval(self, u):
        u = np.asarray(u, float)
        out = np.empty_like(u)
        flat_u, flat_o = u.ravel(), out.ravel()
        for i, ui in enumerate(flat_u):
            for lo, hi, sol in self._legs:
                if lo - 1e-12 <= ui <= hi + 1e-12:
                    flat_o[i] = sol(ui)[0]
                    break
            else:
                raise ValueError(f"u = {ui} outside the solved interval")
        return out

    def __call__(self, u):
        return self._eval(u)

    def derivs(self, u, order: int = 1):
        if order > 1:
            raise ValueError("numerical b2 carries only its first derivative")
        u = np.asarray(u, float)
        v = self._eval(u)
        if order == 0:
            return np.stack([v])
        return np.stack([v, self._rhs(u, v)])


def solve_b2(Vc: ScalarField, k: KCoefficients, u0: float, b2_0: float, sign: int, u_grid,
             turning_margin: float = TURNING_MARGIN, rtol: float = 1e-11, atol: float = 1e-13) -> B2Solution:
    """Integrate b2_u = sign sqrt((k1 b2^2 + k2 b2 + k3) / V_c(u)) from (u0, b2_0).

    Grid points with |V_c| below ``turning_margin * max|V_c|`` or with the
    opposite sign to V_c(u0) are excluded, as is everything beyond them on
    the far side from u0 (the quadrature cannot
    be continued through a turning point).
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    u = np.sort(np.asarray(u_grid, float))
    vcu = Vc(u)
    thresh = turning_margin * np.max(np.abs(vcu))
    vc0 = float(Vc(np.array([u0]))[0])
    if abs(vc0) < thresh or vc0 == 0.0:
        raise TurningPointProximity(f"u0 = {u0} lies within the turning-point margin")
    if k.quadratic(b2_0) / vc0 < 0:
        raise SignMismatch("radicand (k1 b2^2 + k2 b2 + k3) / V_c is negative at the start point")

    ok = (np.abs(vcu) >= thresh) & (np.sign(vcu) == np.sign(vc0))
    keep = np.zeros_like(ok)
    right = np.nonzero(u >= u0)[0]
    for i in right:
        if not ok[i]:
            break
        keep[i] = True
    for i in np.nonzero(u < u0)[0][::-1]:
        if not ok[i]:
            break
        keep[i] = True

    def rhs_vals(uu, bb):
        rad = k.quadratic(bb) / Vc(np.asarray(uu, float))
        if np.any(rad < -1e-12 * np.maximum(1.0, np.abs(rad))):
            raise SignMismatch("radicand became negative along the path")
        return sign * np.sqrt(np.maximum(rad, 0.0))

    def rhs(uu, y):
        return [float(rhs_vals(np.array([uu]), np.array([y[0]]))[0])]

    legs = []
    values = np.full(u.shape, np.nan)
    for idx in (np.nonzero(keep & (u >= u0))[0], np.nonzero(keep & (u < u0))[0]):
        if not len(idx):
            continue
        end = u[idx[-1]] if u[idx[-1]] >= u0 else u[idx[0]]
        if end == u0:
            values[idx] = b2_0
            continue
        sol = solve_ivp(rhs, (u0, end), [b2_0], method="RK45", rtol=rtol, atol=atol, dense_output=True)
        if not sol.success:
            raise RuntimeError(f"b2 quadrature failed: {sol.message}")
        values[idx] = sol.sol(u[idx])[0]
        legs.append((min(u0, end), max(u0, end), sol.sol))
    return B2Solution(u[keep], values[keep], u[~keep], legs, rhs_vals)


# ----------------------------------------------- harmonic-oscillator data
def ho_classical_potential(omega: float, l: float, E: float) -> ScalarField:
    """V_c(u) = omega^2 u^2 / 2 + l^2 / (2 u^2) - E (energy absorbed)."""
    return ScalarField(lambda U: 0.5 * omega ** 2 * U * U + 0.5 * l ** 2 / (U * U) - E,
                       (0.0, math.inf), "Vc[ho]")


def ho_quantum_potential(omega: float, l: float, E: float) -> ScalarField:
    """V_q(x) = omega^2 x^2 / 2 + (l^2 - 1/4) / (2 x^2) - E."""
    return ScalarField(lambda X: 0.5 * omega ** 2 * X * X + (l ** 2 - 0.25) / (2 * X * X) - E,
                       (0.0, math.inf), "Vq[ho]")


def square_field(name: str = "x^2") -> ScalarField:
    return ScalarField(lambda X: X * X, (0.0, math.inf), name)


TABULATED_K3_SIGN = -1


def resolve_k3_sign(omega: float, l: float, E: float, u_grid, x_grid, tol: float = 1e-10) -> dict:
    """Decide the sign of k3 = +-2 l^2 for b1 = x^2, b2 = u^2, k1 = 2 omega^2, k2 = -4E.

    Both candidates are substituted into the classical ODE with the
    centrifugal classical potential and into the quantum ODE with the
    (l^2 - 1/4)/(2x^2) quantum potential; the candidate that zeroes both is
    returned.  The tabulated constant is -2 l^2.
    """
    Vc = ho_classical_potential(omega, l, E)
    Vq = ho_quantum_potential(omega, l, E)
    b = square_field()
    out = {"candidates": {}, "tabulated_k3": TABULATED_K3_SIGN * 2 * l ** 2}
    passing = []
    for sgn in (1, -1):
        k = KCoefficients(2 * omega ** 2, -4 * E, sgn * 2 * l ** 2)
        rc = vc_residual(Vc, b, k, u_grid)
        rq = vq_residual(Vq, b, k, x_grid)
        ok = rc.max_rel < tol and rq.max_rel < tol
        out["candidates"]["+" if sgn > 0 else "-"] = {
            "k3": k.k3, "vc_residual_rel": rc.max_rel, "vq_residual_rel": rq.max_rel, "zeroes_both": ok}
        if ok:
            passing.append(sgn)
    out["unique"] = len(passing) == 1
    out["resolved_sign"] = passing[0] if len(passing) == 1 else None
    out["k3"] = passing[0] * 2 * l ** 2 if len(passing) == 1 else None
    out["tabulated_sign_confirmed"] = out["resolved_sign"] == TABULATED_K3_SIGN
    return out


def ho_k_coefficients(omega: float, l: float, E: float) -> KCoefficients:
    """k = (2 omega^2, -4E, +2 l^2), the sign fixed by direct substitution."""
    return KCoefficients(2 * omega ** 2, -4 * E, 2 * l ** 2)


def vc_from_b2(b2: ScalarField, k1: float, u) -> np.ndarray:
    """V_c = k1 b2^2 / b2_u^2 (k2 = k3 = 0)."""
    d = b2.derivs(np.asarray(u, float), 1)
    return k1 * d[0] ** 2 / d[1] ** 2
