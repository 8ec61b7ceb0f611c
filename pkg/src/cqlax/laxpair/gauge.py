"""Gauge reduction to canonical form and assembly of U, V from b and V_q."""
from __future__ import annotations

import numpy as np

from ..errors import ZeroDenominator
from ..jets import Jet
from .matrix import LaxPairBundle, MatrixField, richardson_dt

DENOM_FLOOR = 1e-10


def _guard(b: Jet, floor: float, what: str):
    if np.any(np.abs(b.value) < floor):
        raise ZeroDenominator(f"{what} vanishes (|.| < {floor:g}) at an evaluation point")


def gauge_reduce(Ut: MatrixField, Vt: MatrixField, dt_fd: float = 1e-3,
                 floor: float = DENOM_FLOOR) -> tuple[MatrixField, MatrixField]:
    """Gauge by psi = T phi, T = ((1, 0), (-a/b, 1)) with a = Ut_11, b = Ut_12.

    U = T^-1 Ut T - T^-1 T_x and V = T^-1 Vt T - T^-1 T_t.

    The result has U = ((0, b), (alpha, 0)) and V = ((A, B), (beta, -A)):

    * A = At - a B / b
    * alpha = (-det Ut + a_x) / b - a b_x / b^2
    * beta = a^2 B / b^2 + (b C + a_t) / b + a (2 A b - b_t) / b^2

    a_t and b_t come from Richardson-extrapolated centered differences.
    """

    def U(X, t):
        e = Ut.jets(X.value, t, X.order + 1)
        a, b, c = e[0][0], e[0][1], e[1][0]
        _guard(b, floor, "U_12")
        ax = a.derivative()
        bx = b.derivative()
        a, b, c = a.truncate(X.order), b.truncate(X.order), c.truncate(X.order)
        det = -(a * a) - b * c
        alpha = (-det + ax) / b - a * bx / (b * b)
        return [[0 * X, b], [alpha, 0 * X]]

    def V(X, t):
        K = X.order
        e = Ut.jets(X.value, t, K)
        a, b = e[0][0], e[0][1]
        _guard(b, floor, "U_12")
        f = Vt.jets(X.value, t, K)
        At, B, C = f[0][0], f[0][1], f[1][0]
        a_t = richardson_dt(lambda s: Ut.jets(X.value, s, K)[0][0], t, dt_fd)
        b_t = richardson_dt(lambda s: Ut.jets(X.value, s, K)[0][1], t, dt_fd)
        A = At - a * B / b
        beta = a * a * B / (b * b) + (b * C + a_t) / b + a * (2 * A * b - b_t) / (b * b)
        return [[A, B], [beta, -A]]

    name = Ut.name or "U"
    return MatrixField(U, f"reduced({name})"), MatrixField(V, f"reduced({Vt.name or 'V'})")


def gauge_matrix(Ut: MatrixField, x, t) -> np.ndarray:
    """T = ((1, 0), (-a/b, 1)) evaluated pointwise."""
    M = Ut(x, t)
    T = np.zeros_like(M)
    T[..., 0, 0] = 1
    T[..., 1, 1] = 1
    T[..., 1, 0] = -M[..., 0, 0] / M[..., 0, 1]
    return T


def assemble_lax(b, Vq, trajectory, floor: float = DENOM_FLOOR) -> LaxPairBundle:
    """U = ((0, b), (alpha, 0)), V = ((A, B), (beta, -A)) from b = b1(x) - b2(u(t)) and V_q.

    B = i b_x / 2, A = (b_t - i b_xx / 2) / (2b), alpha = 2 (V_q - i A) / b,
    beta = (A_x + i alpha b_x / 2) / b, with b_t = -b2_u(u) udot.
    """

    def parts(X, t, extra):
        K = X.order + extra
        u, ud = trajectory.state(t)
        d2 = b.b2.derivs(u, 1)
        B1 = b.b1.fn(Jet.variable(X.value, K + 2))
        bb = (B1 - d2[0]).truncate(K)
        _guard(bb, floor, "b")
        bx = B1.derivative().truncate(K)
        bxx = B1.derivative().derivative()
        bt = -d2[1] * ud
        A = (bxx * (-0.5j) + bt) / (bb * 2)
        vq = Vq.fn(Jet.variable(X.value, K))
        return bb, bx, A, vq

    def U(X, t):
        bb, bx, A, vq = parts(X, t, 0)
        alpha = (vq - A * 1j) * 2 / bb
        return [[0 * X, bb], [alpha, 0 * X]]

    def V(X, t):
        bb, bx, A, vq = parts(X, t, 1)
        K = X.order
        alpha = (vq - A * 1j) * 2 / bb
        Ax = A.derivative()
        beta = (Ax + (alpha * bx * 0.5j).truncate(K)) / bb.truncate(K)
        return [[A.truncate(K), bx.truncate(K) * 0.5j], [beta, -A.truncate(K)]]

    return LaxPairBundle(MatrixField(U, "U[assembled]"), MatrixField(V, "V[assembled]"),
                         trajectory, b, "assembled")
