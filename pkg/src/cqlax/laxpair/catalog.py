"""Transcribed Lax pairs bound to a classical trajectory."""
from __future__ import annotations

import numpy as np

from .. import jets as J
from ..errors import FamilyMismatch
from .matrix import LaxPairBundle, MatrixField
from .trajectory import Trajectory, _check_params, canonical_family


def _ho(p, traj):
    w, l = p["omega"], p["l"]

    def U(X, t):
        u, ud = traj.state(t)
        b = X * X - u * u
        x2 = X * X
        u21 = ((l * l - 0.25) / x2 + w * w * x2 - l * l / (u * u) - w * w * u * u - ud * ud
               - (1 - 2j * u * ud) / b) / b
        return [[0 * X, b], [u21, 0 * X]]

    def V(X, t):
        u, ud = traj.state(t)
        b = X * X - u * u
        v11 = (-1j - 2 * u * ud) / (2 * b)
        num = 4 * l * l * X * X + u * u * (1 - 4 * l * l - 4 * w * w * X ** 4
                                           + 4 * X * X * (w * w * u * u + ud * ud))
        v21 = num / (4j * X * u * u * b * b)
        return [[v11, 1j * X], [v21, -v11]]

    return U, V


def _piv(p, traj):
    al, be = p["alpha"], p["beta"]

    def Q(t):
        u, ud = traj.state(t)
        return u, u * ud - u ** 4 / 2 - t * u * u

    def U(X, t):
        u, q = Q(t)
        d = X ** 3 / 2 + t * X + (q + 0.5) / X
        u21 = (q * q + be / 2) / (u * u * X * X) - q - al - 1
        return [[d, X * X - u * u], [u21, -d]]

    def V(X, t):
        u, q = Q(t)
        d = (X * X + u * u) / 2 + t
        return [[d, X], [-(q + al + 1) / X, -d]]

    return U, V


def _pv(p, traj):
    s, xi, ze = p["sigma"], p["xi"], p["zeta"]

    def U(X, t):
        u, ud = traj.state(t)
        sh2x, ch2x = J.sinh(2 * X), J.cosh(2 * X)
        ch4x = J.cosh(4 * X)
        shx, chx = J.sinh(X), J.cosh(X)
        s2u, c2u, c4u = np.sinh(2 * u), np.cosh(2 * u), np.cosh(4 * u)
        et = np.exp(t)
        coth_u = np.cosh(u) / np.sinh(u)
        u11 = (ud * s2u / sh2x - 2 * s / sh2x * (ch2x - c2u)
               + np.exp(2 * t) / (4 * sh2x) * (ch4x - c4u) + ch2x / sh2x)
        u12 = et * (ch2x - c2u)
        sh2x2 = sh2x * sh2x
        u21 = (ud * ud / et / sh2x2 * (c2u + ch2x)
               + ud * s2u / sh2x2 * (4 * s / et - et * (c2u + ch2x))
               + 8 * s * s / et * coth_u ** 2 / sh2x2 * (np.sinh(u) ** 2 - chx * chx)
               - 2 * s * et * s2u ** 2 / sh2x2
               - 2 / et * (xi * xi + 2 * xi * s) / (np.sinh(u) ** 2 * shx * shx)
               + 2 / et * ze * ze / (np.cosh(u) ** 2 * chx * chx)
               + et ** 3 * s2u ** 2 / (4 * sh2x2) * (c2u + ch2x))
        return [[u11, u12], [u21, -u11]]

    def V(X, t):
        u, ud = traj.state(t)
        sh2x, ch2x = J.sinh(2 * X), J.cosh(2 * X)
        et = np.exp(t)
        v11 = et * et / 2 * (ch2x + np.cosh(2 * u)) - 2 * s + 0.5
        v12 = et * sh2x
        w = ((ud - et * et * np.sinh(2 * u) / 2) ** 2 + 4 * ze * ze / np.cosh(u) ** 2
             - (4 * xi * xi + 8 * xi * s) / np.sinh(u) ** 2 - 4 * s * s * (np.cosh(u) / np.sinh(u)) ** 2)
        v21 = w / et / sh2x
        return [[v11, v12], [v21, -v11]]

    return U, V


_BUILDERS = {"ho": _ho, "piv": _piv, "pv": _pv}


def catalog_pair(family: str, params: dict, trajectory: Trajectory) -> LaxPairBundle:
    """The catalog U, V of ``family`` with u(t), udot(t) taken from ``trajectory``."""
    fam = canonical_family(family)
    if canonical_family(trajectory.family) != fam:
        raise FamilyMismatch(f"trajectory family {trajectory.family!r} does not match {family!r}")
    p = _check_params(fam, params)
    for k, v in p.items():
        if k in trajectory.params and trajectory.params[k] != v:
            raise FamilyMismatch(f"parameter {k} differs between pair ({v}) and trajectory ({trajectory.params[k]})")
    U, V = _BUILDERS[fam](p, trajectory)
    return LaxPairBundle(MatrixField(U, f"U[{fam}]"), MatrixField(V, f"V[{fam}]"), trajectory, None, fam)
