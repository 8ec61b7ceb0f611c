"""Classical and exceptional Laguerre / Jacobi polynomials.

Negative degrees evaluate to exactly zero; the exceptional families index
``N - 1``, ``N - 2`` and ``n - 1`` and rely on that convention to reduce
consistently at ``N = 0`` or ``n = 0``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateParameters, DomainError
from .jets import Jet, compose

_ORDERS = (1, 2, 3, 4)


def _as_real(x, name="x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")
    return x


def _check_degree(n):
    if int(n) != n or n < -2:
        raise ValueError(f"degree must be an integer >= -2, got {n}")
    return int(n)


def gbinom(z: float, k: int) -> float:
    """Generalised binomial coefficient binom(z, k) for integer k >= 0.

    Written as the falling-factorial product, which equals
    Gamma(z+1) / (Gamma(k+1) Gamma(z-k+1)) but has no poles at negative z.
    """
    if k < 0:
        return 0.0
    out = 1.0
    for j in range(k):
        out *= (z - j) / (j + 1)
    return out


# ---------------------------------------------------------------- Laguerre
def laguerre(n: int, alpha: float, x):
    """L_n^alpha(x) by the ascending three-term recurrence."""
    n = _check_degree(n)
    x = _as_real(x)
    if n < 0:
        return np.zeros_like(x)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def _laguerre_derivs(n: int, alpha: float, x, kmax: int):
    # d^k/dx^k L_n^a = (-1)^k L_{n-k}^{a+k}
    return [(-1.0) ** k * laguerre(n - k, alpha + k, x) if n - k >= 0 else np.zeros_like(np.asarray(x, float))
            for k in range(kmax + 1)]


def laguerre_deriv(n: int, alpha: float, x, order: int = 1):
    if order not in _ORDERS:
        raise ValueError(f"order must be one of {_ORDERS}")
    n = _check_degree(n)
    return _laguerre_derivs(n, alpha, _as_real(x), order)[order]


def laguerre_jet(n: int, alpha: float, y: Jet) -> Jet:
    """L_n^alpha composed with the jet y."""
    return compose(_laguerre_derivs(n, alpha, y.value, y.order), y)


# ------------------------------------------------------------------ Jacobi
def _jacobi_explicit(n: int, a: float, b: float, x):
    # sum_s binom(n+a, n-s) binom(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
    xm = (x - 1.0) / 2.0
    xp = (x + 1.0) / 2.0
    out = np.zeros_like(x)
    for s in range(n + 1):
        out = out + gbinom(n + a, n - s) * gbinom(n + b, s) * xm ** s * xp ** (n - s)
    return out


def jacobi(n: int, alpha: float, beta: float, x):
    """P_n^(alpha, beta)(x) by the ascending three-term recurrence.

    Falls back to the explicit binomial sum when a recurrence coefficient
    vanishes (2k + alpha + beta = 0 or k + alpha + beta + 1 = 0).
    """
    n = _check_degree(n)
    x = _as_real(x)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise DomainError("Jacobi parameters must be finite")
    if n < 0:
        return np.zeros_like(x)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    ab = alpha + beta
    cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0
    for k in range(1, n):
        s = 2 * k + ab
        den = 2.0 * (k + 1) * (k + ab + 1) * s
        if den == 0.0 or s == 0.0:
            return _jacobi_explicit(n, alpha, beta, x)
        c1 = (s + 1) * ((s + 2) * s * x + alpha ** 2 - beta ** 2)
        c2 = 2.0 * (k + alpha) * (k + beta) * (s + 2)
        prev, cur = cur, (c1 * cur - c2 * prev) / den
    return cur


def _jacobi_derivs(n: int, a: float, b: float, x, kmax: int):
    # d^k P_n^(a,b) = prod_{j=1..k} (n+a+b+j)/2 * P_{n-k}^(a+k, b+k)
    out = []
    for k in range(kmax + 1):
        if n - k < 0:
            out.append(np.zeros_like(np.asarray(x, float)))
            continue
        fac = 1.0
        for j in range(1, k + 1):
            fac *= (n + a + b + j) / 2.0
        out.append(fac * jacobi(n - k, a + k, b + k, x))
    return out


def jacobi_deriv(n: int, alpha: float, beta: float, x, order: int = 1):
    if order not in _ORDERS:
        raise ValueError(f"order must be one of {_ORDERS}")
    n = _check_degree(n)
    return _jacobi_derivs(n, alpha, beta, _as_real(x), order)[order]


def jacobi_jet(n: int, alpha: float, beta: float, y: Jet) -> Jet:
    return compose(_jacobi_derivs(n, alpha, beta, y.value, y.order), y)


# ------------------------------------------------------------- exceptional
def exc_laguerre(N: int, n: int, l: float, y):
    """Bilinear exceptional Laguerre combination P(N, n, l, y).

    L_N^{l+1/2}(-y) L_n^{l+1/2}(y) - L_{N-1}^{l+1/2}(-y) L_{n-1}^{l+1/2}(y)
    """
    if N < 0 or n < 0:
        raise ValueError("exceptional Laguerre indices must be nonnegative")
    y = _as_real(y, "y")
    a = l + 0.5
    return laguerre(N, a, -y) * laguerre(n, a, y) - laguerre(N - 1, a, -y) * laguerre(n - 1, a, y)


def exc_jacobi_coefficients(n: int, N: int, g: float, h: float, x):
    """The two polynomial prefactors (a, b) of the exceptional Jacobi combination."""
    d1 = h + 2 * N - 2 - g
    d2 = g + h + 2 * n + 2 * N - 1
    d3 = 2 * g + 2 * n + 1
    if d1 == 0 or d2 == 0 or d3 == 0:
        raise DegenerateParameters(
            f"exceptional Jacobi denominators vanish for n={n}, N={N}, g={g}, h={h}")
    x = _as_real(x)
    bb = h + N - 0.5
    a = (jacobi(N, -g - N - 1.5, bb, x)
         + 2 * n * (h + N - g - 1) * jacobi(N - 1, -g - N + 0.5, bb, x) / (d1 * d2)
         - n * (2 * h + 4 * N - 3) * jacobi(N - 2, -g - N + 0.5, bb, x) / (d3 * d1))
    b = (h + N - g - 1) * (2 * g + 2 * n + 2 * N - 1) / (d3 * d2) * jacobi(N - 1, -g - N + 0.5, bb, x)
    return a, b


def exc_jacobi(n: int, N: int, g: float, h: float, x):
    """Exceptional Jacobi polynomial Pe_{n,N}^{g,h}(x)."""
    if N < 0 or n < 0:
        raise ValueError("exceptional Jacobi indices must be nonnegative")
    a, b = exc_jacobi_coefficients(n, N, g, h, x)
    al = g + N - 0.5
    be = h + N - 0.5
    return a * jacobi(n, al, be, x) + b * jacobi(n - 1, al, be, x)
