"""Truncated Taylor arithmetic.

A :class:`Jet` of order ``K`` stores the normalised Taylor coefficients
``c[k] = f^(k)(x0) / k!`` for ``k = 0..K`` at every sample point ``x0``.
Arithmetic on jets propagates exact derivatives (up to rounding), which is
what lets the prepotentials, ladder actions and ``b1`` carry analytic
derivatives through order four and beyond.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class Jet:
    __slots__ = ("c",)
    __array_priority__ = 1000  # make ndarray <op> Jet defer to Jet

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=np.result_type(np.asarray(coeffs).dtype, float))

    # construction -------------------------------------------------------
    @classmethod
    def variable(cls, x, order: int) -> "Jet":
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, like: "Jet") -> "Jet":
        value = np.asarray(value)
        c = np.zeros((like.order + 1,) + np.broadcast_shapes(like.shape, value.shape),
                     dtype=np.result_type(value.dtype, float))
        c[0] = value
        return cls(c)

    # introspection --------------------------------------------------------
    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def shape(self):
        return self.c.shape[1:]

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    def deriv(self, k: int) -> np.ndarray:
        """k-th derivative values."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return self.c[k] * math.factorial(k)

    def derivs(self) -> np.ndarray:
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def derivative(self) -> "Jet":
        """Jet of the derivative, one order lower."""
        k = np.arange(1, self.order + 1, dtype=float).reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[1:] * k)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.c[: order + 1])

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.order != self.order:
                m = min(other.order, self.order)
                raise ValueError(f"jet order mismatch ({self.order} vs {other.order}); truncate to {m}")
            return other
        return Jet.constant(other, self)

    def __neg__(self):
        return Jet(-self.c)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(self.c + o.c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(self.c - o.c)

    def __rsub__(self, other):
        o = self._coerce(other)
        return Jet(o.c - self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * np.asarray(other))
        o = self._coerce(other)
        K = self.order
        out = np.zeros(np.broadcast_shapes(self.c.shape, o.c.shape),
                       dtype=np.result_type(self.c, o.c))
        for k in range(K + 1):
            acc = self.c[0] * o.c[k]
            for j in range(1, k + 1):
                acc = acc + self.c[j] * o.c[k - j]
            out[k] = acc
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / np.asarray(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        g = self.c
        K = self.order
        h = np.zeros_like(g, dtype=np.result_type(g, float))
        h[0] = 1.0 / g[0]
        for k in range(1, K + 1):
            acc = 0.0
            for j in range(1, k + 1):
                acc = acc + g[j] * h[k - j]
            h[k] = -acc / g[0]
        return Jet(h)

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            out = Jet.constant(1.0, self)
            base = self
            n = int(p)
            while n:
                if n & 1:
                    out = out * base
                base = base * base
                n >>= 1
            return out
        return power(self, float(p))


def power(f: Jet, p: float) -> Jet:
    """f**p for real p, requiring f(x0) > 0."""
    a = f.c
    K = f.order
    h = np.zeros_like(a)
    h[0] = a[0] ** p
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + ((p + 1.0) * j - k) * a[j] * h[k - j]
        h[k] = acc / (k * a[0])
    return Jet(h)


def exp(f: Jet) -> Jet:
    a = f.c
    K = f.order
    e = np.zeros_like(a)
    e[0] = np.exp(a[0])
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * a[j] * e[k - j]
        e[k] = acc / k
    return Jet(e)


def log(f: Jet) -> Jet:
    """log|f|; the derivatives are those of log f on either sign branch."""
    a = f.c
    K = f.order
    h = np.zeros_like(a)
    h[0] = np.log(np.abs(a[0]))
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k):
            acc = acc + j * h[j] * a[k - j]
        h[k] = (a[k] - acc / k) / a[0]
    return Jet(h)


def _sincos(f: Jet, hyperbolic: bool):
    a = f.c
    K = f.order
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    if hyperbolic:
        s[0], c[0] = np.sinh(a[0]), np.cosh(a[0])
    else:
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
    sign = 1.0 if hyperbolic else -1.0
    for k in range(1, K + 1):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * a[j] * c[k - j]
            acc_c = acc_c + j * a[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = sign * acc_c / k
    return Jet(s), Jet(c)


def sin(f: Jet) -> Jet:
    return _sincos(f, False)[0]


def cos(f: Jet) -> Jet:
    return _sincos(f, False)[1]


def sinh(f: Jet) -> Jet:
    return _sincos(f, True)[0]


def cosh(f: Jet) -> Jet:
    return _sincos(f, True)[1]


def compose(derivatives: Sequence[np.ndarray], g: Jet) -> Jet:
    """F(g) from the derivative values ``F^(k)(g(x0))``, k = 0..order.

    Implements the truncated Taylor series
    ``sum_k F^(k)(g0)/k! (g - g0)^k``.
    """
    K = g.order
    if len(derivatives) < K + 1:
        raise ValueError("need derivatives of F up to the jet order")
    delta = Jet(np.concatenate([np.zeros_like(g.c[:1]), g.c[1:]], axis=0))
    out = np.zeros(g.c.shape, dtype=np.result_type(g.c, *[np.asarray(d) for d in derivatives]))
    out[0] = derivatives[0]
    term = Jet.constant(1.0, g)
    for k in range(1, K + 1):
        term = term * delta
        out = out + term.c * (np.asarray(derivatives[k]) / math.factorial(k))
    return Jet(out)
