"""
Truncated Taylor jets.

A Jet of order K holds the value and the first K raw derivatives of a
function (d^k f, not divided by k!) at one point or at every point of a
numpy array. Arithmetic and the elementary functions propagate exact
derivatives through Leibniz-type recurrences, so operator chains such as
A-(j) A-(j+1) ... never touch finite differences.
"""

from math import comb
from typing import Tuple, Union

import numpy as np

from .errors import OrderExhaustedError

Scalar = Union[float, int, np.ndarray]


class Jet:
    """Raw-derivative jet; coeffs has shape (K + 1, *x.shape)."""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim == 0:
            coeffs = coeffs.reshape(1)
        self.coeffs = coeffs

    # Construction

    @classmethod
    def variable(cls, x: Scalar, order: int) -> 'Jet':
        """The identity function x -> x."""
        xs = np.asarray(x, dtype=float)
        coeffs = np.zeros((order + 1,) + xs.shape)
        coeffs[0] = xs
        if order >= 1:
            coeffs[1] = 1.0
        return cls(coeffs)

    @classmethod
    def constant(cls, value: Scalar, order: int, shape: Tuple[int, ...] = ()) -> 'Jet':
        coeffs = np.zeros((order + 1,) + tuple(shape))
        coeffs[0] = value
        return cls(coeffs)

    # Accessors

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.coeffs[k]

    def truncate(self, order: int) -> 'Jet':
        if order > self.order:
            raise OrderExhaustedError(
                f"jet of order {self.order} cannot supply order {order}")
        return Jet(self.coeffs[:order + 1])

    def derivative(self) -> 'Jet':
        """Jet of f', one order lower."""
        if self.order < 1:
            raise OrderExhaustedError("cannot differentiate an order-0 jet")
        return Jet(self.coeffs[1:])

    # Arithmetic

    def _coerce(self, other) -> 'Jet':
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, np.shape(other) or self.value.shape)

    def _aligned(self, other) -> Tuple['Jet', 'Jet']:
        other = self._coerce(other)
        k = min(self.order, other.order)
        return self.truncate(k), other.truncate(k)

    def __neg__(self) -> 'Jet':
        return Jet(-self.coeffs)

    def __add__(self, other) -> 'Jet':
        a, b = self._aligned(other)
        return Jet(a.coeffs + b.coeffs)

    __radd__ = __add__

    def __sub__(self, other) -> 'Jet':
        a, b = self._aligned(other)
        return Jet(a.coeffs - b.coeffs)

    def __rsub__(self, other) -> 'Jet':
        a, b = self._aligned(other)
        return Jet(b.coeffs - a.coeffs)

    def __mul__(self, other) -> 'Jet':
        if not isinstance(other, Jet):
            return Jet(self.coeffs * np.asarray(other, dtype=float))
        a, b = self._aligned(other)
        out = np.zeros(np.broadcast(a.coeffs, b.coeffs).shape)
        for k in range(a.order + 1):
            out[k] = sum(comb(k, i) * a.coeffs[i] * b.coeffs[k - i] for i in range(k + 1))
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'Jet':
        if not isinstance(other, Jet):
            return Jet(self.coeffs / np.asarray(other, dtype=float))
        num, den = self._aligned(other)
        shape = np.broadcast(num.coeffs, den.coeffs).shape
        out = np.zeros(shape)
        # num = out * den, solved order by order
        for k in range(num.order + 1):
            acc = np.broadcast_to(num.coeffs[k], shape[1:]).copy()
            for i in range(k):
                acc -= comb(k, i) * out[i] * den.coeffs[k - i]
            out[k] = acc / den.coeffs[0]
        return Jet(out)

    def __rtruediv__(self, other) -> 'Jet':
        return self._coerce(other) / self

    def __pow__(self, exponent: float) -> 'Jet':
        return power(self, exponent)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, value={self.value!r})"


def exp(u: Jet) -> Jet:
    """e**u; h' = u' h."""
    K = u.order
    out = np.zeros(u.coeffs.shape)
    out[0] = np.exp(u.value)
    du = u.coeffs[1:]
    for k in range(1, K + 1):
        out[k] = sum(comb(k - 1, i) * du[i] * out[k - 1 - i] for i in range(k))
    return Jet(out)


def power(u: Jet, a: float) -> Jet:
    """u**a for a positive base; u h' = a u' h."""
    K = u.order
    out = np.zeros(u.coeffs.shape)
    out[0] = np.power(u.value, a)
    c = u.coeffs
    for k in range(1, K + 1):
        acc = a * sum(comb(k - 1, i) * c[i + 1] * out[k - 1 - i] for i in range(k))
        acc = acc - sum(comb(k - 1, i) * c[i] * out[k - i] for i in range(1, k))
        out[k] = acc / c[0]
    return Jet(out)


def reciprocal(u: Jet) -> Jet:
    return 1.0 / u


def sin_cos(u: Jet) -> Tuple[Jet, Jet]:
    K = u.order
    s = np.zeros(u.coeffs.shape)
    c = np.zeros(u.coeffs.shape)
    s[0], c[0] = np.sin(u.value), np.cos(u.value)
    du = u.coeffs[1:]
    for k in range(1, K + 1):
        s[k] = sum(comb(k - 1, i) * du[i] * c[k - 1 - i] for i in range(k))
        c[k] = -sum(comb(k - 1, i) * du[i] * s[k - 1 - i] for i in range(k))
    return Jet(s), Jet(c)


def sinh_cosh(u: Jet) -> Tuple[Jet, Jet]:
    K = u.order
    s = np.zeros(u.coeffs.shape)
    c = np.zeros(u.coeffs.shape)
    s[0], c[0] = np.sinh(u.value), np.cosh(u.value)
    du = u.coeffs[1:]
    for k in range(1, K + 1):
        s[k] = sum(comb(k - 1, i) * du[i] * c[k - 1 - i] for i in range(k))
        c[k] = sum(comb(k - 1, i) * du[i] * s[k - 1 - i] for i in range(k))
    return Jet(s), Jet(c)


def sin(u: Jet) -> Jet:
    return sin_cos(u)[0]


def cos(u: Jet) -> Jet:
    return sin_cos(u)[1]


def sinh(u: Jet) -> Jet:
    return sinh_cosh(u)[0]


def cosh(u: Jet) -> Jet:
    return sinh_cosh(u)[1]


def tanh(u: Jet) -> Jet:
    s, c = sinh_cosh(u)
    return s / c


def coth(u: Jet) -> Jet:
    s, c = sinh_cosh(u)
    return c / s


def cot(u: Jet) -> Jet:
    s, c = sin_cos(u)
    return c / s
