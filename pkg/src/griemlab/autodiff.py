"""Forward-mode automatic differentiation on scalars.

A :class:`Dual` carries a value together with its gradient with respect to
all chart coordinates, so a single evaluation of a field component returns
the component and its exact first partial derivatives.  Chart evaluators are
ordinary Python functions written against the math helpers below; they are
handed either plain floats (value-only path) or ``Dual`` scalars (jet path).
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

Scalar = Union[int, float, np.floating, "Dual"]


class Dual:
    """Scalar with an attached gradient vector (first-order jet)."""

    __slots__ = ("val", "grad")

    def __init__(self, val: float, grad: np.ndarray):
        self.val = float(val)
        self.grad = np.asarray(grad, dtype=float)

    @staticmethod
    def constant(val: float, n: int) -> "Dual":
        return Dual(val, np.zeros(n))

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.grad!r})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.grad + other.grad)
        return Dual(self.val + float(other), self.grad)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.grad - other.grad)
        return Dual(self.val - float(other), self.grad)

    def __rsub__(self, other: Scalar) -> "Dual":
        return Dual(float(other) - self.val, -self.grad)

    def __mul__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val * other.val,
                        self.grad * other.val + self.val * other.grad)
        o = float(other)
        return Dual(self.val * o, self.grad * o)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Dual":
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(self.val * inv,
                        (self.grad - (self.val * inv) * other.grad) * inv)
        o = 1.0 / float(other)
        return Dual(self.val * o, self.grad * o)

    def __rtruediv__(self, other: Scalar) -> "Dual":
        inv = 1.0 / self.val
        o = float(other)
        return Dual(o * inv, (-o * inv * inv) * self.grad)

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.grad)

    def __pow__(self, power: Scalar) -> "Dual":
        if isinstance(power, Dual):
            return power_(self, power)
        p = float(power)
        if p == 0.0:
            return Dual(1.0, np.zeros_like(self.grad))
        if p == 1.0:
            return Dual(self.val, self.grad.copy())
        return Dual(self.val ** p, p * self.val ** (p - 1.0) * self.grad)


def seed_point(p: Sequence[float]) -> list[Dual]:
    """Coordinate duals at ``p``: the i-th carries the i-th unit gradient."""
    n = len(p)
    eye = np.eye(n)
    return [Dual(p[i], eye[i]) for i in range(n)]


def value_of(x: Scalar) -> float:
    return x.val if isinstance(x, Dual) else float(x)


def gradient_of(x: Scalar, n: int) -> np.ndarray:
    return x.grad if isinstance(x, Dual) else np.zeros(n)


# -- elementary functions (dispatch on Dual vs number) ----------------------

def _lift(fval, fderiv):
    def wrapped(x: Scalar):
        if isinstance(x, Dual):
            return Dual(fval(x.val), fderiv(x.val) * x.grad)
        return fval(float(x))
    return wrapped


exp = _lift(math.exp, math.exp)
sin = _lift(math.sin, math.cos)
cos = _lift(math.cos, lambda v: -math.sin(v))
sqrt = _lift(math.sqrt, lambda v: 0.5 / math.sqrt(v))


def log(x: Scalar):
    if isinstance(x, Dual):
        if x.val <= 0.0:
            raise ValueError(f"log domain error: {x.val}")
        return Dual(math.log(x.val), x.grad / x.val)
    if float(x) <= 0.0:
        raise ValueError(f"log domain error: {x}")
    return math.log(float(x))


def power_(base: Scalar, exponent: Scalar):
    """General power; exact power rule for numeric exponents."""
    if not isinstance(exponent, Dual):
        if isinstance(base, Dual):
            return base ** float(exponent)
        return float(base) ** float(exponent)
    if isinstance(exponent, Dual) and np.all(exponent.grad == 0.0):
        return power_(base, exponent.val)
    # genuinely variable exponent: a**b = exp(b*log(a)), needs a > 0
    return exp(exponent * log(base))
