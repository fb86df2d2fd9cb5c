"""Hyper-dual scalars: exact first and second derivatives.

A hyper-dual number x = a + b*e1 + c*e2 + d*e1e2 lives in the algebra
with e1^2 = e2^2 = (e1e2)^2 = 0 and e1*e2 = e1e2 != 0.  Evaluating a
composition of smooth elementary operations at a + h1*e1 + h2*e2 yields

    f(a),  h1*f'(a),  h2*f'(a),  h1*h2*f''(a)

in the four slots, exact to roundoff (no truncation error).  Seeding two
different arguments gives the mixed partial in the e1e2 slot.

Slots may hold floats or numpy arrays of a common shape, so one
evaluation can carry derivatives at many sample points at once.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HyperDual",
    "EvaluationError",
    "sin",
    "cos",
    "tan",
    "exp",
    "log",
    "sqrt",
    "second_partials",
    "gradient_and_hessian",
]


class EvaluationError(ArithmeticError):
    """Domain violation inside a lifted elementary function."""

    def __init__(self, function: str, detail: str = ""):
        self.function = function
        msg = f"invalid argument to {function}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _any(cond) -> bool:
    return bool(np.any(cond))


class HyperDual:
    """Value with first/second derivative payload in two directions."""

    __slots__ = ("real", "e1", "e2", "e12")

    # keep numpy from consuming us in mixed expressions
    __array_ufunc__ = None
    __array_priority__ = 1000

    def __init__(self, real, e1=0.0, e2=0.0, e12=0.0):
        self.real = real
        self.e1 = e1
        self.e2 = e2
        self.e12 = e12

    def __repr__(self):
        return f"HyperDual({self.real!r}, {self.e1!r}, {self.e2!r}, {self.e12!r})"

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.real + other.real, self.e1 + other.e1,
                             self.e2 + other.e2, self.e12 + other.e12)
        return HyperDual(self.real + other, self.e1, self.e2, self.e12)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.real, -self.e1, -self.e2, -self.e12)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.real - other.real, self.e1 - other.e1,
                             self.e2 - other.e2, self.e12 - other.e12)
        return HyperDual(self.real - other, self.e1, self.e2, self.e12)

    def __rsub__(self, other):
        return HyperDual(other - self.real, -self.e1, -self.e2, -self.e12)

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(
                self.real * other.real,
                self.real * other.e1 + self.e1 * other.real,
                self.real * other.e2 + self.e2 * other.real,
                self.real * other.e12 + self.e1 * other.e2
                + self.e2 * other.e1 + self.e12 * other.real,
            )
        return HyperDual(self.real * other, self.e1 * other,
                         self.e2 * other, self.e12 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * other._reciprocal()
        if _any(other == 0):
            raise EvaluationError("divide", "division by zero")
        inv = 1.0 / other
        return HyperDual(self.real * inv, self.e1 * inv, self.e2 * inv, self.e12 * inv)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self):
        if _any(self.real == 0):
            raise EvaluationError("divide", "division by zero")
        inv = 1.0 / self.real
        return self._lift(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __pow__(self, p):
        if isinstance(p, HyperDual):
            return exp(p * log(self))
        if p == 0:
            one = np.ones_like(self.real) if isinstance(self.real, np.ndarray) else 1.0
            return HyperDual(one)
        if p != int(p) and _any(self.real <= 0):
            raise EvaluationError("power", "fractional power of non-positive base")
        if p == int(p) and p < 0 and _any(self.real == 0):
            raise EvaluationError("power", "negative power of zero")
        r = self.real
        f = r ** p
        f1 = p * r ** (p - 1)
        f2 = p * (p - 1) * r ** (p - 2) if p != 1 else 0.0
        return self._lift(f, f1, f2)

    def __rpow__(self, base):
        if _any(np.asarray(base) <= 0):
            raise EvaluationError("power", "non-positive base")
        return exp(self * np.log(base))

    # comparisons act on the real part (useful for guards)
    def __lt__(self, other):
        return self.real < _real(other)

    def __le__(self, other):
        return self.real <= _real(other)

    def __gt__(self, other):
        return self.real > _real(other)

    def __ge__(self, other):
        return self.real >= _real(other)

    def __float__(self):
        return float(self.real)

    # -- chain rule -----------------------------------------------------

    def _lift(self, f, f1, f2):
        """Apply a scalar function given f(a), f'(a), f''(a)."""
        return HyperDual(
            f,
            self.e1 * f1,
            self.e2 * f1,
            self.e12 * f1 + self.e1 * self.e2 * f2,
        )


def _real(x):
    return x.real if isinstance(x, HyperDual) else x


def sin(x):
    if isinstance(x, HyperDual):
        return x._lift(np.sin(x.real), np.cos(x.real), -np.sin(x.real))
    return np.sin(x)


def cos(x):
    if isinstance(x, HyperDual):
        return x._lift(np.cos(x.real), -np.sin(x.real), -np.cos(x.real))
    return np.cos(x)


def tan(x):
    if isinstance(x, HyperDual):
        t = np.tan(x.real)
        sec2 = 1.0 + t * t
        return x._lift(t, sec2, 2.0 * t * sec2)
    return np.tan(x)


def exp(x):
    if isinstance(x, HyperDual):
        e = np.exp(x.real)
        return x._lift(e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, HyperDual):
        if _any(x.real <= 0):
            raise EvaluationError("log", "non-positive argument")
        inv = 1.0 / x.real
        return x._lift(np.log(x.real), inv, -inv * inv)
    return np.log(x)


def sqrt(x):
    if isinstance(x, HyperDual):
        if _any(x.real < 0):
            raise EvaluationError("sqrt", "negative argument")
        if _any(x.real == 0):
            raise EvaluationError("sqrt", "derivative singular at zero")
        s = np.sqrt(x.real)
        return x._lift(s, 0.5 / s, -0.25 / (s * x.real))
    return np.sqrt(x)


def parts(value, like=None):
    """Split a result into (real, e1, e2, e12), broadcasting constants.

    Functions that ignore the seeded inputs may return plain numbers;
    ``like`` supplies the target broadcast shape in that case.
    """
    if isinstance(value, HyperDual):
        r, d1, d2, d12 = value.real, value.e1, value.e2, value.e12
    else:
        r, d1, d2, d12 = value, 0.0, 0.0, 0.0
    if like is not None:
        r = np.broadcast_to(np.asarray(r, dtype=float), like)
        d1 = np.broadcast_to(np.asarray(d1, dtype=float), like)
        d2 = np.broadcast_to(np.asarray(d2, dtype=float), like)
        d12 = np.broadcast_to(np.asarray(d12, dtype=float), like)
    return r, d1, d2, d12


def second_partials(f, x, i: int, j: int):
    """(f, df/dx_i, df/dx_j, d2f/dx_i dx_j) at x, exactly.

    Seeds argument i in the e1 direction and argument j in the e2
    direction (the same argument in both when i == j) and reads the
    derivatives off the result's slots.
    """
    xs = [float(v) for v in x]
    n = len(xs)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("seed index out of range")
    args: list = list(xs)
    if i == j:
        args[i] = HyperDual(xs[i], 1.0, 1.0, 0.0)
    else:
        args[i] = HyperDual(xs[i], 1.0, 0.0, 0.0)
        args[j] = HyperDual(xs[j], 0.0, 1.0, 0.0)
    r, d1, d2, d12 = parts(f(args))
    return float(r), float(d1), float(d2), float(d12)


def gradient_and_hessian(f, x):
    """Dense gradient and Hessian of a scalar function by pair probing."""
    x = [float(v) for v in x]
    n = len(x)
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    val = 0.0
    for i in range(n):
        for j in range(i, n):
            val, di, dj, dij = second_partials(f, x, i, j)
            grad[i] = di
            grad[j] = dj
            hess[i, j] = hess[j, i] = dij
    return val, grad, hess
