"""Exact univariate polynomials with rational coefficients.

Coefficients are held as Python integers over one shared positive
denominator, so every operation is exact.  Large products go through
Kronecker substitution (one big-integer multiplication) instead of the
quadratic schoolbook loop.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

_SCHOOLBOOK_LIMIT = 48


def _trim(nums: list[int]) -> list[int]:
    while nums and nums[-1] == 0:
        nums.pop()
    return nums


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    """Evaluate a polynomial with signed int coefficients at 2**(8*nbytes)."""
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker(a: Sequence[int], b: Sequence[int]) -> list[int]:
    ma, mb = max(abs(c) for c in a), max(abs(c) for c in b)
    # digits must hold the inputs as well as every output coefficient
    bound = max(ma * mb * min(len(a), len(b)), ma, mb)
    # signed digits need one spare bit
    nbytes = (bound.bit_length() + 2 + 7) // 8
    n_out = len(a) + len(b) - 1
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes(half.to_bytes(nbytes, "little") * n_out, "little")
    raw = (prod + offset).to_bytes(nbytes * n_out, "little")
    return [
        int.from_bytes(raw[k * nbytes:(k + 1) * nbytes], "little") - half
        for k in range(n_out)
    ]


def _int_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOLBOOK_LIMIT:
        return _schoolbook(a, b)
    return _kronecker(a, b)


class RatPoly:
    """Immutable polynomial ``sum(c[k] * x**k)`` with exact rational coefficients."""

    __slots__ = ("_num", "_den")

    def __init__(self, coeffs: Iterable[Rational | int] = ()):
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        self._set(nums, den)

    def _set(self, nums: list[int], den: int) -> None:
        nums = _trim(nums)
        if not nums:
            self._num, self._den = (), 1
            return
        g = den
        for c in nums:
            g = gcd(g, c)
            if g == 1:
                break
        if g != 1:
            nums = [c // g for c in nums]
            den //= g
        self._num, self._den = tuple(nums), den

    @classmethod
    def _raw(cls, nums: list[int], den: int) -> "RatPoly":
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    @classmethod
    def constant(cls, c: Rational | int) -> "RatPoly":
        return cls([c])

    @classmethod
    def identity(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c: Rational | int = 1) -> "RatPoly":
        return cls([0] * degree + [c])

    # -- inspection ------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self._num) - 1

    def is_zero(self) -> bool:
        return not self._num

    def __repr__(self) -> str:
        if not self._num:
            return "RatPoly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{k}" if k else f"{c}")
        return "RatPoly(" + " + ".join(terms) + ")"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly.constant(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly.constant(other)
        raise TypeError(f"cannot combine RatPoly with {type(other).__name__}")

    def __add__(self, other) -> "RatPoly":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        den = self._den * o._den // gcd(self._den, o._den)
        fa, fb = den // self._den, den // o._den
        n = max(len(self._num), len(o._num))
        a = list(self._num) + [0] * (n - len(self._num))
        b = list(o._num) + [0] * (n - len(o._num))
        return RatPoly._raw([x * fa + y * fb for x, y in zip(a, b)], den)

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly._raw([-c for c in self._num], self._den)

    def __sub__(self, other) -> "RatPoly":
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other) -> "RatPoly":
        return (-self) + other

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return RatPoly._raw([c * f.numerator for c in self._num], self._den * f.denominator)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return RatPoly._raw(_int_mul(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of RatPoly by zero")
        return self * (1 / Fraction(other))

    def __pow__(self, k: int) -> "RatPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result, base = RatPoly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def compose(self, inner: "RatPoly") -> "RatPoly":
        """Return ``self(inner(x))`` (Horner in polynomial arithmetic)."""
        out = RatPoly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def derivative(self) -> "RatPoly":
        return RatPoly._raw([k * c for k, c in enumerate(self._num)][1:], self._den)

    def antiderivative(self) -> "RatPoly":
        """Antiderivative vanishing at 0."""
        return RatPoly([0] + [Fraction(c, (k + 1) * self._den) for k, c in enumerate(self._num)])

    def integrate(self, a: Rational | int = 0, b: Rational | int = 1) -> Fraction:
        """Exact definite integral over [a, b]."""
        if a == 0 and b == 1:
            total = sum(Fraction(c, k + 1) for k, c in enumerate(self._num))
            return total / self._den
        anti = self.antiderivative()
        return anti(Fraction(b)) - anti(Fraction(a))

    # -- evaluation ------------------------------------------------------
    def __call__(self, x):
        """Evaluate at ``x``; exact for int/Fraction, float64 for floats and arrays."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self._num):
                acc = acc * x + c
            return acc / self._den
        return self.evaluate(x)

    def _eval_float(self, x: float) -> float:
        # Expanded arena polynomials have huge alternating coefficients, so
        # float Horner cancels badly near x = 1.  Evaluate exactly at the
        # dyadic rational x = p / 2**e and round once.
        if not self._num:
            return 0.0
        if not np.isfinite(x):
            raise ValueError(f"cannot evaluate at {x}")
        p, q = float(x).as_integer_ratio()
        e = q.bit_length() - 1
        D = len(self._num) - 1
        acc = self._num[D]
        for k in range(D - 1, -1, -1):
            acc = acc * p + (self._num[k] << (e * (D - k)))
        return acc / (self._den << (e * D))

    def evaluate(self, x) -> np.ndarray | float:
        """Correctly rounded float value at ``x`` (scalar or array)."""
        x_arr = np.asarray(x, dtype=float)
        if x_arr.ndim == 0:
            return self._eval_float(float(x_arr))
        out = np.array([self._eval_float(v) for v in x_arr.ravel()], dtype=float)
        return out.reshape(x_arr.shape)
