"""Coefficient fields: exact rationals, Gaussian rationals and complex floats.

A computation runs in a single field.  Coefficients are plain Python values
(``gmpy2.mpq`` for QQ, :class:`GaussQ` for QQ(i), ``complex`` for CC); the
field object owns coercion, zero tests and the string format used in reports.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import ScalarMismatch

_MPQ = type(mpq(0))
_RAT = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def _to_mpq(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return mpq(x)
    if isinstance(x, type(gmpy2.mpz(0))):
        return mpq(x)
    if isinstance(x, str):
        m = _RAT.match(x)
        if not m:
            raise ValueError(f"not a rational literal: {x!r}")
        return mpq(int(m.group(1)), int(m.group(2) or 1))
    raise ScalarMismatch(f"cannot use {type(x).__name__} value {x!r} as an exact rational")


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussQ:
    """Gaussian rational ``re + im*i`` with exact ``mpq`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, _MPQ) else _to_mpq(re)
        self.im = im if isinstance(im, _MPQ) else _to_mpq(im)

    @staticmethod
    def _wrap(re, im):
        g = GaussQ.__new__(GaussQ)
        g.re = re
        g.im = im
        return g

    def __add__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._wrap(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, _MPQ)):
            return GaussQ._wrap(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ._wrap(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, _MPQ)):
            return GaussQ._wrap(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, _MPQ)):
            return GaussQ._wrap(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return GaussQ._wrap(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussQ._wrap(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, _MPQ)):
            return GaussQ._wrap(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussQ._wrap(self.re, -self.im)

    def inverse(self):
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        return GaussQ._wrap(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussQ):
            return self * other.inverse()
        if isinstance(other, (int, _MPQ)):
            if other == 0:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ._wrap(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, _MPQ)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussQ._wrap(mpq(1), mpq(0))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _MPQ)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        return QQI.format(self)


class Field:
    """Base class for the three coefficient fields."""

    name = "?"
    exact = True

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (self.name,)

    def __repr__(self):
        return self.name

    def is_zero(self, x) -> bool:
        return not x

    def is_resonant(self, value, norm: int = 0) -> bool:
        """Zero test for an eigenvalue <lambda, m>; ``norm`` is ||m||."""
        return self.is_zero(value)

    def check_same(self, other: "Field"):
        if self != other:
            raise ScalarMismatch(f"cannot mix scalars over {self} and {other}")

    def inv_factorial(self, j: int):
        return self.coerce(mpq(1, math.factorial(j)))


class RationalField(Field):
    name = "QQ"
    zero = mpq(0)
    one = mpq(1)

    def coerce(self, x):
        if isinstance(x, GaussQ):
            if x.im != 0:
                raise ScalarMismatch(f"{x} is not real")
            return x.re
        if isinstance(x, complex):
            raise ScalarMismatch("float value in exact rational computation")
        return _to_mpq(x)

    def format(self, x) -> str:
        return format_rational(x)

    def parse(self, s: str):
        return _to_mpq(s)

    def modulus(self, x) -> float:
        return abs(float(x))

    def to_complex(self, x) -> complex:
        return complex(float(x), 0.0)


class GaussianField(Field):
    name = "QQI"
    zero = GaussQ(0, 0)
    one = GaussQ(1, 0)
    I = GaussQ(0, 1)

    def coerce(self, x):
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            raise ScalarMismatch("float value in exact Gaussian computation")
        if isinstance(x, tuple):
            return GaussQ(x[0], x[1])
        if isinstance(x, str):
            return self.parse(x)
        return GaussQ(_to_mpq(x), 0)

    def format(self, x) -> str:
        im = x.im
        sign = "-" if im < 0 else "+"
        return f"{format_rational(x.re)}{sign}{format_rational(abs(im))}*i"

    _PAT = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)\s*(?:([+-])\s*(\d+(?:/\d+)?)\s*\*\s*i)?\s*$")

    def parse(self, s: str):
        m = self._PAT.match(s)
        if not m:
            raise ValueError(f"not a Gaussian rational literal: {s!r}")
        re_part = _to_mpq(m.group(1))
        im = _to_mpq(m.group(3)) if m.group(3) else mpq(0)
        if m.group(2) == "-":
            im = -im
        return GaussQ(re_part, im)

    def modulus(self, x) -> float:
        return math.hypot(float(x.re), float(x.im))

    def to_complex(self, x) -> complex:
        return complex(x)


class ComplexFloatField(Field):
    """Complex doubles with an absolute zero tolerance ``eps``."""

    name = "CC"
    exact = False
    zero = 0j
    one = 1 + 0j

    def __init__(self, eps: float = 1e-12):
        self.eps = float(eps)

    def key(self):
        return (self.name, self.eps)

    def __repr__(self):
        return f"CC(eps={self.eps:g})"

    def coerce(self, x):
        if isinstance(x, complex):
            return x
        if isinstance(x, GaussQ):
            return complex(x)
        if isinstance(x, str):
            return self.parse(x)
        return complex(float(x), 0.0)

    def is_zero(self, x) -> bool:
        return abs(x) <= self.eps

    def is_resonant(self, value, norm: int = 0) -> bool:
        return abs(value) <= self.eps * (1 + norm)

    def format(self, x) -> str:
        im = x.imag
        sign = "-" if math.copysign(1.0, im) < 0 else "+"
        return f"{x.real:.17g}{sign}{abs(im):.17g}*i"

    _PAT = re.compile(r"^\s*([^*]+?)\s*(?:([+-])\s*([0-9.eE+-]+)\s*\*\s*i)?\s*$")

    def parse(self, s: str):
        m = self._PAT.match(s)
        if not m:
            raise ValueError(f"not a complex literal: {s!r}")
        re_part = float(Fraction(m.group(1))) if "/" in m.group(1) else float(m.group(1))
        im = float(m.group(3)) if m.group(3) else 0.0
        if m.group(2) == "-":
            im = -im
        return complex(re_part, im)

    def modulus(self, x) -> float:
        return abs(x)

    def to_complex(self, x) -> complex:
        return complex(x)

    def inv_factorial(self, j: int):
        return complex(1.0 / math.factorial(j), 0.0)


QQ = RationalField()
QQI = GaussianField()
CC = ComplexFloatField()


def field_from_name(name: str, eps: float = 1e-12) -> Field:
    name = name.strip().lower()
    if name in ("qq", "rational", "rationals", "exact"):
        return QQ
    if name in ("qqi", "gaussian", "gaussian-rational", "gaussian_rational"):
        return QQI
    if name in ("cc", "float", "complex", "complex-float"):
        return ComplexFloatField(eps)
    raise ValueError(f"unknown scalar field {name!r}")


def dot(field: Field, lam, m):
    """<lam, m> for an eigenvalue vector and an integer exponent vector."""
    acc = field.zero
    for li, mi in zip(lam, m):
        if mi:
            acc = acc + li * mi
    return acc


def vec_is_zero(field: Field, v) -> bool:
    return all(field.is_zero(x) for x in v)
