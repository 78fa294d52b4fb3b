"""Exact polynomials with Gaussian-rational coefficients.

Coefficients are stored low-to-high, ``a0 + a1 x + ... + ad x^d``, as
:class:`ComplexRational` values (pairs of :class:`fractions.Fraction`).
Everything here is immutable; results of arithmetic are new objects in
canonical form (reduced fractions, no trailing zero coefficients).

Text grammar (CLI and file formats)::

    a0,a1,...,ad      each ai is R | Si | R+Si | R-Si   (R, S like 3/2, -1, 0)

e.g. ``"-1/2,1"`` is x - 1/2 and ``"0,0,1i"`` is i x^2. Whitespace is ignored.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import PolySyntaxError

Scalar = Union[int, Fraction, "ComplexRational"]


class ComplexRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    def __reduce__(self):
        return (ComplexRational, (self.re, self.im))

    @classmethod
    def coerce(cls, value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, _RationalABC)):
            return cls(Fraction(value))
        if isinstance(value, str):
            return parse_coefficient(value)
        raise TypeError(f"cannot convert {type(value).__name__} to ComplexRational exactly")

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        if o.im == 0:
            return ComplexRational(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return ComplexRational(self.re * o.re, self.re * o.im)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) * self.reciprocal()

    def reciprocal(self) -> "ComplexRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("ComplexRational division by zero")
        return ComplexRational(self.re / n, -self.im / n)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result, base = ComplexRational(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    # comparisons / conversions ----------------------------------------
    def __eq__(self, other):
        try:
            o = ComplexRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({str(self)!r})"

    def __str__(self):
        if self.im == 0:
            return _fmt_fraction(self.re)
        if self.re == 0:
            return _fmt_fraction(self.im) + "i"
        sign = "+" if self.im > 0 else "-"
        return f"{_fmt_fraction(self.re)}{sign}{_fmt_fraction(abs(self.im))}i"


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)


class Polynomial:
    """Univariate polynomial with exact :class:`ComplexRational` coefficients.

    ``Polynomial([a0, a1, ..., ad])``; entries may be ints, Fractions,
    ComplexRationals or coefficient strings. The zero polynomial has no
    coefficients and degree -1.
    """

    __slots__ = ("_coeffs", "_np")

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        cs = [ComplexRational.coerce(c) for c in coefficients]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "_coeffs", tuple(cs))
        object.__setattr__(self, "_np", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self._coeffs,))

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence[Scalar], leading: Scalar = 1) -> "Polynomial":
        p = cls([leading])
        for r in roots:
            p = p * cls([-ComplexRational.coerce(r), 1])
        return p

    # structure ----------------------------------------------------------
    @property
    def coefficients(self) -> tuple[ComplexRational, ...]:
        return self._coeffs

    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def leading(self) -> ComplexRational:
        return self._coeffs[-1] if self._coeffs else ZERO

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __getitem__(self, k: int) -> ComplexRational:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else ZERO

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        try:
            return self._coeffs == Polynomial([other])._coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_text(self) -> str:
        """Render in the coefficient-list grammar (inverse of :func:`parse_poly`)."""
        if not self._coeffs:
            return "0"
        return ",".join(str(c) for c in self._coeffs)

    __str__ = to_text

    # ring operations -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial([other])
            except TypeError:
                return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + b[k] if k < len(b) else x for k, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self._coeffs])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial([other])
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                c = ComplexRational.coerce(other)
            except TypeError:
                return NotImplemented
            return Polynomial([c * a for a in self._coeffs])
        a, b = self._coeffs, other._coeffs
        if not a or not b:
            return Polynomial()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial power needs a non-negative integer exponent")
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        return self * ComplexRational.coerce(c)

    def conjugate(self) -> "Polynomial":
        """Coefficient-wise conjugate, i.e. the polynomial x -> conj(f(conj x))."""
        return Polynomial([c.conjugate() for c in self._coeffs])

    def monic(self) -> "Polynomial":
        if not self._coeffs:
            raise ZeroDivisionError("zero polynomial has no monic form")
        inv = self.leading.reciprocal()
        return Polynomial([c * inv for c in self._coeffs])

    def derivative(self) -> "Polynomial":
        return Polynomial([c * k for k, c in enumerate(self._coeffs)][1:])

    def integrate_unit(self) -> ComplexRational:
        """Exact value of the integral of p over [0, 1]: sum a_k / (k+1)."""
        re = sum((c.re / (k + 1) for k, c in enumerate(self._coeffs)), Fraction(0))
        im = sum((c.im / (k + 1) for k, c in enumerate(self._coeffs)), Fraction(0))
        return ComplexRational(re, im)

    # evaluation -----------------------------------------------------------
    def __call__(self, z: Scalar) -> ComplexRational:
        """Exact Horner evaluation at a rational (or Gaussian-rational) point."""
        z = ComplexRational.coerce(z)
        acc = ZERO
        for c in reversed(self._coeffs):
            acc = acc * z + c
        return acc

    def to_numpy(self) -> np.ndarray:
        """Coefficients as a complex128 array, low to high (cached)."""
        if self._np is None:
            arr = np.array([complex(c) for c in self._coeffs], dtype=complex)
            arr.flags.writeable = False
            object.__setattr__(self, "_np", arr)
        return self._np

    def eval(self, z):
        """Floating Horner evaluation; accepts scalars or numpy arrays."""
        cs = self.to_numpy()
        if cs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        acc = np.full(np.shape(z), cs[-1], dtype=complex) if np.ndim(z) else complex(cs[-1])
        for c in cs[-2::-1]:
            acc = acc * z + c
        return acc


# module-level spellings of the ring operations ---------------------------

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def pow(p: Polynomial, n: int) -> Polynomial:  # noqa: A001 - mirrors the ring op name
    return p**n


def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def integrate_unit(p: Polynomial) -> ComplexRational:
    return p.integrate_unit()


def evaluate(p: Polynomial, z):
    return p.eval(z)


# parsing ----------------------------------------------------------------

def _scan_rational(s: str, i: int, origin: list[int]) -> tuple[Fraction | None, int]:
    start = i
    while i < len(s) and s[i].isdigit():
        i += 1
    if i == start:
        return None, start
    num = int(s[start:i])
    if i < len(s) and s[i] == "/":
        j = i + 1
        k = j
        while k < len(s) and s[k].isdigit():
            k += 1
        if k == j:
            raise PolySyntaxError("expected denominator digits", _at(origin, j))
        den = int(s[j:k])
        if den == 0:
            raise PolySyntaxError("zero denominator", _at(origin, j))
        return Fraction(num, den), k
    return Fraction(num), i


def _at(origin: list[int], i: int) -> int:
    return origin[i] if i < len(origin) else origin[-1] + 1


def _parse_field(s: str, origin: list[int]) -> ComplexRational:
    i = 0
    sign = 1
    if i < len(s) and s[i] in "+-":
        sign = -1 if s[i] == "-" else 1
        i += 1
    first, i = _scan_rational(s, i, origin)
    if i == len(s):
        if first is None:
            raise PolySyntaxError("expected a number", _at(origin, i))
        return ComplexRational(sign * first)
    if s[i] == "i":
        if i + 1 != len(s):
            raise PolySyntaxError("unexpected character", _at(origin, i + 1))
        return ComplexRational(0, sign * (1 if first is None else first))
    if s[i] in "+-" and first is not None:
        sign2 = -1 if s[i] == "-" else 1
        second, j = _scan_rational(s, i + 1, origin)
        if j >= len(s) or s[j] != "i":
            raise PolySyntaxError("expected imaginary part ending in 'i'", _at(origin, j))
        if j + 1 != len(s):
            raise PolySyntaxError("unexpected character", _at(origin, j + 1))
        return ComplexRational(sign * first, sign2 * (1 if second is None else second))
    raise PolySyntaxError("unexpected character", _at(origin, i))


def _split_fields(text: str):
    """Yield (compact_field, offsets) with whitespace removed."""
    chars: list[str] = []
    origin: list[int] = []
    field_start = 0
    for pos, ch in enumerate(text):
        if ch == ",":
            yield "".join(chars), origin, field_start
            chars, origin, field_start = [], [], pos + 1
        elif not ch.isspace():
            chars.append(ch)
            origin.append(pos)
    yield "".join(chars), origin, field_start


def parse_coefficient(text: str) -> ComplexRational:
    s = "".join(ch for ch in text if not ch.isspace())
    origin = [k for k, ch in enumerate(text) if not ch.isspace()]
    if not s:
        raise PolySyntaxError("empty coefficient", 0, text)
    return _parse_field(s, origin)


def parse_poly(text: str) -> Polynomial:
    """Parse ``"a0,a1,...,ad"`` into an exact :class:`Polynomial`.

    Raises :class:`PolySyntaxError` carrying the character offset of the
    first offending character (or of the empty field).
    """
    coeffs = []
    for field, origin, start in _split_fields(text):
        if not field:
            raise PolySyntaxError("empty coefficient", start, text)
        try:
            coeffs.append(_parse_field(field, origin))
        except PolySyntaxError as exc:
            raise PolySyntaxError(str(exc).rsplit(" at offset", 1)[0], exc.offset, text) from None
    return Polynomial(coeffs)
