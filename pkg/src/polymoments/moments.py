"""Exact moments M_n(f) = integral over [0, 1] of f(x)^n.

The polynomial is rewritten as f = g / D with Gaussian-integer coefficients
g and a positive integer D, so powers are computed on Python ints held in
numpy object arrays. The exact value is then

    M_n = sum_k g^n_k * (L / (k+1)) / (L * D^n),    L = lcm(1..deg(g^n)+1).

Zero tests are exact: a moment is zero iff both rational parts are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InputError, ResourceLimitError
from .polynomial import ComplexRational, Polynomial

DEFAULT_N_MAX = 200
DEFAULT_BIT_CAP = 10**6


@dataclass(frozen=True)
class MomentSequence:
    """M_0..M_{n_max} for one polynomial."""

    poly: Polynomial
    values: tuple[ComplexRational, ...]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> ComplexRational:
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def items(self):
        return enumerate(self.values)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(v) for v in self.values], dtype=complex)

    def log_abs(self, n: int) -> float:
        return log_abs(self.values[n])

    def scaled(self, c) -> "MomentSequence":
        """The sequence c^n M_n (exact); the moments of c*f."""
        c = ComplexRational.coerce(c)
        out, cn = [], ComplexRational(1)
        for v in self.values:
            out.append(cn * v)
            cn = cn * c
        return MomentSequence(self.poly.scale(c), tuple(out))


def log_abs(c: ComplexRational) -> float:
    """log|c| computed from the exact squared modulus (no under/overflow)."""
    n2 = c.abs2()
    if n2 == 0:
        return -math.inf
    return 0.5 * (math.log(n2.numerator) - math.log(n2.denominator))


# integer representation --------------------------------------------------

def _integer_form(f: Polynomial) -> tuple[int, np.ndarray, np.ndarray]:
    """Return (D, re, im) with f = (re + i*im) / D, re/im integer object arrays."""
    den = 1
    for c in f.coefficients:
        den = math.lcm(den, c.re.denominator, c.im.denominator)
    re = np.array([int(c.re * den) for c in f.coefficients], dtype=object)
    im = np.array([int(c.im * den) for c in f.coefficients], dtype=object)
    return den, re, im


def _convolve(ar, ai, br, bi):
    """Product of two Gaussian-integer coefficient vectors (object arrays)."""
    if len(ar) < len(br):
        ar, ai, br, bi = br, bi, ar, ai
    n = len(ar)
    out_r = np.zeros(n + len(br) - 1, dtype=object)
    out_i = np.zeros(n + len(br) - 1, dtype=object)
    a_real = not any(ai)
    for j in range(len(br)):
        xr, xi = br[j], bi[j]
        if xr:
            out_r[j:j + n] += ar * xr
            if not a_real:
                out_i[j:j + n] += ai * xr
        if xi:
            out_i[j:j + n] += ar * xi
            if not a_real:
                out_r[j:j + n] -= ai * xi
    return out_r, out_i


class _Integrator:
    """Caches lcm weights L/(k+1) for integrating coefficient vectors."""

    def __init__(self):
        self._lcm = 1
        self._upto = 0
        self._weights = np.zeros(0, dtype=object)

    def weights(self, length: int) -> tuple[int, np.ndarray]:
        if length > self._upto:
            lcm = self._lcm
            for k in range(self._upto + 1, length + 1):
                lcm = math.lcm(lcm, k)
            self._lcm, self._upto = lcm, length
            self._weights = np.array([lcm // (k + 1) for k in range(length)], dtype=object)
        return self._lcm, self._weights[:length]

    def integrate(self, re, im, den_power: int) -> ComplexRational:
        lcm, w = self.weights(len(re))
        total_den = lcm * den_power
        return ComplexRational(Fraction(int(np.dot(re, w)), total_den), Fraction(int(np.dot(im, w)), total_den))


def _max_bits(re, im) -> int:
    if len(re) == 0:
        return 0
    return max(max(abs(v) for v in re).bit_length(), max(abs(v) for v in im).bit_length())


def _check_cap(re, im, den_power: int, n: int, bit_cap: Optional[int]) -> None:
    if bit_cap is None:
        return
    bits = max(_max_bits(re, im), den_power.bit_length())
    if bits > bit_cap:
        raise ResourceLimitError(
            f"coefficient size {bits} bits exceeds cap {bit_cap} at n={n}; reduce n_max or raise the cap"
        )


# public operations ---------------------------------------------------------

def moment(f: Polynomial, n: int) -> ComplexRational:
    """Exact M_n(f), computed independently for this n (binary powering)."""
    if n < 0:
        raise InputError("moment index must be non-negative")
    if f.is_zero():
        return ComplexRational(1 if n == 0 else 0)
    den, gr, gi = _integer_form(f)
    rr = np.array([1], dtype=object)
    ri = np.array([0], dtype=object)
    k = n
    while k:
        if k & 1:
            rr, ri = _convolve(rr, ri, gr, gi)
        k >>= 1
        if k:
            gr, gi = _convolve(gr, gi, gr, gi)
    return _Integrator().integrate(rr, ri, den**n)


def iter_moments(f: Polynomial, bit_cap: Optional[int] = DEFAULT_BIT_CAP) -> Iterator[ComplexRational]:
    """Yield M_0, M_1, ... indefinitely, reusing f^n to build f^(n+1)."""
    integrator = _Integrator()
    yield ComplexRational(1)
    if f.is_zero():
        while True:
            yield ComplexRational(0)
    den, gr, gi = _integer_form(f)
    cr = np.array([1], dtype=object)
    ci = np.array([0], dtype=object)
    den_power = 1
    n = 0
    while True:
        n += 1
        cr, ci = _convolve(cr, ci, gr, gi)
        den_power *= den
        _check_cap(cr, ci, den_power, n, bit_cap)
        yield integrator.integrate(cr, ci, den_power)


def moment_sequence(f: Polynomial, n_max: int = DEFAULT_N_MAX, bit_cap: Optional[int] = DEFAULT_BIT_CAP) -> MomentSequence:
    """M_0..M_{n_max} exactly.

    Raises ResourceLimitError when a coefficient of f^n (numerator or the
    common denominator D^n) needs more than ``bit_cap`` bits.
    """
    if n_max < 1:
        raise InputError("n_max must be at least 1")
    it = iter_moments(f, bit_cap)
    return MomentSequence(f, tuple(next(it) for _ in range(n_max + 1)))


def scale_law_check(f: Polynomial, c, n: int) -> bool:
    """Self-test: M_n(c f) == c^n M_n(f), exactly."""
    c = ComplexRational.coerce(c)
    return moment(f.scale(c), n) == c**n * moment(f, n)


def first_nonzero_index(seq: MomentSequence | Sequence[ComplexRational], start: int = 0) -> Optional[int]:
    """Least n >= start with M_n != 0, or None if all vanish up to n_max."""
    values = seq.values if isinstance(seq, MomentSequence) else seq
    if start > len(values) - 1:
        raise InputError(f"start index {start} beyond n_max {len(values) - 1}")
    for n in range(start, len(values)):
        if values[n]:
            return n
    return None


# dump formats ------------------------------------------------------------

def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_exact(seq: MomentSequence) -> str:
    """One ``n<TAB>re_num/re_den<TAB>im_num/im_den`` line per moment."""
    return "".join(f"{n}\t{_frac(v.re)}\t{_frac(v.im)}\n" for n, v in seq.items())


def parse_exact(text: str) -> list[tuple[int, ComplexRational]]:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        n, re, im = line.split("\t")
        rows.append((int(n), ComplexRational(Fraction(re), Fraction(im))))
    return rows


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def format_csv(seq: MomentSequence) -> str:
    """Float companion: ``n,re,im,abs,abs_nth_root`` (nan root for n=0)."""
    lines = ["n,re,im,abs,abs_nth_root"]
    for n, v in seq.items():
        la = log_abs(v)
        absval = _exp(la)
        root = math.nan if n == 0 else _exp(la / n)
        z = complex(v)
        lines.append(f"{n},{z.real!r},{z.imag!r},{absval!r},{root!r}")
    return "\n".join(lines) + "\n"
