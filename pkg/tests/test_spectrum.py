import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymoments.errors import InputError
from polymoments.polynomial import ComplexRational, Polynomial
from polymoments.spectrum import (
    CRITICAL,
    ENDPOINT_0,
    ENDPOINT_1,
    CriticalSet,
    critical_set,
    horner_noise,
    roots,
    roots_of_coefficients,
    sup_norm,
    taylor_coefficients,
)

from conftest import HALF, X, complex_rationals, nonconstant_polynomials, polynomials

P = Polynomial


def sorted_values(rs):
    return sorted((r.value for r in rs), key=lambda z: (round(z.real, 9), round(z.imag, 9)))


class TestRoots:
    def test_examples(self):
        vals = sorted_values(roots(X * X - 1))
        assert vals == [pytest.approx(-1, abs=1e-12), pytest.approx(1, abs=1e-12)]
        double = roots(X * X)
        assert all(abs(r.value) <= max(r.radius, 1e-7) for r in double)
        assert len(double) == 2
        (r,) = roots(P([1, -2]))
        assert r.value == pytest.approx(0.5, abs=1e-15)

    def test_constant_rejected(self):
        with pytest.raises(InputError):
            roots(P([3]))
        with pytest.raises(InputError):
            roots(P())

    def test_companion_and_aberth_agree(self):
        f = P.from_roots([1, -2, ComplexRational(0, 1), Fraction(1, 3)], leading=3)
        a = sorted_values(roots(f, method="aberth"))
        c = sorted_values(roots(f, method="companion"))
        assert np.allclose(a, c, atol=1e-12)
        assert np.allclose(a, sorted([-2, 1j, 1 / 3, 1], key=lambda z: (complex(z).real, complex(z).imag)), atol=1e-12)

    def test_radius_contains_true_root(self):
        f = P.from_roots([HALF, HALF, 2])
        for r in roots(f):
            assert min(abs(r.value - 0.5), abs(r.value - 2)) <= r.radius * 1.0001 + 1e-15

    @settings(max_examples=150, deadline=None)
    @given(nonconstant_polynomials(8, num=10, den=1, allow_complex=True))
    def test_residual_certificate(self, p):
        c = p.to_numpy()
        rs = roots_of_coefficients(c)
        assert len(rs) == len(c) - 1
        bound = 1e-8 * (1 + np.abs(c).max())
        for r in rs:
            assert abs(np.polynomial.polynomial.polyval(r.value, c)) <= bound

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=2, max_size=9))
    def test_float_coefficients_residual_at_rounding_floor(self, coeffs):
        c = np.array(coeffs)
        if abs(c[-1]) < 1e-3:
            c[-1] = 1.0
        for r in roots_of_coefficients(c):
            floor = 64 * horner_noise(c, r.value)
            assert abs(np.polynomial.polynomial.polyval(r.value, c)) <= max(1e-8 * (1 + np.abs(c).max()), floor)

    def test_taylor_shift(self):
        c = np.array([1, -3, 0, 2], dtype=complex)
        t = taylor_coefficients(c, 1.5 - 0.5j)
        w = 0.3 + 0.1j
        assert np.polynomial.polynomial.polyval(w, t) == pytest.approx(np.polynomial.polynomial.polyval(1.5 - 0.5j + w, c))


class TestCriticalSet:
    def test_identity(self):
        S = critical_set(X)
        assert sorted(e.value.real for e in S.elements) == [0, 1]
        assert S.max_modulus == 1

    def test_tent(self):
        # f' = 1 - 2x vanishes at 1/2, f(1/2) = 1/4; f(0) = f(1) = 0 merge
        S = critical_set(X * (1 - X))
        assert len(S) == 2
        zero = [e for e in S.elements if abs(e.value) < 1e-12][0]
        assert set(zero.kinds) == {ENDPOINT_0, ENDPOINT_1}
        quarter = [e for e in S.elements if abs(e.value - 0.25) < 1e-12][0]
        assert quarter.kinds == (CRITICAL,)
        assert S.max_modulus == pytest.approx(0.25)

    def test_square(self):
        S = critical_set(X * X)
        assert len(S) == 2
        zero = [e for e in S.elements if abs(e.value) < 1e-12][0]
        assert set(zero.kinds) == {ENDPOINT_0, CRITICAL}

    def test_constant_and_cubic(self):
        S = critical_set(P([ComplexRational(2, 1)]))
        assert len(S) == 1 and S.max_modulus == pytest.approx(abs(2 + 1j))
        S3 = critical_set(X**3)
        assert len(S3) == 2

    def test_complex_example(self):
        f = P([HALF, ComplexRational(0, 1)])
        S = critical_set(f)
        assert sorted(abs(e.value) for e in S.elements) == [pytest.approx(0.5), pytest.approx(abs(0.5 + 1j))]

    @settings(max_examples=60, deadline=None)
    @given(nonconstant_polynomials(6, num=5, den=3))
    def test_invariants(self, f):
        S = critical_set(f)
        d = f.degree()
        assert 1 <= len(S) <= (d - 1) + 2
        kinds = [k for e in S.elements for k in e.kinds]
        assert ENDPOINT_0 in kinds and ENDPOINT_1 in kinds
        els = S.elements
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                assert abs(els[i].value - els[j].value) > els[i].radius + els[j].radius
        assert S.max_modulus == pytest.approx(max(abs(e.value) for e in els))
        # every critical value really is f at a root of f'
        crit = [complex(f.eval(r.value)) for r in roots(f.derivative())] if d >= 2 else []
        for v in crit + [complex(f(0)), complex(f(1))]:
            assert min(abs(v - e.value) - e.radius for e in els) <= 1e-6 * (1 + abs(v))

    @settings(max_examples=40, deadline=None)
    @given(nonconstant_polynomials(5, num=4, den=2), complex_rationals().filter(bool))
    def test_scale_equivariance(self, f, c):
        S = critical_set(f)
        Sc = critical_set(f.scale(c))
        cc = complex(c)
        for e in S.elements:
            target = cc * e.value
            assert min(abs(target - g.value) - g.radius - abs(cc) * e.radius for g in Sc.elements) <= 1e-8 * (1 + abs(target))
        assert Sc.max_modulus == pytest.approx(abs(cc) * S.max_modulus, rel=1e-6, abs=1e-9)

    def test_json_round_trip(self):
        S = critical_set(X * X * (X - 1))
        text = S.to_json()
        assert '"kinds"' in text and '"max_modulus"' in text
        back = CriticalSet.from_json(text)
        assert back == S


class TestSupNorm:
    def test_examples(self):
        s = sup_norm(X)
        assert (s.value, s.argmax) == (pytest.approx(1), 1.0)
        s = sup_norm(X - HALF)
        assert s.value == pytest.approx(0.5) and s.argmax in (0.0, 1.0)
        s = sup_norm(X * (1 - X))
        assert s.value == pytest.approx(0.25, abs=1e-15) and s.argmax == pytest.approx(0.5)

    @settings(max_examples=60, deadline=None)
    @given(polynomials(6, num=10, den=3))
    def test_dominates_grid(self, f):
        s = sup_norm(f)
        grid = np.linspace(0, 1, 10_001)
        vals = np.abs(f.eval(grid)) if not f.is_zero() else np.zeros(1)
        assert s.value >= vals.max() - 1e-8
        assert s.value >= abs(complex(f(0))) - s.error - 1e-12
        assert s.value >= abs(complex(f(1))) - s.error - 1e-12
        assert 0 <= s.argmax <= 1
        assert s.value == pytest.approx(abs(f.eval(s.argmax)) if not f.is_zero() else 0, abs=1e-12)

    def test_real_sup_not_above_max_S(self):
        # for real f the max of |f| is an endpoint or a real critical value
        for f in (X, X - HALF, X * (1 - X), X * X * (X - 1), P([1, -5, 4, 3])):
            assert sup_norm(f).value <= critical_set(f).max_modulus * (1 + 1e-12) + 1e-12
