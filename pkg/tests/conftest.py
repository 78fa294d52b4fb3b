from fractions import Fraction

import pytest
from hypothesis import strategies as st

from polymoments.polynomial import ComplexRational, Polynomial

X = Polynomial.x()
HALF = Fraction(1, 2)


def small_fractions(num=4, den=3):
    return st.builds(Fraction, st.integers(-num, num), st.integers(1, den))


def complex_rationals(num=4, den=3, allow_complex=True):
    im = small_fractions(num, den) if allow_complex else st.just(Fraction(0))
    return st.builds(ComplexRational, small_fractions(num, den), im)


def polynomials(max_degree=4, num=4, den=3, allow_complex=True):
    return st.lists(complex_rationals(num, den, allow_complex), min_size=0, max_size=max_degree + 1).map(Polynomial)


def nonconstant_polynomials(max_degree=4, num=4, den=3, allow_complex=True):
    return polynomials(max_degree, num, den, allow_complex).filter(lambda p: p.degree() >= 1)


@pytest.fixture
def x():
    return X


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
