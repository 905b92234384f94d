from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamkac.dpsuper import (
    Shape,
    SuperPoly,
    deriv,
    format_mono,
    format_poly,
    mono_mul,
)

S5 = Shape(5, 1, 1)
S52 = Shape(5, 2, 1)


def monos(shape):
    return st.tuples(st.integers(0, shape.n1 - 1), st.integers(0, shape.n2 - 1), st.integers(0, 1))


def polys(shape, max_terms=4):
    return st.dictionaries(monos(shape), st.integers(1, shape.p - 1), max_size=max_terms).map(
        lambda d: SuperPoly(shape, d)
    )


def test_shape_validation():
    assert S5.dim == 50 and S52.dim == 250
    with pytest.raises(ValueError):
        Shape(5, 0, 1)
    with pytest.raises(ValueError, match="prime"):
        Shape(6, 1, 1)


def test_divided_powers_match_rational_model():
    # below p, x^(i) = x^i / i! exactly; compare structure constants over Q
    p = 5
    for i in range(p):
        for j in range(p - i):
            got = mono_mul(S5, (i, 0, 0), (j, 0, 0))
            want = Fraction(factorial(i + j), factorial(i) * factorial(j))
            assert got == ((i + j, 0, 0), int(want) % p)


def test_truncation_and_lucas_vanishing():
    # x1^(4) x1^(1) = 5 x1^(5) = 0 in char 5; x1^(5) exists only for t1 >= 2
    assert mono_mul(S5, (4, 0, 0), (1, 0, 0)) is None
    assert mono_mul(S52, (4, 0, 0), (1, 0, 0)) is None
    assert mono_mul(S52, (5, 0, 0), (1, 0, 0)) == ((6, 0, 0), 1)
    assert mono_mul(S5, (0, 0, 1), (0, 0, 1)) is None


def test_format_golden():
    f = SuperPoly(S5, {(2, 0, 0): 3, (0, 1, 1): 1, (0, 0, 0): 4})
    assert format_poly(f) == "4*1 + 1*x2^(1) xi + 3*x1^(2)"
    assert format_mono((1, 3, 1)) == "x1^(1) x2^(3) xi"
    assert format_poly(SuperPoly(S5, {})) == "0"


def test_coefficients_reduced_and_range_checked():
    assert SuperPoly(S5, {(1, 0, 0): 5}).is_zero()
    with pytest.raises(ValueError):
        SuperPoly(S5, {(5, 0, 0): 1})


def test_parity_homogeneity():
    f = SuperPoly(S5, {(1, 0, 0): 1, (0, 0, 1): 1})
    with pytest.raises(ValueError):
        f.parity
    assert f.part(1) == SuperPoly.mono(S5, 0, 0, 1)


@settings(max_examples=80, deadline=None)
@given(polys(S5), polys(S5))
def test_supercommutative(a, b):
    for pa in (0, 1):
        for pb in (0, 1):
            x, y = a.part(pa), b.part(pb)
            assert x * y == (y * x).scale((-1) ** (pa * pb))


@settings(max_examples=60, deadline=None)
@given(polys(S52), polys(S52), polys(S52))
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(polys(S5))
def test_unit(a):
    one = SuperPoly.one(S5)
    assert one * a == a == a * one


@settings(max_examples=80, deadline=None)
@given(polys(S52), polys(S52), st.sampled_from([1, 2, 3]))
def test_leibniz(a, b, k):
    # |D_k| = 1 only for k = 3
    dk = 1 if k == 3 else 0
    for pa in (0, 1):
        x = a.part(pa)
        lhs = deriv(k, x * b)
        rhs = deriv(k, x) * b + (x * deriv(k, b)).scale((-1) ** (dk * pa))
        assert lhs == rhs


def test_derivation_lowers_divided_power():
    assert deriv(1, SuperPoly.mono(S52, 7, 2, 1)) == SuperPoly.mono(S52, 6, 2, 1)
    assert deriv(3, SuperPoly.mono(S5, 1, 1, 1)) == SuperPoly.mono(S5, 1, 1, 0)
    assert deriv(2, SuperPoly.mono(S5, 1, 0, 0)).is_zero()
