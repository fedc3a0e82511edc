"""Foundation tests for exact Laurent-series arithmetic.

The randomized blocks run well over a thousand cases in total: ring laws,
Taylor-substitution consistency, and binomial identities, all with exact
rational arithmetic.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nvaw.series import (
    DEFAULT_RANGE, Eq, LinExpr, NonlinearError, Q, Series, Window, binom,
    format_series, parse_series, window_equal,
)

RNG = DEFAULT_RANGE


def mono(var, k, c=1):
    return Series.monomial(var, k, RNG, coeff=Q(c))


# ---------------------------------------------------------------------------
# deterministic behaviour


def test_const_and_monomial():
    s = mono("x", 2, 3) + Series.const(5)
    assert s.coeff((2,)) == 3
    assert s.coeff((0,)) == 5
    assert s.coeff((1,)) == 0


def test_multiplication_merges_windows():
    a = mono("x", -1)
    b = mono("x", 1) + Series.const(1)
    prod = a * b
    assert prod.coeff((0,)) == 1
    assert prod.coeff((-1,)) == 1


def test_window_clipping_drops_exact_flag():
    w = Window.uniform(("x",), (-2, 2))
    s = Series(("x",), {(5,): Q(1)}, w)
    assert not s.exact
    assert s.coeffs == {}


def test_deriv():
    s = mono("x", 3) + mono("x", -2)
    d = s.deriv("x")
    assert d.coeff((2,)) == 3
    assert d.coeff((-3,)) == -2


def test_extract_and_diagonal():
    s = mono("x", 1) * mono("y", 2)
    assert s.extract("x", 1).coeff((2,)) == 1
    assert s.diagonal("y", "x").coeff((3,)) == 1


def test_substitute_sum_positive_power():
    # (x)^2 with x -> x0+x2: x0^2 + 2 x0 x2 + x2^2, exact
    s = mono("x", 2)
    out = s.substitute_sum("x", "x0", "x2", RNG)
    assert out.exact
    assert out.coeff((2, 0)) == 1 and out.coeff((1, 1)) == 2
    assert out.coeff((0, 2)) == 1


def test_substitute_sum_negative_power_truncates():
    s = mono("x", -1)
    out = s.substitute_sum("x", "x1", "x2", RNG)
    # geometric series in x2/x1, inexact (truncated at the window)
    assert not out.exact
    assert out.coeff((-1, 0)) == 1
    assert out.coeff((-2, 1)) == -1


def test_substitute_sum_signs():
    # x -> x1 - x2 on x^1
    s = mono("x", 1)
    out = s.substitute_sum("x", "x1", "x2", RNG, 1, -1)
    assert out.coeff((1, 0)) == 1 and out.coeff((0, 1)) == -1


def test_negate_var():
    s = mono("x", 3) + mono("x", 2)
    out = s.negate_var("x")
    assert out.coeff((3,)) == -1 and out.coeff((2,)) == 1


def test_linexpr_symbolic_product_is_rejected():
    a = LinExpr.sym("a")
    with pytest.raises(NonlinearError):
        a * a


def test_parse_format_roundtrip():
    s = parse_series("1 + 2@(1) + -3/2@(-2)", ("x",))
    assert s.coeff((1,)) == 2 and s.coeff((-2,)) == Fraction(-3, 2)
    assert parse_series(format_series(s), ("x",)).coeffs == s.coeffs


def test_window_equal_certificates():
    a = mono("x", 1)
    assert window_equal(a, a).kind is Eq.EXACT
    clipped = Series(("x",), dict(a.coeffs), a.window, False)
    assert window_equal(a, clipped).kind is Eq.WINDOW
    assert window_equal(a, a + Series.const(1)).kind is Eq.UNEQUAL


# ---------------------------------------------------------------------------
# randomized: ring laws


coeffs = st.builds(Fraction,
                   st.integers(min_value=-30, max_value=30),
                   st.integers(min_value=1, max_value=8))
exponents = st.integers(min_value=-3, max_value=3)


@st.composite
def series_1v(draw):
    n = draw(st.integers(min_value=0, max_value=4))
    c = {(draw(exponents),): Fraction(draw(coeffs)) for _ in range(n)}
    return Series(("x",), c, Window.uniform(("x",), RNG))


@settings(max_examples=400, deadline=None)
@given(series_1v(), series_1v(), series_1v())
def test_ring_laws(a, b, c):
    assert window_equal((a + b) + c, a + (b + c)).kind is Eq.EXACT
    assert window_equal(a + b, b + a).kind is Eq.EXACT
    assert window_equal(a * b, b * a).kind is Eq.EXACT
    assert window_equal(a * (b + c), a * b + a * c).kind is Eq.EXACT
    assert window_equal(a - a, Series.zero(("x",))).kind is Eq.EXACT
    one = Series(("x",), {(0,): Q(1)}, a.window)
    assert window_equal(a * one, a).kind is Eq.EXACT


@st.composite
def poly_1v(draw):
    n = draw(st.integers(min_value=0, max_value=4))
    c = {(draw(st.integers(min_value=0, max_value=4)),): Fraction(draw(coeffs))
         for _ in range(n)}
    return Series(("x",), c, Window.uniform(("x",), RNG))


@settings(max_examples=350, deadline=None)
@given(poly_1v(), poly_1v())
def test_taylor_substitution_is_ring_hom(a, b):
    """x -> x0+x2 on polynomials is exact and multiplicative/additive."""
    sub = lambda s: s.substitute_sum("x", "x0", "x2", RNG)
    assert sub(a).exact and sub(b).exact
    assert window_equal(sub(a * b), sub(a) * sub(b)).kind is Eq.EXACT
    assert window_equal(sub(a + b), sub(a) + sub(b)).kind is Eq.EXACT


@settings(max_examples=350, deadline=None)
@given(poly_1v())
def test_taylor_substitution_zero_consistency(a):
    """Setting the first summand of x0+x2 to zero recovers the original."""
    sub = a.substitute_sum("x", "x0", "x2", RNG)
    back = sub.set_zero("x0").rename({"x2": "x"})
    assert window_equal(back, a).kind is Eq.EXACT


@settings(max_examples=400, deadline=None)
@given(st.integers(min_value=-8, max_value=8),
       st.integers(min_value=0, max_value=8))
def test_binomial_identities(n, k):
    assert binom(n, 0) == 1
    if k >= 1:
        # Pascal rule, valid for negative upper index too
        assert binom(n, k) == binom(n - 1, k) + binom(n - 1, k - 1)
    if n < 0:
        assert binom(n, k) == (-1) ** k * binom(-n + k - 1, k)
    if 0 <= n:
        import math
        assert binom(n, k) == (math.comb(n, k) if k <= n else 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=-4, max_value=4), st.integers(min_value=0, max_value=3))
def test_substitution_matches_binomial_theorem(n, k):
    """Coefficient of x0^(n-j) x2^j in (x0+x2)^n is binom(n,j)."""
    s = mono("x", n)
    out = s.substitute_sum("x", "x0", "x2", RNG)
    assert out.coeff((n - k, k)) == binom(n, k)
