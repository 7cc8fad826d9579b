import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbernoulli.arith import PadicContext, padic_log_of_rational, padic_of_rational
from qbernoulli.logring import LogLaurent, ll_arith, ll_evaluate, ll_negate_L

coeffs = st.fractions(min_value=F(-100), max_value=F(100), max_denominator=50)
elements = st.dictionaries(st.integers(-2, 2), coeffs, max_size=4).map(LogLaurent)


def test_mul_example():
    one_plus = LogLaurent({0: F(1), 1: F(1)})
    one_minus = LogLaurent({0: F(1), 1: F(-1)})
    assert ll_arith(one_plus, one_minus, "mul") == LogLaurent({0: F(1), 2: F(-1)})


def test_laurent_inverse_degree():
    assert LogLaurent.L(1) * LogLaurent.L(-1) == LogLaurent.constant(1)


def test_additive_cancellation():
    a = LogLaurent({0: F(3, 7), 1: F(-2, 5)})
    assert (a + (-a)).is_zero()
    assert ll_arith(a, a, "sub") == LogLaurent()


def test_canonical_drops_zeros():
    assert LogLaurent({0: F(0), 2: F(1)}).degrees() == [2]


@given(elements, elements, elements)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_negate_examples():
    assert ll_negate_L(LogLaurent({0: F(1), 1: F(1)})) == LogLaurent({0: F(1), 1: F(-1)})
    assert ll_negate_L(LogLaurent.L(2)) == LogLaurent.L(2)
    assert ll_negate_L(LogLaurent.L(-1)) == -LogLaurent.L(-1)


@given(elements)
def test_negate_involution(a):
    assert ll_negate_L(ll_negate_L(a)) == a


@given(elements, elements)
def test_negate_multiplicative(a, b):
    assert ll_negate_L(a * b) == ll_negate_L(a) * ll_negate_L(b)


class TestEvaluation:
    def test_constant(self):
        ctx = PadicContext(5, 8)
        lnum = padic_log_of_rational(F(6), ctx)
        out = ll_evaluate(LogLaurent.constant(7), lnum)
        assert (out - padic_of_rational(7, ctx)).is_zero()

    def test_linear_is_identity(self):
        ctx = PadicContext(5, 8)
        lnum = padic_log_of_rational(F(6), ctx)
        out = ll_evaluate(LogLaurent.L(), lnum)
        assert out.valuation == lnum.valuation
        assert out.unit_mod(6) == lnum.unit_mod(6)

    def test_real_example(self):
        # (L - 5)/25 at L = ln 6, against plain float arithmetic
        poly = LogLaurent({0: F(-1, 5), 1: F(1, 25)})
        with mpmath.workdps(30):
            val = ll_evaluate(poly, mpmath.log(6))
        oracle = (math.log(6) - 5) / 25
        assert abs(float(val) - oracle) < 1e-12
        assert abs(float(val) - (-0.128330)) < 1e-6

    def test_zero_lval_negative_degree(self):
        poly = LogLaurent({-1: F(1)})
        ctx = PadicContext(5, 8)
        with pytest.raises(ZeroDivisionError):
            ll_evaluate(poly, padic_of_rational(0, ctx))
        with pytest.raises(ZeroDivisionError):
            ll_evaluate(poly, mpmath.mpf(0))

    @given(elements, elements)
    def test_padic_homomorphism(self, a, b):
        ctx = PadicContext(5, 10)
        lnum = padic_log_of_rational(F(6), ctx)
        if (a * b).coeffs and min((a * b).degrees(), default=0) < 0:
            return  # L^-1 fine, but keep the property test to products
        lhs = ll_evaluate(a * b, lnum)
        rhs = ll_evaluate(a, lnum) * ll_evaluate(b, lnum)
        d = lhs - rhs
        assert d.is_zero() or d.valuation >= min(lhs.abs_precision, rhs.abs_precision) - 1


def test_rendering():
    a = LogLaurent({-1: F(1, 2), 0: F(3), 1: F(-2, 7), 2: F(5)})
    assert str(a) == "1/2·L^-1 + 3 + -2/7·L + 5·L^2"
    assert str(LogLaurent()) == "0"
