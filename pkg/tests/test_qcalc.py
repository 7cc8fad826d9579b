import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbernoulli.arith import PadicContext
from qbernoulli.logring import LogLaurent
from qbernoulli.qcalc import (CharacterSum, QParam, monomial_characters,
                              monomial_derivative, q_bracket)

admissible_q = st.sampled_from(
    [F(4), F(6), F(8), F(5, 2), F(7, 2), F(1, 4), F(1, 6), F(3, 2)])


class TestQBracket:
    def test_examples(self):
        assert q_bracket(0, F(2)) == 0
        assert q_bracket(1, F(2)) == 1
        assert q_bracket(3, F(2)) == 7

    @given(st.integers(0, 20), admissible_q)
    def test_geometric_sum(self, x, q):
        assert q_bracket(x, q) == sum(q**t for t in range(x))

    @given(st.integers(0, 15), admissible_q)
    def test_q_inverse_identity(self, x, q):
        # underpins the subtraction expansion: [x]_{1/q} = q^(1-x) [x]_q
        assert q_bracket(x, 1 / q) == q ** (1 - x) * q_bracket(x, q)

    def test_q_one_rejected(self):
        with pytest.raises(ValueError):
            q_bracket(2, F(1))


class TestQParam:
    def test_padic_admissibility(self):
        ctx = PadicContext(5, 8)
        QParam(F(6), "padic", ctx)
        QParam(F(7, 2), "padic", ctx)
        with pytest.raises(ValueError):
            QParam(F(3), "padic", ctx)  # v_5(2) = 0
        with pytest.raises(ValueError):
            QParam(F(3, 2), "padic", ctx)

    def test_p2_needs_two_digits(self):
        ctx = PadicContext(2, 8)
        QParam(F(5), "padic", ctx)  # v_2(4) = 2
        with pytest.raises(ValueError):
            QParam(F(3), "padic", ctx)  # v_2(2) = 1

    def test_real_range(self):
        QParam(F(1, 2), "real")
        with pytest.raises(ValueError):
            QParam(F(2), "real")
        with pytest.raises(ValueError):
            QParam(F(-1, 2), "real")

    def test_inverse(self):
        ctx = PadicContext(5, 8)
        qp = QParam(F(6), "padic", ctx)
        assert qp.inverse().q == F(1, 6)
        with pytest.raises(ValueError):
            QParam(F(1, 2), "real").inverse()


class TestCharacterSum:
    def test_monomial_examples(self):
        q = F(6)
        assert monomial_characters(0, q).as_dict() == {0: F(1)}
        assert monomial_characters(1, q).as_dict() == {
            0: F(1, 1 - q), 1: F(-1, 1 - q)}
        assert monomial_characters(2, F(2)).as_dict() == {0: F(1), 1: F(-2), 2: F(1)}

    @given(st.integers(0, 6), st.integers(0, 12), admissible_q)
    @settings(max_examples=80)
    def test_pointwise_evaluation(self, n, x, q):
        assert monomial_characters(n, q).evaluate(x) == q_bracket(x, q) ** n

    @given(st.integers(0, 4), st.integers(0, 4), admissible_q)
    @settings(max_examples=40)
    def test_product_law(self, m, n, q):
        lhs = monomial_characters(m, q) * monomial_characters(n, q)
        assert lhs == monomial_characters(m + n, q)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            CharacterSum.from_dict(F(6), {-1: F(1)})

    def test_shift_is_pointwise_q_power(self):
        q = F(4)
        f = monomial_characters(2, q)
        g = f.shift_exponents(1)
        for x in range(6):
            assert g.evaluate(x) == f.evaluate(x) * q**x

    def test_mismatched_q(self):
        with pytest.raises(ValueError):
            monomial_characters(1, F(4)) + monomial_characters(1, F(6))

    def test_render(self):
        assert "q^(1x)" in monomial_characters(1, F(4)).render()


def _real_bracket_pow(x: float, q: float, n: int) -> float:
    return ((1 - q**x) / (1 - q)) ** n


class TestDerivative:
    def test_scalar_and_characters(self):
        q = F(6)
        scal, chars = monomial_derivative(1, q)
        assert scal == LogLaurent({1: F(1, 5)})
        assert chars.as_dict() == {1: F(1)}  # constant-1 shifted by q^x

    def test_n2_scalar(self):
        scal, chars = monomial_derivative(2, F(6))
        assert scal == LogLaurent({1: F(2, 5)})
        assert chars == monomial_characters(1, F(6)).shift_exponents(1)

    def test_inverse_q_scalar_via_negate(self):
        # d/dx [x]_{1/q}^n has scalar n * (-L) / (1/q - 1) in the base-q symbol
        q, n = F(6), 3
        scal, _ = monomial_derivative(n, 1 / q)
        in_base_q = scal.negate_L()
        assert in_base_q == LogLaurent({1: F(-n, 1) / (F(1, 6) - 1)})

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("x0", [0.5, 1.0, 2.0])
    def test_finite_difference_real_mode(self, n, x0):
        # central differences against the full derivative (with the q^x factor)
        q = 0.5
        h = 1e-6
        fd = (_real_bracket_pow(x0 + h, q, n) - _real_bracket_pow(x0 - h, q, n)) / (2 * h)
        analytic = n * (math.log(q) / (q - 1)) * _real_bracket_pow(x0, q, n - 1) * q**x0
        assert abs(fd - analytic) <= 1e-6 * max(1.0, abs(analytic))

    def test_printed_formula_fails_finite_difference(self):
        # the printed derivative misses q^x: off by a factor q^(x0) at x0 = 1
        q, n, x0, h = 0.5, 1, 1.0, 1e-6
        fd = (_real_bracket_pow(x0 + h, q, n) - _real_bracket_pow(x0 - h, q, n)) / (2 * h)
        printed = n * (math.log(q) / (q - 1)) * _real_bracket_pow(x0, q, n - 1)
        assert abs(fd - printed) > 0.1 * abs(printed)

    def test_pair_product_matches_symbolic_derivative(self):
        # the (scalar, characters) pair evaluates to the derivative at integers
        q = F(4)
        n = 3
        scal, chars = monomial_derivative(n, q)
        # derivative at integer x equals n/(q-1) * [x]^(n-1) q^x * L
        for x in range(5):
            coeff = scal.coefficient(1) * chars.evaluate(x)
            expected = F(n, 1) / (q - 1) * q_bracket(x, q) ** (n - 1) * q**x
            assert coeff == expected

    def test_requires_positive_n(self):
        with pytest.raises(ValueError):
            monomial_derivative(0, F(6))
