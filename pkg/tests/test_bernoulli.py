from fractions import Fraction as F

import mpmath
import pytest

from qbernoulli.arith import binomial
from qbernoulli.bernoulli import (BetaTable, carlitz_beta, carlitz_printed_beta3,
                                  classical_bernoulli, modified_beta,
                                  modified_beta_closed, modified_beta_inverse_q)
from qbernoulli.logring import LogLaurent
from qbernoulli.qcalc import q_bracket

Q_PANEL = (F(4), F(6), F(8), F(3, 2), F(5, 2), F(7, 2), F(1, 6))


def akiyama_tanigawa(n):
    """Independent oracle for B_0..B_n (B_1 = -1/2 convention)."""
    a = [F(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = F(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    # Akiyama-Tanigawa yields B_1 = +1/2; flip to the first convention
    if n >= 1:
        out[1] = -out[1]
    return out


class TestClassical:
    def test_first_values(self):
        assert [classical_bernoulli(n) for n in range(4)] == [
            F(1), F(-1, 2), F(1, 6), F(0)]

    def test_against_independent_oracle(self):
        oracle = akiyama_tanigawa(20)
        assert [classical_bernoulli(n) for n in range(21)] == oracle

    def test_odd_vanish(self):
        for n in (3, 5, 7, 9, 11):
            assert classical_bernoulli(n) == 0


class TestCarlitz:
    def test_printed_small_values(self):
        for q in Q_PANEL:
            assert carlitz_beta(0, q) == 1
            assert carlitz_beta(1, q) == -1 / q_bracket(2, q)
            assert carlitz_beta(2, q) == q / (q_bracket(2, q) * q_bracket(3, q))

    def test_cli_example_values(self):
        assert carlitz_beta(1, F(2)) == F(-1, 3)
        assert carlitz_beta(2, F(2)) == F(2, 21)

    @pytest.mark.parametrize("q", Q_PANEL)
    def test_umbral_resubstitution(self, q):
        # q(q beta + 1)^n - beta_n must reproduce the defining right side
        for n in range(1, 11):
            expanded = sum(binomial(n, i) * q**i * carlitz_beta(i, q)
                           for i in range(n + 1))
            lhs = q * expanded - carlitz_beta(n, q)
            assert lhs == (1 if n == 1 else 0)

    def test_beta3_recurrence_vs_print(self):
        # recurrence gives q(1-q)/([3][4]); the printed display drops the q
        for q in Q_PANEL:
            rec = carlitz_beta(3, q)
            assert rec == q * (1 - q) / (q_bracket(3, q) * q_bracket(4, q))
            printed = carlitz_printed_beta3(q)
            assert rec != printed
            assert rec - printed == (q - 1) * (1 - q) / (
                q_bracket(3, q) * q_bracket(4, q))

    def test_degenerate_q_rejected(self):
        for q in (F(0), F(1), F(-1)):
            with pytest.raises(ValueError):
                carlitz_beta(1, q)


class TestModified:
    def test_base_case(self):
        for q in Q_PANEL:
            assert modified_beta(0, q) == LogLaurent.constant(1)
            assert modified_beta_closed(0, q) == LogLaurent.constant(1)

    def test_n1_hand_solve(self):
        # solve (q-1) b = L/(q-1) - 1 directly
        for q in Q_PANEL:
            hand = (LogLaurent({1: F(1, 1) / (q - 1)}) - 1) / (q - 1)
            assert modified_beta(1, q) == hand
            assert hand == LogLaurent({0: -1 / (q - 1), 1: (q - 1) ** -2})

    @pytest.mark.parametrize("q", Q_PANEL)
    def test_recurrence_equals_closed_form(self, q):
        for n in range(21):
            assert modified_beta(n, q) == modified_beta_closed(n, q)

    @pytest.mark.parametrize("q", Q_PANEL)
    def test_umbral_resubstitution(self, q):
        rhs1 = LogLaurent({1: F(1, 1) / (q - 1)})
        for n in range(1, 11):
            expanded = LogLaurent()
            for i in range(n + 1):
                expanded = expanded + binomial(n, i) * q**i * modified_beta(i, q)
            lhs = expanded - modified_beta(n, q)
            assert lhs == (rhs1 if n == 1 else LogLaurent())

    def test_constant_term_is_l0_limit(self):
        # degree-0 coefficient is exactly (1-q)^-n for n >= 1
        for q in (F(4), F(6), F(1, 6)):
            for n in range(1, 10):
                assert modified_beta(n, q).coefficient(0) == (1 - q) ** (-n)

    def test_l_degree_at_most_one(self):
        for q in (F(4), F(6)):
            for n in range(15):
                assert set(modified_beta(n, q).degrees()) <= {0, 1}


class TestInverseQ:
    def test_base(self):
        assert modified_beta_inverse_q(0, F(6)) == LogLaurent.constant(1)

    def test_n1_example(self):
        # (-L - (1/6 - 1)) / (1/6 - 1)^2 expressed in the base-q symbol
        got = modified_beta_inverse_q(1, F(6))
        assert got == LogLaurent({0: F(6, 5), 1: F(-36, 25)})

    def test_double_inversion(self):
        for q in (F(4), F(6), F(5, 2)):
            for n in range(8):
                again = modified_beta_inverse_q(n, 1 / q).negate_L()
                assert again == modified_beta(n, q)


class TestClassicalLimits:
    def test_modified_limit_accuracy(self):
        q = 1 - F(1, 10**4)
        with mpmath.workdps(60):
            lnq = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
            for n in range(9):
                b = classical_bernoulli(n)
                val = modified_beta(n, q).evaluate_real(lnq)
                assert abs(val - mpmath.mpf(b.numerator) / b.denominator) < 1e-3

    def test_modified_limit_monotone(self):
        # |beta~_n(q_k) - B_n| decreases as q_k -> 1 (k = 3..6)
        for n in range(1, 9):
            errs = []
            for k in range(3, 7):
                q = 1 - F(1, 10**k)
                with mpmath.workdps(60):
                    lnq = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
                    b = classical_bernoulli(n)
                    errs.append(abs(modified_beta(n, q).evaluate_real(lnq)
                                    - mpmath.mpf(b.numerator) / b.denominator))
            assert all(errs[i + 1] < errs[i] for i in range(len(errs) - 1)) or errs[0] == 0

    def test_carlitz_limit(self):
        q = 1 - F(1, 10**4)
        for n in range(9):
            err = carlitz_beta(n, q) - classical_bernoulli(n)
            assert abs(err) < F(1, 10**3)


class TestBetaTable:
    def test_kinds(self):
        t = BetaTable("classical").build(5)
        assert t.values(5) == [classical_bernoulli(n) for n in range(6)]
        t2 = BetaTable("modified", F(6))
        assert t2.value(3) == modified_beta(3, F(6))
        t3 = BetaTable("modified_inverse_q", F(6))
        assert t3.value(2) == modified_beta_inverse_q(2, F(6))

    def test_validation(self):
        with pytest.raises(ValueError):
            BetaTable("nope")
        with pytest.raises(ValueError):
            BetaTable("carlitz")  # needs q
        with pytest.raises(ValueError):
            BetaTable("classical", F(2))  # takes no q
