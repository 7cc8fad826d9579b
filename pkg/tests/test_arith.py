import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbernoulli.arith import (PadicContext, PadicNumber, binomial, is_prime,
                              log_series_terms, padic_arith, padic_log,
                              padic_log_of_rational, padic_of_rational,
                              valuation)

PRIMES = (2, 3, 5, 7)

nonzero_fractions = st.fractions(
    min_value=F(-2**64), max_value=F(2**64), max_denominator=2**64
).filter(lambda r: r != 0)


def pascal_binomial(n, k):
    """Independent oracle: Pascal's triangle."""
    row = [F(1)]
    for _ in range(n):
        row = [F(1)] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [F(1)]
    return row[k] if 0 <= k <= n else F(0)


class TestValuation:
    def test_examples(self):
        assert valuation(50, 5) == 2
        assert valuation(F(1, 9), 3) == -2
        assert valuation(7, 7) == 1

    def test_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            valuation(0, 5)

    def test_nonprime_rejected(self):
        with pytest.raises(ValueError):
            valuation(10, 6)

    @given(nonzero_fractions, nonzero_fractions, st.sampled_from(PRIMES))
    def test_additivity(self, r, s, p):
        assert valuation(r * s, p) == valuation(r, p) + valuation(s, p)

    @given(nonzero_fractions, st.sampled_from(PRIMES))
    def test_unit_part_coprime(self, r, p):
        v = valuation(r, p)
        u = r / F(p) ** v
        assert u.numerator % p != 0 and u.denominator % p != 0


class TestBinomial:
    def test_examples(self):
        assert binomial(5, 2) == 10
        assert binomial(7, 0) == 1
        assert binomial(3, 5) == 0
        assert binomial(40, 20) == 137846528820
        assert binomial(40, 20) == pascal_binomial(40, 20)

    @given(st.integers(0, 30), st.integers(0, 30))
    def test_against_pascal(self, n, k):
        assert binomial(n, k) == pascal_binomial(n, k)


class TestContext:
    def test_prime_check(self):
        with pytest.raises(ValueError):
            PadicContext(6, 8)
        with pytest.raises(ValueError):
            PadicContext(1, 8)

    def test_min_precision(self):
        with pytest.raises(ValueError):
            PadicContext(5, 3)
        PadicContext(5, 4)

    def test_is_prime_small(self):
        primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}
        for n in range(2, 43):
            assert is_prime(n) == (n in primes)
        assert is_prime(2**31 - 1)
        assert not is_prime(2**32 + 1)


class TestEmbedding:
    def test_zero(self):
        z = padic_of_rational(0, PadicContext(5, 6))
        assert z.is_exact_zero()
        assert z.valuation == math.inf
        assert z.render() == "0 (exact)"

    def test_ten_at_five(self):
        x = padic_of_rational(10, PadicContext(5, 4))
        assert x.valuation == 1
        assert x.unit == 2

    def test_minus_half_at_three(self):
        # extended-gcd oracle: solve 2u = -1 mod 3^4
        oracle = (-1 * pow(2, -1, 81)) % 81
        assert oracle == 40
        x = padic_of_rational(F(-1, 2), PadicContext(3, 4))
        assert x.valuation == 0
        assert x.unit == 40

    def test_small_int_round_trip(self):
        ctx = PadicContext(7, 6)
        for k in range(-20, 21):
            x = padic_of_rational(k, ctx)
            if k == 0:
                assert x.is_exact_zero()
            else:
                lift = x.unit * 7**x.valuation
                assert (lift - k) % 7 ** (x.valuation + x.digits) == 0

    @given(nonzero_fractions, nonzero_fractions, st.sampled_from(PRIMES))
    @settings(max_examples=40)
    def test_ring_homomorphism(self, r, s, p):
        ctx = PadicContext(p, 8)
        a, b = padic_of_rational(r, ctx), padic_of_rational(s, ctx)
        prod = a * b
        direct = padic_of_rational(r * s, ctx)
        assert (prod - direct).valuation >= direct.valuation + min(a.digits, b.digits)

    def test_digit_list(self):
        x = padic_of_rational(10, PadicContext(5, 4))
        assert x.digit_list() == [2, 0, 0, 0]


class TestArithmetic:
    def test_div_valuation(self):
        ctx = PadicContext(5, 8)
        a = padic_of_rational(F(25 * 7), ctx)      # 5^2 * unit
        b = padic_of_rational(F(5**5 * 3), ctx)    # 5^5 * unit
        assert padic_arith(a, b, "div").valuation == -3

    def test_cancellation_to_zero(self):
        ctx = PadicContext(5, 8)
        x = padic_of_rational(F(7, 3), ctx)
        s = padic_arith(x, -x, "add")
        assert s.is_zero()
        assert s.is_exact_zero()  # exact-backed operands cancel exactly

    def test_residue_cancellation_keeps_precision(self):
        ctx = PadicContext(5, 8)
        lnum = padic_log_of_rational(F(6), ctx)  # residue-backed
        d = lnum - lnum
        assert d.is_zero() and not d.is_exact_zero()
        assert d.valuation >= 8

    def test_mul_units(self):
        ctx = PadicContext(5, 4)
        a = padic_of_rational(1 + 5, ctx)
        b = padic_of_rational(1 - 5, ctx)
        prod = a * b
        assert prod.valuation == 0
        assert prod.unit_mod(4) == 601  # 1 - 25 mod 625

    def test_div_by_zero(self):
        ctx = PadicContext(5, 8)
        x = padic_of_rational(3, ctx)
        with pytest.raises(ZeroDivisionError):
            x / padic_of_rational(0, ctx)

    def test_context_mismatch(self):
        a = padic_of_rational(3, PadicContext(5, 8))
        b = padic_of_rational(3, PadicContext(3, 8))
        with pytest.raises(ValueError):
            a + b

    def test_pow(self):
        ctx = PadicContext(5, 8)
        x = padic_of_rational(F(2, 3), ctx)
        assert (x**3 - padic_of_rational(F(8, 27), ctx)).is_zero()
        assert (x**-2 - padic_of_rational(F(9, 4), ctx)).is_zero()


class TestPadicLog:
    def test_log_one_exact_zero(self):
        ctx = PadicContext(5, 8)
        assert padic_log(padic_of_rational(1, ctx)).is_exact_zero()

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_leading_valuation(self, p):
        ctx = PadicContext(p, 8)
        assert padic_log_of_rational(F(1 + p), ctx).valuation == 1

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_series_truncation_oracle(self, p):
        # independent oracle: exact rational partial sum with generous tail
        ctx = PadicContext(p, 8)
        t, s = F(p), F(0)
        for k in range(1, 60):
            s += F((-1) ** (k + 1)) * t**k / k
        oracle = padic_of_rational(s, PadicContext(p, 16))
        got = padic_log_of_rational(F(1 + p), ctx)
        assert oracle.valuation == got.valuation
        assert oracle.unit_mod(8) == got.unit_mod(8)

    def test_homomorphism_sample(self):
        ctx = PadicContext(5, 8)
        u = padic_of_rational(1 + 5, ctx)
        lu = padic_log(u)
        lu2 = padic_log(u * u)
        assert (lu2 - (lu + lu)).is_zero()

    def test_homomorphism_random(self):
        rng = random.Random(20240817)
        p = 5
        ctx = PadicContext(p, 8)
        for _ in range(100):
            ku = rng.randint(1, 50) * p
            kw = rng.randint(1, 50) * p
            du = rng.randint(1, 30)
            dw = rng.randint(1, 30)
            if ku % du == 0 or kw % dw == 0:
                continue
            u, w = 1 + F(ku, du), 1 + F(kw, dw)
            if valuation(u - 1, p) < 1 or valuation(w - 1, p) < 1:
                continue
            lhs = padic_log_of_rational(u * w, ctx)
            rhs = padic_log_of_rational(u, ctx) + padic_log_of_rational(w, ctx)
            diff = lhs - rhs
            assert diff.is_zero() or diff.valuation >= min(
                lhs.abs_precision, rhs.abs_precision), (u, w)

    def test_truncation_stability(self):
        # recomputing at M+4 and truncating to M matches the M-run exactly
        for p, q in ((3, F(4)), (5, F(6)), (7, F(8))):
            lo = padic_log_of_rational(q, PadicContext(p, 8))
            hi = padic_log_of_rational(q, PadicContext(p, 12))
            assert lo.valuation == hi.valuation
            assert lo.unit_mod(8) == hi.unit_mod(8)

    def test_domain_errors(self):
        ctx = PadicContext(5, 8)
        with pytest.raises(ValueError, match="log domain"):
            padic_log(padic_of_rational(2, ctx))  # v_5(2-1) = 0
        ctx2 = PadicContext(2, 8)
        with pytest.raises(ValueError, match="log domain"):
            padic_log(padic_of_rational(3, ctx2))  # v_2(3-1) = 1 < 2
        padic_log(padic_of_rational(5, ctx2))  # v_2(5-1) = 2 is fine

    def test_stop_rule_monotone(self):
        # stop rule: smallest k with k*v - floor(log_p k) >= M + v
        for p, v, m in ((3, 1, 8), (5, 2, 8), (7, 1, 12)):
            t = log_series_terms(v, p, m)
            kstop = t + 1
            assert kstop * v - math.floor(math.log(kstop, p)) >= m + v
            assert t * v - math.floor(math.log(t, p)) < m + v


class TestRendering:
    def test_nonzero(self):
        x = padic_of_rational(10, PadicContext(5, 4))
        assert x.render() == "5^1 * 2 (mod 5^4)"

    def test_inexact_zero(self):
        ctx = PadicContext(5, 8)
        lnum = padic_log_of_rational(F(6), ctx)
        assert "0 (mod 5^" in (lnum - lnum).render()
