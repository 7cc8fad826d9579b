"""Classical, Carlitz and modified q-Bernoulli numbers via umbral recurrences.

The umbral convention is implemented literally: (q*beta + 1)^n is expanded
binomially and each power beta^i is replaced by the table value beta_i,
leaving a single unknown per step which is solved exactly (in Q for the
Carlitz family, in Q[L] for the modified family, L = log q).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith import binomial
from .logring import LogLaurent
from .qcalc import QLike, q_bracket, rational_q


@lru_cache(maxsize=None)
def classical_bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, solved from sum_{i<=n} C(n+1,i) B_i = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    s = sum(binomial(n + 1, i) * classical_bernoulli(i) for i in range(n))
    return -s / (n + 1)


def _check_q(q: Fraction) -> Fraction:
    if q in (0, 1, -1):
        raise ValueError(f"q = {q} is excluded (q^k = 1 or degenerate)")
    return q


@lru_cache(maxsize=None)
def _carlitz(n: int, q: Fraction) -> Fraction:
    if n == 0:
        return Fraction(1)
    # q*(q*beta + 1)^n - beta_n = [n == 1]
    rhs = Fraction(1 if n == 1 else 0)
    s = sum(binomial(n, i) * q**i * _carlitz(i, q) for i in range(n))
    return (rhs - q * s) / (q ** (n + 1) - 1)


def carlitz_beta(n: int, q: QLike) -> Fraction:
    """Carlitz q-Bernoulli number beta_{n,q}, exact."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _carlitz(n, _check_q(rational_q(q)))


@lru_cache(maxsize=None)
def _modified(n: int, q: Fraction) -> LogLaurent:
    if n == 0:
        return LogLaurent.constant(1)
    # (q*beta + 1)^n - beta_n = L/(q-1) if n == 1 else 0
    rhs = LogLaurent({1: Fraction(1) / (q - 1)}) if n == 1 else LogLaurent()
    s = LogLaurent()
    for i in range(n):
        s = s + binomial(n, i) * q**i * _modified(i, q)
    return (rhs - s) / (q**n - 1)


def modified_beta(n: int, q: QLike) -> LogLaurent:
    """Modified q-Bernoulli number as an element of Q[L], L = log q."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _modified(n, _check_q(rational_q(q)))


@lru_cache(maxsize=None)
def _modified_closed(n: int, q: Fraction) -> LogLaurent:
    # l = 0 summand is the limit l -> 0, contributing exactly 1/(1-q)^n;
    # that is the unique reading consistent with the recurrence.
    out = LogLaurent.constant((1 - q) ** (-n))
    scale = (1 - q) ** (-(n + 1))
    lcoeff = Fraction(0)
    for l in range(1, n + 1):
        lcoeff += binomial(n, l) * (-1) ** (l - 1) * l / q_bracket(l, q)
    return out + LogLaurent({1: scale * lcoeff})


def modified_beta_closed(n: int, q: QLike) -> LogLaurent:
    """Closed-form evaluation of the modified numbers (finite l-sum)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _modified_closed(n, _check_q(rational_q(q)))


def modified_beta_inverse_q(n: int, q: QLike) -> LogLaurent:
    """Modified number at parameter 1/q, expressed in the base-q symbol.

    The recurrence at 1/q produces a polynomial in log(1/q) = -L, so the
    result is obtained by the substitution L -> -L.
    """
    qv = _check_q(rational_q(q))
    return modified_beta(n, 1 / qv).negate_L()


def carlitz_printed_beta3(q: QLike) -> Fraction:
    """The (1-q)/([3]_q [4]_q) display value; kept for the errata ledger."""
    qv = rational_q(q)
    return (1 - qv) / (q_bracket(3, qv) * q_bracket(4, qv))


_KINDS = ("classical", "carlitz", "modified", "modified_inverse_q")


class BetaTable:
    """Memoized table of one Bernoulli family, built once then read-only."""

    def __init__(self, kind: str, q: QLike | None = None):
        if kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if kind == "classical":
            if q is not None:
                raise ValueError("classical table takes no q")
            self.q = None
        else:
            if q is None:
                raise ValueError(f"{kind} table requires q")
            self.q = _check_q(rational_q(q))
        self.kind = kind
        self._values: list = []

    def build(self, upto: int) -> "BetaTable":
        fn = {
            "classical": classical_bernoulli,
            "carlitz": lambda n: carlitz_beta(n, self.q),
            "modified": lambda n: modified_beta(n, self.q),
            "modified_inverse_q": lambda n: modified_beta_inverse_q(n, self.q),
        }[self.kind]
        while len(self._values) <= upto:
            self._values.append(fn(len(self._values)))
        return self

    def value(self, n: int):
        if n >= len(self._values):
            self.build(n)
        return self._values[n]

    def values(self, upto: int) -> list:
        self.build(upto)
        return self._values[: upto + 1]
