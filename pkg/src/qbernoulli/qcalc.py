"""q-brackets and the character-sum representation of [x]_q^n on Z_p.

Functions on Z_p are represented exclusively as finite combinations
sum_l c_l * q^(l*x); that family is closed under products and admits
exact geometric-sum integration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .arith import PadicContext, Rational, binomial, valuation
from .logring import LogLaurent

QLike = Union["QParam", Fraction, int]


@dataclass(frozen=True)
class QParam:
    """Rational deformation parameter with its admissibility mode.

    padic mode requires v_p(q - 1) >= 1 (>= 2 for p = 2) so q^x = exp(x log q)
    converges on Z_p; real mode requires 0 < q < 1 so the geometric series
    over q^m converge.
    """

    q: Fraction
    mode: str = "padic"  # "padic" | "real"
    ctx: PadicContext | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q == 1:
            raise ValueError("q = 1 is excluded")
        if self.mode == "padic":
            if self.ctx is None:
                raise ValueError("padic mode requires a PadicContext")
            need = 2 if self.ctx.p == 2 else 1
            if valuation(self.q - 1, self.ctx.p) < need:
                raise ValueError(
                    f"q = {self.q} not admissible at p = {self.ctx.p}: "
                    f"need v_p(q-1) >= {need}")
        elif self.mode == "real":
            if not (0 < self.q < 1):
                raise ValueError("real mode requires 0 < q < 1")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    def inverse(self) -> "QParam":
        """Parameter 1/q.  Only the padic mode survives inversion."""
        if self.mode != "padic":
            raise ValueError("inverse() is only defined in padic mode")
        return QParam(1 / self.q, "padic", self.ctx)


def rational_q(q: QLike) -> Fraction:
    """Accept either a QParam or a bare rational where only the value of q
    matters (recurrences and brackets are pure rational algebra)."""
    if isinstance(q, QParam):
        return q.q
    q = Fraction(q)
    if q == 1:
        raise ValueError("q = 1 is excluded")
    return q


def q_bracket(x: int, q: QLike) -> Fraction:
    """[x]_q = (1 - q^x) / (1 - q), exact; x may be any integer."""
    qv = rational_q(q)
    return (1 - qv**x) / (1 - qv)


@dataclass(frozen=True)
class CharacterSum:
    """x |-> sum_l c_l * q^(l*x) with nonnegative integer exponents l."""

    q: Fraction
    terms: tuple[tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def from_dict(cls, q: QLike, d: dict[int, Fraction]) -> "CharacterSum":
        qv = rational_q(q)
        items = tuple(sorted((l, Fraction(c)) for l, c in d.items() if c != 0))
        for l, _ in items:
            if l < 0:
                raise ValueError("character exponents must be nonnegative")
        return cls(qv, items)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    @classmethod
    def constant(cls, q: QLike, c: Rational = Fraction(1)) -> "CharacterSum":
        return cls.from_dict(q, {0: Fraction(c)})

    def evaluate(self, x: int) -> Fraction:
        return sum((c * self.q ** (l * x) for l, c in self.terms), Fraction(0))

    def __add__(self, other: "CharacterSum") -> "CharacterSum":
        if self.q != other.q:
            raise ValueError("character sums over different q")
        out = self.as_dict()
        for l, c in other.terms:
            out[l] = out.get(l, Fraction(0)) + c
        return CharacterSum.from_dict(self.q, out)

    def __mul__(self, other: "CharacterSum | Rational | int") -> "CharacterSum":
        if isinstance(other, (int, Fraction)):
            return CharacterSum.from_dict(
                self.q, {l: c * other for l, c in self.terms})
        if self.q != other.q:
            raise ValueError("character sums over different q")
        out: dict[int, Fraction] = {}
        for l1, c1 in self.terms:
            for l2, c2 in other.terms:
                out[l1 + l2] = out.get(l1 + l2, Fraction(0)) + c1 * c2
        return CharacterSum.from_dict(self.q, out)

    __rmul__ = __mul__

    def shift_exponents(self, k: int) -> "CharacterSum":
        """Multiply pointwise by q^(k*x)."""
        return CharacterSum.from_dict(self.q, {l + k: c for l, c in self.terms})

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}·q^({l}x)" if l else f"{c}" for l, c in self.terms)


def monomial_characters(n: int, q: QLike) -> CharacterSum:
    """Character expansion of [x]_q^n: sum_l C(n,l) (-1)^l / (1-q)^n * q^(lx)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    qv = rational_q(q)
    scale = (1 - qv) ** (-n)
    return CharacterSum.from_dict(
        qv, {l: binomial(n, l) * (-1) ** l * scale for l in range(n + 1)})


def monomial_derivative(n: int, q: QLike) -> tuple[LogLaurent, CharacterSum]:
    """Derivative of x |-> [x]_q^n, as (scalar in L, character sum).

    d/dx [x]_q^n = n * (log q / (q-1)) * [x]_q^(n-1) * q^x; the q^x factor
    shows up as a +1 shift of every character exponent.  The product of the
    returned pair is the derivative.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    qv = rational_q(q)
    scalar = LogLaurent({1: Fraction(n) / (qv - 1)})
    return scalar, monomial_characters(n - 1, qv).shift_exponents(1)
