"""Laurent polynomials in the formal symbol L = log q, over exact rationals.

L is treated as transcendental over Q: no relation between L and the
numeric value of q is assumed, so coefficient-wise equality is a sound
(though incomplete) certificate of numeric equality.  Degrees in this
project stay within [-1, 2] but the type supports any finite range.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .arith import PadicNumber, Rational


class LogLaurent:
    """Finite sum of c_d * L^d with rational coefficients, zero terms dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        canon: dict[int, Fraction] = {}
        for d, c in items:
            c = Fraction(c)
            if c != 0:
                canon[d] = canon.get(d, Fraction(0)) + c
                if canon[d] == 0:
                    del canon[d]
        self.coeffs = dict(sorted(canon.items()))

    @classmethod
    def constant(cls, c: Rational) -> "LogLaurent":
        return cls({0: Fraction(c)})

    @classmethod
    def L(cls, power: int = 1) -> "LogLaurent":
        return cls({power: Fraction(1)})

    def coefficient(self, d: int) -> Fraction:
        return self.coeffs.get(d, Fraction(0))

    def degrees(self) -> list[int]:
        return list(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs or self.coeffs.keys() == {0}

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "LogLaurent | Rational | int") -> "LogLaurent":
        other = _coerce(other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, Fraction(0)) + c
        return LogLaurent(out)

    __radd__ = __add__

    def __neg__(self) -> "LogLaurent":
        return LogLaurent({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: "LogLaurent | Rational | int") -> "LogLaurent":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LogLaurent":
        return _coerce(other) - self

    def __mul__(self, other: "LogLaurent | Rational | int") -> "LogLaurent":
        other = _coerce(other)
        out: dict[int, Fraction] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                out[d] = out.get(d, Fraction(0)) + c1 * c2
        return LogLaurent(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rational | int) -> "LogLaurent":
        s = Fraction(scalar)
        return LogLaurent({d: c / s for d, c in self.coeffs.items()})

    def div_L(self, power: int = 1) -> "LogLaurent":
        """Multiply by L^(-power)."""
        return LogLaurent({d - power: c for d, c in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, LogLaurent):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def negate_L(self) -> "LogLaurent":
        """Substitute L -> -L (log of the inverse parameter)."""
        return LogLaurent({d: c if d % 2 == 0 else -c for d, c in self.coeffs.items()})

    # -- evaluation -------------------------------------------------------

    def evaluate_padic(self, lval: PadicNumber) -> PadicNumber:
        """Evaluate at a p-adic value of L."""
        if any(d < 0 for d in self.coeffs) and lval.is_zero():
            raise ZeroDivisionError("negative L-degree at L = 0")
        ctx = lval.ctx
        acc = PadicNumber.zero(ctx)
        for d, c in self.coeffs.items():
            term = PadicNumber.from_rational(c, ctx)
            if d > 0:
                term = term * lval ** d
            elif d < 0:
                term = term / lval ** (-d)
            acc = acc + term
        return acc

    def evaluate_real(self, lval) -> object:
        """Evaluate at a real value of L (mpmath mpf or float)."""
        if any(d < 0 for d in self.coeffs) and lval == 0:
            raise ZeroDivisionError("negative L-degree at L = 0")
        # integer numerator/denominator steps keep mpf precision intact
        acc = lval * 0
        for d, c in self.coeffs.items():
            acc = acc + (lval ** d) * c.numerator / c.denominator
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs.items():
            if d == 0:
                parts.append(str(c))
            elif d == 1:
                parts.append(f"{c}·L")
            else:
                parts.append(f"{c}·L^{d}")
        return " + ".join(parts)

    __repr__ = __str__


def _coerce(x) -> LogLaurent:
    if isinstance(x, LogLaurent):
        return x
    return LogLaurent.constant(Fraction(x))


def ll_arith(a: LogLaurent, b: LogLaurent, op: str) -> LogLaurent:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def ll_negate_L(a: LogLaurent) -> LogLaurent:
    return a.negate_L()


def ll_evaluate(a: LogLaurent, lval):
    """Evaluate at either a PadicNumber or a real (mpmath/float) L."""
    if isinstance(lval, PadicNumber):
        return a.evaluate_padic(lval)
    return a.evaluate_real(lval)
