"""Exact rationals, p-adic valuations and capped-precision p-adic numbers.

Everything here is immutable and pure: values can be shared freely across
threads.  Exact zero (valuation +inf) is a distinguished state, kept apart
from "zero to the available precision" which remembers how many digits of
cancellation were actually observed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int]

INF = math.inf

# Witnesses making Miller-Rabin deterministic for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality check (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def valuation(r: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational: r = p^v * (unit fraction)."""
    if r == 0:
        raise ZeroDivisionError("valuation of zero is +∞")
    if p < 2 or not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    r = Fraction(r)
    v = 0
    num = r.numerator
    while num % p == 0:
        num //= p
        v += 1
    den = r.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def binomial(n: int, k: int) -> Fraction:
    """Exact binomial coefficient as a Fraction; 0 when k > n or k < 0."""
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k))


@dataclass(frozen=True)
class PadicContext:
    """Arithmetic context: prime p and relative precision (digits tracked)."""

    p: int
    precision: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.precision < 4:
            raise ValueError("precision must be >= 4")

    def modulus(self, digits: int | None = None) -> int:
        return self.p ** (self.precision if digits is None else digits)


class PadicNumber:
    """Element of Q_p known to a finite number of significant base-p digits.

    A nonzero value is p^valuation * unit with the unit held modulo
    p^digits (digits <= context precision).  Values embedded from exact
    rationals additionally remember the rational, so chains of exact
    operations stay exact and full cancellation is reported as exact zero.
    """

    __slots__ = ("ctx", "_val", "_unit", "_digits", "_zero_prec", "_exact")

    def __init__(self, ctx, val, unit, digits, zero_prec=None, exact=None):
        self.ctx = ctx
        self._val = val
        self._unit = unit
        self._digits = digits
        self._zero_prec = zero_prec  # absolute precision of a zero value
        self._exact = exact

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ctx: PadicContext) -> "PadicNumber":
        return cls(ctx, None, 0, 0, zero_prec=INF, exact=Fraction(0))

    @classmethod
    def zero_to_precision(cls, ctx: PadicContext, abs_prec: int) -> "PadicNumber":
        return cls(ctx, None, 0, 0, zero_prec=abs_prec)

    @classmethod
    def from_rational(cls, r: RationalLike, ctx: PadicContext,
                      digits: int | None = None) -> "PadicNumber":
        r = Fraction(r)
        if r == 0:
            return cls.zero(ctx)
        d = ctx.precision if digits is None else digits
        v = valuation(r, ctx.p)
        scaled = r / Fraction(ctx.p) ** v
        mod = ctx.p ** d
        unit = scaled.numerator * pow(scaled.denominator, -1, mod) % mod
        return cls(ctx, v, unit, d, exact=r)

    # -- predicates / accessors ---------------------------------------

    def is_zero(self) -> bool:
        return self._unit == 0 and self._val is None

    def is_exact_zero(self) -> bool:
        return self.is_zero() and self._zero_prec == INF

    def is_exact(self) -> bool:
        return self._exact is not None

    @property
    def exact_value(self) -> Fraction | None:
        return self._exact

    @property
    def valuation(self):
        """Valuation; +inf for exact zero, lower bound for inexact zero."""
        if self.is_zero():
            return self._zero_prec
        return self._val

    @property
    def digits(self) -> int:
        return self._digits

    @property
    def abs_precision(self):
        """Absolute precision: value is known modulo p^abs_precision."""
        if self.is_zero():
            return self._zero_prec
        return self._val + self._digits

    @property
    def unit(self) -> int:
        return self._unit

    def unit_mod(self, digits: int) -> int:
        if digits > self._digits:
            raise ValueError("requesting more digits than are known")
        return self._unit % self.ctx.p ** digits

    # -- conversions ---------------------------------------------------

    def reduce_to(self, digits: int) -> "PadicNumber":
        """Truncate to at most `digits` significant digits."""
        if digits < 1:
            raise ValueError("digits must be >= 1")
        if self.is_zero():
            return self
        d = min(digits, self._digits)
        return PadicNumber(self.ctx, self._val, self._unit % self.ctx.p ** d,
                           d, exact=self._exact)

    def digit_list(self) -> list[int]:
        """Base-p digits of the unit, least significant first."""
        out, u, p = [], self._unit, self.ctx.p
        for _ in range(self._digits):
            u, r = divmod(u, p)
            out.append(r)
        return out

    def render(self) -> str:
        if self.is_exact_zero():
            return "0 (exact)"
        if self.is_zero():
            return f"0 (mod {self.ctx.p}^{self._zero_prec})"
        return f"{self.ctx.p}^{self._val} * {self._unit} (mod {self.ctx.p}^{self._digits})"

    def __repr__(self) -> str:
        return f"PadicNumber({self.render()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero() and self._zero_prec == other._zero_prec
        d = min(self._digits, other._digits)
        return (self.ctx == other.ctx and self._val == other._val
                and self.unit_mod(d) == other.unit_mod(d))

    def __hash__(self):
        raise TypeError("PadicNumber is not hashable (precision-dependent equality)")

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "PadicNumber") -> None:
        if self.ctx != other.ctx:
            raise ValueError("context mismatch")

    def __neg__(self) -> "PadicNumber":
        if self.is_zero():
            return self
        mod = self.ctx.p ** self._digits
        ex = None if self._exact is None else -self._exact
        return PadicNumber(self.ctx, self._val, (-self._unit) % mod,
                           self._digits, exact=ex)

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        if self._exact is not None and other._exact is not None:
            s = self._exact + other._exact
            d = min(self._digits or self.ctx.precision,
                    other._digits or other.ctx.precision)
            if s == 0:
                return PadicNumber.zero(self.ctx)
            return PadicNumber.from_rational(s, self.ctx, digits=d)
        if self.is_zero():
            return other._capped(self._zero_prec)
        if other.is_zero():
            return self._capped(other._zero_prec)
        p = self.ctx.p
        k = min(self.abs_precision, other.abs_precision)
        v0 = min(self._val, other._val)
        span = k - v0
        mod = p ** span
        r = (self._unit * pow(p, self._val - v0, mod)
             + other._unit * pow(p, other._val - v0, mod)) % mod
        if r == 0:
            return PadicNumber.zero_to_precision(self.ctx, k)
        shift = 0
        while r % p == 0:
            r //= p
            shift += 1
        v = v0 + shift
        digits = k - v
        return PadicNumber(self.ctx, v, r % p ** digits, digits)

    def _capped(self, abs_prec) -> "PadicNumber":
        """Result of adding a zero known only modulo p^abs_prec."""
        if abs_prec == INF:
            return self
        if self.is_zero():
            return PadicNumber.zero_to_precision(self.ctx, min(self._zero_prec, abs_prec))
        if self._val >= abs_prec:
            return PadicNumber.zero_to_precision(self.ctx, abs_prec)
        digits = min(self._digits, abs_prec - self._val)
        return PadicNumber(self.ctx, self._val, self._unit % self.ctx.p ** digits, digits)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        if self._exact is not None and other._exact is not None:
            d = min(self._digits or self.ctx.precision,
                    other._digits or other.ctx.precision)
            prod = self._exact * other._exact
            if prod == 0:
                return PadicNumber.zero(self.ctx)
            return PadicNumber.from_rational(prod, self.ctx, digits=d)
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicNumber.zero(self.ctx)
        if self.is_zero() and other.is_zero():
            return PadicNumber.zero_to_precision(self.ctx, self._zero_prec + other._zero_prec)
        if self.is_zero() or other.is_zero():
            # p^v * (0 mod p^k) is zero mod p^(v+k)
            z, nz = (self, other) if self.is_zero() else (other, self)
            return PadicNumber.zero_to_precision(self.ctx, z._zero_prec + nz._val)
        digits = min(self._digits, other._digits)
        mod = self.ctx.p ** digits
        return PadicNumber(self.ctx, self._val + other._val,
                           self._unit * other._unit % mod, digits)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        if other.is_zero():
            kind = "exact zero" if other.is_exact_zero() else "zero within precision"
            raise ZeroDivisionError(f"division by {kind}")
        if self._exact is not None and other._exact is not None:
            d = min(self._digits, other._digits)
            quot = self._exact / other._exact
            if quot == 0:
                return PadicNumber.zero(self.ctx)
            return PadicNumber.from_rational(quot, self.ctx, digits=d)
        if self.is_zero():
            return PadicNumber.zero_to_precision(self.ctx, self._zero_prec - other._val)
        digits = min(self._digits, other._digits)
        mod = self.ctx.p ** digits
        inv = pow(other._unit % mod, -1, mod)
        return PadicNumber(self.ctx, self._val - other._val,
                           self._unit * inv % mod, digits)

    def __pow__(self, e: int) -> "PadicNumber":
        if e < 0:
            return PadicNumber.from_rational(1, self.ctx) / self ** (-e)
        out = PadicNumber.from_rational(1, self.ctx)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


def padic_of_rational(r: RationalLike, ctx: PadicContext) -> PadicNumber:
    return PadicNumber.from_rational(r, ctx)


def padic_arith(a: PadicNumber, b: PadicNumber, op: str) -> PadicNumber:
    """Dispatch form of the arithmetic operators (op in add/sub/mul/div)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def log_series_terms(v: int, p: int, precision: int) -> int:
    """Smallest T with k*v - floor(log_p k) >= precision + v for all k > T."""
    k = 1
    while True:
        k += 1
        if k * v - _ilog(k, p) >= precision + v:
            return k - 1


def _ilog(k: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= k:
        e += 1
    return e


def padic_log(u: PadicNumber) -> PadicNumber:
    """p-adic logarithm of a unit u with |1 - u|_p small enough.

    Requires v_p(u - 1) >= 1 for odd p and v_2(u - 1) >= 2.  The series
    sum (-1)^(k+1) (u-1)^k / k is truncated once the tail valuation
    reaches precision + v_p(u - 1).
    """
    ctx = u.ctx
    one = PadicNumber.from_rational(1, ctx)
    t = u - one
    if t.is_exact_zero():
        return PadicNumber.zero(ctx)
    need = 2 if ctx.p == 2 else 1
    if t.valuation < need:
        raise ValueError("log domain: |1-q|_p too large")
    v = t.valuation
    nterms = log_series_terms(v, ctx.p, ctx.precision)
    if u.is_exact():
        # exact input: evaluate exact series terms at boosted precision,
        # so the full context precision survives the divisions by k
        work = PadicContext(ctx.p, ctx.precision + v + _ilog(nterms, ctx.p) + 1)
        tr = t.exact_value
        acc = PadicNumber.zero(work)
        term = Fraction(1)
        for k in range(1, nterms + 1):
            term *= tr
            acc = acc + PadicNumber.from_rational(-term / k if k % 2 == 0 else term / k, work)
        res = acc
        if res.is_zero():
            return PadicNumber.zero_to_precision(ctx, ctx.precision + v)
        digits = min(ctx.precision, res.abs_precision - res.valuation)
        return PadicNumber(ctx, res.valuation, res.unit_mod(digits), digits)
    acc = PadicNumber.zero_to_precision(ctx, t.abs_precision)
    power = one
    for k in range(1, nterms + 1):
        power = power * t
        term = power / PadicNumber.from_rational(k, ctx)
        acc = acc + (term if k % 2 == 1 else -term)
    return acc


def padic_log_of_rational(q: RationalLike, ctx: PadicContext) -> PadicNumber:
    """log of an exact rational unit (the workhorse for log q)."""
    return padic_log(PadicNumber.from_rational(q, ctx))


def agreement_valuation(a: PadicNumber, b: PadicNumber):
    """Valuation of a - b: +inf for exact agreement, else a lower bound
    capped by the available precision."""
    return (a - b).valuation
