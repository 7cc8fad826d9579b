"""The p-adic invariant integral I_0 on the character-sum family.

Riemann sums S_N = p^-N sum_{x < p^N} f(x) are computed exactly: the
geometric fast path sums each character in closed form, the enumeration
path is the literal sum (kept as the oracle).  Character integrals have
the exact values I_0(q^(l x)) = l*L/(q^l - 1) in Q[L], so the integral of
any character sum is symbolic and exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import PadicContext, PadicNumber, Rational, valuation
from .bernoulli import modified_beta
from .logring import LogLaurent
from .qcalc import CharacterSum, QLike, QParam, binomial, monomial_characters, rational_q


class CostCapExceeded(RuntimeError):
    """A computation would exceed the configured resource caps."""


@dataclass(frozen=True)
class CostCaps:
    max_enumeration_ops: int = 2_000_000
    max_geometric_bits: int = 1_000_000  # bit size of exact big powers
    max_profile_count: int = 10_000_000_000  # largest p^N a profile may touch


DEFAULT_CAPS = CostCaps()


@dataclass(frozen=True)
class RiemannSumResult:
    level: int
    value: object  # Fraction (exact) or PadicNumber (capped fallback)
    method: str


def _pow_bits(q: Fraction, e: int) -> int:
    m = max(abs(q.numerator), q.denominator)
    return e * max(1, m.bit_length())


def padic_pow_rational(q: Fraction, e: int, ctx: PadicContext, abs_prec: int) -> PadicNumber:
    """q^e for a p-adic unit q, known modulo p^abs_prec (modular fallback)."""
    if valuation(q, ctx.p) != 0:
        raise ValueError("modular power path requires a p-adic unit")
    mod = ctx.p ** abs_prec
    num = pow(q.numerator % mod, e, mod)
    den = pow(q.denominator % mod, e, mod)
    r = num * pow(den, -1, mod) % mod
    return _padic_of_residue(r, abs_prec, ctx)


def _padic_of_residue(r: int, abs_prec: int, ctx: PadicContext) -> PadicNumber:
    # digits may exceed the context default: fallback paths work boosted
    # so that the caller still sees full precision after cancellations
    r %= ctx.p ** abs_prec
    if r == 0:
        return PadicNumber.zero_to_precision(ctx, abs_prec)
    v = 0
    while r % ctx.p == 0:
        r //= ctx.p
        v += 1
    digits = abs_prec - v
    return PadicNumber(ctx, v, r % ctx.p ** digits, digits)


def geometric_power_sum(q: Fraction, l: int, count: int,
                        ctx: PadicContext | None = None,
                        caps: CostCaps = DEFAULT_CAPS,
                        abs_prec: int | None = None):
    """sum_{x=0}^{count-1} q^(l*x), exact when affordable.

    Falls back to capped modular arithmetic (returning a PadicNumber known
    modulo p^abs_prec) when the exact power would exceed the bit-size cap;
    this needs a context.
    """
    if l == 0:
        return Fraction(count)
    if _pow_bits(q, abs(l) * count) <= caps.max_geometric_bits:
        return (q ** (l * count) - 1) / (q**l - 1)
    if ctx is None:
        raise CostCapExceeded(
            f"exact geometric sum needs ~{_pow_bits(q, abs(l) * count)} bits "
            f"(cap {caps.max_geometric_bits}); no context for modular fallback")
    den = q**l - 1
    if abs_prec is None:
        vn = valuation(Fraction(count), ctx.p) if count % ctx.p == 0 else 0
        abs_prec = ctx.precision + vn + 4
    vden = valuation(den, ctx.p)
    top = padic_pow_rational(q, l * count, ctx, abs_prec + max(vden, 0) + 1)
    one = PadicNumber.from_rational(1, ctx, digits=abs_prec + max(vden, 0) + 1)
    divisor = PadicNumber.from_rational(den, ctx, digits=abs_prec + max(vden, 0) + 1)
    return (top - one) / divisor


def riemann_sum(f: CharacterSum, p: int, n_level: int,
                method: str = "geometric",
                ctx: PadicContext | None = None,
                caps: CostCaps = DEFAULT_CAPS) -> RiemannSumResult:
    """S_N = p^-N * sum_{x=0}^{p^N - 1} f(x)."""
    if n_level < 1:
        raise ValueError("level must be >= 1")
    count = p ** n_level
    if method == "enumeration":
        ops = count * max(1, len(f.terms))
        if ops > caps.max_enumeration_ops:
            raise CostCapExceeded(
                f"enumeration needs {ops} ops (cap {caps.max_enumeration_ops})")
        total = Fraction(0)
        qx = Fraction(1)
        for _ in range(count):
            total += sum((c * qx**l for l, c in f.terms), Fraction(0))
            qx *= f.q
        return RiemannSumResult(n_level, total / count, "enumeration")
    if method != "geometric":
        raise ValueError(f"unknown method {method!r}")
    value = _mixed_character_sum(
        [(c, f.q, l) for l, c in f.terms], f.q, count, n_level, ctx, caps)
    return RiemannSumResult(n_level, value, "geometric")


def _mixed_character_sum(parts, q: Fraction, count: int, n_level: int,
                         ctx: PadicContext | None, caps: CostCaps,
                         extra: Fraction = Fraction(0)):
    """(extra + sum of c * (geometric power sum)) / count, exact when every
    piece is exact, else carried out modulo a uniform absolute target so
    negative-valuation coefficients do not eat the working precision."""
    needs_fallback = any(
        l != 0 and _pow_bits(q, abs(l) * count) > caps.max_geometric_bits
        for _, _, l in parts)
    if not needs_fallback:
        total = extra
        for c, base, l in parts:
            total += c * geometric_power_sum(base, l, count, ctx=ctx, caps=caps)
        return total / count
    if ctx is None:
        raise CostCapExceeded("capped geometric fallback requires a context")
    p = ctx.p
    vmin = min((valuation(c, p) for c, _, l in parts if c != 0), default=0)
    # absolute target for the undivided sum: final value keeps ctx.precision
    # digits even after dividing by count and scaling by the worst coefficient
    target = ctx.precision + n_level + max(0, -vmin) + 4
    total = PadicNumber.zero_to_precision(ctx, target)
    if extra != 0:
        total = total + PadicNumber.from_rational(
            extra, ctx, digits=max(4, target - valuation(extra, p)))
    for c, base, l in parts:
        if c == 0:
            continue
        g = geometric_power_sum(base, l, count, ctx=ctx, caps=caps,
                                abs_prec=target - min(0, valuation(c, p)))
        if isinstance(g, Fraction):
            term = c * g
            if term == 0:
                continue
            pterm = PadicNumber.from_rational(
                term, ctx, digits=max(4, target - valuation(term, p)))
        else:
            pterm = g * PadicNumber.from_rational(
                c, ctx, digits=max(4, target - valuation(c, p) - max(0, g.valuation)))
        total = total + pterm
    divisor = PadicNumber.from_rational(count, ctx, digits=target)
    return total / divisor


def character_integral(l: int, q: QLike) -> LogLaurent:
    """I_0 of x |-> q^(l*x): equals l*L/(q^l - 1) for l >= 1, and 1 at l = 0."""
    if l < 0:
        raise ValueError("l must be >= 0")
    qv = rational_q(q)
    if l == 0:
        return LogLaurent.constant(1)
    return LogLaurent({1: Fraction(l) / (qv**l - 1)})


def character_sum_integral(f: CharacterSum) -> LogLaurent:
    out = LogLaurent()
    for l, c in f.terms:
        out = out + c * character_integral(l, f.q)
    return out


def monomial_integral(n: int, q: QLike) -> LogLaurent:
    """I_0([x]_q^n) by character-wise integration (equals the modified
    q-Bernoulli number exactly)."""
    return character_sum_integral(monomial_characters(n, q))


def weighted_monomial_integral(r: int, l: int, q: QLike,
                               check: bool = True) -> LogLaurent:
    """I_0([z]_q^r * q^(l z)) computed by character expansion; when check
    is set, the binomial route sum_k C(l,k) (q-1)^k beta~_{r+k,q} is
    evaluated too and exact agreement is enforced."""
    via_chars = character_sum_integral(
        monomial_characters(r, q).shift_exponents(l))
    if check:
        qv = rational_q(q)
        via_beta = LogLaurent()
        for k in range(l + 1):
            via_beta = via_beta + binomial(l, k) * (qv - 1) ** k * modified_beta(r + k, qv)
        if via_chars != via_beta:
            raise AssertionError(
                f"weighted integral routes disagree at r={r}, l={l}, q={qv}")
    return via_chars


def double_integral(m: int, n: int, q: QLike) -> LogLaurent:
    """I_0^(z) I_0^(x) of [x]_{1/q}^m [z-x]_q^n, via the exact expansion
    [z-x]_q = [z]_q - q^(z-1) [x]_{1/q} and character integrals."""
    qv = rational_q(q)
    from .bernoulli import modified_beta_inverse_q
    out = LogLaurent()
    for l in range(n + 1):
        coeff = binomial(n, l) * (-1) ** l * qv ** (-l)
        out = out + coeff * modified_beta_inverse_q(m + l, qv) \
            * weighted_monomial_integral(n - l, l, qv, check=False)
    return out


def double_riemann_sum(m: int, n: int, q: QLike, p: int, n_level: int,
                       method: str = "grouped",
                       caps: CostCaps = DEFAULT_CAPS) -> Fraction:
    """Brute-force oracle for the double integral:
    p^-2N * sum_{x,z < p^N} [x]_{1/q}^m [z-x]_q^n, exact."""
    qv = rational_q(q)
    qinv = 1 / qv
    count = p ** n_level
    if method == "naive":
        if count * count > caps.max_enumeration_ops:
            raise CostCapExceeded("naive double sum too large")
        fx = _bracket_powers(qinv, m, 0, count - 1)
        gz = _bracket_powers(qv, n, -(count - 1), count - 1)
        total = Fraction(0)
        for x in range(count):
            for z in range(count):
                total += fx[x] * gz[z - x + count - 1]
        return total / count**2
    if method != "grouped":
        raise ValueError(f"unknown method {method!r}")
    if count * 4 > caps.max_enumeration_ops:
        raise CostCapExceeded("grouped double sum too large")
    fx = _bracket_powers(qinv, m, 0, count - 1)
    prefix = [Fraction(0)] * (count + 1)
    for x in range(count):
        prefix[x + 1] = prefix[x] + fx[x]
    gz = _bracket_powers(qv, n, -(count - 1), count - 1)
    total = Fraction(0)
    for d in range(-(count - 1), count):
        if d >= 0:
            rng = prefix[count - d]
        else:
            rng = prefix[count] - prefix[-d]
        total += gz[d + count - 1] * rng
    return total / count**2


def _bracket_powers(q: Fraction, e: int, lo: int, hi: int) -> list[Fraction]:
    """[k]_q^e for k = lo..hi (index shifted by -lo), by incremental powers."""
    out = []
    qk = q**lo
    scale = 1 / (1 - q)
    for _ in range(lo, hi + 1):
        out.append(((1 - qk) * scale) ** e)
        qk *= q
    return out


@dataclass
class ConvergenceProfile:
    levels: list[int]
    sums: list[object]
    deltas: list[object]  # v_p(S_{N+1} - S_N); math.inf for exact agreement
    stabilized_value: PadicNumber
    stabilized_digits: object
    monotone_violations: list[int] = field(default_factory=list)

    def rows(self) -> list[dict]:
        out = []
        for i, lvl in enumerate(self.levels):
            out.append({
                "level": lvl,
                "delta_valuation": _fmt_val(self.deltas[i]) if i < len(self.deltas) else None,
            })
        return out


def _fmt_val(v):
    return "inf" if v == math.inf else int(v)


def _difference_valuation(a, b, ctx: PadicContext):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        d = a - b
        return math.inf if d == 0 else valuation(d, ctx.p)
    pa = a if isinstance(a, PadicNumber) else PadicNumber.from_rational(a, ctx)
    pb = b if isinstance(b, PadicNumber) else PadicNumber.from_rational(b, ctx)
    return (pa - pb).valuation


def convergence_profile(f: CharacterSum, p: int, levels: range | list[int],
                        ctx: PadicContext | None = None,
                        caps: CostCaps = DEFAULT_CAPS) -> ConvergenceProfile:
    """Riemann sums over a range of levels with digit-gain diagnostics."""
    levels = list(levels)
    if not levels:
        raise ValueError("need at least one level")
    if p ** max(levels) > caps.max_profile_count:
        raise CostCapExceeded(
            f"level {max(levels)} exceeds the profile cost cap "
            f"(p^N > {caps.max_profile_count})")
    if ctx is None:
        ctx = PadicContext(p, max(8, max(levels) + 4))
    sums = [riemann_sum(f, p, n, ctx=ctx, caps=caps).value for n in levels]
    deltas = [_difference_valuation(sums[i + 1], sums[i], ctx)
              for i in range(len(sums) - 1)]
    violations = [i for i in range(1, len(deltas)) if deltas[i] < deltas[i - 1]]
    last = sums[-1]
    stab = last if isinstance(last, PadicNumber) else PadicNumber.from_rational(last, ctx)
    digits = min(deltas[-2:]) if deltas else math.inf
    return ConvergenceProfile(levels, sums, deltas, stab, digits, violations)
