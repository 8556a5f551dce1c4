"""Exact series terms, majorant tails and certified infinite sums.

Both hydrogen series have the shape

    term(n) = p(n) / (n + 1)**s * ((n - 1) / (n + 1))**(a*n + b)

with ``a*n + b >= 0``, so ``p(n) / (n + 1)**s`` is a term-wise majorant whose
tail sum reduces to Hurwitz zeta values at integer shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from mpmath import libmp

from sumcert.numeric_core import (
    DEFAULT_CONTEXT,
    DomainError,
    Enclosure,
    PrecisionContext,
    PrecisionError,
    _nudge,
)
from sumcert.zeta import ZetaCombination, eval_zeta_combination

__all__ = [
    "DivergenceError",
    "Polynomial",
    "RatioPowerForm",
    "SeriesSpec",
    "SeriesSum",
    "term_eq6",
    "term_eq9",
    "log_term",
    "binomial_shift_tail",
    "majorant_tail",
    "partial_enclosure",
    "sum_enclosure",
    "EQ6_SERIES",
    "EQ9_SERIES",
    "EXACT_CUTOFF",
]

# terms up to this index are summed as exact rationals
EXACT_CUTOFF = 64


class DivergenceError(DomainError):
    """A requested tail sum does not converge."""


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with exact rational coefficients, lowest degree first."""

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def monomial(cls, coeff, degree: int) -> Polynomial:
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (Fraction(0),) * (n - len(self.coefficients))
        b = other.coefficients + (Fraction(0),) * (n - len(other.coefficients))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def shifted(self, h) -> Polynomial:
        """The polynomial ``x -> self(x + h)``."""
        h = Fraction(h)
        out = [Fraction(0)] * len(self.coefficients)
        for i, a in enumerate(self.coefficients):
            for j in range(i + 1):
                out[j] += a * comb(i, j) * h ** (i - j)
        return Polynomial(tuple(out))

    def integer_form(self) -> tuple[tuple[int, ...], int]:
        """``(integer coefficients, d)`` with ``self == integer_poly / d``."""
        d = math.lcm(*(c.denominator for c in self.coefficients)) if self.coefficients else 1
        return tuple(int(c * d) for c in self.coefficients), d


@dataclass(frozen=True)
class RatioPowerForm:
    """``poly(n) / (n+1)**s * ((n-1)/(n+1))**(a*n+b)``, evaluated in log domain."""

    poly: Polynomial
    s: int
    a: int
    b: int

    def exponent(self, n: int) -> int:
        return self.a * n + self.b

    def log_enclosure(self, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
        """Enclosure of ``ln term(n)``."""
        prefactor = Enclosure.exact(self.poly(n), ctx).log()
        ln_up = Enclosure.exact(n + 1, ctx).log()
        ln_down = Enclosure.exact(n - 1, ctx).log()
        return prefactor - ln_up * self.s + (ln_down - ln_up) * self.exponent(n)

    def enclosure_sum(self, start: int, stop: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
        """Certified sum of terms for ``start <= n < stop``.

        Same arithmetic as ``exp(log_enclosure(n))`` but on raw endpoints with
        logarithms of consecutive integers reused.
        """
        prec = ctx.bits
        coeffs, denom = self.poly.integer_form()
        s, a, b = self.s, self.a, self.b
        add, sub, mul, div = libmp.mpf_add, libmp.mpf_sub, libmp.mpf_mul, libmp.mpf_div
        from_int, exp_, log_ = libmp.from_int, libmp.mpf_exp, libmp.mpf_log
        one = libmp.fone

        def ln_int(k):
            r = log_(from_int(k), prec, "n")
            return _nudge(r, prec, "f"), _nudge(r, prec, "c")

        total_lo = total_hi = libmp.fzero
        prev = ln_int(start - 1)
        cur = ln_int(start)
        for n in range(start, stop):
            nxt = ln_int(n + 1)
            e = from_int(a * n + b)
            # diff < 0 and e >= 0, so e*diff keeps the endpoint order
            x_lo = mul(e, sub(prev[0], nxt[1], prec, "f"), prec, "f")
            x_hi = mul(e, sub(prev[1], nxt[0], prec, "c"), prec, "c")
            r = exp_(x_lo, prec, "n")
            r_lo = _nudge(r, prec, "f")
            # exp(x_hi) <= exp(x_lo) * (1 + 2w) while w = x_hi - x_lo <= 1
            w = sub(x_hi, x_lo, prec, "c")
            r_hi = mul(_nudge(r, prec, "c"), add(one, libmp.mpf_shift(w, 1), prec, "c"), prec, "c")
            num = 0
            for c in reversed(coeffs):
                num = num * n + c
            num = from_int(num)
            den = from_int(denom * (n + 1) ** s)
            total_lo = add(total_lo, mul(div(num, den, prec, "f"), r_lo, prec, "f"), prec, "f")
            total_hi = add(total_hi, mul(div(num, den, prec, "c"), r_hi, prec, "c"), prec, "c")
            prev, cur = cur, nxt
        return Enclosure(total_lo, total_hi, prec)


@dataclass(frozen=True)
class SeriesSpec:
    """A positive series ``sum_{n >= first_index} term(n)`` with a majorant.

    ``majorant = (p, s)`` promises ``term(n) <= p(n) / (n+1)**s``.
    """

    name: str
    first_index: int
    term: Callable[[int], Fraction]
    majorant: tuple[Polynomial, int]
    claimed_value: Optional[Fraction] = None
    log_form: Optional[RatioPowerForm] = field(default=None, compare=False)


@dataclass(frozen=True)
class SeriesSum:
    enclosure: Enclosure
    cutoff: int
    partial: Enclosure
    tail_bound: Enclosure


def term_eq6(n: int) -> Fraction:
    """``2**10 n**7 (n**2 - 4) (n-1)**(2n-6) / (n+1)**(2n+6)``, exact."""
    if n < 3:
        raise DomainError(f"eq6 series starts at n = 3, got {n}")
    return Fraction(2**10 * n**7 * (n * n - 4) * (n - 1) ** (2 * n - 6), (n + 1) ** (2 * n + 6))


def term_eq9(n: int) -> Fraction:
    """``(2**8 / 3) n**5 (n-1)**(2n-4) / (n+1)**(2n+4)``, exact."""
    if n < 2:
        raise DomainError(f"eq9 series starts at n = 2, got {n}")
    return Fraction(2**8 * n**5 * (n - 1) ** (2 * n - 4), 3 * (n + 1) ** (2 * n + 4))


def log_term(spec: SeriesSpec, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Enclosure of ``spec.term(n)`` computed as ``exp`` of an enclosed logarithm."""
    if n < spec.first_index:
        raise DomainError(f"{spec.name} series starts at n = {spec.first_index}, got {n}")
    if spec.log_form is None:
        return Enclosure.exact(spec.term(n), ctx)
    return spec.log_form.log_enclosure(n, ctx).exp()


def binomial_shift_tail(p: Polynomial, s: int, m: int) -> ZetaCombination:
    """Exact form of ``sum_{n=m+1}^inf p(n) / (n+1)**s``.

    Writing ``n = k - 1`` with ``k = n + 1`` gives
    ``sum_j c_j zeta(s - j, m + 2)`` where ``p(k - 1) = sum_j c_j k**j``.
    """
    if p.degree > s - 2:
        raise DivergenceError(
            f"tail of p(n)/(n+1)^{s} diverges for deg p = {p.degree} (need deg p <= s - 2)"
        )
    if m + 2 <= 0:
        raise DomainError(f"tail start m + 1 must be >= 0, got m = {m}")
    shifted = p.shifted(-1)
    terms = tuple((c, s - j, Fraction(m + 2)) for j, c in enumerate(shifted.coefficients) if c)
    return ZetaCombination(terms)


def majorant_tail(spec: SeriesSpec, m: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Enclosure of the majorant sum over ``n > m``."""
    p, s = spec.majorant
    return eval_zeta_combination(binomial_shift_tail(p, s, m), ctx)


def _exact_partial(spec: SeriesSpec, stop: int) -> Fraction:
    return sum((spec.term(n) for n in range(spec.first_index, stop)), Fraction(0))


def partial_enclosure(spec: SeriesSpec, cutoff: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesSum:
    """Enclosure of the full sum from the terms ``n <= cutoff`` plus the
    majorant tail beyond ``cutoff``."""
    if cutoff < spec.first_index:
        raise DomainError(f"cutoff {cutoff} is below the first index {spec.first_index}")
    if spec.log_form is None:
        exact_stop = cutoff + 1
    else:
        exact_stop = min(cutoff, EXACT_CUTOFF) + 1
    partial = Enclosure.exact(_exact_partial(spec, exact_stop), ctx)
    if exact_stop <= cutoff:
        partial = partial + spec.log_form.enclosure_sum(exact_stop, cutoff + 1, ctx)
    tail = majorant_tail(spec, cutoff, ctx)
    enclosure = Enclosure(partial._lo, libmp.mpf_add(partial._hi, tail._hi, partial.prec, "c"), partial.prec)
    return SeriesSum(enclosure, cutoff, partial, tail)


def sum_enclosure(
    spec: SeriesSpec,
    target_width,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    max_cutoff: int = 2**21,
) -> SeriesSum:
    """Certified enclosure of the whole series with width at most ``target_width``.

    The cutoff starts at ``EXACT_CUTOFF`` and doubles until the majorant tail
    is below half the target, then is bisected back toward the smallest such
    cutoff.  Raises :class:`PrecisionError` when the target needs a cutoff
    above ``max_cutoff`` or finer rounding than ``ctx`` provides.
    """
    target = Fraction(target_width) if not isinstance(target_width, float) else Fraction(str(target_width))
    if target <= 0:
        raise DomainError("target_width must be positive")
    cutoff = max(EXACT_CUTOFF, spec.first_index)
    tail = majorant_tail(spec, cutoff, ctx)
    below = None
    while tail.hi >= target / 2:
        if 2 * cutoff > max_cutoff:
            raise PrecisionError(
                f"{spec.name}: majorant tail still {float(tail.hi):.3g} at cutoff {cutoff}",
                best_width=tail.hi,
            )
        below = cutoff
        cutoff *= 2
        tail = majorant_tail(spec, cutoff, ctx)
    if below is not None:
        # the last doubling overshoots; bisect back on the cheap tail bound
        # down to a 1/64 granularity of the bracket
        step = max(1, (cutoff - below) // 64)
        while cutoff - below > step:
            mid = (below + cutoff) // 2
            if majorant_tail(spec, mid, ctx).hi < target / 2:
                cutoff = mid
            else:
                below = mid
    result = partial_enclosure(spec, cutoff, ctx)
    if result.enclosure.width > target:
        raise PrecisionError(
            f"{spec.name}: width {float(result.enclosure.width):.3g} exceeds target "
            f"{float(target):.3g} at {ctx.decimal_digits} digits",
            best_width=result.enclosure.width,
        )
    return result


_EQ6_POLY = Polynomial.monomial(2**10, 9) + Polynomial.monomial(-4 * 2**10, 7)
_EQ9_POLY = Polynomial.monomial(Fraction(2**8, 3), 5)

EQ6_SERIES = SeriesSpec(
    name="eq6",
    first_index=3,
    term=term_eq6,
    majorant=(_EQ6_POLY, 12),
    claimed_value=Fraction(15, 2),
    log_form=RatioPowerForm(_EQ6_POLY, 12, 2, -6),
)

EQ9_SERIES = SeriesSpec(
    name="eq9",
    first_index=2,
    term=term_eq9,
    majorant=(_EQ9_POLY, 8),
    claimed_value=Fraction(1),
    log_form=RatioPowerForm(_EQ9_POLY, 8, 2, -4),
)
