"""Bernoulli numbers and certified Hurwitz / Riemann zeta values.

For integer ``s >= 2`` and rational ``q > 0`` every ingredient of the
Euler-Maclaurin formula for ``zeta(s, q) = sum_{j>=0} (j + q)^-s`` is rational,
so the truncated formula and its remainder bound are formed exactly and only
the two final endpoints are rounded.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from sumcert.numeric_core import (
    DEFAULT_CONTEXT,
    DomainError,
    Enclosure,
    PrecisionContext,
    pi_enclosure,
)

__all__ = [
    "bernoulli",
    "hurwitz_zeta",
    "riemann_zeta",
    "even_zeta_pi_form",
    "ZetaCombination",
    "eval_zeta_combination",
]

_bernoulli_table: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number ``B_k`` with ``B_1 = -1/2``.

    Uses ``sum_{j=0}^{k} C(k+1, j) B_j = 0``; results are memoized in an
    append-only table.
    """
    if k < 0:
        raise DomainError(f"Bernoulli index must be >= 0, got {k}")
    table = _bernoulli_table
    if k < len(table):
        return table[k]
    with _bernoulli_lock:
        while len(table) <= k:
            m = len(table)
            if m > 1 and m % 2 == 1:
                table.append(Fraction(0))
                continue
            acc = sum((comb(m + 1, j) * table[j] for j in range(m) if table[j]), Fraction(0))
            table.append(-acc / (m + 1))
    return table[k]


def _check_args(s, q) -> Fraction:
    if not isinstance(s, int) or isinstance(s, bool):
        raise DomainError(f"s must be an integer, got {s!r}")
    if s < 2:
        raise DomainError(f"zeta(s, q) diverges for s = {s}; need s >= 2")
    q = Fraction(q)
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    return q


def _rising(s: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= s + i
    return out


def _em_correction(s: int, x: Fraction, k: int) -> Fraction:
    """k-th Euler-Maclaurin correction term for f(t) = (t + q)^-s at t + q = x."""
    return bernoulli(2 * k) / math.factorial(2 * k) * _rising(s, 2 * k - 1) / x ** (s + 2 * k - 1)


@lru_cache(maxsize=4096)
def _hurwitz_bounds(s: int, q: Fraction, digits: int) -> tuple[Fraction, Fraction]:
    tolerance = Fraction(1, 10 ** (digits - 8)) / 10
    n_direct = max(10, digits)
    n_corr = math.ceil(digits / 4)
    while True:
        head = sum((1 / (q + j) ** s for j in range(n_direct)), Fraction(0))
        x = q + n_direct
        approx = head + 1 / ((s - 1) * x ** (s - 1)) + 1 / (2 * x**s)
        for k in range(1, n_corr + 1):
            approx += _em_correction(s, x, k)
        # all derivatives of (t+q)^-s are monotone of fixed sign, so the
        # remainder is bounded by the first omitted correction
        remainder = abs(_em_correction(s, x, n_corr + 1))
        if 2 * remainder <= tolerance:
            return approx - remainder, approx + remainder
        n_direct *= 2


def hurwitz_zeta(s: int, q, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Certified enclosure of ``zeta(s, q)`` for integer ``s >= 2``, rational ``q > 0``."""
    q = _check_args(s, q)
    lo, hi = _hurwitz_bounds(s, q, ctx.decimal_digits)
    return Enclosure.from_bounds(lo, hi, ctx)


def riemann_zeta(s: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    return hurwitz_zeta(s, 1, ctx)


def even_zeta_pi_form(k: int) -> tuple[Fraction, int]:
    """Exact ``c`` with ``zeta(k) = c * pi**k`` for even ``k >= 2``."""
    if not isinstance(k, int) or k < 2 or k % 2:
        raise DomainError(f"closed form exists only for even k >= 2, got {k!r}")
    m = k // 2
    coeff = (-1) ** (m + 1) * bernoulli(k) * 2 ** (k - 1) / math.factorial(k)
    return coeff, k


@dataclass(frozen=True)
class ZetaCombination:
    """``constant + sum c * zeta(s, q) + sum c * pi**power`` with exact coefficients."""

    terms: tuple[tuple[Fraction, int, Fraction], ...] = ()
    constant: Fraction = Fraction(0)
    pi_terms: tuple[tuple[Fraction, int], ...] = field(default=())

    def __post_init__(self):
        terms = tuple((Fraction(c), s, Fraction(q)) for c, s, q in self.terms)
        for _, s, q in terms:
            _check_args(s, q)
        pi_terms = tuple((Fraction(c), p) for c, p in self.pi_terms)
        for _, p in pi_terms:
            if not isinstance(p, int) or p < 2 or p % 2:
                raise DomainError(f"pi powers must be even integers >= 2, got {p!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "pi_terms", pi_terms)
        object.__setattr__(self, "constant", Fraction(self.constant))

    def __add__(self, other: ZetaCombination) -> ZetaCombination:
        return ZetaCombination(
            self.terms + other.terms,
            self.constant + other.constant,
            self.pi_terms + other.pi_terms,
        )

    def scaled(self, factor) -> ZetaCombination:
        f = Fraction(factor)
        return ZetaCombination(
            tuple((f * c, s, q) for c, s, q in self.terms),
            f * self.constant,
            tuple((f * c, p) for c, p in self.pi_terms),
        )

    def normalized(self) -> ZetaCombination:
        """Canonical form: integer shifts folded into the constant, even
        Riemann values turned into pi powers, like terms merged, zeros dropped.

        Two combinations with equal normal forms are equal as real numbers.
        """
        zetas: dict[tuple[int, Fraction], Fraction] = {}
        pis: dict[int, Fraction] = {}
        constant = self.constant
        for c, s, q in self.terms:
            if q.denominator == 1 and q > 1:
                # zeta(s, q) = zeta(s) - sum_{j<q} j^-s
                constant -= c * sum(Fraction(1, j**s) for j in range(1, q.numerator))
                q = Fraction(1)
            if q == 1 and s % 2 == 0:
                pc, p = even_zeta_pi_form(s)
                pis[p] = pis.get(p, Fraction(0)) + c * pc
            else:
                zetas[(s, q)] = zetas.get((s, q), Fraction(0)) + c
        for c, p in self.pi_terms:
            pis[p] = pis.get(p, Fraction(0)) + c
        ordered = sorted(zetas.items(), key=lambda kv: (-kv[0][0], kv[0][1]))
        return ZetaCombination(
            tuple((c, s, q) for (s, q), c in ordered if c),
            constant,
            tuple((c, p) for p, c in sorted(pis.items(), reverse=True) if c),
        )


def eval_zeta_combination(zc: ZetaCombination, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    total = Enclosure.exact(zc.constant, ctx)
    for c, s, q in zc.terms:
        total = total + hurwitz_zeta(s, q, ctx) * c
    if zc.pi_terms:
        pi = pi_enclosure(ctx)
        for c, p in zc.pi_terms:
            total = total + pi**p * c
    return total
