"""Independent reference computations used by the tests.

Nothing here touches mpmath or the package's Euler-Maclaurin and log-domain
code: sums are brute forced with ``decimal`` in directed rounding modes, tails
are bracketed by integrals, and exact terms use plain big integers.
"""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from math import comb

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover
    _mpz = int

PREC = 60
DOWN = Context(prec=PREC, rounding=ROUND_FLOOR)
UP = Context(prec=PREC, rounding=ROUND_CEILING)


def frac_down(x: Fraction) -> Decimal:
    return DOWN.divide(Decimal(x.numerator), Decimal(x.denominator))


def frac_up(x: Fraction) -> Decimal:
    return UP.divide(Decimal(x.numerator), Decimal(x.denominator))


def bracket(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    return Fraction(frac_down(lo)), Fraction(frac_up(hi))


def brute_partial(num_fn, den_fn, start: int, stop: int) -> tuple[Decimal, Decimal]:
    """Directed-rounding sum of ``num_fn(n) / den_fn(n)`` for start <= n < stop."""
    lo = hi = Decimal(0)
    for n in range(start, stop):
        a, b = Decimal(num_fn(n)), Decimal(den_fn(n))
        lo = DOWN.add(lo, DOWN.divide(a, b))
        hi = UP.add(hi, UP.divide(a, b))
    return lo, hi


def brute_hurwitz(s: int, q: Fraction, n_terms: int = 2000) -> tuple[Fraction, Fraction]:
    """zeta(s, q) from a partial sum and the integral bracket
    int_N^inf (x+q)^-s  <=  tail  <=  (N+q)^-s + int_N^inf (x+q)^-s."""
    q = Fraction(q)
    p, d = q.numerator, q.denominator
    lo, hi = brute_partial(lambda j: d**s, lambda j: (j * d + p) ** s, 0, n_terms)
    x = q + n_terms
    integral = 1 / ((s - 1) * x ** (s - 1))
    return Fraction(lo) + Fraction(frac_down(integral)), Fraction(hi) + Fraction(frac_up(integral + 1 / x**s))


def bernoulli_akiyama_tanigawa(n: int) -> list[Fraction]:
    """B_0..B_n by the Akiyama-Tanigawa triangle, converted to B_1 = -1/2."""
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return out


def _arctan_inv_bounds(x: int, terms: int) -> tuple[Fraction, Fraction]:
    # alternating series: consecutive partial sums bracket arctan(1/x)
    s = Fraction(0)
    partials = []
    for k in range(terms + 1):
        s += Fraction((-1) ** k, (2 * k + 1) * x ** (2 * k + 1))
        partials.append(s)
    a, b = partials[-2], partials[-1]
    return min(a, b), max(a, b)


def pi_bounds(terms: int = 60) -> tuple[Fraction, Fraction]:
    """Machin: pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    a_lo, a_hi = _arctan_inv_bounds(5, terms)
    b_lo, b_hi = _arctan_inv_bounds(239, terms)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


def eq9_exact_fixed_point(stop: int, bits: int = 256) -> tuple[Fraction, Fraction]:
    """Bracket of sum_{n=2}^{stop-1} term_eq9(n).

    Each term is an exact ratio of big integers, floored and ceiled to
    ``bits`` binary places; the integer sums are then exact.
    """
    lo = hi = 0
    for n in range(2, stop):
        num = _mpz(256) * n**5 * _mpz(n - 1) ** (2 * n - 4) << bits
        den = _mpz(3) * _mpz(n + 1) ** (2 * n + 4)
        qt, r = divmod(num, den)
        lo += int(qt)
        hi += int(qt) + (1 if r else 0)
    return Fraction(lo, 2**bits), Fraction(hi, 2**bits)


def eq9_crude_tail(last: int) -> Fraction:
    """Upper bound of (256/3) sum_{n>last} n^5/(n+1)^8 <= (256/3) int_last^inf (x+1)^-3."""
    return Fraction(256, 3) / (2 * (last + 1) ** 2)


def eq6_majorant_integral(a: Fraction) -> Fraction:
    """int_a^inf 2^10 (x^9 - 4 x^7) / (x+1)^12 dx, exact."""
    u = a + 1
    total = Fraction(0)
    # (u-1)^9 - 4 (u-1)^7 = sum_j c_j u^j
    for j in range(10):
        c = comb(9, j) * (-1) ** (9 - j)
        if j <= 7:
            c -= 4 * comb(7, j) * (-1) ** (7 - j)
        total += Fraction(c) * u ** (j - 11) / (11 - j)
    return 1024 * total


def eq6_majorant_brute(stop: int) -> tuple[Fraction, Fraction]:
    """sum_{n>=3} 2^10 n^7 (n^2-4)/(n+1)^12 from a partial sum to ``stop - 1``
    and the integral bracket of the (eventually decreasing) summand."""
    lo, hi = brute_partial(lambda n: 1024 * n**7 * (n * n - 4), lambda n: (n + 1) ** 12, 3, stop)
    # the summand decreases for n >= 7, so for N = stop - 1 >= 7
    # int_{N+1}^inf g <= sum_{n>N} g <= int_N^inf g
    last = stop - 1
    return (
        Fraction(lo) + Fraction(frac_down(eq6_majorant_integral(Fraction(last + 1)))),
        Fraction(hi) + Fraction(frac_up(eq6_majorant_integral(Fraction(last)))),
    )
