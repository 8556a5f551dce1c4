"""Exact rationals, directed-rounding reals and interval enclosures.

Exact values are plain :class:`fractions.Fraction` objects (always reduced,
denominator positive).  Real arithmetic runs on mpmath's low-level ``libmp``
floats with an explicit precision and rounding direction per call, so there
is no global context and every function here is pure.

The rounding discipline is:

* ``+ - * /`` are computed with the endpoint rounded toward the outside
  (floor for the lower endpoint, ceiling for the upper one);
* transcendental kernels (``exp``, ``log``, ``pi``) are rounded outward and
  then widened by one more ulp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from mpmath import libmp

__all__ = [
    "BigRational",
    "DomainError",
    "PrecisionError",
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "Enclosure",
    "rational_pow",
    "enclose_rational",
    "add",
    "sub",
    "mul",
    "div",
    "pi_enclosure",
    "format_directed",
]

BigRational = Fraction

RationalLike = Union[int, Fraction]


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionError(ArithmeticError):
    """A requested accuracy cannot be reached at the working precision."""

    def __init__(self, message: str, best_width: Fraction | None = None):
        super().__init__(message)
        self.best_width = best_width


_LOG2_10 = math.log2(10)
_GUARD_BITS = 4


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for real arithmetic, in decimal digits."""

    decimal_digits: int = 50

    def __post_init__(self):
        if not isinstance(self.decimal_digits, int) or self.decimal_digits < 30:
            raise DomainError(
                f"decimal_digits must be an integer >= 30, got {self.decimal_digits!r}"
            )

    @property
    def bits(self) -> int:
        return math.ceil(self.decimal_digits * _LOG2_10) + _GUARD_BITS


DEFAULT_CONTEXT = PrecisionContext()


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, (str, Decimal)):
        return Fraction(Decimal(x))
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


def _raw_from_fraction(x: Fraction, prec: int, rnd: str):
    if x.denominator == 1:
        return libmp.from_int(x.numerator, prec, rnd)
    return libmp.from_rational(x.numerator, x.denominator, prec, rnd)


def _raw_to_fraction(x) -> Fraction:
    p, q = libmp.to_rational(x)
    return Fraction(int(p), int(q))


def _nudge(x, prec: int, rnd: str):
    # |x| * 2^(1-prec) is at least one ulp of x at this precision
    if x == libmp.fzero:
        return x
    step = libmp.mpf_shift(libmp.mpf_abs(x), 1 - prec)
    if rnd == "f":
        return libmp.mpf_sub(x, step, prec, "f")
    return libmp.mpf_add(x, step, prec, "c")


class Enclosure:
    """A closed real interval ``[lo, hi]`` certified to contain a value.

    Endpoints are binary floats carrying ``prec`` bits.  The public ``lo`` and
    ``hi`` attributes return them as exact fractions.
    """

    __slots__ = ("_lo", "_hi", "prec")

    def __init__(self, lo, hi, prec: int):
        if libmp.mpf_lt(hi, lo):
            raise ValueError("enclosure endpoints out of order")
        self._lo = lo
        self._hi = hi
        self.prec = prec

    # construction ---------------------------------------------------------

    @classmethod
    def exact(cls, x: RationalLike, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
        x = _as_fraction(x)
        prec = ctx.bits
        return cls(_raw_from_fraction(x, prec, "f"), _raw_from_fraction(x, prec, "c"), prec)

    @classmethod
    def from_bounds(
        cls, lo: RationalLike, hi: RationalLike, ctx: PrecisionContext = DEFAULT_CONTEXT
    ) -> Enclosure:
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if hi < lo:
            raise ValueError("enclosure endpoints out of order")
        prec = ctx.bits
        return cls(_raw_from_fraction(lo, prec, "f"), _raw_from_fraction(hi, prec, "c"), prec)

    def _coerce(self, other) -> Enclosure:
        if isinstance(other, Enclosure):
            return other
        x = _as_fraction(other)
        return Enclosure(
            _raw_from_fraction(x, self.prec, "f"), _raw_from_fraction(x, self.prec, "c"), self.prec
        )

    # views ----------------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return _raw_to_fraction(self._lo)

    @property
    def hi(self) -> Fraction:
        return _raw_to_fraction(self._hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        lo, hi = self.format(17)
        return f"Enclosure([{lo}, {hi}])"

    def format(self, digits: int) -> tuple[str, str]:
        """Endpoints as decimal strings; lo rounds down and hi rounds up."""
        return format_directed(self.lo, digits, "down"), format_directed(self.hi, digits, "up")

    # certified comparisons --------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return libmp.mpf_le(self._lo, x._lo) and libmp.mpf_le(x._hi, self._hi)
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def overlaps(self, other: Enclosure) -> bool:
        return libmp.mpf_le(self._lo, other._hi) and libmp.mpf_le(other._lo, self._hi)

    def certainly_lt(self, other) -> bool:
        """True when every point of ``self`` is below every point of ``other``."""
        if isinstance(other, Enclosure):
            return libmp.mpf_lt(self._hi, other._lo)
        return self.hi < _as_fraction(other)

    def certainly_gt(self, other) -> bool:
        if isinstance(other, Enclosure):
            return libmp.mpf_lt(other._hi, self._lo)
        return self.lo > _as_fraction(other)

    def contains_zero(self) -> bool:
        return libmp.mpf_sign(self._lo) <= 0 <= libmp.mpf_sign(self._hi)

    # arithmetic -------------------------------------------------------------

    def __neg__(self) -> Enclosure:
        return Enclosure(libmp.mpf_neg(self._hi), libmp.mpf_neg(self._lo), self.prec)

    def __pos__(self) -> Enclosure:
        return self

    def __add__(self, other) -> Enclosure:
        b = self._coerce(other)
        p = max(self.prec, b.prec)
        return Enclosure(
            libmp.mpf_add(self._lo, b._lo, p, "f"), libmp.mpf_add(self._hi, b._hi, p, "c"), p
        )

    __radd__ = __add__

    def __sub__(self, other) -> Enclosure:
        b = self._coerce(other)
        p = max(self.prec, b.prec)
        return Enclosure(
            libmp.mpf_sub(self._lo, b._hi, p, "f"), libmp.mpf_sub(self._hi, b._lo, p, "c"), p
        )

    def __rsub__(self, other) -> Enclosure:
        return self._coerce(other) - self

    def __mul__(self, other) -> Enclosure:
        b = self._coerce(other)
        p = max(self.prec, b.prec)
        mul_ = libmp.mpf_mul
        if libmp.mpf_sign(self._lo) >= 0 and libmp.mpf_sign(b._lo) >= 0:
            return Enclosure(mul_(self._lo, b._lo, p, "f"), mul_(self._hi, b._hi, p, "c"), p)
        pairs = [(self._lo, b._lo), (self._lo, b._hi), (self._hi, b._lo), (self._hi, b._hi)]
        lows = [mul_(x, y, p, "f") for x, y in pairs]
        highs = [mul_(x, y, p, "c") for x, y in pairs]
        return Enclosure(_raw_min(lows), _raw_max(highs), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Enclosure:
        b = self._coerce(other)
        if b.contains_zero():
            raise DomainError("division by an enclosure containing zero")
        p = max(self.prec, b.prec)
        div_ = libmp.mpf_div
        pairs = [(self._lo, b._lo), (self._lo, b._hi), (self._hi, b._lo), (self._hi, b._hi)]
        lows = [div_(x, y, p, "f") for x, y in pairs]
        highs = [div_(x, y, p, "c") for x, y in pairs]
        return Enclosure(_raw_min(lows), _raw_max(highs), p)

    def __rtruediv__(self, other) -> Enclosure:
        return self._coerce(other) / self

    def __pow__(self, k: int) -> Enclosure:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        if k == 0:
            return self._coerce(1)
        p = self.prec
        if libmp.mpf_sign(self._lo) >= 0:
            return Enclosure(_raw_pow(self._lo, k, p, "f"), _raw_pow(self._hi, k, p, "c"), p)
        if libmp.mpf_sign(self._hi) <= 0:
            neg = (-self) ** k
            return -neg if k % 2 else neg
        if k % 2:
            lo = libmp.mpf_neg(_raw_pow(libmp.mpf_neg(self._lo), k, p, "c"))
            return Enclosure(lo, _raw_pow(self._hi, k, p, "c"), p)
        big = _raw_max([libmp.mpf_neg(self._lo), self._hi])
        return Enclosure(libmp.fzero, _raw_pow(big, k, p, "c"), p)

    def exp(self) -> Enclosure:
        p = self.prec
        lo = _nudge(libmp.mpf_exp(self._lo, p, "f"), p, "f")
        hi = _nudge(libmp.mpf_exp(self._hi, p, "c"), p, "c")
        return Enclosure(lo, hi, p)

    def log(self) -> Enclosure:
        if libmp.mpf_sign(self._lo) <= 0:
            raise DomainError("logarithm of an enclosure that is not strictly positive")
        p = self.prec
        lo = _nudge(libmp.mpf_log(self._lo, p, "f"), p, "f")
        hi = _nudge(libmp.mpf_log(self._hi, p, "c"), p, "c")
        return Enclosure(lo, hi, p)


def _raw_min(xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_lt(x, best):
            best = x
    return best


def _raw_max(xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_lt(best, x):
            best = x
    return best


def _raw_pow(x, k: int, prec: int, rnd: str):
    # x >= 0, so directed rounding of each product keeps the direction
    result = libmp.fone
    base = x
    while k:
        if k & 1:
            result = libmp.mpf_mul(result, base, prec, rnd)
        k >>= 1
        if k:
            base = libmp.mpf_mul(base, base, prec, rnd)
    return result


def rational_pow(base: RationalLike, exp: int) -> Fraction:
    """Exact ``base ** exp`` in lowest terms."""
    base = _as_fraction(base)
    if base == 0 and exp < 0:
        raise DomainError("zero base with negative exponent")
    return base**exp


def enclose_rational(x: RationalLike, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    return Enclosure.exact(x, ctx)


def add(a: Enclosure, b: Enclosure) -> Enclosure:
    return a + b


def sub(a: Enclosure, b: Enclosure) -> Enclosure:
    return a - b


def mul(a: Enclosure, b: Enclosure) -> Enclosure:
    return a * b


def div(a: Enclosure, b: Enclosure) -> Enclosure:
    return a / b


@lru_cache(maxsize=None)
def _pi_raw(prec: int):
    lo = _nudge(libmp.mpf_pi(prec, "f"), prec, "f")
    hi = _nudge(libmp.mpf_pi(prec, "c"), prec, "c")
    return lo, hi


def pi_enclosure(ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    lo, hi = _pi_raw(ctx.bits)
    return Enclosure(lo, hi, ctx.bits)


def _decimal_exponent(a: Fraction) -> int:
    """floor(log10(a)) for a > 0."""
    e = len(str(a.numerator)) - len(str(a.denominator))
    if a < Fraction(10) ** e:
        e -= 1
    elif a >= Fraction(10) ** (e + 1):
        e += 1
    return e


def format_directed(x: RationalLike, digits: int, direction: str) -> str:
    """Decimal string of ``x`` with ``digits`` significant digits.

    ``direction`` is ``"down"`` (toward -inf) or ``"up"`` (toward +inf), so the
    printed lower and upper endpoints of an enclosure still enclose it.
    """
    if direction not in ("down", "up"):
        raise ValueError(f"direction must be 'down' or 'up', got {direction!r}")
    x = _as_fraction(x)
    if x == 0:
        return "0"
    scale = digits - 1 - _decimal_exponent(abs(x))
    scaled = x * Fraction(10) ** scale
    if direction == "down":
        n = math.floor(scaled)
    else:
        n = math.ceil(scaled)
    sign, coeff, _ = Decimal(n).as_tuple()
    return str(Decimal((sign, coeff, -scale)))
