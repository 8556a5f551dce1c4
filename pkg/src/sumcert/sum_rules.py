"""Upper bounds, verdicts and completeness checks for the two sum rules.

Sign convention for the general sum rule: with ``F`` chosen so that
``(H' - <0|H'|0>)|0> = [H0, F]|0>``, inserting a complete set of states gives

    sum_{n>0} |<n|H'|0>|^2 / (E_0 - E_n) = <0|H'|0><0|F|0> - <0|H'F|0>

which fixes the orientation of every right-hand side below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from sumcert.numeric_core import (
    DEFAULT_CONTEXT,
    DomainError,
    Enclosure,
    PrecisionContext,
)
from sumcert.series import (
    EQ6_SERIES,
    EQ9_SERIES,
    EXACT_CUTOFF,
    SeriesSpec,
    binomial_shift_tail,
    majorant_tail,
    sum_enclosure,
    term_eq9,
)
from sumcert.zeta import ZetaCombination, eval_zeta_combination

__all__ = [
    "EQ6_CLOSED_FORM",
    "majorant_closed_form_eq6",
    "majorant_binomial_route_eq6",
    "hybrid_bound_eq9",
    "SumRuleStatement",
    "Verdict",
    "SpectralModel",
    "evaluate_sum_rule",
    "completeness_deficit",
    "verify_general_sum_rule",
    "oscillator_model",
    "hydrogen_dipole_model",
    "RULES",
]

# sum_{n>=3} 2^10 n^7 (n^2 - 4) / (n+1)^12 in terms of Riemann zeta values,
# coefficients as printed alongside the approximate value 6.889304238
EQ6_CLOSED_FORM = ZetaCombination(
    terms=(
        (-19456, 11, 1),
        (-57344, 9, 1),
        (43008, 7, 1),
        (32768, 5, 1),
        (1024, 3, 1),
    ),
    constant=Fraction(3, 4),
    pi_terms=(
        (Fraction(707584, 212837625), 12),
        (Fraction(16384, 31185), 10),
        (Fraction(1024, 675), 8),
        (Fraction(-8192, 135), 6),
        (Fraction(-512, 5), 4),
    ),
)


def majorant_closed_form_eq6(ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    return eval_zeta_combination(EQ6_CLOSED_FORM, ctx)


def majorant_binomial_route_eq6(ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """The same majorant sum, built from the series' own majorant polynomial."""
    p, s = EQ6_SERIES.majorant
    return eval_zeta_combination(binomial_shift_tail(p, s, EQ6_SERIES.first_index - 1), ctx)


def hybrid_bound_eq9(m: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Exact terms ``2..m`` of the second series plus its majorant tail beyond ``m``."""
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"hybrid bound needs an integer m >= 2, got {m!r}")
    head = sum((term_eq9(n) for n in range(2, m + 1)), Fraction(0))
    return Enclosure.exact(head, ctx) + majorant_tail(EQ9_SERIES, m, ctx)


@dataclass(frozen=True)
class SumRuleStatement:
    """A claimed closed-form value for a discrete sum, plus a published upper bound."""

    series: SeriesSpec
    claimed_exact: Fraction
    source: str
    bound_name: str = ""
    bound: Optional[Callable[[PrecisionContext], Enclosure]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "claimed_exact", Fraction(self.claimed_exact))
        if self.claimed_exact <= 0:
            raise DomainError("claimed exact value must be positive")


@dataclass(frozen=True)
class Verdict:
    discrete_sum: Enclosure
    paper_upper_bound: Optional[Enclosure]
    claimed_exact: Fraction
    strict_less: bool
    deficit: Enclosure
    cutoff: int


def evaluate_sum_rule(
    stmt: SumRuleStatement, target_width="1e-8", ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Verdict:
    result = sum_enclosure(stmt.series, target_width, ctx)
    discrete = result.enclosure
    bound = stmt.bound(ctx) if stmt.bound is not None else None
    return Verdict(
        discrete_sum=discrete,
        paper_upper_bound=bound,
        claimed_exact=stmt.claimed_exact,
        strict_less=discrete.certainly_lt(stmt.claimed_exact),
        deficit=stmt.claimed_exact - discrete,
        cutoff=result.cutoff,
    )


def completeness_deficit(
    stmt: SumRuleStatement, ctx: PrecisionContext = DEFAULT_CONTEXT, target_width="1e-8"
) -> Enclosure:
    """Claimed exact value minus the certified discrete sum."""
    return evaluate_sum_rule(stmt, target_width, ctx).deficit


EQ6_RULE = SumRuleStatement(
    series=EQ6_SERIES,
    claimed_exact=Fraction(15, 2),
    source="hydrogen 1s sum rule with claimed value 15/2",
    bound_name="zeta majorant",
    bound=majorant_closed_form_eq6,
)

EQ9_RULE = SumRuleStatement(
    series=EQ9_SERIES,
    claimed_exact=Fraction(1),
    source="Thomas-Reiche-Kuhn sum over bound 1s-np oscillator strengths",
    bound_name="S_7",
    bound=lambda ctx: hybrid_bound_eq9(7, ctx),
)

RULES: dict[str, SumRuleStatement] = {"eq6": EQ6_RULE, "eq9": EQ9_RULE}


@dataclass(frozen=True)
class SpectralModel:
    """Unperturbed levels, squared couplings to the ground state and the
    closed-form right-hand side of the general sum rule.

    ``tail`` encloses the contribution of intermediate states not listed in
    ``coupling`` (zero for a finite model).
    """

    energies: Mapping[int, Fraction]
    coupling: Mapping[int, Enclosure]
    dl_rhs: Enclosure
    ground: int = 0
    tail: Optional[Enclosure] = None

    def __post_init__(self):
        if self.ground not in self.energies:
            raise DomainError("ground state energy missing")
        e0 = self.energies[self.ground]
        excited = sorted(k for k in self.energies if k != self.ground)
        levels = [self.energies[k] for k in excited]
        if levels and levels[0] <= e0:
            raise DomainError("ground state must lie strictly below every other level")
        if any(b < a for a, b in zip(levels, levels[1:])):
            raise DomainError("excited levels must be non-decreasing in their index")
        missing = set(self.coupling) - set(excited)
        if missing:
            raise DomainError(f"couplings given for unknown levels {sorted(missing)}")


def verify_general_sum_rule(
    model: SpectralModel, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> tuple[Enclosure, Enclosure]:
    """Enclosures of the explicit sum over intermediate states and of the
    closed-form side."""
    e0 = model.energies[model.ground]
    lhs = Enclosure.exact(0, ctx)
    for n in sorted(model.coupling):
        gap = e0 - model.energies[n]
        if gap == 0:
            raise DomainError(f"level {n} is degenerate with the ground state")
        lhs = lhs + model.coupling[n] / gap
    if model.tail is not None:
        lhs = lhs + model.tail
    return lhs, model.dl_rhs


def _gaussian_moment(k: int) -> Fraction:
    """<0|x^k|0> for the unit oscillator ground state."""
    if k % 2:
        return Fraction(0)
    return Fraction(math.prod(range(1, k, 2)), 2 ** (k // 2))


def _ladder_power(k: int) -> dict[int, int]:
    # (a + a^dagger)^k |0> in the unnormalised basis u_n = (a^dagger)^n |0>,
    # where a^dagger u_n = u_{n+1} and a u_n = n u_{n-1}
    state = {0: 1}
    for _ in range(k):
        out: dict[int, int] = {}
        for n, c in state.items():
            out[n + 1] = out.get(n + 1, 0) + c
            if n:
                out[n - 1] = out.get(n - 1, 0) + n * c
        state = out
    return state


def _dalgarno_lewis_polynomial(k: int) -> list[Fraction]:
    """Coefficients of f with [H0, f(x)]|0> = (x^k - <x^k>)|0>.

    On the ground state ``[H0, f]`` acts as ``L f = x f' - f''/2``, which maps
    ``x^j`` to ``j x^j - j(j-1)/2 x^(j-2)``.
    """
    target = [Fraction(0)] * (k + 1)
    target[k] = Fraction(1)
    target[0] -= _gaussian_moment(k)
    f = [Fraction(0)] * (k + 3)
    for j in range(k, 0, -1):
        f[j] = (target[j] + Fraction((j + 2) * (j + 1), 2) * f[j + 2]) / j
    return f[: k + 1]


def oscillator_model(power: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SpectralModel:
    """Unit harmonic oscillator perturbed by ``H' = x**power``.

    Every level couples to the ground state through a finite ladder-operator
    expansion, so the discrete spectrum is complete and the two sides of the
    sum rule must agree exactly.
    """
    if power < 1:
        raise DomainError("perturbation power must be >= 1")
    state = _ladder_power(power)
    energies = {n: Fraction(2 * n + 1, 2) for n in range(power + 1)}
    coupling = {}
    for n, c in state.items():
        if n == 0 or c == 0:
            continue
        # |<n|x^k|0>|^2 = 2^-k c_n^2 n!
        coupling[n] = Enclosure.exact(Fraction(c * c * math.factorial(n), 2**power), ctx)
    f = _dalgarno_lewis_polynomial(power)
    h_mean = _gaussian_moment(power)
    f_mean = sum(c * _gaussian_moment(j) for j, c in enumerate(f))
    hf_mean = sum(c * _gaussian_moment(j + power) for j, c in enumerate(f))
    rhs = Enclosure.exact(h_mean * f_mean - hf_mean, ctx)
    return SpectralModel(energies=energies, coupling=coupling, dl_rhs=rhs)


def hydrogen_dipole_model(cutoff: int = EXACT_CUTOFF, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SpectralModel:
    """Hydrogen 1s with ``H' = sqrt(2) p_z`` and only the bound np levels.

    In atomic units ``|<np|p_z|1s>|^2 = f_n (E_n - E_1) / 2`` with ``f_n`` the
    oscillator strengths summed by the second series, so each intermediate
    state contributes ``-f_n``.  ``F = i sqrt(2) z`` solves the commutator
    equation and ``<1s|p_z z|1s> = -i/2`` gives a right-hand side of ``-1``.
    Levels above ``cutoff`` enter through a majorant tail; the continuum is
    absent by construction.
    """
    if cutoff < 2:
        raise DomainError("cutoff must be >= 2")
    energies = {n: Fraction(-1, 2 * n * n) for n in range(1, cutoff + 1)}
    coupling = {
        n: Enclosure.exact(term_eq9(n) * (energies[n] - energies[1]), ctx)
        for n in range(2, cutoff + 1)
    }
    tail = -Enclosure.from_bounds(0, majorant_tail(EQ9_SERIES, cutoff, ctx).hi, ctx)
    return SpectralModel(
        energies=energies,
        coupling=coupling,
        dl_rhs=Enclosure.exact(-1, ctx),
        ground=1,
        tail=tail,
    )
