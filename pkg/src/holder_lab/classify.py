"""Decision procedures for Lipschitz and strict Hölder equivalence.

Every verdict is reached through exact multiplicative dependence of integers
and contraction ratios; Hausdorff dimensions only ever show up as reported
numbers.  Rule tags name the criterion that produced a verdict:

``cube-lipschitz``          log n / log n' == log N / log N' is rational
``cube-holder``             log N / log N' is rational
``symbolic-lipschitz``      log r / log r' == log N / log N' is rational
``symbolic-holder``         log N / log N' is rational
``same-ratios``             equal ratio multisets are always Lipschitz equivalent
``two-branch-lipschitz``    two ratios each, Lipschitz classification
``two-branch-holder``       two ratios each, Hölder classification
``holder-reduction``        Hölder question rewritten as a Lipschitz question
                            after raising one ratio vector to s = dim E / dim F
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .arith import (
    Exponent,
    IncomparableError,
    Monomial,
    NotRepresentableError,
    Rational,
    mult_dependence,
)
from .cube import FractalCube, to_symbolic
from .symbolic import SymbolicSpace, dimension_moran, scale_factor
from .witness import MapWitness, build_exponent_witness, build_uniform_holder_witness

FRESH_BASE = "rho~"  # opaque base standing for lambda**s in reduced instances


class VerdictKind(enum.Enum):
    LIPSCHITZ = "LipschitzEquivalent"
    HOLDER = "StrictlyHolderEquivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    theorem: str
    reason: str
    exponent: Exponent | None = None
    witness: MapWitness | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if (self.exponent is not None) != (self.kind is VerdictKind.HOLDER):
            raise ValueError("an exponent accompanies exactly the Hölder verdicts")

    @property
    def equivalent(self) -> bool:
        return self.kind in (VerdictKind.LIPSCHITZ, VerdictKind.HOLDER)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "exponent": None if self.exponent is None else self.exponent.to_json(),
            "theorem": self.theorem,
            "reason": self.reason,
            "witness_available": self.witness is not None,
            "witness": None if self.witness is None else self.witness.summary(),
            "details": self.details,
        }


def _lipschitz(theorem, reason, witness=None, **details) -> Verdict:
    return Verdict(VerdictKind.LIPSCHITZ, theorem, reason, None, witness, details)


def _holder(theorem, reason, exponent, witness=None, **details) -> Verdict:
    return Verdict(VerdictKind.HOLDER, theorem, reason, exponent, witness, details)


def _no(theorem, reason, **details) -> Verdict:
    return Verdict(VerdictKind.NOT_EQUIVALENT, theorem, reason, None, None, details)


def _unknown(theorem, reason, **details) -> Verdict:
    return Verdict(VerdictKind.UNKNOWN, theorem, reason, None, None, details)


# -- fractal cubes and uniform symbolic spaces -----------------------------------


def _cube_model(c: FractalCube, assume_td: bool) -> SymbolicSpace:
    return to_symbolic(c, assume_td=assume_td)


def classify_symbolic(E: SymbolicSpace, F: SymbolicSpace, mode: str = "holder") -> Verdict:
    """Uniform symbolic spaces ``(Omega_N, r)`` against ``(Omega_N', r')``."""
    if not (E.is_uniform and F.is_uniform):
        raise ValueError("symbolic classification needs uniform weights")
    dep_n = mult_dependence(E.n, F.n)
    if mode == "lipschitz":
        theorem = "symbolic-lipschitz"
        dep_r = mult_dependence(E.ratio, F.ratio)
        if dep_n.is_rational and dep_r.is_rational and dep_n.value == dep_r.value:
            w = build_uniform_holder_witness(E.n, E.ratio, F.n, F.ratio)
            return _lipschitz(theorem, f"log r/log r' = log N/log N' = {dep_n.value}", w)
        return _no(theorem, f"log N/log N' is {dep_n}, log r/log r' is {dep_r}")
    if mode != "holder":
        raise ValueError(f"unknown mode {mode!r}")
    theorem = "symbolic-holder"
    if not dep_n.is_rational:
        return _no(theorem, f"log {E.n}/log {F.n} is irrational")
    w = build_uniform_holder_witness(E.n, E.ratio, F.n, F.ratio)
    return _holder(theorem, f"log N/log N' = {dep_n.value}", w.s, w)


def classify_cubes_lipschitz(E: FractalCube, F: FractalCube, assume_td: bool = False) -> Verdict:
    SE, SF = _cube_model(E, assume_td), _cube_model(F, assume_td)
    dep_n, dep_N = mult_dependence(E.n, F.n), mult_dependence(E.N, F.N)
    if dep_n.is_rational and dep_N.is_rational and dep_n.value == dep_N.value:
        w = build_uniform_holder_witness(SE.n, SE.ratio, SF.n, SF.ratio)
        return _lipschitz("cube-lipschitz", f"log n/log n' = log N/log N' = {dep_n.value}", w)
    return _no("cube-lipschitz", f"log n/log n' is {dep_n}, log N/log N' is {dep_N}")


def classify_cubes_holder(E: FractalCube, F: FractalCube, assume_td: bool = False) -> Verdict:
    SE, SF = _cube_model(E, assume_td), _cube_model(F, assume_td)
    v = classify_symbolic(SE, SF, "holder")
    return Verdict(v.kind, "cube-holder", v.reason, v.exponent, v.witness, v.details)


# -- self-similar sets with two branches -----------------------------------------


@dataclass(frozen=True)
class TwoBranchInstance:
    """Contraction ratios ``(r1, r2)`` normalized so that ``r1 >= r2``."""

    r1: Monomial
    r2: Monomial

    @classmethod
    def of(cls, a: Monomial | Rational, b: Monomial | Rational) -> TwoBranchInstance:
        a, b = scale_factor(a), scale_factor(b)
        return cls(a, b) if a >= b else cls(b, a)

    @property
    def ratios(self) -> tuple[Monomial, Monomial]:
        return (self.r1, self.r2)

    @property
    def guard(self):
        """``log r1 / log r2`` as an exact log-ratio outcome."""
        return mult_dependence(self.r1, self.r2)

    def __str__(self) -> str:
        return f"({self.r1}, {self.r2})"


def _as_two_branch(x) -> TwoBranchInstance:
    return x if isinstance(x, TwoBranchInstance) else TwoBranchInstance.of(*x)


def classify_two_branch_lipschitz(E, F) -> Verdict:
    E, F = _as_two_branch(E), _as_two_branch(F)
    theorem = "two-branch-lipschitz"
    if E == F:
        return _lipschitz("same-ratios", "identical contraction ratios",
                          build_exponent_witness(E.ratios, 1))
    ge, gf = E.guard, F.guard
    if ge.is_rational != gf.is_rational:
        return _no(theorem, f"log r1/log r2 is {ge} but log t1/log t2 is {gf}")
    if not ge.is_rational:
        return _no(theorem, "incommensurable ratios must coincide exactly", case="incommensurable")
    (r1, r2), (t1, t2) = E.ratios, F.ratios
    if (r1, r2, t2) == (t1**2, t1**3, t1**5):
        return _lipschitz(theorem, f"r = (l^2, l^3), t = (l, l^5) with l = {t1}", case="commensurable")
    if (t1, t2, r2) == (r1**2, r1**3, r1**5):
        return _lipschitz(theorem, f"t = (l^2, l^3), r = (l, l^5) with l = {r1}", case="commensurable")
    return _no(theorem, "commensurable ratios outside the (2,3)/(1,5) exponent pattern",
               case="commensurable")


def _opaque_only(*values: Monomial) -> bool:
    return all(all(isinstance(a, str) for a, _ in v.factors) for v in values)


_EXCEPTIONAL = {Fraction(2, 3), Fraction(1, 5)}


def _exceptional_exponent(E: TwoBranchInstance, F: TwoBranchInstance) -> Exponent:
    """``s`` making ``(r1**s, r2**s)`` Lipschitz equivalent to ``F`` in the 2/3-1/5 case.

    With ``E = (lam**a, ...)`` and ``F = (mu**b, ...)`` where ``a, b`` are the
    numerators of the two log-ratios, the reduced ratios pair up with ``F``
    exactly when ``lam**s == mu``.
    """
    lam = E.r1 ** Fraction(1, E.guard.value.numerator)
    mu = F.r1 ** Fraction(1, F.guard.value.numerator)
    return Exponent.log_ratio(mu, lam)


def _numeric_s(E: Sequence[Monomial], F: Sequence[Monomial]) -> float | None:
    try:
        return dimension_moran(E) / dimension_moran(F)
    except (NotRepresentableError, ValueError):
        return None


def classify_two_branch_holder(E, F) -> Verdict:
    E, F = _as_two_branch(E), _as_two_branch(F)
    theorem = "two-branch-holder"
    ge, gf = E.guard, F.guard
    s_num = _numeric_s(E.ratios, F.ratios)
    extra = {} if s_num is None else {"dimension_ratio": s_num}
    if not ge.is_rational:
        if gf.is_rational:
            return _no(theorem, f"log r1/log r2 is irrational but log t1/log t2 = {gf.value}",
                       case="incommensurable", **extra)
        s1, s2 = mult_dependence(F.r1, E.r1), mult_dependence(F.r2, E.r2)
        if s1.is_rational and s2.is_rational:
            if s1.value == s2.value:
                s = Exponent.of(s1.value)
                return _holder(theorem, f"t_i = r_i^{s1.value}", s,
                               build_exponent_witness(E.ratios, s), case="incommensurable", **extra)
            return _no(theorem, f"log t1/log r1 = {s1.value} differs from log t2/log r2 = {s2.value}",
                       case="incommensurable", **extra)
        if s1.is_rational or s2.is_rational:
            return _no(theorem, "one of log t_i/log r_i is rational and the other is not",
                       case="incommensurable", **extra)
        if _opaque_only(*E.ratios, *F.ratios):
            return _no(theorem, "opaque bases: log-ratio equality fails formally",
                       case="incommensurable", **extra)
        return _unknown(theorem, "both log t_i/log r_i irrational; their equality is not decidable exactly",
                        case="incommensurable", **extra)
    if not gf.is_rational:
        return _no(theorem, f"log r1/log r2 = {ge.value} but log t1/log t2 is irrational",
                   case="commensurable", **extra)
    if ge.value == gf.value:
        # r = (lam**a, lam**b), t = (mu**a, mu**b): an exponent map carries one to the other
        s = Exponent.log_ratio(F.r1, E.r1)
        return _holder(theorem, f"both log-ratios equal {ge.value}; t_i = r_i^s", s,
                       build_exponent_witness(E.ratios, s), case="commensurable", **extra)
    if {ge.value, gf.value} == _EXCEPTIONAL:
        s = _exceptional_exponent(E, F)
        return _holder(theorem, f"log-ratio pattern {{{ge.value}, {gf.value}}} = {{2/3, 1/5}}", s,
                       case="exceptional-pattern", **extra)
    return _no(theorem, f"log-ratios {ge.value} and {gf.value} are neither equal nor {{2/3, 1/5}}",
               case="commensurable", **extra)


# -- reduction of the Hölder question --------------------------------------------


@dataclass(frozen=True)
class ReducedInstance:
    s: Exponent | None
    s_numeric: float | None
    reduced: tuple[Monomial, ...] | None  # (r_1**s, ..., r_m**s), exact form
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "s": None if self.s is None else self.s.to_json(),
            "s_numeric": self.s_numeric,
            "reduced_ratios": None if self.reduced is None else [str(r) for r in self.reduced],
            "verdict": self.verdict.to_json(),
        }


def _sorted_desc(values: Sequence[Monomial | Rational]) -> tuple[Monomial, ...]:
    vals = [scale_factor(v) for v in values]
    try:
        return tuple(sorted(vals, reverse=True))
    except IncomparableError:
        return tuple(vals)


def _exact_power(E: Sequence[Monomial], F: Sequence[Monomial]) -> Exponent | None:
    """``s`` with ``E[i]**s == F[i]`` for all i (sorted inputs), if one exists."""
    if len(E) != len(F):
        return None
    s = Exponent.log_ratio(F[0], E[0])
    try:
        return s if all(s.power(e) == f for e, f in zip(E, F)) else None
    except NotRepresentableError:
        return None


def reduce_holder_to_lipschitz(E: Sequence[Monomial | Rational], F: Sequence[Monomial | Rational]) -> ReducedInstance:
    """Raise ``E`` to ``s = dim E / dim F`` and ask the Lipschitz question on the result."""
    E, F = _sorted_desc(E), _sorted_desc(F)
    theorem = "holder-reduction"
    s_num = _numeric_s(E, F)
    s = _exact_power(E, F)
    if s is not None:
        return ReducedInstance(s, s_num, F, _lipschitz("same-ratios", "reduced ratios equal the target ratios"))
    if len(E) == 2 and len(F) == 2:
        e2, f2 = TwoBranchInstance(*E), TwoBranchInstance(*F)
        ge, gf = e2.guard, f2.guard
        if ge.is_rational and gf.is_rational and {ge.value, gf.value} == _EXCEPTIONAL:
            s = _exceptional_exponent(e2, f2)
            reduced = tuple(s.power(r) for r in E)
            return ReducedInstance(s, s_num, reduced, classify_two_branch_lipschitz(reduced, F))
        if ge.is_rational:
            # s is not exact, but E' = (rho**a, rho**b) with rho = lam**s an opaque base
            a, b = ge.value.numerator, ge.value.denominator
            reduced = (Monomial.base(FRESH_BASE, a), Monomial.base(FRESH_BASE, b))
            return ReducedInstance(None, s_num, reduced, classify_two_branch_lipschitz(reduced, F))
        # E**s keeps the irrational log-ratio of E, so the Lipschitz question is E**s == F
        lip = "two-branch-lipschitz"
        if gf.is_rational:
            return ReducedInstance(None, s_num, None, _no(lip, "reduced log-ratio is irrational, target's is not"))
        s1, s2 = mult_dependence(F[0], E[0]), mult_dependence(F[1], E[1])
        if s1.is_rational or s2.is_rational:
            return ReducedInstance(None, s_num, None, _no(lip, "no single exponent carries both ratios to F"))
        if _opaque_only(*E, *F):
            return ReducedInstance(None, s_num, None, _no(lip, "opaque bases: E**s = F fails formally"))
        return ReducedInstance(None, s_num, None, _unknown(
            theorem, "E**s = F cannot be decided: both log t_i/log r_i are irrational"))
    return ReducedInstance(None, s_num, None, _unknown(
        theorem, f"no classification rule covers {len(E)} against {len(F)} branches"))


# -- dispatch over instance kinds -------------------------------------------------


@dataclass(frozen=True)
class SelfSimilar:
    """A strong-separation self-similar set, known only through its ratios."""

    ratios: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        if len(self.ratios) < 2:
            raise ValueError("a self-similar set needs at least two maps")
        object.__setattr__(self, "ratios", tuple(scale_factor(r) for r in self.ratios))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.ratios)) == 1

    def symbolic(self) -> SymbolicSpace:
        return SymbolicSpace.vector(self.ratios)


Instance = Union[FractalCube, SelfSimilar]


def _same_multiset(E: SelfSimilar, F: SelfSimilar) -> bool:
    return Counter(E.ratios) == Counter(F.ratios)


def classify_self_similar(E: SelfSimilar, F: SelfSimilar, mode: str = "holder") -> Verdict:
    if len(E.ratios) == 2 and len(F.ratios) == 2:
        if mode == "lipschitz":
            return classify_two_branch_lipschitz(E.ratios, F.ratios)
        return classify_two_branch_holder(E.ratios, F.ratios)
    if E.is_uniform and F.is_uniform:
        return classify_symbolic(SymbolicSpace.uniform(len(E.ratios), E.ratios[0]),
                                 SymbolicSpace.uniform(len(F.ratios), F.ratios[0]), mode)
    if _same_multiset(E, F):
        if mode == "lipschitz":
            return _lipschitz("same-ratios", "identical contraction ratios")
        return _holder("same-ratios", "identical contraction ratios", Exponent.of(1))
    if mode == "lipschitz":
        return _unknown("same-ratios", f"no Lipschitz rule for {len(E.ratios)} against {len(F.ratios)} branches")
    red = reduce_holder_to_lipschitz(E.ratios, F.ratios)
    if red.s is not None and red.verdict.equivalent:
        w = build_exponent_witness(_sorted_desc(E.ratios), red.s)
        return _holder("holder-reduction", "ratios are exact powers of each other", red.s, w)
    v = red.verdict
    return Verdict(v.kind, "holder-reduction", v.reason, None, None, v.details)


def classify(E: Instance, F: Instance, mode: str = "holder", assume_td: bool = False) -> Verdict:
    """Dispatch on instance kinds: cube/cube, self-similar/self-similar, or a
    cube against a self-similar set with equal ratios (both are uniform symbolic
    spaces)."""
    if mode not in ("holder", "lipschitz"):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(E, FractalCube) and isinstance(F, FractalCube):
        if mode == "lipschitz":
            return classify_cubes_lipschitz(E, F, assume_td)
        return classify_cubes_holder(E, F, assume_td)
    if isinstance(E, SelfSimilar) and isinstance(F, SelfSimilar):
        return classify_self_similar(E, F, mode)
    models = []
    for x in (E, F):
        if isinstance(x, FractalCube):
            models.append(_cube_model(x, assume_td))
        elif x.is_uniform:
            models.append(SymbolicSpace.uniform(len(x.ratios), x.ratios[0]))
        else:
            raise ValueError("a fractal cube can only be compared with a self-similar set of equal ratios")
    return classify_symbolic(models[0], models[1], mode)

