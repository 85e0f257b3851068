"""Symbolic spaces: infinite words over {0, ..., N-1} with prefix metrics.

Points are eventually periodic words, so equality and common-prefix length are
decidable.  Distances are exact :class:`~holder_lab.arith.Monomial` values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import Monomial, NotRepresentableError, ONE, ZERO, Rational

ScaleFactor = Monomial
INFINITE = math.inf

DEFAULT_MAX_POINTS = 1 << 20
MORAN_BRACKET = (1e-9, 64.0)
MORAN_MAX_ITER = 200
MORAN_TOL = 1e-12


class AlphabetError(ValueError):
    """A symbol lies outside the alphabet of the space."""


class EnumerationLimitError(RuntimeError):
    """An enumeration would exceed its configured budget."""


def scale_factor(value: Monomial | Rational) -> ScaleFactor:
    """Validate a contraction ratio: an exact value strictly inside (0, 1)."""
    m = Monomial.coerce(value)
    if m.is_zero or m.compare_one() >= 0:
        raise ValueError(f"scale factor {m} must lie strictly between 0 and 1")
    return m


def base_power(base: str, exponent: Rational) -> ScaleFactor:
    exponent = Fraction(exponent)
    if exponent <= 0:
        raise ValueError("base-power exponents must be positive")
    return Monomial.base(base, exponent)


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


@dataclass(frozen=True)
class SymbolicPoint:
    """The word ``preperiod + period + period + ...`` in canonical form."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        pre, per = tuple(self.preperiod), tuple(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        if any((not isinstance(s, int)) or s < 0 for s in pre + per):
            raise AlphabetError("symbols must be nonnegative integers")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre, per = pre[:-1], (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def of(cls, preperiod: Iterable[int], period: Iterable[int]) -> SymbolicPoint:
        return cls(tuple(preperiod), tuple(period))

    def symbol(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def expand(self, length: int) -> tuple[int, ...]:
        return tuple(self.symbol(i) for i in range(length))

    def max_symbol(self) -> int:
        return max(self.preperiod + self.period)

    def __str__(self) -> str:
        body = "".join(map(_sym, self.preperiod))
        return f"{body}({''.join(map(_sym, self.period))})^inf"


def _sym(s: int) -> str:
    return str(s) if s < 10 else f"[{s}]"


def _check_alphabet(x: SymbolicPoint, n: int) -> None:
    if x.max_symbol() >= n:
        raise AlphabetError(f"point {x} uses a symbol outside alphabet of size {n}")


def common_prefix_length(x: SymbolicPoint, y: SymbolicPoint, n: int) -> int | float:
    """Length of the maximal common prefix; ``INFINITE`` when ``x == y``."""
    _check_alphabet(x, n)
    _check_alphabet(y, n)
    # two eventually periodic words agreeing this far agree forever
    bound = max(len(x.preperiod), len(y.preperiod)) + math.lcm(len(x.period), len(y.period))
    for i in range(bound):
        if x.symbol(i) != y.symbol(i):
            return i
    return INFINITE


@dataclass(frozen=True)
class SymbolicSpace:
    """``Omega_N`` with the metric ``prod(weights[w_i])`` over the common prefix.

    ``weights`` always has length ``N``; a uniform space repeats one weight.
    """

    n: int
    weights: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"alphabet size must be an integer >= 2, got {self.n}")
        weights = tuple(scale_factor(w) for w in self.weights)
        if len(weights) != self.n:
            raise ValueError(f"need {self.n} weights, got {len(weights)}")
        bases = {b for w in weights for b in w.bases}
        if len(bases) > 1 or (bases and any(not w.bases for w in weights)):
            raise ValueError("vector weights must be rationals or powers of one shared base")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, n: int, r: Monomial | Rational) -> SymbolicSpace:
        return cls(n, (Monomial.coerce(r),) * n)

    @classmethod
    def vector(cls, weights: Sequence[Monomial | Rational]) -> SymbolicSpace:
        return cls(len(weights), tuple(Monomial.coerce(w) for w in weights))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) == 1

    @property
    def ratio(self) -> Monomial:
        """The common weight of a uniform space."""
        if not self.is_uniform:
            raise ValueError("space has non-uniform weights")
        return self.weights[0]

    def word_weight(self, word: Sequence[int]) -> Monomial:
        if self.is_uniform:
            return self.weights[0] ** len(word)
        out = ONE
        for s in word:
            out = out * self.weights[s]
        return out

    def power(self, sigma) -> SymbolicSpace:
        """Same alphabet, every weight raised to the exponent ``sigma``."""
        return SymbolicSpace(self.n, tuple(sigma.power(w) for w in self.weights))

    def __str__(self) -> str:
        if self.is_uniform:
            return f"(Omega_{self.n}, {self.weights[0]})"
        return f"(Omega_{self.n}, [{', '.join(map(str, self.weights))}])"


def distance(space: SymbolicSpace, x: SymbolicPoint, y: SymbolicPoint) -> Monomial:
    """Exact distance: weight of the common prefix, zero for equal points."""
    m = common_prefix_length(x, y, space.n)
    if m == INFINITE:
        return ZERO
    return space.word_weight(x.expand(m))


@dataclass(frozen=True)
class Dimension:
    value: float
    exact: str


def dimension_uniform(space: SymbolicSpace) -> Dimension:
    """``log N / -log r`` for a uniform space."""
    r = space.ratio
    if not r.is_rational:
        raise NotRepresentableError("uniform dimension needs a rational weight")
    return Dimension(math.log(space.n) / -r.log(), f"log {space.n} / -log {r}")


def dimension_moran(ratios: Sequence[Monomial | Rational]) -> float:
    """Root ``s`` of ``sum(r_i ** s) == 1`` by bisection."""
    if len(ratios) < 2:
        raise ValueError("Moran equation needs at least two ratios")
    logs = [scale_factor(r).log() for r in ratios]

    def excess(s: float) -> float:
        return math.fsum(math.exp(s * lr) for lr in logs) - 1.0

    lo, hi = MORAN_BRACKET
    if excess(hi) > 0:
        raise ValueError("Moran root lies outside the bisection bracket")
    for _ in range(MORAN_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < MORAN_TOL * 1e-2:
            break
    return 0.5 * (lo + hi)


def enumerate_cylinder_points(
    space: SymbolicSpace | int, depth: int, max_points: int = DEFAULT_MAX_POINTS
) -> list[SymbolicPoint]:
    """One point ``w 0 0 0 ...`` per word ``w`` of length ``depth``, lexicographic."""
    n = space if isinstance(space, int) else space.n
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if n**depth > max_points:
        raise EnumerationLimitError(f"{n}^{depth} points exceed the budget of {max_points}")
    return [SymbolicPoint(w, (0,)) for w in itertools.product(range(n), repeat=depth)]

