"""Exact arithmetic kernel.

Everything that decides "is this log-ratio rational?" lives here.  Rationals are
:class:`fractions.Fraction`; positive values that are rational powers of
rationals (and of opaque symbolic bases) are :class:`Monomial`; Hölder exponents
that may be irrational log-ratios are :class:`Exponent`.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator, Mapping, Union

Rational = Union[int, Fraction]
Atom = Union[int, str]  # a prime, or the name of an opaque base in (0, 1)

_SMALL_PRIME_LIMIT = 10_000


def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


SMALL_PRIMES = _sieve(_SMALL_PRIME_LIMIT)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@dataclass(frozen=True)
class PrimeExponentVector:
    """Sparse signed exponent vector ``{prime: exponent}`` with sorted keys."""

    entries: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> PrimeExponentVector:
        return cls(tuple(sorted((p, e) for p, e in mapping.items() if e != 0)))

    def __getitem__(self, p: int) -> int:
        return dict(self.entries).get(p, 0)

    def __iter__(self) -> Iterator[int]:
        return (p for p, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def value(self) -> Fraction:
        """Rebuild the rational this vector came from."""
        num = den = 1
        for p, e in self.entries:
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(num, den)

    def __sub__(self, other: PrimeExponentVector) -> PrimeExponentVector:
        out = self.as_dict()
        for p, e in other.entries:
            out[p] = out.get(p, 0) - e
        return PrimeExponentVector.from_mapping(out)


@lru_cache(maxsize=4096)
def factorize(n: int) -> PrimeExponentVector:
    """Prime factorization of a positive integer.

    Trial division by the primes below 10^4, then Brent's variant of Pollard rho
    on whatever cofactor remains.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"factorize expects an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"cannot factorize {n}: input must be >= 1")
    out: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        # fixed seed: factorizations are deterministic run to run
        _split(n, out, random.Random(n))
    return PrimeExponentVector.from_mapping(out)


def exponent_vector(q: Rational) -> PrimeExponentVector:
    """Signed prime exponents of a positive rational."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"exponent vector needs a positive rational, got {q}")
    return factorize(q.numerator) - factorize(q.denominator)


class IncomparableError(ValueError):
    """Raised when the order of two symbolic values cannot be decided exactly."""


class NotRepresentableError(ValueError):
    """Raised when a result falls outside the exact value classes used here."""


def _atom_key(atom: Atom) -> tuple[int, int | str]:
    return (1, atom) if isinstance(atom, str) else (0, atom)


def _lcm_den(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


@total_ordering
class Monomial:
    """An exact nonnegative value ``prod(atom ** e)`` with rational exponents.

    Atoms are primes or names of opaque bases, each opaque base standing for an
    unknown number in (0, 1).  The class is closed under products, quotients and
    rational powers, which covers every distance and every certificate constant
    that the witness machinery produces.  A single zero element exists so that
    distances between equal points can be represented.
    """

    __slots__ = ("factors", "is_zero", "_hash")

    def __init__(self, factors: Mapping[Atom, Fraction] | None = None, *, zero: bool = False):
        items = () if zero or not factors else factors.items()
        self.factors: tuple[tuple[Atom, Fraction], ...] = tuple(
            sorted(((a, Fraction(e)) for a, e in items if e != 0), key=lambda t: _atom_key(t[0]))
        )
        self.is_zero = zero
        # structural hash: do not mix Monomial and Fraction keys in one dict
        self._hash = hash((self.factors, zero))

    @classmethod
    def from_rational(cls, q: Rational) -> Monomial:
        q = Fraction(q)
        if q == 0:
            return ZERO
        vec = exponent_vector(q)
        return cls({p: Fraction(e) for p, e in vec.entries})

    @classmethod
    def base(cls, name: str, exponent: Rational = 1) -> Monomial:
        if not name or not isinstance(name, str):
            raise ValueError("opaque base names must be nonempty strings")
        return cls({name: Fraction(exponent)})

    @classmethod
    def coerce(cls, value: Monomial | Rational) -> Monomial:
        if isinstance(value, Monomial):
            return value
        return cls.from_rational(value)

    # -- structure -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Monomial.from_rational(other) if other >= 0 else None
        if not isinstance(other, Monomial):
            return NotImplemented if other is not None else False
        return self.is_zero == other.is_zero and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def as_dict(self) -> dict[Atom, Fraction]:
        return dict(self.factors)

    @property
    def bases(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.factors if isinstance(a, str))

    @property
    def is_one(self) -> bool:
        return not self.is_zero and not self.factors

    @property
    def is_rational(self) -> bool:
        return self.is_zero or all(
            isinstance(a, int) and e.denominator == 1 for a, e in self.factors
        )

    def to_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_rational:
            raise NotRepresentableError(f"{self} is not a rational number")
        out = Fraction(1)
        for p, e in self.factors:
            out *= Fraction(p) ** int(e)
        return out

    def substitute(self, values: Mapping[str, Monomial]) -> Monomial:
        """Replace declared bases by their exact values."""
        if self.is_zero:
            return self
        out = Monomial()
        for a, e in self.factors:
            atom = values[a] if isinstance(a, str) and a in values else Monomial({a: Fraction(1)})
            out = out * atom**e
        return out

    # -- arithmetic ------------------------------------------------------------

    def __mul__(self, other: Monomial | Rational) -> Monomial:
        other = Monomial.coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        out = dict(self.factors)
        for a, e in other.factors:
            out[a] = out.get(a, Fraction(0)) + e
        return Monomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Monomial | Rational) -> Monomial:
        return self * Monomial.coerce(other).inverse()

    def __rtruediv__(self, other: Rational) -> Monomial:
        return Monomial.coerce(other) * self.inverse()

    def inverse(self) -> Monomial:
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        return Monomial({a: -e for a, e in self.factors})

    def __pow__(self, exponent: Rational) -> Monomial:
        exponent = Fraction(exponent)
        if self.is_zero:
            if exponent <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return ZERO
        return Monomial({a: e * exponent for a, e in self.factors})

    # -- order -----------------------------------------------------------------

    def compare_one(self) -> int:
        """Sign of ``self - 1`` decided exactly."""
        if self.is_zero:
            return -1
        primes = [(a, e) for a, e in self.factors if isinstance(a, int)]
        opaque = [e for a, e in self.factors if isinstance(a, str)]
        # raise the prime part to an integer power: sign of its log is exact
        scale = _lcm_den(e for _, e in primes)
        num = den = 1
        for p, e in primes:
            k = int(e * scale)
            if k > 0:
                num *= p**k
            else:
                den *= p ** (-k)
        prime_sign = (num > den) - (num < den)
        if not opaque:
            return prime_sign
        # opaque bases lie in (0, 1): a positive exponent pulls the value below 1
        if all(e > 0 for e in opaque) and prime_sign <= 0:
            return -1
        if all(e < 0 for e in opaque) and prime_sign >= 0:
            return 1
        raise IncomparableError(f"cannot compare {self} with 1 exactly")

    def compare(self, other: Monomial | Rational) -> int:
        other = Monomial.coerce(other)
        if self.is_zero or other.is_zero:
            return (not self.is_zero) - (not other.is_zero)
        return (self / other).compare_one()

    def __lt__(self, other: Monomial | Rational) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: Monomial | Rational) -> bool:
        return self.compare(other) <= 0

    # -- numerics & display ----------------------------------------------------

    def log(self) -> float:
        if self.is_zero:
            return -math.inf
        if self.bases:
            raise NotRepresentableError(f"opaque bases {self.bases} have no numeric value")
        return math.fsum(float(e) * math.log(p) for p, e in self.factors)

    def __float__(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log())

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        primes = {a: e for a, e in self.factors if isinstance(a, int)}
        parts = []
        if primes or not self.factors:
            root = _lcm_den(primes.values())
            value = Monomial({p: e * root for p, e in primes.items()}).to_fraction()
            parts.append(str(value) if root == 1 else f"({value})^(1/{root})")
        for a, e in self.factors:
            if isinstance(a, str):
                parts.append(a if e == 1 else f"{a}^({e})")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Monomial({self})"


ZERO = Monomial(zero=True)
ONE = Monomial()


class LogRatioKind(enum.Enum):
    RATIONAL = "rational"
    INCOMMENSURABLE = "incommensurable"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class LogRatio:
    """Outcome of comparing ``log a`` with ``log b``.

    ``UNDETERMINED`` is part of the vocabulary for callers but is never produced
    by :func:`mult_dependence` with the atoms supported here.
    """

    kind: LogRatioKind
    value: Fraction | None = None

    @property
    def is_rational(self) -> bool:
        return self.kind is LogRatioKind.RATIONAL

    def __str__(self) -> str:
        return str(self.value) if self.is_rational else self.kind.value


INCOMMENSURABLE = LogRatio(LogRatioKind.INCOMMENSURABLE)
UNDETERMINED = LogRatio(LogRatioKind.UNDETERMINED)


def _parallel_ratio(a: Monomial, b: Monomial) -> Fraction | None:
    """``c`` with log-vector(a) == c * log-vector(b), or None."""
    va, vb = a.as_dict(), b.as_dict()
    if not vb or va.keys() != vb.keys():
        return Fraction(0) if not va and vb else None
    atoms = iter(vb)
    first = next(atoms)
    c = va[first] / vb[first]
    if all(va[x] == c * vb[x] for x in atoms):
        return c
    return None


def mult_dependence(a: Monomial | Rational, b: Monomial | Rational) -> LogRatio:
    """Decide whether ``log a / log b`` is rational.

    Returns ``Rational(p/q)`` exactly when ``a**q == b**p`` (checked), otherwise
    ``Incommensurable``.  Opaque bases count as multiplicatively independent of
    every prime and of each other.
    """
    a, b = Monomial.coerce(a), Monomial.coerce(b)
    for x in (a, b):
        if x.is_zero:
            raise ValueError("log-ratio needs positive values")
        if x.is_one:
            raise ValueError("log-ratio is undefined when either value equals 1")
    c = _parallel_ratio(a, b)
    if c is None:
        return INCOMMENSURABLE
    if a ** c.denominator != b ** c.numerator:  # pragma: no cover - parallelism implies this
        raise AssertionError("parallel exponent vectors failed the power check")
    return LogRatio(LogRatioKind.RATIONAL, c)


def rational_power(q: Rational, e: Rational) -> Fraction | None:
    """Exact value of ``q ** e`` when it is rational, else ``None``."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"rational_power needs q > 0, got {q}")
    m = Monomial.from_rational(q) ** Fraction(e)
    return m.to_fraction() if m.is_rational else None


class Exponent:
    """A positive Hölder exponent: a rational, or ``log(num) / log(den)``.

    Irrational exponents appear as soon as two contraction ratios are
    multiplicatively independent, e.g. ``log(1/2) / log(1/27)``.  Raising a
    value ``x`` to such an exponent stays exact whenever ``x`` is a rational
    power of ``den``.
    """

    __slots__ = ("rational", "num", "den")

    def __init__(self, rational: Fraction | None = None, num: Monomial | None = None, den: Monomial | None = None):
        self.rational = rational
        self.num = num
        self.den = den

    @classmethod
    def of(cls, q: Rational) -> Exponent:
        return cls(rational=Fraction(q))

    @classmethod
    def log_ratio(cls, num: Monomial | Rational, den: Monomial | Rational) -> Exponent:
        num, den = Monomial.coerce(num), Monomial.coerce(den)
        if num.is_zero or den.is_zero or den.is_one:
            raise ValueError("log-ratio exponent needs positive values and den != 1")
        c = _parallel_ratio(num, den)
        if c is not None:
            return cls(rational=c)
        # scale so den's leading exponent is 1; keeps equal ratios structurally equal
        lead = den.factors[0][1]
        return cls(num=num ** (1 / lead), den=den ** (1 / lead))

    @property
    def is_rational(self) -> bool:
        return self.rational is not None

    @property
    def is_positive(self) -> bool:
        if self.rational is not None:
            return self.rational > 0
        return self.num.compare_one() * self.den.compare_one() > 0

    def power(self, x: Monomial | Rational) -> Monomial:
        """``x ** self`` as an exact monomial."""
        x = Monomial.coerce(x)
        if self.rational is not None:
            return x**self.rational
        if x.is_zero:
            return x
        c = _parallel_ratio(x, self.den)
        if c is None:
            raise NotRepresentableError(f"{x} raised to {self} has no exact form here")
        return self.num**c

    def __mul__(self, other: Exponent) -> Exponent:
        if self.rational is not None and other.rational is not None:
            return Exponent.of(self.rational * other.rational)
        if self.rational is not None:
            return Exponent.log_ratio(other.num**self.rational, other.den)
        if other.rational is not None:
            return Exponent.log_ratio(self.num**other.rational, self.den)
        k = _parallel_ratio(self.num, other.den)
        if k is not None:
            return Exponent.log_ratio(other.num**k, self.den)
        k = _parallel_ratio(other.num, self.den)
        if k is not None:
            return Exponent.log_ratio(self.num**k, other.den)
        raise NotRepresentableError(f"product {self} * {other} is not a single log-ratio")

    def reciprocal(self) -> Exponent:
        if self.rational is not None:
            return Exponent.of(1 / self.rational)
        return Exponent.log_ratio(self.den, self.num)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Exponent):
            return NotImplemented
        return (self.rational, self.num, self.den) == (other.rational, other.num, other.den)

    def __hash__(self) -> int:
        return hash((self.rational, self.num, self.den))

    def __float__(self) -> float:
        if self.rational is not None:
            return float(self.rational)
        return self.num.log() / self.den.log()

    def __str__(self) -> str:
        if self.rational is not None:
            return str(self.rational)
        return f"log({self.num})/log({self.den})"

    def __repr__(self) -> str:
        return f"Exponent({self})"

    def to_json(self) -> dict:
        if self.rational is not None:
            return {"num": self.rational.numerator, "den": self.rational.denominator}
        out: dict = {"symbolic": str(self)}
        try:
            out["approx"] = float(self)
        except NotRepresentableError:
            pass
        return out
