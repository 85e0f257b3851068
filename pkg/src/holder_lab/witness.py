"""Explicit bi-Hölder maps between symbolic spaces, with checkable certificates.

A witness is a chain of atoms.  Each atom knows its source and target space and
claims a certificate ``(s, C)``:

    C**-1 * d(x, y)**s <= d'(f(x), f(y)) <= C * d(x, y)**s

Composing ``f`` with ``(s1, C1)`` and then ``g`` with ``(s2, C2)`` gives
``(s1 * s2, C2 * C1**s2)``.  :func:`verify_witness` checks the claim on every
pair of a cylinder enumeration with exact arithmetic only.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels
from .arith import ONE, Exponent, Monomial, Rational, mult_dependence
from .symbolic import (
    AlphabetError,
    EnumerationLimitError,
    SymbolicPoint,
    SymbolicSpace,
    enumerate_cylinder_points,
)

DEFAULT_MAX_PAIRS = 10**7
MAX_TARGET_WIDTH = 4096


def max_pairs_budget() -> int:
    return int(os.environ.get("HOLDER_LAB_MAX_PAIRS", DEFAULT_MAX_PAIRS))


class WitnessError(ValueError):
    """A witness cannot be built or composed as requested."""


@dataclass(frozen=True)
class Certificate:
    s: Exponent
    C: Monomial

    def then(self, nxt: Certificate) -> Certificate:
        return Certificate(self.s * nxt.s, nxt.C * nxt.s.power(self.C))

    def to_json(self) -> dict:
        return {"s": self.s.to_json(), "C": str(self.C)}


IDENTITY_CERT = Certificate(Exponent.of(1), ONE)


def _digits(value: int, base: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        value, r = divmod(value, base)
        out.append(r)
    return tuple(reversed(out))


def _regroup(x: SymbolicPoint, q: int, n: int) -> SymbolicPoint:
    pre_len = -(-len(x.preperiod) // q) * q
    per_len = math.lcm(len(x.period), q)
    seq = x.expand(pre_len + per_len)
    blocks = []
    for i in range(0, len(seq), q):
        v = 0
        for s in seq[i : i + q]:
            v = v * n + s
        blocks.append(v)
    return SymbolicPoint(tuple(blocks[: pre_len // q]), tuple(blocks[pre_len // q :]))


def _check_point(x: SymbolicPoint, space: SymbolicSpace) -> None:
    if x.max_symbol() >= space.n:
        raise AlphabetError(f"point {x} is not in {space}")


@dataclass(frozen=True)
class ExponentMap:
    """Identity on sequences; every weight raised to ``sigma``: ``d' = d**sigma``."""

    source: SymbolicSpace
    sigma: Exponent

    def __post_init__(self) -> None:
        if not self.sigma.is_positive:
            raise WitnessError("exponent must be positive")

    @property
    def target(self) -> SymbolicSpace:
        return self.source.power(self.sigma)

    @property
    def certificate(self) -> Certificate:
        return Certificate(self.sigma, ONE)

    def apply(self, x: SymbolicPoint) -> SymbolicPoint:
        return x

    def inverse(self) -> ExponentMap:
        return ExponentMap(self.target, self.sigma.reciprocal())

    def describe(self) -> str:
        return f"exponent({self.sigma})"


@dataclass(frozen=True)
class BlockEncode:
    """Read ``q`` symbols at a time as one symbol of alphabet ``N**q``."""

    source: SymbolicSpace
    q: int

    def __post_init__(self) -> None:
        if not self.source.is_uniform or self.q < 1:
            raise WitnessError("block encoding needs a uniform space and q >= 1")

    @property
    def target(self) -> SymbolicSpace:
        return SymbolicSpace.uniform(self.source.n**self.q, self.source.ratio**self.q)

    @property
    def certificate(self) -> Certificate:
        # prefix m becomes floor(m/q) blocks: d <= d' <= r**-(q-1) d
        return Certificate(Exponent.of(1), self.source.ratio ** (1 - self.q))

    def apply(self, x: SymbolicPoint) -> SymbolicPoint:
        _check_point(x, self.source)
        return _regroup(x, self.q, self.source.n)

    def inverse(self) -> BlockDecode:
        return BlockDecode(self.source, self.q)

    def describe(self) -> str:
        return f"encode(N={self.source.n}, q={self.q})"


@dataclass(frozen=True)
class BlockDecode:
    """Expand each symbol of alphabet ``N'**p`` into ``p`` symbols of ``N'``."""

    target: SymbolicSpace
    p: int

    def __post_init__(self) -> None:
        if not self.target.is_uniform or self.p < 1:
            raise WitnessError("block decoding needs a uniform space and p >= 1")

    @property
    def source(self) -> SymbolicSpace:
        return SymbolicSpace.uniform(self.target.n**self.p, self.target.ratio**self.p)

    @property
    def certificate(self) -> Certificate:
        return Certificate(Exponent.of(1), self.target.ratio ** (1 - self.p))

    def apply(self, x: SymbolicPoint) -> SymbolicPoint:
        _check_point(x, self.source)
        n, p = self.target.n, self.p

        def spell(word: tuple[int, ...]) -> tuple[int, ...]:
            return tuple(s for sym in word for s in _digits(sym, n, p))

        return SymbolicPoint(spell(x.preperiod), spell(x.period))

    def inverse(self) -> BlockEncode:
        return BlockEncode(self.target, self.p)

    def describe(self) -> str:
        return f"decode(N={self.target.n}, p={self.p})"


@dataclass(frozen=True)
class Relabel:
    """Symbol bijection between equal-size alphabets with the same uniform weight."""

    source: SymbolicSpace
    target: SymbolicSpace
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.source.n
        if not (self.source.is_uniform and self.target.is_uniform):
            raise WitnessError("relabeling needs uniform weights on both sides")
        if self.source.ratio != self.target.ratio or self.target.n != n:
            raise WitnessError("relabeling is only an isometry between identical metrics")
        if sorted(self.mapping) != list(range(n)):
            raise WitnessError("mapping must be a permutation of the alphabet")

    @classmethod
    def identity(cls, source: SymbolicSpace, target: SymbolicSpace) -> Relabel:
        return cls(source, target, tuple(range(source.n)))

    @property
    def certificate(self) -> Certificate:
        return IDENTITY_CERT

    def apply(self, x: SymbolicPoint) -> SymbolicPoint:
        _check_point(x, self.source)
        m = self.mapping
        return SymbolicPoint(tuple(m[s] for s in x.preperiod), tuple(m[s] for s in x.period))

    def inverse(self) -> Relabel:
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Relabel(self.target, self.source, tuple(inv))

    def describe(self) -> str:
        return "relabel" + ("(identity)" if self.mapping == tuple(range(len(self.mapping))) else "")


MapAtom = Union[ExponentMap, BlockEncode, BlockDecode, Relabel]


@dataclass(frozen=True)
class MapWitness:
    source: SymbolicSpace
    target: SymbolicSpace
    atoms: tuple = ()
    certificate: Certificate = IDENTITY_CERT

    @classmethod
    def identity(cls, space: SymbolicSpace) -> MapWitness:
        return cls(space, space)

    @classmethod
    def from_atoms(cls, atoms: Sequence[MapAtom]) -> MapWitness:
        if not atoms:
            raise WitnessError("need at least one atom")
        out = cls(atoms[0].source, atoms[0].source)
        for atom in atoms:
            out = compose(out, cls(atom.source, atom.target, (atom,), atom.certificate))
        return out

    @property
    def s(self) -> Exponent:
        return self.certificate.s

    @property
    def C(self) -> Monomial:
        return self.certificate.C

    def with_certificate(self, s: Exponent | None = None, C: Monomial | None = None) -> MapWitness:
        """Same map, different claim (used to probe the verifier)."""
        cert = Certificate(s or self.s, C if C is not None else self.C)
        return dataclasses.replace(self, certificate=cert)

    def inverse(self) -> MapWitness:
        if not self.atoms:
            return self
        return MapWitness.from_atoms([a.inverse() for a in reversed(self.atoms)])

    def summary(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "atoms": [a.describe() for a in self.atoms],
            "certificate": self.certificate.to_json(),
        }


def compose(w1: MapWitness, w2: MapWitness) -> MapWitness:
    """``w2`` after ``w1``."""
    if w1.target != w2.source:
        raise WitnessError(f"cannot compose: {w1.target} is not {w2.source}")
    return MapWitness(w1.source, w2.target, w1.atoms + w2.atoms, w1.certificate.then(w2.certificate))


def eval_witness(w: MapWitness, x: SymbolicPoint) -> SymbolicPoint:
    _check_point(x, w.source)
    for atom in w.atoms:
        x = atom.apply(x)
    return x


def build_exponent_witness(weights: Sequence[Monomial | Rational] | SymbolicSpace,
                           sigma: Exponent | Rational) -> MapWitness:
    """Identity map from weights ``r_i`` to weights ``r_i**sigma``."""
    space = weights if isinstance(weights, SymbolicSpace) else SymbolicSpace.vector(weights)
    if not isinstance(sigma, Exponent):
        sigma = Exponent.of(sigma)
    return MapWitness.from_atoms([ExponentMap(space, sigma)])


def build_uniform_holder_witness(n: int, r: Monomial | Rational, n2: int, r2: Monomial | Rational) -> MapWitness:
    """Bi-Hölder map ``(Omega_n, r) -> (Omega_n2, r2)`` when ``n**q == n2**p``.

    Encode blocks of ``q`` symbols, change the metric by an exponent so that
    ``r**q`` becomes ``r2**p``, relabel the equal alphabets lexicographically,
    decode blocks of ``p``.
    """
    dep = mult_dependence(n, n2)
    if not dep.is_rational:
        raise WitnessError(f"log {n} / log {n2} is irrational: no strictly bi-Hölder map exists")
    p, q = dep.value.numerator, dep.value.denominator
    src = SymbolicSpace.uniform(n, r)
    dst = SymbolicSpace.uniform(n2, r2)
    encode = BlockEncode(src, q)
    stretch = ExponentMap(encode.target, Exponent.log_ratio(dst.ratio**p, src.ratio**q))
    decode = BlockDecode(dst, p)
    relabel = Relabel.identity(stretch.target, decode.source)
    return MapWitness.from_atoms([encode, stretch, relabel, decode])


# -- verification ----------------------------------------------------------------


@dataclass
class VerificationReport:
    passed: bool
    depth: int
    pair_count: int
    claimed_s: Exponent
    claimed_C: Monomial
    observed_max: Monomial | None
    observed_min: Monomial | None
    violations: list = field(default_factory=list)
    collisions: int = 0
    backend: str = kernels.BACKEND

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "depth": self.depth,
            "pair_count": self.pair_count,
            "claimed_s": self.claimed_s.to_json(),
            "claimed_C": str(self.claimed_C),
            "observed_extremes": {
                "max": None if self.observed_max is None else str(self.observed_max),
                "min": None if self.observed_min is None else str(self.observed_min),
            },
            "violations": self.violations,
            "collisions": self.collisions,
            "backend": self.backend,
        }


def _class_table(space: SymbolicSpace, rows: np.ndarray) -> tuple[np.ndarray, list[Monomial]]:
    """Class id of every prefix ``rows[i, :m]`` by the value of its weight."""
    P, L = rows.shape
    if space.is_uniform:
        return np.tile(np.arange(L + 1, dtype=np.int32), (P, 1)), [space.ratio**m for m in range(L + 1)]
    ids: dict[Monomial, int] = {ONE: 0}
    out = np.empty((P, L + 1), dtype=np.int32)
    out[:, 0] = 0
    for i in range(P):
        w = ONE
        for m in range(1, L + 1):
            w = w * space.weights[rows[i, m - 1]]
            out[i, m] = ids.setdefault(w, len(ids))
    values = list(ids)
    return out, values


def _expansion_width(points: Sequence[SymbolicPoint]) -> int:
    pre = max(len(x.preperiod) for x in points)
    per = 1
    for length in {len(x.period) for x in points}:
        per = math.lcm(per, length)
    width = pre + per
    if width > MAX_TARGET_WIDTH:
        raise EnumerationLimitError(f"image expansions need width {width} > {MAX_TARGET_WIDTH}")
    return max(width, 1)


def verify_witness(w: MapWitness, depth: int, max_pairs: int | None = None,
                   backend: str | None = None) -> VerificationReport:
    """Check the certificate on all pairs of depth-``depth`` cylinder points."""
    max_pairs = max_pairs_budget() if max_pairs is None else max_pairs
    P = w.source.n**depth
    pair_count = P * (P - 1) // 2
    if pair_count > max_pairs:
        raise EnumerationLimitError(f"{pair_count} pairs exceed the budget of {max_pairs}")
    pts = enumerate_cylinder_points(w.source, depth, max_points=max(P, 1))
    images = [eval_witness(w, x) for x in pts]
    ls = max(depth, 1)
    lt = _expansion_width(images)
    src = np.array([x.expand(ls) for x in pts], dtype=np.int32).reshape(P, ls)
    tgt = np.array([y.expand(lt) for y in images], dtype=np.int32).reshape(P, lt)
    src_cls, src_vals = _class_table(w.source, src)
    tgt_cls, tgt_vals = _class_table(w.target, tgt)
    kernel = kernels.BACKENDS[backend] if backend else kernels.pair_class_table
    counts, first_i, first_j, collisions = kernel(
        np.ascontiguousarray(src), np.ascontiguousarray(src_cls),
        np.ascontiguousarray(tgt), np.ascontiguousarray(tgt_cls),
        len(src_vals), len(tgt_vals),
    )
    C, C_inv = w.C, w.C.inverse()
    hi = lo = None
    violations = []
    for a, b in zip(*np.nonzero(counts)):
        ratio = tgt_vals[b] / w.s.power(src_vals[a])
        if hi is None or ratio > hi:
            hi = ratio
        if lo is None or ratio < lo:
            lo = ratio
        for bound, broken in (("upper", ratio > C), ("lower", ratio < C_inv)):
            if broken:
                i, j = int(first_i[a, b]), int(first_j[a, b])
                violations.append({
                    "bound": bound,
                    "x": str(pts[i]),
                    "y": str(pts[j]),
                    "source_distance": str(src_vals[a]),
                    "target_distance": str(tgt_vals[b]),
                    "ratio": str(ratio),
                    "pairs_in_class": int(counts[a, b]),
                })
    violations.sort(key=lambda v: (v["bound"], v["x"], v["y"]))
    return VerificationReport(
        passed=not violations and collisions == 0,
        depth=depth,
        pair_count=pair_count,
        claimed_s=w.s,
        claimed_C=w.C,
        observed_max=hi,
        observed_min=lo,
        violations=violations,
        collisions=int(collisions),
        backend=backend or kernels.BACKEND,
    )

