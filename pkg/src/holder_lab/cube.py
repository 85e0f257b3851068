"""Fractal cubes ``K(n, D)``: the attractor of ``x -> (x + d) / n`` for ``d`` in ``D``.

The total-disconnectedness certifier tracks the connected components of the
level-k cell approximations up to translation.  Distinct components never touch
after subdivision, so the shapes present at level k+1 are exactly the
refinements of the shapes present at level k.  Once no new shape appears, every
component has boundedly many cells of side ``n**-k`` forever, and their
diameters shrink to zero.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .symbolic import Dimension, SymbolicSpace

Cell = tuple[int, ...]
Shape = frozenset  # frozenset[Cell], translated so its least cell is the origin

DEFAULT_MAX_DEPTH = 8
DEFAULT_MAX_COMPONENT_CELLS = 4096
DEFAULT_MAX_CENSUS = 10_000
DEFAULT_MAX_PIXELS = 1 << 24


class CubeError(ValueError):
    """Invalid fractal cube description."""


class NotTotallyDisconnectedError(ValueError):
    """A symbolic identification was requested without a TD certificate."""


@dataclass(frozen=True)
class FractalCube:
    n: int
    d: int
    digits: tuple[Cell, ...]

    @property
    def N(self) -> int:
        return len(self.digits)

    @property
    def is_full(self) -> bool:
        return self.N == self.n**self.d

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "digits": [list(x) for x in self.digits]}


def validate(n: int, d: int, digits: Iterable[Sequence[int] | int]) -> FractalCube:
    """Build a canonical cube, digits sorted lexicographically."""
    if not isinstance(n, int) or n < 2:
        raise CubeError(f"n must be an integer >= 2, got {n!r}")
    if not isinstance(d, int) or d < 1:
        raise CubeError(f"d must be an integer >= 1, got {d!r}")
    cells = []
    for raw in digits:
        cell = (raw,) if isinstance(raw, int) else tuple(raw)
        if len(cell) != d or not all(isinstance(c, int) for c in cell):
            raise CubeError(f"digit {raw!r} is not a {d}-tuple of integers")
        if not all(0 <= c < n for c in cell):
            raise CubeError(f"digit {raw!r} out of range 0..{n - 1}")
        cells.append(cell)
    if len(set(cells)) != len(cells):
        dup = next(c for c, k in Counter(cells).items() if k > 1)
        raise CubeError(f"duplicate digit {dup}")
    if not cells:
        raise CubeError("digit set is empty")
    return FractalCube(n, d, tuple(sorted(cells)))


def cube_dimension(c: FractalCube) -> Dimension:
    return Dimension(math.log(c.N) / math.log(c.n), f"log {c.N} / log {c.n}")


# -- components ----------------------------------------------------------------


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _neighbour_offsets(d: int) -> list[Cell]:
    return [o for o in itertools.product((-1, 0, 1), repeat=d) if any(o)]


def normalize(cells: Iterable[Cell]) -> Shape:
    cells = list(cells)
    origin = min(cells)
    return frozenset(tuple(a - b for a, b in zip(c, origin)) for c in cells)


def components(cells: Iterable[Cell], d: int) -> list[list[Cell]]:
    """Connected components under closed-cube contact (corners count)."""
    cells = sorted(cells)
    index = {c: i for i, c in enumerate(cells)}
    uf = _UnionFind(len(cells))
    offsets = _neighbour_offsets(d)
    for c, i in index.items():
        for o in offsets:
            j = index.get(tuple(a + b for a, b in zip(c, o)))
            if j is not None:
                uf.union(i, j)
    groups: dict[int, list[Cell]] = {}
    for c, i in index.items():
        groups.setdefault(uf.find(i), []).append(c)
    return list(groups.values())


def subdivide(shape: Iterable[Cell], c: FractalCube) -> list[Cell]:
    n = c.n
    return [tuple(n * a + b for a, b in zip(cell, dig)) for cell in shape for dig in c.digits]


def refine_shape(shape: Shape, c: FractalCube) -> list[Shape]:
    """Component shapes (with multiplicity) inside one subdivided shape."""
    return [normalize(comp) for comp in components(subdivide(shape, c), c.d)]


def refine_components(shapes: Iterable[Shape], c: FractalCube) -> set[Shape]:
    out: set[Shape] = set()
    for shape in shapes:
        out.update(refine_shape(shape, c))
    return out


def singleton(d: int) -> Shape:
    return frozenset({(0,) * d})


class TDKind(enum.Enum):
    CERTIFIED = "certified"
    FULL_CUBE = "full_cube"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TDStatus:
    kind: TDKind
    depth: int
    census: frozenset = frozenset()
    max_component_cells: int = 1
    growth: tuple[int, ...] = ()  # largest component cell-count per level
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.kind is TDKind.CERTIFIED

    def to_json(self) -> dict:
        out = {
            "status": self.kind.value,
            "depth": self.depth,
            "max_component_cells": self.max_component_cells,
            "growth": list(self.growth),
        }
        if self.kind is TDKind.CERTIFIED:
            out["census"] = [sorted(map(list, s)) for s in sorted(self.census, key=sorted)]
        if self.reason:
            out["reason"] = self.reason
        return out


def _closure(start: set[Shape], c: FractalCube) -> frozenset:
    seen = set(start)
    frontier = set(start)
    while frontier:
        frontier = refine_components(frontier, c) - seen
        seen |= frontier
    return frozenset(seen)


def check_total_disconnectedness(
    c: FractalCube,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_component_cells: int = DEFAULT_MAX_COMPONENT_CELLS,
    max_census: int = DEFAULT_MAX_CENSUS,
) -> TDStatus:
    """Sound, incomplete certificate of total disconnectedness.

    Certified at depth k once every shape present at level k was already seen
    at an earlier level: the accumulated census is then closed under
    refinement.  The reported census is the refinement closure of the level-k
    shapes.
    """
    if c.is_full:
        return TDStatus(TDKind.FULL_CUBE, 0, max_component_cells=c.n**c.d,
                        reason="digit set fills the cube; the attractor is the unit cube")
    current = {singleton(c.d)}
    seen = set(current)
    growth: list[int] = []
    for depth in range(1, max_depth + 1):
        current = refine_components(current, c)
        biggest = max(len(s) for s in current)
        growth.append(biggest)
        if biggest > max_component_cells:
            return TDStatus(TDKind.UNKNOWN, depth, max_component_cells=biggest, growth=tuple(growth),
                            reason=f"component with {biggest} cells exceeds the limit {max_component_cells}")
        if current <= seen:
            return TDStatus(TDKind.CERTIFIED, depth, _closure(current, c),
                            max_component_cells=biggest, growth=tuple(growth))
        seen |= current
        if len(seen) > max_census:
            return TDStatus(TDKind.UNKNOWN, depth, max_component_cells=biggest, growth=tuple(growth),
                            reason=f"shape census exceeds {max_census} shapes")
    return TDStatus(TDKind.UNKNOWN, max_depth, max_component_cells=max(growth), growth=tuple(growth),
                    reason=f"no refinement fixed point by depth {max_depth}")


def to_symbolic(c: FractalCube, assume_td: bool = False, status: TDStatus | None = None) -> SymbolicSpace:
    """The symbolic model ``(Omega_N, rho_{1/n})`` of a totally disconnected cube."""
    if c.is_full:
        raise NotTotallyDisconnectedError("the full cube is not totally disconnected")
    if not assume_td:
        status = status or check_total_disconnectedness(c)
        if not status.certified:
            raise NotTotallyDisconnectedError(
                f"total disconnectedness not certified ({status.kind.value} at depth {status.depth}); "
                "pass assume_td=True to proceed anyway"
            )
    if c.N < 2:
        raise CubeError("a single-digit cube is a point")
    return SymbolicSpace.uniform(c.N, Fraction(1, c.n))


# -- rendering -----------------------------------------------------------------


def occupied_cells(c: FractalCube, depth: int) -> list[Cell]:
    """Level-``depth`` cell addresses covered by the approximation."""
    cells: list[Cell] = [(0,) * c.d]
    for _ in range(depth):
        cells = subdivide(cells, c)
    return cells


def render(c: FractalCube, depth: int, max_pixels: int = DEFAULT_MAX_PIXELS) -> str:
    """Plain PBM (P1).  Row 0 is the top edge y = 1, column 0 is x = 0.

    Each image row is written as digits without separators, wrapped at 70
    characters per line.
    """
    if c.d not in (1, 2):
        raise CubeError(f"rendering supports d = 1 or 2, not d = {c.d}")
    side = c.n**depth
    height = side if c.d == 2 else 1
    if side * height > max_pixels:
        raise CubeError(f"{side}x{height} image exceeds the pixel budget {max_pixels}")
    grid = [bytearray(b"0" * side) for _ in range(height)]
    for cell in occupied_cells(c, depth):
        row = height - 1 - cell[1] if c.d == 2 else 0
        grid[row][cell[0]] = ord("1")
    lines = ["P1", f"{side} {height}"]
    for row in grid:
        text = row.decode()
        lines.extend(text[i : i + 70] for i in range(0, len(text), 70))
    return "\n".join(lines) + "\n"


def parse_pbm(text: str) -> list[list[int]]:
    """Read a P1 image back into rows of 0/1 (comments and whitespace tolerated)."""
    tokens = []
    for line in text.splitlines():
        tokens.append(line.split("#", 1)[0])
    body = " ".join(tokens).split()
    if not body or body[0] != "P1":
        raise ValueError("not a plain PBM (P1) image")
    width, height = int(body[1]), int(body[2])
    bits = [int(ch) for ch in "".join(body[3:])]
    if len(bits) != width * height:
        raise ValueError("pixel count does not match the header")
    return [bits[r * width : (r + 1) * width] for r in range(height)]
