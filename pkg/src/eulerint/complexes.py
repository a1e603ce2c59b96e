"""Finite regular cell complexes and the exact Euler-characteristic measure.

A complex is a finite face poset: each cell knows its codimension-1 faces.
Open subsets here are unions of open cells; on those, the Euler
characteristic with compact support is the alternating count
sum((-1)**dim) and is a finitely additive measure.  Constructible
functions are integer-valued and constant on open cells, and integration
against the measure is exact integer arithmetic throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import Counter
from itertools import combinations
from typing import Iterable, Mapping

from .errors import (
    DomainMismatchError,
    MalformedComplexError,
    MalformedSetError,
    NotASubcomplexError,
    SemicharacteristicUndefinedError,
)


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.dim < 0:
            raise MalformedComplexError(f"cell {self.id!r} has negative dimension")
        if self.dim == 0 and self.faces:
            raise MalformedComplexError(f"vertex {self.id!r} cannot have faces")
        object.__setattr__(self, "faces", frozenset(self.faces))


class Complex:
    """A finite regular CW (optionally simplicial) complex.

    Regularity is not checked geometrically; what is checked is the
    combinatorial shadow we rely on: faces drop dimension by exactly one,
    closures stay inside the complex, and every codimension-2 incidence
    occurs an even number of times (so mod-2 boundaries square to zero).
    """

    def __init__(self, cells: Iterable[Cell], simplicial: bool = False):
        cells = list(cells)
        ids = [c.id for c in cells]
        if len(set(ids)) != len(ids):
            dupes = [i for i, n in Counter(ids).items() if n > 1]
            raise MalformedComplexError(f"duplicate cell ids: {dupes}")
        self.cells: dict[str, Cell] = {c.id: c for c in cells}
        self.simplicial = simplicial
        self._validate_faces()
        if simplicial:
            self._vertices_of = {cid: self._closure_vertices(cid) for cid in self.cells}
            self._validate_simplicial()
            self._simplex_by_vertices = {
                verts: cid for cid, verts in self._vertices_of.items()
            }

    # -- structure ---------------------------------------------------------

    def _validate_faces(self):
        for c in self.cells.values():
            for f in c.faces:
                fc = self.cells.get(f)
                if fc is None:
                    raise MalformedComplexError(
                        f"cell {c.id!r} lists unknown face {f!r}"
                    )
                if fc.dim != c.dim - 1:
                    raise MalformedComplexError(
                        f"face {f!r} of {c.id!r} has dim {fc.dim}, expected {c.dim - 1}"
                    )
        # mod-2 boundary of a boundary must vanish; in a regular complex each
        # codim-2 face of a cell is shared by exactly two of its facets.
        for c in self.cells.values():
            if c.dim < 2:
                continue
            second = Counter()
            for f in c.faces:
                second.update(self.cells[f].faces)
            odd = [g for g, n in second.items() if n % 2]
            if odd:
                raise MalformedComplexError(
                    f"cell {c.id!r} has odd codim-2 incidences {odd}; not a regular complex"
                )

    def _closure_vertices(self, cid: str) -> frozenset[str]:
        out, stack = set(), [cid]
        while stack:
            c = self.cells[stack.pop()]
            if c.dim == 0:
                out.add(c.id)
            else:
                stack.extend(c.faces)
        return frozenset(out)

    def _validate_simplicial(self):
        seen: dict[frozenset[str], str] = {}
        for cid, c in self.cells.items():
            verts = self._vertices_of[cid]
            if len(verts) != c.dim + 1:
                raise MalformedComplexError(
                    f"simplicial cell {cid!r} of dim {c.dim} has {len(verts)} vertices"
                )
            if verts in seen:
                raise MalformedComplexError(
                    f"cells {seen[verts]!r} and {cid!r} span the same vertices"
                )
            seen[verts] = cid
            if c.dim >= 1:
                face_vertex_sets = {self._vertices_of[f] for f in c.faces}
                expected = {verts - {v} for v in verts}
                if face_vertex_sets != expected:
                    raise MalformedComplexError(
                        f"faces of {cid!r} are not its vertex deletions"
                    )

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cid: str) -> bool:
        return cid in self.cells

    def dim(self) -> int:
        return max((c.dim for c in self.cells.values()), default=-1)

    def cells_of_dim(self, d: int) -> list[str]:
        return sorted(cid for cid, c in self.cells.items() if c.dim == d)

    def vertices_of(self, cid: str) -> frozenset[str]:
        """Vertex set of a cell's closure (simplicial complexes only)."""
        if not self.simplicial:
            raise MalformedComplexError("vertices_of requires a simplicial complex")
        return self._vertices_of[cid]

    def simplex_with_vertices(self, verts: Iterable[str]) -> str | None:
        if not self.simplicial:
            raise MalformedComplexError(
                "simplex lookup requires a simplicial complex"
            )
        return self._simplex_by_vertices.get(frozenset(verts))

    def closure(self, members: Iterable[str]) -> frozenset[str]:
        out, stack = set(), list(members)
        while stack:
            cid = stack.pop()
            if cid in out:
                continue
            out.add(cid)
            stack.extend(self.cells[cid].faces)
        return frozenset(out)

    def full_set(self) -> "DefinableSet":
        return DefinableSet(self, self.cells.keys())

    def empty_set(self) -> "DefinableSet":
        return DefinableSet(self, ())

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cells": [
                {"id": c.id, "dim": c.dim, "faces": sorted(c.faces)}
                for c in sorted(self.cells.values(), key=lambda c: (c.dim, c.id))
            ],
            "simplicial": self.simplicial,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Complex":
        cells = [
            Cell(str(c["id"]), int(c["dim"]), frozenset(map(str, c.get("faces", ()))))
            for c in data["cells"]
        ]
        return cls(cells, simplicial=bool(data.get("simplicial", False)))


@dataclass(frozen=True)
class DefinableSet:
    """A union of open cells of one fixed complex."""

    complex: Complex
    members: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(self.members)
        unknown = [m for m in members if m not in self.complex]
        if unknown:
            raise MalformedSetError(f"unknown cell ids: {sorted(unknown)}")
        object.__setattr__(self, "members", members)

    def union(self, other: "DefinableSet") -> "DefinableSet":
        _same_complex(self, other)
        return DefinableSet(self.complex, self.members | other.members)

    def intersect(self, other: "DefinableSet") -> "DefinableSet":
        _same_complex(self, other)
        return DefinableSet(self.complex, self.members & other.members)

    def complement(self) -> "DefinableSet":
        return DefinableSet(self.complex, self.complex.cells.keys() - self.members)

    def is_closed(self) -> bool:
        return all(
            f in self.members for m in self.members for f in self.complex.cells[m].faces
        )

    def to_json(self, complex_ref: str = "") -> dict:
        return {"complex": complex_ref, "members": sorted(self.members)}


def _same_complex(a, b):
    if a.complex is not b.complex:
        raise DomainMismatchError("operands live over different complexes")


def set_union(a: DefinableSet, b: DefinableSet) -> DefinableSet:
    return a.union(b)


def set_intersect(a: DefinableSet, b: DefinableSet) -> DefinableSet:
    return a.intersect(b)


def set_complement(a: DefinableSet) -> DefinableSet:
    return a.complement()


def chi_c(dset: DefinableSet) -> int:
    """Euler characteristic with compact support: sum of (-1)^dim over open cells."""
    cx = dset.complex
    return sum((-1) ** cx.cells[m].dim for m in dset.members)


@dataclass(frozen=True)
class ConstructibleFunction:
    """Integer-valued function constant on open cells; zero off its support."""

    complex: Complex
    values: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for cid, v in dict(self.values).items():
            if cid not in self.complex:
                raise MalformedSetError(f"value on unknown cell {cid!r}")
            v = int(v)
            if v:
                vals[cid] = v
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, dset: DefinableSet) -> "ConstructibleFunction":
        return cls(dset.complex, {m: 1 for m in dset.members})

    @classmethod
    def constant(cls, cx: Complex, value: int) -> "ConstructibleFunction":
        return cls(cx, {cid: value for cid in cx.cells})

    def __call__(self, cid: str) -> int:
        return self.values.get(cid, 0)

    def scale(self, a: int) -> "ConstructibleFunction":
        return ConstructibleFunction(
            self.complex, {c: a * v for c, v in self.values.items()}
        )

    def add(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        _same_complex(self, other)
        keys = self.values.keys() | other.values.keys()
        return ConstructibleFunction(
            self.complex, {k: self(k) + other(k) for k in keys}
        )

    def level_set(self, value: int) -> DefinableSet:
        if value == 0:
            members = self.complex.cells.keys() - self.values.keys()
        else:
            members = {c for c, v in self.values.items() if v == value}
        return DefinableSet(self.complex, members)

    def level_values(self) -> set[int]:
        """All values taken somewhere, including 0 when attained."""
        vals = set(self.values.values())
        if len(self.values) < len(self.complex):
            vals.add(0)
        return vals

    def to_json(self, complex_ref: str = "") -> dict:
        return {
            "complex": complex_ref,
            "values": {k: self.values[k] for k in sorted(self.values)},
        }


def integrate(phi: ConstructibleFunction, B: DefinableSet) -> int:
    """Integral of phi over B against the chi_c measure (exact)."""
    if phi.complex is not B.complex:
        raise DomainMismatchError("phi and B live over different complexes")
    cx = B.complex
    return sum(phi(m) * (-1) ** cx.cells[m].dim for m in B.members)


# -- mod-2 homology ---------------------------------------------------------


def _gf2_rank(columns: list[int]) -> int:
    """Rank of a GF(2) matrix whose columns are int bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            other = pivots.get(top)
            if other is None:
                pivots[top] = col
                rank += 1
                break
            col ^= other
    return rank


def betti_mod2(closed_set: DefinableSet) -> tuple[int, ...]:
    """Mod-2 Betti numbers of a closed subcomplex, via GF(2) elimination."""
    if not closed_set.is_closed():
        raise NotASubcomplexError("set is not closed under faces")
    cx = closed_set.complex
    if not closed_set.members:
        return ()
    top = max(cx.cells[m].dim for m in closed_set.members)
    index: dict[str, int] = {}
    by_dim: list[list[str]] = [[] for _ in range(top + 1)]
    for m in sorted(closed_set.members):
        d = cx.cells[m].dim
        index[m] = len(by_dim[d])
        by_dim[d].append(m)
    ranks = [0] * (top + 2)  # ranks[d] = rank of the boundary map from dim d
    for d in range(1, top + 1):
        cols = []
        for m in by_dim[d]:
            mask = 0
            for f in cx.cells[m].faces:
                mask |= 1 << index[f]
            cols.append(mask)
        ranks[d] = _gf2_rank(cols)
    return tuple(
        len(by_dim[d]) - ranks[d] - ranks[d + 1] for d in range(top + 1)
    )


def semicharacteristic(closed_set: DefinableSet) -> int:
    """Half the sum of the mod-2 Betti numbers; defined only when that sum is even."""
    total = sum(betti_mod2(closed_set))
    if total % 2:
        raise SemicharacteristicUndefinedError(
            f"mod-2 Betti sum {total} is odd; semicharacteristic undefined"
        )
    return total // 2


# -- barycentric subdivision ------------------------------------------------

_SEP = "|"


def barycentric_subdivision(cx: Complex) -> Complex:
    """First barycentric subdivision as the order complex of the face poset.

    Cells are chains c0 < c1 < ... < ck in the face poset (id joined with
    '|'); the open cell of a chain sits inside the open top cell of the
    chain, which is what `transport_set` uses.
    """
    above: dict[str, list[str]] = {cid: [] for cid in cx.cells}
    for cid in cx.cells:
        for lower in cx.closure([cid]):
            if lower != cid:
                above[lower].append(cid)
    chains: list[tuple[str, ...]] = [(cid,) for cid in cx.cells]
    out = list(chains)
    frontier = chains
    while frontier:
        nxt = [chain + (cid,) for chain in frontier for cid in above[chain[-1]]]
        out.extend(nxt)
        frontier = nxt
    cells = []
    for chain in out:
        faces = frozenset(
            _SEP.join(chain[:i] + chain[i + 1 :]) for i in range(len(chain))
        ) if len(chain) > 1 else frozenset()
        cells.append(Cell(_SEP.join(chain), len(chain) - 1, faces))
    return Complex(cells, simplicial=True)


def transport_set(sd: Complex, dset: DefinableSet) -> DefinableSet:
    """Image of a definable set in the barycentric subdivision of its complex."""
    members = {
        cid for cid in sd.cells if cid.split(_SEP)[-1] in dset.members
    }
    return DefinableSet(sd, members)
