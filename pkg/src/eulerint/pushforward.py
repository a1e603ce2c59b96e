"""Simplicial maps, fiberwise Euler integration, and pushforward.

For a simplicial map f the preimage of a point interior to a target cell
sigma, inside an open source cell c with f(c) = sigma, is an open polytope
of dimension dim c - dim sigma.  Its compactly supported Euler
characteristic is (-1)**(dim c - dim sigma), which makes the pushforward
of a constructible function an exact finite sum and the Fubini identity an
integer identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .complexes import (
    Complex,
    ConstructibleFunction,
    DefinableSet,
    chi_c,
    integrate,
)
from .errors import DomainMismatchError, IncompleteMapError, MalformedComplexError


class SimplicialMap:
    """A vertex map between simplicial complexes inducing a cellular map."""

    def __init__(self, source: Complex, target: Complex, vertex_map: Mapping[str, str]):
        if not (source.simplicial and target.simplicial):
            raise MalformedComplexError("both complexes must be simplicial")
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        missing = [v for v in source.cells_of_dim(0) if v not in self.vertex_map]
        if missing:
            raise IncompleteMapError(f"unmapped source vertices: {missing}")
        self._image: dict[str, str] = {}
        for cid in source.cells:
            image_verts = frozenset(
                self.vertex_map[v] for v in source.vertices_of(cid)
            )
            tgt = target.simplex_with_vertices(image_verts)
            if tgt is None:
                raise MalformedComplexError(
                    f"image of cell {cid!r} spans no simplex of the target"
                )
            self._image[cid] = tgt

    @classmethod
    def identity(cls, cx: Complex) -> "SimplicialMap":
        return cls(cx, cx, {v: v for v in cx.cells_of_dim(0)})

    def to_json(self, source_ref: str = "", target_ref: str = "") -> dict:
        return {
            "source": source_ref,
            "target": target_ref,
            "vertex_map": {k: self.vertex_map[k] for k in sorted(self.vertex_map)},
        }


def cell_image(f: SimplicialMap, cid: str) -> str:
    """Target simplex spanned by the images of the cell's vertices."""
    img = f._image.get(cid)
    if img is None:
        raise MalformedComplexError(f"cell {cid!r} not in the source complex")
    return img


def fiber_chi(f: SimplicialMap, sigma: str, phi: ConstructibleFunction) -> int:
    """Euler integral of phi over the fiber of any point interior to sigma."""
    if phi.complex is not f.source:
        raise DomainMismatchError("phi must live over the source complex")
    if sigma not in f.target:
        raise MalformedComplexError(f"cell {sigma!r} not in the target complex")
    base_dim = f.target.cells[sigma].dim
    total = 0
    for cid, img in f._image.items():
        if img == sigma:
            total += phi(cid) * (-1) ** (f.source.cells[cid].dim - base_dim)
    return total


def pushforward(f: SimplicialMap, phi: ConstructibleFunction) -> ConstructibleFunction:
    """The function on the target integrating phi over fibers, cell by cell."""
    if phi.complex is not f.source:
        raise DomainMismatchError("phi must live over the source complex")
    values: dict[str, int] = {sigma: 0 for sigma in f.target.cells}
    for cid, img in f._image.items():
        values[img] += phi(cid) * (-1) ** (
            f.source.cells[cid].dim - f.target.cells[img].dim
        )
    return ConstructibleFunction(f.target, values)


class FubiniReport(NamedTuple):
    equal: bool
    source_integral: int
    target_integral: int


def fubini_verify(f: SimplicialMap, phi: ConstructibleFunction) -> FubiniReport:
    """Both sides of the Fubini identity; inequality would flag a bug."""
    lhs = integrate(phi, f.source.full_set())
    rhs = integrate(pushforward(f, phi), f.target.full_set())
    return FubiniReport(lhs == rhs, lhs, rhs)


class LevelSetReport(NamedTuple):
    equal: bool
    source_sum: int
    target_sum: int


def level_set_identity(f: SimplicialMap, phi: ConstructibleFunction) -> LevelSetReport:
    """Compare sum i*chi_c{phi=i} with sum j*chi_c{f_*phi=j} (exact)."""
    push = pushforward(f, phi)
    lhs = sum(i * chi_c(phi.level_set(i)) for i in phi.level_values() if i)
    rhs = sum(j * chi_c(push.level_set(j)) for j in push.level_values() if j)
    return LevelSetReport(lhs == rhs, lhs, rhs)


def constant_pushforward_check(
    f: SimplicialMap, phi: ConstructibleFunction
) -> int | None:
    """If f_*phi is constant d on the target, return d after asserting
    sum i*chi_c{phi=i} = d*chi_c(target); otherwise return None."""
    push = pushforward(f, phi)
    values = {push(sigma) for sigma in f.target.cells}
    if len(values) != 1:
        return None
    d = values.pop()
    lhs = sum(i * chi_c(phi.level_set(i)) for i in phi.level_values() if i)
    rhs = d * chi_c(f.target.full_set())
    if lhs != rhs:
        raise AssertionError(
            f"constant pushforward {d} violates the weighted level identity "
            f"({lhs} != {rhs}); this indicates a library bug"
        )
    return d
