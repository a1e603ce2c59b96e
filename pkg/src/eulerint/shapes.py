"""Builders for small standard complexes, embeddings, and random instances."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .complexes import Cell, Complex, ConstructibleFunction, DefinableSet


def simplex_id(verts: Iterable[str]) -> str:
    return ",".join(sorted(verts))


def simplicial_complex(maximal: Sequence[Sequence[str]]) -> Complex:
    """Simplicial complex generated by the given maximal simplices (vertex tuples)."""
    simplices: set[frozenset[str]] = set()
    for top in maximal:
        top = tuple(dict.fromkeys(top))
        for k in range(1, len(top) + 1):
            simplices.update(frozenset(c) for c in combinations(top, k))
    cells = []
    for s in simplices:
        faces = (
            frozenset(simplex_id(s - {v}) for v in s) if len(s) > 1 else frozenset()
        )
        cells.append(Cell(simplex_id(s), len(s) - 1, faces))
    return Complex(cells, simplicial=True)


def interval() -> Complex:
    """Closed interval: two vertices and an edge."""
    return simplicial_complex([("a", "b")])


def circle(n: int = 3) -> Complex:
    """Polygonal circle with n vertices."""
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    vs = [f"v{i}" for i in range(n)]
    return simplicial_complex([(vs[i], vs[(i + 1) % n]) for i in range(n)])


def simplex(k: int) -> Complex:
    return simplicial_complex([tuple(f"v{i}" for i in range(k + 1))])


def simplex_boundary(k: int) -> Complex:
    """Boundary of the k-simplex, a triangulated (k-1)-sphere."""
    vs = [f"v{i}" for i in range(k + 1)]
    return simplicial_complex(list(combinations(vs, k)))


def tetrahedron_boundary() -> Complex:
    return simplex_boundary(3)


def disjoint_union(a: Complex, b: Complex) -> Complex:
    cells = [Cell("L." + c.id, c.dim, frozenset("L." + f for f in c.faces))
             for c in a.cells.values()]
    cells += [Cell("R." + c.id, c.dim, frozenset("R." + f for f in c.faces))
              for c in b.cells.values()]
    return Complex(cells, simplicial=a.simplicial and b.simplicial)


# -- embedded surfaces -------------------------------------------------------

Point3 = tuple[Fraction, Fraction, Fraction]


class EmbeddedSurface:
    """A simplicial surface with exact rational vertex coordinates in R^3."""

    def __init__(self, complex: Complex, coords: dict[str, Point3]):
        self.complex = complex
        self.coords = {
            v: tuple(Fraction(x) for x in p) for v, p in coords.items()
        }
        missing = [v for v in complex.cells_of_dim(0) if v not in self.coords]
        if missing:
            raise ValueError(f"vertices without coordinates: {missing}")


def octahedron() -> EmbeddedSurface:
    coords = {
        "px": (1, 0, 0), "mx": (-1, 0, 0),
        "py": (0, 1, 0), "my": (0, -1, 0),
        "pz": (0, 0, 1), "mz": (0, 0, -1),
    }
    tris = []
    for z in ("pz", "mz"):
        for x, y in (("px", "py"), ("py", "mx"), ("mx", "my"), ("my", "px")):
            tris.append((z, x, y))
    cx = simplicial_complex(tris)
    return EmbeddedSurface(cx, {k: tuple(map(Fraction, v)) for k, v in coords.items()})


def torus_grid(nu: int = 4, nv: int = 4) -> EmbeddedSurface:
    """Torus of revolution triangulated on an nu x nv vertex grid.

    Uses the four exact rational points (1,0),(0,1),(-1,0),(0,-1) on the
    unit circle, so nu and nv must be 4 (kept as parameters for the id
    scheme only).  Tube radius 1 around a radius-2 core circle.
    """
    if nu != 4 or nv != 4:
        raise ValueError("only the 4x4 rational torus grid is supported")
    circ = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
            (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))]
    coords: dict[str, Point3] = {}
    for i in range(nu):
        cu, su = circ[i]
        for j in range(nv):
            cv, sv = circ[j]
            r = 2 + cu
            coords[f"v{i}_{j}"] = (r * cv, r * sv, su)
    tris = []
    for i in range(nu):
        for j in range(nv):
            a = f"v{i}_{j}"
            b = f"v{(i + 1) % nu}_{j}"
            c = f"v{i}_{(j + 1) % nv}"
            d = f"v{(i + 1) % nu}_{(j + 1) % nv}"
            tris.append((a, b, d))
            tris.append((a, d, c))
    return EmbeddedSurface(simplicial_complex(tris), coords)


def tetrahedron_surface() -> EmbeddedSurface:
    coords = {
        "v0": (0, 0, 0), "v1": (1, 0, 0), "v2": (0, 1, 0), "v3": (0, 0, 1),
    }
    cx = simplex_boundary(3)
    return EmbeddedSurface(cx, {k: tuple(map(Fraction, v)) for k, v in coords.items()})


# -- random instances --------------------------------------------------------


def random_simplicial_complex(rng: random.Random, max_cells: int = 50) -> Complex:
    """Random simplicial complex with at most max_cells cells (at least 1)."""
    nv = rng.randint(1, max(2, max_cells // 4))
    verts = [f"v{i}" for i in range(nv)]
    maximal: list[tuple[str, ...]] = [(v,) for v in verts]
    attempts = rng.randint(0, 2 * nv)
    for _ in range(attempts):
        k = rng.choice((2, 2, 3))
        if nv >= k:
            maximal.append(tuple(rng.sample(verts, k)))
    cx = simplicial_complex(maximal)
    while len(cx) > max_cells:
        maximal.pop()
        cx = simplicial_complex(maximal)
    return cx


def random_definable_set(rng: random.Random, cx: Complex) -> DefinableSet:
    members = [cid for cid in cx.cells if rng.random() < 0.5]
    return DefinableSet(cx, members)


def random_constructible(
    rng: random.Random, cx: Complex, lo: int = -3, hi: int = 3
) -> ConstructibleFunction:
    return ConstructibleFunction(
        cx, {cid: rng.randint(lo, hi) for cid in cx.cells}
    )


def random_simplicial_map(rng: random.Random, max_cells: int = 20):
    """Random simplicial map: builds a target, a vertex map, and a source
    whose simplices are guaranteed to span simplices of the target.

    Returns (source, target, vertex_map).
    """
    target = random_simplicial_complex(rng, max_cells)
    tverts = target.cells_of_dim(0)
    n_src = rng.randint(1, 8)
    vmap = {f"s{i}": rng.choice(tverts) for i in range(n_src)}
    sverts = list(vmap)
    maximal: list[tuple[str, ...]] = [(v,) for v in sverts]
    for _ in range(rng.randint(0, 16)):
        k = rng.choice((2, 2, 3))
        if len(sverts) < k:
            continue
        cand = tuple(rng.sample(sverts, k))
        image = frozenset(vmap[v] for v in cand)
        if target.simplex_with_vertices(image) is not None:
            maximal.append(cand)
    source = simplicial_complex(maximal)
    while len(source) > max_cells:
        maximal.pop()
        source = simplicial_complex(maximal)
    used = {v for m in maximal for v in m}
    return source, target, {v: vmap[v] for v in used}
