"""Level-curve extraction for plane polynomials on exact rational grids.

Signs of the polynomial at grid nodes are computed in integer arithmetic
(the grid is rational, so the evaluation can be cleared of denominators),
so extracted topology can only be wrong through sub-cell features.  Three
guards close that hole:

* the grid is shifted by a deterministic sub-cell offset until no node
  value is exactly zero (generic position, checked exactly);
* cells whose corner signs show nothing are run through exact interval
  arithmetic, and any cell that might still meet the curve is refined
  locally (all active cells at one shared depth, so sub-edges align)
  until every sub-cell is either certifiably empty or simple;
* `fiber_chi_stable` additionally demands that the component signature
  survive one grid doubling and one box doubling.

The interval test is sound: a cell it certifies clean contains no zero at
all, so crossings can never appear on the boundary between refined and
certified-clean cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import (
    InconclusiveError,
    InvariantViolationError,
    ResolutionExhaustedError,
    UnstableLevelError,
)
from .polymap import Poly, PolyMap, poly_eval, poly_from_terms, poly_interval

MAX_REFINE_DEPTH = 4
MAX_OFFSETS = 24
_OFFSET_DENOM = 37  # grid shifts are cell * k / 37, k = 1, 2, ...


@dataclass(frozen=True)
class Box:
    """An axis-aligned rational box in the plane."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x_lo >= self.x_hi or self.y_lo >= self.y_hi:
            raise InvariantViolationError("box must have positive widths")

    @classmethod
    def square(cls, half_width: Fraction | int | str) -> "Box":
        r = Fraction(half_width)
        return cls(-r, r, -r, r)

    def shifted(self, dx: Fraction, dy: Fraction) -> "Box":
        return Box(self.x_lo + dx, self.x_hi + dx, self.y_lo + dy, self.y_hi + dy)

    def doubled(self) -> "Box":
        cx = (self.x_lo + self.x_hi) / 2
        cy = (self.y_lo + self.y_hi) / 2
        wx = self.x_hi - self.x_lo
        wy = self.y_hi - self.y_lo
        return Box(cx - wx, cx + wx, cy - wy, cy + wy)


@dataclass(frozen=True)
class CurveComponent:
    closed: bool
    vertices: tuple[tuple[float, float], ...]

    @property
    def boundary_exits(self) -> int:
        return 0 if self.closed else 2


@dataclass(frozen=True)
class TracedCurve:
    components: tuple[CurveComponent, ...]
    grid: int
    depth: int = 0
    offset_index: int = 0

    @property
    def n_open(self) -> int:
        return sum(1 for c in self.components if not c.closed)

    @property
    def n_closed(self) -> int:
        return sum(1 for c in self.components if c.closed)

    def signature(self) -> tuple[int, int]:
        return (self.n_open, self.n_closed)

    def to_json(self) -> dict:
        return {
            "grid": self.grid,
            "refine_depth": self.depth,
            "components": [
                {
                    "closed": c.closed,
                    "boundary_exits": c.boundary_exits,
                    "vertices": [[round(x, 9), round(y, 9)] for x, y in c.vertices],
                }
                for c in self.components
            ],
        }


class _ZeroNode(Exception):
    pass


def _axis_scaling(lo: Fraction, hi: Fraction, n: int):
    """Node i sits at (A + i*B)/D with integer A, B and D > 0."""
    step = (hi - lo) / n
    D = lcm(lo.denominator, step.denominator)
    return int(lo * D), int(step * D), D


class _Tracer:
    def __init__(self, g: Poly, box: Box, n: int):
        self.g = g
        self.n = n
        self.base_box = box

    # -- exact node values -------------------------------------------------

    def _prepare(self, box: Box):
        g, n = self.g, self.n
        self.box = box
        self.Ax, self.Bx, self.Dx = _axis_scaling(box.x_lo, box.x_hi, n)
        self.Ay, self.By, self.Dy = _axis_scaling(box.y_lo, box.y_hi, n)
        self.E1 = max((e[0] for e in g), default=0)
        self.E2 = max((e[1] for e in g), default=0)
        Q = lcm(*(c.denominator for c in g.values())) if g else 1
        self.terms = [
            (e1, e2, int(c * Q) * self.Dx ** (self.E1 - e1) * self.Dy ** (self.E2 - e2))
            for (e1, e2), c in g.items()
        ]
        mx = max(abs(self.Ax), abs(self.Ax + self.Bx * n))
        my = max(abs(self.Ay), abs(self.Ay + self.By * n))
        bound = sum(abs(K) * mx ** e1 * my ** e2 for e1, e2, K in self.terms)
        self.use_int64 = bound < 2 ** 62

    def _node_values(self) -> np.ndarray:
        n = self.n
        dtype = np.int64 if self.use_int64 else object
        I = np.arange(n + 1, dtype=np.int64)
        if not self.use_int64:
            I = I.astype(object)
        X = self.Ax + self.Bx * I
        Y = self.Ay + self.By * I
        self.xpow = {0: np.ones(n + 1, dtype=dtype)}
        self.ypow = {0: np.ones(n + 1, dtype=dtype)}
        for e in range(1, self.E1 + 1):
            self.xpow[e] = self.xpow[e - 1] * X
        for e in range(1, self.E2 + 1):
            self.ypow[e] = self.ypow[e - 1] * Y
        G = np.zeros((n + 1, n + 1), dtype=dtype)
        for e1, e2, K in self.terms:
            G += K * self.xpow[e1][:, None] * self.ypow[e2][None, :]
        self.X, self.Y = X, Y
        return G

    def _cell_intervals(self, values: np.ndarray):
        """Per-cell interval enclosure of the (scaled) polynomial, vectorized."""
        n = self.n
        dtype = values.dtype
        lo = np.zeros((n, n), dtype=dtype)
        hi = np.zeros((n, n), dtype=dtype)
        axpow: dict[int, tuple] = {}
        for axis, pows, coords in (("x", self.xpow, self.X), ("y", self.ypow, self.Y)):
            for e, P in pows.items():
                a, b = P[:-1], P[1:]
                p_lo = np.minimum(a, b)
                p_hi = np.maximum(a, b)
                if e % 2 == 0 and e > 0:
                    straddle = (coords[:-1] < 0) & (coords[1:] > 0)
                    p_lo = np.where(straddle, 0, p_lo)
                axpow[(axis, e)] = (p_lo, p_hi)
        for e1, e2, K in self.terms:
            x_lo, x_hi = axpow[("x", e1)]
            y_lo, y_hi = axpow[("y", e2)]
            cands = [
                x_lo[:, None] * y_lo[None, :],
                x_lo[:, None] * y_hi[None, :],
                x_hi[:, None] * y_lo[None, :],
                x_hi[:, None] * y_hi[None, :],
            ]
            t_lo = np.minimum(np.minimum(cands[0], cands[1]),
                              np.minimum(cands[2], cands[3]))
            t_hi = np.maximum(np.maximum(cands[0], cands[1]),
                              np.maximum(cands[2], cands[3]))
            if K >= 0:
                lo += K * t_lo
                hi += K * t_hi
            else:
                lo += K * t_hi
                hi += K * t_lo
        return lo, hi

    # -- fine (refined) evaluation ------------------------------------------

    def _fine_value(self, I: int, J: int, scale: int, cache: dict) -> Fraction:
        """Exact value at virtual fine node (I, J) of the scale-times-finer grid."""
        key = (I, J)
        v = cache.get(key)
        if v is None:
            x = self.box.x_lo + Fraction(I, scale * self.n) * (self.box.x_hi - self.box.x_lo)
            y = self.box.y_lo + Fraction(J, scale * self.n) * (self.box.y_hi - self.box.y_lo)
            v = poly_eval(self.g, (x, y))
            if v == 0:
                raise _ZeroNode()
            cache[key] = v
        return v

    def _subcell_box(self, I: int, J: int, scale: int):
        wx = (self.box.x_hi - self.box.x_lo) / (scale * self.n)
        wy = (self.box.y_hi - self.box.y_lo) / (scale * self.n)
        x0 = self.box.x_lo + I * wx
        y0 = self.box.y_lo + J * wy
        return ((x0, x0 + wx), (y0, y0 + wy))

    # -- main extraction -------------------------------------------------------

    def run(self) -> TracedCurve:
        if not self.g:
            raise UnstableLevelError("the level polynomial is identically zero")
        cell_x = (self.base_box.x_hi - self.base_box.x_lo) / self.n
        cell_y = (self.base_box.y_hi - self.base_box.y_lo) / self.n
        for k in range(MAX_OFFSETS):
            shift = Fraction(k, _OFFSET_DENOM)
            box = self.base_box.shifted(cell_x * shift, cell_y * shift)
            try:
                return self._extract(box, offset_index=k)
            except _ZeroNode:
                continue
        raise UnstableLevelError(
            "could not shift the grid into generic position; the level set "
            "meets every offset grid in a node"
        )

    def _extract(self, box: Box, offset_index: int) -> TracedCurve:
        n = self.n
        self._prepare(box)
        values = self._node_values()
        if self.use_int64:
            if np.any(values == 0):
                raise _ZeroNode()
            signs = (values >= 0).astype(np.int8)
        else:
            zero_mask = np.frompyfunc(lambda v: v == 0, 1, 1)(values).astype(bool)
            if zero_mask.any():
                raise _ZeroNode()
            signs = np.frompyfunc(lambda v: 1 if v > 0 else 0, 1, 1)(values).astype(np.int8)

        diff_h = signs[:-1, :] != signs[1:, :]   # edge (i,j)-(i+1,j), shape (n, n+1)
        diff_v = signs[:, :-1] != signs[:, 1:]   # edge (i,j)-(i,j+1), shape (n+1, n)
        ncross = (
            diff_h[:, :-1].astype(np.int8)
            + diff_h[:, 1:]
            + diff_v[:-1, :]
            + diff_v[1:, :]
        )
        lo, hi = self._cell_intervals(values)
        possible = (lo <= 0) & (hi >= 0)
        suspect = possible & (ncross == 0)
        ambiguous = ncross == 4
        active_mask = (ncross > 0) | suspect
        if not suspect.any() and not ambiguous.any():
            return self._assemble_level0(values, signs, diff_h, diff_v, offset_index)
        return self._refine(values, active_mask, offset_index)

    # -- level-0 assembly ---------------------------------------------------------

    def _assemble_level0(self, values, signs, diff_h, diff_v, offset_index) -> TracedCurve:
        n = self.n
        adjacency: dict[tuple, list[tuple]] = {}
        for i, j in np.argwhere(diff_h[:, :-1] | diff_h[:, 1:] | diff_v[:-1, :] | diff_v[1:, :]):
            i, j = int(i), int(j)
            crossings = []
            if diff_h[i, j]:
                crossings.append(("H", i, j))
            if diff_h[i, j + 1]:
                crossings.append(("H", i, j + 1))
            if diff_v[i, j]:
                crossings.append(("V", i, j))
            if diff_v[i + 1, j]:
                crossings.append(("V", i + 1, j))
            a, b = crossings
            adjacency.setdefault(a, []).append(b)
            adjacency.setdefault(b, []).append(a)

        def value_at(i, j):
            return values[i, j]

        return self._assemble(adjacency, value_at, scale=1,
                              depth=0, offset_index=offset_index)

    # -- refined assembly -----------------------------------------------------------

    def _refine(self, values, active_mask, offset_index) -> TracedCurve:
        n = self.n
        active = [(int(i), int(j)) for i, j in np.argwhere(active_mask)]
        for depth in range(1, MAX_REFINE_DEPTH + 1):
            scale = 2 ** depth
            cache: dict[tuple, Fraction] = {}
            # seed the cache with the exact level-0 values
            for i, j in active:
                for di in (0, 1):
                    for dj in (0, 1):
                        cache[((i + di) * scale, (j + dj) * scale)] = Fraction(
                            int(values[i + di, j + dj])
                        ) if values.dtype != object else values[i + di, j + dj]
            # level-0 cached values are scaled by a positive constant, which
            # is harmless: only signs and ratios along edges are used, and
            # ratios only ever mix values from the same evaluation family.
            # To keep interpolation consistent we simply re-evaluate level-0
            # corners exactly instead.
            cache.clear()
            ok = True
            adjacency: dict[tuple, list[tuple]] = {}
            try:
                for i, j in active:
                    if not self._resolve_cell(i, j, scale, cache, adjacency):
                        ok = False
                        break
            except _ZeroNode:
                raise
            if ok:
                return self._assemble(
                    adjacency,
                    lambda I, J: cache[(I, J)],
                    scale=scale,
                    depth=depth,
                    offset_index=offset_index,
                )
        raise ResolutionExhaustedError(
            f"sub-cell features persist after {MAX_REFINE_DEPTH} local refinements"
        )

    def _resolve_cell(self, i, j, scale, cache, adjacency) -> bool:
        """Classify all sub-cells of one active cell at the current depth.

        Returns False if a sub-cell is ambiguous or still possibly hides the
        curve, which forces a deeper pass.
        """
        for a in range(scale):
            for b in range(scale):
                I, J = i * scale + a, j * scale + b
                v00 = self._fine_value(I, J, scale, cache)
                v10 = self._fine_value(I + 1, J, scale, cache)
                v01 = self._fine_value(I, J + 1, scale, cache)
                v11 = self._fine_value(I + 1, J + 1, scale, cache)
                crossings = []
                if (v00 > 0) != (v10 > 0):
                    crossings.append(("H", I, J))
                if (v01 > 0) != (v11 > 0):
                    crossings.append(("H", I, J + 1))
                if (v00 > 0) != (v01 > 0):
                    crossings.append(("V", I, J))
                if (v10 > 0) != (v11 > 0):
                    crossings.append(("V", I + 1, J))
                if len(crossings) == 4:
                    return False
                if len(crossings) == 2:
                    x, y = crossings
                    adjacency.setdefault(x, []).append(y)
                    adjacency.setdefault(y, []).append(x)
                elif not crossings:
                    (bx, by) = self._subcell_box(I, J, scale)
                    lo, hi = poly_interval(self.g, (bx, by))
                    if lo <= 0 <= hi:
                        return False
        return True

    # -- shared assembly -------------------------------------------------------------

    def _assemble(self, adjacency, value_at, scale, depth, offset_index) -> TracedCurve:
        n_fine = self.n * scale
        box = self.box

        def node_coord(I, J):
            x = box.x_lo + Fraction(I, n_fine) * (box.x_hi - box.x_lo)
            y = box.y_lo + Fraction(J, n_fine) * (box.y_hi - box.y_lo)
            return float(x), float(y)

        def edge_point(edge):
            kind, I, J = edge
            va = value_at(I, J)
            vb = value_at(I + 1, J) if kind == "H" else value_at(I, J + 1)
            t = float(Fraction(va, va - vb)) if va != vb else 0.5
            xa, ya = node_coord(I, J)
            xb, yb = node_coord(I + 1, J) if kind == "H" else node_coord(I, J + 1)
            return (xa + t * (xb - xa), ya + t * (yb - ya))

        def is_boundary(edge):
            kind, I, J = edge
            if kind == "H":
                return J == 0 or J == n_fine
            return I == 0 or I == n_fine

        visited: set[tuple] = set()
        components: list[CurveComponent] = []

        def walk(start, closed: bool):
            path = [start]
            visited.add(start)
            prev, cur = None, start
            while True:
                nxt = None
                for nb in adjacency[cur]:
                    if nb == prev:
                        continue
                    if closed and nb == start and len(path) > 2:
                        nxt = start
                        break
                    if nb not in visited:
                        nxt = nb
                        break
                if nxt is None or nxt == start:
                    return path
                path.append(nxt)
                visited.add(nxt)
                prev, cur = cur, nxt

        for e in sorted(e for e in adjacency if is_boundary(e)):
            if e in visited:
                continue
            path = walk(e, closed=False)
            components.append(CurveComponent(False, tuple(edge_point(p) for p in path)))
        for e in sorted(adjacency):
            if e in visited:
                continue
            path = walk(e, closed=True)
            components.append(CurveComponent(True, tuple(edge_point(p) for p in path)))
        return TracedCurve(tuple(components), self.n, depth, offset_index)


def _level_poly(f: PolyMap, t: Fraction) -> Poly:
    if f.n != 2 or f.p != 1:
        raise InvariantViolationError("plane tracing needs a map R^2 -> R")
    g = dict(f.components[0])
    zero = (0, 0)
    g[zero] = g.get(zero, Fraction(0)) - Fraction(t)
    return poly_from_terms(2, g.items())


def trace_plane_fiber(
    f: PolyMap,
    t: Fraction | int | str,
    box: Box,
    grid: int,
) -> TracedCurve:
    """Extract {f = t} inside the box by marching squares on exact signs."""
    if grid < 2:
        raise InvariantViolationError("grid must have at least 2 subdivisions")
    return _Tracer(_level_poly(f, Fraction(t)), box, grid).run()


def curve_chi_c(curve: TracedCurve) -> int:
    """chi_c of the traced 1-manifold: -1 per open component, 0 per circle."""
    return -curve.n_open


def fiber_chi_stable(
    f: PolyMap,
    t: Fraction | int | str,
    box: Box,
    grid: int,
) -> int:
    """curve_chi_c of the traced fiber, gated on stability: the component
    signature must be unchanged under one grid doubling and one box
    doubling (at fixed cell size)."""
    base = trace_plane_fiber(f, t, box, grid)
    finer = trace_plane_fiber(f, t, box, 2 * grid)
    if base.signature() != finer.signature():
        raise InconclusiveError(
            f"component signature changed under grid doubling: "
            f"{base.signature()} -> {finer.signature()}"
        )
    wider = trace_plane_fiber(f, t, box.doubled(), 2 * grid)
    if base.signature() != wider.signature():
        raise InconclusiveError(
            f"component signature changed under box doubling: "
            f"{base.signature()} -> {wider.signature()}"
        )
    return curve_chi_c(base)
