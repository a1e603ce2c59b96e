"""Polynomial maps with exact rational coefficients.

A polynomial is a dict from exponent tuples to Fractions; a PolyMap is a
list of p such polynomials in n variables.  Everything downstream that
claims exactness (sign grids, winding numbers) evaluates these with
Fraction or integer arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError

Poly = dict[tuple[int, ...], Fraction]


def poly_from_terms(n: int, terms: Iterable[tuple[Sequence[int], Fraction | int | str]]) -> Poly:
    out: Poly = {}
    for exps, coeff in terms:
        exps = tuple(int(e) for e in exps)
        if len(exps) != n or any(e < 0 for e in exps):
            raise DimensionError(f"bad exponent tuple {exps} for {n} variables")
        c = Fraction(coeff)
        if c:
            out[exps] = out.get(exps, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def poly_eval(poly: Poly, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for exps, coeff in poly.items():
        term = coeff
        for x, e in zip(point, exps):
            if e:
                term *= x ** e
        total += term
    return total


def poly_eval_float(poly: Poly, point: Sequence[float]) -> float:
    total = 0.0
    for exps, coeff in poly.items():
        term = float(coeff)
        for x, e in zip(point, exps):
            if e:
                term *= x ** e
        total += term
    return total


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def poly_scale(a: Poly, s: Fraction | int) -> Poly:
    s = Fraction(s)
    return {e: c * s for e, c in a.items() if c * s}


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_scale(b, -1))


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def poly_diff(a: Poly, axis: int) -> Poly:
    out: Poly = {}
    for exps, coeff in a.items():
        e = exps[axis]
        if e:
            newexps = exps[:axis] + (e - 1,) + exps[axis + 1 :]
            out[newexps] = out.get(newexps, Fraction(0)) + coeff * e
    return {e: c for e, c in out.items() if c}


def poly_interval(poly: Poly, box: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Interval-arithmetic enclosure of the polynomial over a box."""
    lo, hi = Fraction(0), Fraction(0)
    for exps, coeff in poly.items():
        tlo, thi = coeff, coeff
        for (xlo, xhi), e in zip(box, exps):
            if not e:
                continue
            candidates = [xlo ** e, xhi ** e]
            plo, phi = min(candidates), max(candidates)
            if e % 2 == 0 and xlo < 0 < xhi:
                plo = Fraction(0)
            products = [tlo * plo, tlo * phi, thi * plo, thi * phi]
            tlo, thi = min(products), max(products)
        lo += tlo
        hi += thi
    return lo, hi


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map R^n -> R^p with exact rational coefficients."""

    n: int
    p: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.p:
            raise DimensionError("component count must equal p")
        for poly in self.components:
            for exps in poly:
                if len(exps) != self.n:
                    raise DimensionError("exponent tuple length must equal n")
        object.__setattr__(
            self,
            "components",
            tuple(dict(poly) for poly in self.components),
        )

    @classmethod
    def from_exprs(cls, n: int, terms_per_component: Sequence[Iterable]) -> "PolyMap":
        comps = tuple(poly_from_terms(n, terms) for terms in terms_per_component)
        return cls(n, len(comps), comps)

    def __call__(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        pt = tuple(Fraction(x) for x in point)
        if len(pt) != self.n:
            raise DimensionError(f"expected {self.n} coordinates")
        return tuple(poly_eval(c, pt) for c in self.components)

    def eval_float(self, point: Sequence[float]) -> list[float]:
        return [poly_eval_float(c, point) for c in self.components]

    def jacobian(self) -> list[list[Poly]]:
        return [
            [poly_diff(c, j) for j in range(self.n)] for c in self.components
        ]

    def jacobian_det(self) -> Poly:
        """Determinant of the differential (square maps, n <= 3)."""
        if self.n != self.p:
            raise DimensionError("jacobian determinant needs n = p")
        J = self.jacobian()
        if self.n == 1:
            return J[0][0]
        if self.n == 2:
            return poly_sub(poly_mul(J[0][0], J[1][1]), poly_mul(J[0][1], J[1][0]))
        if self.n == 3:
            det: Poly = {}
            for j, sign in ((0, 1), (1, -1), (2, 1)):
                cols = [c for c in range(3) if c != j]
                minor = poly_sub(
                    poly_mul(J[1][cols[0]], J[2][cols[1]]),
                    poly_mul(J[1][cols[1]], J[2][cols[0]]),
                )
                det = poly_add(det, poly_scale(poly_mul(J[0][j], minor), sign))
            return det
        raise DimensionError("jacobian determinant implemented for n <= 3")

    def gradient(self) -> "PolyMap":
        """For a scalar function (p = 1), the gradient as a square map."""
        if self.p != 1:
            raise DimensionError("gradient needs a scalar function")
        return PolyMap(
            self.n, self.n,
            tuple(poly_diff(self.components[0], j) for j in range(self.n)),
        )

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        polys = []
        for comp in self.components:
            polys.append(
                [[list(e), f"{c.numerator}/{c.denominator}"]
                 for e, c in sorted(comp.items())]
            )
        return {"n": self.n, "p": self.p, "polys": polys}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyMap":
        n, p = int(data["n"]), int(data["p"])
        comps = tuple(
            poly_from_terms(n, ((e, Fraction(str(c))) for e, c in comp))
            for comp in data["polys"]
        )
        if len(comps) != p:
            raise DimensionError("polys length disagrees with p")
        return cls(n, p, comps)


# -- the germs and fields the examples keep reaching for ----------------------


def broughton_map() -> PolyMap:
    """f(x, y) = x(xy + 1), the plane function with empty critical set whose
    fiber topology jumps at level zero."""
    return PolyMap.from_exprs(2, [[((2, 1), 1), ((1, 0), 1)]])


def tibar_zaharia_map() -> PolyMap:
    """f(x, y) = x^2 y^2 + 2xy + (y^2 - 1)^2."""
    return PolyMap.from_exprs(
        2,
        [[((2, 2), 1), ((1, 1), 2), ((0, 4), 1), ((0, 2), -2), ((0, 0), 1)]],
    )


def cusp_germ() -> PolyMap:
    """(x, y) -> (x, y^3 - xy)."""
    return PolyMap.from_exprs(2, [[((1, 0), 1)], [((0, 3), 1), ((1, 1), -1)]])


def fold_germ() -> PolyMap:
    """(x, y) -> (x, y^2)."""
    return PolyMap.from_exprs(2, [[((1, 0), 1)], [((0, 2), 1)]])


def lips_germ() -> PolyMap:
    """(x, y) -> (x, y^3 - (1 - x^2) y): a closed fold curve with two cusps."""
    return PolyMap.from_exprs(
        2, [[((1, 0), 1)], [((0, 3), 1), ((0, 1), -1), ((2, 1), 1)]]
    )


def squaring_map() -> PolyMap:
    """(x, y) -> (x^2 - y^2, 2xy), the plane squaring map of degree two."""
    return PolyMap.from_exprs(
        2, [[((2, 0), 1), ((0, 2), -1)], [((1, 1), 2)]]
    )


def perturbed_squaring_map(eps: Fraction | int | str = Fraction(1, 2)) -> PolyMap:
    """The squaring map plus eps * conjugate: a stable perturbation whose
    singular set is a fold circle carrying three cusps."""
    e = Fraction(eps)
    return PolyMap.from_exprs(
        2,
        [[((2, 0), 1), ((0, 2), -1), ((1, 0), e)],
         [((1, 1), 2), ((0, 1), -e)]],
    )
