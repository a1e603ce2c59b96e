"""Euler characteristics of local generic fibers of stable map-germs.

A stable germ is a versal unfolding of a genotype g plus a quadratic form
Q(z) = z_1^2+...+z_a^2 - z_{a+1}^2-...-z_{a+b}^2.  Everything a formula
checker needs about such a germ reduces to the four parity classes of
(a, b) and the chi_c data of the genotype's nearby sets B, B+, B-, B0.
This module holds that arithmetic: the sphere-bundle lemma, the point-fiber
table, the suspended-fiber formulas, the s constants, the A_k brackets,
the D_k smoothing ranges, and the extreme-fiber constants used by the
max/min target decompositions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import InvariantViolationError, LedgerDataError, UnknownTypeError

# The suspension sign convention: a genotype suspended with b negative
# squares is tagged "+" when b is even.  The choice is arbitrary but must
# be applied consistently; flip it here to flip it everywhere.
_PLUS_IS_EVEN_B = True


def set_plus_is_even_b(flag: bool) -> None:
    global _PLUS_IS_EVEN_B
    _PLUS_IS_EVEN_B = bool(flag)


def suspension_sign(b: int) -> str:
    return "+" if (b % 2 == 0) == _PLUS_IS_EVEN_B else "-"


def sphere_bundle_chi(p: int, chi_Y: int) -> int:
    """chi_c of a sphere bundle: (1 - (-1)**p) * chi_c(base)."""
    if p < 1:
        raise InvariantViolationError("sphere dimension parameter p must be >= 1")
    return (1 - (-1) ** p) * chi_Y


def ex1_chi(p: int, q: int) -> int:
    """chi_c of {sum x_i^2 = sum y_j^2 + 1}: (-1)**q - (-1)**(p+q)."""
    if p < 1 or q < 0:
        raise InvariantViolationError("need p >= 1 and q >= 0")
    return (-1) ** q - (-1) ** (p + q)


def ex2_chi(p: int, q: int) -> int:
    """chi_c of the cone {sum x_i^2 = sum y_j^2}: (-1)**p + (-1)**q - (-1)**(p+q)."""
    if p < 1 or q < 1:
        raise InvariantViolationError("need p >= 1 and q >= 1")
    return (-1) ** p + (-1) ** q - (-1) ** (p + q)


_REGIONS = ("plus", "minus", "zero")


def point_fiber_chi(a: int, b: int, region: str) -> int:
    """chi_c of the Q-fiber over a single base point, by region.

    Over a point with g > eps the fiber is {Q = negative}, over g < eps it
    is {Q = positive}, and over g = eps it is the cone {Q = 0}; the three
    values are (-1)^a - (-1)^(a+b), (-1)^b - (-1)^(a+b) and
    (-1)^a + (-1)^b - (-1)^(a+b).
    """
    if a < 0 or b < 0:
        raise InvariantViolationError("square counts must be non-negative")
    if region not in _REGIONS:
        raise InvariantViolationError(f"region must be one of {_REGIONS}")
    sa, sb, sab = (-1) ** a, (-1) ** b, (-1) ** (a + b)
    if region == "plus":
        return sa - sab
    if region == "minus":
        return sb - sab
    return sa + sb - sab


@dataclass(frozen=True)
class SuspensionData:
    """Genotype-side chi data for a quadratic suspension with a,b squares.

    m is the dimension of the nonsingular base set B; chi data must satisfy
    chi(B+) + chi(B-) + chi(B0) = chi(B).
    """

    a: int
    b: int
    m: int
    chi_B: int
    chi_Bplus: int
    chi_Bminus: int
    chi_B0: int

    def __post_init__(self):
        if min(self.a, self.b, self.m) < 0:
            raise InvariantViolationError("a, b, m must be non-negative")
        if self.chi_Bplus + self.chi_Bminus + self.chi_B0 != self.chi_B:
            raise InvariantViolationError(
                "chi(B+) + chi(B-) + chi(B0) must equal chi(B)"
            )


def suspension_fiber_chi(d: SuspensionData) -> int:
    """chi_c of the local generic fiber of the suspended germ (4 parity cases)."""
    a_even, b_even = d.a % 2 == 0, d.b % 2 == 0
    if a_even and b_even:
        return d.chi_B0
    if a_even:
        return d.chi_B + d.chi_Bplus - d.chi_Bminus
    if b_even:
        return d.chi_B - d.chi_Bplus + d.chi_Bminus
    return -2 * d.chi_B - d.chi_B0


@dataclass(frozen=True)
class SigmaLedgerEntry:
    """The s-type constant of a genotype: a single s when the suspended
    fiber dimension is odd, or an (s_max, s_min) pair when it is even."""

    name: str
    parity: int  # (m + a + b) mod 2
    s: int | None = None
    s_max: int | None = None
    s_min: int | None = None

    def to_json(self) -> dict:
        if self.s is not None:
            return {"type": self.name, "s": self.s}
        return {"type": self.name, "s_max": self.s_max, "s_min": self.s_min}


def s_sigma(
    d: SuspensionData,
    attainable: Iterable[int] | None = None,
    name: str = "sigma",
) -> SigmaLedgerEntry:
    """The s constant of a genotype from its suspension data.

    Even parity of m+a+b: s = 1 + chi_c(F), which reduces to
    chi(B-) - chi(B+) for m odd and 1 + chi(B0) for m even.  Odd parity:
    the fiber chi depends on the smoothing, and the caller must supply the
    attainable set (of chi(B0) values for m odd, of chi(B+)-chi(B-) values
    for m even); s_max = 1 - max chi_c(F) and s_min = 1 - min chi_c(F).
    """
    parity = (d.m + d.a + d.b) % 2
    if parity == 0:
        if d.m % 2 == 1:
            s = d.chi_Bminus - d.chi_Bplus
        else:
            s = 1 + d.chi_B0
        return SigmaLedgerEntry(name, 0, s=s)
    if attainable is None:
        raise LedgerDataError(
            "odd-parity s constants need the attainable chi value set"
        )
    values = sorted(set(attainable))
    if not values:
        raise LedgerDataError("attainable set must be non-empty")
    if d.m % 2 == 1:
        # values are attainable chi(B0)
        s_max = 1 - max(values)
        s_min = 1 - min(values)
    else:
        # values are attainable chi(B+) - chi(B-)
        s_max = min(values)
        s_min = max(values)
    return SigmaLedgerEntry(name, 1, s_max=s_max, s_min=s_min)


def ak_fiber_bracket(k: int, a: int, b: int, root_count: int) -> int:
    """1 - (-1)**(a+b) * chi_c(F) for the one-variable A_k genotype family.

    root_count is the number of real solutions of the perturbed polynomial
    at the chosen level (relevant only in the (a even, b even) and
    (a odd, b odd) cases).
    """
    if k < 1:
        raise InvariantViolationError("k must be >= 1")
    if root_count < 0:
        raise InvariantViolationError("root_count must be >= 0")
    a_even, b_even = a % 2 == 0, b % 2 == 0
    if a_even and b_even:
        return 1 - root_count
    if not a_even and not b_even:
        return root_count - 1
    if k % 2 == 0:
        return 0
    return -1 if a_even else 1


_DK_VARIANTS = ("minus_3branch", "plus_1branch", "odd")


def dk_range(k: int, variant: str) -> set[int]:
    """Attainable chi(B+) - chi(B-) values over the smoothings of a D_k curve germ.

    Three families: the even-k three-branch germ sweeps -k..k in steps of
    2; the even-k one-branch germ and the odd-k germ both sweep 2-k..k-2.
    """
    if variant not in _DK_VARIANTS:
        raise UnknownTypeError(f"variant must be one of {_DK_VARIANTS}")
    if variant == "odd":
        if k < 5 or k % 2 == 0:
            raise InvariantViolationError("odd variant needs odd k >= 5")
        return set(range(2 - k, k - 1, 2))
    if k < 4 or k % 2 == 1:
        raise InvariantViolationError(f"variant {variant!r} needs even k >= 4")
    if variant == "minus_3branch":
        return set(range(-k, k + 1, 2))
    return set(range(2 - k, k - 1, 2))


@dataclass(frozen=True)
class NuFiberConstants:
    """Extremes of the local generic fiber chi of a singularity type,
    stored as 1 - c_max and 1 - c_min (the weights the target
    decomposition formulas use)."""

    type: str
    one_minus_c_max: int
    one_minus_c_min: int

    @property
    def c_max(self) -> int:
        return 1 - self.one_minus_c_max

    @property
    def c_min(self) -> int:
        return 1 - self.one_minus_c_min


_LABEL_RE = re.compile(r"^(A|D|sigma|I22)(\d*)([+-]?)$")


@dataclass(frozen=True)
class StratumLabel:
    family: str  # "A" | "D" | "sigma" | "I22"
    index: int  # k for A/D, r for sigma, 0 for I22
    sign: str  # "+", "-", or ""

    def __str__(self) -> str:
        idx = "" if self.family == "I22" else str(self.index)
        return f"{self.family}{idx}{self.sign}"


def parse_label(label: str) -> StratumLabel:
    m = _LABEL_RE.match(label)
    if not m:
        raise UnknownTypeError(f"unknown stratum label {label!r}")
    family, idx, sign = m.groups()
    if family == "I22":
        if idx:
            raise UnknownTypeError(f"unknown stratum label {label!r}")
        if not sign:
            raise UnknownTypeError("I22 strata must carry a sign")
        return StratumLabel("I22", 0, sign)
    if not idx:
        raise UnknownTypeError(f"label {label!r} lacks an index")
    k = int(idx)
    if family == "A":
        if k < 0:
            raise UnknownTypeError(f"bad A index in {label!r}")
    elif family == "D":
        if k < 4:
            raise UnknownTypeError("D types start at k = 4")
        if k % 2 == 0 and not sign:
            raise UnknownTypeError(f"even D type {label!r} must carry a sign")
        if k % 2 == 1 and sign:
            raise UnknownTypeError(f"odd D type {label!r} carries no sign")
    elif family == "sigma":
        if k < 0:
            raise UnknownTypeError(f"bad branch count in {label!r}")
        if not sign:
            raise UnknownTypeError(f"sigma type {label!r} must carry a sign")
    return StratumLabel(family, k, sign)


def nu_constants(label: str) -> NuFiberConstants:
    """The (1 - c_max, 1 - c_min) pair of an A_k / D_k singularity type."""
    lab = parse_label(label)
    k = lab.index
    if lab.family == "A":
        if k == 0:
            return NuFiberConstants(label, 0, 0)  # regular points
        if not lab.sign:
            raise UnknownTypeError(f"A type {label!r} needs a sign for extremes")
        if lab.sign == "+":
            return NuFiberConstants(label, -k, 1 if k % 2 else 0)
        return NuFiberConstants(label, -1 if k % 2 else 0, k)
    if lab.family == "D":
        if k % 2 == 1:
            return NuFiberConstants(label, k - 2, 2 - k)
        if lab.sign == "-":
            return NuFiberConstants(label, k, -k)
        return NuFiberConstants(label, k - 2, 2 - k)
    raise UnknownTypeError(f"no fiber-extreme constants for {label!r}")


def s_constant(label: str) -> int:
    """The s weight of a signed genotype stratum, for odd source-target
    codimension: s = k mod 2 for A_k, s = 1 - r for sigma_r."""
    lab = parse_label(label)
    if lab.family == "A":
        if lab.index == 0:
            return 0
        return lab.index % 2
    if lab.family == "sigma":
        return 1 - lab.index
    raise UnknownTypeError(
        f"no s constant for {label!r}; relabel D strata as sigma_r types"
    )


def c_nu_odd(label: str) -> int:
    """chi of the local generic fiber (closed ball) of a stratum type when
    the source-target dimension gap is odd.  Signed via 1-c(+) = s and
    1-c(-) = -s."""
    lab = parse_label(label)
    if lab.family == "A" and lab.index == 0:
        return 1
    if lab.family in ("A", "sigma"):
        if not lab.sign:
            if lab.family == "A" and lab.index % 2 == 0:
                return 1  # both signs share c = 1 when s = 0
            raise LedgerDataError(f"stratum {label!r} needs a sign split")
        s = s_constant(f"{lab.family}{lab.index}+")
        return 1 - s if lab.sign == "+" else 1 + s
    raise UnknownTypeError(f"no odd-case fiber chi for {label!r}")


def c_nu_mod2(label: str) -> int:
    """Mod-2 class of the local generic fiber chi (even dimension gap)."""
    lab = parse_label(label)
    if lab.family in ("A", "D"):
        if lab.family == "A" and lab.index == 0:
            return 1
        return (lab.index + 1) % 2
    if lab.family == "I22":
        return 0
    if lab.family == "sigma":
        # local fiber of a curve-genotype suspension: c = r mod 2
        return lab.index % 2
    raise UnknownTypeError(label)


def degree_weight(label: str) -> int:
    """Local mapping degree of a stratum type for equidimensional maps:
    +-1 on even A_k by sign, 0 on odd A_k, 2 on I22-, 0 on I22+."""
    lab = parse_label(label)
    if lab.family == "A":
        if lab.index % 2 == 1:
            return 0
        if not lab.sign:
            raise LedgerDataError(f"even A stratum {label!r} needs a degree sign")
        return 1 if lab.sign == "+" else -1
    if lab.family == "I22":
        return 2 if lab.sign == "-" else 0
    raise UnknownTypeError(f"no degree weight for {label!r}")
