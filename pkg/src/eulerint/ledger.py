"""Ledgers: the input records consumed by the formula checkers.

A SingularLedger describes one map through the numbers the identities talk
about: global chi values, dimensions, per-stratum chi_c of the open
singularity strata, counts of finite strata, an optional mapping degree,
and optional max/min target decompositions.  A ledger makes no claim of
being truthful; the checkers are pure arithmetic over it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import LedgerDataError
from .localfiber import parse_label


@dataclass(frozen=True)
class SingularLedger:
    m: int
    n: int
    chi_M: int
    chi_N: int
    chi_f: int | None = None
    deg_f: int | None = None
    stable: bool = False
    compact: bool = False
    oriented: bool = True
    strata: Mapping[str, int] = field(default_factory=dict)
    counts: Mapping[str, int] = field(default_factory=dict)
    nmax: Mapping[int, int] | None = None
    nmin: Mapping[int, int] | None = None
    name: str = ""

    def __post_init__(self):
        if self.m < self.n:
            raise LedgerDataError("ledgers require dim M >= dim N")
        for label in list(self.strata) + list(self.counts):
            parse_label(label)
        for label, c in self.counts.items():
            if c < 0:
                raise LedgerDataError(f"negative count for {label!r}")
        dup = self.strata.keys() & self.counts.keys()
        if dup:
            raise LedgerDataError(f"labels in both strata and counts: {sorted(dup)}")
        object.__setattr__(self, "strata", dict(self.strata))
        object.__setattr__(self, "counts", dict(self.counts))
        if self.nmax is not None:
            object.__setattr__(
                self, "nmax", {int(j): int(v) for j, v in dict(self.nmax).items()}
            )
        if self.nmin is not None:
            object.__setattr__(
                self, "nmin", {int(j): int(v) for j, v in dict(self.nmin).items()}
            )

    # -- access --------------------------------------------------------------

    def singular_labels(self) -> list[str]:
        """All recorded non-regular stratum labels."""
        labels = set(self.strata) | set(self.counts)
        return sorted(l for l in labels if not l.startswith("A0"))

    def stratum_chi(self, label: str) -> int:
        """chi_c of the open stratum: explicit value, count (finite strata), or 0."""
        if label in self.strata:
            return self.strata[label]
        if label in self.counts:
            return self.counts[label]
        return 0

    def has_stratum(self, label: str) -> bool:
        return label in self.strata or label in self.counts

    def count(self, label: str) -> int:
        return self.counts.get(label, 0)

    def singular_chi_total(self) -> int:
        return sum(self.stratum_chi(l) for l in self.singular_labels())

    def regular_chi(self) -> int:
        """chi_c of the regular part: recorded A0 strata if present, else
        derived from additivity."""
        if any(self.has_stratum(l) for l in ("A0", "A0+", "A0-")):
            return sum(self.stratum_chi(l) for l in ("A0", "A0+", "A0-"))
        return self.chi_M - self.singular_chi_total()

    def a_indices(self) -> list[int]:
        ks = set()
        for label in list(self.strata) + list(self.counts):
            lab = parse_label(label)
            if lab.family == "A":
                ks.add(lab.index)
        return sorted(ks)

    def nmax_sum(self) -> int:
        if self.nmax is None:
            raise LedgerDataError("ledger lacks nmax target data")
        return sum(j * v for j, v in self.nmax.items())

    def nmin_sum(self) -> int:
        if self.nmin is None:
            raise LedgerDataError("ledger lacks nmin target data")
        return sum(j * v for j, v in self.nmin.items())

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {
            "m": self.m,
            "n": self.n,
            "chiM": self.chi_M,
            "chiN": self.chi_N,
            "stable": self.stable,
            "compact": self.compact,
            "oriented": self.oriented,
            "strata": {k: self.strata[k] for k in sorted(self.strata)},
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
        }
        if self.name:
            out["name"] = self.name
        if self.chi_f is not None:
            out["chif"] = self.chi_f
        if self.deg_f is not None:
            out["deg"] = self.deg_f
        if self.nmax is not None:
            out["nmax"] = {str(j): self.nmax[j] for j in sorted(self.nmax)}
        if self.nmin is not None:
            out["nmin"] = {str(j): self.nmin[j] for j in sorted(self.nmin)}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "SingularLedger":
        return cls(
            m=int(data["m"]),
            n=int(data["n"]),
            chi_M=int(data["chiM"]),
            chi_N=int(data["chiN"]),
            chi_f=None if data.get("chif") is None else int(data["chif"]),
            deg_f=None if data.get("deg") is None else int(data["deg"]),
            stable=bool(data.get("stable", False)),
            compact=bool(data.get("compact", False)),
            oriented=bool(data.get("oriented", True)),
            strata={str(k): int(v) for k, v in data.get("strata", {}).items()},
            counts={str(k): int(v) for k, v in data.get("counts", {}).items()},
            nmax=None
            if data.get("nmax") is None
            else {int(k): int(v) for k, v in data["nmax"].items()},
            nmin=None
            if data.get("nmin") is None
            else {int(k): int(v) for k, v in data["nmin"].items()},
            name=str(data.get("name", "")),
        )


@dataclass(frozen=True)
class LocalGermLedger:
    """Data of a map-germ (R^n,0) -> (R^p,0) and a Morin perturbation of it.

    boundary_psi maps k to the semicharacteristic of A_k of the boundary
    map; perturb_closed maps signed labels to chi of the closed strata of
    the perturbation inside the ball; perturb_counts holds #A_k counts.
    half_branches is the number of link points of the critical curve.
    """

    n: int
    p: int
    deg0: int | None = None
    psi_link: int | None = None
    chi_link: int | None = None
    half_branches: int | None = None
    boundary_psi: Mapping[int, int] = field(default_factory=dict)
    boundary_closed: Mapping[str, int] = field(default_factory=dict)
    perturb_closed: Mapping[str, int] = field(default_factory=dict)
    perturb_counts: Mapping[str, int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        for label in list(self.boundary_closed) + list(self.perturb_closed) + list(
            self.perturb_counts
        ):
            parse_label(label)
        object.__setattr__(self, "boundary_psi", dict(self.boundary_psi))
        object.__setattr__(self, "boundary_closed", dict(self.boundary_closed))
        object.__setattr__(self, "perturb_closed", dict(self.perturb_closed))
        object.__setattr__(self, "perturb_counts", dict(self.perturb_counts))

    def to_json(self) -> dict:
        out: dict = {"local": True, "n": self.n, "p": self.p}
        if self.name:
            out["name"] = self.name
        for key, val in (
            ("deg0", self.deg0),
            ("psi_link", self.psi_link),
            ("chi_link", self.chi_link),
            ("half_branches", self.half_branches),
        ):
            if val is not None:
                out[key] = val
        if self.boundary_psi:
            out["boundary_psi"] = {str(k): v for k, v in self.boundary_psi.items()}
        if self.boundary_closed:
            out["boundary_closed"] = dict(self.boundary_closed)
        if self.perturb_closed:
            out["perturb_closed"] = dict(self.perturb_closed)
        if self.perturb_counts:
            out["perturb_counts"] = dict(self.perturb_counts)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "LocalGermLedger":
        return cls(
            n=int(data["n"]),
            p=int(data["p"]),
            deg0=None if data.get("deg0") is None else int(data["deg0"]),
            psi_link=None if data.get("psi_link") is None else int(data["psi_link"]),
            chi_link=None if data.get("chi_link") is None else int(data["chi_link"]),
            half_branches=None
            if data.get("half_branches") is None
            else int(data["half_branches"]),
            boundary_psi={int(k): int(v) for k, v in data.get("boundary_psi", {}).items()},
            boundary_closed={str(k): int(v) for k, v in data.get("boundary_closed", {}).items()},
            perturb_closed={str(k): int(v) for k, v in data.get("perturb_closed", {}).items()},
            perturb_counts={str(k): int(v) for k, v in data.get("perturb_counts", {}).items()},
            name=str(data.get("name", "")),
        )


@dataclass(frozen=True)
class ComplexLedger:
    """Ledger of a holomorphic map: complex dimensions, global chi values,
    and chi_c of the closed Morin strata."""

    m: int
    n: int
    chi_M: int
    chi_N: int
    chi_f: int
    closed_chain: Mapping[int, int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "closed_chain", {int(k): int(v) for k, v in dict(self.closed_chain).items()}
        )

    def to_json(self) -> dict:
        out = {
            "complex": True,
            "m": self.m,
            "n": self.n,
            "chiM": self.chi_M,
            "chiN": self.chi_N,
            "chif": self.chi_f,
            "closed": {str(k): v for k, v in sorted(self.closed_chain.items())},
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "ComplexLedger":
        return cls(
            m=int(data["m"]),
            n=int(data["n"]),
            chi_M=int(data["chiM"]),
            chi_N=int(data["chiN"]),
            chi_f=int(data["chif"]),
            closed_chain={int(k): int(v) for k, v in data.get("closed", {}).items()},
            name=str(data.get("name", "")),
        )


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one formula check: both sides, the residual, pass/fail."""

    formula_id: str
    lhs: int
    rhs: int
    holds: bool
    residual: int
    mod2: bool = False
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "formula": self.formula_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "residual": self.residual,
        }
        if self.mod2:
            out["mod2"] = True
        if self.note:
            out["note"] = self.note
        return out


def exact_report(formula_id: str, lhs: int, rhs: int, note: str = "") -> CheckReport:
    return CheckReport(formula_id, lhs, rhs, lhs == rhs, lhs - rhs, note=note)


def mod2_report(formula_id: str, lhs: int, rhs: int, note: str = "") -> CheckReport:
    residual = (lhs - rhs) % 2
    return CheckReport(formula_id, lhs % 2, rhs % 2, residual == 0, residual,
                       mod2=True, note=note)


def ledger_from_json(data: Mapping):
    """Dispatch a JSON record to the right ledger type."""
    if data.get("local"):
        return LocalGermLedger.from_json(data)
    if data.get("complex"):
        return ComplexLedger.from_json(data)
    return SingularLedger.from_json(data)
