"""Exact Euler-characteristic calculus on finite complexes, with checkers
for the stable-map identities it supports and a numeric lab that mints
their input ledgers from polynomial maps and embedded surfaces."""

from .complexes import (
    Cell,
    Complex,
    ConstructibleFunction,
    DefinableSet,
    barycentric_subdivision,
    betti_mod2,
    chi_c,
    integrate,
    semicharacteristic,
    set_complement,
    set_intersect,
    set_union,
    transport_set,
)
from .pushforward import (
    SimplicialMap,
    cell_image,
    constant_pushforward_check,
    fiber_chi,
    fubini_verify,
    level_set_identity,
    pushforward,
)
from .ledger import (
    CheckReport,
    ComplexLedger,
    LocalGermLedger,
    SingularLedger,
    ledger_from_json,
)
from .localfiber import (
    NuFiberConstants,
    SigmaLedgerEntry,
    SuspensionData,
    ak_fiber_bracket,
    dk_range,
    ex1_chi,
    ex2_chi,
    nu_constants,
    point_fiber_chi,
    s_sigma,
    sphere_bundle_chi,
    suspension_fiber_chi,
)

__version__ = "0.1.0"
