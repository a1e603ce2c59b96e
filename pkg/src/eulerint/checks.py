"""Exact checkers for the Euler-characteristic identities of stable maps.

Every checker is pure arithmetic over a ledger and returns CheckReports
with named residuals.  Nothing here assumes the ledger is truthful: a
nonzero residual on honest geometry means a library bug, a nonzero
residual on made-up data means the data violates the identity.
"""

from __future__ import annotations

from .errors import BrokenChainError, DimensionError, LedgerDataError
from .ledger import (
    CheckReport,
    ComplexLedger,
    LocalGermLedger,
    SingularLedger,
    exact_report,
    mod2_report,
)
from .localfiber import (
    c_nu_mod2,
    c_nu_odd,
    degree_weight,
    nu_constants,
    parse_label,
    s_constant,
)


def _require(cond: bool, msg: str):
    if not cond:
        raise DimensionError(msg)


def _signed_pair(ledger: SingularLedger, base: str) -> tuple[int, int]:
    return ledger.stratum_chi(base + "+"), ledger.stratum_chi(base + "-")


def _total_a(ledger: SingularLedger, k: int) -> int:
    plus, minus = _signed_pair(ledger, f"A{k}")
    return plus + minus + ledger.stratum_chi(f"A{k}")


# -- odd codimension: fiber chi is single valued ------------------------------


def check_F1(ledger: SingularLedger) -> CheckReport:
    """Weighted stratum sum against chi_f * chi_c(N), odd dimension gap."""
    _require((ledger.m - ledger.n) % 2 == 1, "F1 needs an odd dimension gap")
    if ledger.chi_f is None:
        raise LedgerDataError("F1 needs the regular-fiber chi")
    lhs = ledger.regular_chi()  # c = 1 on the regular stratum
    for label in ledger.singular_labels():
        lhs += c_nu_odd(label) * ledger.stratum_chi(label)
    rhs = ledger.chi_f * ledger.chi_N
    return exact_report("F1", lhs, rhs)


def _signed_sum(ledger: SingularLedger, weight) -> int:
    """Sum weight(k)*(chi(sigma+) - chi(sigma-)) over signed genotype labels."""
    total = 0
    seen: set[tuple[str, int]] = set()
    for label in ledger.singular_labels():
        lab = parse_label(label)
        if lab.family not in ("A", "sigma") or lab.index == 0:
            continue
        w = weight(lab)
        if w is None:
            continue
        if not lab.sign:
            if w == 0:
                continue
            raise LedgerDataError(f"stratum {label!r} needs a sign split")
        if (lab.family, lab.index) in seen:
            continue
        seen.add((lab.family, lab.index))
        plus, minus = _signed_pair(ledger, f"{lab.family}{lab.index}")
        total += w * (plus - minus)
    return total


def check_F2(ledger: SingularLedger) -> CheckReport:
    """chi_c(M) - chi_f chi_c(N) against the s-weighted signed stratum sums."""
    _require((ledger.m - ledger.n) % 2 == 1, "F2 needs an odd dimension gap")
    if ledger.chi_f is None:
        raise LedgerDataError("F2 needs the regular-fiber chi")
    lhs = ledger.chi_M - ledger.chi_f * ledger.chi_N

    def weight(lab):
        return s_constant(f"{lab.family}{lab.index}+")

    return exact_report("F2", lhs, _signed_sum(ledger, weight))


def check_rmorin1(ledger: SingularLedger) -> CheckReport:
    """A_k-only form: the signed sum runs over odd k with weight 1."""
    _require((ledger.m - ledger.n) % 2 == 1, "RMorin1 needs an odd dimension gap")
    if ledger.chi_f is None:
        raise LedgerDataError("RMorin1 needs the regular-fiber chi")
    lhs = ledger.chi_M - ledger.chi_f * ledger.chi_N

    def weight(lab):
        if lab.family != "A":
            raise LedgerDataError("RMorin1 applies to A-type ledgers only")
        return lab.index % 2

    return exact_report("RMorin1", lhs, _signed_sum(ledger, weight))


def check_rmorin11(ledger: SingularLedger) -> CheckReport:
    """Curve-genotype form: weight 1 - r on sigma_r strata."""
    _require((ledger.m - ledger.n) % 2 == 1, "RMorin11 needs an odd dimension gap")
    if ledger.chi_f is None:
        raise LedgerDataError("RMorin11 needs the regular-fiber chi")
    lhs = ledger.chi_M - ledger.chi_f * ledger.chi_N

    def weight(lab):
        if lab.family != "sigma":
            raise LedgerDataError("RMorin11 applies to sigma_r ledgers only")
        return 1 - lab.index

    return exact_report("RMorin11", lhs, _signed_sum(ledger, weight))


# -- even codimension ----------------------------------------------------------


def check_mod2(ledger: SingularLedger) -> list[CheckReport]:
    """Parity form of the stratum sum, plus the closed-chain parity identity
    when the A-chain closures are derivable."""
    _require((ledger.m - ledger.n) % 2 == 0, "the parity form needs an even gap")
    if ledger.chi_f is None:
        raise LedgerDataError("the parity check needs the regular-fiber chi mod 2")
    lhs = ledger.regular_chi()
    for label in ledger.singular_labels():
        lhs += c_nu_mod2(label) * ledger.stratum_chi(label)
    reports = [mod2_report("F111", lhs, ledger.chi_f * ledger.chi_N)]
    if ledger.compact and ledger.a_indices():
        try:
            reports.append(check_thom_fukuda(ledger))
        except BrokenChainError:
            pass
    return reports


def check_thom_fukuda(ledger: SingularLedger) -> CheckReport:
    """chi(M) + sum over k >= 1 of chi(closure A_k) is even, M compact."""
    if not ledger.compact:
        raise LedgerDataError("the closed-chain parity identity needs compact M")
    closed = closure_convert(ledger)
    lhs = ledger.chi_M + sum(
        v for label, v in closed.items()
        if parse_label(label).family == "A" and not parse_label(label).sign
        and parse_label(label).index >= 1
    )
    return mod2_report("ThomFukuda", lhs, 0)


def check_rthm1C(ledger: SingularLedger) -> tuple[CheckReport, CheckReport]:
    """Extreme-fiber stratum sums against the max/min target decompositions.

    Inequalities in general; equalities when the ledger is flagged stable.
    """
    nmax_sum, nmin_sum = ledger.nmax_sum(), ledger.nmin_sum()
    lhs_max = ledger.chi_M
    lhs_min = ledger.chi_M
    for label in ledger.singular_labels():
        nu = nu_constants(label)
        lhs_max -= nu.one_minus_c_max * ledger.stratum_chi(label)
        lhs_min -= nu.one_minus_c_min * ledger.stratum_chi(label)
    if ledger.stable:
        rep_max = exact_report("RThm1C.max", lhs_max, nmax_sum, note="stable: equality")
        rep_min = exact_report("RThm1C.min", lhs_min, nmin_sum, note="stable: equality")
    else:
        rep_max = CheckReport("RThm1C.max", lhs_max, nmax_sum,
                              lhs_max >= nmax_sum, lhs_max - nmax_sum,
                              note="inequality lhs >= rhs")
        rep_min = CheckReport("RThm1C.min", lhs_min, nmin_sum,
                              lhs_min <= nmin_sum, lhs_min - nmin_sum,
                              note="inequality lhs <= rhs")
    return rep_max, rep_min


def check_rmorin2(ledger: SingularLedger) -> tuple[CheckReport, CheckReport]:
    """The two displayed A/D stratum identities for the max/min decompositions."""
    _require((ledger.m - ledger.n) % 2 == 0 and ledger.m > ledger.n,
             "RMorin2 needs a positive even dimension gap")
    rhs_max = 0
    rhs_min = 0
    for label in ledger.singular_labels():
        lab = parse_label(label)
        chi = ledger.stratum_chi(label)
        if lab.family == "A":
            k = lab.index
            if lab.sign == "+":
                rhs_max += -k * chi
                rhs_min += (k % 2) * chi
            elif lab.sign == "-":
                rhs_max += -(k % 2) * chi
                rhs_min += k * chi
            elif k % 2 == 1:
                raise LedgerDataError(f"odd stratum {label!r} needs a sign split")
            # unsigned even A_k: both weights vanish
        elif lab.family == "D":
            k = lab.index
            rhs_max += (k - 2) * chi
            rhs_min += (2 - k) * chi
            if lab.sign == "-" and k % 2 == 0:
                rhs_max += 2 * chi
                rhs_min -= 2 * chi
        else:
            raise LedgerDataError(f"RMorin2 does not cover {label!r}")
    lhs_max = ledger.chi_M - ledger.nmax_sum()
    lhs_min = ledger.chi_M - ledger.nmin_sum()
    return (
        exact_report("RMorin2.max", lhs_max, rhs_max),
        exact_report("RMorin2.min", lhs_min, rhs_min),
    )


def check_rmorin3(ledger: SingularLedger) -> list[CheckReport]:
    """Low-target-dimension forms of the max/min decompositions, including
    the averaged identities (kept doubled to stay in integers)."""
    _require((ledger.m - ledger.n) % 2 == 0 and ledger.m > ledger.n,
             "RMorin3 needs a positive even dimension gap")
    n = ledger.n
    _require(n in (1, 2, 3), "RMorin3 covers target dimensions 1, 2, 3")
    chiM = ledger.chi_M
    a1 = _total_a(ledger, 1)
    if n == 1:
        rhs_max = chiM + a1
        rhs_min = chiM - a1
        avg_sum_rhs = 2 * chiM
        avg_diff_rhs = 2 * a1
    elif n == 2:
        a2p, a2m = _signed_pair(ledger, "A2")
        a2 = _total_a(ledger, 2)
        rhs_max = chiM + a1 + 2 * a2p
        rhs_min = chiM - a1 - 2 * a2m
        avg_sum_rhs = 2 * (chiM + a2p - a2m)
        avg_diff_rhs = 2 * (a1 + a2)
    else:
        a2p, a2m = _signed_pair(ledger, "A2")
        a2 = _total_a(ledger, 2)
        a3p, a3m = _signed_pair(ledger, "A3")
        a3 = _total_a(ledger, 3)
        rhs_max = chiM + a1 + 2 * a2p + a3 + 2 * a3p
        rhs_min = chiM - a1 - 2 * a2m - a3 - 2 * a3m
        avg_sum_rhs = 2 * (chiM + a2p - a2m + a3p - a3m)
        avg_diff_rhs = 2 * (a1 + a2 + 2 * a3)
    nmax_sum, nmin_sum = ledger.nmax_sum(), ledger.nmin_sum()
    return [
        exact_report(f"RMorin3.max(n={n})", nmax_sum, rhs_max),
        exact_report(f"RMorin3.min(n={n})", nmin_sum, rhs_min),
        exact_report(f"RMorin3.avg_sum(n={n})", nmax_sum + nmin_sum, avg_sum_rhs,
                     note="both sides doubled"),
        exact_report(f"RMorin3.avg_diff(n={n})", nmax_sum - nmin_sum, avg_diff_rhs,
                     note="both sides doubled"),
    ]


# -- equal dimensions ------------------------------------------------------------


def check_degree(ledger: SingularLedger) -> list[CheckReport]:
    """Degree-weighted stratum sum against deg * chi_c(N); exact when
    oriented, parity form otherwise."""
    _require(ledger.m == ledger.n, "degree formulas need equal dimensions")
    if ledger.deg_f is None:
        raise LedgerDataError("degree checks need the mapping degree")
    for label in ledger.singular_labels():
        if parse_label(label).family == "I22" and ledger.n != 4:
            raise LedgerDataError("I22 strata only occur for n = 4")
    rhs = ledger.deg_f * ledger.chi_N
    reports = []
    if ledger.oriented:
        lhs = 0
        for label in ("A0+", "A0-"):
            lhs += degree_weight(label) * ledger.stratum_chi(label)
        for label in ledger.singular_labels():
            lhs += degree_weight(label) * ledger.stratum_chi(label)
        reports.append(exact_report("RThm1D", lhs, rhs))
    lhs2 = ledger.regular_chi()
    for label in ledger.singular_labels():
        lab = parse_label(label)
        if lab.family == "A":
            lhs2 += (1 - lab.index % 2) * ledger.stratum_chi(label)
        # odd A and both I22 types have even local degree
    reports.append(mod2_report("Degree.mod2", lhs2, rhs))
    return reports


# -- closure structure ------------------------------------------------------------


def closure_convert(ledger: SingularLedger) -> dict[str, int]:
    """chi of the closed A-strata from the open-stratum values.

    The closure of A_k is the union of the A_i for i >= k, and the signed
    closures satisfy chi(cl A_k^s) = chi_c(A_k^s) + chi_c(cl A_{k+1}).
    Requires a gap-free chain: if A_k data is present, so is A_j for every
    1 <= j <= k (record empty strata as explicit zeros).
    """
    ks = [k for k in ledger.a_indices() if k >= 1]
    out: dict[str, int] = {}
    if not ks:
        if any(ledger.has_stratum(l) for l in ("A0+", "A0-", "A0")):
            for label in ("A0+", "A0-", "A0"):
                if ledger.has_stratum(label):
                    out[label] = ledger.stratum_chi(label)
            out.setdefault("A1", 0)
        return out
    top = max(ks)
    if set(ks) != set(range(1, top + 1)):
        missing = sorted(set(range(1, top + 1)) - set(ks))
        raise BrokenChainError(f"A-chain has gaps at {missing}")
    closure_next = 0  # chi_c of the closure of A_{k+1}
    for k in range(top, 0, -1):
        total = _total_a(ledger, k)
        closed_k = total + closure_next
        out[f"A{k}"] = closed_k
        for sign in "+-":
            label = f"A{k}{sign}"
            if ledger.has_stratum(label):
                out[label] = ledger.stratum_chi(label) + closure_next
        closure_next = closed_k
    for sign in "+-":
        label = f"A0{sign}"
        if ledger.has_stratum(label):
            out[label] = ledger.stratum_chi(label) + closure_next
    if ledger.has_stratum("A0"):
        out["A0"] = ledger.stratum_chi("A0") + closure_next
    return out


def inverse_closure_convert(closed: dict[str, int]) -> dict[str, int]:
    """Open-stratum chi_c values from closed-stratum chi values (full chains)."""
    ks = sorted({parse_label(l).index for l in closed if parse_label(l).family == "A"})
    out: dict[str, int] = {}
    if not ks:
        return out
    top = max(ks)
    closure_of: dict[int, int] = {top + 1: 0}
    for k in range(top, -1, -1):
        labels = [l for l in closed if parse_label(l).index == k]
        if not labels and k == 0:
            continue
        if f"A{k}" in closed:
            closure_of[k] = closed[f"A{k}"]
        else:
            signed = [closed.get(f"A{k}{s}") for s in "+-"]
            if None in signed:
                raise BrokenChainError(f"cannot reconstruct the closure of A{k}")
            closure_of[k] = signed[0] + signed[1] - closure_of[k + 1]
        for label in labels:
            out[label] = closed[label] - closure_of[k + 1]
    return out


def check_rthm6A(ledger: SingularLedger) -> CheckReport:
    """chi(M) as the signed sum of closed odd A-strata, M compact, odd gap."""
    _require((ledger.m - ledger.n) % 2 == 1, "this identity needs an odd gap")
    if not ledger.compact:
        raise LedgerDataError("this identity needs compact M")
    closed = closure_convert(ledger)
    rhs = 0
    for k in ledger.a_indices():
        if k >= 1 and k % 2 == 1:
            if f"A{k}+" not in closed or f"A{k}-" not in closed:
                raise LedgerDataError(f"odd stratum A{k} needs a sign split")
            rhs += closed[f"A{k}+"] - closed[f"A{k}-"]
    return exact_report("RThm6A", ledger.chi_M, rhs)


def check_quine(ledger: SingularLedger) -> CheckReport:
    """(deg f) chi(N) as the signed sum of closed even A-strata, m = n."""
    _require(ledger.m == ledger.n, "the equidimensional identity needs m = n")
    if ledger.deg_f is None:
        raise LedgerDataError("this identity needs the mapping degree")
    if not ledger.compact:
        raise LedgerDataError("this identity needs compact M")
    closed = closure_convert(ledger)
    lhs = 0
    for k in sorted({parse_label(l).index for l in closed}):
        if k % 2 == 0:
            plus, minus = closed.get(f"A{k}+"), closed.get(f"A{k}-")
            if plus is None and minus is None:
                continue
            if plus is None or minus is None:
                raise LedgerDataError(f"even stratum A{k} needs a sign split")
            lhs += plus - minus
    rhs = ledger.deg_f * ledger.chi_N if ledger.deg_f else 0
    return exact_report("Quine", lhs, rhs)


# -- local versions ---------------------------------------------------------------


def _signed_closed_sum(data: dict[str, int], parity: int) -> int:
    total = 0
    ks = sorted({parse_label(l).index for l in data if parse_label(l).family == "A"})
    for k in ks:
        if k % 2 != parity:
            continue
        total += data.get(f"A{k}+", 0) - data.get(f"A{k}-", 0)
    return total


def check_local(ledger: LocalGermLedger) -> list[CheckReport]:
    """All applicable local congruences and identities for a germ ledger."""
    n, p = ledger.n, ledger.p
    reports: list[CheckReport] = []

    if n > p and ledger.psi_link is not None:
        # semicharacteristic congruence over the boundary strata
        lhs = ledger.psi_link
        rhs = 1 + ledger.perturb_counts.get(f"A{p}", 0)
        ok = True
        for k in range(1, p):
            if k in ledger.boundary_psi:
                rhs += ledger.boundary_psi[k]
            elif k == 1 and ledger.half_branches is not None:
                rhs += ledger.half_branches // 2
            else:
                ok = False
        if ok:
            reports.append(mod2_report("RThm6C", lhs, rhs))

    if n > p and (n - p) % 2 == 1 and ledger.chi_link is not None:
        if ledger.perturb_closed:
            rhs = 2 - 2 * _signed_closed_sum(dict(ledger.perturb_closed), 1)
            reports.append(exact_report("RThm6D", ledger.chi_link, rhs))
        if n % 2 == 1 and p % 2 == 0 and ledger.boundary_closed:
            rhs = 2 - _signed_closed_sum(dict(ledger.boundary_closed), 1)
            reports.append(exact_report("RThm6D.boundary", ledger.chi_link, rhs))

    if n == p and ledger.deg0 is not None:
        if ledger.perturb_closed or ledger.perturb_counts:
            data = dict(ledger.perturb_closed)
            for label, c in ledger.perturb_counts.items():
                lab = parse_label(label)
                if lab.sign:
                    data.setdefault(label, c)
            rhs = _signed_closed_sum(data, 0)
            reports.append(exact_report("RThm6E", ledger.deg0, rhs))
        if n % 2 == 1 and ledger.boundary_closed:
            rhs = _signed_closed_sum(dict(ledger.boundary_closed), 0)
            reports.append(exact_report("RThm6E.boundary", 2 * ledger.deg0, rhs))
        if n == 2 and ledger.half_branches is not None:
            rhs = 1 + ledger.half_branches // 2 + ledger.perturb_counts.get("A2", 0)
            reports.append(mod2_report("FukudaIshikawa", ledger.deg0, rhs))

    if not reports:
        raise LedgerDataError("no local identity is applicable to this ledger")
    return reports


# -- complex maps -----------------------------------------------------------------


def check_cmorin(ledger: ComplexLedger) -> CheckReport:
    """chi_c(M) + (-1)^(m-n) sum of closed Morin strata = chi_f chi_c(N),
    dimensions counted over the complex numbers."""
    total = sum(
        v for k, v in ledger.closed_chain.items() if 1 <= k <= ledger.n
    )
    lhs = ledger.chi_M + (-1) ** (ledger.m - ledger.n) * total
    return exact_report("CMorin", lhs, ledger.chi_f * ledger.chi_N)


def gaffney_mond(f_data: dict, g_data: dict) -> CheckReport:
    """Equality of cusp counts of stable perturbations of two plane-to-plane
    holomorphic germs sharing local degree and critical-curve Milnor number.

    Each argument needs keys deg0 and mu; the cusp count of a stable
    perturbation is deg0 - 2 + mu.
    """
    for data in (f_data, g_data):
        if "deg0" not in data or "mu" not in data:
            raise LedgerDataError("gaffney_mond needs deg0 and mu for both germs")
    if f_data["deg0"] != g_data["deg0"] or f_data["mu"] != g_data["mu"]:
        raise LedgerDataError(
            "gaffney_mond applies to topologically equivalent germs "
            "(equal deg0 and mu)"
        )
    lhs = f_data["deg0"] - 2 + f_data["mu"]
    rhs = g_data["deg0"] - 2 + g_data["mu"]
    return exact_report("GaffneyMond", lhs, rhs)


# -- dispatch ----------------------------------------------------------------------


def run_applicable(ledger) -> list[CheckReport]:
    """Every checker whose preconditions the ledger meets."""
    reports: list[CheckReport] = []
    if isinstance(ledger, LocalGermLedger):
        return check_local(ledger)
    if isinstance(ledger, ComplexLedger):
        return [check_cmorin(ledger)]
    gap = ledger.m - ledger.n
    has_sigma = any(
        parse_label(l).family == "sigma" for l in ledger.singular_labels()
    )
    has_a = any(parse_label(l).family == "A" for l in ledger.singular_labels())
    only = lambda fam: all(
        parse_label(l).family == fam for l in ledger.singular_labels()
    )
    if gap % 2 == 1 and ledger.chi_f is not None:
        reports.append(check_F1(ledger))
        reports.append(check_F2(ledger))
        if has_a and only("A"):
            reports.append(check_rmorin1(ledger))
        if has_sigma and only("sigma"):
            reports.append(check_rmorin11(ledger))
        if ledger.compact and has_a and not has_sigma:
            reports.append(check_rthm6A(ledger))
    if gap % 2 == 0 and ledger.chi_f is not None:
        reports.extend(check_mod2(ledger))
    if ledger.nmax is not None and ledger.nmin is not None:
        reports.extend(check_rthm1C(ledger))
        if gap % 2 == 0 and gap > 0:
            try:
                reports.extend(check_rmorin2(ledger))
            except LedgerDataError:
                pass
            if ledger.n in (1, 2, 3) and ledger.stable:
                try:
                    reports.extend(check_rmorin3(ledger))
                except LedgerDataError:
                    pass
    if ledger.m == ledger.n and ledger.deg_f is not None:
        reports.extend(check_degree(ledger))
        if ledger.compact:
            try:
                reports.append(check_quine(ledger))
            except LedgerDataError:
                pass
    return reports
