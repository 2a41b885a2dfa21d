"""Character-level verification engines and deterministic reports.

Levels: functions taking ``kappa`` expect the absolute level; the shifted level
``kappa - kappa_c`` is derived and recorded in every report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .characters import (
    Cutoffs,
    GradedCharacter,
    dominant_weights_up_to_height,
    fock_character,
    freudenthal_multiplicity,
    kostant_multiplicity,
    weight_support,
    weyl_dimension,
    zero as zero_character,
)
from .errors import DomainError
from .hwa import check_invariants, cohomology_hwa, hwa_reduction, lattice_hwa, maintheorem_sign
from .nilcoh import (
    cohomology_trivial,
    cohomology_with_coefficients,
    cup_table,
    delta_module,
    homology_with_coefficients,
    shapiro_convert,
)
from .rootdata import RootDatum, as_exact, build_root_datum, vadd, vsub
from .semidet import baseline_window, conjugated_subspace, relative_det_dim, verify_det_lemma
from .weyl import (
    AffineWeylElement,
    congruence_collision,
    coweight_window,
    dot_affine,
    dot_finite,
    level_predicates,
    weyl_group,
)

STATUS_ORDER = {"pass": 0, "inconclusive": 2, "fail": 1}
CONVENTIONS = {
    "lattice": "simply connected: coweights in the coroot lattice (simple-coroot basis)",
    "weights": "fundamental-weight coordinates",
    "fock_normalization": "highest-weight vector at q^0",
    "coh_degree": "vacuum in degree 0; [n] shifts subtract n",
}


def _jsonable(x):
    if isinstance(x, Fraction):
        x = as_exact(x)
        return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class VerificationReport:
    theorem: str
    type_label: str
    parameters: dict
    status: str
    witness: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return _jsonable({
            "theorem": self.theorem,
            "type": self.type_label,
            "parameters": self.parameters,
            "status": self.status,
            "witness": self.witness,
            "metadata": {"conventions": CONVENTIONS, **self.metadata},
        })

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def combined_status(reports: Iterable[VerificationReport]) -> str:
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return "fail"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "pass"


def exit_code(status: str) -> int:
    return STATUS_ORDER[status]


def dumps_reports(reports: Sequence[VerificationReport]) -> str:
    return json.dumps({"status": combined_status(reports), "reports": [r.to_json() for r in reports]},
                      sort_keys=True, indent=1)


def _level_params(datum: RootDatum, kappa) -> dict:
    kappa = as_exact(kappa)
    return {"kappa": kappa, "kappa_minus_critical": as_exact(kappa - datum.critical_level)}


# ---------------------------------------------------------------------------
# Hecke multiplicities


def hecke_multiplicity(datum: RootDatum, A: Mapping[tuple, int], lam: Sequence, algorithm: str = "freudenthal") -> int:
    """dim A(lam) = sum_chi mult_A(chi) dim V_chi(lam) for representations of the dual group.

    ``A`` maps dominant weights of the dual datum to multiplicities; ``lam`` is a
    coweight in simple-coroot coordinates.
    """
    dual = datum.dual
    mu = datum.coweight_to_dual_fundamental(lam)
    mult = freudenthal_multiplicity if algorithm == "freudenthal" else kostant_multiplicity
    return sum(m * mult(dual, chi, mu) for chi, m in A.items() if m)


def hecke_algebra_multiset(datum: RootDatum, chi_cutoff: int) -> dict[tuple, int]:
    """chi -> dim V_chi over dominant chi in the coroot lattice with height <= chi_cutoff.

    These are the A^lam multiplicities of the Hecke algebra.
    """
    dual = datum.dual
    return {chi: weyl_dimension(dual, chi) for chi in dominant_weights_up_to_height(dual, chi_cutoff)
            if all(isinstance(as_exact(x), int) for x in dual.to_root_coords(chi))}


def reduction_character(
    datum: RootDatum,
    A: Mapping[tuple, int],
    kappa,
    q_max: int,
    lam_window: int,
) -> GradedCharacter:
    """sum over lam in the window and w in W of dim A(lam) pi_{w.0 - (kappa - kappa_c) lam}[-l(w)]."""
    kappa = as_exact(kappa)
    if q_max < 0 or lam_window < 0:
        raise DomainError("cutoffs must be nonnegative")
    shifted = as_exact(kappa - datum.critical_level)
    if not isinstance(kappa, int):
        raise DomainError("reduction_character needs an integral level")
    total = zero_character(datum.rank, Cutoffs(q_max, None))
    zero = (0,) * datum.rank
    W = weyl_group(datum)
    for lam in coweight_window(datum, lam_window):
        dim = hecke_multiplicity(datum, A, lam)
        if not dim:
            continue
        for w in W:
            wt = dot_affine(datum, AffineWeylElement(lam, w), zero, shifted)
            total = total + fock_character(datum, wt, q_max).scale(dim).shift_coh(w.length)
    return total


def hecke_reduction_frobenius_check(datum: RootDatum, lam_window: int, chi_cutoff: int) -> VerificationReport:
    dual = datum.dual
    chis = dominant_weights_up_to_height(dual, chi_cutoff)
    rows = []
    status = "pass"
    mismatch = None
    for lam in coweight_window(datum, lam_window):
        mu = datum.coweight_to_dual_fundamental(lam)
        col = []
        for chi in chis:
            f = freudenthal_multiplicity(dual, chi, mu)
            k = kostant_multiplicity(dual, chi, mu)
            if f != k and mismatch is None:
                status, mismatch = "fail", {"lam": lam, "chi": chi, "freudenthal": f, "kostant": k}
            col.append(f)
        rows.append({"lam": lam, "multiplicities": col})
    witness = {"chi_order": chis, "table": rows}
    if mismatch:
        witness["first_mismatch"] = mismatch
    return VerificationReport("hecke_frobenius", datum.type_label,
                              {"lam_window": lam_window, "chi_cutoff": chi_cutoff}, status, witness)


# ---------------------------------------------------------------------------
# gating


def gate(datum: RootDatum, kappa) -> tuple[str | None, dict]:
    """Distinctness of w.0 mod (kappa - kappa_c) Gamma first, then the sufficiency bound at chi = 2 rho."""
    shifted = as_exact(as_exact(kappa) - datum.critical_level)
    if shifted == 0:
        return "inconclusive", {"reason": "critical level"}
    hit = congruence_collision(datum, shifted)
    if hit is not None:
        u, v = hit
        zero = (0,) * datum.rank
        return "fail", {
            "reason": "w.0 not distinct modulo (kappa - kappa_c) Gamma",
            "w": u.label, "w_prime": v.label,
            "w_dot_0": dot_finite(datum, u, zero), "w_prime_dot_0": dot_finite(datum, v, zero),
        }
    chi = tuple(2 * x for x in datum.rho)
    preds = level_predicates(datum, chi, kappa)
    if not preds.sufficient:
        return "inconclusive", {"reason": "level not sufficiently negative", "predicates": preds.to_json()}
    return None, {"predicates": preds.to_json()}


# ---------------------------------------------------------------------------
# regrouping by Weyl cosets


def _lattice_theta(datum: RootDatum, A, shifted, lam_window: int, q_max: int) -> GradedCharacter:
    """sum_lam dim A(lam) x^{-(kappa - kappa_c) lam}, multiplicities from the Kostant formula."""
    terms = {}
    for lam in coweight_window(datum, lam_window):
        dim = hecke_multiplicity(datum, A, lam, algorithm="kostant")
        if dim:
            wt = tuple(-x for x in datum.coweight_to_weight(lam, shifted))
            terms[(wt, 0, 0)] = terms.get((wt, 0, 0), 0) + dim
    return GradedCharacter(terms, datum.rank, Cutoffs(q_max, None))


def maintheorem_regroup_check(
    datum: RootDatum,
    kappa,
    q_max: int,
    lam_window: int,
    chi_cutoff: int = 2,
    A: Mapping[tuple, int] | None = None,
) -> VerificationReport:
    params = {**_level_params(datum, kappa), "q_max": q_max, "lam_window": lam_window, "chi_cutoff": chi_cutoff}
    if A is None:
        A = hecke_algebra_multiset(datum, chi_cutoff)
    else:
        params["A"] = sorted(A.items())
    status, info = gate(datum, kappa)
    if status is not None:
        return VerificationReport("maintheorem", datum.type_label, params, status, info)
    shifted = params["kappa_minus_critical"]
    flat = reduction_character(datum, A, kappa, q_max, lam_window)
    theta = _lattice_theta(datum, A, shifted, lam_window, q_max)
    vac = fock_character(datum, (0,) * datum.rank, q_max)
    zero = (0,) * datum.rank
    grouped = zero_character(datum.rank, Cutoffs(q_max, None))
    for w in weyl_group(datum):
        grouped = grouped + (theta * vac).twist_weight(dot_finite(datum, w, zero)).shift_coh(w.length)
    witness = {"terms": len(flat), "coh_degrees": flat.coh_degrees(), **info}
    if flat != grouped:
        diff = flat - grouped
        key, val = next(iter(diff))
        witness["first_mismatch"] = {"key": list(key), "difference": val}
        return VerificationReport("maintheorem", datum.type_label, params, "fail", witness)
    return VerificationReport("maintheorem", datum.type_label, params, "pass", witness)


def _formula_chain_product(datum: RootDatum, lat, level, x, y) -> dict:
    """(a_lam (x) omega_w)(a_chi (x) omega_w') via the sign (-1)^{r(lam,chi)}, the move sign and the cup product."""
    (lam, mu), (_, wl) = x
    (chi, nu), (_, vl) = y
    W = weyl_group(datum)
    w = W.by_label(wl)
    cup = cup_table(datum)[(wl, vl)]
    if cup.is_zero:
        return {}
    sign = (-1) ** (lat.cocycle(lam, chi) % 2) * maintheorem_sign(datum, w, chi, level) * cup.sign
    zero = (0,) * datum.rank
    return {((vadd(lam, chi), dot_finite(datum, cup.element, zero)), ("x", cup.element.label)): sign}


def hwa_identity_check(datum: RootDatum, kappa, lam_window: int) -> VerificationReport:
    params = {**_level_params(datum, kappa), "lam_window": lam_window}
    status, info = gate(datum, kappa)
    if status is not None:
        return VerificationReport("hwa_identity", datum.type_label, params, status, info)
    shifted = params["kappa_minus_critical"]
    T = hwa_reduction(datum, shifted, check_radius=None)
    lat = lattice_hwa(datum, shifted)
    els = T.elements(lam_window)
    compared = 0
    nonzero = 0
    for x in els:
        for y in els:
            a = T.multiply(x, y)
            b = _formula_chain_product(datum, lat, shifted, x, y)
            compared += 1
            nonzero += bool(a)
            if a != b:
                witness = {"left": repr(x), "right": repr(y), "tensor": repr(a), "formula_chain": repr(b)}
                return VerificationReport("hwa_identity", datum.type_label, params, "fail", witness)
    unit_ok = all(T.multiply(T.unit, x) == {x: 1} == T.multiply(x, T.unit) for x in els)
    witness = {"pairs_compared": compared, "nonzero_products": nonzero, "unit_row_ok": unit_ok, **info}
    return VerificationReport("hwa_identity", datum.type_label, params, "pass" if unit_ok else "fail", witness)


# ---------------------------------------------------------------------------
# module characters from orbit data


def parse_orbit_data(datum: RootDatum, data) -> dict[AffineWeylElement, dict[int, int]]:
    """Accepts {AffineWeylElement: {deg: dim}} or the JSON schema
    ``{"orbits": [{"translation": [..], "finite": "s1s2", "dims": {"0": 1}}]}``."""
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, Mapping) and "orbits" in data:
        W = weyl_group(datum)
        out = {}
        for entry in data["orbits"]:
            w = AffineWeylElement(datum.check_weight(entry["translation"]), W.by_label(entry.get("finite", "e")))
            out[w] = {int(k): int(v) for k, v in entry["dims"].items()}
        return out
    return {w: dict(d) for w, d in data.items()}


def delta_orbit_data(w: AffineWeylElement) -> dict:
    return {w: {0: 1}}


def u_character(datum: RootDatum, mu: Sequence, shifted, q_max: int, lam_window: int = 0) -> GradedCharacter:
    """U_mu = sum over lam in the window of pi_{mu - (kappa - kappa_c) lam}."""
    out = zero_character(datum.rank, Cutoffs(q_max, None))
    for lam in coweight_window(datum, lam_window):
        out = out + fock_character(datum, vsub(mu, datum.coweight_to_weight(lam, shifted)), q_max)
    return out


def corollary_conj2_character(
    datum: RootDatum,
    kappa,
    chi: Sequence,
    orbit_data,
    q_max: int = 0,
    lam_window: int = 0,
) -> GradedCharacter:
    """sum_w U_{w.(-chi)} (x) H_w[-2 ht(lam_w) - l(wbar)]: a class of degree d lands in d + 2 ht + l."""
    shifted = as_exact(as_exact(kappa) - datum.critical_level)
    neg = tuple(-x for x in datum.check_weight(chi))
    total = zero_character(datum.rank, Cutoffs(q_max, None))
    for w, dims in sorted(parse_orbit_data(datum, orbit_data).items(), key=lambda t: t[0].label):
        base = u_character(datum, dot_affine(datum, w, neg, shifted), shifted, q_max, lam_window)
        shift = 2 * sum(w.translation) + w.finite.length
        for d, m in sorted(dims.items()):
            if m:
                total = total + base.scale(m).shift_coh(d + shift)
    return total


def delta_orbit_crosscheck(datum: RootDatum, kappa, chi: Sequence, w: AffineWeylElement) -> VerificationReport:
    """Compare the delta-orbit output with fiber weight (x) det(n(K) cap w i w^-1, n(O)) from semidet."""
    kappa = as_exact(kappa)
    shifted = as_exact(kappa - datum.critical_level)
    neg = tuple(-x for x in datum.check_weight(chi))
    U = conjugated_subspace(datum, w)
    det_wt, det_dim = relative_det_dim(U, baseline_window(datum, U.depth))
    fiber = vsub(w.finite.act(neg), datum.coweight_to_weight(w.translation, kappa))
    via_semidet = (vadd(fiber, det_wt), -det_dim)
    ch = corollary_conj2_character(datum, kappa, chi, delta_orbit_data(w))
    (wt, _, deg), = [k for k, _ in ch]
    params = {**_level_params(datum, kappa), "chi": tuple(chi), "w": w.label}
    witness = {"character": (wt, deg), "semidet": via_semidet, "dot_affine": dot_affine(datum, w, neg, shifted)}
    ok = (wt, deg) == via_semidet
    return VerificationReport("delta_orbit_character", datum.type_label, params, "pass" if ok else "fail", witness)


# ---------------------------------------------------------------------------
# runners (one per CLI subcommand)


def run_det_lemma(type_label: str, height: int = 3) -> VerificationReport:
    datum = build_root_datum(type_label)
    rep = verify_det_lemma(datum, height)
    first = rep.first_failure
    witness = {"elements": len(rep.rows)}
    if first is not None:
        witness["first_failure"] = first.to_json()
    return VerificationReport("det_lemma", datum.type_label, {"height": height},
                              "pass" if rep.passed else "fail", witness)


def run_kostant(type_label: str, chi_height: int = 6) -> VerificationReport:
    datum = build_root_datum(type_label)
    table = cohomology_trivial(datum)
    W = weyl_group(datum)
    hist: dict[int, int] = {}
    for u in W:
        hist[u.length] = hist.get(u.length, 0) + 1
    status = table.status
    witness = {"dims_by_degree": table.dims_by_degree(), "length_histogram": dict(sorted(hist.items()))}
    if table.dims_by_degree() != dict(sorted(hist.items())):
        status = "fail"
    mismatches = 0
    checked = 0
    for chi in dominant_weights_up_to_height(datum, chi_height):
        total = 0
        for mu in weight_support(datum, chi):
            f = freudenthal_multiplicity(datum, chi, mu)
            checked += 1
            if f != kostant_multiplicity(datum, chi, mu):
                mismatches += 1
            total += f
        if total != weyl_dimension(datum, chi):
            mismatches += 1
    witness.update({"multiplicities_checked": checked, "multiplicity_mismatches": mismatches})
    if mismatches:
        status = "fail"
    return VerificationReport("kostant", datum.type_label, {"chi_height": chi_height}, status, witness)


def delta_grid(datum: RootDatum, max_height: int) -> list[tuple]:
    """chi with chi - 2 rho dominant regular (so chi_i >= 2) and coordinate sum <= max_height."""
    return [c for c in dominant_weights_up_to_height(datum, max_height) if all(x >= 2 for x in c)]


def _delta_run(type_label: str, chi_height: int, depth: int, homology: bool, chis=None) -> VerificationReport:
    datum = build_root_datum(type_label)
    rows = []
    grid = delta_grid(datum, chi_height) if chis is None else [datum.check_weight(c) for c in chis]
    for chi in grid:
        for w in weyl_group(datum):
            module = delta_module(datum, w, chi, depth)
            coh = cohomology_with_coefficients(module, chi)
            row = {"chi": chi, "w": w.label, "cohomology": coh.status, "classes": coh.classes()}
            if homology:
                hom = homology_with_coefficients(module, chi)
                row["homology"] = hom.status
                row["homology_classes"] = hom.classes()
                consistent = [shapiro_convert(datum, c) for c in coh.classes()] == hom.classes()
                row["shapiro_consistent"] = consistent
                row["status"] = _worst([coh.status, hom.status, "pass" if consistent else "fail"])
            else:
                row["status"] = coh.status
            rows.append(row)
    status = _worst([r["status"] for r in rows]) if rows else "inconclusive"
    name = "deltahom" if homology else "fincoh2"
    return VerificationReport(name, datum.type_label, {"chi_height": chi_height, "depth": depth}, status,
                              {"rows": rows})


def _worst(statuses: Iterable[str]) -> str:
    statuses = set(statuses)
    for s in ("fail", "inconclusive"):
        if s in statuses:
            return s
    return "pass"


def run_fincoh2(type_label: str, chi_height: int = 4, depth: int = 12, chis=None) -> VerificationReport:
    return _delta_run(type_label, chi_height, depth, homology=False, chis=chis)


def run_deltahom(type_label: str, chi_height: int = 4, depth: int = 12, chis=None) -> VerificationReport:
    return _delta_run(type_label, chi_height, depth, homology=True, chis=chis)


def run_generalbrst(type_label: str, kappa, q_max: int = 4, height: int = 2) -> VerificationReport:
    """Trivial-A character equals Pi's character; linearity in A; both multiplicity algorithms agree."""
    datum = build_root_datum(type_label)
    zero = (0,) * datum.rank
    params = {**_level_params(datum, kappa), "q_max": q_max, "lam_window": height}
    trivial = {(0,) * datum.rank: 1}
    ch = reduction_character(datum, trivial, kappa, q_max, height)
    pi = zero_character(datum.rank, Cutoffs(q_max, None))
    for w in weyl_group(datum):
        pi = pi + fock_character(datum, dot_finite(datum, w, zero), q_max).shift_coh(w.length)
    adjoint = {datum.dual.theta: 1}
    both = {**trivial, **adjoint}
    linear = reduction_character(datum, both, kappa, q_max, height) == (
        ch + reduction_character(datum, adjoint, kappa, q_max, height))
    frob = hecke_reduction_frobenius_check(datum, height, 4)
    ok = ch == pi and linear and frob.passed
    witness = {
        "trivial_equals_pi": ch == pi,
        "linearity": linear,
        "frobenius": frob.status,
        "lowest_degree": min(ch.coh_degrees()),
        "top_degree": max(ch.coh_degrees()),
    }
    return VerificationReport("generalbrst", datum.type_label, params, "pass" if ok else "fail", witness)


def run_maintheorem(type_label: str, kappa, q_max: int = 6, height: int = 3, chi_cutoff: int = 2) -> VerificationReport:
    datum = build_root_datum(type_label)
    return maintheorem_regroup_check(datum, kappa, q_max, height, chi_cutoff)


def run_hwa(type_label: str, kappa, height: int = 1, invariant_radius: int = 1) -> VerificationReport:
    datum = build_root_datum(type_label)
    rep = hwa_identity_check(datum, kappa, height)
    if rep.status != "pass":
        return rep
    shifted = as_exact(as_exact(kappa) - datum.critical_level)
    inv = {}
    for name, alg in (("lattice", lattice_hwa(datum, shifted)), ("cohomology", cohomology_hwa(datum, shifted)),
                      ("tensor", hwa_reduction(datum, shifted, check_radius=None))):
        r = check_invariants(alg, invariant_radius)
        inv[name] = r.passed
    rep.witness["invariants"] = inv
    rep.parameters["invariant_radius"] = invariant_radius
    if not all(inv.values()):
        rep.status = "fail"
    return rep


def shifted_to_kappa(datum: RootDatum, shifted) -> int | Fraction:
    return as_exact(as_exact(shifted) + datum.critical_level)


def run_all() -> list[VerificationReport]:
    """The acceptance configuration, in a fixed order."""
    A1, A2 = build_root_datum("A1"), build_root_datum("A2")
    reports = []
    for t in ("A1", "A2", "B2"):
        reports.append(run_det_lemma(t, 3))
    for t in ("A1", "A2", "B2", "A3"):
        reports.append(run_kostant(t, 6 if t != "A3" else 3))
    for t in ("A1", "A2"):
        reports.append(run_fincoh2(t, 4, 12))
        reports.append(run_deltahom(t, 4, 12))
    reports.append(run_generalbrst("A1", shifted_to_kappa(A1, -4), 4, 2))
    reports.append(run_generalbrst("A2", shifted_to_kappa(A2, -5), 3, 1))
    reports.append(run_maintheorem("A1", shifted_to_kappa(A1, -4), 6, 3))
    reports.append(run_maintheorem("A2", shifted_to_kappa(A2, -5), 4, 2))
    reports.append(run_maintheorem("A1", shifted_to_kappa(A1, -1), 6, 3))
    reports.append(run_hwa("A1", shifted_to_kappa(A1, -4), 2))
    reports.append(run_hwa("A2", shifted_to_kappa(A2, -5), 1))
    return reports
