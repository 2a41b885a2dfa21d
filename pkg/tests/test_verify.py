from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from brstlab.characters import fock_character, zero
from brstlab.errors import DomainError
from brstlab.rootdata import build_root_datum
from brstlab.verify import (
    combined_status,
    delta_orbit_crosscheck,
    corollary_conj2_character,
    delta_orbit_data,
    exit_code,
    hecke_multiplicity,
    hecke_reduction_frobenius_check,
    hwa_identity_check,
    maintheorem_regroup_check,
    parse_orbit_data,
    reduction_character,
    run_deltahom,
    run_fincoh2,
    shifted_to_kappa,
)
from brstlab.weyl import AffineWeylElement, dot_affine, dot_finite, enumerate_Waff_window, weyl_group

A1, A2 = build_root_datum("A1"), build_root_datum("A2")


def kappa(d, shifted):
    return shifted_to_kappa(d, shifted)


def pi_character(d, q_max):
    zero_w = (0,) * d.rank
    total = zero(d.rank)
    for w in weyl_group(d):
        total = total + fock_character(d, dot_finite(d, w, zero_w), q_max).shift_coh(w.length)
    return total


@pytest.mark.parametrize("d", [A1, A2], ids=["A1", "A2"])
def test_trivial_a_gives_pi(d):
    ch = reduction_character(d, {(0,) * d.rank: 1}, kappa(d, -5), 3, 2)
    assert ch == pi_character(d, 3)
    assert min(ch.coh_degrees()) == 0
    assert max(ch.coh_degrees()) == weyl_group(d).longest.length
    assert ch.at_coh(0) == fock_character(d, (0,) * d.rank, 3)


def test_adjoint_multiplicities_and_empty_a():
    adjoint = {(2,): 1}
    assert [hecke_multiplicity(A1, adjoint, (l,)) for l in (-1, 0, 1)] == [1, 1, 1]
    assert hecke_multiplicity(A1, adjoint, (2,)) == 0
    assert reduction_character(A1, {}, kappa(A1, -4), 4, 2).is_zero()


def test_reduction_character_errors():
    with pytest.raises(DomainError):
        reduction_character(A1, {(0,): 1}, Fraction(-11, 2), 3, 1)
    with pytest.raises(DomainError):
        reduction_character(A1, {(0,): 1}, -6, -1, 1)


@given(st.sampled_from(["A1", "A2"]), st.data())
def test_reduction_character_is_linear(t, data):
    d = build_root_datum(t)
    dual = d.dual
    weights = st.lists(st.integers(0, 2), min_size=d.rank, max_size=d.rank).map(tuple)
    a = {data.draw(weights): data.draw(st.integers(1, 2))}
    b = {data.draw(weights): data.draw(st.integers(1, 2))}
    both = dict(a)
    for k, v in b.items():
        both[k] = both.get(k, 0) + v
    k = kappa(d, -5)
    lhs = reduction_character(d, both, k, 2, 1)
    assert lhs == reduction_character(d, a, k, 2, 1) + reduction_character(d, b, k, 2, 1)
    assert dual.rank == d.rank


def test_frobenius_tables():
    rep = hecke_reduction_frobenius_check(A1, 0, 4)
    assert rep.passed
    assert rep.witness["table"] == [{"lam": (0,), "multiplicities": [1, 0, 1, 0, 1]}]
    rep2 = hecke_reduction_frobenius_check(A2, 1, 2)
    assert rep2.passed
    chis = rep2.witness["chi_order"]
    row0 = next(r for r in rep2.witness["table"] if r["lam"] == (0, 0))
    assert row0["multiplicities"][chis.index(A2.dual.theta)] == 2
    far = hecke_reduction_frobenius_check(A1, 3, 1)
    row = next(r for r in far.witness["table"] if r["lam"] == (3,))
    assert row["multiplicities"] == [0, 0]


def test_regroup_check_a1_and_degenerate_level():
    rep = maintheorem_regroup_check(A1, kappa(A1, -4), 6, 3)
    assert rep.status == "pass"
    bad = maintheorem_regroup_check(A1, kappa(A1, -1), 6, 3)
    assert bad.status == "fail"
    assert {bad.witness["w"], bad.witness["w_prime"]} == {"e", "s1"}
    assert maintheorem_regroup_check(A1, kappa(A1, -2), 4, 2).status == "inconclusive"


def test_regroup_check_with_trivial_a():
    rep = maintheorem_regroup_check(A1, kappa(A1, -4), 4, 2, A={(0,): 1})
    assert rep.status == "pass"


def test_hwa_identity_checks():
    rep = hwa_identity_check(A1, kappa(A1, -4), 2)
    assert rep.status == "pass" and rep.witness["unit_row_ok"]
    rep2 = hwa_identity_check(A2, kappa(A2, -5), 1)
    assert rep2.status == "pass"
    assert rep2.witness["nonzero_products"] > 0
    assert hwa_identity_check(A1, kappa(A1, -1), 1).status == "fail"


def test_orbit_character_examples():
    W = weyl_group(A1)
    w = AffineWeylElement((1,), W.identity)
    k = kappa(A1, -6)
    assert corollary_conj2_character(A1, k, (3,), {}).is_zero()
    ch = corollary_conj2_character(A1, k, (3,), delta_orbit_data(w))
    (key, c), = list(ch)
    assert c == 1 and key[2] == 2 and key[0] == dot_affine(A1, w, (-3,), -6)
    v = AffineWeylElement((0,), W.by_label("s1"))
    both = corollary_conj2_character(A1, k, (3,), {w: {0: 1}, v: {0: 1}}, q_max=2, lam_window=1)
    single = (corollary_conj2_character(A1, k, (3,), {w: {0: 1}}, q_max=2, lam_window=1)
              + corollary_conj2_character(A1, k, (3,), {v: {0: 1}}, q_max=2, lam_window=1))
    assert both == single


def test_orbit_data_json_schema():
    data = {"orbits": [{"translation": [1], "finite": "e", "dims": {"0": 1, "1": 2}}]}
    parsed = parse_orbit_data(A1, data)
    (w, dims), = parsed.items()
    assert w.label == "(1;e)" and dims == {0: 1, 1: 2}


@pytest.mark.parametrize("d,shifted,chi", [(A1, -6, (3,)), (A2, -7, (2, 3))], ids=["A1", "A2"])
def test_delta_orbit_agrees_with_semidet(d, shifted, chi):
    for w in enumerate_Waff_window(d, 1):
        rep = delta_orbit_crosscheck(d, kappa(d, shifted), chi, w)
        assert rep.status == "pass", rep.witness


def test_delta_runners_with_explicit_chi():
    assert run_fincoh2("A1", chis=[(3,)]).status == "pass"
    assert run_deltahom("A2", chis=[(2, 2)], depth=12).status == "pass"


def test_status_combination():
    assert exit_code("pass") == 0 and exit_code("fail") == 1 and exit_code("inconclusive") == 2
    assert combined_status([]) == "pass"


def test_reports_are_deterministic():
    a = maintheorem_regroup_check(A2, kappa(A2, -5), 3, 1).dumps()
    b = maintheorem_regroup_check(A2, kappa(A2, -5), 3, 1).dumps()
    assert a == b
