import pytest
from hypothesis import given, strategies as st

from brstlab.errors import DomainError
from brstlab.rootdata import build_root_datum, vadd
from brstlab.semidet import (
    AffineRootWindow,
    baseline_window,
    conjugated_subspace,
    predicted_det_dim,
    relative_det_dim,
    required_depth,
    translation_weight,
    verify_det_lemma,
)
from brstlab.weyl import AffineWeylElement, enumerate_Waff_window, weyl_group

A1, A2, B2, G2 = (build_root_datum(t) for t in ("A1", "A2", "B2", "G2"))


def elem(d, lam, label="e"):
    return AffineWeylElement(tuple(lam), weyl_group(d).by_label(label))


def common_windows(d, elements):
    depth = max(required_depth(d, w) for w in elements)
    return [conjugated_subspace(d, w, depth) for w in elements], depth


def test_identity_gives_baseline():
    w = elem(A1, (0,))
    U = conjugated_subspace(A1, w)
    assert U.entries == baseline_window(A1, U.depth).entries
    assert relative_det_dim(U, U) == ((0,), 0)


def test_a1_translation_window():
    w = elem(A1, (1,))
    U = conjugated_subspace(A1, w)
    alpha = A1.positive_roots[0]
    assert U.entries == frozenset((alpha, n) for n in range(2, U.depth + 1))
    V = baseline_window(A1, U.depth)
    assert relative_det_dim(U, V) == ((-4,), -2)
    assert predicted_det_dim(A1, w) == ((-4,), -2)


def test_a1_reflection_window():
    w = elem(A1, (0,), "s1")
    U = conjugated_subspace(A1, w)
    alpha = A1.positive_roots[0]
    assert U.entries == frozenset((alpha, n) for n in range(1, U.depth + 1))
    assert relative_det_dim(U, baseline_window(A1, U.depth)) == ((-2,), -1)


def test_insufficient_depth_and_incomplete_windows():
    w = elem(A1, (2,))
    with pytest.raises(DomainError):
        conjugated_subspace(A1, w, 2)
    broken = AffineRootWindow(A1, frozenset(), 3)
    with pytest.raises(DomainError):
        relative_det_dim(broken, baseline_window(A1, 3))


@pytest.mark.parametrize("d,h,count", [(A1, 3, 14), (A2, 2, None), (A2, 3, 150), (B2, 3, None), (G2, 2, None)],
                         ids=["A1", "A2h2", "A2h3", "B2", "G2"])
def test_det_lemma(d, h, count):
    rep = verify_det_lemma(d, h, stop_on_failure=False)
    assert rep.passed, rep.first_failure
    if count is not None:
        assert len(rep.rows) == count
    longest = weyl_group(d).longest
    assert any(r.element.finite == longest and any(r.element.translation) for r in rep.rows)
    ident = next(r for r in rep.rows if r.element.label.endswith(";e)") and not any(r.element.translation))
    assert ident.enumerated == ((0,) * d.rank, 0)


def test_report_formats():
    rep = verify_det_lemma(A2, 1)
    tsv = rep.to_tsv().splitlines()
    assert tsv[0] == "w\tpredicted\tenumerated\tpass"
    assert len(tsv) == len(rep.rows) + 1
    assert rep.to_json()["count"] == len(rep.rows)


@given(st.sampled_from(["A1", "A2", "B2"]), st.data())
def test_antisymmetry_and_cocycle(t, data):
    d = build_root_datum(t)
    window = enumerate_Waff_window(d, 2)
    picks = [data.draw(st.sampled_from(window)) for _ in range(3)]
    (U, V, X), _ = common_windows(d, picks)
    uv, vu = relative_det_dim(U, V), relative_det_dim(V, U)
    assert vu == (tuple(-x for x in uv[0]), -uv[1])
    vx, ux = relative_det_dim(V, X), relative_det_dim(U, X)
    assert ux == (vadd(uv[0], vx[0]), uv[1] + vx[1])


@given(st.sampled_from(["A1", "A2", "B2", "G2"]), st.data())
def test_translation_part_weight(t, data):
    d = build_root_datum(t)
    lam = tuple(data.draw(st.lists(st.integers(-2, 2), min_size=d.rank, max_size=d.rank)))
    w = elem(d, lam)
    U = conjugated_subspace(d, w)
    assert relative_det_dim(U, baseline_window(d, U.depth))[0] == translation_weight(d, lam)
