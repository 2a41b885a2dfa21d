"""Relative dimension and determinant weight of n(K) cap w i w^-1 against n(O)."""

from brstlab import build_root_datum, verify_det_lemma
from brstlab.semidet import baseline_window, conjugated_subspace, predicted_det_dim, relative_det_dim
from brstlab.weyl import AffineWeylElement, weyl_group

a1 = build_root_datum("A1")
w = AffineWeylElement((1,), weyl_group(a1).identity)
U = conjugated_subspace(a1, w)
V = baseline_window(a1, U.depth)
print("affine roots in n(O) but not in U:", sorted(V.entries - U.entries, key=lambda e: e[1]))
print("enumerated (weight, dim):", relative_det_dim(U, V))
print("closed form (weight, dim):", predicted_det_dim(a1, w))

for t in ("A1", "A2", "B2", "G2"):
    rep = verify_det_lemma(build_root_datum(t), 3)
    print(f"{t}: {len(rep.rows)} elements, all agree: {rep.passed}")
