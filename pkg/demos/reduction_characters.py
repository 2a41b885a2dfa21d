"""Characters of BRST reductions and the two orders of summation behind their regrouping."""

from brstlab import build_root_datum
from brstlab.verify import (
    hecke_algebra_multiset,
    hwa_identity_check,
    maintheorem_regroup_check,
    reduction_character,
    shifted_to_kappa,
)

a1 = build_root_datum("A1")
kappa = shifted_to_kappa(a1, -4)
A = hecke_algebra_multiset(a1, 2)
print("A1 Hecke multiplicities (chi -> dim V_chi):", A)
ch = reduction_character(a1, A, kappa, 2, 1)
print("reduction character, q <= 2, lambda window 1:")
print(ch.to_tsv())

for shifted in (-4, -2, -1):
    rep = maintheorem_regroup_check(a1, shifted_to_kappa(a1, shifted), 6, 3)
    print(f"regrouping at kappa - kappa_c = {shifted}: {rep.status}", rep.witness.get("reason", ""))

a2 = build_root_datum("A2")
rep = hwa_identity_check(a2, shifted_to_kappa(a2, -5), 1)
print("A2 highest weight algebra, two constructions:", rep.status, rep.witness["pairs_compared"], "pairs")
