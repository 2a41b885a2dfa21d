"""Cohomology of the nilradical: trivial coefficients, cup products and delta modules."""

from brstlab import build_root_datum, cohomology_trivial, cohomology_with_coefficients, cup_product
from brstlab.nilcoh import delta_module, homology_with_coefficients
from brstlab.weyl import weyl_group

a2 = build_root_datum("A2")
table = cohomology_trivial(a2)
print("H(n, C) for A2 by degree:", table.dims_by_degree())
print("classes (degree, weight):", table.classes())

W = weyl_group(a2)
print("nonzero cup products:")
for u in W:
    for v in W:
        r = cup_product(a2, u, v)
        if not r.is_zero and u.length and v.length:
            print(f"  omega_{u.label} . omega_{v.label} = {r.sign:+d} omega_{r.element.label}")

chi = (2, 2)
print(f"delta modules for chi = {chi} at truncation depth 12:")
for w in W:
    module = delta_module(a2, w, chi, 12)
    coh = cohomology_with_coefficients(module, chi)
    hom = homology_with_coefficients(module, chi)
    print(f"  {w.label:8s} cohomology {coh.classes()} [{coh.status}]  homology {hom.classes()} [{hom.status}]")
