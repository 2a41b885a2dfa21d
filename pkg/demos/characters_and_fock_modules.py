"""Weyl characters, two multiplicity algorithms, Fock characters and the triple product."""

from brstlab import build_root_datum, fock_character, jacobi_triple_check, weight_multiplicity, weyl_character

b2 = build_root_datum("B2")
chi = (1, 1)
ch = weyl_character(b2, chi)
print(f"B2 character of V{chi}: {sum(c for _, c in ch)} weights with multiplicity")
for (mu, _, _), c in ch:
    f = weight_multiplicity(b2, chi, mu, "freudenthal")
    k = weight_multiplicity(b2, chi, mu, "kostant")
    print(f"  {mu}: Weyl formula {c}, Freudenthal {f}, Kostant {k}")

print("rank-2 Fock character up to q^5:", fock_character(build_root_datum("A2"), (0, 0), 5).to_tsv())
print("triple product to q^10:", jacobi_triple_check(10, 10).to_json())
