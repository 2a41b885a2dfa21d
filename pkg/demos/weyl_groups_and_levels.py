"""Weyl groups, shifted actions and when a level counts as sufficiently negative."""

from brstlab import build_root_datum, dot_affine, dot_finite, level_predicates, weyl_group
from brstlab.weyl import AffineWeylElement, dot_orbit_collision

a2 = build_root_datum("A2")
zero = (0, 0)
print("A2 Weyl group: element, length, w.0")
for w in weyl_group(a2):
    print(f"  {w.label:8s} {w.length}  {dot_finite(a2, w, zero)}")

a1 = build_root_datum("A1")
W = weyl_group(a1)
shifted = -3
for w in (AffineWeylElement((1,), W.identity), AffineWeylElement((1,), W.by_label("s1"))):
    print(f"A1 at kappa - kappa_c = {shifted}: {w.label} . 0 = {dot_affine(a1, w, (0,), shifted)}")

# The bound is checked at several levels for chi = 2 rho.
for kappa in (-3, -5, -8, -20):
    print(f"A1, chi = 2 rho, kappa = {kappa}:", level_predicates(a1, (2,), kappa).to_json())

# At kappa - kappa_c = -1 two elements send -rho to the same weight.
print("collision at kappa - kappa_c = -1:", dot_orbit_collision(a1, (1,), -1, 3))
