"""A common finite-index subgroup of Z4 * Z4 and (Z2 x Z2) * (Z2 x Z2).

Run: python3 demos/04_common_subgroup.py
"""
from _common import load
from graphprod.commensure import (CommInstance, common_subgroup, corrupt,
                                  equivariant_building_iso)

inst = load("z4_vs_klein")
ci = CommInstance(inst.family, inst.family_star, inst.H, inst.H_star)
w = common_subgroup(ci)
print("index:", w.index, "(product of vertex indices:", w.index_formula, ")")
for g, img in list(zip(w.schreier, w.schreier_star_images))[:6]:
    print(f"  {g:28s} -> {img}")

rep = equivariant_building_iso(ci, radius=4)
print("building map at radius 4:", rep.summary())

bad = equivariant_building_iso(corrupt(ci, "a"), radius=1)
print("corrupted point map:", bad.summary()["violation_count"], "violations")

raag = load("raag_vs_racg")
w = common_subgroup(CommInstance(raag.family, raag.family_star, raag.H, raag.H_star))
print("pentagon Artin group vs D_inf product: index", w.index, "with",
      len(w.schreier), "Schreier generators")
