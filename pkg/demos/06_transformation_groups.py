"""Pentagon (Z4, Z2) pairs against (Z2 x Z2, Z2) pairs.

The vertex groups differ, but both act on isomorphic buildings with finite
stabilizers, and finite-index subgroups act in the same way.

Run: python3 demos/06_transformation_groups.py
"""
from _common import load
from graphprod.commensure import building_iso_only, transformation_group_scenario

inst = load("pentagon_z4_vs_klein")
print(building_iso_only(inst.family, inst.family_star, radius=3).summary())
rep = transformation_group_scenario(inst.family, inst.family_star, radius=2, sample=12)
for k, v in rep.to_json().items():
    print(f"{k}: {v}")
