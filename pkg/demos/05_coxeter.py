"""Coxeter matrices, retractions onto parabolics and linearity.

Run: python3 demos/05_coxeter.py
"""
from _common import load
from graphprod.coxeter import (INF, CoxeterMatrix, dinfty_subgroups, even_subgroup,
                               linearity_pipeline, orthoparabolic_find)

for p in (3, 5, 7):
    o = orthoparabolic_find(CoxeterMatrix.dihedral(p), ["s"])
    print(f"D_{p}: rho={o.rho}, kernel generated by {o.kernel_generators}")

print("even subgroup of D_inf:", even_subgroup(CoxeterMatrix.dihedral(INF)).to_json())
for n in range(1, 8):
    d = dinfty_subgroups(CoxeterMatrix.dihedral(INF), n)
    print(f"index {n}: generators {d.generators}, enumerated index {d.index_enumerated}")

rep = linearity_pipeline(load("pentagon_raag").family, length=4)
print("pentagon Artin group:", rep.to_json())
