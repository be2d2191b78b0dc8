"""Choice complexes, the coset-complex isomorphism and fundamental groups.

Run: python3 demos/03_choice_complexes.py
"""
from _common import load
from graphprod.complexes import (build_choice_complex, build_restricted_complex,
                                 coset_complex_iso, covering_checks, first_betti_check,
                                 fundamental_group)

F = load("pentagon_z2").family
C = build_choice_complex(F)
D = build_restricted_complex(F)
print("choice complex:", len(C), "vertices, f-vector", C.complex.f_vector())
print("restricted:    ", len(D), "vertices, f-vector", D.complex.f_vector())
print("coset complex isomorphism:", coset_complex_iso(F).summary())

pres = fundamental_group(D.complex)
print("fundamental group:", len(pres.generators), "generators,", len(pres.relators), "relators")
print("homology:", first_betti_check(D.complex, pres))
print("covering checks:", covering_checks(F, radius=3, length=4).to_json())
