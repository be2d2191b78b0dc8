"""Truncated buildings and the stabilizer law.

Run: python3 demos/02_buildings.py
"""
from _common import load
from graphprod.complexes import build_truncated, stabilizer_check
from graphprod.graphs import is_flag

F = load("pentagon_z2").family
for r in range(5):
    B = build_truncated(F, r)
    print(f"radius {r}: {len(B.chambers)} chambers, f-vector {B.complex.f_vector()}, "
          f"flag={is_flag(B.complex)}")

B = build_truncated(F, 3)
for text in ["a.g", "a.g b.g", "a.g c.g a.g"]:
    rep = stabilizer_check(B, F.parse(text))
    print(f"{text:14s} fixes {rep.fixed:4d} of {rep.checked} vertices, "
          f"{len(rep.counterexamples)} counterexamples")

# a tree: Z4 * Z4
T = build_truncated(load("z4_vs_klein").family, 2)
print("Z4 * Z4 radius 2:", T.fiber_counts())
