"""Normal forms, presentations and the matrix cross-check.

Run: python3 demos/01_normal_forms.py
"""
from _common import load
from graphprod.coxeter import MatrixEngine, oracle_partition_check
from graphprod.words import abelianization, presentation

F = load("s3_pairs").family
print(F)
print(presentation(F).to_text())

x = F.parse("a.s2 b.s2 a.s1 b.s1")
print("normal form:", F.format(x))
print("inverse:    ", F.format(F.invert(x)))
print("projection: ", F.project(x))
print("abelianization:", abelianization(presentation(F)))

# the same elements through the Coxeter embedding and integer matrices
E = MatrixEngine(F)
print("Coxeter word of x:", " ".join(E.coxeter_word(x)))
rep = oracle_partition_check(F, length=4)
print(f"{rep['words']} words of length <= 4: {rep['normal_forms']} normal forms, "
      f"{rep['matrices']} matrices, agree={rep['agree']}")
