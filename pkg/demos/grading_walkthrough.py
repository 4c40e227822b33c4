"""A Dynkin grading for the even nilpotent of Jordan type (3 | 2) in gl(3|2).

We grade g by ad h for an sl2-triple through X, check the grading
properties, then build the subalgebra m and the character eta on it.
"""

from modsuper.exactlin import FieldCtx, Matrix
from modsuper.grading import build_m, centralizer_dims_by_partition, grading_for, verify_grading
from modsuper.pbw import eta_character
from modsuper.superlie import centralizer, chi_from_element, construct

F = FieldCtx(3)
g = construct("gl", (3, 2), ctx=F)

# X = one Jordan block on each side of the super vector space
rows = [[0] * 5 for _ in range(5)]
rows[0][1] = rows[1][2] = rows[3][4] = 1
X = g.coords(Matrix.from_ints(F, rows))
chi = chi_from_element(g, X)

Z = grading_for(g, X)
print("degree  even  odd")
for row in Z.table():
    print(f"{row['degree']:6d}  {row['even']:4d}  {row['odd']:4d}")

rep = verify_grading(g, X, Z)
for name, ok in rep.checks.items():
    print(f"  {name:28s} {ok}")

(even, odd), kw = centralizer(g, chi)
print("centralizer by kernel:   ", (len(even), len(odd)))
print("centralizer by partition:", centralizer_dims_by_partition([3], [2]))
print("centralizer by grading:  ", rep.centralizer_dim)
print("KW divisor:", kw.divisor)

mp = build_m(g, Z, chi)
print("sdim m =", mp.sdim("m"), " sdim m' =", mp.sdim("m'"))
eta = eta_character(g, mp.m_basis, chi, Z.degree_of)
print("eta on the basis of m:", [F.fmt(v) for v in eta])
