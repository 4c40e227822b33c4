"""Levi reduction for gl(2|1) with a character that is neither nilpotent
nor semisimple.

chi takes the same non-prime value c on E1_1 and E2_2 and is 1 on E2_1.  Its
semisimple part picks out a Levi subalgebra l, and parabolic induction from
l should match simples of U_chi(l) with simples of U_chi(g), scaling every
dimension by p^(even dim u) * 2^(odd dim u).
"""

from modsuper.exactlin import FieldCtx, frobenius_root
from modsuper.reduction import morita_desk_check
from modsuper.superlie import PChar, construct

F = FieldCtx(3, 2)
lam0 = next(a for a in F.elements() if not F.in_prime_field(a))
c = frobenius_root(F, F.sub(F.pow(lam0, F.p), lam0))

g = construct("gl", (2, 1), ctx=F)
chi = PChar.from_dict(g, {"E1_1": c, "E2_2": c, "E2_1": 1})
rep = morita_desk_check(g, chi)

lab = g.labels
print("l =", [lab[b] for b in rep.levi.l])
print("u =", [lab[b] for b in rep.levi.u])
print("scale =", rep.scale)
for i, j in rep.pairs:
    (dl, tl), (dg, tg) = rep.l_simples[i], rep.g_simples[j]
    print(f"  L_l dim {dl} ({tl})  ->  L_g dim {dg} ({tg})")
print("bijection with scaled dimensions:", rep.ok)
