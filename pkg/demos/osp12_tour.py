"""osp(1|2) under its three kinds of p-character.

For each prime we build U_chi for chi = 0, a regular nilpotent chi, and a
regular semisimple chi (over F_{p^2}, where the weight equation has roots),
then print the simple modules, their types and the PIM dimensions.
"""

from modsuper.cli import resolve_chi
from modsuper.exactlin import FieldCtx
from modsuper.pbw import UAlgebraCtx, reduced_dim
from modsuper.repkit import cartan_data, is_semisimple
from modsuper.superlie import construct

p = 3

for case in ("zero", "nilregular", "ssregular"):
    F = FieldCtx(p, 2 if case == "ssregular" else 1)
    g = construct("osp12", ctx=F)
    u = UAlgebraCtx(g, resolve_chi(g, case))
    cd = cartan_data(u)
    print(f"\n== chi {case} over F_{F.q}: dim U_chi = {reduced_dim(g)}")
    for c, pim, mult in zip(cd.classes, cd.pim_dims, cd.regular_multiplicity):
        print(f"  simple dim {c.dim:2d}  type {c.type}  PIM {pim:2d}  in regular module x{mult}")
    print("  semisimple:", is_semisimple(u))

# The restricted table is not semisimple: each baby Verma Z(lam) has two
# factors, L(lam) and L(p-lam-1), which coincide at the middle weight.
g = construct("osp12", ctx=FieldCtx(p))
cd = cartan_data(UAlgebraCtx(g, resolve_chi(g, "zero")), regular=False)
label = [(c.dim - 1) // 2 for c in cd.classes]
for lam, row in sorted(cd.verma_table.items()):
    factors = sorted(label[t] for t, m in enumerate(row) for _ in range(m))
    print(f"Z({int(lam[0])}) has factors L{factors}")
