import numpy as np
import pytest
from hypothesis import example, given, strategies as st

from modsuper.exactlin import FieldCtx, Matrix, nilpotent_jordan
from modsuper.grading import (FieldTooSmallError, build_m, centralizer_dims_by_partition, grade_defining_space,
                              grading_for, osp_compatible_basis, verify_grading)
from modsuper.superlie import PChar, centralizer, chi_from_element, construct, root_decomposition

import oracles
from sampling import random_nilpotent


def _gl32():
    F = FieldCtx(3)
    g = construct("gl", (3, 2), ctx=F)
    X = g.coords(Matrix.from_ints(F, oracles.jordan_element(3, 2, [3], [2])))
    return g, X


def test_gl32_defining_space_degrees():
    g, X = _gl32()
    Z = grading_for(g, X)
    # columns X^2 v1, X v1, v1 | X u1, u1
    assert list(Z.v_degrees) == [2, 0, -2, 1, -1]


def test_defining_space_trivial_and_short_chain():
    F = FieldCtx(3)
    zero = nilpotent_jordan(Matrix.zero(F, 3, 3))
    empty = nilpotent_jordan(Matrix.zero(F, 0, 0))
    assert grade_defining_space(zero, empty) == [0, 0, 0]
    chain = nilpotent_jordan(Matrix.from_ints(F, [[0, 1], [0, 0]]))
    assert grade_defining_space(chain, empty) == [1, -1]


def test_gl32_entry_degree_pattern():
    g, X = _gl32()
    Z = grading_for(g, X)
    deg = list(Z.v_degrees)
    # oracle: entry (i, j) has degree deg_i - deg_j
    want = {}
    for (i, j), q in oracles.gl_basis(3, 2):
        d = deg[i] - deg[j]
        want[(d, q)] = want.get((d, q), 0) + 1
    got = {(r["degree"], q): r[("even", "odd")[q]] for r in Z.table() for q in (0, 1)
           if r[("even", "odd")[q]]}
    assert got == want
    assert sorted({d for d, _ in got}) == list(range(-4, 5))


def test_gl32_three_routes():
    g, X = _gl32()
    rep = verify_grading(g, X, grading_for(g, X))
    assert rep.ok
    (ev, od), _ = centralizer(g, chi_from_element(g, X))
    kernel = (len(ev), len(od))
    assert kernel == rep.centralizer_dim == centralizer_dims_by_partition([3], [2]) == (5, 4)
    assert oracles.centralizer_dims_gl(oracles.jordan_element(3, 2, [3], [2]), 3, 2, 3) == (5, 4)


def test_osp12_grading_from_e():
    g = construct("osp12", ctx=FieldCtx(3))
    X = g.basis_vector(g.index("e"))
    Z = grading_for(g, X)
    degs = {lab: Z.degree_of(g.basis_vector(g.index(lab))) for lab in g.labels}
    assert degs == {"e": 2, "E": 1, "h": 0, "F": -1, "f": -2}
    rep = verify_grading(g, X, Z)
    assert rep.ok and rep.centralizer_dim == (1, 1)
    assert Z.sdim(0) == (1, 0) and Z.sdim(1) == (0, 1)


def test_zero_element_gives_trivial_grading():
    for g in (construct("osp12", ctx=FieldCtx(3)), construct("gl", (2, 1), ctx=FieldCtx(5))):
        X = g.ctx.zeros(g.n)
        Z = grading_for(g, X)
        assert Z.occupied() == [0]
        assert verify_grading(g, X, Z).ok


def test_shifted_grading_is_caught():
    g = construct("osp12", ctx=FieldCtx(3))
    X = g.basis_vector(g.index("e"))
    rep = verify_grading(g, X, grading_for(g, X).shifted(1))
    assert not rep.checks["bracket_closed"]
    assert not rep.ok


def test_osp_compatible_basis_osp12():
    g = construct("osp12", ctx=FieldCtx(3))
    X = g.to_matrix(g.basis_vector(g.index("e")))
    j0, j1 = osp_compatible_basis(X, g.vform, g.v_parity)
    assert j0.partition == (1,) and j1.partition == (2,)


def test_osp32_regular_in_so3():
    g = construct("osp", (3, 2), ctx=FieldCtx(5))
    rs = root_decomposition(g)
    eps = next(a for a in rs.roots if rs.parity[a] == 0 and a[0] == 1 and not any(a[1:]))
    X = g.basis_vector(rs.spaces[eps][0])
    j0, j1 = osp_compatible_basis(g.to_matrix(X), g.vform, g.v_parity)
    assert j0.partition == (3,) and j1.partition == (1, 1)
    assert verify_grading(g, X, grading_for(g, X)).ok


def test_partition_formula():
    assert centralizer_dims_by_partition([3], [2]) == (5, 4)
    for m, n in [(2, 1), (3, 3), (4, 2)]:
        assert centralizer_dims_by_partition([1] * m, [1] * n) == (m * m + n * n, 2 * m * n)


PARTS = {4: [[4], [3, 1], [2, 2], [2, 1, 1], [1, 1, 1, 1]], 3: [[3], [2, 1], [1, 1, 1]]}


@pytest.mark.parametrize("lam", PARTS[4])
@pytest.mark.parametrize("mu", PARTS[3])
def test_partition_formula_against_kernel_gl43(lam, mu):
    F = FieldCtx(5)
    g = construct("gl", (4, 3), ctx=F)
    X = g.coords(Matrix.from_ints(F, oracles.jordan_element(4, 3, lam, mu)))
    (ev, od), _ = centralizer(g, chi_from_element(g, X))
    assert (len(ev), len(od)) == centralizer_dims_by_partition(lam, mu) == \
        oracles.centralizer_by_partition(lam, mu)


@given(st.integers(0, 10_000), st.sampled_from([3, 5, 7]),
       st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2), (2, 3), (4, 1)]))
def test_random_gl_nilpotent_properties(seed, p, dims):
    g = construct("gl", dims, ctx=FieldCtx(p))
    X = random_nilpotent(g, np.random.default_rng(seed))
    Z = grading_for(g, X)
    rep = verify_grading(g, X, Z)
    assert rep.ok, rep.checks
    Xl = g.to_matrix(X).codes().tolist()
    assert rep.centralizer_dim == oracles.centralizer_dims_gl(Xl, dims[0], dims[1], p)


@given(st.integers(0, 10_000), st.sampled_from([3, 5]),
       st.sampled_from([(1, 2), (1, 4), (2, 2), (3, 2), (4, 2), (2, 4)]))
def test_random_osp_nilpotent_properties(seed, p, dims):
    g = construct("osp", dims, ctx=FieldCtx(p))
    X = random_nilpotent(g, np.random.default_rng(seed))
    Z = grading_for(g, X)
    assert verify_grading(g, X, Z).ok


@given(st.integers(0, 10_000), st.sampled_from([("gl", (2, 2)), ("gl", (3, 1)), ("osp", (1, 4)),
                                                 ("osp", (3, 2))]))
@example(419, ("osp", (1, 4)))
def test_m_dimensions(seed, fam_dims):
    fam, dims = fam_dims
    g = construct(fam, dims, ctx=FieldCtx(3))
    X = random_nilpotent(g, np.random.default_rng(seed))
    chi = chi_from_element(g, X)
    _, kw = centralizer(g, chi)
    try:
        mp = build_m(g, grading_for(g, X), chi, seed)
    except FieldTooSmallError:
        # anisotropic odd plane over F_3: same element over F_9 (prime-field codes embed unchanged)
        F9 = FieldCtx(3, 2)
        X = F9.lift(g.ctx.codes(X))
        g = construct(fam, dims, ctx=F9)
        chi = chi_from_element(g, X)
        mp = build_m(g, grading_for(g, X), chi, seed)
    assert mp.sdim("m") == (kw.d0 // 2, kw.d1 // 2)
    assert mp.sdim("m'") == (kw.d0 // 2, -(-kw.d1 // 2))
    assert mp.reduced_dim("m'") == kw.divisor


def test_build_m_osp12():
    F = FieldCtx(3)
    g = construct("osp12", ctx=F)
    X = g.basis_vector(g.index("e"))
    mp = build_m(g, grading_for(g, X), chi_from_element(g, X))
    f, Fo = g.index("f"), g.index("F")
    span = lambda vs: sorted(int(np.flatnonzero(F.codes(v))[0]) for v in vs)
    assert all(np.count_nonzero(F.codes(v)) == 1 for v in mp.mprime_basis)
    assert span(mp.m_basis) == [f]
    assert span(mp.mprime_basis) == sorted([f, Fo])
    assert mp.r_odd == 1


def test_build_m_gl22_even_type():
    F = FieldCtx(3)
    g = construct("gl", (2, 2), ctx=F)
    X = g.coords(Matrix.from_ints(F, oracles.jordan_element(2, 2, [2], [2])))
    mp = build_m(g, grading_for(g, X), chi_from_element(g, X))
    assert mp.r_odd % 2 == 0
    assert mp.sdim("m") == mp.sdim("m'")


def test_build_m_zero_character():
    g = construct("gl", (2, 1), ctx=FieldCtx(3))
    X = g.ctx.zeros(g.n)
    mp = build_m(g, grading_for(g, X), PChar.zero(g))
    assert mp.sdim("m") == (0, 0) and mp.reduced_dim("m") == 1
