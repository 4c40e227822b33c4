import numpy as np
import pytest
from hypothesis import given, strategies as st

from modsuper.exactlin import FieldCtx, frobenius_root
from modsuper.grading import build_m, grading_for
from modsuper.pbw import (DimensionBoundError, ModuleRep, UAlgebraCtx, baby_verma, borel_data,
                          eta_character, induced_module, lambda_set, multiply, normal_form,
                          one_dim_module, osp12_verma_closed_form, reduced_dim, regular_module)
from modsuper.reduction import subalgebra
from modsuper.repkit import adapted_algebra, endo_superalgebra, is_simple
from modsuper.superlie import PChar, chi_from_element, construct


def _osp12(p=3, chi=None, k=1):
    g = construct("osp12", ctx=FieldCtx(p, k))
    chi = PChar.zero(g) if chi is None else PChar.from_dict(g, chi)
    return g, UAlgebraCtx(g, chi)


def _mono(u, label, e=1):
    m = [0] * u.n
    m[u.pos[u.g.index(label)]] = e
    return tuple(m)


def test_normal_form_examples():
    g, u = _osp12(3)
    assert normal_form(u, ["E", "E"]) == {_mono(u, "e"): 1}
    assert normal_form(u, ["h", "h", "h"]) == normal_form(u, ["h"])
    assert normal_form(u, ["e"] * 3) == {}
    # f e = e f - h
    fe = normal_form(u, ["f", "e"])
    ef = normal_form(u, ["e", "f"])
    assert len(ef) == 1 and len(fe) == 2
    assert fe[_mono(u, "h")] == u.ctx.neg(1)


def test_commuting_even_generators_reorder():
    g = construct("torus", 2, ctx=FieldCtx(5))
    u = UAlgebraCtx(g, PChar.zero(g))
    a, b = normal_form(u, [1, 0]), normal_form(u, [0, 1])
    assert a == b and len(a) == 1 and list(a.values()) == [1]


@given(st.integers(0, 10_000), st.sampled_from([3, 5]))
def test_associativity_and_super_commutator(seed, p):
    g, u = _osp12(p, {"f": 1})
    rng = np.random.default_rng(seed)
    word = [int(x) for x in rng.integers(0, g.n, size=int(rng.integers(2, 7)))]
    assert multiply(u, word, True) == multiply(u, word, False)
    i, j = word[0], word[1]
    sign = -1 if g.parity[i] and g.parity[j] else 1
    lhs = normal_form(u, [i, j])
    for m, c in normal_form(u, [j, i]).items():
        lhs[m] = u.ctx.sub(lhs.get(m, 0), u.ctx.mul(u.ctx.embed(sign % p), c))
    br = g.bracket(g.basis_vector(i), g.basis_vector(j))
    rhs = {}
    for b in np.flatnonzero(u.ctx.codes(br)):
        for m, c in normal_form(u, [int(b)]).items():
            rhs[m] = u.ctx.add(rhs.get(m, 0), u.ctx.mul(int(u.ctx.codes(br)[b]), c))
    clean = lambda d: {m: c for m, c in d.items() if c}
    assert clean(lhs) == clean(rhs)


def test_reduced_dims():
    assert reduced_dim(construct("osp12", ctx=FieldCtx(3))) == 108
    assert reduced_dim(construct("osp12", ctx=FieldCtx(5))) == 500
    for p in (3, 5, 7):
        assert reduced_dim(construct("sl11", ctx=FieldCtx(p))) == 4 * p
        assert reduced_dim(construct("torus", 1, ctx=FieldCtx(p))) == p


def test_lambda_sets():
    for p in (3, 5):
        g = construct("torus", 1, ctx=FieldCtx(p))
        u = UAlgebraCtx(g, PChar.zero(g))
        assert sorted(s[0] for s in lambda_set(u, [0]).solutions) == list(range(p))
        g2 = construct("torus", 2, ctx=FieldCtx(p))
        assert len(lambda_set(UAlgebraCtx(g2, PChar.zero(g2)), [0, 1])) == p * p


def test_lambda_set_regular_semisimple_f9():
    F = FieldCtx(3, 2)
    lam0 = next(a for a in F.elements() if not F.in_prime_field(a))
    c = frobenius_root(F, F.sub(F.pow(lam0, 3), lam0))
    g = construct("osp12", ctx=F)
    u = UAlgebraCtx(g, PChar.from_dict(g, {"h": c}))
    got = sorted(s[0] for s in lambda_set(u, [g.index("h")]).solutions)
    # exhaustive oracle over F_9
    want = sorted(x for x in F.elements() if F.sub(F.pow(x, 3), x) == F.pow(c, 3))
    assert got == want == sorted(F.add(lam0, t) for t in range(3))


def test_induced_from_everything_is_w():
    g, u = _osp12(3)
    sub = list(range(g.n))
    W = one_dim_module(g, sub, [0] * g.n, 0, u.chi)
    M = induced_module(u, sub, W)
    assert M.dim == 1 and not M.action.any()


def test_mprime_over_m_is_two_dimensional():
    g, u = _osp12(3, {"f": 1})
    X = g.basis_vector(g.index("e"))
    chi = chi_from_element(g, X)
    Z = grading_for(g, X)
    mp = build_m(g, Z, chi)
    eta = eta_character(g, mp.m_basis, chi, Z.degree_of)
    assert eta == [chi.on(g.index("f"))]
    # rebase so that m' = span(b0, b1) with m = span(b0), then induce K_eta from m to m'
    h, chi_h, _ = adapted_algebra(g, chi, mp.mprime_basis)
    s = subalgebra(h, [0, 1])
    us = UAlgebraCtx(s, PChar(s, chi_h.values[:, [0, 1]]))
    M = induced_module(us, [0], one_dim_module(s, [0], eta, 0, us.chi))
    assert M.dim == 2 and M.check(us.chi) == []
    res = is_simple(M, seed=0)
    assert res.simple
    assert endo_superalgebra(M, res.certificate).type == "Q"


def test_eta_zero_when_chi_vanishes_on_m():
    g = construct("osp12", ctx=FieldCtx(3))
    X = g.basis_vector(g.index("e"))
    Z = grading_for(g, X)
    mp = build_m(g, Z, chi_from_element(g, X))
    assert eta_character(g, mp.m_basis, PChar.zero(g), Z.degree_of) == [0]


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("chi", [{}, {"f": 1}])
def test_osp12_baby_verma_dims(p, chi):
    g, u = _osp12(p, chi)
    borel = borel_data(g)
    for lam in lambda_set(u, borel[0]).solutions:
        Z = baby_verma(u, borel, lam)
        assert Z.dim == 2 * p
        assert Z.check(u.chi) == []


def test_sl11_baby_verma_action():
    p = 5
    F = FieldCtx(p, 2)
    lam0 = next(a for a in F.elements() if not F.in_prime_field(a))
    g = construct("sl11", ctx=F)
    u = UAlgebraCtx(g, PChar.from_dict(g, {"h": frobenius_root(F, F.sub(F.pow(lam0, p), lam0))}))
    cartan, pos, neg = borel_data(g)
    X, Y = pos[0], neg[0]
    sols = lambda_set(u, cartan).solutions
    assert len(sols) == p
    for lam in sols:
        Z = baby_verma(u, (cartan, pos, neg), lam)
        assert Z.dim == 2
        v = F.zeros(2)
        v[0, 0] = 1
        Xv = F.matmul(Z.rho(X), v[:, :, None])
        XYv = F.matmul(Z.rho(X), F.matmul(Z.rho(Y), v[:, :, None]))
        assert not Xv.any()
        # [X, Y] = h in sl(1|1)
        assert F.codes(XYv[:, :, 0]).tolist() == [lam[0], 0]


def test_torus_baby_verma_is_one_dimensional():
    g = construct("torus", 2, ctx=FieldCtx(3))
    u = UAlgebraCtx(g, PChar.zero(g))
    assert baby_verma(u, ([0, 1], [], []), (1, 2)).dim == 1


@pytest.mark.parametrize("p", [3, 5])
def test_closed_form_matches_generic(p):
    F = FieldCtx(p)
    g, u = _osp12(p, {"f": 1})
    borel = borel_data(g)
    for lam in range(p):
        C = osp12_verma_closed_form(g, lam, u.chi)
        assert C.check(u.chi) == []
        # v_i = F^i (x) 1 against the PBW basis f^j F^e: F^{2j} = (-f)^j
        T = F.eye(2 * p)
        for i in range(2 * p):
            if (i // 2) % 2:
                T[0, i, i] = p - 1
        Z = baby_verma(u, borel, (lam,)).change_basis(T)
        assert np.array_equal(F.codes(Z.action), F.codes(C.action))
        E, Fo = g.index("E"), g.index("F")
        assert F.entry(C.rho(E), (0, 1)) == lam
        assert F.entry(C.rho(Fo), (0, 2 * p - 1)) == F.neg(1)


def test_regular_module_torus_splits():
    p = 5
    g = construct("torus", 1, ctx=FieldCtx(p))
    u = UAlgebraCtx(g, PChar.zero(g))
    R = regular_module(u)
    H = R.rho(0)
    mp = u.ctx.minimal_polynomial(H)
    # h^p - h = prod (h - a): p distinct eigenvalues, diagonalisable
    assert len(mp) == p + 1 and R.dim == p
    assert u.ctx.poly_gcd(mp, u.ctx.poly_deriv(mp)) == [1]


def test_regular_module_dims_and_bound():
    g, u = _osp12(3)
    R = regular_module(u)
    assert R.dim == 108 and R.check(u.chi) == []
    g5, u5 = _osp12(7)
    with pytest.raises(DimensionBoundError):
        regular_module(u5)
    s = construct("sl11", ctx=FieldCtx(3))
    assert regular_module(UAlgebraCtx(s, PChar.zero(s))).dim == 12


def test_module_rep_json_and_parity_shift():
    g, u = _osp12(3, {"f": 1})
    Z = baby_verma(u, borel_data(g), (0,))
    assert Z.to_json()["parity"] == [int(x) for x in Z.parity]
    S = Z.parity_shift()
    assert list(S.parity) == [1 - x for x in Z.parity]
    D = Z.direct_sum(S)
    assert D.dim == 12 and D.check(u.chi) == []
    assert isinstance(D, ModuleRep)


def test_straightening_cache_roundtrip_and_corruption(tmp_path):
    g = construct("osp12", ctx=FieldCtx(3))
    chi = PChar.from_dict(g, {"f": 1})
    cold = UAlgebraCtx(g, chi, cache_dir=str(tmp_path))
    ref = regular_module(cold).action
    cold.save_cache()
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    warm = UAlgebraCtx(g, chi, cache_dir=str(tmp_path))
    assert warm.load_cache() and warm.memo
    assert np.array_equal(regular_module(warm).action, ref)
    files[0].write_text("{not json")
    broken = UAlgebraCtx(g, chi, cache_dir=str(tmp_path))
    assert not broken.load_cache()
    assert np.array_equal(regular_module(broken).action, ref)
