"""Z-gradings attached to a nilpotent even element X, and the subalgebras m, m'.

The grading on the defining space puts X^j v in degree 2j + 1 - l for a
Jordan chain v, Xv, ..., X^{l-1} v.  The grading of g is the one induced on
matrix entries.  For orthosymplectic algebras the chains are first adjusted
so that the form pairs V(k) only with V(-k).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .exactlin import EchelonSpace, JordanData, Matrix, nilpotent_jordan
from .superlie import LieSuperAlgebra, PChar, element_centralizer

__all__ = [
    "GradingError",
    "FieldTooSmallError",
    "ZGrading",
    "MPair",
    "GradingReport",
    "grade_defining_space",
    "induce_grading",
    "osp_compatible_basis",
    "grading_for",
    "verify_grading",
    "centralizer_dims_by_partition",
    "build_m",
]


class GradingError(ValueError):
    pass


class FieldTooSmallError(ValueError):
    pass


def _block(x: Matrix, idx) -> Matrix:
    return Matrix(x.ctx, x.data[:, idx][:, :, idx].copy())


def grade_defining_space(j0: JordanData, j1: JordanData):
    """Degrees of the chain basis (chain_matrix column order), even part first."""
    out = []
    for jd in (j0, j1):
        if sum(jd.partition) != jd.dim:
            raise GradingError("chain data does not span the space")
        for lam in jd.partition:
            # columns X^{lam-1} v, ..., v
            out.extend(2 * j + 1 - lam for j in range(lam - 1, -1, -1))
    return out


@dataclass
class ZGrading:
    """A Z-grading of g together with the graded basis of V it comes from.

    ``basis`` holds the graded basis of g as columns (standard coordinates);
    ``degrees`` and ``parity`` describe each column.
    """

    g: LieSuperAlgebra
    v_degrees: list
    v_basis: Matrix           # columns: graded basis of V
    basis: np.ndarray         # layered (k, n, n)
    degrees: list
    parity: list

    @property
    def change_of_basis(self) -> Matrix:
        return Matrix(self.g.ctx, self.basis)

    def vector(self, t: int) -> np.ndarray:
        return self.basis[:, :, t].copy()

    def piece(self, d: int, par: int | None = None) -> list[int]:
        return [t for t, (k, q) in enumerate(zip(self.degrees, self.parity))
                if k == d and (par is None or q == par)]

    def sdim(self, d: int) -> tuple[int, int]:
        return len(self.piece(d, 0)), len(self.piece(d, 1))

    def occupied(self) -> list[int]:
        return sorted(set(self.degrees))

    def coords(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of x in the graded basis."""
        ctx = self.g.ctx
        if not hasattr(self, "_inv"):
            self._inv = ctx.inverse(self.basis)
        return ctx.matmul(self._inv, x[:, :, None])[:, :, 0]

    def degree_of(self, x: np.ndarray) -> int | None:
        c = self.coords(x)
        ds = {self.degrees[t] for t in np.flatnonzero(c.any(axis=0))}
        if len(ds) == 1:
            return ds.pop()
        return None if ds else 0

    def table(self) -> list[dict]:
        rows = []
        for d in self.occupied():
            e, o = self.sdim(d)
            rows.append({"degree": d, "even": e, "odd": o})
        return rows

    def shifted(self, s: int) -> "ZGrading":
        return ZGrading(self.g, [d + s for d in self.v_degrees], self.v_basis, self.basis,
                        [d + s for d in self.degrees], self.parity)


def induce_grading(g: LieSuperAlgebra, v_degrees, v_basis: Matrix) -> ZGrading:
    """Grade g by the degrees of matrix entries in the basis v_basis of V."""
    ctx = g.ctx
    P = v_basis
    Pinv = P.inverse()
    deg = np.asarray(v_degrees)
    entry_deg = deg[:, None] - deg[None, :]
    pieces: dict[tuple[int, int], EchelonSpace] = {}
    for i in range(g.n):
        conj = (Pinv @ g.model[i] @ P).data
        for d in sorted(set(entry_deg[conj.any(axis=0)].tolist())):
            comp = np.where(entry_deg[None] == d, conj, 0)
            back = P @ Matrix(ctx, comp) @ Pinv
            c = g.try_coords(back)
            if c is None:
                raise GradingError(
                    f"degree {d} component of {g.labels[i]} is not in g; "
                    "the basis of V is not compatible with g")
            key = (d, int(g.parity[i]))
            pieces.setdefault(key, EchelonSpace(ctx, g.n)).add(c)
    cols, degrees, parity = [], [], []
    for (d, q) in sorted(pieces, key=lambda t: (t[0], t[1])):
        B = pieces[(d, q)].basis()
        for r in range(B.shape[1]):
            cols.append(B[:, r, :])
            degrees.append(d)
            parity.append(q)
    if len(cols) != g.n:
        raise GradingError("graded pieces do not add up to g")
    basis = np.stack(cols, axis=2)
    if ctx.rank(basis) != g.n:
        raise GradingError("graded pieces are not independent")
    return ZGrading(g, list(map(int, v_degrees)), P, basis, degrees, parity)


# ---------------------------------------------------------------------------
# orthosymplectic chain bases
# ---------------------------------------------------------------------------

def _form(ctx, J, a, b):
    return ctx.matmul(ctx.matmul(ctx.transpose(a), J), b)


def _compatible_block(X: Matrix, J: Matrix):
    """Chain heads in one parity block so the form pairs X^a v_i with X^b v_l
    only when a + b = l - 1 (equal lengths)."""
    ctx = X.ctx
    n = X.rows
    Q = ctx.eye(n)
    heads = []  # (length, vector (k, n, 1))
    two_inv = ctx.inv(2)
    while Q.shape[2]:
        XQ = ctx.matmul(X.data, Q)
        Y = ctx.solve(Q, XQ)
        if Y is None:
            raise GradingError("subspace is not X-stable")
        jd = nilpotent_jordan(Matrix(ctx, Y))
        d = jd.partition[0]
        top = [h for lam, h in zip(jd.partition, jd.chain_heads) if lam == d]
        V = np.concatenate([ctx.matmul(Q, h.data) for h in top], axis=2)  # (k, n, r)
        powers = [ctx.eye(n)]
        for _ in range(d):
            powers.append(ctx.matmul(powers[-1], X.data))

        Ninv = ctx.inverse(_form(ctx, J.data, V, ctx.matmul(powers[d - 1], V)))
        for m in range(d - 2, -1, -1):
            a = d - 1 - m
            Gm = _form(ctx, J.data, V, ctx.matmul(powers[m], V))
            if not Gm.any():
                continue
            coef = ctx.mul(two_inv, 1 if a % 2 else ctx.p - 1)  # -1/2 (-1)^a
            C = ctx.scale(ctx.matmul(Gm, Ninv), coef)
            # v_i <- v_i + sum_l C[i, l] X^a v_l
            V = ctx.add_arr(V, ctx.matmul(ctx.matmul(powers[a], V), ctx.transpose(C)))
        for t in range(V.shape[2]):
            heads.append((d, V[:, :, t:t + 1].copy()))
        A = np.concatenate([ctx.matmul(powers[j], V) for j in range(d)], axis=2)
        # orthogonal complement of A inside span(Q)
        M = _form(ctx, J.data, A, Q)
        ker = ctx.kernel(M)
        Q = ctx.matmul(Q, ker)
    partition = tuple(lam for lam, _ in heads)
    return JordanData(partition, tuple(Matrix(ctx, h) for _, h in heads), n, X)


def osp_compatible_basis(X: Matrix, J: Matrix, v_parity):
    """Jordan data (even, odd) for X in osp(V) with degree-opposed pairing.

    X is the matrix of an even nilpotent element on V, J the Gram matrix of
    the form.  Raises GradingError if the a posteriori check fails.
    """
    v_parity = np.asarray(v_parity)
    e = np.flatnonzero(v_parity == 0)
    o = np.flatnonzero(v_parity == 1)
    out = []
    for idx in (e, o):
        out.append(_compatible_block(_block(X, idx), _block(J, idx)))
    P, deg = _assemble(X.ctx, out[0], out[1], e, o)
    _check_form_degrees(J, P, deg)
    return out[0], out[1]


def _assemble(ctx, j0, j1, e, o):
    N = len(e) + len(o)
    P = ctx.zeros(N, N)
    col = 0
    for jd, idx in ((j0, e), (j1, o)):
        if jd.dim == 0:
            continue
        C = jd.chain_matrix().data
        for t in range(C.shape[2]):
            P[:, idx, col] = C[:, :, t]
            col += 1
    return Matrix(ctx, P), grade_defining_space(j0, j1)


def _check_form_degrees(J: Matrix, P: Matrix, deg):
    G = (P.T() @ J @ P).codes()
    for a, b in zip(*np.nonzero(G)):
        if deg[a] + deg[b] != 0:
            raise GradingError(
                f"form pairs degrees {deg[a]} and {deg[b]}; compatible basis construction failed")


def grading_for(g: LieSuperAlgebra, X: np.ndarray) -> ZGrading:
    """Build the grading of g attached to the nilpotent even element X."""
    ctx = g.ctx
    Xm = g.to_matrix(X)
    vp = g.v_parity
    e = np.flatnonzero(vp == 0)
    o = np.flatnonzero(vp == 1)
    J = getattr(g, "vform", None)
    if J is not None:
        j0, j1 = osp_compatible_basis(Xm, J, vp)
    else:
        j0 = nilpotent_jordan(_block(Xm, e))
        j1 = nilpotent_jordan(_block(Xm, o))
    P, deg = _assemble(ctx, j0, j1, e, o)
    Z = induce_grading(g, deg, P)
    Z.jordan = (j0, j1)
    Z.X = X
    return Z


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class GradingReport:
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    centralizer_dim: tuple = (0, 0)
    table: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"checks": dict(self.checks), "ok": self.ok,
                "centralizerDim": list(self.centralizer_dim), "table": self.table,
                "witnesses": {k: str(v) for k, v in self.witnesses.items()}}


def _span_rank(ctx, vecs):
    if not vecs:
        return 0
    return ctx.rank(np.stack(vecs, axis=1))


def verify_grading(g: LieSuperAlgebra, X: np.ndarray, Z: ZGrading) -> GradingReport:
    ctx = g.ctx
    rep = GradingReport()
    degs = Z.occupied()
    # closure [g(k), g(l)] in g(k+l)
    closed = True
    for s in range(g.n):
        ad = g.ad(Z.vector(s))
        img = ctx.matmul(ad, Z.basis)
        for t in range(g.n):
            y = img[:, :, t]
            if y.any() and Z.degree_of(y) != Z.degrees[s] + Z.degrees[t]:
                closed = False
                rep.witnesses["closure"] = (s, t)
                break
        if not closed:
            break
    rep.checks["bracket_closed"] = closed
    rep.checks["X_in_g(2)"] = not X.any() or Z.degree_of(X) == 2
    # (2) form orthogonality
    ok2 = True
    G = ctx.matmul(ctx.matmul(ctx.transpose(Z.basis), g.form), Z.basis)
    Gc = ctx.codes(G)
    for a, b in zip(*np.nonzero(Gc)):
        if Z.degrees[a] + Z.degrees[b] != 0:
            ok2 = False
            rep.witnesses["form"] = (int(a), int(b))
            break
    rep.checks["form_orthogonal"] = ok2
    # centralizer and its graded pieces
    ev, od = element_centralizer(g, X)
    gx = (len(ev), len(od))
    rep.centralizer_dim = gx
    adX = g.ad(X)
    pieces = {}
    for d in degrees_range(degs):
        for q in (0, 1):
            idx = Z.piece(d, q)
            if not idx:
                pieces[(d, q)] = 0
                continue
            sub = ctx.matmul(adX, Z.basis[:, :, idx])
            pieces[(d, q)] = len(idx) - ctx.rank(sub)
    graded_sum = (sum(v for (d, q), v in pieces.items() if q == 0),
                  sum(v for (d, q), v in pieces.items() if q == 1))
    rep.checks["centralizer_graded"] = graded_sum == gx
    neg = [(d, q) for (d, q), v in pieces.items() if d < 0 and v]
    rep.checks["no_negative_centralizer"] = not neg
    if neg:
        rep.witnesses["negative"] = neg
    s0, s1 = Z.sdim(0), Z.sdim(1)
    rep.checks["dim_identity"] = gx == (s0[0] + s1[0], s0[1] + s1[1])
    # [g(k-2)_i, X] = g(k)_i for k >= 1, and the equivalence for every k
    surj, equiv = True, True
    for k in degrees_range(degs + [d + 2 for d in degs]):
        for q in (0, 1):
            src = Z.piece(k - 2, q)
            tgt = Z.piece(k, q)
            img_rank = ctx.rank(ctx.matmul(adX, Z.basis[:, :, src])) if src else 0
            onto = img_rank == len(tgt)
            if k >= 1 and not onto:
                surj = False
                rep.witnesses.setdefault("surjectivity", (k, q))
            if onto != (pieces.get((-k, q), 0) == 0):
                equiv = False
    rep.checks["surjectivity"] = surj
    rep.checks["surjectivity_equivalence"] = equiv
    rep.table = Z.table()
    return rep


def degrees_range(degs):
    if not degs:
        return []
    return list(range(min(degs), max(degs) + 1))


def centralizer_dims_by_partition(pi0, pi1) -> tuple[int, int]:
    ev = sum(min(a, b) for a in pi0 for b in pi0) + sum(min(a, b) for a in pi1 for b in pi1)
    od = 2 * sum(min(a, b) for a in pi0 for b in pi1)
    return ev, od


# ---------------------------------------------------------------------------
# m and m'
# ---------------------------------------------------------------------------

@dataclass
class MPair:
    m_basis: list
    mprime_basis: list
    g_minus1_iso: list
    skew_gram: np.ndarray
    r_odd: int
    middle: np.ndarray | None = None
    middle_square: int | None = None
    odd_basis: list = field(default_factory=list)
    grading: ZGrading | None = None

    def sdim(self, which="m"):
        vecs = self.m_basis if which == "m" else self.mprime_basis
        g = self.grading.g
        par = [g.is_homogeneous(v) for v in vecs]
        return par.count(0), par.count(1)

    def reduced_dim(self, which="m") -> int:
        e, o = self.sdim(which)
        return self.grading.g.ctx.p ** e * 2 ** o


def _pairing(ctx, g, chi, x, y):
    return chi(g.bracket(x, y))


def _isotropic_split_even(ctx, g, chi, vecs):
    """Lagrangian subspace of a nondegenerate skew form (hyperbolic pairs)."""
    iso = []
    space = list(vecs)
    while space:
        x = space[0]
        vals = [_pairing(ctx, g, chi, x, y) for y in space]
        j = next((t for t, v in enumerate(vals) if v), None)
        if j is None:
            raise GradingError("form on g(-1) even part is degenerate")
        y = ctx.scale(space[j], ctx.inv(vals[j]))
        iso.append(x)
        rest = []
        for t, z in enumerate(space):
            if t in (0, j):
                continue
            # project off the hyperbolic plane (<x,y> = 1, <y,x> = -1)
            a = _pairing(ctx, g, chi, x, z)
            b = _pairing(ctx, g, chi, y, z)
            z2 = ctx.sub_arr(ctx.add_arr(z, ctx.scale(x, b)), ctx.scale(y, a))
            rest.append(z2)
        space = _independent(ctx, rest)
    return iso


def _independent(ctx, vecs):
    if not vecs:
        return []
    sp = EchelonSpace(ctx, vecs[0].shape[1])
    out = []
    for v in vecs:
        if sp.add(v).shape[1]:
            out.append(v)
    return out


def _find_isotropic(ctx, form, vecs, rng):
    for v in vecs:
        if form(v, v) == 0:
            return v
    cands = [(a, b) for a in range(len(vecs)) for b in range(a + 1, len(vecs))]
    for a, b in cands:
        x, y = vecs[a], vecs[b]
        for t in range(ctx.q):
            w = ctx.add_arr(x, ctx.scale(y, t))
            if form(w, w) == 0:
                return w
    if len(vecs) >= 3:
        for _ in range(200):
            c = [ctx.random(rng) for _ in vecs]
            w = ctx.zeros(vecs[0].shape[1])
            for ci, v in zip(c, vecs):
                w = ctx.add_arr(w, ctx.scale(v, ci))
            if w.any() and form(w, w) == 0:
                return w
    return None


def build_m(g: LieSuperAlgebra, Z: ZGrading, chi: PChar, seed: int = 0) -> MPair:
    """m = sum_{k>=2} g(-k) + g(-1)', and m' (one extra odd vector when r is odd)."""
    ctx = g.ctx
    rng = random.Random(seed)
    low = [Z.vector(t) for t in range(g.n) if Z.degrees[t] <= -2]
    e1 = [Z.vector(t) for t in Z.piece(-1, 0)]
    o1 = [Z.vector(t) for t in Z.piece(-1, 1)]
    allm1 = e1 + o1
    gram = ctx.zeros(len(allm1), len(allm1))
    for a, x in enumerate(allm1):
        for b, y in enumerate(allm1):
            gram[:, a, b] = ctx.coeffs(_pairing(ctx, g, chi, x, y))
    if allm1 and ctx.rank(gram) != len(allm1):
        raise GradingError("the form chi([x, y]) on g(-1) is degenerate")
    iso_even = _isotropic_split_even(ctx, g, chi, e1) if e1 else []

    def form(x, y):
        return _pairing(ctx, g, chi, x, y)

    r = len(o1)
    lows, highs = [], []
    space = list(o1)
    while len(space) >= 2:
        x = _find_isotropic(ctx, form, space, rng)
        if x is None:
            raise FieldTooSmallError(
                f"the symmetric form on g(-1)_1 has an anisotropic plane over F_{ctx.q}; "
                f"rerun with extension degree {2 * ctx.k}")
        vals = [form(x, y) for y in space]
        j = next(t for t, v in enumerate(vals) if v)
        y = ctx.scale(space[j], ctx.inv(vals[j]))
        # y' = y - <y,y>/2 x is isotropic with <x, y'> = 1
        c = ctx.mul(form(y, y), ctx.inv(2))
        y = ctx.sub_arr(y, ctx.scale(x, c))
        lows.append(x)
        highs.append(y)
        rest = []
        for z in space:
            a, b = form(x, z), form(y, z)
            # remove components: z - <y,z> x - <x,z> y  (symmetric, <x,y> = 1)
            rest.append(ctx.sub_arr(ctx.sub_arr(z, ctx.scale(x, b)), ctx.scale(y, a)))
        rest = [v for v in rest if v.any()]
        space = _independent(ctx, rest)
    middle, msq = None, None
    if space:
        middle = space[0]
        c = form(middle, middle)
        s = ctx.sqrt(c)
        if s is not None and s:
            middle = ctx.scale(middle, ctx.inv(s))
            msq = 1
        else:
            msq = c
    odd_basis = lows + ([middle] if middle is not None else []) + highs[::-1]
    iso = iso_even + lows
    m = low + iso
    mprime = m + ([middle] if middle is not None else [])
    mp = MPair(m, mprime, iso, gram, r, middle, msq, odd_basis, Z)
    _check_mpair(g, chi, mp)
    return mp


def _check_mpair(g, chi, mp: MPair):
    ctx = g.ctx
    for name, vecs in (("m", mp.m_basis), ("m'", mp.mprime_basis)):
        if not vecs:
            continue
        B = np.stack(vecs, axis=2)
        for x in vecs:
            for y in vecs:
                z = g.bracket(x, y)
                if ctx.solve(B, z[:, :, None]) is None:
                    raise GradingError(f"{name} is not a subalgebra")
    for x in mp.m_basis:
        for y in mp.m_basis:
            if chi(g.bracket(x, y)):
                raise GradingError("chi does not vanish on [m, m]")
    for x in mp.g_minus1_iso:
        for y in mp.g_minus1_iso:
            if chi(g.bracket(x, y)):
                raise GradingError("g(-1)' is not isotropic")
    for x in mp.m_basis:
        if g.is_homogeneous(x) == 0:
            Mx = g.to_matrix(x)
            if not Mx.power(g.vdim).is_zero():
                raise GradingError("m is not p-nilpotent")
