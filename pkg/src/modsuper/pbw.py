"""PBW straightening in reduced enveloping superalgebras, and the modules built on it.

A monomial is a tuple of exponents indexed by *position* in the PBW order
(even exponents in [0, p), odd exponents 0 or 1).  An element of U_chi(g)
is a dict {monomial: code}.  Left multiplication by a generator is
memoized per (position, monomial).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .exactlin import frobenius_root
from .superlie import LieSuperAlgebra, PChar, root_decomposition

__all__ = [
    "UAlgebraCtx",
    "ModuleRep",
    "WeightSet",
    "default_order",
    "normal_form",
    "multiply",
    "reduced_dim",
    "lambda_set",
    "induced_module",
    "borel_data",
    "baby_verma",
    "osp12_verma_closed_form",
    "regular_module",
    "eta_character",
    "one_dim_module",
    "DimensionBoundError",
]

CACHE_VERSION = 1
sys.setrecursionlimit(max(sys.getrecursionlimit(), 200000))


class DimensionBoundError(ValueError):
    pass


def default_order(g: LieSuperAlgebra) -> list[int]:
    """Even basis elements before odd ones, each in index order."""
    return g.even_indices + g.odd_indices


class UAlgebraCtx:
    """U_chi(g) with a fixed PBW order and a straightening memo."""

    def __init__(self, g: LieSuperAlgebra, chi: PChar, order=None, cache_dir=None):
        self.g = g
        self.chi = chi
        self.ctx = ctx = g.ctx
        self.order = list(order) if order is not None else default_order(g)
        if sorted(self.order) != list(range(g.n)):
            raise ValueError("order must be a permutation of the basis")
        self.pos = {b: t for t, b in enumerate(self.order)}
        n = g.n
        br, pm = g.sparse_bracket
        self.par = [int(g.parity[self.order[a]]) for a in range(n)]
        self.br = [[[(self.pos[l], c) for l, c in br[self.order[a]][self.order[b]]]
                    for b in range(n)] for a in range(n)]
        self.pmap = {self.pos[i]: [(self.pos[l], c) for l, c in v] for i, v in pm.items()}
        self.chip = [ctx.pow(chi.on(self.order[a]), ctx.p) for a in range(n)]
        self.half = ctx.inv(2)
        self.n = n
        self.p = ctx.p
        self.memo: dict = {}
        self.cache_dir = cache_dir
        self._cache_loaded = False

    # -- identity for caching ----------------------------------------------

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.g.dumps().encode())
        h.update(json.dumps(self.chi.codes()).encode())
        h.update(json.dumps(self.order).encode())
        h.update(str(CACHE_VERSION).encode())
        return h.hexdigest()[:32]

    def _cache_path(self):
        return os.path.join(self.cache_dir, f"straighten-{self.content_hash()}.json")

    def load_cache(self) -> bool:
        """Load memo entries from disk; a missing or corrupt file is ignored."""
        self._cache_loaded = True
        if not self.cache_dir:
            return False
        path = self._cache_path()
        try:
            with open(path) as fh:
                obj = json.load(fh)
            if obj.get("version") != CACHE_VERSION or obj.get("hash") != self.content_hash():
                return False
            memo = {}
            for key, terms in obj["memo"]:
                i, m = key[0], tuple(key[1])
                memo[(i, m)] = {tuple(t[0]): t[1] for t in terms}
        except (OSError, ValueError, KeyError, TypeError, IndexError):
            return False
        self.memo.update(memo)
        return True

    def save_cache(self) -> None:
        if not self.cache_dir:
            return
        os.makedirs(self.cache_dir, exist_ok=True)
        items = sorted(self.memo.items())
        obj = {"version": CACHE_VERSION, "hash": self.content_hash(),
               "memo": [[[i, list(m)], [[list(mm), c] for mm, c in sorted(r.items())]]
                        for (i, m), r in items]}
        tmp = self._cache_path() + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(obj, fh)
        os.replace(tmp, self._cache_path())

    # -- arithmetic ----------------------------------------------------------

    def one(self):
        return {tuple([0] * self.n): 1}

    def _acc(self, res, terms, c):
        ctx = self.ctx
        if c == 1:
            for mm, v in terms.items():
                s = ctx.add(res.get(mm, 0), v)
                if s:
                    res[mm] = s
                else:
                    res.pop(mm, None)
        else:
            for mm, v in terms.items():
                s = ctx.add(res.get(mm, 0), ctx.mul(c, v))
                if s:
                    res[mm] = s
                else:
                    res.pop(mm, None)

    def gen_mul(self, i: int, m: tuple) -> dict:
        """Normal form of (generator at position i) * (monomial m)."""
        key = (i, m)
        r = self.memo.get(key)
        if r is not None:
            return r
        if not self._cache_loaded:
            self.load_cache()
            r = self.memo.get(key)
            if r is not None:
                return r
        ctx = self.ctx
        n = self.n
        j = n
        for t in range(n):
            if m[t]:
                j = t
                break
        if i < j:
            res = {m[:i] + (1,) + m[i + 1:]: 1}
        elif i == j:
            a = m[i]
            if self.par[i] == 0 and a + 1 < self.p:
                res = {m[:i] + (a + 1,) + m[i + 1:]: 1}
            else:
                rest = m[:i] + (0,) + m[i + 1:]
                res = {}
                if self.par[i] == 0:
                    # x^p = x^[p] + chi(x)^p
                    if self.chip[i]:
                        res[rest] = self.chip[i]
                    for l, c in self.pmap[i]:
                        self._acc(res, self.gen_mul(l, rest), c)
                else:
                    # y^2 = [y, y] / 2
                    for l, c in self.br[i][i]:
                        self._acc(res, self.gen_mul(l, rest), ctx.mul(c, self.half))
        else:
            rest = m[:j] + (m[j] - 1,) + m[j + 1:]
            T = self.gen_mul(i, rest)
            sign = ctx.neg(1) if (self.par[i] and self.par[j]) else 1
            res = {}
            for mm, c in T.items():
                self._acc(res, self.gen_mul(j, mm), ctx.mul(sign, c))
            for l, c in self.br[i][j]:
                self._acc(res, self.gen_mul(l, rest), c)
        self.memo[key] = res
        return res

    def left_mul_gen(self, i: int, u: dict) -> dict:
        res = {}
        for m, c in u.items():
            self._acc(res, self.gen_mul(i, m), c)
        return res

    def left_mul_elem(self, x: np.ndarray, u: dict) -> dict:
        """x * u for a Lie algebra element x (layered vector in the basis of g)."""
        ctx = self.ctx
        res = {}
        for b in np.flatnonzero(x.any(axis=0)):
            c = ctx.entry(x, int(b))
            self._acc(res, self.left_mul_gen(self.pos[int(b)], u), c)
        return res

    def monomial_word(self, m: tuple) -> list[int]:
        """Positions, left to right, of the generators making up m."""
        w = []
        for t, a in enumerate(m):
            w.extend([t] * a)
        return w

    def mul(self, u: dict, v: dict) -> dict:
        res = {}
        for m, c in u.items():
            acc = v
            for t in reversed(self.monomial_word(m)):
                acc = self.left_mul_gen(t, acc)
            self._acc(res, acc, c)
        return res

    def monomials(self, positions=None):
        """All PBW monomials supported on the given positions (default: all)."""
        if positions is None:
            positions = range(self.n)
        positions = list(positions)
        ranges = [range(self.p) if self.par[t] == 0 else range(2) for t in positions]
        out = []
        for exps in itertools.product(*ranges):
            m = [0] * self.n
            for t, a in zip(positions, exps):
                m[t] = a
            out.append(tuple(m))
        return out

    def fmt(self, u: dict) -> str:
        g = self.g
        terms = []
        for m, c in sorted(u.items()):
            word = "".join(
                f"{g.labels[self.order[t]]}" + (f"^{a}" if a > 1 else "")
                for t, a in enumerate(m) if a) or "1"
            terms.append(f"{self.ctx.fmt(c)}*{word}")
        return " + ".join(terms) or "0"


def normal_form(uctx: UAlgebraCtx, word) -> dict:
    """Normal form of a product of basis generators (labels or basis indices)."""
    g = uctx.g
    idx = [w if isinstance(w, (int, np.integer)) else g.index(w) for w in word]
    u = uctx.one()
    for b in reversed(idx):
        u = uctx.left_mul_gen(uctx.pos[int(b)], u)
    return u


def multiply(uctx: UAlgebraCtx, word, left_to_right=True) -> dict:
    """Product of generators computed as (((w1 w2) w3) ...) or right to left."""
    if not left_to_right:
        return normal_form(uctx, word)
    g = uctx.g
    idx = [w if isinstance(w, (int, np.integer)) else g.index(w) for w in word]
    u = uctx.one()
    for b in idx:
        gen = uctx.left_mul_gen(uctx.pos[int(b)], uctx.one())
        u = uctx.mul(u, gen)
    return u


def reduced_dim(g_or_ctx) -> int:
    g = g_or_ctx.g if isinstance(g_or_ctx, UAlgebraCtx) else g_or_ctx
    e, o = g.sdim
    return g.ctx.p ** e * 2 ** o


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

class ModuleRep:
    """A finite-dimensional supermodule given by one action matrix per basis element."""

    def __init__(self, g: LieSuperAlgebra, parity, action: np.ndarray, labels=None,
                 indices=None, chi: PChar | None = None):
        self.g = g
        self.ctx = g.ctx
        self.parity = np.asarray(parity, dtype=np.int64)
        self.dim = len(self.parity)
        self.action = action  # layered (k, len(indices), dim, dim)
        self.indices = list(range(g.n)) if indices is None else list(indices)
        self.labels = labels if labels is not None else [f"v{t}" for t in range(self.dim)]
        self.chi = chi

    def __repr__(self):
        e = int((self.parity == 0).sum())
        return f"<ModuleRep dim {e}|{self.dim - e} over {len(self.indices)} generators>"

    def rho(self, b: int) -> np.ndarray:
        """Layered matrix of the basis element with algebra index b."""
        return self.action[:, self.indices.index(b)]

    def rho_elem(self, x: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        sub = x[:, self.indices]
        flat = self.action.reshape(ctx.k, len(self.indices), self.dim * self.dim)
        return ctx.matmul(sub[:, None, :], flat).reshape(ctx.k, self.dim, self.dim)

    def generator_parity(self, t: int) -> int:
        return int(self.g.parity[self.indices[t]])

    def check(self, chi: PChar | None = None) -> list[str]:
        """Bracket relation, p-character relation and parity compatibility."""
        ctx, g = self.ctx, self.g
        chi = chi if chi is not None else self.chi
        errs = []
        par = self.parity
        same = par[:, None] == par[None, :]
        for t, b in enumerate(self.indices):
            A = self.action[:, t]
            nz = A.any(axis=0)
            if g.parity[b] == 0 and (nz & ~same).any():
                errs.append(f"{g.labels[b]} does not preserve parity")
            if g.parity[b] == 1 and (nz & same).any():
                errs.append(f"{g.labels[b]} does not swap parity")
        idx = set(self.indices)
        for s, a in enumerate(self.indices):
            for t, b in enumerate(self.indices):
                if t < s:
                    continue
                br = g.bracket_basis(a, b)
                if not set(np.flatnonzero(br.any(axis=0)).tolist()) <= idx:
                    continue
                A, B = self.action[:, s], self.action[:, t]
                AB, BA = ctx.matmul(A, B), ctx.matmul(B, A)
                lhs = ctx.add_arr(AB, BA) if (g.parity[a] and g.parity[b]) else ctx.sub_arr(AB, BA)
                full = ctx.zeros(g.n)
                full[:, :] = br
                rhs = self.rho_elem(full)
                if not np.array_equal(lhs, rhs):
                    errs.append(f"bracket relation fails at {g.labels[a]},{g.labels[b]}")
        if chi is not None:
            for t, b in enumerate(self.indices):
                if g.parity[b]:
                    continue
                pm = g.pmap[b]
                if not set(np.flatnonzero(pm.any(axis=0)).tolist()) <= idx:
                    continue
                lhs = ctx.sub_arr(ctx.power(self.action[:, t], ctx.p), self.rho_elem(pm))
                c = ctx.pow(chi.on(b), ctx.p)
                rhs = ctx.scale(ctx.eye(self.dim), c)
                if not np.array_equal(lhs, rhs):
                    errs.append(f"p-character relation fails at {g.labels[b]}")
        return errs

    def restrict(self, indices) -> "ModuleRep":
        pos = [self.indices.index(b) for b in indices]
        return ModuleRep(self.g, self.parity, self.action[:, pos].copy(), self.labels,
                         list(indices), self.chi)

    def sub_quotient(self, T: np.ndarray, k: int):
        """Action on span(T[:, :k]) and on the quotient by it, for an adapted basis T."""
        ctx = self.ctx
        Tinv = ctx.inverse(T)
        conj = ctx.matmul(ctx.matmul(Tinv[:, None], self.action), T[:, None])
        par = np.zeros(self.dim, dtype=np.int64)
        for c in range(self.dim):
            col = T[:, :, c]
            par[c] = int(self.parity[np.flatnonzero(col.any(axis=0))[0]])
        sub = ModuleRep(self.g, par[:k], conj[:, :, :k, :k].copy(), None, self.indices, self.chi)
        quo = ModuleRep(self.g, par[k:], conj[:, :, k:, k:].copy(), None, self.indices, self.chi)
        return sub, quo

    def change_basis(self, T: np.ndarray) -> "ModuleRep":
        ctx = self.ctx
        Tinv = ctx.inverse(T)
        conj = ctx.matmul(ctx.matmul(Tinv[:, None], self.action), T[:, None])
        par = np.array([int(self.parity[np.flatnonzero(T[:, :, c].any(axis=0))[0]])
                        for c in range(self.dim)])
        return ModuleRep(self.g, par, conj, None, self.indices, self.chi)

    def parity_shift(self) -> "ModuleRep":
        return ModuleRep(self.g, 1 - self.parity, self.action.copy(), self.labels,
                         self.indices, self.chi)

    def direct_sum(self, other: "ModuleRep") -> "ModuleRep":
        ctx = self.ctx
        d1, d2 = self.dim, other.dim
        A = ctx.zeros(len(self.indices), d1 + d2, d1 + d2)
        A[:, :, :d1, :d1] = self.action
        A[:, :, d1:, d1:] = other.action
        return ModuleRep(self.g, np.concatenate([self.parity, other.parity]), A, None,
                         self.indices, self.chi)

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "field": ctx.header(),
            "dim": self.dim,
            "parity": self.parity.tolist(),
            "generators": [self.g.labels[b] for b in self.indices],
            "matrices": [np.moveaxis(self.action[:, t], 0, -1).tolist()
                         for t in range(len(self.indices))],
        }


def one_dim_module(g: LieSuperAlgebra, indices, values, parity=0, chi=None) -> ModuleRep:
    """K with basis element indices[t] acting by values[t] (odd ones must be 0)."""
    ctx = g.ctx
    A = ctx.zeros(len(indices), 1, 1)
    for t, (b, v) in enumerate(zip(indices, values)):
        if g.parity[b] and v:
            raise ValueError("odd elements act by zero on a one-dimensional module")
        A[:, t, 0, 0] = ctx.coeffs(v)
    return ModuleRep(g, [parity], A, ["1"], indices, chi)


@dataclass
class WeightSet:
    cartan: list
    solutions: list

    def __len__(self):
        return len(self.solutions)


def lambda_set(uctx: UAlgebraCtx, cartan) -> WeightSet:
    """All lambda with lambda(h)^p - lambda(h^[p]) = chi(h)^p on a basis of the torus."""
    g, ctx = uctx.g, uctx.ctx
    cartan = list(cartan)
    pm = [g.pmap[h] for h in cartan]
    for v in pm:
        if set(np.flatnonzero(v.any(axis=0)).tolist()) - set(cartan):
            raise ValueError("cartan is not closed under the p-map")
    rhs = [ctx.pow(uctx.chi.on(h), ctx.p) for h in cartan]
    identity = all(np.array_equal(v, g.basis_vector(h)) for v, h in zip(pm, cartan))
    if identity:
        per = []
        for c in rhs:
            per.append([x for x in ctx.elements() if ctx.sub(ctx.pow(x, ctx.p), x) == c])
        sols = [tuple(s) for s in itertools.product(*per)]
    else:
        sols = []
        for lam in itertools.product(ctx.elements(), repeat=len(cartan)):
            ok = True
            for t, h in enumerate(cartan):
                val = 0
                for s, h2 in enumerate(cartan):
                    val = ctx.add(val, ctx.mul(ctx.entry(pm[t], h2), lam[s]))
                if ctx.sub(ctx.pow(lam[t], ctx.p), val) != rhs[t]:
                    ok = False
                    break
            if ok:
                sols.append(tuple(lam))
    return WeightSet(cartan, sols)


def _sub_action_cache(W: ModuleRep, uctx: UAlgebraCtx, nc: int):
    """Returns f(s_part) -> layered matrix of the subalgebra monomial on W."""
    ctx = uctx.ctx
    cache = {}
    gens = {uctx.pos[b]: W.action[:, t] for t, b in enumerate(W.indices)}

    def act(s):
        M = cache.get(s)
        if M is not None:
            return M
        M = ctx.eye(W.dim)
        for t, a in enumerate(s):
            for _ in range(a):
                M = ctx.matmul(M, gens[nc + t])
        cache[s] = M
        return M

    return act


def induced_module(uctx: UAlgebraCtx, sub, W: ModuleRep, check=True) -> ModuleRep:
    """U_chi(g) (x)_{U_chi(sub)} W, with sub a set of basis indices.

    The PBW order used has the complement of sub first, then sub, so a
    monomial factors as (complement part)(subalgebra part).
    """
    g, ctx, chi = uctx.g, uctx.ctx, uctx.chi
    sub = list(sub)
    if check:
        errs = W.check(chi)
        if errs:
            raise ValueError(f"W is not a U_chi(sub)-module: {errs[:3]}")
    comp = [b for b in uctx.order if b not in set(sub)]
    subo = [b for b in uctx.order if b in set(sub)]
    if sorted(W.indices) != sorted(sub):
        raise ValueError("W must be a module over exactly the given subalgebra")
    order = comp + subo
    u2 = uctx if order == uctx.order else UAlgebraCtx(g, chi, order, uctx.cache_dir)
    nc = len(comp)
    cmonos = u2.monomials(range(nc))
    cindex = {m: t for t, m in enumerate(cmonos)}
    dW = W.dim
    dim = len(cmonos) * dW
    act = _sub_action_cache(W, u2, nc)
    A = ctx.zeros(g.n, dim, dim)
    for b in range(g.n):
        i = u2.pos[b]
        for col, m in enumerate(cmonos):
            for mm, c in u2.gen_mul(i, m).items():
                cpart = mm[:nc] + (0,) * (g.n - nc)
                row = cindex[cpart]
                spart = mm[nc:]
                if any(spart):
                    M = ctx.scale(act(spart), c)
                    A[:, b, row * dW:(row + 1) * dW, col * dW:(col + 1) * dW] = ctx.add_arr(
                        A[:, b, row * dW:(row + 1) * dW, col * dW:(col + 1) * dW], M)
                else:
                    blk = A[:, b, row * dW:(row + 1) * dW, col * dW:(col + 1) * dW]
                    A[:, b, row * dW:(row + 1) * dW, col * dW:(col + 1) * dW] = ctx.add_arr(
                        blk, ctx.scale(ctx.eye(dW), c))
    par = []
    labels = []
    for m in cmonos:
        pm = sum(a for t, a in enumerate(m) if u2.par[t]) % 2
        for w in range(dW):
            par.append((pm + int(W.parity[w])) % 2)
            labels.append(u2.fmt({m: 1}).split("*", 1)[1] + f"(x)w{w}")
    M = ModuleRep(g, par, A, labels, None, chi)
    M.pbw = u2
    M.complement_monomials = cmonos
    if check:
        errs = M.check(chi)
        if errs:
            raise AssertionError(f"induced module fails module axioms: {errs[:3]}")
        expect = ctx.p ** sum(1 for b in comp if g.parity[b] == 0) * \
            2 ** sum(1 for b in comp if g.parity[b] == 1) * dW
        assert M.dim == expect
    return M


def positive_functional(g: LieSuperAlgebra):
    rs = root_decomposition(g)
    r = len(rs.roots[0]) if rs.roots else 0
    # lexicographic: weights 1000^(r-1-t)
    return np.array([1000 ** (r - 1 - t) for t in range(r)], dtype=np.int64)


def borel_data(g: LieSuperAlgebra, functional=None):
    """(cartan indices, positive root-vector indices, negative ones) for a positive system."""
    rs = root_decomposition(g)
    if functional is None:
        functional = positive_functional(g)
    pos, neg = [], []
    for r in rs.roots:
        val = int(np.dot(functional, r))
        if val == 0:
            raise ValueError("functional is not generic")
        (pos if val > 0 else neg).extend(rs.spaces[r])
    return sorted(rs.cartan), sorted(pos), sorted(neg)


def baby_verma(uctx: UAlgebraCtx, borel, lam, check=True) -> ModuleRep:
    """Z_chi(lambda) induced from K_lambda over b = h + n+, n+ acting by zero."""
    g, ctx, chi = uctx.g, uctx.ctx, uctx.chi
    cartan, pos = borel[0], borel[1]
    for b in pos:
        if g.parity[b] == 0 and chi.on(b):
            raise ValueError("chi does not vanish on the even positive part")
    lam = tuple(lam)
    for t, h in enumerate(cartan):
        val = 0
        for s, h2 in enumerate(cartan):
            val = ctx.add(val, ctx.mul(ctx.entry(g.pmap[h], h2), lam[s]))
        if ctx.sub(ctx.pow(lam[t], ctx.p), val) != ctx.pow(chi.on(h), ctx.p):
            raise ValueError(f"lambda={lam} is not in Lambda_chi")
    sub = list(cartan) + list(pos)
    vals = list(lam) + [0] * len(pos)
    W = one_dim_module(g, sub, vals, 0, chi)
    M = induced_module(uctx, sub, W, check=check)
    M.weight = lam
    return M


def osp12_verma_closed_form(g: LieSuperAlgebra, lam: int, chi: PChar) -> ModuleRep:
    """Z_chi(lambda) for osp(1|2) in the basis v_i = F^i (x) 1, 0 <= i < 2p."""
    ctx = g.ctx
    p = ctx.p
    n = 2 * p
    cf = ctx.pow(chi.on("f"), p)
    A = np.zeros((g.n, n, n), dtype=np.int64)
    e, h, f, E, F = (g.index(x) for x in ("e", "h", "f", "E", "F"))
    for i in range(n):
        A[h, i, i] = ctx.sub(lam, ctx.embed(i))
        if i + 2 < n:
            A[f, i + 2, i] = ctx.neg(1)
        else:
            A[f, i + 2 - n, i] = cf
        if i + 1 < n:
            A[F, i + 1, i] = 1
        else:
            A[F, 0, i] = ctx.neg(cf)
        if i >= 2:
            if i % 2 == 0:
                a = ctx.embed(i // 2)
                c = ctx.neg(ctx.mul(a, ctx.sub(ctx.add(lam, 1), a)))
            else:
                a = ctx.embed((i - 1) // 2)
                c = ctx.neg(ctx.mul(a, ctx.sub(lam, a)))
            A[e, i - 2, i] = c
        if i >= 1:
            if i % 2 == 0:
                c = ctx.neg(ctx.embed(i // 2))
            else:
                c = ctx.sub(lam, ctx.embed((i - 1) // 2))
            A[E, i - 1, i] = c
    layered = np.stack([ctx.lift(A[b]) for b in range(g.n)], axis=1)
    return ModuleRep(g, [i % 2 for i in range(n)], layered, [f"v{i}" for i in range(n)], None, chi)


def regular_module(uctx: UAlgebraCtx, bound: int = 600) -> ModuleRep:
    """Left regular U_chi(g)-module on the PBW basis."""
    g, ctx = uctx.g, uctx.ctx
    D = reduced_dim(g)
    if D > bound:
        raise DimensionBoundError(f"dim U_chi = {D} exceeds the bound {bound}")
    monos = uctx.monomials()
    index = {m: t for t, m in enumerate(monos)}
    A = ctx.zeros(g.n, D, D)
    for b in range(g.n):
        i = uctx.pos[b]
        for col, m in enumerate(monos):
            for mm, c in uctx.gen_mul(i, m).items():
                A[:, b, index[mm], col] = ctx.coeffs(c)
    par = [sum(a for t, a in enumerate(m) if uctx.par[t]) % 2 for m in monos]
    M = ModuleRep(g, par, A, [uctx.fmt({m: 1}).split("*", 1)[1] for m in monos], None, uctx.chi)
    M.pbw = uctx
    M.monomials = monos
    return M


def eta_character(g: LieSuperAlgebra, m_basis, chi: PChar, degree_of=None):
    """Values of eta on the basis of m (odd ones zero), most negative degree first.

    eta(x) is the p-th root of chi(x)^p + eta(x^[p]); the one-dimensional
    module K_eta is then a U_chi(m)-module.
    """
    ctx = g.ctx
    vecs = list(m_basis)
    if not vecs:
        return []
    B = np.stack(vecs, axis=2)
    if degree_of is None:
        order = list(range(len(vecs)))
    else:
        order = sorted(range(len(vecs)), key=lambda t: degree_of(vecs[t]))
    eta = [None] * len(vecs)
    for t in order:
        x = vecs[t]
        if g.is_homogeneous(x) == 1:
            eta[t] = 0
            continue
        xp = g.p_power(x)
        coords = ctx.solve(B, xp[:, :, None])
        if coords is None:
            raise ValueError("m is not closed under the p-map")
        val = 0
        for s in np.flatnonzero(coords.any(axis=(0, 2))):
            if eta[s] is None:
                raise ValueError("p-map does not lower the degree; order m by degree")
            val = ctx.add(val, ctx.mul(ctx.entry(coords, (int(s), 0)), eta[s]))
        eta[t] = frobenius_root(ctx, ctx.add(ctx.pow(chi(x), ctx.p), val))
    for s, x in enumerate(vecs):
        for t, y in enumerate(vecs):
            z = g.bracket(x, y)
            c = ctx.solve(B, z[:, :, None])
            tot = 0
            for r in np.flatnonzero(c.any(axis=(0, 2))):
                tot = ctx.add(tot, ctx.mul(ctx.entry(c, (int(r), 0)), eta[r]))
            if tot:
                raise ValueError("eta does not vanish on [m, m]")
    return eta
