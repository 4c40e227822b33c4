"""Root combinatorics and the reduction from general to nilpotent p-characters.

Positive systems are sets of integer roots; a set is accepted as a positive
system when a linear functional strictly positive on it exists (found by a
small linear program) and it contains exactly one of each pair of opposite
root lines.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .exactlin import jordan_chevalley
from .pbw import ModuleRep, UAlgebraCtx, induced_module
from .repkit import (_left_inverse, baby_verma_family, composition_factors, find_isomorphism,
                     is_simple)
from .superlie import (AlgebraError, LieSuperAlgebra, PChar, RootSystem, chi_from_element,
                       element_from_chi, root_decomposition)

__all__ = [
    "ReductionError",
    "PositiveSystem",
    "LeviData",
    "positive_system",
    "standard_positive_system",
    "odd_reflection",
    "enumerate_phi_u",
    "jordan_decomp_chi",
    "levi_parabolic",
    "subalgebra",
    "u_invariants_check",
    "morita_desk_check",
]


class ReductionError(RuntimeError):
    """A check that the theory says cannot fail has failed."""


def _neg(a):
    return tuple(-x for x in a)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# positive systems
# ---------------------------------------------------------------------------

def _functional(roots) -> np.ndarray | None:
    """f with f(a) >= 1 on every root in roots, or None."""
    roots = list(roots)
    if not roots:
        return np.zeros(0)
    A = np.array(roots, dtype=float)
    res = linprog(np.zeros(A.shape[1]), A_ub=-A, b_ub=-np.ones(len(roots)),
                  bounds=[(None, None)] * A.shape[1], method="highs")
    return res.x if res.status == 0 else None


def _simple_roots(pos) -> list:
    """Positive roots that are not a sum of two positive roots (within universe)."""
    pos = set(pos)
    out = []
    for a in pos:
        if not any(_add(b, c) == a for b in pos for c in pos):
            out.append(a)
    return sorted(out)


def _decompose(root, simple) -> np.ndarray | None:
    """Coefficients of root in the simple roots, if they are unique non-negative integers."""
    if not simple:
        return None
    S = np.array(simple, dtype=float).T
    c, *_ = np.linalg.lstsq(S, np.array(root, dtype=float), rcond=None)
    ci = np.rint(c).astype(int)
    if not np.array_equal(S @ ci, np.array(root)) or (ci < 0).any():
        return None
    return ci


@dataclass
class PositiveSystem:
    rs: RootSystem
    positive: frozenset
    simple: list = field(default_factory=list)

    def __post_init__(self):
        if not self.simple:
            self.simple = _simple_roots(self.positive)

    def contains(self, a) -> bool:
        return tuple(a) in self.positive

    def check(self) -> list[str]:
        errs = []
        for a in self.rs.roots:
            if (a in self.positive) == (_neg(a) in self.positive):
                errs.append(f"exactly one of +-{a} must be positive")
            if self.rs.root_type(a) == "iii" and self.rs.parity[a] == 1:
                if (a in self.positive) != (tuple(2 * x for x in a) in self.positive):
                    errs.append(f"line of {a} split")
        if _functional(self.positive) is None:
            errs.append("no separating functional")
        for a in self.positive:
            if _decompose(a, self.simple) is None:
                errs.append(f"{a} is not an N-combination of the simple roots")
        return errs

    def to_json(self) -> dict:
        return {"positive": sorted(list(a) for a in self.positive),
                "simple": [list(a) for a in self.simple]}


def positive_system(rs: RootSystem, roots) -> PositiveSystem:
    ps = PositiveSystem(rs, frozenset(tuple(a) for a in roots))
    errs = ps.check()
    if errs:
        raise ReductionError(f"not a positive system: {errs[:3]}")
    return ps


def standard_positive_system(rs: RootSystem, functional=None) -> PositiveSystem:
    if functional is None:
        r = len(rs.roots[0])
        functional = np.array([1000 ** (r - 1 - t) for t in range(r)])
    return positive_system(rs, [a for a in rs.roots if np.dot(functional, a) > 0])


def _reflect(rs: RootSystem, alpha, a):
    """Classical reflection s_alpha(a) for a non-isotropic alpha."""
    n = rs.form(alpha, alpha)
    c = 2 * rs.form(a, alpha)
    if c % n:
        raise ReductionError("non-integral reflection coefficient")
    return tuple(x - (c // n) * y for x, y in zip(a, alpha))


def odd_reflection(ps: PositiveSystem, delta) -> PositiveSystem:
    """Reflect at a simple root (odd, or even via r_{2 delta} when 2 delta is a root)."""
    rs = ps.rs
    delta = tuple(delta)
    if delta not in ps.simple:
        raise ReductionError(f"{delta} is not simple")
    line = rs.line(delta)
    new = (ps.positive - set(line)) | {_neg(a) for a in line}
    out = positive_system(rs, new)
    # even reflections must agree with the classical one
    if rs.parity[delta] == 0 or len(line) == 2:
        alpha = line[-1]
        image = frozenset(_reflect(rs, alpha, a) for a in ps.positive)
        if image != out.positive:
            raise ReductionError("even reflection does not match the set description")
    if (out.positive & ps.positive) != ps.positive - set(line):
        raise ReductionError("reflection changed more than one line")
    return out


def _closed(rs, S):
    S = set(S)
    return all(_add(a, b) in S for a in S for b in S if rs.is_root(_add(a, b)))


def _normalized(rs, S, by):
    S = set(S)
    return all(_add(a, b) in S for a in by for b in S if rs.is_root(_add(a, b)))


@dataclass
class PhiUSequence:
    lines: list            # each a tuple of roots (delta,) or (delta, 2 delta)
    systems: list          # PositiveSystem Phi_0+, ..., Phi_t+
    closed: list           # Psi_i closed, per i
    normalized: list       # Psi_i normalized by Phi_s+, per i
    convention: str

    @property
    def ok(self):
        return all(self.closed) and all(self.normalized)

    def to_json(self) -> dict:
        return {"lines": [[list(a) for a in L] for L in self.lines],
                "closed": self.closed, "normalized": self.normalized,
                "convention": self.convention}


def enumerate_phi_u(rs: RootSystem, phi_s_plus, phi_u, convention: str = "statement") -> PhiUSequence:
    """Order the u-lines by successive reflections at the lowest simple root in Phi_u.

    convention "proof" starts from Phi_s^- u Phi_u, "statement" from Phi_s^+ u Phi_u.
    """
    phi_s_plus = {tuple(a) for a in phi_s_plus}
    phi_u = {tuple(a) for a in phi_u}
    start = {_neg(a) for a in phi_s_plus} if convention == "proof" else set(phi_s_plus)
    ps = positive_system(rs, start | phi_u)
    systems = [ps]
    lines, remaining = [], set(phi_u)
    while remaining:
        cand = sorted(a for a in ps.simple if a in remaining)
        if not cand:
            raise ReductionError("no simple root lies in Phi_u; cannot continue the enumeration")
        delta = cand[0]
        line = rs.line(delta)
        ps = odd_reflection(ps, delta)
        systems.append(ps)
        lines.append(line)
        remaining -= set(line)
    closed, normalized = [], []
    psi = set()
    for line in lines:
        psi |= {_neg(a) for a in line}
        closed.append(_closed(rs, psi))
        normalized.append(_normalized(rs, psi, phi_s_plus))
    return PhiUSequence(lines, systems, closed, normalized, convention)


# ---------------------------------------------------------------------------
# Jordan decomposition and Levi data
# ---------------------------------------------------------------------------

def jordan_decomp_chi(g: LieSuperAlgebra, chi: PChar):
    """(chi_s, chi_n) from the Jordan decomposition of the element representing chi."""
    X = element_from_chi(g, chi)
    S, N = jordan_chevalley(g.to_matrix(X))
    xs, xn = g.try_coords(S), g.try_coords(N)
    if xs is None or xn is None:
        raise ReductionError("Jordan parts of chi are not in g")
    chi_s, chi_n = chi_from_element(g, xs), chi_from_element(g, xn)
    if chi_s + chi_n != chi:
        raise ReductionError("chi_s + chi_n != chi")
    return chi_s, chi_n


def subalgebra(g: LieSuperAlgebra, indices, family="sub") -> LieSuperAlgebra:
    """The subalgebra spanned by the given basis elements (closed under bracket and p-map)."""
    ctx = g.ctx
    idx = list(indices)
    pos = {b: t for t, b in enumerate(idx)}
    for a in idx:
        for b in idx:
            v = g.bracket_basis(a, b)
            if set(np.flatnonzero(v.any(axis=0)).tolist()) - set(idx):
                raise AlgebraError("indices do not span a subalgebra")
    override = {}
    for b in idx:
        if g.parity[b] == 0:
            v = g.pmap[b]
            supp = np.flatnonzero(v.any(axis=0)).tolist()
            if set(supp) - set(idx):
                raise AlgebraError("indices are not closed under the p-map")
            w = ctx.zeros(len(idx))
            w[:, [pos[s] for s in supp]] = v[:, supp]
            override[pos[b]] = w
    h = LieSuperAlgebra(ctx, [g.labels[b] for b in idx], g.parity[idx], [g.model[b] for b in idx],
                        g.v_parity, family, g.v_weights, g.dims, override)
    h.parent_indices = idx
    h.parent_algebra = g
    return h


def restrict_chi(chi: PChar, h: LieSuperAlgebra) -> PChar:
    return PChar(h, chi.values[:, h.parent_indices].copy())


@dataclass
class LeviData:
    g: LieSuperAlgebra
    l: list
    u: list
    u_minus: list
    p: list
    system: PositiveSystem
    phi_l: list
    phi_u: list

    @property
    def u_sdim(self):
        e = sum(1 for b in self.u if self.g.parity[b] == 0)
        return e, len(self.u) - e

    @property
    def scale(self) -> int:
        e, o = self.u_sdim
        return self.g.ctx.p ** e * 2 ** o

    def to_json(self) -> dict:
        lab = self.g.labels
        return {"l": [lab[b] for b in self.l], "u": [lab[b] for b in self.u],
                "uMinus": [lab[b] for b in self.u_minus],
                "simple": [list(a) for a in self.system.simple], "scale": self.scale}


def _neighbours(ps: PositiveSystem):
    for a in ps.simple:
        rs = ps.rs
        if rs.parity[a] == 0 and rs.form(a, a) == 0:
            continue
        yield odd_reflection(ps, a)


def levi_parabolic(g: LieSuperAlgebra, chi_s: PChar, chi: PChar | None = None) -> LeviData:
    """l = g_s and a parabolic p = l + u from a simple system adapted to l."""
    rs = root_decomposition(g)
    s = element_from_chi(g, chi_s)
    phi_l = []
    for a in rs.roots:
        if all(not g.bracket(s, g.basis_vector(b)).any() for b in rs.spaces[a]):
            phi_l.append(a)
    for b in rs.cartan:
        if g.bracket(s, g.basis_vector(b)).any():
            raise ValueError("chi_s is not supported on the standard Cartan subalgebra")
    L = set(phi_l)
    start = standard_positive_system(rs)
    seen = {start.positive}
    queue = deque([start])
    found = None
    while queue:
        ps = queue.popleft()
        pos_l = [a for a in ps.positive if a in L]
        if sorted(a for a in ps.simple if a in L) == _simple_roots(pos_l):
            found = ps
            break
        for nb in _neighbours(ps):
            if nb.positive not in seen:
                seen.add(nb.positive)
                queue.append(nb)
    if found is None:
        raise ReductionError("no simple system restricts to one of Phi(l)")
    l_idx = sorted(set(rs.cartan) | {b for a in phi_l for b in rs.spaces[a]})
    phi_u = sorted(a for a in found.positive if a not in L)
    u_idx = sorted(b for a in phi_u for b in rs.spaces[a])
    um_idx = sorted(b for a in phi_u for b in rs.spaces[_neg(a)])
    data = LeviData(g, l_idx, u_idx, um_idx, sorted(l_idx + u_idx), found, sorted(phi_l), phi_u)
    # invariants: p and l are restricted subalgebras, u an ideal of p, chi(u) = 0
    subalgebra(g, data.l)
    subalgebra(g, data.p)
    for a in data.p:
        for b in data.u:
            v = g.bracket_basis(a, b)
            if set(np.flatnonzero(v.any(axis=0)).tolist()) - set(data.u):
                raise ReductionError("u is not an ideal of p")
    if chi is not None and any(chi.on(b) for b in data.u):
        raise ReductionError("chi does not vanish on u")
    return data


# ---------------------------------------------------------------------------
# Morita checks
# ---------------------------------------------------------------------------

def _restrict_to(M: ModuleRep, K: np.ndarray, indices) -> ModuleRep:
    """Action of the given generators on the invariant subspace spanned by the columns of K."""
    ctx = M.ctx
    L = _left_inverse(ctx, K)
    A = ctx.zeros(len(indices), K.shape[2], K.shape[2])
    for t, b in enumerate(indices):
        img = ctx.matmul(M.rho(b), K)
        A[:, t] = ctx.matmul(L, img)
        if not np.array_equal(ctx.matmul(K, A[:, t]), img):
            raise ReductionError("subspace is not invariant")
    par = [int(M.parity[np.flatnonzero(K[:, :, c].any(axis=0))[0]]) for c in range(K.shape[2])]
    return ModuleRep(M.g, par, A, None, list(indices), M.chi)


@dataclass
class UInvReport:
    dim: int
    dim_u_invariants: int
    scale: int
    simple_over_l: bool | None
    module: ModuleRep | None = None

    @property
    def ok(self):
        return self.dim == self.scale * self.dim_u_invariants and self.simple_over_l is True


def u_invariants_check(M: ModuleRep, levi: LeviData, seed: int = 0) -> UInvReport:
    ctx = M.ctx
    if levi.u:
        K = ctx.kernel(np.concatenate([M.rho(b) for b in levi.u], axis=1))
    else:
        K = ctx.eye(M.dim)
    N = _restrict_to(M, K, levi.l) if K.shape[2] else None
    simple = is_simple(N, seed).simple if N is not None else False
    return UInvReport(M.dim, int(K.shape[2]), levi.scale, simple, N)


def _levi_borel(h: LieSuperAlgebra, levi: LeviData):
    """Cartan and positive indices of l (in h's numbering) for the chosen positive system."""
    rs = root_decomposition(levi.g)
    pos = {b: t for t, b in enumerate(h.parent_indices)}
    cartan = [pos[b] for b in rs.cartan]
    plus = sorted(pos[b] for a in levi.phi_l if a in levi.system.positive for b in rs.spaces[a])
    return cartan, plus


def _simples(uctx: UAlgebraCtx, borel, seed):
    classes = []
    for _, Z in baby_verma_family(uctx, borel):
        classes = composition_factors(Z, seed, known=classes).classes
    return classes


@dataclass
class MoritaReport:
    scale: int
    l_simples: list        # (dim, type)
    g_simples: list        # (dim, type)
    pairs: list            # (l index, g index)
    u_checks: list         # UInvReport per g simple
    levi: LeviData | None = None

    @property
    def ok(self):
        if not self.g_simples or len(self.l_simples) != len(self.g_simples):
            return False
        if sorted(i for i, _ in self.pairs) != list(range(len(self.l_simples))):
            return False
        if sorted(j for _, j in self.pairs) != list(range(len(self.g_simples))):
            return False
        for i, j in self.pairs:
            (dl, tl), (dg, tg) = self.l_simples[i], self.g_simples[j]
            if dg != dl * self.scale or tl != tg:
                return False
        return all(r.ok for r in self.u_checks)

    def to_json(self) -> dict:
        return {"scale": self.scale,
                "lSimples": [list(x) for x in self.l_simples],
                "gSimples": [list(x) for x in self.g_simples],
                "pairs": [list(x) for x in self.pairs],
                "uInvariants": [[r.dim, r.dim_u_invariants, r.simple_over_l] for r in self.u_checks],
                "ok": self.ok}


def morita_desk_check(g: LieSuperAlgebra, chi: PChar, seed: int = 0) -> MoritaReport:
    """Match simples of U_chi(g) with those of U_chi(l) through parabolic induction."""
    chi_s, _ = jordan_decomp_chi(g, chi)
    levi = levi_parabolic(g, chi_s, chi)
    h = subalgebra(g, levi.l, "levi")
    chi_h = restrict_chi(chi, h)
    uh = UAlgebraCtx(h, chi_h)
    l_classes = _simples(uh, _levi_borel(h, levi), seed)
    ug = UAlgebraCtx(g, chi)
    rs = root_decomposition(g)
    gpos = sorted(b for a in levi.system.positive for b in rs.spaces[a])
    gneg = sorted(b for b in range(g.n) if b not in gpos and b not in rs.cartan)
    g_classes = _simples(ug, (sorted(rs.cartan), gpos, gneg), seed)
    pairs, checks = [], []
    for i, c in enumerate(l_classes):
        T = c.module
        # extend T to p with u acting by zero, in the numbering of g
        A = T.ctx.zeros(len(levi.p), T.dim, T.dim)
        for t, b in enumerate(levi.p):
            if b in levi.l:
                A[:, t] = T.rho(levi.l.index(b))
        W = ModuleRep(g, T.parity, A, None, list(levi.p), chi)
        ind = induced_module(ug, levi.p, W)
        for j, d in enumerate(g_classes):
            if d.dim == ind.dim and find_isomorphism(ind, d.module) is not None:
                pairs.append((i, j))
                break
    for d in g_classes:
        checks.append(u_invariants_check(d.module, levi, seed))
    return MoritaReport(levi.scale, [(c.dim, c.type) for c in l_classes],
                        [(d.dim, d.type) for d in g_classes], pairs, checks, levi)
