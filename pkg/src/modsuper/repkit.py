"""Analysis of supermodules given by action matrices.

Irreducibility uses a graded version of Norton's test: an even element a of
U_chi(g) and a scalar c such that ker(a - c) has at most one dimension in
each parity; the homogeneous kernel vectors are spun up in M and in the
dual.  Spinning a homogeneous vector always produces a graded submodule.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .exactlin import EchelonSpace
from .pbw import ModuleRep, UAlgebraCtx, induced_module, one_dim_module, reduced_dim, regular_module
from .superlie import LieSuperAlgebra, PChar, super_kw_divisor

__all__ = [
    "UnknownError",
    "SimplicityResult",
    "EndoData",
    "CompSeries",
    "CartanData",
    "is_simple",
    "spin",
    "composition_factors",
    "endo_superalgebra",
    "find_isomorphism",
    "isomorphic",
    "m_invariants",
    "freeness_check",
    "kw_audit",
    "is_semisimple",
    "cartan_data",
    "w_dim_check",
    "pim_decomposition",
    "fingerprint",
    "hom_space",
    "head_class",
    "pim_table",
    "adapted_algebra",
]

BUDGET = 64
EXHAUSTIVE_DIM = 8
EXHAUSTIVE_LIMIT = 20000
KRON_LIMIT = 48


class UnknownError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# spinning
# ---------------------------------------------------------------------------

def _gens(M: ModuleRep, transpose=False):
    ctx = M.ctx
    gs = [M.action[:, t] for t in range(len(M.indices))]
    if transpose:
        gs = [ctx.transpose(a) for a in gs]
    return gs


def spin(M: ModuleRep, vecs: np.ndarray, transpose=False, gens=None) -> EchelonSpace:
    """Smallest subspace containing the rows of vecs (k, m, d) stable under the generators."""
    ctx = M.ctx
    gens = gens if gens is not None else _gens(M, transpose)
    space = EchelonSpace(ctx, M.dim)
    new = space.add(vecs)
    if not gens:
        return space
    G = np.concatenate(gens, axis=1)  # (k, n*d, d) stacked vertically
    while new.shape[1] and space.dim < M.dim:
        # images of the new rows under every generator, as rows
        imgs = ctx.matmul(G, ctx.transpose(new))  # (k, n*d, r)
        n = len(gens)
        imgs = imgs.reshape(ctx.k, n, M.dim, -1)
        rows = np.moveaxis(imgs, 2, 3).reshape(ctx.k, -1, M.dim)
        new = space.add(rows)
    return space


# ---------------------------------------------------------------------------
# MeatAxe
# ---------------------------------------------------------------------------

@dataclass
class SimplicityResult:
    simple: bool | None
    submodule: np.ndarray | None = None     # rows spanning a proper graded submodule
    certificate: dict = field(default_factory=dict)
    seed: int = 0

    def __bool__(self):
        return bool(self.simple)

    def to_json(self) -> dict:
        out = {"simple": self.simple, "seed": self.seed}
        if self.submodule is not None:
            out["submoduleDim"] = int(self.submodule.shape[1])
        out["certificate"] = {k: v for k, v in self.certificate.items()
                              if isinstance(v, (int, str, list, bool))}
        return out


class _RandomElements:
    """Random even elements of the image of U_chi(g) (product replacement style)."""

    def __init__(self, M: ModuleRep, rng: random.Random):
        ctx = M.ctx
        self.ctx, self.rng = ctx, rng
        gens = _gens(M)
        ev = [A for t, A in enumerate(gens) if M.generator_parity(t) == 0]
        od = [A for t, A in enumerate(gens) if M.generator_parity(t) == 1]
        pool = list(ev)
        for a, b in itertools.combinations_with_replacement(range(len(od)), 2):
            pool.append(ctx.matmul(od[a], od[b]))
            if len(pool) > 24:
                break
        if not pool:
            pool = [ctx.zeros(M.dim, M.dim)]
        self.pool = pool
        self.dim = M.dim

    def next(self):
        ctx, rng = self.ctx, self.rng
        i, j = rng.randrange(len(self.pool)), rng.randrange(len(self.pool))
        prod = ctx.matmul(self.pool[i], self.pool[j])
        if len(self.pool) < 40:
            self.pool.append(prod)
        else:
            self.pool[rng.randrange(len(self.pool))] = prod
        a = ctx.zeros(self.dim, self.dim)
        for A in rng.sample(self.pool, min(4, len(self.pool))):
            a = ctx.add_arr(a, ctx.scale(A, ctx.random(rng, nonzero=True)))
        return a


def _block_kernel(ctx, A, idx):
    """Kernel of A restricted to the coordinate block idx (A preserves it), in full coordinates."""
    if len(idx) == 0:
        return ctx.zeros(0, A.shape[1])
    sub = A[:, idx][:, :, idx]
    ker = ctx.kernel(sub)
    out = ctx.zeros(ker.shape[2], A.shape[1])
    out[:, :, idx] = ctx.transpose(ker)
    return out


def _roots_in_field(ctx, poly):
    return [c for c in ctx.elements() if ctx.poly_eval(poly, c) == 0]


def _annihilator(ctx, rows):
    """Vectors m with w(m) = 0 for every row w, as rows."""
    return ctx.transpose(ctx.kernel(rows))


def is_simple(M: ModuleRep, seed: int = 0, budget: int = BUDGET) -> SimplicityResult:
    """Graded Norton irreducibility test with an exhaustive fallback for small dims."""
    ctx = M.ctx
    rng = random.Random(seed)
    d = M.dim
    if d == 0:
        return SimplicityResult(False, None, {"reason": "zero module"}, seed)
    if d == 1:
        return SimplicityResult(True, None, {"reason": "one-dimensional"}, seed)
    idx0 = np.flatnonzero(M.parity == 0)
    idx1 = np.flatnonzero(M.parity == 1)
    gens = _gens(M)
    gensT = _gens(M, transpose=True)
    elems = _RandomElements(M, rng)
    for attempt in range(budget):
        a = elems.next()
        blk = idx0 if len(idx0) else idx1
        sub = a[:, blk][:, :, blk]
        v = ctx.zeros(len(blk))
        for t in range(len(blk)):
            v[:, t] = ctx.coeffs(ctx.random(rng))
        if not v.any():
            continue
        mp = ctx.minpoly_vector(sub, v)
        roots = _roots_in_field(ctx, mp)
        rng.shuffle(roots)
        for c in roots:
            ac = ctx.sub_arr(a, ctx.scale(ctx.eye(d), c))
            k0 = _block_kernel(ctx, ac, idx0)
            k1 = _block_kernel(ctx, ac, idx1)
            kers = [k for k in (k0, k1) if k.shape[1]]
            # spin one random homogeneous kernel vector per parity
            for K in kers:
                coeffs = ctx.zeros(1, K.shape[1])
                for t in range(K.shape[1]):
                    coeffs[:, 0, t] = ctx.coeffs(ctx.random(rng))
                if not coeffs.any():
                    coeffs[0, 0, 0] = 1
                w = ctx.matmul(coeffs, K)
                S = spin(M, w, gens=gens)
                if S.dim < d:
                    return SimplicityResult(False, S.basis(), {
                        "attempt": attempt, "eigenvalue": c, "reason": "proper spin"}, seed)
            if k0.shape[1] > 1 or k1.shape[1] > 1:
                continue
            acT = ctx.transpose(ac)
            dk = [k for k in (_block_kernel(ctx, acT, idx0), _block_kernel(ctx, acT, idx1))
                  if k.shape[1]]
            for K in dk:
                S = spin(M, K, gens=gensT)
                if S.dim < d:
                    ann = _annihilator(ctx, S.basis())
                    return SimplicityResult(False, ann, {
                        "attempt": attempt, "eigenvalue": c, "reason": "proper dual spin"}, seed)
            return SimplicityResult(True, None, {
                "attempt": attempt, "eigenvalue": c,
                "element": a, "kernel": [K for K in kers],
                "nullity": [int(k0.shape[1]), int(k1.shape[1])],
                "reason": "Norton"}, seed)
    if d <= EXHAUSTIVE_DIM:
        res = _exhaustive(M, gens)
        if res is not None:
            res.seed = seed
            return res
    return SimplicityResult(None, None, {"reason": f"inconclusive after {budget} elements"}, seed)


def _projective_points(ctx, n):
    """One representative per line of F^n (first nonzero coordinate 1)."""
    for lead in range(n):
        for tail in itertools.product(range(ctx.q), repeat=n - lead - 1):
            yield [0] * lead + [1] + list(tail)


def _exhaustive(M, gens):
    ctx = M.ctx
    d = M.dim
    count = 0
    for idx in (np.flatnonzero(M.parity == 0), np.flatnonzero(M.parity == 1)):
        if len(idx) == 0:
            continue
        if (ctx.q ** len(idx) - 1) // (ctx.q - 1) > EXHAUSTIVE_LIMIT:
            return None
        for pt in _projective_points(ctx, len(idx)):
            v = ctx.zeros(1, d)
            v[:, 0, idx] = ctx.lift(np.array(pt))
            S = spin(M, v, gens=gens)
            count += 1
            if S.dim < d:
                return SimplicityResult(False, S.basis(), {"reason": "exhaustive", "checked": count})
    return SimplicityResult(True, None, {"reason": "exhaustive", "checked": count})


# ---------------------------------------------------------------------------
# endomorphisms and isomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndoData:
    dim_even: int
    dim_odd: int

    @property
    def type(self) -> str | None:
        if (self.dim_even, self.dim_odd) == (1, 0):
            return "M"
        if (self.dim_even, self.dim_odd) == (1, 1):
            return "Q"
        return None


def _hom_system(ctx, A_list, B_list, par_A, par_B, gpar, odd):
    """Linear system for phi: B-module <- A-module with phi A_x = s B_x phi.

    phi is d_B x d_A, restricted to entries respecting the requested parity.
    Returns (kernel basis as list of matrices).
    """
    dA, dB = len(par_A), len(par_B)
    mask = (par_B[:, None] + par_A[None, :]) % 2 == (1 if odd else 0)
    var = np.flatnonzero(mask.reshape(-1))
    if var.size == 0:
        return []
    rows = []
    IA = np.eye(dA, dtype=np.int64)
    IB = np.eye(dB, dtype=np.int64)
    for A, B, q in zip(A_list, B_list, gpar):
        s = -1 if (odd and q) else 1
        # vec(phi A) = (I_B kron A^T) vec(phi);  vec(B phi) = (B kron I_A) vec(phi)
        L = np.stack([np.kron(IB, A[l].T) for l in range(ctx.k)])
        R = np.stack([np.kron(B[l], IA) for l in range(ctx.k)])
        E = (L - s * R) % ctx.p
        E = E[:, :, var]
        E = E[:, E.any(axis=(0, 2)), :]
        if E.shape[1]:
            rows.append(E)
    if not rows:
        ker = ctx.eye(len(var))
    else:
        S = np.concatenate(rows, axis=1)
        ker = ctx.kernel(S)
    out = []
    for t in range(ker.shape[2]):
        phi = ctx.zeros(dB * dA)
        phi[:, var] = ker[:, :, t]
        out.append(phi.reshape(ctx.k, dB, dA))
    return out


def hom_space(M: ModuleRep, N: ModuleRep, odd=False):
    """Basis of homogeneous module maps M -> N of the given parity."""
    ctx = M.ctx
    gpar = [M.generator_parity(t) for t in range(len(M.indices))]
    return _hom_system(ctx, _gens(M), _gens(N), M.parity, N.parity, gpar, odd)


def endo_superalgebra(M: ModuleRep, certificate: SimplicityResult | None = None) -> EndoData:
    """Dimensions of the even and odd parts of End(M); checks the Clifford relation."""
    ctx = M.ctx
    if M.dim > KRON_LIMIT:
        if certificate is None:
            certificate = is_simple(M)
        if not certificate.simple:
            raise UnknownError("endomorphisms of large non-simple modules are not supported")
        return _endo_simple_large(M, certificate)
    ev = hom_space(M, M, odd=False)
    od = hom_space(M, M, odd=True)
    data = EndoData(len(ev), len(od))
    if data == EndoData(1, 1):
        J = od[0]
        J2 = ctx.matmul(J, J)
        c = ctx.entry(J2, (0, 0))
        if not c or not np.array_equal(J2, ctx.scale(ctx.eye(M.dim), c)):
            # odd nilpotent endomorphism: not of type Q
            return EndoData(1, 1)
        M.clifford_square = c
    return data


def _endo_simple_large(M: ModuleRep, cert: SimplicityResult) -> EndoData:
    """Schur for a certified simple module: odd maps are fixed by the image of v0."""
    ctx = M.ctx
    kers = cert.certificate["kernel"]
    nul = cert.certificate["nullity"]
    if nul != [1, 1]:
        return EndoData(1, 0)
    v0 = kers[0][:, 0, :]
    v1 = kers[1][:, 0, :]
    # build spin basis of M from v0 recording words, propagate v1 along the same words
    gens = _gens(M)
    gpar = [M.generator_parity(t) for t in range(len(M.indices))]
    space = EchelonSpace(ctx, M.dim)
    space.add(v0)
    basis_src = [v0]
    basis_img = [v1]
    frontier = [(v0, v1)]
    while frontier and space.dim < M.dim:
        nxt = []
        for x, y in frontier:
            for A, q in zip(gens, gpar):
                ax = ctx.matmul(A, x[:, :, None])[:, :, 0]
                if space.add(ax).shape[1]:
                    ay = ctx.matmul(A, y[:, :, None])[:, :, 0]
                    # phi(A x) = (-1)^{|A|} A phi(x) for odd phi
                    if q:
                        ay = ctx.neg_arr(ay)
                    basis_src.append(ax)
                    basis_img.append(ay)
                    nxt.append((ax, ay))
        frontier = nxt
    S = np.stack(basis_src, axis=2)
    T = np.stack(basis_img, axis=2)
    phi = ctx.matmul(T, ctx.inverse(S))
    for A, q in zip(gens, gpar):
        lhs = ctx.matmul(phi, A)
        rhs = ctx.matmul(A, phi)
        if q:
            rhs = ctx.neg_arr(rhs)
        if not np.array_equal(lhs, rhs):
            return EndoData(1, 0)
    J2 = ctx.matmul(phi, phi)
    c = ctx.entry(J2, (0, 0))
    if not c or not np.array_equal(J2, ctx.scale(ctx.eye(M.dim), c)):
        return EndoData(1, 0)
    M.clifford_square = c
    return EndoData(1, 1)


def find_isomorphism(M: ModuleRep, N: ModuleRep):
    """An even or odd invertible module map M -> N, or None (simple modules)."""
    ctx = M.ctx
    if M.dim != N.dim:
        return None
    rng = random.Random(0)
    for odd in (False, True):
        hs = hom_space(M, N, odd=odd)
        for phi in hs:
            if ctx.rank(phi) == M.dim:
                return phi, odd
        # a combination may be invertible even if no basis element is
        for _ in range(16 if len(hs) > 1 else 0):
            phi = ctx.zeros(N.dim, M.dim)
            for h in hs:
                phi = ctx.add_arr(phi, ctx.scale(h, ctx.random(rng)))
            if ctx.rank(phi) == M.dim:
                return phi, odd
    return None


def isomorphic(M: ModuleRep, N: ModuleRep) -> bool:
    return find_isomorphism(M, N) is not None


# ---------------------------------------------------------------------------
# composition factors
# ---------------------------------------------------------------------------

_WORDS_SEED = 20240601


def _trace_words(M: ModuleRep, count=16):
    """Fixed seeded words in the generators (even overall)."""
    rng = random.Random(_WORDS_SEED)
    n = len(M.indices)
    words = []
    for _ in range(count):
        L = rng.randrange(1, 5)
        w = [rng.randrange(n) for _ in range(L)]
        if sum(M.generator_parity(t) for t in w) % 2:
            w.append(w[-1] if M.generator_parity(w[-1]) else next(
                (t for t in range(n) if M.generator_parity(t)), w[-1]))
        words.append(w)
    return words


def fingerprint(M: ModuleRep, endo: EndoData | None = None):
    ctx = M.ctx
    traces = []
    for w in _trace_words(M):
        A = ctx.eye(M.dim)
        for t in w:
            A = ctx.matmul(A, M.action[:, t])
        tr = 0
        for i in range(M.dim):
            tr = ctx.add(tr, ctx.entry(A, (i, i)))
        traces.append(tr)
    if endo is None:
        endo = endo_superalgebra(M)
    return (M.dim, (endo.dim_even, endo.dim_odd), tuple(traces))


@dataclass
class SimpleClass:
    module: ModuleRep
    endo: EndoData
    fp: tuple
    label: str = ""

    @property
    def dim(self):
        return self.module.dim

    @property
    def type(self):
        return self.endo.type


@dataclass
class CompSeries:
    classes: list            # SimpleClass
    multiplicity: list       # ints, aligned with classes

    def total_dim(self) -> int:
        return sum(c.dim * m for c, m in zip(self.classes, self.multiplicity))

    def summary(self):
        return sorted(((c.dim, c.type, m) for c, m in zip(self.classes, self.multiplicity)))

    def index_of(self, S: ModuleRep, endo=None) -> int | None:
        fp = fingerprint(S, endo)
        for t, c in enumerate(self.classes):
            if c.fp == fp and isomorphic(S, c.module):
                return t
        return None


def _split(M: ModuleRep, sub_rows: np.ndarray):
    ctx = M.ctx
    R, piv = ctx.rref(sub_rows)
    T = _complete(ctx, ctx.transpose(R), M.dim, piv)
    return M.sub_quotient(T, len(piv))


def simple_factors(M: ModuleRep, seed: int = 0) -> list[ModuleRep]:
    """All composition factors (with repetition), found by recursive splitting."""
    out = []
    stack = [M]
    while stack:
        N = stack.pop()
        res = is_simple(N, seed=seed)
        if res.simple is None:
            raise UnknownError(f"MeatAxe inconclusive on a {N.dim}-dimensional module")
        if res.simple:
            N.certificate = res
            out.append(N)
            continue
        sub, quo = _split(N, res.submodule)
        stack.append(quo)
        stack.append(sub)
    return out


def classify(factors, known: list | None = None) -> CompSeries:
    classes = list(known) if known else []
    mult = [0] * len(classes)
    for S in factors:
        endo = endo_superalgebra(S, getattr(S, "certificate", None))
        fp = fingerprint(S, endo)
        for t, c in enumerate(classes):
            # traces only filter; isomorphism is always decided by an intertwiner
            if c.fp == fp and isomorphic(S, c.module):
                mult[t] += 1
                break
        else:
            classes.append(SimpleClass(S, endo, fp))
            mult.append(1)
    return CompSeries(classes, mult)


def composition_factors(M: ModuleRep, seed: int = 0, known=None) -> CompSeries:
    cs = classify(simple_factors(M, seed), known)
    assert cs.total_dim() == M.dim
    return cs


# ---------------------------------------------------------------------------
# invariants, freeness, KW
# ---------------------------------------------------------------------------

def m_invariants(M: ModuleRep, m_basis, eta) -> np.ndarray:
    """Common kernel of rho(x) - eta(x) over a basis of m, as columns."""
    ctx = M.ctx
    if not len(m_basis):
        return ctx.eye(M.dim)
    blocks = []
    for x, e in zip(m_basis, eta):
        A = M.rho_elem(x)
        if e:
            A = ctx.sub_arr(A, ctx.scale(ctx.eye(M.dim), e))
        blocks.append(A)
    return ctx.kernel(np.concatenate(blocks, axis=1))


def _sdim_of(g, vecs):
    par = [g.is_homogeneous(v) for v in vecs]
    return par.count(0), par.count(1)


@dataclass
class FreenessReport:
    dim: int
    dim_u_m: int
    dim_invariants: int

    @property
    def ok(self):
        return self.dim == self.dim_u_m * self.dim_invariants


def freeness_check(M: ModuleRep, m_basis, eta) -> FreenessReport:
    g = M.g
    e, o = _sdim_of(g, m_basis)
    inv = m_invariants(M, m_basis, eta)
    return FreenessReport(M.dim, g.ctx.p ** e * 2 ** o, int(inv.shape[2]))


@dataclass
class KWReport:
    divisor: int
    dims: list
    quotients: list

    @property
    def ok(self):
        return all(d % self.divisor == 0 for d in self.dims)

    @property
    def violations(self):
        return [d for d in self.dims if d % self.divisor]


def kw_audit(g: LieSuperAlgebra, chi: PChar, modules) -> KWReport:
    D = super_kw_divisor(g, chi)
    dims = [M if isinstance(M, int) else M.dim for M in modules]
    return KWReport(D, dims, [d / D for d in dims])


# ---------------------------------------------------------------------------
# semisimplicity and Cartan data
# ---------------------------------------------------------------------------

def _monomial_images(uctx: UAlgebraCtx, S: ModuleRep):
    """Matrix with one column per PBW monomial: vec of its action on S."""
    ctx = uctx.ctx
    monos = uctx.monomials()
    gens = {uctx.pos[b]: S.rho(b) for b in range(uctx.g.n)}
    cache = {tuple([0] * uctx.n): ctx.eye(S.dim)}

    def act(m):
        A = cache.get(m)
        if A is not None:
            return A
        j = next(t for t, a in enumerate(m) if a)
        rest = m[:j] + (m[j] - 1,) + m[j + 1:]
        A = ctx.matmul(gens[j], act(rest))
        cache[m] = A
        return A

    cols = [act(m).reshape(ctx.k, -1) for m in monos]
    return np.stack(cols, axis=2)


def radical_dim(uctx: UAlgebraCtx, simples) -> int:
    """dim of the Jacobson radical: the joint kernel of U -> End(S) over all simples."""
    ctx = uctx.ctx
    blocks = [_monomial_images(uctx, S) for S in simples]
    big = np.concatenate(blocks, axis=1)
    return reduced_dim(uctx.g) - ctx.rank(big)


def baby_verma_family(uctx: UAlgebraCtx, borel=None):
    from .pbw import baby_verma, borel_data, lambda_set
    if borel is None:
        borel = borel_data(uctx.g)
    ws = lambda_set(uctx, borel[0])
    if not ws.solutions:
        from .grading import FieldTooSmallError
        raise FieldTooSmallError(f"no weight solves lambda^p - lambda^[p] = chi^p over F_{uctx.ctx.q}; "
                                 "enlarge the field")
    return [(lam, baby_verma(uctx, borel, lam)) for lam in ws.solutions]


def simples_from_vermas(uctx: UAlgebraCtx, seed=0, borel=None):
    """Simple classes from the composition factors of every baby Verma."""
    vermas = baby_verma_family(uctx, borel)
    classes = []
    table = {}
    for lam, Z in vermas:
        cs = composition_factors(Z, seed, known=classes)
        classes = cs.classes
        table[lam] = cs.multiplicity + [0] * 0
    # pad multiplicity vectors to the final class count
    for lam in table:
        table[lam] = table[lam] + [0] * (len(classes) - len(table[lam]))
    return classes, table, vermas


def is_semisimple(uctx: UAlgebraCtx, seed=0, bound=600) -> bool:
    """Radical zero, with the simples taken from the baby Vermas (cross-checked by Wedderburn)."""
    D = reduced_dim(uctx.g)
    if D > bound:
        from .pbw import DimensionBoundError
        raise DimensionBoundError(f"dim U_chi = {D} exceeds the bound {bound}")
    classes, _, _ = simples_from_vermas(uctx, seed)
    rad = radical_dim(uctx, [c.module for c in classes])
    uctx.last_radical_dim = rad
    wed = sum((c.dim ** 2 if c.type == "M" else c.dim ** 2 // 2) for c in classes)
    if rad == 0 and wed != D:
        raise AssertionError("semisimple but Wedderburn count disagrees")
    return rad == 0


@dataclass
class CartanData:
    classes: list
    pim_dims: list
    regular_multiplicity: list
    verma_table: dict
    dim_u: int

    @property
    def n(self):
        return [c.dim if c.type == "M" else c.dim // 2 for c in self.classes]

    def wedderburn_ok(self) -> bool:
        return sum(a * b for a, b in zip(self.pim_dims, self.n)) == self.dim_u

    def to_json(self) -> dict:
        return {
            "simples": [{"dim": c.dim, "type": c.type} for c in self.classes],
            "pimDims": self.pim_dims,
            "regularMultiplicity": self.regular_multiplicity,
            "dimU": self.dim_u,
            "wedderburn": self.wedderburn_ok(),
        }


def cartan_data(uctx: UAlgebraCtx, seed=0, regular=True, bound=600) -> CartanData:
    """Simples, PIM dimensions by reciprocity, and regular-module multiplicities."""
    classes, table, vermas = simples_from_vermas(uctx, seed)
    pim = []
    for t, c in enumerate(classes):
        eps = 2 if c.type == "Q" else 1
        pim.append(eps * sum(table[lam][t] * Z.dim for lam, Z in vermas))
    reg = None
    if regular:
        R = regular_module(uctx, bound)
        cs = composition_factors(R, seed, known=classes)
        if len(cs.classes) != len(classes):
            raise AssertionError("regular module has a simple not seen in any baby Verma")
        reg = cs.multiplicity
    return CartanData(classes, pim, reg, table, reduced_dim(uctx.g))


# ---------------------------------------------------------------------------
# Theorem on End(Q_m)
# ---------------------------------------------------------------------------

@dataclass
class WDimReport:
    dim_u: int
    delta: int
    dim_q: int
    end_even: int
    end_odd: int

    @property
    def expected(self):
        return self.dim_u // (self.delta ** 2)

    @property
    def ok(self):
        return self.end_even + self.end_odd == self.expected and self.dim_u % self.delta ** 2 == 0


def adapted_algebra(g: LieSuperAlgebra, chi: PChar, vectors):
    """Rebase g so the given homogeneous vectors are the first basis elements."""
    from .superlie import rebase, transport_chi
    ctx = g.ctx
    vecs = [v[:, :, 0] if v.ndim == 3 else v for v in vectors]
    sp = EchelonSpace(ctx, g.n)
    if vecs:
        sp.add(np.stack(vecs, axis=1))
    basis = list(vecs)
    for b in range(g.n):
        e = g.basis_vector(b)
        if sp.add(e).shape[1]:
            basis.append(e)
    labels = [f"m{t}" for t in range(len(vecs))] + [f"c{t}" for t in range(g.n - len(vecs))]
    h = rebase(g, basis, labels)
    return h, transport_chi(chi, h), list(range(len(vecs)))


def w_dim_check(g: LieSuperAlgebra, chi: PChar, m_basis, eta) -> WDimReport:
    """dim End(Q_m) against dim U / delta^2, with Q_m induced from K_eta over m."""
    h, chi_h, idx = adapted_algebra(g, chi, m_basis)
    uctx = UAlgebraCtx(h, chi_h)
    W = one_dim_module(h, idx, eta, 0, chi_h)
    Q = induced_module(uctx, idx, W)
    ev = hom_space(Q, Q, odd=False)
    od = hom_space(Q, Q, odd=True)
    e = sum(1 for b in idx if h.parity[b] == 0)
    delta = g.ctx.p ** e * 2 ** (len(idx) - e)
    rep = WDimReport(reduced_dim(g), delta, Q.dim, len(ev), len(od))
    rep.module = Q
    return rep


# ---------------------------------------------------------------------------
# projective indecomposables
# ---------------------------------------------------------------------------

def _weight_endomorphisms(Q: ModuleRep, cartan, lam, uctx2):
    """Even maps phi_w(c (x) 1) = c w for even lambda-weight vectors w of Q (Frobenius reciprocity)."""
    ctx = Q.ctx
    blocks = []
    for h, l in zip(cartan, lam):
        A = Q.rho(h)
        blocks.append(ctx.sub_arr(A, ctx.scale(ctx.eye(Q.dim), l)))
    ker0 = _block_kernel_cols(ctx, np.concatenate(blocks, axis=1),
                              np.flatnonzero(Q.parity == 0), Q.dim)
    monos = Q.complement_monomials
    gens = {uctx2.pos[b]: Q.rho(b) for b in range(Q.g.n)}
    maps = []
    for t in range(ker0.shape[2]):
        cache = {tuple([0] * Q.g.n): ker0[:, :, t]}

        def act(m):
            v = cache.get(m)
            if v is not None:
                return v
            j = next(s for s, a in enumerate(m) if a)
            rest = m[:j] + (m[j] - 1,) + m[j + 1:]
            v = ctx.matmul(gens[j], act(rest)[:, :, None])[:, :, 0]
            cache[m] = v
            return v

        maps.append(np.stack([act(m) for m in monos], axis=2))
    return maps


def _block_kernel_cols(ctx, A, idx, d):
    sub = A[:, :, idx]
    ker = ctx.kernel(sub)
    out = ctx.zeros(d, ker.shape[2])
    out[:, idx, :] = ker
    return out


def _fitting(ctx, phi, d):
    """Image and kernel of phi^d (columns)."""
    P = ctx.power(phi, d)
    R, piv = ctx.rref(ctx.transpose(P))
    img = ctx.transpose(R)
    ker = ctx.kernel(P)
    return img, ker


def pim_decomposition(uctx: UAlgebraCtx, lam, seed=0, tries=256):
    """Indecomposable summands of U (x)_{U(h)} K_lambda by Fitting splitting.

    Returns a list of ModuleRep summands, each certified local by ``tries``
    random endomorphisms being nilpotent or invertible.
    """
    from .pbw import borel_data
    g, ctx = uctx.g, uctx.ctx
    cartan = borel_data(g)[0]
    W = one_dim_module(g, cartan, lam, 0, uctx.chi)
    Q = induced_module(uctx, cartan, W)
    maps = _weight_endomorphisms(Q, cartan, lam, Q.pbw)
    rng = random.Random(seed)
    d = Q.dim

    def rand_endo():
        phi = ctx.zeros(d, d)
        for A in maps:
            phi = ctx.add_arr(phi, ctx.scale(A, ctx.random(rng)))
        return phi

    # each summand: (basis columns B, projection E onto it along the other summands)
    summands = [(ctx.eye(d), ctx.eye(d))]
    done = []
    while summands:
        B, E = summands.pop()
        r = B.shape[2]
        split = False
        for _ in range(tries):
            phi = ctx.matmul(E, ctx.matmul(rand_endo(), E))
            # restrict to span(B)
            coords = ctx.solve(B, ctx.matmul(phi, B))
            img, ker = _fitting(ctx, coords, r)
            if 0 < img.shape[2] < r:
                B1 = ctx.matmul(B, img)
                B2 = ctx.matmul(B, ker)
                # projections within span(B): coordinates w.r.t. [img | ker]
                T = np.concatenate([img, ker], axis=2)
                Tinv = ctx.inverse(T)
                Binv = _left_inverse(ctx, B)
                k1 = img.shape[2]
                P1 = ctx.matmul(T[:, :, :k1], Tinv[:, :k1, :])
                P2 = ctx.matmul(T[:, :, k1:], Tinv[:, k1:, :])
                E1 = ctx.matmul(B, ctx.matmul(P1, ctx.matmul(Binv, E)))
                E2 = ctx.matmul(B, ctx.matmul(P2, ctx.matmul(Binv, E)))
                summands.append((B1, E1))
                summands.append((B2, E2))
                split = True
                break
        if not split:
            done.append(B)
    out = []
    for B in done:
        T = _complete(ctx, B, d)
        sub, _ = Q.change_basis(T), None
        k = B.shape[2]
        P = ModuleRep(g, sub.parity[:k], sub.action[:, :, :k, :k].copy(), None, None, uctx.chi)
        out.append(P)
    return Q, out


def _left_inverse(ctx, B):
    """L with L B = I for a full-column-rank B."""
    R, piv = ctx.rref(ctx.transpose(B))
    Bt = ctx.transpose(B)
    sub = B[:, piv, :]
    inv = ctx.inverse(sub)
    L = ctx.zeros(B.shape[2], B.shape[1])
    L[:, :, piv] = inv
    del R, Bt
    return L


def _complete(ctx, B, d, piv=None):
    """Extend the columns of B by standard basis vectors outside its pivot set."""
    if piv is None:
        _, piv = ctx.rref(ctx.transpose(B))
    rest = [i for i in range(d) if i not in set(piv)]
    E = ctx.zeros(d, len(rest))
    E[0, rest, range(len(rest))] = 1
    return np.concatenate([B, E], axis=2)


def head_class(P: ModuleRep, classes) -> int | None:
    """Index of the simple class S with Hom(P, S) nonzero (P local, so its head)."""
    for t, c in enumerate(classes):
        if hom_space(P, c.module, odd=False) or hom_space(P, c.module, odd=True):
            return t
    return None


def pim_table(uctx: UAlgebraCtx, classes, seed=0) -> dict:
    """class index -> (dim P, EndoData of P), from Fitting splittings of U (x)_{U(h)} K_lambda."""
    from .pbw import borel_data, lambda_set
    out = {}
    for lam in lambda_set(uctx, borel_data(uctx.g)[0]).solutions:
        _, parts = pim_decomposition(uctx, lam, seed)
        for P in parts:
            t = head_class(P, classes)
            if t is None:
                raise AssertionError("indecomposable summand with no simple head")
            if t not in out:
                out[t] = (P.dim, endo_superalgebra(P))
        if len(out) == len(classes):
            break
    return out
