"""Exact arithmetic over F_{p^k} and dense linear algebra on top of numpy.

Field elements are encoded as integer *codes*: the code of
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` (mod the context's modulus) is
``sum c_i p^i``.  Arrays of field elements are stored *layered*: an int64
array of shape ``(k, *shape)`` holding the coefficient of ``x^i`` in layer
``i``.  For ``k == 1`` a layered array is just the array reduced mod ``p``
with a leading axis of length one.

Products of layered matrices go through float64 BLAS; every partial sum is
bounded by ``n * (p - 1)**2 * k`` which stays far below ``2**53`` at the
sizes this package works with, so the result is exact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldCtx",
    "Matrix",
    "JordanData",
    "NotNilpotentError",
    "kernel_basis",
    "nilpotent_jordan",
    "frobenius_root",
    "jordan_chevalley",
    "EchelonSpace",
]

_FLOAT_EXACT = 2.0 ** 52


class NotNilpotentError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a, b, p):
    a = _fp_trim(a)
    b = _fp_trim(b)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, bi in enumerate(b):
            a[s + i] = (a[s + i] - c * bi) % p
        a = _fp_trim(a)
    return q, a


def _fp_irreducible(f, p) -> bool:
    """Exhaustive factor search: no monic factor of degree <= deg(f)/2."""
    n = len(f) - 1
    if n <= 1:
        return n == 1
    for d in range(1, n // 2 + 1):
        for tail in range(p ** d):
            g = [(tail // p ** i) % p for i in range(d)] + [1]
            if not _fp_divmod(f, g, p)[1]:
                return False
    return True


class FieldCtx:
    """The finite field F_{p^k} with an explicit irreducible modulus.

    Parameters
    ----------
    p : int
        An odd prime.
    k : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree ``k`` over F_p, low degree
        first.  If omitted, one is found by seeded random search.
    seed : int
        Seed for the modulus search.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None, seed: int = 0):
        if p < 3 or not _is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if k < 1:
            raise ValueError(f"extension degree must be >= 1, got {k}")
        self.p = int(p)
        self.k = int(k)
        self.q = self.p ** self.k
        if modulus is None:
            modulus = self._find_modulus(seed)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _fp_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = tuple(modulus)
        # red[d] = coefficients of x^d reduced mod modulus, d = 0 .. 2k-2
        red = np.zeros((2 * k - 1, k), dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        for d in range(2 * k - 1):
            red[d] = cur
            # multiply by x
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c - top * m) % p for c, m in zip(cur, modulus[:-1])]
        self._red = red
        self._weights = np.array([p ** i for i in range(k)], dtype=np.int64)

    def _find_modulus(self, seed: int):
        p, k = self.p, self.k
        if k == 1:
            return [0, 1]
        rng = random.Random(seed)
        while True:
            f = [rng.randrange(p) for _ in range(k)] + [1]
            if f[0] != 0 and _fp_irreducible(f, p):
                return f

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(p={self.p})"
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def header(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_header(cls, h: dict) -> "FieldCtx":
        return cls(h["p"], h["k"], h["modulus"])

    # -- scalars ------------------------------------------------------------

    def coeffs(self, a: int) -> np.ndarray:
        return (a // self._weights) % self.p

    def from_coeffs(self, c) -> int:
        return int(np.dot(np.asarray(c, dtype=np.int64) % self.p, self._weights))

    def embed(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return int(n) % self.p

    @cached_property
    def _tables(self):
        q, p = self.q, self.p
        digits = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64)  # (q, k)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ self._weights
        lay = np.moveaxis(digits, 1, 0)  # (k, q)
        mul_l = self.emul(lay[:, :, None], lay[:, None, :])
        mul = np.tensordot(self._weights, mul_l, axes=(0, 0))
        neg = ((-digits) % p) @ self._weights
        mul_list = mul.tolist()
        inv = [0] * q
        for a in range(1, q):
            row = mul_list[a]
            inv[a] = row.index(1)
        return add.tolist(), mul_list, neg.tolist(), inv

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._tables[0][a][b]

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._tables[2][a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        return self._tables[1][a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._tables[3][a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def frob(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self) -> range:
        return range(self.q)

    def random(self, rng: random.Random, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.q)
        return rng.randrange(self.q)

    def sqrt(self, a: int) -> int | None:
        """Some square root of ``a`` in the field, or None."""
        if a == 0:
            return 0
        for b in range(1, self.q):
            if self.mul(b, b) == a:
                return b
        return None

    def in_prime_field(self, a: int) -> bool:
        return a < self.p

    def fmt(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        c = self.coeffs(a)
        terms = []
        for i, ci in enumerate(c):
            if ci:
                terms.append(str(ci) if i == 0 else (f"{ci}*x" if i == 1 else f"{ci}*x^{i}"))
        return "+".join(terms) or "0"

    # -- layered arrays -----------------------------------------------------

    def lift(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        if self.k == 1:
            return (codes % self.p)[None].copy()
        return np.stack([(codes // w) % self.p for w in self._weights])

    def codes(self, arr: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return arr[0].copy()
        return np.tensordot(self._weights, arr, axes=(0, 0))

    def zeros(self, *shape) -> np.ndarray:
        return np.zeros((self.k,) + tuple(shape), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        out[0] = np.eye(n, dtype=np.int64)
        return out

    def const(self, a: int, shape=()) -> np.ndarray:
        out = self.zeros(*shape)
        out += self.coeffs(a).reshape((self.k,) + (1,) * len(shape))
        return out

    def _combine(self, prods: np.ndarray) -> np.ndarray:
        """Reduce a (2k-1, ...) polynomial-degree stack to layered form."""
        prods = prods % self.p
        out = np.tensordot(self._red.T, prods, axes=(1, 0))
        return out % self.p

    def emul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise (broadcasting) product of layered arrays."""
        if self.k == 1:
            return (a * b) % self.p
        k = self.k
        shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
        prods = np.zeros((2 * k - 1,) + shape, dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prods[i + j] += a[i] * b[j]
        return self._combine(prods)

    def scale(self, a: np.ndarray, s: int) -> np.ndarray:
        if self.k == 1:
            return (a * s) % self.p
        sc = self.coeffs(s).reshape((self.k,) + (1,) * (a.ndim - 1))
        return self.emul(a, sc)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, k = self.p, self.k
        if k == 1:
            n = a.shape[-1]
            if n * (p - 1) ** 2 < _FLOAT_EXACT:
                r = np.matmul(a[0].astype(np.float64), b[0].astype(np.float64))
                return (np.rint(r).astype(np.int64) % p)[None]
            return (np.matmul(a[0], b[0]) % p)[None]
        fa = a.astype(np.float64)
        fb = b.astype(np.float64)
        shape = np.matmul(fa[0], fb[0]).shape
        prods = np.zeros((2 * k - 1,) + shape, dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prods[i + j] += np.rint(np.matmul(fa[i], fb[j])).astype(np.int64) % p
        return self._combine(prods)

    def add_arr(self, a, b):
        return (a + b) % self.p

    def sub_arr(self, a, b):
        return (a - b) % self.p

    def neg_arr(self, a):
        return (-a) % self.p

    def sum(self, a: np.ndarray, axis) -> np.ndarray:
        """Sum over data axes (axis numbers refer to the unlayered shape)."""
        if isinstance(axis, int):
            axis = (axis,)
        return a.sum(axis=tuple(x + 1 for x in axis)) % self.p

    def entry(self, a: np.ndarray, idx) -> int:
        """Scalar code of one entry of a layered array."""
        if not isinstance(idx, tuple):
            idx = (idx,)
        if self.k == 1:
            return int(a[(0,) + idx])
        return self.from_coeffs(a[(slice(None),) + idx])

    def is_zero(self, a: np.ndarray) -> bool:
        return not a.any()

    def power(self, a: np.ndarray, e: int) -> np.ndarray:
        n = a.shape[-1]
        r = self.eye(n)
        while e:
            if e & 1:
                r = self.matmul(r, a)
            e >>= 1
            if e:
                a = self.matmul(a, a)
        return r

    def transpose(self, a: np.ndarray) -> np.ndarray:
        return np.swapaxes(a, -1, -2).copy()

    # -- elimination ----------------------------------------------------------

    def rref(self, a: np.ndarray, ncols: int | None = None):
        """Reduced row echelon form of a layered (k, r, c) array.

        Pivots are searched only in the first ``ncols`` columns (default:
        all).  Returns ``(R, pivots)`` where ``R`` holds the nonzero rows.
        """
        a = np.array(a, dtype=np.int64, copy=True)
        k, p = self.k, self.p
        r, c = a.shape[1], a.shape[2]
        ncols = c if ncols is None else ncols
        pivots = []
        row = 0
        for col in range(ncols):
            if row == r:
                break
            colv = a[:, row:, col]
            nz = np.flatnonzero(colv.any(axis=0))
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                a[:, [row, piv], :] = a[:, [piv, row], :]
            s = self.entry(a, (row, col))
            if s != 1:
                a[:, row, col:] = self.scale(a[:, row, col:], self.inv(s))
            f = a[:, :, col].copy()
            f[:, row] = 0
            rows = np.flatnonzero(f.any(axis=0))
            if rows.size:
                prow = a[:, row, col:]
                if k == 1:
                    a[0, rows, col:] = (a[0, rows, col:] - f[0, rows, None] * prow[0, None, :]) % p
                else:
                    sub = self.emul(f[:, rows, None], prow[:, None, :])
                    a[:, rows, col:] = (a[:, rows, col:] - sub) % p
            pivots.append(col)
            row += 1
        return a[:, :row, :], pivots

    def rank(self, a: np.ndarray) -> int:
        if a.shape[1] == 0 or a.shape[2] == 0:
            return 0
        if a.shape[1] > a.shape[2]:
            a = self.transpose(a)
        return len(self.rref(a)[1])

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Basis of the right kernel as columns of a layered (k, n, d) array."""
        n = a.shape[2]
        if a.shape[1] == 0:
            return self.eye(n)
        R, piv = self.rref(a)
        free = [j for j in range(n) if j not in set(piv)]
        out = self.zeros(n, len(free))
        for t, f in enumerate(free):
            out[0, f, t] = 1
            for i, pc in enumerate(piv):
                out[:, pc, t] = (-R[:, i, f]) % self.p
        return out

    def left_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows v with v a = 0, as a layered (k, d, r) array."""
        return self.transpose(self.kernel(self.transpose(a)))

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[1]
        if a.shape[2] != n:
            raise ValueError("inverse of a non-square matrix")
        aug = np.concatenate([a, self.eye(n)], axis=2)
        R, piv = self.rref(aug, ncols=n)
        if piv != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return R[:, :, n:].copy()

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some x with a x = b (b layered (k, r, m)), or None if inconsistent."""
        n = a.shape[2]
        R, piv = self.rref(np.concatenate([a, b], axis=2))
        if piv and piv[-1] >= n:
            return None
        x = self.zeros(n, b.shape[2])
        for i, pc in enumerate(piv):
            x[:, pc, :] = R[:, i, n:]
        return x

    def row_space(self, a: np.ndarray) -> np.ndarray:
        return self.rref(a)[0]

    def det_nonzero(self, a: np.ndarray) -> bool:
        return self.rank(a) == a.shape[1] == a.shape[2]

    # -- polynomials over F_q (lists of codes, low degree first) ------------

    def poly_trim(self, f):
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        return f

    def poly_add(self, f, g):
        n = max(len(f), len(g))
        f = list(f) + [0] * (n - len(f))
        g = list(g) + [0] * (n - len(g))
        return self.poly_trim([self.add(a, b) for a, b in zip(f, g)])

    def poly_sub(self, f, g):
        return self.poly_add(f, [self.neg(b) for b in g])

    def poly_mul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == 0:
                continue
            for j, b in enumerate(g):
                if b:
                    out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.poly_trim(out)

    def poly_divmod(self, f, g):
        f = self.poly_trim(f)
        g = self.poly_trim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        inv = self.inv(g[-1])
        q = [0] * max(len(f) - len(g) + 1, 0)
        while len(f) >= len(g) and f:
            c = self.mul(f[-1], inv)
            s = len(f) - len(g)
            q[s] = c
            for i, gi in enumerate(g):
                f[s + i] = self.sub(f[s + i], self.mul(c, gi))
            f = self.poly_trim(f)
        return self.poly_trim(q), f

    def poly_monic(self, f):
        f = self.poly_trim(f)
        if not f:
            return f
        inv = self.inv(f[-1])
        return [self.mul(a, inv) for a in f]

    def poly_gcd(self, f, g):
        f, g = self.poly_trim(f), self.poly_trim(g)
        while g:
            f, g = g, self.poly_divmod(f, g)[1]
        return self.poly_monic(f)

    def poly_deriv(self, f):
        return self.poly_trim([self.mul(self.embed(i), a) for i, a in enumerate(f)][1:])

    def poly_eval(self, f, x: int) -> int:
        r = 0
        for a in reversed(f):
            r = self.add(self.mul(r, x), a)
        return r

    def poly_pth_root(self, f):
        """g with g^p = f, for f whose exponents are all divisible by p."""
        out = []
        for i in range(0, len(f), self.p):
            out.append(frobenius_root(self, f[i]))
        if any(f[i] for i in range(len(f)) if i % self.p):
            raise ValueError("polynomial is not a p-th power")
        return self.poly_trim(out)

    def poly_radical(self, f):
        """Product of the distinct monic irreducible factors of f."""
        f = self.poly_monic(f)
        if len(f) <= 1:
            return [1]
        d = self.poly_deriv(f)
        if not d:
            return self.poly_radical(self.poly_pth_root(f))
        g = self.poly_gcd(f, d)
        h = self.poly_divmod(f, g)[0]
        while True:
            c = self.poly_gcd(g, h)
            if len(c) <= 1:
                break
            g = self.poly_divmod(g, c)[0]
        rest = [1] if len(g) <= 1 else self.poly_radical(self.poly_pth_root(g))
        return self.poly_monic(self.poly_mul(h, rest))

    def poly_at_matrix(self, f, a: np.ndarray) -> np.ndarray:
        n = a.shape[-1]
        r = self.zeros(n, n)
        for c in reversed(f):
            r = self.matmul(r, a)
            if c:
                r = (r + self.const(c, ()) [..., None, None] * np.eye(n, dtype=np.int64)) % self.p
        return r

    def minimal_polynomial(self, a: np.ndarray):
        """Monic minimal polynomial of a square layered matrix."""
        n = a.shape[-1]
        rows = [self.eye(n).reshape(self.k, 1, n * n)]
        cur = self.eye(n)
        for d in range(1, n + 1):
            cur = self.matmul(cur, a)
            rows.append(cur.reshape(self.k, 1, n * n))
            stack = np.concatenate(rows, axis=1)  # (k, d+1, n*n)
            lk = self.left_kernel(stack)
            if lk.shape[1]:
                v = [self.entry(lk, (0, i)) for i in range(d + 1)]
                return self.poly_monic(v)
        raise AssertionError("Cayley-Hamilton violated")

    def minpoly_vector(self, a: np.ndarray, v: np.ndarray):
        """Monic minimal polynomial of the vector v (layered (k, n)) under a."""
        space = EchelonSpace(self, a.shape[-1])
        kry = [v]
        while True:
            if not space.add(kry[-1]).shape[1]:
                break
            kry.append(self.matmul(a, kry[-1][:, :, None])[:, :, 0])
        d = len(kry) - 1
        if d == 0:
            return [1]
        basis = np.stack(kry[:d], axis=2)  # (k, n, d)
        x = self.solve(basis, kry[d][:, :, None])
        return [self.neg(self.entry(x, (i, 0))) for i in range(d)] + [1]


# ---------------------------------------------------------------------------
# incremental row echelon spaces
# ---------------------------------------------------------------------------

class EchelonSpace:
    """Span of vectors in F^n, kept in reduced echelon form.

    Optionally tracks, for each stored row, its expression in the vectors
    originally added (used for Krylov dependencies).
    """

    def __init__(self, ctx: FieldCtx, n: int):
        self.ctx = ctx
        self.n = n
        self.rows = ctx.zeros(0, n)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Reduce a batch (k, m, n) or a vector (k, n) modulo the span."""
        ctx = self.ctx
        single = v.ndim == 2
        if single:
            v = v[:, None, :]
        v = v.copy()
        if self.pivots:
            f = v[:, :, self.pivots]  # (k, m, r)
            v = ctx.sub_arr(v, ctx.matmul(f, self.rows))
        return v[:, 0, :] if single else v

    def add(self, vs: np.ndarray) -> np.ndarray:
        """Add a batch (k, m, n); return the independent reduced new rows."""
        ctx = self.ctx
        if vs.ndim == 2:
            vs = vs[:, None, :]
        red = self.reduce(vs)
        keep = red.any(axis=(0, 2))
        red = red[:, keep, :]
        if red.shape[1] == 0:
            return red
        R, piv = ctx.rref(red)
        if not piv:
            return R
        # merge: clear new pivot columns from old rows, then insert
        if self.pivots:
            f = self.rows[:, :, piv]
            self.rows = ctx.sub_arr(self.rows, ctx.matmul(f, R))
        allrows = np.concatenate([self.rows, R], axis=1)
        allpiv = self.pivots + list(piv)
        order = np.argsort(allpiv, kind="stable")
        self.rows = allrows[:, order, :]
        self.pivots = [allpiv[i] for i in order]
        return R

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def basis(self) -> np.ndarray:
        return self.rows.copy()


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Matrix:
    """A dense matrix over a FieldCtx (layered storage)."""

    ctx: FieldCtx
    data: np.ndarray  # (k, rows, cols)

    def __post_init__(self):
        if self.data.ndim != 3 or self.data.shape[0] != self.ctx.k:
            raise ValueError("matrix data must have shape (k, rows, cols)")

    @classmethod
    def from_codes(cls, ctx: FieldCtx, codes) -> "Matrix":
        codes = np.asarray(codes, dtype=np.int64)
        if codes.ndim == 1:
            codes = codes[:, None]
        return cls(ctx, ctx.lift(codes))

    @classmethod
    def from_ints(cls, ctx: FieldCtx, rows) -> "Matrix":
        """Matrix with prime-field entries given as (possibly negative) ints."""
        return cls.from_codes(ctx, np.asarray(rows, dtype=np.int64) % ctx.p)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        return cls(ctx, ctx.eye(n))

    @classmethod
    def zero(cls, ctx: FieldCtx, r: int, c: int) -> "Matrix":
        return cls(ctx, ctx.zeros(r, c))

    @property
    def rows(self) -> int:
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape[1:]

    def codes(self) -> np.ndarray:
        return self.ctx.codes(self.data)

    def __getitem__(self, idx) -> int:
        return self.ctx.entry(self.data, idx)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, self.ctx.matmul(self.data, other.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, self.ctx.add_arr(self.data, other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, self.ctx.sub_arr(self.data, other.data))

    def __neg__(self) -> "Matrix":
        return Matrix(self.ctx, self.ctx.neg_arr(self.data))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.ctx == other.ctx
                and self.shape == other.shape and np.array_equal(self.data, other.data))

    __hash__ = None

    def scale(self, s: int) -> "Matrix":
        return Matrix(self.ctx, self.ctx.scale(self.data, s))

    def T(self) -> "Matrix":
        return Matrix(self.ctx, self.ctx.transpose(self.data))

    def power(self, e: int) -> "Matrix":
        return Matrix(self.ctx, self.ctx.power(self.data, e))

    def rank(self) -> int:
        return self.ctx.rank(self.data)

    def inverse(self) -> "Matrix":
        return Matrix(self.ctx, self.ctx.inverse(self.data))

    def is_zero(self) -> bool:
        return not self.data.any()

    def column(self, j: int) -> "Matrix":
        return Matrix(self.ctx, self.data[:, :, j:j + 1].copy())

    @classmethod
    def hstack(cls, ctx: FieldCtx, cols: Iterable["Matrix"]) -> "Matrix":
        cols = list(cols)
        return cls(ctx, np.concatenate([c.data for c in cols], axis=2))

    def to_json(self) -> dict:
        entries = np.moveaxis(self.data, 0, -1).tolist()
        return {"field": self.ctx.header(), "rows": self.rows, "cols": self.cols, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        ctx = FieldCtx.from_header(obj["field"])
        arr = np.asarray(obj["entries"], dtype=np.int64).reshape(obj["rows"], obj["cols"], ctx.k)
        return cls(ctx, np.moveaxis(arr, -1, 0).copy())

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ctx!r})\n{self.codes()}"


def kernel_basis(a: Matrix) -> list[Matrix]:
    """Basis of {v : a v = 0} as column vectors."""
    if a.data.shape[0] != a.ctx.k:
        raise ValueError("matrix does not match its field context")
    ker = a.ctx.kernel(a.data)
    return [Matrix(a.ctx, ker[:, :, j:j + 1].copy()) for j in range(ker.shape[2])]


@dataclass(frozen=True, eq=False)
class JordanData:
    """Jordan chains of a nilpotent operator.

    ``chain_heads[i]`` generates a chain ``v, Xv, ..., X^{l-1} v`` with
    ``l = partition[i]`` and ``X^l v = 0``.
    """

    partition: tuple[int, ...]
    chain_heads: tuple[Matrix, ...]
    dim: int
    operator: Matrix

    def chain_matrix(self) -> Matrix:
        """Columns X^{l-1}v_1, ..., Xv_1, v_1, X^{l_2-1}v_2, ...

        In this basis the operator is a direct sum of upper Jordan blocks.
        """
        cols = []
        for lam, v in zip(self.partition, self.chain_heads):
            chain = [v]
            for _ in range(lam - 1):
                chain.append(self.operator @ chain[-1])
            cols.extend(reversed(chain))
        if not cols:
            return Matrix.zero(self.operator.ctx, self.dim, 0)
        return Matrix.hstack(self.operator.ctx, cols)

    def chain_vectors(self):
        """(chain index, power j, vector X^j v_i) triples."""
        out = []
        for i, (lam, v) in enumerate(zip(self.partition, self.chain_heads)):
            cur = v
            for j in range(lam):
                out.append((i, j, cur))
                cur = self.operator @ cur
        return out


def nilpotent_jordan(x: Matrix) -> JordanData:
    """Jordan type and chain heads of a nilpotent matrix (kernel filtration)."""
    ctx = x.ctx
    n = x.rows
    if x.cols != n:
        raise ValueError("nilpotent_jordan needs a square matrix")
    if n == 0:
        return JordanData((), (), 0, x)
    powers = [Matrix.identity(ctx, n)]
    kers = [ctx.zeros(n, 0)]
    while True:
        powers.append(powers[-1] @ x)
        ker = ctx.kernel(powers[-1].data)
        kers.append(ker)
        if ker.shape[2] == n:
            break
        if len(powers) > n + 1:
            raise NotNilpotentError("matrix is not nilpotent")
    d = len(kers) - 1
    heads: list[tuple[int, np.ndarray]] = []
    for j in range(d, 0, -1):
        space = EchelonSpace(ctx, n)
        if kers[j - 1].shape[2]:
            space.add(ctx.transpose(kers[j - 1]))
        for lam, v in heads:
            w = ctx.matmul(powers[lam - j].data, v[:, :, None])[:, :, 0]
            space.add(w)
        kj = kers[j]
        for t in range(kj.shape[2]):
            v = kj[:, :, t]
            if not space.contains(v):
                space.add(v)
                heads.append((j, v.copy()))
    heads.sort(key=lambda h: -h[0])
    partition = tuple(lam for lam, _ in heads)
    vecs = tuple(Matrix(ctx, v[:, :, None].copy()) for _, v in heads)
    return JordanData(partition, vecs, n, x)


def frobenius_root(ctx: FieldCtx, a: int) -> int:
    """The unique b with b^p = a."""
    return ctx.pow(a, ctx.p ** (ctx.k - 1))


def jordan_chevalley(a: Matrix) -> tuple[Matrix, Matrix]:
    """Additive Jordan decomposition a = s + n with s semisimple, n nilpotent.

    Newton iteration on the radical of the minimal polynomial; both parts
    are polynomials in ``a``.
    """
    ctx = a.ctx
    if a.rows != a.cols:
        raise ValueError("jordan_chevalley needs a square matrix")
    mu = ctx.minimal_polynomial(a.data)
    r = ctx.poly_radical(mu)
    dr = ctx.poly_deriv(r)
    s = a.data.copy()
    for _ in range(64):
        rs = ctx.poly_at_matrix(r, s)
        if not rs.any():
            break
        s = ctx.sub_arr(s, ctx.matmul(rs, ctx.inverse(ctx.poly_at_matrix(dr, s))))
    else:  # pragma: no cover
        raise AssertionError("Newton iteration did not converge")
    s_m = Matrix(ctx, s)
    return s_m, a - s_m
