"""Random test inputs shared by the property and acceptance suites."""

from __future__ import annotations

import numpy as np

from modsuper.exactlin import Matrix
from modsuper.pbw import borel_data


def _random_block_invertible(ctx, N, m, rng):
    while True:
        P = np.zeros((N, N), dtype=np.int64)
        P[:m, :m] = rng.integers(0, ctx.p, (m, m))
        P[m:, m:] = rng.integers(0, ctx.p, (N - m, N - m))
        Pm = Matrix.from_codes(ctx, P)
        if Pm.rank() == N:
            return Pm


def _cayley(g, rng):
    # (1 - A)^{-1}(1 + A) preserves the form when A is an even element of osp
    ctx = g.ctx
    N = g.vdim
    I = Matrix.identity(ctx, N)
    while True:
        a = ctx.zeros(g.n)
        for b in g.even_indices:
            a = ctx.add_arr(a, ctx.scale(g.basis_vector(b), int(rng.integers(0, ctx.p))))
        A = g.to_matrix(a)
        if (I - A).rank() == N:
            return (I - A).inverse() @ (I + A)


def random_nilpotent(g, rng, density=0.6):
    """A random even nilpotent: positive even root vectors, then a random group conjugate."""
    ctx = g.ctx
    _, pos, _ = borel_data(g)
    x = ctx.zeros(g.n)
    for b in pos:
        if g.parity[b] == 0 and rng.random() < density:
            x = ctx.add_arr(x, ctx.scale(g.basis_vector(b), int(rng.integers(1, ctx.p))))
    if g.family in ("gl", "sl"):
        P = _random_block_invertible(ctx, g.vdim, g.dims[0], rng)
    else:
        P = _cayley(g, rng)
    return g.coords(P @ g.to_matrix(x) @ P.inverse())
