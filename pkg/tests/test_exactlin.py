import numpy as np
import pytest
from hypothesis import given, strategies as st

from modsuper.exactlin import (FieldCtx, JordanData, Matrix, NotNilpotentError, frobenius_root,
                               jordan_chevalley, kernel_basis, nilpotent_jordan)

import oracles

PRIMES = [3, 5, 7]


def test_prime_field_basics():
    F = FieldCtx(5)
    assert F.q == 5
    assert F.mul(3, 4) == 2
    assert F.inv(2) == 3
    assert F.sub(1, 3) == 3
    assert F.pow(2, 4) == 1


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        FieldCtx(4)
    with pytest.raises(ValueError):
        FieldCtx(2)
    with pytest.raises(ValueError):
        FieldCtx(3, 2, modulus=[2, 0, 1])   # x^2 - 1
    assert FieldCtx(3, 2, modulus=[1, 0, 1]).q == 9


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (3, 3)])
def test_extension_multiplication_matches_polynomial_oracle(p, k):
    F = FieldCtx(p, k)
    mod = list(F.modulus)
    for a in F.elements():
        for b in range(0, F.q, 3):
            want = oracles.gf_mul_poly(list(F.coeffs(a)), list(F.coeffs(b)), mod, p)
            assert list(F.coeffs(F.mul(a, b))) == want


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 2)])
def test_field_axioms_exhaustive(p, k):
    F = FieldCtx(p, k)
    for a in F.elements():
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
        assert F.frob(frobenius_root(F, a)) == a


def _rand_matrix(F, rng, r, c, density=1.0):
    codes = rng.integers(0, F.q, size=(r, c))
    codes[rng.random((r, c)) > density] = 0
    return Matrix.from_codes(F, codes)


@given(st.integers(0, 10_000), st.sampled_from(PRIMES), st.integers(1, 7), st.integers(1, 7))
def test_rank_matches_oracle(seed, p, r, c):
    F = FieldCtx(p)
    A = _rand_matrix(F, np.random.default_rng(seed), r, c, 0.6)
    assert A.rank() == oracles.rank_mod(A.codes().tolist(), p)


@given(st.integers(0, 10_000), st.sampled_from([(3, 1), (3, 2), (5, 1)]), st.integers(1, 6), st.integers(1, 6))
def test_kernel_rank_nullity(seed, pk, r, c):
    F = FieldCtx(*pk)
    A = _rand_matrix(F, np.random.default_rng(seed), r, c, 0.5)
    ker = kernel_basis(A)
    assert len(ker) + A.rank() == c
    for v in ker:
        assert (A @ v).is_zero()


@given(st.integers(0, 10_000), st.sampled_from([(3, 1), (5, 1), (3, 2)]), st.integers(1, 6))
def test_inverse_roundtrip(seed, pk, n):
    F = FieldCtx(*pk)
    A = _rand_matrix(F, np.random.default_rng(seed), n, n)
    if A.rank() < n:
        return
    assert A @ A.inverse() == Matrix.identity(F, n)


@given(st.integers(0, 10_000), st.sampled_from(PRIMES),
       st.lists(st.integers(1, 4), min_size=1, max_size=4))
def test_nilpotent_jordan_partition_matches_rank_oracle(seed, p, blocks):
    F = FieldCtx(p)
    n = sum(blocks)
    J = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for b in blocks:
        for i in range(b - 1):
            J[pos + i, pos + i + 1] = 1
        pos += b
    rng = np.random.default_rng(seed)
    while True:
        P = _rand_matrix(F, rng, n, n)
        if P.rank() == n:
            break
    X = P @ Matrix.from_codes(F, J) @ P.inverse()
    jd = nilpotent_jordan(X)
    assert list(jd.partition) == sorted(blocks, reverse=True)
    assert list(jd.partition) == oracles.jordan_partition(X.codes().tolist(), p)
    # the chain matrix conjugates X into upper Jordan blocks
    C = jd.chain_matrix()
    assert C.rank() == n
    assert C.inverse() @ X @ C == Matrix.from_codes(F, _upper_jordan(jd.partition))


def _upper_jordan(parts):
    n = sum(parts)
    J = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for b in parts:
        for i in range(b - 1):
            J[pos + i, pos + i + 1] = 1
        pos += b
    return J


def test_not_nilpotent_raises():
    F = FieldCtx(3)
    with pytest.raises(NotNilpotentError):
        nilpotent_jordan(Matrix.identity(F, 2))


def test_jordan_data_zero_matrix():
    F = FieldCtx(5)
    jd = nilpotent_jordan(Matrix.zero(F, 3, 3))
    assert isinstance(jd, JordanData)
    assert list(jd.partition) == [1, 1, 1]


@given(st.integers(0, 10_000), st.sampled_from([(3, 1), (5, 1), (3, 2)]), st.integers(1, 5))
def test_jordan_chevalley_properties(seed, pk, n):
    F = FieldCtx(*pk)
    A = _rand_matrix(F, np.random.default_rng(seed), n, n, 0.5)
    S, N = jordan_chevalley(A)
    assert S + N == A
    assert S @ N == N @ S
    assert N.power(n).is_zero()
    # S is semisimple: its minimal polynomial is square-free
    mp = F.minimal_polynomial(S.data)
    assert F.poly_gcd(mp, F.poly_deriv(mp)) == [1]


def test_jordan_chevalley_known_case():
    F = FieldCtx(5)
    A = Matrix.from_ints(F, [[2, 1, 0], [0, 2, 0], [0, 0, 3]])
    S, N = jordan_chevalley(A)
    assert S == Matrix.from_ints(F, [[2, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert N == Matrix.from_ints(F, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])


def test_matrix_json_roundtrip():
    F = FieldCtx(3, 2)
    A = _rand_matrix(F, np.random.default_rng(1), 3, 4)
    B = Matrix.from_json(A.to_json())
    assert B == A
    assert B.ctx.modulus == F.modulus


def test_kernel_of_zero_and_identity():
    F = FieldCtx(5)
    assert len(kernel_basis(Matrix.zero(F, 3, 3))) == 3
    assert kernel_basis(Matrix.identity(F, 4)) == []


def test_kernel_size_random_5x5_f3():
    F = FieldCtx(3)
    rng = np.random.default_rng(7)
    for _ in range(20):
        A = _rand_matrix(F, rng, 5, 5, 0.4)
        assert len(kernel_basis(A)) == 5 - oracles.rank_mod(A.codes().tolist(), 3)


def test_single_block_and_gl32_summands():
    F = FieldCtx(3)
    X = Matrix.from_codes(F, _upper_jordan([3]))
    assert nilpotent_jordan(X).partition == (3,)
    # even 3x3 block and odd 2x2 block of the (3;2) element of gl(3|2)
    full = oracles.jordan_element(3, 2, [3], [2])
    even = Matrix.from_ints(F, [r[:3] for r in full[:3]])
    odd = Matrix.from_ints(F, [r[3:] for r in full[3:]])
    assert nilpotent_jordan(even).partition == (3,)
    assert nilpotent_jordan(odd).partition == (2,)


def test_frobenius_root_exhaustive_f9():
    F = FieldCtx(3, 2)
    assert frobenius_root(F, 0) == 0
    assert frobenius_root(F, 1) == 1
    for a in F.elements():
        roots = [b for b in F.elements() if F.pow(b, 3) == a]
        assert roots == [frobenius_root(F, a)]


def test_jordan_chevalley_trivial_cases():
    F = FieldCtx(5)
    N0 = Matrix.from_codes(F, _upper_jordan([2, 1]))
    S, N = jordan_chevalley(N0)
    assert S.is_zero() and N == N0
    D = Matrix.from_ints(F, [[1, 0, 0], [0, 4, 0], [0, 0, 4]])
    S, N = jordan_chevalley(D)
    assert S == D and N.is_zero()


def test_jordan_chevalley_2x2_repeated_eigenvalue_oracle():
    # characteristic polynomial (x - l)^2 forces S = l*I
    F = FieldCtx(5)
    rng = np.random.default_rng(3)
    seen = 0
    while seen < 15:
        a, b, c, d = (int(v) for v in rng.integers(0, 5, 4))
        tr, det = (a + d) % 5, (a * d - b * c) % 5
        if (tr * tr - 4 * det) % 5 or (b == 0 and c == 0):
            continue
        lam = tr * pow(2, -1, 5) % 5
        A = Matrix.from_ints(F, [[a, b], [c, d]])
        S, N = jordan_chevalley(A)
        assert S == Matrix.from_ints(F, [[lam, 0], [0, lam]])
        assert N == Matrix.from_ints(F, [[a - lam, b], [c, d - lam]])
        seen += 1
