"""Property-based invariants with hypothesis.

Randomized identities that every valid input must satisfy: transpose
invariance of ranks, Jordan partitions summing to the dimension, subspace
lattice laws under module operators, and coordinate-change functoriality.
"""

import numpy as np
from hypothesis import given, settings, strategies as st

import kemod as K
from kemod.gf import FieldCtx
from kemod.linalg import kernel_fp, matmul_fp, rank_fp
from kemod.modules import generic_power_ranks, random_invertible

primes = st.sampled_from([2, 3, 5])


@st.composite
def fp_matrix(draw, max_n=6):
    p = draw(primes)
    rows = draw(st.integers(1, max_n))
    cols = draw(st.integers(1, max_n))
    data = draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return p, np.array(data, dtype=np.int64)


@st.composite
def small_w_sum(draw):
    """A direct sum of one or two W-modules / duals, possibly coordinate-changed."""
    p = draw(primes)
    ctx = FieldCtx(p)
    n1 = draw(st.integers(2, 4))
    d1 = draw(st.integers(1, min(n1, p)))
    m = K.w_module(ctx, n1, d1)
    if draw(st.booleans()):
        m = K.dual(m)
    if draw(st.booleans()):
        n2 = draw(st.integers(1, 3))
        m = K.direct_sum(m, K.w_module(ctx, n2, min(draw(st.integers(1, 2)), n2, p)))
    return m


@settings(max_examples=40, deadline=None)
@given(fp_matrix())
def test_rank_transpose_invariance(mp):
    p, m = mp
    assert rank_fp(m, p) == rank_fp(m.T, p)


@settings(max_examples=40, deadline=None)
@given(fp_matrix())
def test_rank_nullity(mp):
    p, m = mp
    assert rank_fp(m, p) + kernel_fp(m, p).shape[0] == m.shape[1]


@settings(max_examples=20, deadline=None)
@given(small_w_sum())
def test_jordan_partition_sums_to_dim(m):
    jt = K.jordan_type(m)
    assert jt.dim() == m.dim


@settings(max_examples=20, deadline=None)
@given(small_w_sum())
def test_dual_preserves_generic_ranks(m):
    assert generic_power_ranks(K.dual(m), m.ctx.p) == generic_power_ranks(m, m.ctx.p)


@settings(max_examples=15, deadline=None)
@given(small_w_sum(), st.integers(0, 10**6))
def test_restrict_functoriality(m, seed):
    import random

    rng = random.Random(seed)
    a = random_invertible(m.ctx, 2, rng)
    b = random_invertible(m.ctx, 2, rng)
    lhs = K.restrict(m, matmul_fp(a, b, m.ctx.p))
    rhs = K.restrict(K.restrict(m, a), b)
    assert all(np.array_equal(x, y) for x, y in zip(lhs.mats, rhs.mats))


@settings(max_examples=15, deadline=None)
@given(small_w_sum(), st.integers(0, 10**6))
def test_jordan_invariant_under_coordinate_change(m, seed):
    import random

    rng = random.Random(seed)
    a = random_invertible(m.ctx, 2, rng)
    assert K.jordan_type(K.restrict(m, a)) == K.jordan_type(m)


@settings(max_examples=20, deadline=None)
@given(small_w_sum())
def test_radical_socle_duality(m):
    # dim Rad(M) + dim Soc(M^#) ... transpose swaps radical and socle annihilators
    d = K.dual(m)
    assert K.radical(m).dim + K.socle(d).dim == m.dim
    assert K.socle(m).dim + K.radical(d).dim == m.dim


@settings(max_examples=12, deadline=None)
@given(small_w_sum())
def test_genker_is_invariant_and_contains_socle(m):
    rep = K.generic_kernel(m)
    from kemod.modules import is_invariant

    assert is_invariant(m, rep.subspace)
    assert rep.subspace.contains(K.socle(m))


@settings(max_examples=12, deadline=None)
@given(small_w_sum())
def test_genker_chain_monotone(m):
    p = m.ctx.p
    prev = None
    for n in range(1, p + 1):
        cur = K.generic_kernel_power(m, n).subspace
        if prev is not None:
            assert cur.contains(prev)
        prev = cur
    assert prev.dim == m.dim  # K^p = M


@settings(max_examples=10, deadline=None)
@given(small_w_sum())
def test_summand_jordan_additivity(m):
    dec = K.decompose(m, seed=17, rounds=20)
    total = [0] * m.ctx.p
    for s in dec.summands:
        for j, r in enumerate(generic_power_ranks(s, m.ctx.p)):
            total[j] += r
    assert total == generic_power_ranks(m, m.ctx.p)
    assert sum(s.dim for s in dec.summands) == m.dim
