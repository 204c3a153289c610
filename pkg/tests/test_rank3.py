"""Higher-rank (r >= 3) paths: Monte Carlo constant-rank decisions, exact
generic ranks via grids, slice dimensions, and line restrictions."""

import numpy as np

import kemod as K
from kemod.gf import FieldCtx
from kemod.linalg import rank_gen
from kemod.poly import RationalFunction
from kemod.sheaf import monomials

F2 = FieldCtx(2)
F3 = FieldCtx(3)


def rank3_free():
    return K.free_module(F2, 3, 1)


def test_free_module_rank3_probably_constant():
    m = rank3_free()
    dec = K.constant_jrank_decide(m, 1, samples=32, seed=1)
    assert dec.kind == "probably_constant"
    assert dec.rank == 4  # dim 8, kernel dim 4 at every point
    assert dec.confidence is not None and dec.confidence > 0.99
    cjt = K.constant_jordan_type(m)
    assert cjt.kind == "probably_cjt"
    assert repr(cjt.jordan_type) == "[2]^4"


def test_rank3_nonconstant_witness_found_over_small_field():
    # jump locus is a coordinate hyperplane; over F_2 itself ~ half of all
    # sampled points lie on it, so the witness search finds one
    j = np.zeros((2, 2), dtype=np.int64)
    j[1, 0] = 1
    z = np.zeros((2, 2), dtype=np.int64)
    m = K.KEModule(F2, 3, [j, z, z])
    dec = K.constant_jrank_decide(m, 1, samples=64, ext_degree=1, seed=0)
    assert dec.kind == "not_constant"
    assert dec.witness is not None


def test_generic_ranks_match_symbolic_r3():
    # exact grid ranks vs honest multivariate rational-function elimination
    x1 = np.zeros((4, 4), dtype=np.int64)
    x1[1, 0] = 1
    x1[3, 2] = 1
    x2 = np.zeros((4, 4), dtype=np.int64)
    x2[2, 0] = 1
    x2[3, 1] = 1
    x3 = (x1 + x2) % 2  # commuting square with a dependent third generator
    m2 = K.KEModule(F2, 3, [x1, x2, x3])
    assert m2.validate().ok
    for m in (rank3_free(), m2):
        sym = K.x_alpha(m, K.PointSpec.generic())
        rows = [[RationalFunction.from_poly(e) for e in row] for row in sym]
        zero = RationalFunction.const(m.ctx, 2, 0)
        from kemod.modules import generic_power_ranks

        assert rank_gen(rows, zero) == generic_power_ranks(m, 1)[0]


def test_genker_r3_matches_symbolic():
    m = rank3_free()
    rep = K.generic_kernel(m)
    from kemod.genker import _genker_symbolic

    assert rep.subspace == _genker_symbolic(m, 1)
    # the generic kernel of a free module is its radical (equal images)
    assert rep.subspace == K.radical(m).sum(K.socle(m))


def test_fi_slice_dims_r3_trivial():
    k1 = K.trivial_module(F3, 3, 1)
    dims = K.fi_slice_dims(k1, 1, 4)
    assert dims == [len(monomials(3, n)) for n in range(5)]


def test_line_restrictions_of_free_rank3():
    m = rank3_free()
    # every line pulls the (probably) constant module back to kE in rank 2
    lines = [
        [[1, 0], [0, 1], [0, 0]],
        [[0, 1], [1, 0], [1, 1]],
        [[1, 0], [1, 1], [0, 1]],
    ]
    vals = {K.line_restriction_splitting(m, ln, 2) for ln in lines}
    assert len(vals) == 1
    (st,) = vals
    assert st.rank == 4  # [2]^4 blocks: a_2 = 4


def test_jordan_at_r3_extension_point():
    m = rank3_free()
    f4 = FieldCtx(2, 2)
    g = f4.gen()
    jt = K.jordan_type(m, K.PointSpec.closed(f4, [f4.one, g, g * g]))
    assert repr(jt) == "[2]^4"


def test_genimg_r3_duality_only():
    # the images of X_alpha on the free module vary with the point; their
    # intersection is exactly the socle (hand check: a degree-2 monomial
    # X_1 X_2 lies in Im(X_alpha) only where lambda_3 = 0)
    m = rank3_free()
    img = K.generic_image_power(m, 1)
    assert img.dim == 1
    assert img == K.socle(m)
    assert img == K.generic_kernel(K.dual(m)).subspace.perp()
