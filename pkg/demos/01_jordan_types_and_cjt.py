"""Jordan types and constant-Jordan-type decisions.

A module over k[X1,X2]/(X1^p, X2^p) is a pair of commuting nilpotent
matrices.  For every nonzero point (l1 : l2) of the projective line the
operator X_alpha = l1 X1 + l2 X2 is nilpotent; its Jordan block partition
is the module's fingerprint at that point.  This demo builds a few modules
and decides, exactly, whether that fingerprint depends on the point.
"""

import numpy as np

import kemod as K

# The W-module family: explicit zig-zag modules with the equal images
# property.  W_{4,3} over F_3 has 4 + 3 + 2 basis vectors in three layers.
w = K.w_module(3, 4, 3)
print("W_{4,3} over F_3: dim", w.dim)
print("  Jordan type at (1,1):   ", K.jordan_type(w, K.PointSpec.closed(K.FieldCtx(3), [1, 1])))
print("  Jordan type generically:", K.jordan_type(w))

dec = K.constant_jordan_type(w)
print("  constant Jordan type?   ", dec.kind, dec.jordan_type)

# A module that is NOT of constant Jordan type: X2 = 0 makes the rank
# collapse at the point (0 : 1).
x1 = np.array([[0, 1], [0, 0]])
bad = K.KEModule(K.FieldCtx(2), 2, [x1, np.zeros((2, 2), dtype=np.int64)])
d = K.constant_jrank_decide(bad, 1)
print("\nJ2 with X2 = 0:", d.kind, "witness:", d.witness)

# Jump points are located exactly as roots of the non-unit invariant
# factors of the Smith form of (X1 + t X2)^j over F_q[t]; each is reported
# by its minimal polynomial (here t itself: the point (1, 0)), and the
# rank drop is re-verified over the splitting field.
x1 = np.zeros((4, 4), dtype=np.int64)
x2 = np.zeros((4, 4), dtype=np.int64)
x1[1, 0] = 1
x2[3, 2] = 1
skew = K.KEModule(K.FieldCtx(3), 2, [x1, x2])
d = K.constant_jrank_decide(skew, 1)
print("\ntwo skew lines:", d.kind)
print("  witness:", d.witness)

# Duality (plain transpose) preserves all power ranks, so Jordan types too.
print("\nJordan type of the dual of W_{4,3}:", K.jordan_type(K.dual(w)))
