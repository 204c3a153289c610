"""Generic kernels and computing bundles on small subquotients.

The generic kernel K(M) is the largest submodule with the equal images
property; it generates a filtration ... J K <= K <= J^{-1} K <= ... whose
layers compute the bundles of M on much smaller subquotients.  The n-th
power generic kernels K^n(M) (sums of kernels of X_alpha^n over a dense
open set) do the same with even smaller pieces.
"""

import kemod as K
from kemod.io import load_fixture

m = load_fixture("mainexample")
print("the 7-dimensional worked example:", K.jordan_type(m))

# K^2(M) is the span of the coefficient vectors of a polynomial kernel
# basis of (X1 + t X2)^2 -- exact, no sampling.
k2 = K.generic_kernel_power(m, 2)
print("dim K^2(M) =", k2.dim, f"({k2.method}, certified={k2.certified})")

# It decomposes into two copies of W_{2,2}, which makes F_1 immediate.
sub = K.sub_as_module(m, k2.subspace)[0]
dec = K.decompose(sub, seed=1)
w22 = K.w_module(3, 2, 2)
print("K^2(M) summand dims:", [s.dim for s in dec.summands],
      "all W_{2,2}:", all(K.iso_probe(s, w22, seed=0).isomorphic for s in dec.summands))
print("F_1(M) =", K.splitting_type(m, 1).human(), " (= F_1(W22)^2)")

# The filtration of the 16-dimensional example: M = J^{-1}K(M)/J^2 K(M),
# and K^2(M) sits strictly inside J^{-1}K(M).
s16 = load_fixture("sixteen")
print("\nthe 16-dimensional example:", K.jordan_type(s16))
for layer in K.generic_kernel_filtration(s16):
    print(f"  J^{layer.index:+d} K: dim {layer.subspace.dim}")
print("dim K^2 =", K.generic_kernel_power(s16, 2).dim, "(strictly below dim J^-1 K = 16)")

# The reduction theorems in action: F_i(M) computed on layer subquotients
# and on power subquotients.
for i in (1, 2):
    st = K.splitting_type(s16, i)
    lay = K.layer_module(s16, -i, i + 1)
    st_lay = K.splitting_type(lay, i)
    print(f"F_{i}: full module {st.human():>14}  on J^-{i}K/J^{i+1}K (dim {lay.dim}) {st_lay.human():>14}")

# Both inclusion chains, with the strictness the example exhibits.
rep = K.inclusion_chain_check(s16)
print("inclusion chains all hold:", rep["ok"])
