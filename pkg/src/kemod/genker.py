"""Generic kernels, generic images, and the generic kernel filtration.

The n-th power generic kernel is computed exactly by the coefficient-span
method: a polynomial basis of the kernel of (X_1 + t_2 X_2 + ...)^n over
the rational function field specializes, at every point of a dense open
set, to a kernel basis; the F_q-span of all its monomial-coefficient
vectors therefore equals the sum of those kernels, which is the defining
intersection over dense opens.  Generic images go through duality, with
an independent direct intersection cross-check in rank two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, pencil
from .errors import ConsistencyError, InputError, MathRefusal
from .gf import some_irreducible_factor, splitting_extension
from .modules import (
    KEModule,
    PointSpec,
    _snf_of_power,
    apply_generator,
    constant_jrank_decide,
    dual,
    generic_power_ranks,
    gmat_pow_poly,
    is_invariant,
    preimage_under_all,
    radical,
    subquotient,
    x_alpha,
)
from .poly import RationalFunction, coefficient_vectors
from .subspace import Subspace


@dataclass
class GenericKernelReport:
    power: int
    subspace: Subspace
    method: str
    certified: bool

    @property
    def dim(self) -> int:
        return self.subspace.dim


@dataclass
class FiltrationLayer:
    index: int          # j in J^j K(M); negative j means the preimage layers
    subspace: Subspace


def generic_kernel_power(m: KEModule, n: int) -> GenericKernelReport:
    """The n-th power generic kernel, exact for every rank r."""
    m.require_valid()
    if not 1 <= n <= m.ctx.p:
        raise InputError(f"power must be in 1..{m.ctx.p}")
    key = ("genker", n)
    if key in m._cache:
        return m._cache[key]
    if m.r == 1:
        # only one point; the kernel of X_1^n itself
        if m.fast:
            ker = linalg.kernel_fp(linalg.matpow_fp(m.mats[0], n, m.ctx.p), m.ctx.p)
            sub = Subspace.span(m.ctx, m.dim, ker)
        else:
            from .modules import gmat_pow

            ap = gmat_pow(m.mats[0], n, m.ctx.zero, m.ctx.one)
            sub = Subspace.span(
                m.ctx, m.dim, linalg.kernel_gen([list(r) for r in ap], m.ctx.zero, m.ctx.one)
            )
        rep = GenericKernelReport(n, sub, "single-point-kernel", True)
    elif m.r == 2 and m.fast:
        rho = generic_power_ranks(m, n)[n - 1]
        gens = pencil.graded_kernel_basis(m.power_pencil(n), m.ctx.p, m.dim - rho)
        rows = pencil.coefficient_rows(gens)
        sub = Subspace.span(m.ctx, m.dim, rows.reshape(-1, m.dim) if rows.size else rows.reshape(0, m.dim))
        rep = GenericKernelReport(n, sub, "generic-point-coefficients", True)
    else:
        sub = _genker_symbolic(m, n)
        rep = GenericKernelReport(n, sub, "generic-point-coefficients", True)
    if not is_invariant(m, rep.subspace):
        raise ConsistencyError("generic kernel is not X-invariant")
    m._cache[key] = rep
    return rep


def _genker_symbolic(m: KEModule, n: int) -> Subspace:
    """Rational-function-field kernel + cleared denominators (any r, any k)."""
    a_sym = x_alpha(m, PointSpec.generic())
    apow = gmat_pow_poly(a_sym, n, m.ctx)
    nv = apow[0][0].nvars
    rows = [[RationalFunction.from_poly(e) for e in row] for row in apow]
    zero = RationalFunction.const(m.ctx, nv, 0)
    one = RationalFunction.const(m.ctx, nv, 1)
    kern = linalg.kernel_gen(rows, zero, one)
    coeff_rows = []
    for vec in kern:
        cleared = vec
        den_prod = one
        for e in vec:
            den_prod = den_prod * RationalFunction.from_poly(e.den)
        polys = []
        for e in cleared:
            val = e * den_prod
            if not val.den.is_constant():
                raise ConsistencyError("denominator failed to clear")
            polys.append(val.num * val.den.constant_value().inverse())
        for cv in coefficient_vectors(polys):
            coeff_rows.append(cv)
    if m.fast:
        arr = (
            np.array([[c.coeffs[0] for c in row] for row in coeff_rows], dtype=np.int64)
            if coeff_rows
            else np.zeros((0, m.dim), dtype=np.int64)
        )
        return Subspace.span(m.ctx, m.dim, arr)
    return Subspace.span(m.ctx, m.dim, coeff_rows)


def generic_kernel(m: KEModule) -> GenericKernelReport:
    return generic_kernel_power(m, 1)


def generic_image_power(m: KEModule, n: int, cross_check: bool = True) -> Subspace:
    """The n-th power generic image: perp of the dual's generic kernel.

    In rank two the direct computation (generic intersection cut down at
    the point at infinity and at every Smith-form jump point over its
    splitting field) runs as well, and disagreement is an error.
    """
    m.require_valid()
    if not 1 <= n <= m.ctx.p:
        raise InputError(f"power must be in 1..{m.ctx.p}")
    key = ("genimg", n, cross_check)
    if key in m._cache:
        return m._cache[key]
    md = dual(m)
    primary = generic_kernel_power(md, n).subspace.perp()
    if m.r == 2 and cross_check:
        direct = _direct_image_r2(m, n, primary)
        if direct != primary:
            raise ConsistencyError(
                f"generic image disagreement at n={n}: duality dim {primary.dim}, direct dim {direct.dim}"
            )
    m._cache[key] = primary
    return primary


def _direct_image_r2(m: KEModule, n: int, generic_part: Subspace) -> Subspace:
    """generic intersection cut down at (0,1) and at all SNF jump points."""
    ctx = m.ctx
    out = generic_part
    # the point at infinity, over the base field
    out = out.intersect(_image_at_infinity(m, n))
    # jump points on the chart: roots of non-unit invariant factors
    snf = _snf_of_power(m, n)
    nonunits = [f for f in snf.invariant_factors if len(f) > 1]
    if not nonunits:
        return out
    if not m.fast:
        # extension-point cuts are implemented for prime base fields only;
        # leave the duality value (flagged by the caller's method tag)
        return out
    remaining = nonunits[-1]
    seen: set[tuple] = set()
    ops_ctx = [ctx.scalar(c) for c in remaining]
    while len(ops_ctx) > 1:
        g = some_irreducible_factor(ctx, ops_ctx, seed=23)
        gkey = tuple(c.coeffs[0] for c in g)
        if gkey in seen:
            break
        seen.add(gkey)
        out = _cut_by_ext_image(m, n, out, g)
        from . import dpoly
        from .gf import scalar_ops

        ops = scalar_ops(ctx)
        q, rem = dpoly.divmod_(ops, ops_ctx, g)
        if rem:
            raise AssertionError("irreducible factor does not divide")
        ops_ctx = q
        while len(ops_ctx) > 1:
            q2, rem2 = dpoly.divmod_(ops, ops_ctx, g)
            if rem2:
                break
            ops_ctx = q2
    return out


def _image_at_infinity(m: KEModule, n: int) -> Subspace:
    if m.fast:
        ap = linalg.matpow_fp(m.mats[1], n, m.ctx.p)
        return Subspace.span(m.ctx, m.dim, ap.T)
    from .modules import gmat_pow

    ap = gmat_pow(m.mats[1], n, m.ctx.zero, m.ctx.one)
    cols = [[ap[a][b] for a in range(m.dim)] for b in range(m.dim)]
    return Subspace.span(m.ctx, m.dim, cols)


def _cut_by_ext_image(m: KEModule, n: int, w: Subspace, g: list) -> Subspace:
    """F_q-rational part of w cut by Im(X_alpha^n) at the point (1, theta),
    theta a root of the irreducible g over the prime base field."""
    ctx = m.ctx
    ext, root = splitting_extension(ctx, g)
    p = ctx.p
    if ext is ctx or getattr(ext, "k", None) == 1:
        a = (m.mats[0] + root.coeffs[0] * m.mats[1]) % p
        ap = linalg.matpow_fp(a, n, p)
        return w.intersect(Subspace.span(ctx, m.dim, ap.T))
    mdeg = ext.k
    blow = linalg.BlowupCtx(p, mdeg, list(ext.modulus))
    t = np.zeros((m.dim, m.dim, mdeg), dtype=np.int64)
    t[:, :, 0] = m.mats[0]
    t = (t + np.einsum("ab,j->abj", m.mats[1], np.array(root.coeffs, dtype=np.int64))) % p
    big = blow.blowup(t)                       # (d*mdeg, d*mdeg)
    bigpow = linalg.matpow_fp(big, n, p)
    # left kernel rows of bigpow = relations satisfied by the image columns
    perp_rows = linalg.kernel_fp(bigpow.T, p)  # each row length d*mdeg
    if perp_rows.shape[0] == 0 or w.dim == 0:
        return w
    # x real in Im  <=>  u . x = 0 for ext covectors u; the real rows of the
    # blowup left kernel are exactly those conditions expanded over F_p
    wb = np.asarray(w.basis, dtype=np.int64)   # (wdim, d)
    # embed real vector x into the blowup coordinate layout: x_b in the
    # theta^0 coordinate of block b
    embed = np.zeros((wb.shape[0], m.dim * mdeg), dtype=np.int64)
    embed[:, 0::mdeg] = wb
    cond = linalg.matmul_fp(perp_rows, embed.T, p)   # (conds, wdim)
    lam = linalg.kernel_fp(cond, p)
    if lam.shape[0] == 0:
        return Subspace.zero(ctx, m.dim)
    newrows = linalg.matmul_fp(lam, wb, p)
    return Subspace.span(ctx, m.dim, newrows)


# ---------------------------------------------------------------------------
# J-power operators and the filtration
# ---------------------------------------------------------------------------


def j_power(m: KEModule, sub: Subspace, j: int) -> Subspace:
    """Span of all length-j generator words applied to an invariant subspace."""
    if j < 0:
        raise InputError("j_power needs j >= 0")
    if not is_invariant(m, sub):
        raise InputError("subspace is not X-invariant")
    cur = sub
    for _ in range(j):
        nxt = Subspace.zero(m.ctx, m.dim)
        for i in range(m.r):
            nxt = nxt.sum(apply_generator(m, i, cur))
        cur = nxt
    return cur


def j_inverse(m: KEModule, sub: Subspace, j: int) -> Subspace:
    """{v : every length-j generator word sends v into the subspace}."""
    if j < 0:
        raise InputError("j_inverse needs j >= 0")
    if not is_invariant(m, sub):
        raise InputError("subspace is not X-invariant")
    cur = sub
    for _ in range(j):
        cur = preimage_under_all(m, cur)
    return cur


def filtration_layer(m: KEModule, j: int) -> Subspace:
    """J^j K(M) for j >= 0, or the preimage layer J^{-|j|} K(M) for j < 0."""
    key = ("gk_layer", j)
    if key in m._cache:
        return m._cache[key]
    k = generic_kernel(m).subspace
    sub = j_power(m, k, j) if j >= 0 else j_inverse(m, k, -j)
    m._cache[key] = sub
    return sub


def generic_kernel_filtration(m: KEModule) -> list[FiltrationLayer]:
    """Layers J^p K <= ... <= K <= J^{-1} K <= ... <= J^{-p+1} K = M (r = 2)."""
    m.require_valid()
    if m.r != 2:
        raise InputError("the generic kernel filtration is materialized for r = 2 only")
    p = m.ctx.p
    layers = [FiltrationLayer(j, filtration_layer(m, j)) for j in range(p, -p, -1)]
    if layers[0].subspace.dim != 0:
        raise ConsistencyError("J^p K(M) is nonzero")
    if layers[-1].subspace.dim != m.dim:
        raise ConsistencyError("J^{-p+1} K(M) is not all of M")
    for a, b in zip(layers, layers[1:]):
        if not b.subspace.contains(a.subspace):
            raise ConsistencyError("filtration layers are not nested")
    return layers


def layer_module(m: KEModule, top_index: int, bottom_index: int) -> KEModule:
    """The subquotient J^top K(M) / J^bottom K(M); needs top_index <= bottom_index."""
    if top_index > bottom_index:
        raise InputError("top layer index must be <= bottom layer index")
    top = filtration_layer(m, top_index)
    bottom = filtration_layer(m, bottom_index)
    return subquotient(m, top, bottom)


# ---------------------------------------------------------------------------
# equal images decisions and the inclusion chains
# ---------------------------------------------------------------------------


@dataclass
class EqualImagesDecision:
    verdict: bool | None          # None = probabilistic "probably equal"
    n: int
    detail: dict

    def __bool__(self):
        if self.verdict is None:
            raise MathRefusal("probabilistic verdict; inspect .detail")
        return self.verdict


def equal_images_decide(m: KEModule) -> EqualImagesDecision:
    """Equal images <=> constant 1-rank and generic rank = dim Rad(M)."""
    return equal_n_images_decide(m, 1)


def equal_n_images_decide(m: KEModule, n: int) -> EqualImagesDecision:
    m.require_valid()
    dec = constant_jrank_decide(m, n)
    if dec.kind == "not_constant":
        return EqualImagesDecision(False, n, {"reason": "rank not constant", "witness": dec.witness})
    if n == 1:
        target = radical(m).dim
        tagname = "dim_radical"
    else:
        target = generic_image_power(m, n).dim
        tagname = "dim_generic_image"
    equal = dec.rank == target
    detail = {"generic_rank": dec.rank, tagname: target}
    if dec.kind == "probably_constant":
        detail["confidence"] = dec.confidence
        return EqualImagesDecision(None if equal else False, n, detail)
    return EqualImagesDecision(equal, n, detail)


def inclusion_chain_check(m: KEModule) -> dict:
    """Verify K^n(M) <= J^{-n+1} K(M) and J^n K(M) <= I^n(M) for 1 <= n <= p,
    plus monotonicity and the endpoint identities (constant-rank r=2 modules)."""
    m.require_valid()
    if m.r != 2:
        raise InputError("inclusion chains are materialized for r = 2 only")
    p = m.ctx.p
    dec = constant_jrank_decide(m, 1)
    if not dec.constant:
        return {"skipped": True, "reason": "module does not have constant rank"}
    report = {"skipped": False, "checks": [], "ok": True}

    def record(name, ok, extra=None):
        entry = {"check": name, "ok": bool(ok)}
        if extra:
            entry.update(extra)
        report["checks"].append(entry)
        if not ok:
            report["ok"] = False

    kers = [generic_kernel_power(m, n).subspace for n in range(1, p + 1)]
    imgs = []
    for n in range(1, p + 1):
        try:
            imgs.append(generic_image_power(m, n))
        except ConsistencyError as e:
            record(f"I^{n} defined consistently", False, {"error": str(e)})
            return report
    record("K^1 = K", kers[0] == filtration_layer(m, 0))
    record("K^p = M", kers[p - 1].dim == m.dim)
    record("I^p = 0", imgs[p - 1].dim == 0)
    record("J K = I^1", filtration_layer(m, 1) == imgs[0])
    for n in range(1, p):
        record(f"K^{n} <= K^{n+1}", kers[n].contains(kers[n - 1]))
        record(f"I^{n+1} <= I^{n}", imgs[n - 1].contains(imgs[n]))
    for n in range(1, p + 1):
        upper = filtration_layer(m, -(n - 1))
        record(
            f"K^{n} <= J^-{n-1} K",
            upper.contains(kers[n - 1]),
            {"dim_Kn": kers[n - 1].dim, "dim_layer": upper.dim},
        )
        lower = filtration_layer(m, n)
        record(
            f"J^{n} K <= I^{n}",
            imgs[n - 1].contains(lower),
            {"dim_In": imgs[n - 1].dim, "dim_layer": lower.dim},
        )
    return report
