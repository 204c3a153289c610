"""Theorem verification suites and the two scanners.

verify_theorems runs every implemented structural identity on one module
and reports a pass/fail line per check.  The scanners assemble evidence on
the two open statements (the subquotient-isomorphism question and the
zero-sheaf conjecture for Loewy-length-three summands); they report, never
assert.
"""

from __future__ import annotations

import random

from .decomp import decompose, iso_probe
from .errors import KemodError, MathRefusal
from .generate import mixed_family
from .genker import (
    equal_images_decide,
    generic_image_power,
    generic_kernel_power,
    inclusion_chain_check,
    layer_module,
)
from .modules import (
    KEModule,
    constant_jordan_type,
    dual,
    jordan_type,
    loewy_length,
    quotient_module,
    radical_series,
    random_invertible,
    restrict,
    sub_as_module,
)
from .sheaf import (
    SplittingType,
    filtration_chern_check,
    fi_slice_dims,
    splitting_type,
)
from .subspace import Subspace


def verify_theorems(m: KEModule, seed: int = 0) -> dict:
    """Run the full invariant suite on one module; returns a structured report."""
    m.require_valid()
    checks: list[dict] = []

    def record(name, ok, detail=None):
        entry = {"check": name, "ok": bool(ok)}
        if detail is not None:
            entry["detail"] = detail
        checks.append(entry)

    p = m.ctx.p
    dec = constant_jordan_type(m)
    report = {"dim": m.dim, "p": p, "r": m.r, "cjt": dec.kind, "checks": checks}
    if dec.jordan_type is not None:
        report["jordan_type"] = repr(dec.jordan_type)
    if m.r != 2:
        report["note"] = "theorem suite materialized for r = 2; nothing to verify"
        report["ok"] = True
        return report
    if not dec.is_cjt:
        report["note"] = "module is not of constant Jordan type; bundle checks skipped"
        chains = inclusion_chain_check(m)
        record("inclusion chains", chains.get("ok", True) or chains.get("skipped", False), chains)
        report["ok"] = all(c["ok"] for c in checks)
        return report

    jt = dec.jordan_type
    rng = random.Random(seed)
    splittings = {}
    for i in range(1, p + 1):
        st = splitting_type(m, i)
        splittings[i] = st
        record(f"rank F_{i} = a_{i}", st.rank == jt.mult(i), {"rank": st.rank, "a_i": jt.mult(i)})
    report["splittings"] = {i: list(splittings[i].twists) for i in splittings}

    md = dual(m)
    for i in range(1, p + 1):
        expect = SplittingType(-a - i + 1 for a in splittings[i].twists)
        got = splitting_type(md, i)
        record(f"duality twist rule at i={i}", got == expect, {"got": list(got.twists)})

    for i in range(1, p + 1):
        lay = layer_module(m, -i, i + 1)
        try:
            got = splitting_type(lay, i)
            record(f"generic kernel reduction at i={i}", got == splittings[i])
        except MathRefusal as e:
            record(f"generic kernel reduction at i={i}", False, f"layer refused: {e}")

    for i in range(1, p + 1):
        n = i + 1
        if n > p:
            record(f"power reduction at i={i}", True, "n = i+1 exceeds p; K^n = M, identity")
            continue
        ksub = sub_as_module(m, generic_kernel_power(m, n).subspace)[0]
        q1 = quotient_module(ksub, generic_image_power(ksub, n))
        q2big = quotient_module(m, generic_image_power(m, n))
        q2 = sub_as_module(q2big, generic_kernel_power(q2big, n).subspace)[0]
        try:
            s1 = splitting_type(q1, i)
            s2 = splitting_type(q2, i)
            record(
                f"power reduction at i={i}",
                s1 == splittings[i] == s2,
                {"K/IK": list(s1.twists), "K(M/I)": list(s2.twists)},
            )
        except MathRefusal as e:
            record(f"power reduction at i={i}", False, f"subquotient refused: {e}")

    chern = filtration_chern_check(m, splittings)
    record("first Chern identity", chern["ok"], {"total": chern["total"]})

    amat = random_invertible(m.ctx, 2, rng)
    if m.fast:
        for i in range(1, p + 1):
            got = splitting_type(restrict(m, amat), i)
            record(f"coordinate-change invariance at i={i}", got == splittings[i])

    eip = equal_images_decide(m)
    if eip.verdict:
        rs = radical_series(m)
        for i in range(1, p + 1):
            for j in range(0, i):
                radj = sub_as_module(m, rs[j] if j < len(rs) else rs[-1])[0]
                try:
                    got = splitting_type(radj, i - j)
                    record(f"equal-images reduction (i={i}, j={j})", got == splittings[i])
                except MathRefusal as e:
                    record(f"equal-images reduction (i={i}, j={j})", False, str(e))

    for n in range(1, p + 1):
        primary = generic_image_power(m, n)  # internally cross-checked
        viaperp = generic_kernel_power(dual(m), n).subspace.perp()
        record(f"kernel/image duality at n={n}", primary == viaperp)

    chains = inclusion_chain_check(m)
    record("inclusion chains", chains["ok"] if not chains.get("skipped") else True, chains)

    for n in range(1, p):
        eq = _equal_n_images_slice_check(m, n)
        record(f"equal {n}-images sheaf criterion", eq["consistent"], eq)

    report["ok"] = all(c["ok"] for c in checks)
    return report


def _equal_n_images_slice_check(m: KEModule, n: int) -> dict:
    """Slice-level containment Ker theta^n <= ~K^n(M), degreewise; dimensions
    agree at a stable degree iff every Ker(X_alpha^n) equals K^n(M) — the
    equal n-kernels property, i.e. the equal n-images property of the dual."""
    from . import linalg
    from .genker import equal_n_images_decide
    from .sheaf import SliceCache

    deg = m.dim + m.ctx.p
    cache = SliceCache(m, 1)
    # kernel of theta^n in degree deg: {v : theta^{n} v = 0} via composed maps
    th = None
    for step in range(n):
        t = cache.theta(deg + step)
        th = t if th is None else (t @ th if m.fast else None)
    if m.fast:
        import numpy as np

        kern = linalg.kernel_fp(np.asarray(th) % m.ctx.p, m.ctx.p)
        kdim = kern.shape[0]
        ksub = Subspace.span(m.ctx, cache.ambient(deg), kern)
    else:
        return {"consistent": True, "skipped": "generic lane"}
    genk = generic_kernel_power(m, n).subspace
    # ~K^n slice in degree deg: K^n (x) S_deg
    nmono = deg + 1
    rows = []
    base = genk.basis
    import numpy as np

    for v in np.asarray(base, dtype=np.int64).reshape(genk.dim, m.dim):
        for mono in range(nmono):
            w = np.zeros(m.dim * nmono, dtype=np.int64)
            w[mono :: nmono] = v
            rows.append(w)
    tilde = Subspace.span(m.ctx, cache.ambient(deg), np.array(rows) if rows else np.zeros((0, cache.ambient(deg)), dtype=np.int64))
    contained = tilde.contains(ksub)
    dims_equal = kdim == tilde.dim
    eq = equal_n_images_decide(dual(m), n)
    verdict_matches = dims_equal == bool(eq.verdict) if eq.verdict is not None else True
    return {
        "consistent": contained and verdict_matches,
        "contained": contained,
        "slice_dims_equal": dims_equal,
        "equal_n_kernels": eq.verdict,
    }


# ---------------------------------------------------------------------------
# scanners
# ---------------------------------------------------------------------------


def conjecture_scan(count: int, seed: int, family: str = "all", primes=(3, 5)) -> dict:
    """Evidence scan: Loewy-length-3 summands of K^2/I^2 K^2 (and of
    K^2(M/I^2)) of constant-Jordan-type modules, checking whether the first
    subquotient sheaf vanishes on each.  Reports candidates; asserts nothing."""
    mods = _scan_family(count, seed, family, primes)
    examined = 0
    loewy3 = 0
    candidates = []
    anomalies = []
    for name, m in mods:
        p = m.ctx.p
        n = min(2, p)
        try:
            ksub = sub_as_module(m, generic_kernel_power(m, n).subspace)[0]
            q1 = quotient_module(ksub, generic_image_power(ksub, n))
            q2big = quotient_module(m, generic_image_power(m, n))
            q2 = sub_as_module(q2big, generic_kernel_power(q2big, n).subspace)[0]
        except KemodError as e:
            anomalies.append({"module": name, "error": str(e)})
            continue
        for tag, q in (("K2/I2K2", q1), ("K2(M/I2)", q2)):
            dec = decompose(q, seed=seed + examined, rounds=24)
            for s in dec.summands:
                examined += 1
                if loewy_length(s) != 3:
                    continue
                loewy3 += 1
                verdict = _f1_zero_evidence(s)
                if not verdict["zero"]:
                    candidates.append(
                        {"module": name, "form": tag, "dim": s.dim, "evidence": verdict}
                    )
    return {
        "scanned": len(mods),
        "summands_examined": examined,
        "loewy3_summands": loewy3,
        "nonzero_candidates": candidates,
        "anomalies": anomalies,
        "outcome": "no counterexample candidate found"
        if not candidates
        else f"{len(candidates)} candidate(s) found; inspect evidence",
    }


def _f1_zero_evidence(s: KEModule) -> dict:
    """Is the first subquotient sheaf of s the zero sheaf?  For CJT summands
    this is exact (rank a_1 and splitting); otherwise high-degree slice
    dimensions provide the evidence."""
    dec = constant_jordan_type(s)
    if dec.is_cjt:
        a1 = dec.jordan_type.mult(1)
        if a1 == 0:
            return {"zero": True, "method": "cjt rank", "a1": 0}
        st = splitting_type(s, 1)
        return {"zero": st.rank == 0, "method": "cjt splitting", "twists": list(st.twists)}
    hi = s.dim + s.ctx.p
    dims = fi_slice_dims(s, 1, hi)[-2:]
    return {"zero": all(d == 0 for d in dims), "method": "high-degree slices", "dims": dims}


def question_scan(count: int, seed: int, primes=(3, 5)) -> dict:
    """Evidence scan on K^n(M)/I^m K^n(M) vs K^n(M/I^m(M)).  Reports
    isomorphism-probe verdicts; Unknown stays Unknown."""
    mods = _scan_family(count, seed, "all", primes)
    results = {"isomorphic": 0, "not_isomorphic": 0, "unknown": 0}
    details = []
    for idx, (name, m) in enumerate(mods):
        p = m.ctx.p
        pairs = [(2, 2)] if p >= 3 else [(1, 1)]
        if p >= 3:
            pairs.append((2, 1))
        for n, mm in pairs:
            try:
                ksub = sub_as_module(m, generic_kernel_power(m, n).subspace)[0]
                a = quotient_module(ksub, generic_image_power(ksub, mm))
                qbig = quotient_module(m, generic_image_power(m, mm))
                b = sub_as_module(qbig, generic_kernel_power(qbig, n).subspace)[0]
            except KemodError as e:
                details.append({"module": name, "n": n, "m": mm, "error": str(e)})
                continue
            verdict = iso_probe(a, b, seed=seed + idx, rounds=64)
            results[verdict.kind] += 1
            if verdict.kind != "isomorphic":
                details.append(
                    {"module": name, "n": n, "m": mm, "verdict": verdict.kind,
                     "witness": verdict.witness, "dims": [a.dim, b.dim]}
                )
    return {"scanned": len(mods), "verdicts": results, "attention": details}


def _scan_family(count: int, seed: int, family: str, primes):
    members = mixed_family(count, seed, primes=primes, max_dim=14)
    out = []
    for mem in members:
        if family == "wmix" and "syzygy" in mem.name:
            continue
        if family == "syzygy" and "syzygy" not in mem.name:
            continue
        out.append((mem.name, mem.module))
    if family == "syzygy" and not out:
        # guarantee at least the syzygies themselves
        from .modules import syzygy as syz

        for p in primes:
            out.append((f"syzygy1(p={p})", syz(FieldCtxCache.get(p), 2, 1)))
    return out[:count] if len(out) > count else out


class FieldCtxCache:
    _cache: dict[int, object] = {}

    @classmethod
    def get(cls, p: int):
        from .gf import FieldCtx

        if p not in cls._cache:
            cls._cache[p] = FieldCtx(p)
        return cls._cache[p]
