"""Modules over k[X_1..X_r]/(X_i^p) as commuting nilpotent matrices.

The central object is KEModule: r commuting d x d matrices over F_q with
vanishing p-th powers.  Module elements are column vectors; subspaces are
row-echelon bases.  Everything downstream (Jordan types, generic kernels,
sheaf slices) is phrased in terms of this class.

Exact generic ranks — the rank of X_alpha^j at the generic point of the
projective parameter space — are computed by maximizing numeric ranks over
a grid larger than the degree of any maximal minor, passing to an extension
field (via multiplication-matrix blowups) when the base field is too small.
That keeps the hot paths in numpy while staying exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg, pencil
from .errors import InputError, MathRefusal
from .gf import FieldCtx, FieldScalar, QuotExtCtx, some_irreducible_factor, splitting_extension
from .poly import Poly
from .snf import smith_normal_form
from .subspace import Subspace

MAX_FREE_DIM = 4096


# ---------------------------------------------------------------------------
# small value types
# ---------------------------------------------------------------------------


class JordanType:
    """Multiplicities a_1..a_p: block length j occurs a_j times."""

    __slots__ = ("p", "mults")

    def __init__(self, p: int, mults):
        mults = tuple(int(a) for a in mults)
        if len(mults) != p or any(a < 0 for a in mults):
            raise InputError("need p nonnegative multiplicities")
        self.p = p
        self.mults = mults

    @classmethod
    def from_ranks(cls, p: int, dim: int, ranks: list[int]) -> "JordanType":
        """a_j = r_{j-1} - 2 r_j + r_{j+1}, with r_0 = dim and r_j = 0 for j >= p."""
        r = [dim] + list(ranks) + [0, 0]
        mults = [r[j - 1] - 2 * r[j] + r[j + 1] for j in range(1, p + 1)]
        jt = cls(p, mults)
        if jt.dim() != dim:
            raise InputError("rank sequence is not a Jordan rank profile")
        return jt

    def dim(self) -> int:
        return sum((j + 1) * a for j, a in enumerate(self.mults))

    def blocks(self) -> list[int]:
        out = []
        for j in range(self.p, 0, -1):
            out.extend([j] * self.mults[j - 1])
        return out

    def mult(self, j: int) -> int:
        return self.mults[j - 1]

    def __eq__(self, other):
        return isinstance(other, JordanType) and (self.p, self.mults) == (other.p, other.mults)

    def __hash__(self):
        return hash((self.p, self.mults))

    def __repr__(self):
        if self.dim() == 0:
            return "[]"
        parts = []
        for j in range(self.p, 0, -1):
            a = self.mults[j - 1]
            if a == 1:
                parts.append(f"[{j}]")
            elif a > 1:
                parts.append(f"[{j}]^{a}")
        return "".join(parts)


class PointSpec:
    """A closed point of the parameter space, or the generic point (1, t_2..t_r)."""

    __slots__ = ("coords", "ctx")

    def __init__(self, coords, ctx):
        self.coords = coords  # None for generic
        self.ctx = ctx

    @classmethod
    def generic(cls) -> "PointSpec":
        return cls(None, None)

    @classmethod
    def closed(cls, ctx, coords) -> "PointSpec":
        coords = tuple(ctx.scalar(c) if isinstance(c, int) else c for c in coords)
        if not any(bool(c) for c in coords):
            raise InputError("point must be nonzero")
        return cls(coords, ctx)

    @property
    def is_generic(self) -> bool:
        return self.coords is None

    def __repr__(self):
        return "generic" if self.is_generic else f"({', '.join(map(repr, self.coords))})"


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# generic-lane matrix helpers (extension fields; small sizes)
# ---------------------------------------------------------------------------


def gmat_mul(a, b, zero):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    out = [[zero for _ in range(k)] for _ in range(n)]
    for i in range(n):
        for s in range(m):
            c = a[i][s]
            if not c:
                continue
            row = b[s]
            oi = out[i]
            for j in range(k):
                if row[j]:
                    oi[j] = oi[j] + c * row[j]
    return out


def gmat_pow(a, e, zero, one):
    n = len(a)
    result = [[one if i == j else zero for j in range(n)] for i in range(n)]
    base = a
    while e:
        if e & 1:
            result = gmat_mul(result, base, zero)
        base = gmat_mul(base, base, zero)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# KEModule
# ---------------------------------------------------------------------------


class KEModule:
    """r commuting d x d nilpotent generator matrices over F_q."""

    __slots__ = ("ctx", "r", "dim", "mats", "labels", "_cache")

    def __init__(self, ctx: FieldCtx, r: int, mats, labels=None):
        if r < 1:
            raise InputError("rank r must be >= 1")
        self.ctx = ctx
        self.r = r
        if ctx.k == 1:
            mats = tuple(np.asarray(m, dtype=np.int64) % ctx.p for m in mats)
            dims = {m.shape for m in mats}
            if len(mats) != r or (mats and (len(dims) != 1 or mats[0].shape[0] != mats[0].shape[1])):
                raise InputError("need r square matrices of equal size")
            self.dim = int(mats[0].shape[0]) if mats else 0
        else:
            mats = tuple(tuple(tuple(ctx.scalar(e) for e in row) for row in m) for m in mats)
            self.dim = len(mats[0]) if mats else 0
            for m in mats:
                if len(m) != self.dim or any(len(row) != self.dim for row in m):
                    raise InputError("need square matrices of equal size")
        self.mats = mats
        self.labels = tuple(labels) if labels else None
        self._cache = {}

    # -- bookkeeping ----------------------------------------------------------

    @property
    def fast(self) -> bool:
        return self.ctx.k == 1

    def mat(self, i: int):
        return self.mats[i]

    def validate(self) -> ValidationReport:
        """Check commutativity and vanishing p-th powers."""
        key = "validation"
        if key in self._cache:
            return self._cache[key]
        violations = []
        p = self.ctx.p
        if self.fast:
            for i in range(self.r):
                for j in range(i + 1, self.r):
                    a = linalg.matmul_fp(self.mats[i], self.mats[j], p)
                    b = linalg.matmul_fp(self.mats[j], self.mats[i], p)
                    if not np.array_equal(a, b):
                        violations.append({"kind": "commutativity", "pair": (i + 1, j + 1)})
            for i in range(self.r):
                if linalg.matpow_fp(self.mats[i], p, p).any():
                    violations.append({"kind": "pth_power", "index": i + 1})
        else:
            zero, one = self.ctx.zero, self.ctx.one
            for i in range(self.r):
                for j in range(i + 1, self.r):
                    a = gmat_mul(self.mats[i], self.mats[j], zero)
                    b = gmat_mul(self.mats[j], self.mats[i], zero)
                    if a != b:
                        violations.append({"kind": "commutativity", "pair": (i + 1, j + 1)})
            for i in range(self.r):
                pw = gmat_pow(self.mats[i], p, zero, one)
                if any(any(bool(e) for e in row) for row in pw):
                    violations.append({"kind": "pth_power", "index": i + 1})
        report = ValidationReport(not violations, violations)
        self._cache[key] = report
        return report

    def require_valid(self):
        rep = self.validate()
        if not rep.ok:
            raise MathRefusal(f"invalid module: {rep.violations[0]}")

    def pencil(self) -> pencil.Pm:
        """X_1 + t X_2 (r = 2, prime field only)."""
        if self.r != 2 or not self.fast:
            raise InputError("pencil form needs r = 2 over a prime field")
        key = "pencil"
        if key not in self._cache:
            self._cache[key] = pencil.pm_from_pair(self.mats[0], self.mats[1])
        return self._cache[key]

    def power_pencil(self, j: int) -> pencil.Pm:
        key = ("power_pencil", j)
        if key not in self._cache:
            self._cache[key] = pencil.pm_pow(self.pencil(), j, self.ctx.p)
        return self._cache[key]

    def __repr__(self):
        return f"KEModule(p={self.ctx.p}, k={self.ctx.k}, r={self.r}, dim={self.dim})"


# ---------------------------------------------------------------------------
# X_alpha and ranks
# ---------------------------------------------------------------------------


def x_alpha(m: KEModule, pt: PointSpec):
    """The operator sum(lambda_i X_i) at a closed point, or the symbolic
    X_1 + t_2 X_2 + ... at the generic point (Poly entries, chart lambda_1 = 1)."""
    m.require_valid()
    if pt.is_generic:
        nv = max(m.r - 1, 1)
        rows = []
        for a in range(m.dim):
            row = []
            for b in range(m.dim):
                terms = {}
                for i in range(m.r):
                    c = _entry_scalar(m, i, a, b)
                    if not c:
                        continue
                    e = [0] * nv
                    if i > 0:
                        e[i - 1] = 1
                    e = tuple(e)
                    s = terms.get(e, m.ctx.zero) + c
                    if s:
                        terms[e] = s
                    else:
                        terms.pop(e, None)
                row.append(Poly(m.ctx, nv, terms))
            rows.append(row)
        return rows
    coords = pt.coords
    if len(coords) != m.r:
        raise InputError("point has wrong number of coordinates")
    if m.fast and isinstance(coords[0], FieldScalar) and coords[0].ctx.same_field(m.ctx):
        out = np.zeros((m.dim, m.dim), dtype=np.int64)
        for i, c in enumerate(coords):
            out = (out + c.coeffs[0] * m.mats[i]) % m.ctx.p
        return out
    # Extension-field point: generic matrix over the point's field.
    fld = coords[0].ctx
    zero = fld.zero
    out = [[zero for _ in range(m.dim)] for _ in range(m.dim)]
    for i, c in enumerate(coords):
        if not c:
            continue
        for a in range(m.dim):
            for b in range(m.dim):
                e = _entry_in(m, i, a, b, fld)
                if e:
                    out[a][b] = out[a][b] + c * e
    return out


def _entry_scalar(m: KEModule, i: int, a: int, b: int) -> FieldScalar:
    if m.fast:
        v = int(m.mats[i][a, b])
        return m.ctx.scalar(v)
    return m.mats[i][a][b]


def _entry_in(m: KEModule, i: int, a: int, b: int, fld):
    """Entry (a,b) of X_i embedded into the field `fld`."""
    if m.fast:
        v = int(m.mats[i][a, b])
        if isinstance(fld, QuotExtCtx):
            return fld.embed(m.ctx.scalar(v))
        return fld.scalar(v)
    e = m.mats[i][a][b]
    if isinstance(fld, QuotExtCtx):
        return fld.embed(e)
    if fld.same_field(m.ctx):
        return e
    # prime-coefficient embedding only makes sense from a prime base
    raise InputError("cannot embed extension scalars into an unrelated field")


def rank_at_point(m: KEModule, coords, power: int = 1) -> int:
    """Rank of X_alpha^power at a closed point (exact, any field)."""
    fld = coords[0].ctx
    if m.fast and isinstance(fld, FieldCtx) and fld.k == 1 and fld.same_field(m.ctx):
        a = x_alpha(m, PointSpec.closed(m.ctx, coords))
        return linalg.rank_fp(linalg.matpow_fp(a, power, m.ctx.p), m.ctx.p)
    if m.fast and isinstance(fld, FieldCtx):
        # coefficient-tensor blowup to F_p
        mdeg = fld.k
        blow = linalg.BlowupCtx(m.ctx.p, mdeg, list(fld.modulus))
        t = np.zeros((m.dim, m.dim, mdeg), dtype=np.int64)
        for i, c in enumerate(coords):
            t = (t + np.einsum("ab,j->abj", m.mats[i], np.array(c.coeffs, dtype=np.int64))) % m.ctx.p
        big = blow.blowup(t)
        big = linalg.matpow_fp(big, power, m.ctx.p)
        rk = linalg.rank_fp(big, m.ctx.p)
        if rk % mdeg:
            raise AssertionError("extension rank not divisible by degree")
        return rk // mdeg
    a = x_alpha(m, PointSpec(coords, fld))
    zero = fld.zero
    one = fld.one if not isinstance(fld, QuotExtCtx) else fld.one
    apow = gmat_pow(a, power, zero, one)
    return linalg.rank_gen(apow, zero)


def _ext_points(ctx: FieldCtx, count: int):
    """`count` distinct points: from the base field if big enough, else from
    the smallest extension that fits.  Returns (field, list of scalars)."""
    if ctx.q >= count:
        if ctx.k == 1:
            return ctx, [ctx.scalar(v) for v in range(count)]
        out = list(itertools.islice(ctx.elements(), count))
        return ctx, out
    if ctx.k == 1:
        mdeg = 1
        while ctx.p**mdeg < count:
            mdeg += 1
        ext = FieldCtx(ctx.p, mdeg)
        out = list(itertools.islice(ext.elements(), count))
        return ext, out
    # extension of an extension: quotient ring scalars
    mdeg = 1
    while ctx.q**mdeg < count:
        mdeg += 1
    g = _some_irreducible_over(ctx, mdeg)
    ext = QuotExtCtx(ctx, tuple(g))
    out = []
    it = itertools.product(ctx.elements(), repeat=mdeg)
    for tup in it:
        out.append(ext.embed(tup[0]) if mdeg == 1 else _quot_from_coeffs(ext, tup))
        if len(out) == count:
            break
    return ext, out


def _quot_from_coeffs(ext: QuotExtCtx, tup):
    from .gf import QuotExtScalar

    return QuotExtScalar(ext, tuple(tup))


def _some_irreducible_over(ctx: FieldCtx, deg: int):
    """A monic irreducible of given degree over F_q (search + factor test)."""
    rng = random.Random(f"irrover:{ctx.p}:{ctx.k}:{deg}")
    while True:
        coeffs = [ctx.random_scalar(rng) for _ in range(deg)] + [ctx.one]
        f = some_irreducible_factor(ctx, coeffs, seed=7)
        if len(f) - 1 == deg:
            return f


def generic_power_ranks(m: KEModule, jmax: int) -> list[int]:
    """Exact ranks over F_q(t_2..t_r) of X_alpha^j for j = 1..jmax (generic point).

    The rank equals the maximum of the numeric ranks over any grid whose
    side exceeds the total degree of a maximal minor (<= j * dim), taken in
    an extension field when the base is too small.
    """
    m.require_valid()
    key = ("generic_ranks", jmax)
    if key in self_cache(m):
        return m._cache[key]
    p, d = m.ctx.p, m.dim
    jmax = min(jmax, p)
    if d == 0 or m.r == 1:
        if m.fast:
            ranks = [
                linalg.rank_fp(linalg.matpow_fp(m.mats[0], j, p), p) if d else 0
                for j in range(1, jmax + 1)
            ]
        else:
            zero, one = m.ctx.zero, m.ctx.one
            ranks = [
                linalg.rank_gen(gmat_pow(m.mats[0], j, zero, one), zero) if d else 0
                for j in range(1, jmax + 1)
            ]
        m._cache[key] = ranks
        return ranks
    bound = jmax * d + 1
    nvars = m.r - 1
    if nvars >= 2 and bound**nvars > 300_000:
        raise InputError("generic-rank grid too large for this rank and dimension")
    fld, pts = _ext_points(m.ctx, bound)
    ranks = [0] * jmax
    if m.fast and isinstance(fld, FieldCtx):
        mdeg = fld.k
        blow = linalg.BlowupCtx(p, mdeg, list(fld.modulus)) if mdeg > 1 else None
        for tup in itertools.product(pts, repeat=nvars):
            if mdeg == 1:
                a = m.mats[0].copy()
                for i, c in enumerate(tup):
                    a = (a + c.coeffs[0] * m.mats[i + 1]) % p
                pw = a
                for j in range(1, jmax + 1):
                    if j > 1:
                        pw = linalg.matmul_fp(pw, a, p)
                    ranks[j - 1] = max(ranks[j - 1], linalg.rank_fp(pw, p))
            else:
                t = np.zeros((d, d, mdeg), dtype=np.int64)
                t[:, :, 0] = m.mats[0]
                for i, c in enumerate(tup):
                    t = (t + np.einsum("ab,j->abj", m.mats[i + 1], np.array(c.coeffs, dtype=np.int64))) % p
                big = blow.blowup(t)
                pw = big
                for j in range(1, jmax + 1):
                    if j > 1:
                        pw = linalg.matmul_fp(pw, big, p)
                    rk = linalg.rank_fp(pw, p)
                    ranks[j - 1] = max(ranks[j - 1], rk // mdeg)
    else:
        one = fld.one
        for tup in itertools.product(pts, repeat=nvars):
            coords = (one,) + tuple(tup)
            for j in range(1, jmax + 1):
                ranks[j - 1] = max(ranks[j - 1], rank_at_point(m, coords, j))
    m._cache[key] = ranks
    return ranks


def self_cache(m: KEModule) -> dict:
    return m._cache


def jordan_type(m: KEModule, pt: PointSpec | None = None) -> JordanType:
    """Jordan type of X_alpha on M at a closed or generic point."""
    m.require_valid()
    p = m.ctx.p
    if m.dim == 0:
        return JordanType(p, (0,) * p)
    if pt is None:
        pt = PointSpec.generic()
    if pt.is_generic:
        ranks = generic_power_ranks(m, p)
    else:
        ranks = [rank_at_point(m, pt.coords, j) for j in range(1, p + 1)]
    return JordanType.from_ranks(p, m.dim, ranks)


# ---------------------------------------------------------------------------
# constant rank / constant Jordan type decisions
# ---------------------------------------------------------------------------


@dataclass
class JRankDecision:
    kind: str                      # "constant" | "not_constant" | "probably_constant"
    j: int
    rank: int
    witness: dict | None = None
    confidence: float | None = None

    @property
    def constant(self) -> bool:
        return self.kind == "constant"


@dataclass
class CJTDecision:
    kind: str                      # "cjt" | "not_cjt" | "probably_cjt"
    jordan_type: JordanType | None
    witness: dict | None = None
    confidence: float | None = None

    @property
    def is_cjt(self) -> bool:
        return self.kind == "cjt"


def _snf_of_power(m: KEModule, j: int):
    """Invariant factors of (X_1 + t X_2)^j over F_q[t] (r = 2)."""
    key = ("snf", j)
    if key in m._cache:
        return m._cache[key]
    if m.fast:
        pj = m.power_pencil(j)
        entries = [
            [list(map(int, pj[a, b, :])) for b in range(m.dim)]
            for a in range(m.dim)
        ]
        res = smith_normal_form(entries, m.ctx)
    else:
        zero, one = m.ctx.zero, m.ctx.one
        a_sym = x_alpha(m, PointSpec.generic())
        apow = gmat_pow_poly(a_sym, j, m.ctx)
        entries = [[e for e in row] for row in apow]
        res = smith_normal_form(entries, m.ctx)
    m._cache[key] = res
    return res


def gmat_pow_poly(a, e: int, ctx):
    n = len(a)
    one = Poly.const(ctx, a[0][0].nvars, 1)
    zero = Poly.zero(ctx, a[0][0].nvars)
    result = [[one if i == j else zero for j in range(n)] for i in range(n)]
    base = a
    while e:
        if e & 1:
            result = _poly_mat_mul(result, base, zero)
        base = _poly_mat_mul(base, base, zero)
        e >>= 1
    return result


def _poly_mat_mul(a, b, zero):
    n, mdim, k = len(a), len(b), len(b[0])
    out = [[zero for _ in range(k)] for _ in range(n)]
    for i in range(n):
        for s in range(mdim):
            c = a[i][s]
            if c.is_zero():
                continue
            for j in range(k):
                if not b[s][j].is_zero():
                    out[i][j] = out[i][j] + c * b[s][j]
    return out


def constant_jrank_decide(
    m: KEModule, j: int, samples: int = 64, ext_degree: int | None = None, seed: int = 0
) -> JRankDecision:
    """Decide whether rank(X_alpha^j) is independent of the point.

    Exact for r <= 2 (Smith form over F_q[t] on the affine chart plus the
    point at infinity); Monte Carlo with an exact generic rank for r >= 3.
    """
    m.require_valid()
    p = m.ctx.p
    if not 1 <= j <= p:
        raise InputError(f"power j must be in 1..{p}")
    key = ("jrank", j)
    if key in m._cache:
        return m._cache[key]
    if j == p:
        dec = JRankDecision("constant", j, 0)
        m._cache[key] = dec
        return dec
    rho = generic_power_ranks(m, j)[j - 1]
    if m.r == 1:
        dec = JRankDecision("constant", j, rho)
        m._cache[key] = dec
        return dec
    if m.r == 2:
        snf = _snf_of_power(m, j)
        if snf.rank != rho:
            raise AssertionError("SNF rank disagrees with generic rank")
        nonunit = next((f for f in snf.invariant_factors if len(f) > 1), None)
        if nonunit is not None:
            dec = _witness_from_factor(m, j, rho, nonunit)
        else:
            # affine chart constant; check the point at infinity (0, 1)
            inf_rank = rank_at_point(m, (m.ctx.zero, m.ctx.one), j)
            if inf_rank != rho:
                dec = JRankDecision(
                    "not_constant",
                    j,
                    rho,
                    witness={
                        "point": "(0, 1)",
                        "rank_there": inf_rank,
                        "generic_rank": rho,
                    },
                )
            else:
                dec = JRankDecision("constant", j, rho)
        m._cache[key] = dec
        return dec
    # r >= 3: Monte Carlo over a large extension
    if ext_degree is None:
        ext_degree = 1
        while (m.ctx.q**ext_degree) <= 2**20:
            ext_degree += 1
    if m.ctx.k == 1:
        ext = FieldCtx(m.ctx.p, ext_degree) if ext_degree > 1 else m.ctx
    else:
        ext = m.ctx if ext_degree == 1 else QuotExtCtx(m.ctx, tuple(_some_irreducible_over(m.ctx, ext_degree)))
    rng = random.Random(seed)
    for _ in range(samples):
        coords = _random_projective_point(ext, m.r, rng)
        rk = rank_at_point(m, coords, j)
        if rk != rho:
            dec = JRankDecision(
                "not_constant",
                j,
                rho,
                witness={"point": repr(coords), "rank_there": rk, "generic_rank": rho},
            )
            m._cache[key] = dec
            return dec
    qext = ext.q if hasattr(ext, "q") else m.ctx.q**ext_degree
    per = min(1.0, (j * m.dim) / qext)
    dec = JRankDecision("probably_constant", j, rho, confidence=1.0 - per**samples if samples else 0.0)
    m._cache[key] = dec
    return dec


def _random_projective_point(fld, r: int, rng: random.Random):
    while True:
        if isinstance(fld, QuotExtCtx):
            coords = tuple(
                _quot_from_coeffs(fld, tuple(fld.base.random_scalar(rng) for _ in range(fld.deg)))
                for _ in range(r)
            )
        else:
            coords = tuple(fld.random_scalar(rng) for _ in range(r))
        if any(bool(c) for c in coords):
            return coords


def _witness_from_factor(m: KEModule, j: int, rho: int, factor) -> JRankDecision:
    """Name a jump point by the minimal polynomial of a root of a non-unit
    invariant factor, and re-verify the rank drop over the splitting field."""
    ctx = m.ctx
    if ctx.k == 1:
        fs = [ctx.scalar(c) for c in factor]
    else:
        fs = list(factor)
    g = some_irreducible_factor(ctx, fs, seed=11)
    ext, root = splitting_extension(ctx, g)
    one = ext.one if isinstance(ext, QuotExtCtx) else ext.one
    coords = (one, root)
    rk = rank_at_point(m, coords, j)
    if rk >= rho:
        raise AssertionError("claimed jump point has full rank")
    minpoly = [c.serialize() if isinstance(c, FieldScalar) else c for c in g]
    return JRankDecision(
        "not_constant",
        j,
        rho,
        witness={
            "minimal_polynomial": minpoly,
            "point": "(1, theta) with theta a root of the minimal polynomial",
            "rank_there": rk,
            "generic_rank": rho,
        },
    )


def constant_jordan_type(m: KEModule, samples: int = 64, ext_degree: int | None = None, seed: int = 0) -> CJTDecision:
    """Decide constant Jordan type (exact for r <= 2)."""
    m.require_valid()
    key = ("cjt", samples if m.r >= 3 else None)
    if key in m._cache:
        return m._cache[key]
    p = m.ctx.p
    probable = False
    for j in range(1, p):
        dec = constant_jrank_decide(m, j, samples=samples, ext_degree=ext_degree, seed=seed + j)
        if dec.kind == "not_constant":
            out = CJTDecision("not_cjt", None, witness={"j": j, **(dec.witness or {})})
            m._cache[key] = out
            return out
        if dec.kind == "probably_constant":
            probable = True
    jt = jordan_type(m, PointSpec.generic())
    out = CJTDecision("probably_cjt" if probable else "cjt", jt)
    m._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def trivial_module(ctx: FieldCtx, r: int, d: int = 1) -> KEModule:
    if ctx.k == 1:
        return KEModule(ctx, r, [np.zeros((d, d), dtype=np.int64) for _ in range(r)])
    zero = ctx.zero
    zmat = tuple(tuple(zero for _ in range(d)) for _ in range(d))
    return KEModule(ctx, r, [zmat] * r)


def w_module(p_or_ctx, n: int, d: int) -> KEModule:
    """The module W_{n,d}: layers ell = 0..d-1 with basis u_{ell,j}, j = 1..n-ell;
    X_1 u_{ell,j} = u_{ell+1,j-1}, X_2 u_{ell,j} = u_{ell+1,j} (zero off the grid)."""
    ctx = p_or_ctx if isinstance(p_or_ctx, FieldCtx) else FieldCtx(p_or_ctx)
    if not (1 <= d <= n and d <= ctx.p):
        raise InputError("w_module needs 1 <= d <= n and d <= p")
    offsets = [0]
    for ell in range(d):
        offsets.append(offsets[-1] + (n - ell))
    dim = offsets[-1]

    def idx(ell, jj):
        return offsets[ell] + (jj - 1)

    x1 = np.zeros((dim, dim), dtype=np.int64)
    x2 = np.zeros((dim, dim), dtype=np.int64)
    labels = []
    for ell in range(d):
        for jj in range(1, n - ell + 1):
            labels.append(f"u{ell}_{jj}")
            if ell < d - 1:
                if jj > 1:
                    x1[idx(ell + 1, jj - 1), idx(ell, jj)] = 1
                if jj <= n - ell - 1:
                    x2[idx(ell + 1, jj), idx(ell, jj)] = 1
    if ctx.k > 1:
        return KEModule(ctx, 2, [x1.tolist(), x2.tolist()], labels=labels)
    return KEModule(ctx, 2, [x1, x2], labels=labels)


def direct_sum(a: KEModule, b: KEModule) -> KEModule:
    if a.r != b.r or not a.ctx.same_field(b.ctx):
        raise InputError("direct sum needs matching p, r, field")
    if a.fast:
        mats = []
        for i in range(a.r):
            m = np.zeros((a.dim + b.dim, a.dim + b.dim), dtype=np.int64)
            m[: a.dim, : a.dim] = a.mats[i]
            m[a.dim :, a.dim :] = b.mats[i]
            mats.append(m)
        return KEModule(a.ctx, a.r, mats)
    zero = a.ctx.zero
    mats = []
    for i in range(a.r):
        n = a.dim + b.dim
        m = [[zero for _ in range(n)] for _ in range(n)]
        for x in range(a.dim):
            for y in range(a.dim):
                m[x][y] = a.mats[i][x][y]
        for x in range(b.dim):
            for y in range(b.dim):
                m[a.dim + x][a.dim + y] = b.mats[i][x][y]
        mats.append(tuple(tuple(row) for row in m))
    return KEModule(a.ctx, a.r, mats)


def dual(m: KEModule) -> KEModule:
    """k-linear dual: X_i acts by plain transpose."""
    m.require_valid()
    if m.fast:
        return KEModule(m.ctx, m.r, [x.T.copy() for x in m.mats])
    mats = []
    for x in m.mats:
        mats.append(tuple(tuple(x[b][a] for b in range(m.dim)) for a in range(m.dim)))
    return KEModule(m.ctx, m.r, mats)


def restrict(m: KEModule, a_matrix) -> KEModule:
    """Restriction along the shifted subgroup T_j = sum_i a_ij X_i.

    a_matrix: r x s over the base field, full column rank s.
    """
    m.require_valid()
    if m.fast:
        A = np.asarray(a_matrix, dtype=np.int64) % m.ctx.p
        if A.ndim != 2 or A.shape[0] != m.r:
            raise InputError("restriction matrix must be r x s")
        s = A.shape[1]
        if linalg.rank_fp(A, m.ctx.p) != s:
            raise InputError("restriction matrix must have full column rank")
        mats = []
        for jcol in range(s):
            t = np.zeros((m.dim, m.dim), dtype=np.int64)
            for i in range(m.r):
                t = (t + A[i, jcol] * m.mats[i]) % m.ctx.p
            mats.append(t)
        return KEModule(m.ctx, s, mats, labels=m.labels)
    A = [[m.ctx.scalar(e) for e in row] for row in a_matrix]
    s = len(A[0])
    if linalg.rank_gen([list(r) for r in A], m.ctx.zero) != s:
        raise InputError("restriction matrix must have full column rank")
    zero = m.ctx.zero
    mats = []
    for jcol in range(s):
        t = [[zero for _ in range(m.dim)] for _ in range(m.dim)]
        for i in range(m.r):
            c = A[i][jcol]
            if not c:
                continue
            for x in range(m.dim):
                for y in range(m.dim):
                    if m.mats[i][x][y]:
                        t[x][y] = t[x][y] + c * m.mats[i][x][y]
        mats.append(tuple(tuple(row) for row in t))
    return KEModule(m.ctx, s, mats, labels=m.labels)


# ---------------------------------------------------------------------------
# subspaces attached to a module
# ---------------------------------------------------------------------------


def apply_generator(m: KEModule, i: int, sub: Subspace) -> Subspace:
    """Image of a subspace under X_i."""
    if m.fast:
        if sub.dim == 0:
            return Subspace.zero(m.ctx, m.dim)
        rows = linalg.matmul_fp(sub.basis, m.mats[i].T, m.ctx.p)
        return Subspace.span(m.ctx, m.dim, rows)
    rows = []
    for v in sub.rows():
        w = [m.ctx.zero] * m.dim
        for b, c in enumerate(v):
            if c:
                for a in range(m.dim):
                    if m.mats[i][a][b]:
                        w[a] = w[a] + m.mats[i][a][b] * c
        rows.append(w)
    return Subspace.span(m.ctx, m.dim, rows)


def radical(m: KEModule) -> Subspace:
    """Rad(M) = sum of the images of the X_i."""
    m.require_valid()
    full = Subspace.full(m.ctx, m.dim)
    out = Subspace.zero(m.ctx, m.dim)
    for i in range(m.r):
        out = out.sum(apply_generator(m, i, full))
    return out


def socle(m: KEModule) -> Subspace:
    """Soc(M) = intersection of the kernels of the X_i."""
    m.require_valid()
    if m.fast:
        stacked = np.vstack(m.mats)
        return Subspace.span(m.ctx, m.dim, linalg.kernel_fp(stacked, m.ctx.p))
    rows = []
    for x in m.mats:
        rows.extend([list(r) for r in x])
    return Subspace.span(
        m.ctx, m.dim, linalg.kernel_gen(rows, m.ctx.zero, m.ctx.one)
    )


def radical_series(m: KEModule) -> list[Subspace]:
    """[M, Rad M, Rad^2 M, ..., 0], strictly decreasing."""
    m.require_valid()
    out = [Subspace.full(m.ctx, m.dim)]
    while out[-1].dim > 0:
        cur = out[-1]
        nxt = Subspace.zero(m.ctx, m.dim)
        for i in range(m.r):
            nxt = nxt.sum(apply_generator(m, i, cur))
        out.append(nxt)
    return out


def socle_series(m: KEModule) -> list[Subspace]:
    """[0, Soc M, Soc^2 M, ..., M], strictly increasing."""
    m.require_valid()
    out = [Subspace.zero(m.ctx, m.dim)]
    while out[-1].dim < m.dim:
        out.append(preimage_under_all(m, out[-1]))
    return out


def preimage_under_all(m: KEModule, sub: Subspace) -> Subspace:
    """{v : X_i v in sub for all i}."""
    if m.fast:
        perp = sub.perp()
        if perp.dim == 0:
            return Subspace.full(m.ctx, m.dim)
        rows = [linalg.matmul_fp(perp.basis, x, m.ctx.p) for x in m.mats]
        stacked = np.vstack(rows)
        return Subspace.span(m.ctx, m.dim, linalg.kernel_fp(stacked, m.ctx.p))
    perp = sub.perp()
    if perp.dim == 0:
        return Subspace.full(m.ctx, m.dim)
    rows = []
    for x in m.mats:
        for u in perp.rows():
            row = [m.ctx.zero] * m.dim
            for a, c in enumerate(u):
                if c:
                    for b in range(m.dim):
                        if x[a][b]:
                            row[b] = row[b] + c * x[a][b]
            rows.append(row)
    return Subspace.span(m.ctx, m.dim, linalg.kernel_gen(rows, m.ctx.zero, m.ctx.one))


def loewy_length(m: KEModule) -> int:
    return len(radical_series(m)) - 1


def is_invariant(m: KEModule, sub: Subspace) -> bool:
    return all(sub.contains(apply_generator(m, i, sub)) for i in range(m.r))


def submodule_spin(m: KEModule, rows) -> Subspace:
    """Smallest X-invariant subspace containing the given row vectors."""
    m.require_valid()
    cur = Subspace.span(m.ctx, m.dim, rows)
    while True:
        nxt = cur
        for i in range(m.r):
            nxt = nxt.sum(apply_generator(m, i, cur))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def subquotient(m: KEModule, top: Subspace, bottom: Subspace) -> KEModule:
    """The module top/bottom with the induced action.

    Both subspaces must be X-invariant with bottom <= top; the basis is the
    deterministic echelon complement of bottom inside top.
    """
    mod, _ = subquotient_with_lift(m, top, bottom)
    return mod


def subquotient_with_lift(m: KEModule, top: Subspace, bottom: Subspace):
    """As subquotient, also returning the lift rows (complement basis in M)."""
    m.require_valid()
    if not top.contains(bottom):
        raise InputError("bottom is not contained in top")
    if not is_invariant(m, top) or not is_invariant(m, bottom):
        raise InputError("subquotient needs X-invariant subspaces")
    comp = bottom.complement_in(top)
    newdim = len(comp)
    if m.fast:
        comp_arr = (
            np.array(comp, dtype=np.int64).reshape(newdim, m.dim)
            if newdim
            else np.zeros((0, m.dim), dtype=np.int64)
        )
        if newdim == 0:
            zero = np.zeros((0, 0), dtype=np.int64)
            return KEModule(m.ctx, m.r, [zero.copy() for _ in range(m.r)]), comp_arr
        comp_sub = Subspace.span(m.ctx, m.dim, comp_arr)
        mats = []
        for i in range(m.r):
            imgs = linalg.matmul_fp(comp_arr, m.mats[i].T, m.ctx.p)
            red = np.array(
                [bottom.reduce_vec(v) for v in imgs], dtype=np.int64
            ).reshape(newdim, m.dim)
            coords = red[:, list(comp_sub.pivots)]
            mats.append(coords.T % m.ctx.p)
        return KEModule(m.ctx, m.r, mats), comp_arr
    comp_sub = Subspace.span(m.ctx, m.dim, comp)
    pivots = comp_sub.pivots
    mats = []
    for i in range(m.r):
        cols = []
        for v in comp:
            w = [m.ctx.zero] * m.dim
            for b, c in enumerate(v):
                if c:
                    for a in range(m.dim):
                        if m.mats[i][a][b]:
                            w[a] = w[a] + m.mats[i][a][b] * c
            red = bottom.reduce_vec(w)
            cols.append([red[pc] for pc in pivots])
        mats.append(tuple(tuple(cols[b][a] for b in range(newdim)) for a in range(newdim)))
    return KEModule(m.ctx, m.r, mats), comp


def sub_as_module(m: KEModule, sub: Subspace):
    return subquotient_with_lift(m, sub, Subspace.zero(m.ctx, m.dim))


def quotient_module(m: KEModule, sub: Subspace) -> KEModule:
    return subquotient(m, Subspace.full(m.ctx, m.dim), sub)


# ---------------------------------------------------------------------------
# free modules, presentations, syzygies
# ---------------------------------------------------------------------------


def free_module(ctx: FieldCtx, r: int, g: int = 1) -> KEModule:
    """kE^g with monomial basis X^e tensor generator (generator-major)."""
    p = ctx.p
    dim = g * p**r
    if dim > MAX_FREE_DIM:
        raise InputError(f"free module dimension {dim} exceeds the guard {MAX_FREE_DIM}")
    exps = list(itertools.product(range(p), repeat=r))
    eidx = {e: i for i, e in enumerate(exps)}
    n = len(exps)
    mats = []
    for i in range(r):
        x = np.zeros((dim, dim), dtype=np.int64)
        for gi in range(g):
            for e, src in eidx.items():
                if e[i] + 1 < p:
                    tgt = eidx[tuple(v + 1 if s == i else v for s, v in enumerate(e))]
                    x[gi * n + tgt, gi * n + src] = 1
        mats.append(x)
    mod = KEModule(ctx, r, mats) if ctx.k == 1 else KEModule(ctx, r, [x.tolist() for x in mats])
    mod._cache["free_exponents"] = (exps, eidx, n)
    return mod


def element_vector(free: KEModule, terms) -> list:
    """Vector of the free module from (generator index, exponent tuple, coeff) terms."""
    exps, eidx, n = free._cache["free_exponents"]
    ctx = free.ctx
    if free.fast:
        v = np.zeros(free.dim, dtype=np.int64)
        for gi, e, c in terms:
            v[gi * n + eidx[tuple(e)]] = (v[gi * n + eidx[tuple(e)]] + int(c)) % ctx.p
        return v
    v = [ctx.zero] * free.dim
    for gi, e, c in terms:
        v[gi * n + eidx[tuple(e)]] = v[gi * n + eidx[tuple(e)]] + ctx.scalar(c)
    return v


def from_presentation(ctx: FieldCtx, r: int, generators: int, relations) -> KEModule:
    """Quotient of kE^generators by the submodule spun from relation elements.

    Relations are lists of (generator index, exponent tuple, coefficient).
    """
    free = free_module(ctx, r, generators)
    rel_rows = [element_vector(free, rel) for rel in relations]
    relsub = submodule_spin(free, rel_rows) if rel_rows else Subspace.zero(ctx, free.dim)
    return quotient_module(free, relsub)


def syzygy(ctx_or_p, r: int, n: int) -> KEModule:
    """n-th syzygy of the trivial module: iterated kernels of minimal free covers."""
    ctx = ctx_or_p if isinstance(ctx_or_p, FieldCtx) else FieldCtx(ctx_or_p)
    if n < 0:
        raise InputError("syzygy index must be >= 0")
    mod = trivial_module(ctx, r, 1)
    for _ in range(n):
        mod = _syzygy_step(ctx, r, mod)
    return mod


def _syzygy_step(ctx: FieldCtx, r: int, m: KEModule) -> KEModule:
    rad = radical(m)
    lifts = rad.complement_in(Subspace.full(ctx, m.dim))
    h = len(lifts)
    free = free_module(ctx, r, h)
    exps, eidx, nmono = free._cache["free_exponents"]
    if not m.fast:
        raise InputError("syzygy construction is implemented for prime fields")
    # cover map: X^e (x) gen_b -> X^e * lift_b, as a dim(M) x dim(free) matrix
    cover = np.zeros((m.dim, free.dim), dtype=np.int64)
    for b in range(h):
        vec = np.asarray(lifts[b], dtype=np.int64)
        for e, src in eidx.items():
            w = vec
            for i in range(r):
                for _ in range(e[i]):
                    w = (m.mats[i] @ w) % ctx.p
            cover[:, b * nmono + src] = w
    ker_rows = linalg.kernel_fp(cover, ctx.p)
    ksub = Subspace.span(ctx, free.dim, ker_rows)
    return sub_as_module(free, ksub)[0]


def random_invertible(ctx: FieldCtx, n: int, rng: random.Random):
    """Random invertible n x n matrix over the base field (prime fields)."""
    while True:
        a = np.array([[rng.randrange(ctx.p) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        if linalg.rank_fp(a, ctx.p) == n:
            return a
