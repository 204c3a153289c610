"""Prime-power finite fields F_q, q = p^k, in exact coefficient form.

A ``FieldCtx`` fixes p, the extension degree k and a monic irreducible
modulus over F_p; ``FieldScalar`` values are coefficient vectors in the
power basis of the modulus.  The module also provides the univariate
factor-extraction routines (square-free part, one irreducible factor)
needed to name jump points of polynomial matrices by their minimal
polynomials, and quotient-ring scalars for splitting-field checks over
non-prime base fields.
"""

from __future__ import annotations

import random

from . import dpoly
from .dpoly import IntModOps, ScalarOps
from .errors import InputError, MathRefusal

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    # Deterministic Miller-Rabin for word-sized n.
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(p: int, f: list[int]) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    ops = IntModOps(p)
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    t = [0, 1]
    # x^(p^k) == x mod f
    r = t
    for _ in range(k):
        r = dpoly.powmod(ops, r, p, f)
    if dpoly.trim(ops, dpoly.sub(ops, r, t)) != []:
        return False
    for q in _prime_divisors(k):
        r = t
        for _ in range(k // q):
            r = dpoly.powmod(ops, r, p, f)
        g = dpoly.gcd(ops, dpoly.sub(ops, r, t), f)
        if len(g) - 1 != 0:
            return False
    return True


def find_irreducible_fp(p: int, k: int, seed: int = 0) -> list[int]:
    """Deterministically search for a monic irreducible of degree k over F_p."""
    if k == 1:
        return [0, 1]
    rng = random.Random(f"irr:{p}:{k}:{seed}")
    while True:
        f = [rng.randrange(p) for _ in range(k)] + [1]
        if is_irreducible_fp(p, f):
            return f


class FieldCtx:
    """The field F_{p^k} = F_p[x]/(modulus)."""

    __slots__ = ("p", "k", "modulus", "_ops", "_zero", "_one")

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise InputError(f"p = {p} is not prime")
        if k < 1:
            raise InputError(f"extension degree must be >= 1, got {k}")
        if modulus is None:
            modulus = tuple(find_irreducible_fp(p, k))
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise InputError("modulus must be monic of degree k")
        if k > 1 and not is_irreducible_fp(p, list(modulus)):
            raise InputError("modulus is not irreducible over F_p")
        self.p = p
        self.k = k
        self.modulus = modulus
        self._ops = IntModOps(p)
        self._zero = FieldScalar(self, (0,) * k)
        self._one = FieldScalar(self, (1,) + (0,) * (k - 1))

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def zero(self) -> "FieldScalar":
        return self._zero

    @property
    def one(self) -> "FieldScalar":
        return self._one

    def scalar(self, value) -> "FieldScalar":
        """Coerce an int, coefficient list, or FieldScalar into this field."""
        if isinstance(value, FieldScalar):
            if value.ctx is not self and (value.ctx.p, value.ctx.k, value.ctx.modulus) != (
                self.p,
                self.k,
                self.modulus,
            ):
                raise InputError("scalar from a different field")
            return FieldScalar(self, value.coeffs)
        if isinstance(value, int) or hasattr(value, "__index__"):
            return FieldScalar(self, (int(value) % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise InputError("coefficient vector longer than the extension degree")
        coeffs = coeffs + (0,) * (self.k - len(coeffs))
        return FieldScalar(self, coeffs)

    def gen(self) -> "FieldScalar":
        """The residue of x, a generator of the field over F_p (k > 1)."""
        if self.k == 1:
            return self._one
        return FieldScalar(self, (0, 1) + (0,) * (self.k - 2))

    def random_scalar(self, rng: random.Random) -> "FieldScalar":
        return FieldScalar(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def random_nonzero(self, rng: random.Random) -> "FieldScalar":
        while True:
            s = self.random_scalar(rng)
            if s:
                return s

    def elements(self):
        """Iterate all q elements (small fields only)."""
        def rec(prefix):
            if len(prefix) == self.k:
                yield FieldScalar(self, tuple(prefix))
                return
            for c in range(self.p):
                yield from rec(prefix + [c])

        yield from rec([])

    def same_field(self, other: "FieldCtx") -> bool:
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.same_field(other)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


class FieldScalar:
    """An element of F_{p^k}, stored as k coefficients in the power basis."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _binop_ctx(self, other) -> "FieldScalar":
        if isinstance(other, int):
            return self.ctx.scalar(other)
        if not isinstance(other, FieldScalar):
            return NotImplemented
        if other.ctx is not self.ctx and not self.ctx.same_field(other.ctx):
            raise InputError("mixed-field arithmetic")
        return other

    def __add__(self, other):
        o = self._binop_ctx(other)
        if o is NotImplemented:
            return o
        p = self.ctx.p
        return FieldScalar(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._binop_ctx(other)
        if o is NotImplemented:
            return o
        p = self.ctx.p
        return FieldScalar(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return self.ctx.scalar(other) - self

    def __neg__(self):
        p = self.ctx.p
        return FieldScalar(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._binop_ctx(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        if ctx.k == 1:
            return FieldScalar(ctx, ((self.coeffs[0] * o.coeffs[0]) % ctx.p,))
        ops = ctx._ops
        prod = dpoly.mul(ops, list(self.coeffs), list(o.coeffs))
        prod = dpoly.rem(ops, prod, list(ctx.modulus))
        prod = prod + [0] * (ctx.k - len(prod))
        return FieldScalar(ctx, tuple(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        ctx = self.ctx
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        if ctx.k == 1:
            return FieldScalar(ctx, (pow(self.coeffs[0], -1, ctx.p),))
        # Extended Euclid in F_p[x] against the modulus.
        ops = ctx._ops
        a, b = list(ctx.modulus), dpoly.trim(ops, list(self.coeffs))
        s0, s1 = [], [1]
        while b:
            q, r = dpoly.divmod_(ops, a, b)
            a, b = b, r
            s0, s1 = s1, dpoly.sub(ops, s0, dpoly.mul(ops, q, s1))
        s0 = dpoly.scale(ops, s0, ops.inv(a[-1]))
        s0 = s0 + [0] * (ctx.k - len(s0))
        return FieldScalar(ctx, tuple(s0))

    def __truediv__(self, other):
        o = self._binop_ctx(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.ctx.scalar(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pth_root(self) -> "FieldScalar":
        """Inverse Frobenius: the unique y with y^p = self."""
        return self ** (self.ctx.p ** (self.ctx.k - 1))

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ctx.scalar(other)
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self.ctx.same_field(other.ctx) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.coeffs))

    def serialize(self):
        """File form: a bare int for prime fields, a coefficient list otherwise."""
        if self.ctx.k == 1:
            return self.coeffs[0]
        return list(self.coeffs)

    def __repr__(self):
        if self.ctx.k == 1:
            return str(self.coeffs[0])
        return "+".join(
            f"{c}x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c
        ) or "0"


def scalar_ops(ctx: FieldCtx) -> ScalarOps:
    """dpoly adapter with FieldScalar values."""
    return ScalarOps(ctx.zero, ctx.one)


# ---------------------------------------------------------------------------
# Factor extraction over F_q: enough factorization to name one root of a
# univariate polynomial by its minimal polynomial.  Square-free and
# distinct-degree splits are deterministic; the equal-degree split is the
# usual randomized one with a seeded generator.
# ---------------------------------------------------------------------------


def squarefree_part(ctx: FieldCtx, f: list) -> list:
    """Monic square-free part of f over F_q (coefficients FieldScalar)."""
    ops = scalar_ops(ctx)
    f = dpoly.monic(ops, list(f))
    if len(f) <= 1:
        return f
    d = dpoly.deriv(ops, f)
    if not d:
        # f = g(t^p); take p-th roots of the surviving coefficients.
        g = [f[i].pth_root() for i in range(0, len(f), ctx.p)]
        return squarefree_part(ctx, g)
    g = dpoly.gcd(ops, f, d)
    sf = dpoly.divmod_(ops, f, g)[0]
    # Roots hidden in the gcd (repeated across p-th powers) still matter.
    if len(g) - 1 > 0:
        rest = squarefree_part(ctx, g)
        prod = dpoly.mul(ops, sf, rest)
        return dpoly.divmod_(ops, prod, dpoly.gcd(ops, sf, rest))[0]
    return sf


def _frobenius_power(ctx: FieldCtx, f: list, e: int) -> list:
    """t^(q^e) mod f."""
    ops = scalar_ops(ctx)
    r = [ctx.zero, ctx.one]
    for _ in range(e):
        r = dpoly.powmod(ops, r, ctx.q, f)
    return r


def _equal_degree_split(ctx: FieldCtx, f: list, e: int, rng: random.Random) -> list:
    """One irreducible factor of f, given f is a product of degree-e irreducibles."""
    ops = scalar_ops(ctx)
    while len(f) - 1 > e:
        a = [ctx.random_scalar(rng) for _ in range(len(f) - 1)]
        a = dpoly.trim(ops, a)
        if len(a) < 1:
            continue
        if ctx.p == 2:
            # Trace map over F_{2^(k*e)}.
            tr = list(a)
            b = list(a)
            for _ in range(ctx.k * e - 1):
                b = dpoly.rem(ops, dpoly.mul(ops, b, b), f)
                tr = dpoly.add(ops, tr, b)
            g = dpoly.gcd(ops, tr, f)
        else:
            b = dpoly.powmod(ops, a, (ctx.q**e - 1) // 2, f)
            g = dpoly.gcd(ops, dpoly.sub(ops, b, [ctx.one]), f)
        dg = len(g) - 1
        if 0 < dg < len(f) - 1:
            f = g if dg <= (len(f) - 1) // 2 else dpoly.divmod_(ops, f, g)[0]
    return f


def some_irreducible_factor(ctx: FieldCtx, f: list, seed: int = 0) -> list:
    """A monic irreducible factor of f over F_q, preferring small degree.

    Args:
        ctx: base field.
        f: coefficients (FieldScalar), ascending; nonconstant.
        seed: seed for the equal-degree split.

    Returns:
        Coefficient list of a monic irreducible factor.
    """
    ops = scalar_ops(ctx)
    f = squarefree_part(ctx, f)
    if len(f) - 1 < 1:
        raise MathRefusal("no irreducible factor of a constant polynomial")
    rng = random.Random(seed)
    for e in range(1, len(f)):
        if len(f) - 1 < e:
            break
        r = _frobenius_power(ctx, f, e)
        g = dpoly.gcd(ops, dpoly.sub(ops, r, [ctx.zero, ctx.one]), f)
        if len(g) - 1 > 0:
            if len(g) - 1 == e:
                return g
            return _equal_degree_split(ctx, g, e, rng)
        if len(f) - 1 == e:
            return f
    return f


def splitting_extension(ctx: FieldCtx, g: list, seed: int = 0):
    """A field containing a root of the irreducible g, plus the root.

    Over a prime base this is an ordinary FieldCtx with modulus g; over an
    extension base it is a quotient-ring context whose elements behave like
    field scalars in the generic linear algebra.
    """
    deg = len(g) - 1
    if deg == 1:
        root = -(g[0] / g[1])
        return ctx, root
    if ctx.k == 1:
        ext = FieldCtx(ctx.p, deg, tuple(c.coeffs[0] for c in g))
        return ext, ext.gen()
    ext = QuotExtCtx(ctx, tuple(g))
    return ext, ext.gen()


class QuotExtCtx:
    """F_q[t]/(g) for irreducible g over a non-prime F_q."""

    __slots__ = ("base", "modulus", "deg")

    def __init__(self, base: FieldCtx, modulus: tuple):
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1

    @property
    def p(self):
        return self.base.p

    @property
    def q(self):
        return self.base.q**self.deg

    @property
    def zero(self):
        return QuotExtScalar(self, (self.base.zero,) * self.deg)

    @property
    def one(self):
        return QuotExtScalar(self, (self.base.one,) + (self.base.zero,) * (self.deg - 1))

    def gen(self):
        c = [self.base.zero] * self.deg
        c[1 % self.deg] = self.base.one
        return QuotExtScalar(self, tuple(c))

    def embed(self, s: FieldScalar):
        return QuotExtScalar(self, (s,) + (self.base.zero,) * (self.deg - 1))


class QuotExtScalar:
    """Element of a quotient extension; supports field operator protocol."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: QuotExtCtx, coeffs: tuple):
        self.ctx = ctx
        self.coeffs = coeffs

    def _ops(self):
        return scalar_ops(self.ctx.base)

    def _wrap(self, lst):
        lst = list(lst) + [self.ctx.base.zero] * (self.ctx.deg - len(lst))
        return QuotExtScalar(self.ctx, tuple(lst[: self.ctx.deg]))

    def __add__(self, other):
        return self._wrap(dpoly.add(self._ops(), list(self.coeffs), list(other.coeffs)))

    def __sub__(self, other):
        return self._wrap(dpoly.sub(self._ops(), list(self.coeffs), list(other.coeffs)))

    def __neg__(self):
        return self._wrap(dpoly.neg(self._ops(), list(self.coeffs)))

    def __mul__(self, other):
        ops = self._ops()
        prod = dpoly.mul(ops, list(self.coeffs), list(other.coeffs))
        return self._wrap(dpoly.rem(ops, prod, list(self.ctx.modulus)))

    def inverse(self):
        ops = self._ops()
        a, b = list(self.ctx.modulus), dpoly.trim(ops, list(self.coeffs))
        if not b:
            raise ZeroDivisionError("inverse of zero")
        s0, s1 = [], [self.ctx.base.one]
        while b:
            q, r = dpoly.divmod_(ops, a, b)
            a, b = b, r
            s0, s1 = s1, dpoly.sub(ops, s0, dpoly.mul(ops, q, s1))
        s0 = dpoly.scale(ops, s0, a[-1].inverse())
        return self._wrap(s0)

    def __truediv__(self, other):
        return self * other.inverse()

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QuotExtScalar) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ext({self.coeffs})"
