"""Small prime-power fields GF(p^m) with dense exp/log tables.

Field elements are indices 0..q-1 encoding coefficient vectors in base p,
constant term in the lowest digit, so 0 and 1 are the additive and
multiplicative identities. Multiplication goes through discrete-log tables
built once per field; the modulus is the monic irreducible of degree m
whose index value is smallest, and the generator is the smallest primitive
element by index, so a field is reproducible from (p, m) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegreeTooSmall, FieldTooLarge, NotPrime, ZeroElement

MAX_FIELD_ORDER = 2**24

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- polynomial arithmetic over F_p, little-endian coefficient lists ---------

def _trim(a: list[int]) -> list[int]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)

def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = list(a)
    df = len(f) - 1
    lead_inv = pow(f[-1], -1, p)
    while len(a) > df:
        c = a[-1] * lead_inv % p
        if c:
            off = len(a) - 1 - df
            for j, fc in enumerate(f):
                a[off + j] = (a[off + j] - c * fc) % p
        a.pop()
        a = _trim(a)
        if not a:
            break
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod_x(e: int, f: list[int], p: int) -> list[int]:
    """x**e reduced mod f."""
    result = [1]
    base = _poly_mod([0, 1], f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test: x^(p^m) == x mod f, and x^(p^(m/r)) - x coprime to f
    for each prime r | m."""
    m = len(f) - 1
    if m == 1:
        return True
    if f[0] == 0:
        return False
    if _poly_powmod_x(p**m, f, p) != [0, 1]:
        return False
    for r in _prime_factors(m):
        g = list(_poly_powmod_x(p ** (m // r), f, p))
        while len(g) < 2:
            g.append(0)
        g[1] = (g[1] - 1) % p
        if len(_poly_gcd(_trim(g), f, p)) - 1 != 0:
            return False
    return True


def _digits(v: int, p: int, m: int) -> list[int]:
    out = [0] * m
    for i in range(m):
        v, out[i] = divmod(v, p)
    return out


def _undigits(d: list[int], p: int) -> int:
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Immutable field context; all arithmetic is table lookups."""

    p: int
    m: int
    q: int
    modulus: tuple[int, ...]  # c_0..c_m, monic
    gen: int                  # smallest primitive element index
    exp: np.ndarray           # exp[t] = gen**t, length q-1
    log: np.ndarray           # log[exp[t]] = t; log[0] = -1

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        out, shift = 0, 1
        for _ in range(self.m):
            da, a = a % self.p, a // self.p
            db, b = b % self.p, b // self.p
            out += (da + db) % self.p * shift
            shift *= self.p
        return out

    def neg(self, a: int) -> int:
        out, shift = 0, 1
        for _ in range(self.m):
            da, a = a % self.p, a // self.p
            out += -da % self.p * shift
            shift *= self.p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.log[a]) + int(self.log[b])) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 has no multiplicative inverse")
        return int(self.exp[-int(self.log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.exp[int(self.log[a]) * e % (self.q - 1)])

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.m}))"


def build_field(p: int, m: int, *, max_q: int = MAX_FIELD_ORDER) -> FieldCtx:
    """Construct GF(p^m). Table build is O(q * m^2), so the order cap also
    bounds construction time."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeTooSmall(f"extension degree must be >= 1, got {m}")
    q = p**m
    if q > max_q:
        raise FieldTooLarge(f"field order {q} exceeds cap {max_q}")

    modulus = None
    for v in range(q):
        f = _digits(v, p, m) + [1]
        if _is_irreducible(f, p):
            modulus = f
            break
    assert modulus is not None  # degree-m irreducibles always exist

    def mul_idx(a: int, b: int) -> int:
        prod = _poly_mod(
            _poly_mul(_digits(a, p, m), _digits(b, p, m), p), modulus, p
        )
        return _undigits(prod + [0] * (m - len(prod)), p)

    def pow_idx(a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = mul_idx(r, a)
            a = mul_idx(a, a)
            e >>= 1
        return r

    factors = _prime_factors(q - 1)
    gen = None
    for g in range(1, q):
        if all(pow_idx(g, (q - 1) // r) != 1 for r in factors):
            gen = g
            break
    assert gen is not None  # the multiplicative group is cyclic

    exp = np.asarray(_kernels.exp_table(p, m, modulus, gen), dtype=np.uint32)
    log = np.full(q, -1, dtype=np.int32)
    log[exp] = np.arange(q - 1, dtype=np.int32)
    # a primitive generator hits every nonzero element exactly once
    assert log[0] == -1 and not np.any(log[1:] == -1)
    return FieldCtx(p=p, m=m, q=q, modulus=tuple(modulus), gen=gen, exp=exp, log=log)


def dlog(ctx: FieldCtx, e: int) -> int:
    """Discrete log base ctx.gen."""
    if e == 0:
        raise ZeroElement("discrete log of 0 is undefined")
    return int(ctx.log[e])


def subspace_lines(ctx: FieldCtx) -> list[int]:
    """Canonical representatives (leading coefficient 1) of the 1-dim
    F_p-subspaces spanned by elements with top coordinate zero.

    The reps of degree d are exactly the indices [p^d, 2*p^d), giving
    (p^(m-1) - 1)/(p - 1) lines in total.
    """
    if ctx.m < 2:
        raise DegreeTooSmall("need extension degree >= 2 for a proper subspace")
    out: list[int] = []
    for d in range(ctx.m - 1):
        out.extend(range(ctx.p**d, 2 * ctx.p**d))
    return out


def line_residue(ctx: FieldCtx, e: int) -> int:
    """dlog(e) mod (q-1)/(p-1); constant on each punctured line since
    scalars form the index-r subgroup of the multiplicative group."""
    r = (ctx.q - 1) // (ctx.p - 1)
    return dlog(ctx, e) % r
