"""Finite groups on dense element indices, plus subset algebra.

Every group exposes its elements as indices 0..order-1 with a documented
bijection to structured elements:

* cyclic(n): index == residue;
* product(...): mixed-radix tuples, last factor varying fastest;
* symmetric(n): Lehmer rank of the one-line permutation (identity == 0),
  with mul(a, b) the composition "a after b", (a*b)(i) = a(b(i));
* table(t): row/column indices of the supplied composition table.

Subsets are immutable bit-vectors over the index space. All operations are
pure functions of their inputs, so results are order- and schedule-independent.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptySet,
    GroupMismatch,
    InvalidSeries,
    NotAGroup,
    OverflowingOrder,
)

MAX_ORDER_DEFAULT = 10**7
MAX_SYMMETRIC_DEGREE = 12

# Above this order, symmetric groups skip the cached permutation matrix and
# fall back to per-element encode/decode (slower but bounded memory).
_PERM_CACHE_LIMIT = 400_000

# Composition tables up to this order get an exhaustive associativity check;
# larger tables are spot-checked on seeded random triples.
_TABLE_EXHAUSTIVE_LIMIT = 256
_TABLE_SAMPLED_TRIPLES = 100_000


def _mask_from_indices(order: int, idxs) -> int:
    idxs = np.asarray(idxs, dtype=np.int64)
    if idxs.size == 0:
        return 0
    if idxs.size < 64:
        m = 0
        for i in idxs:
            m |= 1 << int(i)
        return m
    bits = np.zeros(order, dtype=bool)
    bits[idxs] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _indices_from_mask(order: int, mask: int) -> np.ndarray:
    if mask == 0:
        return np.empty(0, dtype=np.int64)
    nbytes = (order + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[:order]
    return np.nonzero(bits)[0].astype(np.int64)


class Group:
    """Abstract finite group over element indices 0..order-1."""

    kind: str = "abstract"
    order: int
    identity: int = 0

    # -- scalar operations -------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    # -- vectorized translations -------------------------------------------
    def left_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        """Indices of g*x for each x in idxs."""
        return np.array([self.mul(g, int(x)) for x in idxs], dtype=np.int64)

    def right_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        """Indices of x*g for each x in idxs."""
        return np.array([self.mul(int(x), g) for x in idxs], dtype=np.int64)

    # -- structure ----------------------------------------------------------
    def decode(self, i: int):
        raise NotImplementedError

    def encode(self, elem) -> int:
        raise NotImplementedError

    def spec(self) -> dict:
        raise NotImplementedError

    def _spec_key(self):
        raise NotImplementedError

    def elements(self) -> range:
        return range(self.order)

    def check_element(self, g: int) -> int:
        g = int(g)
        if not 0 <= g < self.order:
            raise GroupMismatch(f"element index {g} outside 0..{self.order - 1}")
        return g

    # -- subset constructors -------------------------------------------------
    def subset(self, idxs: Iterable[int]) -> "Subset":
        return Subset.from_indices(self, idxs)

    def singleton(self, i: int) -> "Subset":
        return Subset(self, 1 << self.check_element(i))

    def empty_subset(self) -> "Subset":
        return Subset(self, 0)

    def full_subset(self) -> "Subset":
        return Subset(self, (1 << self.order) - 1)

    def __eq__(self, other):
        return isinstance(other, Group) and self._spec_key() == other._spec_key()

    def __hash__(self):
        return hash(self._spec_key())

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order})"


class CyclicGroup(Group):
    """Z/nZ under addition; index == residue."""

    kind = "cyclic"

    def __init__(self, n: int, *, max_order: int = MAX_ORDER_DEFAULT):
        n = int(n)
        if n < 1:
            raise NotAGroup(f"cyclic order must be >= 1, got {n}")
        if n > max_order:
            raise OverflowingOrder(f"cyclic order {n} exceeds cap {max_order}")
        self.n = n
        self.order = n

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def inv(self, a: int) -> int:
        return (-a) % self.n

    def left_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        return (np.asarray(idxs, dtype=np.int64) + g) % self.n

    right_apply = left_apply

    def decode(self, i: int) -> int:
        return int(i)

    def encode(self, elem) -> int:
        return int(elem) % self.n

    def spec(self) -> dict:
        return {"kind": "cyclic", "n": self.n}

    def _spec_key(self):
        return ("cyclic", self.n)


class ProductGroup(Group):
    """Direct product; index is the mixed-radix word of factor indices."""

    kind = "product"

    def __init__(self, factors: Sequence[Group], *, max_order: int = MAX_ORDER_DEFAULT):
        if not factors:
            raise NotAGroup("product needs at least one factor")
        self.factors = tuple(factors)
        order = 1
        for f in self.factors:
            order *= f.order
            if order > max_order:
                raise OverflowingOrder(f"product order exceeds cap {max_order}")
        self.order = order
        strides = []
        acc = 1
        for f in reversed(self.factors):
            strides.append(acc)
            acc *= f.order
        self.strides = tuple(reversed(strides))

    def decode(self, i: int) -> tuple:
        self.check_element(i)
        out = []
        for f, s in zip(self.factors, self.strides):
            out.append((i // s) % f.order)
        return tuple(out)

    def encode(self, elem) -> int:
        if len(elem) != len(self.factors):
            raise GroupMismatch("wrong tuple length for product element")
        total = 0
        for f, s, e in zip(self.factors, self.strides, elem):
            total += f.check_element(int(e)) * s
        return total

    def mul(self, a: int, b: int) -> int:
        da, db = self.decode(a), self.decode(b)
        return self.encode(tuple(f.mul(x, y) for f, x, y in zip(self.factors, da, db)))

    def inv(self, a: int) -> int:
        return self.encode(tuple(f.inv(x) for f, x in zip(self.factors, self.decode(a))))

    def _apply(self, g: int, idxs: np.ndarray, left: bool) -> np.ndarray:
        idxs = np.asarray(idxs, dtype=np.int64)
        gd = self.decode(g)
        out = np.zeros_like(idxs)
        for f, s, gpart in zip(self.factors, self.strides, gd):
            sub = (idxs // s) % f.order
            moved = f.left_apply(gpart, sub) if left else f.right_apply(gpart, sub)
            out += moved.astype(np.int64) * s
        return out

    def left_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        return self._apply(g, idxs, True)

    def right_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        return self._apply(g, idxs, False)

    def spec(self) -> dict:
        return {"kind": "product", "factors": [f.spec() for f in self.factors]}

    def _spec_key(self):
        return ("product", tuple(f._spec_key() for f in self.factors))


class SymmetricGroup(Group):
    """S_n acting on {0..n-1}; index is the Lehmer rank of the one-line word."""

    kind = "symmetric"

    def __init__(self, n: int, *, max_degree: int = MAX_SYMMETRIC_DEGREE):
        n = int(n)
        if n < 1:
            raise NotAGroup(f"symmetric degree must be >= 1, got {n}")
        if n > max_degree:
            raise OverflowingOrder(f"symmetric degree {n} exceeds cap {max_degree}")
        self.n = n
        self.fact = [1] * (n + 1)
        for i in range(1, n + 1):
            self.fact[i] = self.fact[i - 1] * i
        self.order = self.fact[n]
        self._perm_cache: np.ndarray | None = None

    def _perms(self) -> np.ndarray | None:
        """Matrix of all one-line words in rank order, or None above the cap."""
        if self.order > _PERM_CACHE_LIMIT:
            return None
        if self._perm_cache is None:
            # itertools yields one-line words in lexicographic order, which
            # coincides with Lehmer-rank order.
            self._perm_cache = np.array(
                list(itertools.permutations(range(self.n))), dtype=np.int8
            )
        return self._perm_cache

    def decode(self, i: int) -> tuple:
        self.check_element(i)
        code = []
        for j in range(self.n - 1, 0, -1):
            f = self.fact[j]
            code.append(i // f)
            i %= f
        code.append(0)
        avail = list(range(self.n))
        return tuple(avail.pop(c) for c in code)

    def encode(self, elem) -> int:
        perm = list(elem)
        if sorted(perm) != list(range(self.n)):
            raise GroupMismatch(f"not a permutation of 0..{self.n - 1}: {elem}")
        rank = 0
        for idx, v in enumerate(perm):
            smaller = sum(1 for u in perm[idx + 1 :] if u < v)
            rank += smaller * self.fact[self.n - 1 - idx]
        return rank

    def _encode_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows)
        rank = np.zeros(rows.shape[0], dtype=np.int64)
        for i in range(self.n - 1):
            less = np.zeros(rows.shape[0], dtype=np.int64)
            col = rows[:, i]
            for j in range(i + 1, self.n):
                less += rows[:, j] < col
            rank += less * self.fact[self.n - 1 - i]
        return rank

    def mul(self, a: int, b: int) -> int:
        pa, pb = self.decode(a), self.decode(b)
        return self.encode(tuple(pa[pb[i]] for i in range(self.n)))

    def inv(self, a: int) -> int:
        pa = self.decode(a)
        out = [0] * self.n
        for i, v in enumerate(pa):
            out[v] = i
        return self.encode(out)

    def left_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        idxs = np.asarray(idxs, dtype=np.int64)
        P = self._perms()
        if P is None:
            return super().left_apply(g, idxs)
        comp = P[g][P[idxs]]
        return self._encode_rows(comp)

    def right_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        idxs = np.asarray(idxs, dtype=np.int64)
        P = self._perms()
        if P is None:
            return super().right_apply(g, idxs)
        comp = P[idxs][:, P[g]]
        return self._encode_rows(comp)

    def spec(self) -> dict:
        return {"kind": "symmetric", "n": self.n}

    def _spec_key(self):
        return ("symmetric", self.n)


class TableGroup(Group):
    """Group given by an explicit composition table, validated up front."""

    kind = "table"

    def __init__(self, table, *, seed: int = 0):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise NotAGroup("composition table must be square and nonempty")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise NotAGroup("table entries must be element indices")
        ar = np.arange(n)
        for i in range(n):
            if len(np.unique(t[i])) != n or len(np.unique(t[:, i])) != n:
                raise NotAGroup(f"row/column {i} is not a permutation")
        ident = None
        for e in range(n):
            if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
                ident = e
                break
        if ident is None:
            raise NotAGroup("no two-sided identity element")
        invs = np.empty(n, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(t[a] == ident)[0]
            if hits.size == 0 or t[hits[0], a] != ident:
                raise NotAGroup(f"element {a} has no two-sided inverse")
            invs[a] = hits[0]
        if n <= _TABLE_EXHAUSTIVE_LIMIT:
            # lhs[a,b,c] = t[t[a,b],c]; rhs[a,b,c] = t[a,t[b,c]]
            lhs = t[t, :]
            rhs = t[:, t.reshape(-1)].reshape(n, n, n)
            if not np.array_equal(lhs, rhs):
                raise NotAGroup("composition is not associative")
        else:
            rng = random.Random(seed)
            for _ in range(_TABLE_SAMPLED_TRIPLES):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if t[t[a, b], c] != t[a, t[b, c]]:
                    raise NotAGroup("composition is not associative")
        self.table = t
        self.order = n
        self.identity = ident
        self._inv = invs

    def mul(self, a: int, b: int) -> int:
        return int(self.table[self.check_element(a), self.check_element(b)])

    def inv(self, a: int) -> int:
        return int(self._inv[self.check_element(a)])

    def left_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        return self.table[g, np.asarray(idxs, dtype=np.int64)]

    def right_apply(self, g: int, idxs: np.ndarray) -> np.ndarray:
        return self.table[np.asarray(idxs, dtype=np.int64), g]

    def decode(self, i: int) -> int:
        return self.check_element(i)

    def encode(self, elem) -> int:
        return self.check_element(int(elem))

    def spec(self) -> dict:
        return {"kind": "table", "table": self.table.tolist()}

    def _spec_key(self):
        return ("table", tuple(map(tuple, self.table.tolist())))


def cyclic(n: int, **kw) -> CyclicGroup:
    return CyclicGroup(n, **kw)


def symmetric(n: int, **kw) -> SymmetricGroup:
    return SymmetricGroup(n, **kw)


def product(*factors, **kw) -> ProductGroup:
    return ProductGroup([make_group(f) for f in factors], **kw)


def table_group(table, **kw) -> TableGroup:
    return TableGroup(table, **kw)


def make_group(spec, *, max_order: int = MAX_ORDER_DEFAULT,
               max_degree: int = MAX_SYMMETRIC_DEGREE) -> Group:
    """Build a group from a spec: Group, bare int (cyclic order), dict, or
    (kind, payload) pair."""
    if isinstance(spec, Group):
        return spec
    if isinstance(spec, (int, np.integer)):
        return CyclicGroup(int(spec), max_order=max_order)
    if isinstance(spec, dict):
        kind = spec["kind"]
        if kind == "cyclic":
            return CyclicGroup(spec["n"], max_order=max_order)
        if kind == "symmetric":
            return SymmetricGroup(spec["n"], max_degree=max_degree)
        if kind == "product":
            return ProductGroup(
                [make_group(f, max_order=max_order, max_degree=max_degree)
                 for f in spec["factors"]],
                max_order=max_order,
            )
        if kind == "table":
            return TableGroup(spec["table"])
        raise NotAGroup(f"unknown group kind {kind!r}")
    if isinstance(spec, (tuple, list)) and len(spec) == 2 and isinstance(spec[0], str):
        kind, payload = spec
        if kind == "cyclic":
            return CyclicGroup(payload, max_order=max_order)
        if kind == "symmetric":
            return SymmetricGroup(payload, max_degree=max_degree)
        if kind == "product":
            return ProductGroup(
                [make_group(f, max_order=max_order, max_degree=max_degree)
                 for f in payload],
                max_order=max_order,
            )
        if kind == "table":
            return TableGroup(payload)
        raise NotAGroup(f"unknown group kind {kind!r}")
    raise NotAGroup(f"cannot interpret group spec {spec!r}")


class Subset:
    """Immutable subset of a group's index space, stored as a bit-vector."""

    __slots__ = ("group", "mask", "_idx")

    def __init__(self, group: Group, mask: int):
        if mask < 0 or mask >> group.order:
            raise GroupMismatch("mask has bits outside the group's index range")
        self.group = group
        self.mask = mask
        self._idx: np.ndarray | None = None

    @classmethod
    def from_indices(cls, group: Group, idxs: Iterable[int]) -> "Subset":
        idx_list = [group.check_element(i) for i in idxs]
        return cls(group, _mask_from_indices(group.order, np.array(idx_list, dtype=np.int64)))

    @property
    def indices(self) -> np.ndarray:
        if self._idx is None:
            self._idx = _indices_from_mask(self.group.order, self.mask)
        return self._idx

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.group.order and bool((self.mask >> i) & 1)

    def __iter__(self):
        return iter(int(i) for i in self.indices)

    def __eq__(self, other):
        return (
            isinstance(other, Subset)
            and self.group == other.group
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.group._spec_key(), self.mask))

    def _check_same(self, other: "Subset"):
        if self.group != other.group:
            raise GroupMismatch("subsets belong to different groups")

    def union(self, other: "Subset") -> "Subset":
        self._check_same(other)
        return Subset(self.group, self.mask | other.mask)

    __or__ = union

    def intersection(self, other: "Subset") -> "Subset":
        self._check_same(other)
        return Subset(self.group, self.mask & other.mask)

    __and__ = intersection

    def issubset(self, other: "Subset") -> bool:
        self._check_same(other)
        return self.mask & ~other.mask == 0

    def is_full(self) -> bool:
        return self.mask == (1 << self.group.order) - 1

    def to_list(self) -> list[int]:
        return [int(i) for i in self.indices]

    def __repr__(self):
        n = len(self)
        if n <= 12:
            return f"Subset({self.to_list()})"
        return f"Subset(size={n} of {self.group.order})"


def translate(g: int, S: Subset) -> Subset:
    """Left translate g*S."""
    g = S.group.check_element(g)
    if g == S.group.identity or S.mask == 0:
        return Subset(S.group, S.mask)
    moved = S.group.left_apply(g, S.indices)
    return Subset(S.group, _mask_from_indices(S.group.order, moved))


def right_translate(S: Subset, g: int) -> Subset:
    """Right translate S*g."""
    g = S.group.check_element(g)
    if g == S.group.identity or S.mask == 0:
        return Subset(S.group, S.mask)
    moved = S.group.right_apply(g, S.indices)
    return Subset(S.group, _mask_from_indices(S.group.order, moved))


def product_set(S: Subset, T: Subset) -> Subset:
    """Pointwise product {s*t : s in S, t in T}."""
    S._check_same(T)
    G = S.group
    if S.mask == 0 or T.mask == 0:
        return Subset(G, 0)
    if isinstance(G, CyclicGroup):
        n = G.n
        full = (1 << n) - 1
        tm = T.mask
        acc = 0
        for s in S.indices:
            s = int(s)
            acc |= ((tm << s) | (tm >> (n - s))) & full if s else tm
            if acc == full:
                break
        return Subset(G, acc)
    bits = np.zeros(G.order, dtype=bool)
    if len(S) <= len(T):
        t_idx = T.indices
        for s in S.indices:
            bits[G.left_apply(int(s), t_idx)] = True
    else:
        s_idx = S.indices
        for t in T.indices:
            bits[G.right_apply(int(t), s_idx)] = True
    mask = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
    return Subset(G, mask)


def is_non_doubling(X: Subset) -> tuple[bool, int]:
    """Whether |XX| <= 3|X|, along with |XX|."""
    if len(X) == 0:
        raise EmptySet("non-doubling is undefined for the empty set")
    z = len(product_set(X, X))
    return z <= 3 * len(X), z


def is_subgroup(S: Subset) -> bool:
    """Nonempty, contains the identity, and closed under the product."""
    if len(S) == 0 or S.group.identity not in S:
        return False
    return product_set(S, S).mask == S.mask


@dataclass(frozen=True)
class NormalSeries:
    """Chain G = chain[0] > chain[1] > ... > chain[-1] = {e} with designated
    generators: the coset generators[i] * chain[i+1] generates the cyclic
    quotient chain[i] / chain[i+1]."""

    group: Group
    chain: tuple[Subset, ...]
    generators: tuple[int, ...]

    def __post_init__(self):
        G = self.group
        chain = self.chain
        if not chain:
            raise InvalidSeries("empty chain")
        if any(s.group != G for s in chain):
            raise InvalidSeries("chain subsets belong to a different group")
        if not chain[0].is_full():
            raise InvalidSeries("chain must start at the whole group")
        if chain[-1].mask != 1 << G.identity:
            raise InvalidSeries("chain must end at the trivial subgroup")
        if len(self.generators) != len(chain) - 1:
            raise InvalidSeries("need exactly one generator per step")
        for i, h in enumerate(self.generators):
            big, small = chain[i], chain[i + 1]
            if not small.issubset(big):
                raise InvalidSeries(f"step {i}: not a descending chain")
            if len(small) >= len(big):
                raise InvalidSeries(f"step {i}: chain must strictly decrease")
            if not is_subgroup(small):
                raise InvalidSeries(f"step {i}: not a subgroup")
            if h not in big:
                raise InvalidSeries(f"step {i}: generator outside the subgroup")
            conj = right_translate(translate(h, small), G.inv(h))
            if conj.mask != small.mask:
                raise InvalidSeries(f"step {i}: subgroup not normalized by generator")
            # The coset h*small must generate the quotient: its powers sweep big.
            acc = small.mask
            cur = small
            quot = len(big) // len(small)
            for _ in range(quot - 1):
                cur = translate(h, cur)
                acc |= cur.mask
            if acc != big.mask:
                raise InvalidSeries(f"step {i}: designated coset does not generate quotient")

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.chain)


# -- subgroup embeddings used by the tuple constructions ----------------------

def cyclic_subgroup_embedding(G: CyclicGroup, d: int):
    """(Z/dZ, its image {0, n/d, ...} in G, index map) for d dividing n."""
    if G.n % d != 0:
        raise GroupMismatch(f"{d} does not divide {G.n}")
    step = G.n // d
    H = CyclicGroup(d)
    sub = Subset.from_indices(G, range(0, G.n, step))

    def embed(idxs):
        return (np.asarray(idxs, dtype=np.int64) * step) % G.n

    return H, sub, embed


def product_complement_embedding(G: ProductGroup, drop: int):
    """(product of the other factors, its image with coordinate `drop` = 0,
    index map)."""
    rest = [f for i, f in enumerate(G.factors) if i != drop]
    H: Group = rest[0] if len(rest) == 1 else ProductGroup(rest)
    rest_strides = [s for i, s in enumerate(G.strides) if i != drop]
    rest_orders = [f.order for f in rest]

    def embed(idxs):
        idxs = np.asarray(idxs, dtype=np.int64)
        out = np.zeros_like(idxs)
        if len(rest) == 1:
            return idxs * rest_strides[0]
        for f_order, small_stride, big_stride in zip(
            rest_orders, H.strides, rest_strides  # type: ignore[union-attr]
        ):
            out += ((idxs // small_stride) % f_order) * big_stride
        return out

    order_h = 1
    for f in rest:
        order_h *= f.order
    sub = Subset(G, _mask_from_indices(G.order, embed(np.arange(order_h))))
    return H, sub, embed


def symmetric_stabilizer_embedding(G: SymmetricGroup):
    """(S_{n-1}, its image fixing point n-1 in G, index map)."""
    if G.n < 2:
        raise GroupMismatch("no proper stabilizer below degree 2")
    H = SymmetricGroup(G.n - 1)

    def embed(idxs):
        idxs = np.asarray(idxs, dtype=np.int64)
        P = H._perms()
        if P is not None:
            rows = P[idxs]
            ext = np.concatenate(
                [rows, np.full((rows.shape[0], 1), G.n - 1, dtype=rows.dtype)], axis=1
            )
            return G._encode_rows(ext)
        return np.array(
            [G.encode(H.decode(int(i)) + (G.n - 1,)) for i in idxs], dtype=np.int64
        )

    sub = Subset(G, _mask_from_indices(G.order, embed(np.arange(H.order))))
    return H, sub, embed
