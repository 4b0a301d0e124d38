"""Reference kernels on Python-int bitsets.

`_fast.pyx` mirrors these semantics on packed uint64 words; the dispatcher
in `__init__.py` picks whichever is available. Masks are arbitrary-size
Python ints with bit i = membership of element index i.
"""

from __future__ import annotations

import numpy as np


def sweep_combos(base, masks, nbits, k):
    """First k-combination of mask rows whose AND with ``base`` is empty.

    Rows are combined in lexicographic order of their index tuples; the
    return value is the first failing tuple (which is therefore the
    lexicographically smallest) or None when every combination intersects.
    An empty prefix intersection short-circuits: any completion fails, and
    the consecutive fill is the lexicographically first of them.
    """
    m = len(masks)
    if k > m:
        return None
    if k == 0:
        return None if base else ()

    def rec(start, depth, acc):
        last = m - (k - depth)
        for i in range(start, last + 1):
            nxt = acc & masks[i]
            if not nxt:
                return (i,) + tuple(range(i + 1, i + k - depth))
            if depth + 1 < k:
                r = rec(i + 1, depth + 1, nxt)
                if r is not None:
                    return (i,) + r
        return None

    return rec(0, 0, base)


def sweep_tuples(base, tables, nbits):
    """First coordinate tuple (w_2..w_k) with empty intersection.

    ``tables[s][w]`` is the candidate mask contributed by putting carrier
    position w in slot s+1; ``base`` is the slot-0 contribution. Returns the
    lexicographically first failing tuple of positions, or None.
    """
    k1 = len(tables)
    if k1 == 0:
        return None if base else ()
    n = len(tables[0])

    def rec(slot, acc):
        table = tables[slot]
        for w in range(n):
            nxt = acc & table[w]
            if not nxt:
                return (w,) + (0,) * (k1 - slot - 1)
            if slot + 1 < k1:
                r = rec(slot + 1, nxt)
                if r is not None:
                    return (w,) + r
        return None

    return rec(0, base)


def exp_table(p, m, modulus, gen):
    """Powers of ``gen`` in GF(p**m): out[t] = index of gen**t, t < q-1.

    ``modulus`` is the monic modulus as coefficients c_0..c_m (c_m == 1);
    element indices encode coefficient vectors in base p, constant term in
    the lowest digit.
    """
    q = p**m
    red = list(modulus[:m])

    def digits(v):
        out = [0] * m
        for i in range(m):
            v, out[i] = divmod(v, p)
        return out

    def mul(da, db):
        prod = [0] * (2 * m - 1)
        for i, a in enumerate(da):
            if a:
                for j, b in enumerate(db):
                    prod[i + j] = (prod[i + j] + a * b) % p
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, rc in enumerate(red):
                    prod[i - m + j] = (prod[i - m + j] - c * rc) % p
        return prod[:m]

    out = np.empty(q - 1, dtype=np.uint32)
    dgen = digits(gen)
    cur = digits(1)
    for t in range(q - 1):
        v = 0
        for i in range(m - 1, -1, -1):
            v = v * p + cur[i]
        out[t] = v
        cur = mul(cur, dgen)
    return out
