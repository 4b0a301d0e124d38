"""Brute-force reference checks, written independently of the package's
verifier sweeps. Everything here is plain set arithmetic over Python ints;
slow on purpose, used only on small instances."""

import itertools


def naive_universal_for(G, U, X, k):
    """First failing k-subset of X in ascending-lex order, or (True, None)."""
    u = set(int(g) for g in U.indices)
    xs = sorted(int(w) for w in X.indices)
    for W in itertools.combinations(xs, k):
        if not any(all(G.mul(g, w) in u for w in W) for g in range(G.order)):
            return False, W
    return True, None


def naive_tuple(G, sets):
    """First failing coordinate tuple of G^k in lex order, or (True, None)."""
    us = [set(int(g) for g in S.indices) for S in sets]
    for W in itertools.product(range(G.order), repeat=len(sets)):
        ok = any(
            all(G.mul(g, w) in u for w, u in zip(W, us)) for g in range(G.order)
        )
        if not ok:
            return False, W
    return True, None


def naive_basis(G, B, A):
    bb = set()
    for b1 in B.indices:
        for b2 in B.indices:
            bb.add(G.mul(int(b1), int(b2)))
    missing = sorted(set(int(a) for a in A.indices) - bb)
    if missing:
        return False, missing[0]
    return True, None
