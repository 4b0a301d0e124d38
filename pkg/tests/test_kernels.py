"""Kernel tests: pure bitset sweeps vs. brute force, and the compiled twin.

The brute-force references below re-enumerate combinations/tuples with
itertools instead of short-circuiting on empty prefixes, so they check the
lex-first witness claims independently of the recursion structure.
"""

import itertools
import random

import numpy as np
import pytest

from univset import _kernels
from univset._kernels import pure

try:
    from univset._kernels import _fast
except ImportError:
    _fast = None

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled kernels not built")

BACKENDS = [pure] + ([_fast] if _fast is not None else [])


def ref_combos(base, masks, nbits, k):
    m = len(masks)
    if k > m:
        return None
    if k == 0:
        return None if base else ()
    for combo in itertools.combinations(range(m), k):
        acc = base
        for i in combo:
            acc &= masks[i]
        if not acc:
            return combo
    return None


def ref_tuples(base, tables, nbits):
    k1 = len(tables)
    if k1 == 0:
        return None if base else ()
    n = len(tables[0])
    for pos in itertools.product(range(n), repeat=k1):
        acc = base
        for slot, w in enumerate(pos):
            acc &= tables[slot][w]
        if not acc:
            return pos
    return None


def random_masks(rng, count, nbits, density):
    out = []
    for _ in range(count):
        mask = 0
        for b in range(nbits):
            if rng.random() < density:
                mask |= 1 << b
        out.append(mask)
    return out


def test_backend_name_exposed():
    assert _kernels.BACKEND in ("pure", "compiled")
    assert _kernels.sweep_combos is not None


@pytest.mark.parametrize("kern", BACKENDS)
def test_combos_matches_brute_force(kern):
    rng = random.Random(20240815)
    for trial in range(120):
        nbits = rng.randrange(1, 70)
        m = rng.randrange(0, 7)
        k = rng.randrange(0, m + 2)
        density = rng.choice([0.2, 0.5, 0.9])
        base = random_masks(rng, 1, nbits, density)[0]
        masks = random_masks(rng, m, nbits, density)
        got = kern.sweep_combos(base, masks, nbits, k)
        want = ref_combos(base, masks, nbits, k)
        # The brute-force scan returns the lex-first empty combination, the
        # kernel may report the consecutive fill of an empty prefix; both
        # witness the same first failure, and the prefix fill *is* lex-first
        # because every completion of an empty prefix is empty too.
        assert got == want, (trial, nbits, k, base, masks)


@pytest.mark.parametrize("kern", BACKENDS)
def test_combos_edges(kern):
    assert kern.sweep_combos(0b101, [], 3, 1) is None  # k > m
    # k == 0: the empty combination's intersection is base itself, so a
    # nonempty base passes and an empty base fails with the empty witness.
    assert kern.sweep_combos(0b101, [], 3, 0) is None
    assert kern.sweep_combos(0, [], 3, 0) == ()
    assert kern.sweep_combos(0, [0b1], 1, 1) == (0,)
    assert kern.sweep_combos(0b1, [0b1, 0b1], 1, 2) is None


@pytest.mark.parametrize("kern", BACKENDS)
def test_combos_empty_prefix_consecutive_fill(kern):
    # masks[1] kills the prefix on its own, so (0, 1, 2) is reported even
    # though row 2 was never ANDed: the consecutive fill of an empty prefix.
    base = 0b1111
    masks = [0b1111, 0b0000, 0b1111, 0b1111, 0b1111]
    assert kern.sweep_combos(base, masks, 4, 3) == (0, 1, 2)
    assert ref_combos(base, masks, 4, 3) == (0, 1, 2)


@pytest.mark.parametrize("kern", BACKENDS)
def test_tuples_matches_brute_force(kern):
    rng = random.Random(97)
    for trial in range(100):
        nbits = rng.randrange(1, 70)
        n = rng.randrange(1, 6)
        k1 = rng.randrange(0, 3)
        density = rng.choice([0.3, 0.6, 0.95])
        base = random_masks(rng, 1, nbits, density)[0]
        tables = [random_masks(rng, n, nbits, density) for _ in range(k1)]
        got = kern.sweep_tuples(base, tables, nbits)
        want = ref_tuples(base, tables, nbits)
        assert got == want, (trial, nbits, n, k1)


@pytest.mark.parametrize("kern", BACKENDS)
def test_tuples_edges(kern):
    assert kern.sweep_tuples(0b11, [], 2) is None
    assert kern.sweep_tuples(0, [], 2) == ()
    # Empty prefix at slot 0: zero-fill of the remaining slots is lex-first.
    tables = [[0b00, 0b11], [0b11, 0b11]]
    assert kern.sweep_tuples(0b11, tables, 2) == (0, 0)
    assert ref_tuples(0b11, tables, 2) == (0, 0)


# Independent polynomial arithmetic for checking exp_table. Coefficient
# tuples, lowest degree first, reduced mod the monic modulus by long division
# rather than the kernels' in-place subtraction loop.


def poly_mul_mod(a, b, modulus, p):
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            for j in range(m + 1):
                prod[i - m + j] = (prod[i - m + j] - c * modulus[j]) % p
    out = prod[:m]
    out += [0] * (m - len(out))
    return out


def index_of(coeffs, p):
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def ref_exp_table(p, m, modulus, gen):
    gcoeffs = [0] * m
    v = gen
    for i in range(m):
        v, gcoeffs[i] = divmod(v, p)
    cur = [1] + [0] * (m - 1)
    out = []
    for _ in range(p**m - 1):
        out.append(index_of(cur, p))
        cur = poly_mul_mod(cur, gcoeffs, list(modulus), p)
    return out


@pytest.mark.parametrize("kern", BACKENDS)
def test_exp_table_gf8_frozen(kern):
    # GF(8) with x^3 + x + 1, generator x (index 2):
    # 1, x, x^2, x+1, x^2+x, x^2+x+1, x^2+1.
    table = kern.exp_table(2, 3, (1, 1, 0, 1), 2)
    assert table.dtype == np.uint32
    assert list(table) == [1, 2, 4, 3, 6, 7, 5]


@pytest.mark.parametrize("kern", BACKENDS)
def test_exp_table_gf9_frozen(kern):
    # GF(9) with x^2 + 1, generator x + 1 (index 4). (x+1)^2 = x^2+2x+1 = 2x,
    # so the element order is 8: the table must enumerate all of GF(9)*.
    table = kern.exp_table(3, 2, (1, 0, 1), 4)
    assert len(table) == 8
    assert sorted(table) == list(range(1, 9))
    assert table[0] == 1 and table[1] == 4


@pytest.mark.parametrize("kern", BACKENDS)
@pytest.mark.parametrize(
    "p,m,modulus,gen",
    [
        (2, 2, (1, 1, 1), 2),
        (2, 4, (1, 1, 0, 0, 1), 2),
        (3, 3, (1, 2, 0, 1), 3),
        (5, 2, (2, 1, 1), 5),
        (7, 1, (3, 1), 3),
    ],
)
def test_exp_table_matches_reference(kern, p, m, modulus, gen):
    got = list(kern.exp_table(p, m, modulus, gen))
    assert got == ref_exp_table(p, m, modulus, gen)
    # A generator table enumerates the whole multiplicative group once.
    assert sorted(got) == list(range(1, p**m))


@needs_fast
def test_fast_and_pure_agree_on_wide_masks():
    # Masks wider than one uint64 word exercise the packing path.
    rng = random.Random(5)
    nbits = 200
    base = random_masks(rng, 1, nbits, 0.8)[0]
    masks = random_masks(rng, 8, nbits, 0.55)
    for k in (1, 2, 3):
        assert _fast.sweep_combos(base, masks, nbits, k) == pure.sweep_combos(
            base, masks, nbits, k
        )
    tables = [random_masks(rng, 5, nbits, 0.5) for _ in range(2)]
    assert _fast.sweep_tuples(base, tables, nbits) == pure.sweep_tuples(
        base, tables, nbits
    )


def test_env_override_selects_pure(monkeypatch):
    import importlib
    import univset._kernels as mod

    monkeypatch.setenv("UNIVSET_PURE", "1")
    reloaded = importlib.reload(mod)
    try:
        assert reloaded.BACKEND == "pure"
        assert reloaded.sweep_combos is pure.sweep_combos
    finally:
        monkeypatch.delenv("UNIVSET_PURE")
        importlib.reload(mod)
