import itertools
import math
import random

import pytest

from univset.errors import BudgetExceeded
from univset.powers import (
    BasisGraph,
    build_basis_graph,
    count_paths,
    count_walks_from,
    lower_bound_exponent,
    min_degree_subgraph,
    power_set,
)


def complete_graph(m, d=2, n=100):
    vs = tuple(range(m))
    es = tuple((i, j) for i in range(m) for j in range(i + 1, m))
    return BasisGraph(vs, es, tuple(i + j for i, j in es), d, n)


def random_graph(rng, m, n_edges):
    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    es = tuple(sorted(rng.sample(pairs, min(n_edges, len(pairs)))))
    return BasisGraph(tuple(range(m)), es, tuple(u + v for u, v in es), 2, 100)


# ------------------------------------------------------------ construction

def test_power_set_frozen():
    assert power_set(2, 20) == (1, 4, 9, 16)
    assert power_set(3, 30) == (1, 8, 27)
    assert power_set(2, 1) == (1,)
    with pytest.raises(ValueError):
        power_set(1, 10)
    with pytest.raises(ValueError):
        power_set(2, 0)


def test_star_graph_from_zero_padded_squares():
    A = [0, 1, 4, 9, 16]
    g = build_basis_graph(A, 2, 20)
    assert g.edges == ((0, 1), (0, 4), (0, 9), (0, 16))
    assert g.labels == (1, 4, 9, 16)
    assert g.missing == ()
    assert g.degree(0) == 4 and g.degree(16) == 1


def test_squares_without_zero_represent_nothing():
    g = build_basis_graph([1, 4, 9, 16], 2, 20)
    assert g.edges == () and g.missing == (1, 4, 9, 16)


def test_lex_first_pair_wins():
    g = build_basis_graph([0, 1, 3, 4], 2, 4)
    # 4 = 0 + 4 beats 4 = 1 + 3
    assert g.edges == ((0, 1), (0, 4))


def test_self_loop_counts_degree_one():
    g = build_basis_graph([2], 2, 4)
    assert g.edges == ((2, 2),) and g.labels == (4,)
    assert g.degree(2) == 1


def test_graph_validation():
    with pytest.raises(ValueError, match="endpoint sum"):
        BasisGraph((0, 1), ((0, 1),), (5,), 2, 10)
    with pytest.raises(ValueError, match="not sorted"):
        BasisGraph((0, 1), ((1, 0),), (1,), 2, 10)
    with pytest.raises(ValueError, match="leaves the vertex"):
        BasisGraph((0,), ((0, 2),), (2,), 2, 10)


# ------------------------------------------------------------------- cores

def test_star_core_at_its_own_density():
    g = build_basis_graph([0, 1, 4, 9, 16], 2, 20)
    core = min_degree_subgraph(g, g.density())  # 4/5
    assert core.vertices == g.vertices and core.edges == g.edges


def test_star_collapses_above_leaf_degree():
    g = build_basis_graph([0, 1, 4, 9, 16], 2, 20)
    core = min_degree_subgraph(g, 2)
    assert core.vertices == () and core.edges == ()


def test_core_independent_of_removal_order():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.randrange(4, 12)
        g = random_graph(rng, m, rng.randrange(3, 2 * m))
        delta = rng.choice([1, 1.5, 2, g.density()])
        up = min_degree_subgraph(g, delta, removal_order="ascending")
        down = min_degree_subgraph(g, delta, removal_order="descending")
        assert up.vertices == down.vertices and up.edges == down.edges


def test_core_at_density_is_nonempty():
    rng = random.Random(3)
    for _ in range(20):
        g = random_graph(rng, rng.randrange(3, 10), rng.randrange(2, 15))
        if g.n_edges == 0:
            continue
        core = min_degree_subgraph(g, g.density())
        assert core.n_vertices > 0
        assert all(core.degree(v) >= g.density() for v in core.vertices)


def test_bad_removal_order():
    g = complete_graph(3)
    with pytest.raises(ValueError):
        min_degree_subgraph(g, 1, removal_order="sideways")


# ------------------------------------------------------------------- walks

def test_triangle_closed_paths():
    g = complete_graph(3)
    assert count_paths(g, 0, 0, 3) == 2  # the two orientations
    assert count_paths(g, 0, 1, 1) == 1
    assert count_paths(g, 0, 0, 0) == 1
    assert count_paths(g, 0, 1, 0) == 0


def test_walks_cannot_reuse_edges():
    g = complete_graph(3)
    assert count_walks_from(g, 0, 2) == 2  # 0-1-2 and 0-2-1, never 0-1-0


def test_emitted_paths_satisfy_alternating_sum():
    rng = random.Random(1)
    for _ in range(10):
        g = random_graph(rng, 7, 12)
        for k in (2, 3):
            seen = []

            def check(path, labels):
                alt = sum(l * (-1) ** i for i, l in enumerate(labels))
                assert alt == path[0] + (-1) ** (k - 1) * path[-1]
                seen.append(path)

            total = count_walks_from(g, g.vertices[0], k, emit=check)
            assert total == len(seen)


def test_walk_count_beats_density_bound():
    g = complete_graph(6)  # density 2.5
    core = min_degree_subgraph(g, g.density())
    assert core.n_vertices == 6
    for k in (1, 2):
        bound = (g.density() - k) ** k
        for v in core.vertices:
            assert count_walks_from(core, v, k) > bound


def test_budget_exceeded_carries_partial_count():
    g = complete_graph(5)
    with pytest.raises(BudgetExceeded) as ei:
        count_walks_from(g, 0, 4, budget=3)
    assert ei.value.partial_count >= 0
    full = count_walks_from(g, 0, 4)
    assert full > 3


def test_loop_edge_usable_once_in_walks():
    g = BasisGraph((1, 3), ((1, 3), (3, 3)), (4, 6), 2, 10)
    # 1 -(4)- 3 -(6)- 3 is the single length-2 walk
    assert count_walks_from(g, 1, 2) == 1
    assert count_paths(g, 1, 3, 2) == 1


def test_missing_vertex_and_bad_k():
    g = complete_graph(3)
    assert count_walks_from(g, 99, 2) == 0
    with pytest.raises(ValueError):
        count_paths(g, 0, 1, -1)


def test_lower_bound_exponent_frozen():
    assert lower_bound_exponent(2) == pytest.approx(0.75 - 1 / (2 * math.sqrt(2)) - 0.5)
    assert lower_bound_exponent(5) == pytest.approx(0.4014, abs=1e-4)
    # exponent grows toward 3/4
    vals = [lower_bound_exponent(d) for d in (3, 5, 10, 100)]
    assert vals == sorted(vals) and vals[-1] < 0.75
    with pytest.raises(ValueError):
        lower_bound_exponent(1)


def test_graph_json():
    g = build_basis_graph([0, 1, 4], 2, 5)
    d = g.to_json()
    assert d["edges"] == [[0, 1], [0, 4]] and d["missing"] == []
