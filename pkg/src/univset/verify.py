"""Independent verifiers for every certificate the constructions emit.

The exact checks reduce to bitset sweeps: for each element w the mask
M_w = {g : g*w in U} is U translated on the right by w^{-1}, and a set W
admits a common translate iff the AND of its masks is nonempty. Exact mode
enumerates k-subsets (or coordinate tuples) in lexicographic order and
returns the first failure as a witness; sampled mode draws uniformly and
reports a failure-probability bound alongside any pass.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ExactInfeasible, GroupMismatch
from .groups import Group, Subset, product_set, right_translate

DEFAULT_BUDGET = 10**8
DEFAULT_TRIALS = 100_000

# Feasibility caps for the optional difference-set cross-check in
# verify_tuple: full enumeration of G^(k-1) plus the tuple's Cartesian set.
_DIFF_SPACE_CAP = 10**7
_DIFF_WORK_CAP = 10**6


@dataclass
class Verdict:
    """Outcome of one verification run.

    witness is None on a pass; on failure it is the offending k-subset /
    coordinate tuple (ascending subset for set checks, first coordinate
    normalized to the identity for tuple checks) or a single element index
    for basis checks. failure_bound is the probability that a sampled pass
    missed an existing counterexample under uniform sampling.
    """

    mode: str
    passed: bool
    witness: object = None
    trials: int | None = None
    seed: int | None = None
    failure_bound: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = [int(x) for x in w]
        elif w is not None:
            w = int(w)
        return {
            "mode": self.mode,
            "passed": self.passed,
            "witness": w,
            "trials": self.trials,
            "seed": self.seed,
            "failure_bound": self.failure_bound,
            "details": {k: v for k, v in sorted(self.details.items())},
        }


def _element_mask(G: Group, U: Subset, w: int) -> int:
    # {g : g*w in U} = U * w^{-1}
    return right_translate(U, G.inv(w)).mask


def exact_cost_universal(x_size: int, k: int, order: int, dedup: bool) -> int:
    """Elementary-step estimate for the exact subset sweep.

    With X = G every k-subset has a translate containing the identity, so
    the sweep anchors the identity and chooses k-1 of the rest.
    """
    if dedup:
        return math.comb(max(x_size - 1, 0), k - 1) * order * k
    return math.comb(x_size, k) * order * k


def exact_cost_tuple(order: int, k: int) -> int:
    return order ** max(k - 1, 0) * order * k


def _sample_failure_bound(population: int, trials: int) -> float:
    if population <= 0:
        return 0.0
    return math.exp(trials * math.log1p(-1.0 / population))


def verify_universal_for(
    G: Group,
    U: Subset,
    X: Subset | None,
    k: int,
    *,
    mode: str = "auto",
    budget: int = DEFAULT_BUDGET,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> Verdict:
    """Does U contain a left translate of every k-element subset of X?

    X = None means the whole group. mode "auto" picks exact when the cost
    estimate fits the budget, "exact" raises ExactInfeasible past the
    budget, "sampled" always samples.
    """
    if U.group != G:
        raise GroupMismatch("U belongs to a different group")
    if X is None:
        X = G.full_subset()
    elif X.group != G:
        raise GroupMismatch("X belongs to a different group")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = len(X)
    if k > m:
        # no k-subsets exist
        return Verdict(mode="exact", passed=True, details={"vacuous": True})
    if k == 1:
        # a translate of {w} lands in U iff U is nonempty, for any w
        if len(U) > 0:
            return Verdict(mode="exact", passed=True)
        return Verdict(mode="exact", passed=False, witness=(int(X.indices[0]),))
    if X.issubset(U):
        # the identity translate covers every W
        return Verdict(mode="exact", passed=True, details={"superset": True})

    dedup = X.is_full() and G.identity == 0
    est = exact_cost_universal(m, k, G.order, dedup)
    if mode == "auto":
        mode = "exact" if est <= budget else "sampled"
    if mode == "exact":
        if est > budget:
            raise ExactInfeasible(
                f"exact sweep needs ~{est:.3g} steps, budget {budget:.3g}"
            )
        return _exact_universal(G, U, X, k, dedup)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    return _sampled_universal(G, U, X, k, trials, seed)


def _exact_universal(G: Group, U: Subset, X: Subset, k: int, dedup: bool) -> Verdict:
    nbits = G.order
    if dedup:
        base = U.mask  # mask of the identity: U * e^{-1}
        rest = [int(w) for w in X.indices if w != G.identity]
        masks = [_element_mask(G, U, w) for w in rest]
        pos = _kernels.sweep_combos(base, masks, nbits, k - 1)
        if pos is None:
            return Verdict(mode="exact", passed=True)
        witness = (G.identity,) + tuple(rest[i] for i in pos)
        return Verdict(mode="exact", passed=False, witness=witness)
    elems = [int(w) for w in X.indices]
    masks = [_element_mask(G, U, w) for w in elems]
    full = (1 << nbits) - 1
    pos = _kernels.sweep_combos(full, masks, nbits, k)
    if pos is None:
        return Verdict(mode="exact", passed=True)
    return Verdict(mode="exact", passed=False, witness=tuple(elems[i] for i in pos))


def _sampled_universal(
    G: Group, U: Subset, X: Subset, k: int, trials: int, seed: int
) -> Verdict:
    rng = random.Random(seed)
    member = np.zeros(G.order, dtype=bool)
    member[U.indices] = True
    xlist = [int(w) for w in X.indices]
    u_idx = U.indices
    for t in range(trials):
        W = rng.sample(xlist, k)
        cand = G.right_apply(G.inv(W[0]), u_idx)
        for w in W[1:]:
            if cand.size == 0:
                break
            cand = cand[member[G.right_apply(w, cand)]]
        if cand.size == 0:
            return Verdict(
                mode="sampled",
                passed=False,
                witness=tuple(sorted(W)),
                trials=t + 1,
                seed=seed,
            )
    bound = _sample_failure_bound(math.comb(len(xlist), k), trials)
    return Verdict(
        mode="sampled", passed=True, trials=trials, seed=seed, failure_bound=bound
    )


def verify_tuple(
    G: Group,
    sets,
    *,
    mode: str = "auto",
    budget: int = DEFAULT_BUDGET,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> Verdict:
    """Does every (w_1..w_k) in G^k admit one g with g*w_i in U_i for all i?

    Translating w_1 to the identity is lossless, so the exact sweep runs
    over G^(k-1); when small enough, the equivalent difference-set
    characterization {(u_1^{-1}u_2, ..., u_{k-1}^{-1}u_k)} = G^(k-1) is
    recomputed independently and agreement is asserted.
    """
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one set")
    for S in sets:
        if S.group != G:
            raise GroupMismatch("tuple entry belongs to a different group")
    k = len(sets)
    n = G.order
    if k == 1:
        if len(sets[0]) > 0:
            return Verdict(mode="exact", passed=True)
        return Verdict(mode="exact", passed=False, witness=(G.identity,))

    est = exact_cost_tuple(n, k)
    if mode == "auto":
        mode = "exact" if est <= budget else "sampled"
    if mode == "exact":
        if est > budget:
            raise ExactInfeasible(
                f"exact sweep needs ~{est:.3g} steps, budget {budget:.3g}"
            )
        verdict = _exact_tuple(G, sets)
        diff = _difference_check(G, sets)
        if diff is not None:
            assert diff == verdict.passed, "tuple characterizations disagree"
            verdict.details["difference_check"] = "agree"
        else:
            verdict.details["difference_check"] = "skipped"
        return verdict
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    return _sampled_tuple(G, sets, trials, seed)


def _exact_tuple(G: Group, sets) -> Verdict:
    n, nbits = G.order, G.order
    base = _element_mask(G, sets[0], G.identity)
    tables = [[_element_mask(G, S, w) for w in range(n)] for S in sets[1:]]
    pos = _kernels.sweep_tuples(base, tables, nbits)
    if pos is None:
        return Verdict(mode="exact", passed=True)
    return Verdict(mode="exact", passed=False, witness=(G.identity,) + tuple(pos))


def _difference_check(G: Group, sets) -> bool | None:
    """Recompute universality as coverage of G^(k-1) by consecutive
    differences; None when infeasible at the configured caps."""
    k, n = len(sets), G.order
    space = n ** (k - 1)
    work = 1
    for S in sets:
        work *= max(len(S), 1)
    if space > _DIFF_SPACE_CAP or work > _DIFF_WORK_CAP:
        return None
    if any(len(S) == 0 for S in sets):
        return False
    covered = np.zeros(space, dtype=bool)

    def rec(i: int, prefix_code: int, u_prev: int):
        if i == k:
            covered[prefix_code] = True
            return
        nxt = G.left_apply(G.inv(u_prev), sets[i].indices)
        for u, d in zip(sets[i].indices, nxt):
            rec(i + 1, prefix_code * n + int(d), int(u))

    for u1 in sets[0].indices:
        rec(1, 0, int(u1))
    return bool(covered.all())


def _sampled_tuple(G: Group, sets, trials: int, seed: int) -> Verdict:
    rng = random.Random(seed)
    k, n = len(sets), G.order
    members = []
    for S in sets:
        b = np.zeros(n, dtype=bool)
        b[S.indices] = True
        members.append(b)
    u1_idx = sets[0].indices
    for t in range(trials):
        W = [rng.randrange(n) for _ in range(k)]
        cand = G.right_apply(G.inv(W[0]), u1_idx)
        for i in range(1, k):
            if cand.size == 0:
                break
            cand = cand[members[i][G.right_apply(W[i], cand)]]
        if cand.size == 0:
            return Verdict(
                mode="sampled", passed=False, witness=tuple(W), trials=t + 1, seed=seed
            )
    bound = _sample_failure_bound(n**k, trials)
    return Verdict(
        mode="sampled", passed=True, trials=trials, seed=seed, failure_bound=bound
    )


def verify_basis(G: Group, B: Subset, A: Subset) -> Verdict:
    """Is A contained in BB? Always exact: one product set plus a mask test."""
    if B.group != G or A.group != G:
        raise GroupMismatch("sets belong to a different group")
    if len(A) == 0:
        return Verdict(mode="exact", passed=True, details={"vacuous": True})
    BB = product_set(B, B) if len(B) else G.empty_subset()
    missing = A.mask & ~BB.mask
    if missing == 0:
        return Verdict(mode="exact", passed=True)
    witness = (missing & -missing).bit_length() - 1
    return Verdict(mode="exact", passed=False, witness=witness)
