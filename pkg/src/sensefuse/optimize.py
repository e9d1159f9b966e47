"""Hybrid-coding policy search: exhaustive baseline and three greedy searches.

A policy assigns each node either the coded (1) or the uncoded (0) scheme.
Because the hybrid reciprocal distortion is built from per-node running
sums, every candidate expansion is evaluated in O(1); the searches below
share one vectorized beam engine so that the pure greedy search and the
group greedy search with group size 1 are bit-identical by construction.

Tie-breaking is deterministic everywhere: candidate expansions are ordered
by (distortion, node index, coded before uncoded, parent slot); the
exhaustive search prefers more coded nodes and then the lexicographically
smallest policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analytic import hybrid_distortion, link_terms
from .model import (
    CodingPolicy,
    PolicySearchResult,
    SystemModel,
    ValidationError,
    validate,
)

__all__ = [
    "GroupState",
    "global_search",
    "pure_greedy",
    "group_greedy",
    "sorted_greedy",
    "exhaustive_group_size",
    "normalized_distortion",
    "policy_error_rate",
]

GLOBAL_SEARCH_MAX_NODES = 24
_GLOBAL_CHUNK = 1 << 16


@dataclass(frozen=True)
class GroupState:
    """Snapshot of one beam iteration: up to L partial policies.

    ``assign`` is (P, K) with entries -1 (unassigned), 0, 1; all rows have
    the same number of assigned nodes and ``distortions`` is ascending.
    """

    assign: np.ndarray
    distortions: np.ndarray
    group_size: int


def _refreshed_result(model: SystemModel, bits: Sequence[int],
                      visit_order: Sequence[int], evaluations: int) -> PolicySearchResult:
    policy = CodingPolicy(tuple(int(b) for b in bits))
    distortion = hybrid_distortion(model, policy).total
    return PolicySearchResult(policy=policy, distortion=distortion,
                              visit_order=tuple(int(v) for v in visit_order),
                              evaluations=int(evaluations))


def global_search(model: SystemModel) -> PolicySearchResult:
    """Evaluate every one of the 2^K policies and return the minimizer.

    Guarded at K <= 24; ties go to the policy with more coded nodes, then
    to the lexicographically smallest bit tuple.
    """
    validate(model)
    k = model.n_nodes
    if k > GLOBAL_SEARCH_MAX_NODES:
        raise ValidationError(
            f"global search is limited to K <= {GLOBAL_SEARCH_MAX_NODES}, got {k}")
    a, b, c, e = link_terms(model)
    st = model.sigma_theta_sq
    node_bits = np.arange(k, dtype=np.int64)
    lex_weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)

    best_key = None
    best_code = -1
    total = 1 << k
    for start in range(0, total, _GLOBAL_CHUNK):
        codes = np.arange(start, min(start + _GLOBAL_CHUNK, total), dtype=np.int64)
        bits = (codes[:, None] >> node_bits[None, :]) & 1
        mask = bits.astype(float)
        s_a = mask @ a
        s_b = mask @ b
        s_c = mask @ c
        s_e = (1.0 - mask) @ e
        dist = st / (s_a - s_b * s_b / (1.0 + s_c) + s_e)
        pop = bits.sum(axis=1)
        lex = bits @ lex_weights
        pick = np.lexsort((lex, -pop, dist))[0]
        key = (dist[pick], -pop[pick], lex[pick])
        if best_key is None or key < best_key:
            best_key = key
            best_code = int(codes[pick])
    bits = [(best_code >> j) & 1 for j in range(k)]
    return _refreshed_result(model, bits, visit_order=(), evaluations=total)


def _beam_search(model: SystemModel, group_size: int) -> PolicySearchResult:
    """Shared beam engine; group_size 1 is the pure greedy search."""
    validate(model)
    if group_size < 1:
        raise ValidationError(f"group size must be >= 1, got {group_size}")
    k = model.n_nodes
    a, b, c, e = link_terms(model)
    st = model.sigma_theta_sq
    pow3 = 3 ** np.arange(k, dtype=object) if k > 39 else 3 ** np.arange(k, dtype=np.int64)

    state = GroupState(assign=np.full((1, k), -1, dtype=np.int8),
                       distortions=np.full(1, np.inf), group_size=group_size)
    order = np.empty((1, 0), dtype=np.int64)
    s_a = np.zeros(1)
    s_b = np.zeros(1)
    s_c = np.zeros(1)
    s_e = np.zeros(1)
    codes = np.zeros(1, dtype=pow3.dtype)
    evaluations = 0

    for _ in range(k):
        assign = state.assign
        n_part = assign.shape[0]
        open_mask = assign < 0  # (P, K)
        evaluations += 2 * int(open_mask.sum())

        coded_term_base = s_a - s_b * s_b / (1.0 + s_c)
        # rho = 1: coded term changes, uncoded sum unchanged
        a1 = s_a[:, None] + a[None, :]
        b1 = s_b[:, None] + b[None, :]
        c1 = s_c[:, None] + c[None, :]
        inv1 = a1 - b1 * b1 / (1.0 + c1) + s_e[:, None]
        # rho = 0: coded term unchanged, uncoded sum grows
        inv0 = coded_term_base[:, None] + s_e[:, None] + e[None, :]

        d1 = np.where(open_mask, st / inv1, np.inf)
        d0 = np.where(open_mask, st / inv0, np.inf)

        cand_d = np.concatenate([d1.ravel(), d0.ravel()])
        parents = np.repeat(np.arange(n_part), k)
        nodes = np.tile(np.arange(k), n_part)
        cand_parent = np.concatenate([parents, parents])
        cand_node = np.concatenate([nodes, nodes])
        cand_rho = np.concatenate([np.zeros(n_part * k, dtype=np.int8),
                                   np.ones(n_part * k, dtype=np.int8)])
        # rank: distortion, then node index, then coded first, then parent slot
        rank = np.lexsort((cand_parent, cand_rho, cand_node, cand_d))
        rank = rank[np.isfinite(cand_d[rank])]

        cand_codes = codes[cand_parent[rank]] + (2 - cand_rho[rank]) * pow3[cand_node[rank]]
        _, first = np.unique(cand_codes, return_index=True)
        keep = rank[np.sort(first)[:group_size]]

        parent = cand_parent[keep]
        node = cand_node[keep]
        rho = 1 - cand_rho[keep]  # cand_rho stored 0 for coded to sort coded first
        new_assign = assign[parent].copy()
        new_assign[np.arange(len(keep)), node] = rho
        order = np.concatenate([order[parent], node[:, None]], axis=1)
        add_coded = rho == 1
        s_a = s_a[parent] + np.where(add_coded, a[node], 0.0)
        s_b = s_b[parent] + np.where(add_coded, b[node], 0.0)
        s_c = s_c[parent] + np.where(add_coded, c[node], 0.0)
        s_e = s_e[parent] + np.where(add_coded, 0.0, e[node])
        codes = codes[parent] + (1 + rho).astype(pow3.dtype) * pow3[node]
        # cand_d[keep] is ascending because keep preserves the rank order
        state = GroupState(assign=new_assign, distortions=cand_d[keep],
                           group_size=group_size)

    best = int(np.argmin(state.distortions))  # rows are key-sorted; first min wins
    return _refreshed_result(model, state.assign[best], order[best], evaluations)


def pure_greedy(model: SystemModel) -> PolicySearchResult:
    """Grow the active set one node at a time, always taking the
    (node, scheme) pair that minimizes the sub-system hybrid distortion."""
    return _beam_search(model, 1)


def group_greedy(model: SystemModel, group_size: int) -> PolicySearchResult:
    """Beam-style greedy keeping the ``group_size`` best partial policies
    per iteration; degrades to the pure greedy search at group size 1 and
    covers the whole policy space once the group holds every distinct
    partial (see :func:`exhaustive_group_size`)."""
    return _beam_search(model, group_size)


def exhaustive_group_size(n_nodes: int) -> int:
    """Smallest group size that provably turns the group greedy search into
    an exhaustive one: max_k C(K, k) 2^k distinct partial policies."""
    return max(math.comb(n_nodes, j) * (2 ** j) for j in range(n_nodes + 1))


def sorted_greedy(model: SystemModel, ranking: str = "coded") -> PolicySearchResult:
    """Visit nodes in descending single-node distortion; code the first
    node, then pick each node's scheme by comparing the running hybrid
    distortion of both choices.

    ``ranking`` selects the single-node distortion used for the visit
    order: "coded" (default, consistent with the coded scheme being optimal
    for a single node) or "uncoded" (amplify-and-forward).
    """
    validate(model)
    if ranking not in ("coded", "uncoded"):
        raise ValidationError(f"unknown ranking {ranking!r}")
    k = model.n_nodes
    a, b, c, e = link_terms(model)
    st = model.sigma_theta_sq
    if ranking == "coded":
        single = st / (a - b * b / (1.0 + c))
    else:
        single = st / e
    evaluations = k
    # descending distortion, ties by ascending node index
    visit = np.lexsort((np.arange(k), -single))

    rho = np.zeros(k, dtype=np.int8)
    first = int(visit[0])
    rho[first] = 1
    s_a, s_b, s_c, s_e = a[first], b[first], c[first], 0.0
    for idx in visit[1:]:
        evaluations += 2
        inv1 = (s_a + a[idx]) - (s_b + b[idx]) ** 2 / (1.0 + s_c + c[idx]) + s_e
        inv0 = s_a - s_b * s_b / (1.0 + s_c) + s_e + e[idx]
        if st / inv1 <= st / inv0:  # tie goes to the coded scheme
            rho[idx] = 1
            s_a += a[idx]
            s_b += b[idx]
            s_c += c[idx]
        else:
            s_e += e[idx]
    return _refreshed_result(model, rho, visit, evaluations)


def _distortions(batch) -> np.ndarray:
    values = [r.distortion if isinstance(r, PolicySearchResult) else float(r)
              for r in batch]
    if not values:
        raise ValidationError("empty result batch")
    return np.array(values)


def normalized_distortion(results, optimal_results) -> float:
    """Mean distortion of an algorithm divided by the mean distortion of
    the exhaustive search over the same instances."""
    algo = _distortions(results)
    opt = _distortions(optimal_results)
    if len(algo) != len(opt):
        raise ValidationError(
            f"batch lengths differ: {len(algo)} vs {len(opt)}")
    return float(np.mean(algo) / np.mean(opt))


def _policy_matrix(policies) -> np.ndarray:
    rows = [p.rho if isinstance(p, CodingPolicy) else tuple(p) for p in policies]
    if not rows:
        raise ValidationError("empty policy batch")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("policies in one batch must share a length")
    return np.array(rows, dtype=np.int8)


def policy_error_rate(policies, optimal_policies) -> float:
    """Fraction of per-node scheme bits that disagree with the optimum:
    sum of bitwise XORs over N_sim policies divided by N_sim * K."""
    got = _policy_matrix(policies)
    opt = _policy_matrix(optimal_policies)
    if got.shape != opt.shape:
        raise ValidationError(
            f"policy batches have different shapes: {got.shape} vs {opt.shape}")
    return float(np.mean(got ^ opt))
