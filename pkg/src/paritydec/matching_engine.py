"""Minimum-weight perfect matching engines.

Two independent routes with the same interface:

* :func:`min_weight_perfect_matching` — blossom algorithm (exact, O(n^3)),
  via the max-cardinality weight transform of the vendored maximum-weight
  matcher.
* :func:`brute_force_min_weight_perfect_matching` — exhaustive enumeration,
  usable as an oracle up to ~14 nodes.

Pairs are returned canonically sorted.  With ``canonical=True`` the blossom
route additionally resolves weight ties to the lexicographically smallest
sorted pair list (the enumeration route does this by construction).
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._blossom import (adjust_weights_for_maximum_cardinality_matching,
                       maximum_weight_matching)

Edge = tuple[int, int, float]


def _normalize_pairs(pairs) -> list[tuple[int, int]]:
    return sorted((min(u, v), max(u, v)) for u, v in pairs)


def _matching_total(pairs, weight_of) -> float:
    return sum(weight_of[p] for p in pairs)


def _weight_map(edges) -> dict[tuple[int, int], float]:
    wm: dict[tuple[int, int], float] = {}
    for u, v, w in edges:
        key = (min(u, v), max(u, v))
        if key in wm:
            raise ValueError(f"duplicate edge {key}")
        wm[key] = w
    return wm


def _solve_min_perfect(num_nodes: int, edges: list[Edge]) -> list[tuple[int, int]]:
    """Min-weight perfect matching via the max-weight blossom solver.

    Transform: maximize sum of (C - w) with C above every weight; the
    max-cardinality adjustment then guarantees a perfect matching whenever
    one exists.  Float weights are lifted to exact integers (Fractions over a
    common denominator) so that the solver's integer optimality verification
    stays active.
    """
    if num_nodes == 0:
        return []
    if num_nodes % 2:
        raise ValueError("odd number of nodes admits no perfect matching")
    if all(float(w).is_integer() for _, _, w in edges):
        scaled = [(u, v, int(w)) for u, v, w in edges]
    else:
        fracs = [Fraction(w).limit_denominator(10 ** 12) for _, _, w in edges]
        denom = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        scaled = [(u, v, int(f * denom)) for (u, v, _), f in zip(edges, fracs)]
    top = max((w for _, _, w in scaled), default=0) + 1
    flipped = [(u, v, top - w) for u, v, w in scaled]
    pairs = maximum_weight_matching(
        adjust_weights_for_maximum_cardinality_matching(flipped))
    if len(pairs) != num_nodes // 2:
        raise ValueError("graph admits no perfect matching")
    return _normalize_pairs(pairs)


def min_weight_perfect_matching(
        num_nodes: int,
        edges: list[Edge],
        *,
        canonical: bool = False,
) -> tuple[list[tuple[int, int]], float]:
    """Exact minimum-weight perfect matching.

    Parameters
    ----------
    num_nodes:
        Vertices are 0..num_nodes-1; all must be matched.
    edges:
        ``(u, v, weight)`` triples, at most one per vertex pair.
    canonical:
        Resolve ties to the lexicographically smallest sorted pair list
        (costs additional solves; intended for small graphs).

    Returns
    -------
    (pairs, total) with pairs canonically sorted.
    """
    wm = _weight_map(edges)
    pairs = _solve_min_perfect(num_nodes, edges)
    total = _matching_total(pairs, wm)
    if not canonical or num_nodes == 0:
        return pairs, total

    # Greedy lexicographic refinement: repeatedly fix the smallest possible
    # pair for the smallest unmatched vertex, verifying optimality of the
    # remainder by re-solving the reduced graph.  All comparisons are exact
    # (weights lifted to Fractions).
    wm_exact = {k: Fraction(w).limit_denominator(10 ** 12)
                for k, w in wm.items()}
    fixed: list[tuple[int, int]] = []
    remaining = set(range(num_nodes))
    rem_edges = list(edges)
    rem_total = sum(wm_exact[p] for p in pairs)
    while remaining:
        u = min(remaining)
        partners = sorted(v for (a, b, _w) in rem_edges
                          for v in ((b,) if a == u else (a,) if b == u else ())
                          if v in remaining)
        chosen = None
        for v in partners:
            keep = remaining - {u, v}
            sub_index = {node: k for k, node in enumerate(sorted(keep))}
            sub_edges = [(sub_index[a], sub_index[b], w)
                         for (a, b, w) in rem_edges
                         if a in sub_index and b in sub_index]
            try:
                sub_pairs = _solve_min_perfect(len(keep), sub_edges)
            except ValueError:
                continue
            back = sorted(keep)
            sub_total = sum(
                wm_exact[(min(back[x], back[y]), max(back[x], back[y]))]
                for x, y in sub_pairs)
            if sub_total + wm_exact[(min(u, v), max(u, v))] == rem_total:
                chosen = v
                break
        if chosen is None:  # pragma: no cover — solver guarantees existence
            raise RuntimeError("tie-break refinement failed")
        v = chosen
        fixed.append((min(u, v), max(u, v)))
        rem_total -= wm_exact[(min(u, v), max(u, v))]
        remaining -= {u, v}
        rem_edges = [(a, b, w) for (a, b, w) in rem_edges
                     if a in remaining and b in remaining]
    return sorted(fixed), total


def brute_force_min_weight_perfect_matching(
        num_nodes: int,
        edges: list[Edge],
) -> tuple[list[tuple[int, int]], float]:
    """Enumerate all perfect matchings; return the min-weight one.

    Ties resolve to the lexicographically smallest sorted pair list.  Only
    feasible for small graphs (cost grows as (n-1)!!).
    """
    if num_nodes == 0:
        return [], 0
    if num_nodes % 2:
        raise ValueError("odd number of nodes admits no perfect matching")
    wm = _weight_map(edges)
    adj: dict[int, set[int]] = {u: set() for u in range(num_nodes)}
    for (u, v), _w in wm.items():
        adj[u].add(v)
        adj[v].add(u)

    best: tuple[float, list[tuple[int, int]]] | None = None

    def rec(remaining: list[int], acc: list[tuple[int, int]], acc_w: float) -> None:
        nonlocal best
        if not remaining:
            cand = (acc_w, sorted(acc))
            if best is None or cand < best:
                best = cand
            return
        u = remaining[0]
        for v in sorted(adj[u] & set(remaining[1:])):
            rec([x for x in remaining[1:] if x != v],
                acc + [(u, v)], acc_w + wm[(min(u, v), max(u, v))])

    rec(list(range(num_nodes)), [], 0)
    if best is None:
        raise ValueError("graph admits no perfect matching")
    return best[1], best[0]
