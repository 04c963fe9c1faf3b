"""Decoder matching graphs and solvers (2D code capacity, 3D phenomenological).

Every strategy produces a :class:`MatchingOutcome`: a list of matched paths,
each carrying its endpoints, weight, the spatial segment contour of its
canonical realization, and the locations it involves (for cluster building).

Two interchangeable routes exist for the optimal strategies:

* ``engine="reference"`` builds the literal gadget graph — two role nodes per
  defect (one per owning symmetry), per-round virtual pairs with a zero edge
  between the symmetry role and the chain role, co-symmetric edges weighted
  by hook distance (plus temporal cost in 3D), chain edges weighted by chain
  distance (temporal-free) — and solves it with the blossom engine.
* ``engine="fast"`` solves the same optimization exactly by specialized
  algorithms: in 2D a linear-time DP over the d fundamental cycles of the
  hook/chain graph; in 3D a blossom run on the closed-form metric closure of
  the defect roles.  Totals agree with the reference route (the gadget
  matching is a minimum T-join in the hook/chain lattice, and the closure
  matching computes the same minimum).

The independent-symmetry strategy ("ism") matches each symmetry separately,
then pairs the activated virtuals along the chain; the "random" strategy
pairs uniformly at random within each symmetry (2D only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .code import ParityCode, Stabilizer
from .matching_engine import min_weight_perfect_matching
from .symmetry import SymmetryLayout, Virtual

_SCALE = 1 << 20  # fixed-point scale for 3D log-likelihood weights

STRATEGIES_2D = ("mwpm", "ism", "random")
STRATEGIES_3D = ("mwpm", "ism")


def log_likelihood_ratio(p: float) -> float:
    """ln((1-p)/p); +inf at p=0, 0 at p=1/2."""
    if not (0.0 <= p <= 0.5):
        raise ValueError(f"probability {p} outside [0, 0.5]")
    if p == 0.0:
        return math.inf
    return math.log((1.0 - p) / p)


def weight_3d(delta_pos: int, delta_t: int, p: float, q: float) -> float:
    """Spacetime matching weight: δ_pos·ln((1-p)/p) + δ_t·ln((1-q)/q)."""
    w = 0.0
    if delta_pos:
        w += delta_pos * log_likelihood_ratio(p)
    if delta_t:
        w += delta_t * log_likelihood_ratio(q)
    return w


@dataclass(frozen=True)
class Role:
    """One matchable node: a location viewed from one symmetry (or the chain).

    ``sym`` is the owning symmetry for hook roles and ``None`` for the chain
    role of a virtual.  ``t`` is the measurement round (0 in 2D).
    """

    loc: Stabilizer | Virtual
    sym: int | None
    t: int = 0

    @property
    def label(self) -> str:
        where = "chain" if self.sym is None else f"sym{self.sym}"
        t = f"@t{self.t}" if self.t else ""
        return f"{self.loc.label}[{where}]{t}"

    def __repr__(self) -> str:
        return self.label


@dataclass
class MatchedPath:
    """One matched pair with its canonical spatial realization."""

    u: Role
    v: Role
    weight: float
    segments: np.ndarray  # bool over layout segment universe (spatial)
    members: tuple = ()   # (location, t) pairs involved, transits included


@dataclass
class MatchingOutcome:
    strategy: str
    paths: list[MatchedPath] = field(default_factory=list)
    total_weight: float = 0.0

    @property
    def pairs(self) -> list[tuple[Role, Role]]:
        return [(p.u, p.v) for p in self.paths]


def defects_from_syndrome(code: ParityCode, syndrome: np.ndarray) -> list[Stabilizer]:
    return [code.stabilizers[k] for k in np.flatnonzero(syndrome)]


def hook_role_position(stab: Stabilizer, a: int) -> int:
    """Position of S_{i,j} along hook a ∈ {i, j} (closed form)."""
    b = stab.j if a == stab.i else stab.i
    return b if b < a else b - 1


# --------------------------------------------------------------------------
# segment helpers
# --------------------------------------------------------------------------

def _hook_segments(layout: SymmetryLayout, a: int, lo: int, hi: int,
                   out: np.ndarray) -> None:
    """XOR hook-a segments covering positions [lo, hi) into ``out``."""
    if lo > hi:
        lo, hi = hi, lo
    base = (a - 1) * layout.d
    out[base + lo:base + hi] ^= True


def _chain_segments(layout: SymmetryLayout, lo: int, hi: int,
                    out: np.ndarray) -> None:
    if lo > hi:
        lo, hi = hi, lo
    base = layout.n_hook_segments
    out[base + lo:base + hi] ^= True


def _cosym_path(layout: SymmetryLayout, u: Role, v: Role,
                weight: float) -> MatchedPath:
    """Realize a co-symmetric pair as the direct hook run between positions."""
    a = u.sym
    pu = layout.hook_position(a, u.loc)
    pv = layout.hook_position(a, v.loc)
    segs = np.zeros(layout.n_segments, dtype=bool)
    _hook_segments(layout, a, pu, pv, segs)
    return MatchedPath(u, v, weight, segs, ((u.loc, u.t), (v.loc, v.t)))


def _chain_path(layout: SymmetryLayout, u: Role, v: Role,
                weight: float) -> MatchedPath:
    cu = layout.chain_position(u.loc)
    cv = layout.chain_position(v.loc)
    segs = np.zeros(layout.n_segments, dtype=bool)
    _chain_segments(layout, cu, cv, segs)
    return MatchedPath(u, v, weight, segs, ((u.loc, u.t), (v.loc, v.t)))


# --------------------------------------------------------------------------
# 2D fast path: exact join DP
# --------------------------------------------------------------------------

def match_mwpm_2d_join(code: ParityCode, layout: SymmetryLayout,
                       syndrome: np.ndarray):
    """Exact minimum matching join for the 2D problem (hot path).

    Returns ``(total, segments, glue_s, glue_e)`` where ``segments`` is the
    boolean contour vector over the layout's segment universe (hook edge
    (a, t) and chain edge c map one-to-one onto segment ids), and the glue
    arrays say which virtual locations the join passes through.

    Works on the cycle space of the hook/chain graph: an initial valid join
    is improved by flipping a subset of the d fundamental cycles (cycle a =
    hook a + its chain stretch); chain-edge membership of cycle a is the
    interval a-1..d+a-2, so the optimal subset is found by a two-state DP
    over prefix parities, conditioned on the total parity.
    """
    d = code.d
    arc = np.zeros((d + 1, d), dtype=bool)
    chain = np.zeros(2 * d - 1, dtype=bool)
    glue_s = np.zeros(d + 1, dtype=bool)
    glue_e = np.zeros(d + 1, dtype=bool)

    roles: list[list[int]] = [[] for _ in range(d + 1)]
    for k in np.flatnonzero(syndrome):
        stab = code.stabilizers[k]
        roles[stab.i].append(hook_role_position(stab, stab.i))
        roles[stab.j].append(hook_role_position(stab, stab.j))

    open_chain = []
    for a in range(1, d + 1):
        ps = sorted(roles[a])
        for k in range(0, len(ps) - 1, 2):
            arc[a, ps[k]:ps[k + 1]] ^= True
        if len(ps) % 2:
            arc[a, ps[-1]:d] ^= True
            glue_e[a] ^= True
            open_chain.append(d + a - 1)
    for k in range(0, len(open_chain), 2):
        chain[open_chain[k]:open_chain[k + 1]] ^= True

    arc_in = arc[1:, :].sum(axis=1)
    best = None
    for beta in (0, 1):
        inf = 1 << 30
        dp = [0, inf]
        cost0 = int(chain[d - 1] ^ bool(beta))  # chain edge d-1 (prefix k=0)
        back = []
        for a in range(1, d + 1):
            ndp = [inf, inf]
            choice = [0, 0]
            for pa in (0, 1):
                node_cost = 0
                if a <= d - 1:
                    node_cost += int(chain[a - 1] ^ bool(pa))
                    node_cost += int(chain[d - 1 + a] ^ bool(beta ^ pa))
                for prev in (0, 1):
                    if dp[prev] >= inf:
                        continue
                    flip = prev ^ pa
                    cost = dp[prev] + int(
                        d - arc_in[a - 1] if flip else arc_in[a - 1]) + node_cost
                    if cost < ndp[pa]:
                        ndp[pa] = cost
                        choice[pa] = prev
            dp = ndp
            back.append(choice)
        total_beta = dp[beta] + cost0
        if best is None or total_beta < best[0]:
            pis = [0] * (d + 1)
            pis[d] = beta
            for a in range(d, 0, -1):
                pis[a - 1] = back[a - 1][pis[a]]
            best = (total_beta, [pis[a - 1] ^ pis[a] for a in range(1, d + 1)])

    total, flips = best
    for a in range(1, d + 1):
        if flips[a - 1]:
            arc[a, :] ^= True
            glue_s[a] ^= True
            glue_e[a] ^= True
            chain[a - 1:d + a - 1] ^= True

    segments = np.zeros(layout.n_segments, dtype=bool)
    segments[:layout.n_hook_segments] = arc[1:, :].reshape(-1)
    segments[layout.n_hook_segments:] = chain
    return total, segments, glue_s, glue_e


def _decompose_join_2d(code: ParityCode, layout: SymmetryLayout,
                       syndrome: np.ndarray, segments: np.ndarray,
                       glue_s: np.ndarray, glue_e: np.ndarray) -> list[MatchedPath]:
    """Split a join into defect-to-defect paths by deterministic walking."""
    d = code.d
    # edge table: (node_u, node_v, seg_id or None); nodes ('r', a, pos) / ('c', c)
    edges = []
    arc = segments[:layout.n_hook_segments].reshape(d, d)
    chain = segments[layout.n_hook_segments:]
    for a in range(1, d + 1):
        for t in range(d):
            if arc[a - 1, t]:
                edges.append((("r", a, t), ("r", a, t + 1),
                              layout.hook_segment_id(a, t)))
    for c in range(2 * d - 1):
        if chain[c]:
            edges.append((("c", c), ("c", c + 1), layout.chain_segment_id(c)))
    for a in range(1, d + 1):
        if glue_s[a]:
            edges.append((("r", a, 0), ("c", a - 1), None))
        if glue_e[a]:
            edges.append((("r", a, d), ("c", d + a - 1), None))

    adj: dict[tuple, list[int]] = {}
    for eid, (nu, nv, _seg) in enumerate(edges):
        adj.setdefault(nu, []).append(eid)
        adj.setdefault(nv, []).append(eid)
    for lst in adj.values():
        lst.sort()

    def node_location(node):
        if node[0] == "r":
            a, pos = node[1], node[2]
            if pos == 0:
                return Virtual("s", a)
            if pos == d:
                return Virtual("e", a)
            b = pos if pos < a else pos + 1
            return Stabilizer(min(a, b), max(a, b))
        c = node[1]
        return layout.chain_members[c]

    def node_role(node):
        loc = node_location(node)
        sym = node[1] if node[0] == "r" else None
        return Role(loc, sym)

    terminals: dict[tuple, Stabilizer] = {}
    for k in np.flatnonzero(syndrome):
        stab = code.stabilizers[k]
        for a in (stab.i, stab.j):
            terminals[("r", a, hook_role_position(stab, a))] = stab

    used = [False] * len(edges)
    unconsumed = dict(terminals)
    paths: list[MatchedPath] = []
    for start in sorted(terminals):
        if start not in unconsumed:
            continue
        del unconsumed[start]
        node = start
        segs = np.zeros(layout.n_segments, dtype=bool)
        members = [(terminals[start], 0)]
        weight = 0
        while True:
            eid = next(e for e in adj[node] if not used[e])
            used[eid] = True
            nu, nv, seg = edges[eid]
            node = nv if node == nu else nu
            if seg is not None:
                segs[seg] = True
                weight += 1
            loc = node_location(node)
            if isinstance(loc, Virtual):
                members.append((loc, 0))
            if node in unconsumed:
                members.append((unconsumed.pop(node), 0))
                break
        paths.append(MatchedPath(node_role(start), node_role(node),
                                 weight, segs, tuple(members)))
    assert all(used), "join decomposition left unused edges"
    return paths


# --------------------------------------------------------------------------
# 2D reference path: literal gadget graph
# --------------------------------------------------------------------------

def build_gadget_2d(code: ParityCode, layout: SymmetryLayout,
                    defects: list[Stabilizer]):
    """Literal matching gadget: roles, edges, weights (all integers)."""
    d = code.d
    nodes: list[Role] = []
    for stab in defects:
        nodes.append(Role(stab, stab.i))
        nodes.append(Role(stab, stab.j))
    glue_pairs = []
    for v in layout.chain_members:
        sym_role = Role(v, v.a)
        chain_role = Role(v, None)
        glue_pairs.append((len(nodes), len(nodes) + 1))
        nodes.append(sym_role)
        nodes.append(chain_role)

    edges = []
    by_sym: dict[int, list[int]] = {}
    for idx, role in enumerate(nodes):
        if role.sym is not None:
            by_sym.setdefault(role.sym, []).append(idx)
    for a, members in by_sym.items():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                u, v = members[x], members[y]
                dist = abs(layout.hook_position(a, nodes[u].loc)
                           - layout.hook_position(a, nodes[v].loc))
                edges.append((u, v, dist))
    chain_roles = [idx for idx, role in enumerate(nodes) if role.sym is None]
    for x in range(len(chain_roles)):
        for y in range(x + 1, len(chain_roles)):
            u, v = chain_roles[x], chain_roles[y]
            edges.append((u, v, layout.chain_distance(nodes[u].loc,
                                                      nodes[v].loc)))
    for u, v in glue_pairs:
        edges.append((u, v, 0))
    return nodes, edges


def match_mwpm_2d_reference(code: ParityCode, layout: SymmetryLayout,
                            syndrome: np.ndarray, *,
                            canonical: bool = False) -> MatchingOutcome:
    defects = defects_from_syndrome(code, syndrome)
    nodes, edges = build_gadget_2d(code, layout, defects)
    pairs, _ = min_weight_perfect_matching(len(nodes), edges,
                                           canonical=canonical)
    outcome = MatchingOutcome("mwpm")
    for u, v in pairs:
        ru, rv = nodes[u], nodes[v]
        if ru.loc == rv.loc and isinstance(ru.loc, Virtual):
            continue  # discarded virtual self-pair
        if ru.sym is not None and ru.sym == rv.sym:
            w = layout.distance_2d(ru.sym, ru.loc, rv.loc)
            outcome.paths.append(_cosym_path(layout, ru, rv, w))
        else:
            w = layout.chain_distance(ru.loc, rv.loc)
            outcome.paths.append(_chain_path(layout, ru, rv, w))
        outcome.total_weight += outcome.paths[-1].weight
    return outcome


def match_mwpm_2d_fast(code: ParityCode, layout: SymmetryLayout,
                       syndrome: np.ndarray) -> MatchingOutcome:
    total, segments, glue_s, glue_e = match_mwpm_2d_join(code, layout, syndrome)
    paths = _decompose_join_2d(code, layout, syndrome, segments, glue_s, glue_e)
    outcome = MatchingOutcome("mwpm", paths, float(total))
    assert sum(p.weight for p in paths) == total
    return outcome


# --------------------------------------------------------------------------
# independent symmetry matching (2D)
# --------------------------------------------------------------------------

def build_gadget_ism_2d(layout: SymmetryLayout, a: int,
                        defects: list[Stabilizer]):
    """Per-symmetry gadget: defects, both end virtuals, extra if odd count.

    Virtual-virtual edges cost zero; defect edges are hook distances.
    """
    nodes: list[Role | None] = [Role(s, a) for s in defects]
    nodes.append(Role(Virtual("s", a), a))
    nodes.append(Role(Virtual("e", a), a))
    if len(defects) % 2:
        nodes.append(None)  # parity filler, zero-linked to the virtuals
    k = len(defects)
    edges = []
    for x in range(len(nodes)):
        for y in range(x + 1, len(nodes)):
            if x >= k and y >= k:
                edges.append((x, y, 0))
            elif nodes[x] is None or nodes[y] is None:
                continue
            else:
                edges.append((x, y, abs(
                    layout.hook_position(a, nodes[x].loc)
                    - layout.hook_position(a, nodes[y].loc))))
    return nodes, edges


def _ism_2d_symmetry_optimal(positions: list[int], d: int):
    """Exact per-symmetry solution for sorted 1D positions with free ends.

    Returns (cost, pairs, start_used, end_used) where pairs is a list of
    index pairs into ``positions`` and the flags say whether a defect was
    routed to the start (position 0) / end (position d) virtual.
    Uses the no-crossing structure of 1D matchings: either consecutive
    pairing, or the extreme defects peel off to their boundary.
    """
    k = len(positions)
    if k == 0:
        return 0, [], None, None

    def consec(lo, hi):  # cost of consecutive pairing of positions[lo:hi]
        return sum(positions[i + 1] - positions[i]
                   for i in range(lo, hi - 1, 2))

    if k % 2 == 0:
        plain = consec(0, k)
        both = positions[0] + (d - positions[-1]) + consec(1, k - 1)
        if plain <= both:
            return plain, [(i, i + 1) for i in range(0, k, 2)], None, None
        return (both, [(i, i + 1) for i in range(1, k - 1, 2)], 0, k - 1)
    left = positions[0] + consec(1, k)
    right = (d - positions[-1]) + consec(0, k - 1)
    if left <= right:
        return left, [(i, i + 1) for i in range(1, k, 2)], 0, None
    return right, [(i, i + 1) for i in range(0, k - 1, 2)], None, k - 1


def match_ism_2d(code: ParityCode, layout: SymmetryLayout,
                 syndrome: np.ndarray, *, engine: str = "fast") -> MatchingOutcome:
    """Independent symmetry matching: per-hook solves, then chain pairing."""
    d = code.d
    per_sym: dict[int, list[Stabilizer]] = {a: [] for a in range(1, d + 1)}
    for stab in defects_from_syndrome(code, syndrome):
        per_sym[stab.i].append(stab)
        per_sym[stab.j].append(stab)

    outcome = MatchingOutcome("ism")
    activated: list[Virtual] = []
    for a in range(1, d + 1):
        defs = sorted(per_sym[a], key=lambda s: layout.hook_position(a, s))
        if not defs:
            continue
        if engine == "reference":
            nodes, edges = build_gadget_ism_2d(layout, a, defs)
            pairs, _total = min_weight_perfect_matching(len(nodes), edges)
            for x, y in pairs:
                rx, ry = nodes[x], nodes[y]
                if rx is None or ry is None:
                    continue
                x_virtual = isinstance(rx.loc, Virtual)
                y_virtual = isinstance(ry.loc, Virtual)
                if x_virtual and y_virtual:
                    continue
                w = layout.distance_2d(a, rx.loc, ry.loc)
                outcome.paths.append(_cosym_path(layout, rx, ry, w))
                outcome.total_weight += w
                if x_virtual or y_virtual:
                    activated.append(rx.loc if x_virtual else ry.loc)
        else:
            positions = [layout.hook_position(a, s) for s in defs]
            _cost, idx_pairs, start_i, end_i = _ism_2d_symmetry_optimal(
                positions, d)
            for x, y in idx_pairs:
                w = positions[y] - positions[x]
                outcome.paths.append(
                    _cosym_path(layout, Role(defs[x], a), Role(defs[y], a), w))
                outcome.total_weight += w
            for which, kind in ((start_i, "s"), (end_i, "e")):
                if which is None:
                    continue
                v = Virtual(kind, a)
                w = positions[which] if kind == "s" else d - positions[which]
                outcome.paths.append(_cosym_path(
                    layout, Role(defs[which], a), Role(v, a), w))
                outcome.total_weight += w
                activated.append(v)

    _pair_activated_along_chain(layout, activated, outcome)
    return outcome


def _pair_activated_along_chain(layout: SymmetryLayout,
                                activated: list[Virtual],
                                outcome: MatchingOutcome,
                                rounds: list[int] | None = None,
                                mu_p: float | None = None) -> None:
    """Match activated virtuals along the chain by consecutive pairing.

    Consecutive pairing of sorted positions is an exact minimum for a path
    metric.  In 3D the temporal coordinate is free; ``mu_p`` scales the
    spatial chain distance.
    """
    if rounds is None:
        rounds = [0] * len(activated)
    order = sorted(range(len(activated)),
                   key=lambda k: (layout.chain_position(activated[k]),
                                  rounds[k], k))
    assert len(order) % 2 == 0, "activated virtuals must pair up"
    for i in range(0, len(order), 2):
        x, y = order[i], order[i + 1]
        vu, vv = activated[x], activated[y]
        dist = layout.chain_distance(vu, vv)
        w = dist if mu_p is None else dist * mu_p
        path = _chain_path(layout, Role(vu, None, rounds[x]),
                           Role(vv, None, rounds[y]), w)
        outcome.paths.append(path)
        outcome.total_weight += w


# --------------------------------------------------------------------------
# random strategy (2D)
# --------------------------------------------------------------------------

def match_random_2d(code: ParityCode, layout: SymmetryLayout,
                    syndrome: np.ndarray,
                    rng: np.random.Generator) -> MatchingOutcome:
    """Uniformly random per-symmetry pairing; odd defect to the nearer end."""
    d = code.d
    per_sym: dict[int, list[Stabilizer]] = {a: [] for a in range(1, d + 1)}
    for stab in defects_from_syndrome(code, syndrome):
        per_sym[stab.i].append(stab)
        per_sym[stab.j].append(stab)

    outcome = MatchingOutcome("random")
    activated: list[Virtual] = []
    for a in range(1, d + 1):
        defs = sorted(per_sym[a], key=lambda s: layout.hook_position(a, s))
        if not defs:
            continue
        order = list(rng.permutation(len(defs)))
        if len(order) % 2:
            lone = defs[order.pop()]
            pos = layout.hook_position(a, lone)
            if pos * 2 < d:
                kind = "s"
            elif pos * 2 > d:
                kind = "e"
            else:
                kind = "s" if rng.integers(2) == 0 else "e"
            v = Virtual(kind, a)
            w = pos if kind == "s" else d - pos
            outcome.paths.append(_cosym_path(layout, Role(lone, a), Role(v, a), w))
            outcome.total_weight += w
            activated.append(v)
        for i in range(0, len(order), 2):
            su, sv = defs[order[i]], defs[order[i + 1]]
            w = layout.distance_2d(a, su, sv)
            outcome.paths.append(_cosym_path(layout, Role(su, a), Role(sv, a), w))
            outcome.total_weight += w

    # random chain pairing of the activated virtuals
    order = list(rng.permutation(len(activated)))
    for i in range(0, len(order), 2):
        vu, vv = activated[order[i]], activated[order[i + 1]]
        w = layout.chain_distance(vu, vv)
        outcome.paths.append(_chain_path(layout, Role(vu, None), Role(vv, None), w))
        outcome.total_weight += w
    return outcome


# --------------------------------------------------------------------------
# 3D: phenomenological matching
# --------------------------------------------------------------------------

def _scaled_mus(p: float, q: float) -> tuple[int | None, int | None]:
    """Fixed-point log-likelihood weights; None encodes an infinite cost."""
    mp = log_likelihood_ratio(p)
    mq = log_likelihood_ratio(q)
    return (None if math.isinf(mp) else round(mp * _SCALE),
            None if math.isinf(mq) else round(mq * _SCALE))


def build_gadget_3d(code: ParityCode, layout: SymmetryLayout,
                    defects: list[tuple[Stabilizer, int]],
                    p: float, q: float, rounds: int):
    """Literal spacetime gadget with per-round virtual pairs (int weights)."""
    mp, mq = _scaled_mus(p, q)
    nodes: list[Role] = []
    for stab, t in defects:
        nodes.append(Role(stab, stab.i, t))
        nodes.append(Role(stab, stab.j, t))
    glue_pairs = []
    for v in layout.chain_members:
        for t in range(rounds):
            glue_pairs.append((len(nodes), len(nodes) + 1))
            nodes.append(Role(v, v.a, t))
            nodes.append(Role(v, None, t))

    edges = []
    by_sym: dict[int, list[int]] = {}
    for idx, role in enumerate(nodes):
        if role.sym is not None:
            by_sym.setdefault(role.sym, []).append(idx)
    for a, members in by_sym.items():
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                u, v = members[x], members[y]
                dpos = abs(layout.hook_position(a, nodes[u].loc)
                           - layout.hook_position(a, nodes[v].loc))
                dt = abs(nodes[u].t - nodes[v].t)
                w = 0
                if dpos:
                    if mp is None:
                        continue
                    w += dpos * mp
                if dt:
                    if mq is None:
                        continue
                    w += dt * mq
                edges.append((u, v, w))
    chain_roles = [idx for idx, role in enumerate(nodes) if role.sym is None]
    for x in range(len(chain_roles)):
        for y in range(x + 1, len(chain_roles)):
            u, v = chain_roles[x], chain_roles[y]
            dc = layout.chain_distance(nodes[u].loc, nodes[v].loc)
            if dc and mp is None:
                continue
            edges.append((u, v, dc * (mp or 0)))
    for u, v in glue_pairs:
        edges.append((u, v, 0))
    return nodes, edges


def match_mwpm_3d_reference(code: ParityCode, layout: SymmetryLayout,
                            detectors: np.ndarray, p: float, q: float
                            ) -> MatchingOutcome:
    rounds = detectors.shape[0]
    defects = [(code.stabilizers[s], int(t))
               for t, s in zip(*np.nonzero(detectors))]
    nodes, edges = build_gadget_3d(code, layout, defects, p, q, rounds)
    pairs, _ = min_weight_perfect_matching(len(nodes), edges)
    mp, mq = _scaled_mus(p, q)
    outcome = MatchingOutcome("mwpm")
    for u, v in pairs:
        ru, rv = nodes[u], nodes[v]
        if ru.loc == rv.loc and isinstance(ru.loc, Virtual) and ru.t == rv.t:
            continue
        if ru.sym is not None and ru.sym == rv.sym:
            dpos = layout.distance_2d(ru.sym, ru.loc, rv.loc)
            dt = abs(ru.t - rv.t)
            w = (dpos * (mp or 0) + dt * (mq or 0)) / _SCALE
            outcome.paths.append(_cosym_path(layout, ru, rv, w))
        else:
            dc = layout.chain_distance(ru.loc, rv.loc)
            w = dc * (mp or 0) / _SCALE
            outcome.paths.append(_chain_path(layout, ru, rv, w))
        outcome.total_weight += outcome.paths[-1].weight
    return outcome


_PRUNE_THRESHOLD = 110
_PRUNE_NEIGHBORS = 28


def match_mwpm_3d_fast(code: ParityCode, layout: SymmetryLayout,
                       detectors: np.ndarray, p: float, q: float
                       ) -> MatchingOutcome:
    """Blossom on the closed-form metric closure of the defect roles.

    Distances exploit the structure of the spacetime lattice: within a
    symmetry the direct cost is μ_p·|Δpos| + μ_q·|Δt|; transits through the
    boundary (virtual columns have free temporal movement) cost μ_p times the
    exit position plus the chain distance.  For large instances the closure
    is pruned to near neighbors plus each defect's own partner edge, which
    preserves feasibility.
    """
    d = code.d
    mp, mq = _scaled_mus(p, q)
    t_idx, s_idx = np.nonzero(detectors)
    stabs = [code.stabilizers[s] for s in s_idx]
    n = 2 * len(stabs)
    outcome = MatchingOutcome("mwpm")
    if n == 0:
        return outcome

    sym = np.empty(n, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    tt = np.empty(n, dtype=np.int64)
    for k, (stab, t) in enumerate(zip(stabs, t_idx)):
        sym[2 * k], sym[2 * k + 1] = stab.i, stab.j
        pos[2 * k] = hook_role_position(stab, stab.i)
        pos[2 * k + 1] = hook_role_position(stab, stab.j)
        tt[2 * k] = tt[2 * k + 1] = t

    big = np.int64(1) << 40  # larger than any finite cost, safe from overflow
    mpv = big if mp is None else np.int64(mp)
    mqv = big if mq is None else np.int64(mq)

    dpos = np.abs(pos[:, None] - pos[None, :])
    dt = np.abs(tt[:, None] - tt[None, :])
    same = sym[:, None] == sym[None, :]
    direct = np.where(same, dpos * mpv + dt * mqv, big)

    exit_cost = np.stack([pos * mpv, (d - pos) * mpv])           # L, R
    chain_pos = np.stack([sym - 1, d + sym - 1])                 # L, R
    best_side = np.zeros((n, n, 2), dtype=np.int8)
    via = np.full((n, n), big, dtype=np.int64)
    for eu in (0, 1):
        for ev in (0, 1):
            cd = np.abs(chain_pos[eu][:, None] - chain_pos[ev][None, :])
            c = exit_cost[eu][:, None] + cd * mpv + exit_cost[ev][None, :]
            upd = c < via
            via = np.where(upd, c, via)
            best_side[upd] = (eu, ev)
    cost = np.minimum(direct, via)

    np.fill_diagonal(cost, big)
    edges = []
    if n <= _PRUNE_THRESHOLD:
        keep = np.ones((n, n), dtype=bool)
    else:
        keep = np.zeros((n, n), dtype=bool)
        k = min(_PRUNE_NEIGHBORS, n - 1)
        nearest = np.argpartition(cost, k, axis=1)[:, :k + 1]
        rows = np.repeat(np.arange(n), k + 1)
        keep[rows, nearest.reshape(-1)] = True
        keep |= keep.T
        partner = np.arange(n) ^ 1
        keep[np.arange(n), partner] = True
    iu, ju = np.triu_indices(n, k=1)
    for u, v in zip(iu, ju):
        if keep[u, v] and cost[u, v] < big:
            edges.append((int(u), int(v), int(cost[u, v])))
    pairs, _total = min_weight_perfect_matching(n, edges)

    def role(k: int) -> Role:
        return Role(stabs[k // 2], int(sym[k]), int(tt[k]))

    for u, v in pairs:
        w = int(cost[u, v]) / _SCALE
        ru, rv = role(u), role(v)
        segs = np.zeros(layout.n_segments, dtype=bool)
        if sym[u] == sym[v] and direct[u, v] <= via[u, v]:
            _hook_segments(layout, int(sym[u]), int(pos[u]), int(pos[v]), segs)
            members = ((ru.loc, ru.t), (rv.loc, rv.t))
        else:
            eu, ev = best_side[u, v]
            vu = Virtual("s" if eu == 0 else "e", int(sym[u]))
            vv = Virtual("s" if ev == 0 else "e", int(sym[v]))
            _hook_segments(layout, int(sym[u]),
                           0 if eu == 0 else int(pos[u]),
                           int(pos[u]) if eu == 0 else d, segs)
            _hook_segments(layout, int(sym[v]),
                           0 if ev == 0 else int(pos[v]),
                           int(pos[v]) if ev == 0 else d, segs)
            _chain_segments(layout, layout.chain_position(vu),
                            layout.chain_position(vv), segs)
            members = ((ru.loc, ru.t), (vu, ru.t), (vv, rv.t), (rv.loc, rv.t))
        outcome.paths.append(MatchedPath(ru, rv, w, segs, members))
        outcome.total_weight += w
    return outcome


def build_gadget_ism_3d(layout: SymmetryLayout, a: int,
                        defects: list[tuple[Stabilizer, int]],
                        p: float, q: float, rounds: int):
    """Per-symmetry spacetime gadget: per-round virtuals, odd-round fillers."""
    mp, mq = _scaled_mus(p, q)
    nodes: list[Role | None] = [Role(s, a, t) for s, t in defects]
    k = len(nodes)
    per_round_odd = np.zeros(rounds, dtype=int)
    for _s, t in defects:
        per_round_odd[t] ^= 1
    for t in range(rounds):
        nodes.append(Role(Virtual("s", a), a, t))
        nodes.append(Role(Virtual("e", a), a, t))
        if per_round_odd[t]:
            nodes.append(None)
    edges = []
    for x in range(len(nodes)):
        for y in range(x + 1, len(nodes)):
            if x >= k and y >= k:
                edges.append((x, y, 0))
                continue
            if nodes[x] is None or nodes[y] is None:
                continue
            rx, ry = nodes[x], nodes[y]
            dpos = abs(layout.hook_position(a, rx.loc)
                       - layout.hook_position(a, ry.loc))
            dt = abs(rx.t - ry.t)
            w = 0
            if dpos:
                if mp is None:
                    continue
                w += dpos * mp
            if dt:
                if mq is None:
                    continue
                w += dt * mq
            edges.append((x, y, w))
    return nodes, edges


def match_ism_3d(code: ParityCode, layout: SymmetryLayout,
                 detectors: np.ndarray, p: float, q: float) -> MatchingOutcome:
    """Independent spacetime symmetry matching, then chain pairing."""
    d = code.d
    rounds = detectors.shape[0]
    mp, _mq = _scaled_mus(p, q)
    per_sym: dict[int, list[tuple[Stabilizer, int]]] = {
        a: [] for a in range(1, d + 1)}
    for t, s in zip(*np.nonzero(detectors)):
        stab = code.stabilizers[s]
        per_sym[stab.i].append((stab, int(t)))
        per_sym[stab.j].append((stab, int(t)))

    outcome = MatchingOutcome("ism")
    activated: list[Virtual] = []
    act_rounds: list[int] = []
    for a in range(1, d + 1):
        defs = sorted(per_sym[a],
                      key=lambda st: (layout.hook_position(a, st[0]), st[1]))
        if not defs:
            continue
        nodes, edges = build_gadget_ism_3d(layout, a, defs, p, q, rounds)
        pairs, _total = min_weight_perfect_matching(len(nodes), edges)
        for x, y in pairs:
            rx, ry = nodes[x], nodes[y]
            if rx is None or ry is None:
                continue
            x_virtual = isinstance(rx.loc, Virtual)
            y_virtual = isinstance(ry.loc, Virtual)
            if x_virtual and y_virtual:
                continue
            dpos = abs(layout.hook_position(a, rx.loc)
                       - layout.hook_position(a, ry.loc))
            dt = abs(rx.t - ry.t)
            w = (dpos * (mp or 0) + dt * (_mq or 0)) / _SCALE
            outcome.paths.append(_cosym_path(layout, rx, ry, w))
            outcome.total_weight += w
            if x_virtual or y_virtual:
                virt = rx if x_virtual else ry
                activated.append(virt.loc)
                act_rounds.append(virt.t)
    _pair_activated_along_chain(layout, activated, outcome,
                                rounds=act_rounds,
                                mu_p=(mp or 0) / _SCALE)
    return outcome


# --------------------------------------------------------------------------
# dispatchers
# --------------------------------------------------------------------------

def match_2d(code: ParityCode, layout: SymmetryLayout, syndrome: np.ndarray,
             strategy: str = "mwpm", *, engine: str = "fast",
             rng: np.random.Generator | None = None) -> MatchingOutcome:
    if strategy == "mwpm":
        if engine == "reference":
            return match_mwpm_2d_reference(code, layout, syndrome)
        return match_mwpm_2d_fast(code, layout, syndrome)
    if strategy == "ism":
        return match_ism_2d(code, layout, syndrome, engine=engine)
    if strategy == "random":
        if rng is None:
            raise ValueError("random strategy requires an rng")
        return match_random_2d(code, layout, syndrome, rng)
    raise ValueError(f"unknown 2D strategy {strategy!r}")


def match_3d(code: ParityCode, layout: SymmetryLayout, detectors: np.ndarray,
             p: float, q: float, strategy: str = "mwpm", *,
             engine: str = "fast") -> MatchingOutcome:
    if strategy == "mwpm":
        if engine == "reference":
            return match_mwpm_3d_reference(code, layout, detectors, p, q)
        return match_mwpm_3d_fast(code, layout, detectors, p, q)
    if strategy == "ism":
        return match_ism_3d(code, layout, detectors, p, q)
    if strategy == "random":
        raise ValueError(
            "random strategy is defined for the code-capacity model only")
    raise ValueError(f"unknown 3D strategy {strategy!r}")
