"""Streaming augmentation on top of the sparsifier.

After Phase I fixes a maximum matching M_H of H, Phase II.A greedily
stores a maximal (2, b)-matching T between matched and unmatched
vertices, and Phase II.B repeatedly applies augmenting paths of length
up to five inside M | T | {current edge}. The candidate set U keeps
being collected across all of Phase II, and the final answer is a
maximum matching of M | H | U.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .graph import (
    Edge,
    Graph,
    Matching,
    Path,
    _augmenting_search,
    apply_augmenting_path,
    edge_key,
    max_matching,
    union_graph,
)
from .sparsifier import AlgoParams, SafetyCapExceeded, default_u_cap, phase1_build_h
from .stream import EdgeStream, PhaseSplit, split_phases


class TwoBMatching:
    """Greedy maximal (2, b)-matching: degree <= 2 on the matched side,
    degree <= b elsewhere, every edge with exactly one matched endpoint."""

    __slots__ = ("edges", "matched_side", "b", "edge_set", "_adj", "_vertices")

    def __init__(self, edges: Iterable[tuple[int, int]], matched_side: Iterable[int], b: int):
        if b < 2:
            raise ValueError("b must be at least 2")
        self.matched_side = frozenset(matched_side)
        self.b = b
        adj: dict[int, list[int]] = {}
        norm: list[Edge] = []
        for x, y in edges:
            e = edge_key(x, y)
            if (e[0] in self.matched_side) == (e[1] in self.matched_side):
                raise ValueError(f"edge {e} must have exactly one matched endpoint")
            norm.append(e)
            adj.setdefault(e[0], []).append(e[1])
            adj.setdefault(e[1], []).append(e[0])
        for v, lst in adj.items():
            lst.sort()
            cap = 2 if v in self.matched_side else b
            if len(lst) > cap:
                raise ValueError(f"vertex {v} exceeds its degree cap {cap}")
        self.edges: tuple[Edge, ...] = tuple(norm)
        self.edge_set: frozenset[Edge] = frozenset(norm)
        self._adj = {v: tuple(lst) for v, lst in adj.items()}
        self._vertices = tuple(sorted(adj))

    def degree(self, v: int) -> int:
        return len(self._adj.get(v, ()))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj.get(v, ())

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"TwoBMatching(size={len(self.edges)}, b={self.b})"


def build_t(
    phase2a: Sequence[tuple[int, int]], m_h: Matching, b: int
) -> TwoBMatching:
    """Greedy pass over the Phase II.A arrivals.

    Edges with zero or two endpoints matched by m_h are ignored; an edge
    is kept iff the matched endpoint has T-degree below 2 and the
    unmatched endpoint has T-degree below b at its arrival.
    """
    if b < 2:
        raise ValueError("b must be at least 2")
    matched = m_h.vertices()
    deg: dict[int, int] = {}
    chosen: list[Edge] = []
    for x, y in phase2a:
        x_in = x in matched
        if x_in == (y in matched):
            continue
        v, u = (x, y) if x_in else (y, x)
        if deg.get(v, 0) < 2 and deg.get(u, 0) < b:
            chosen.append(edge_key(x, y))
            deg[v] = deg.get(v, 0) + 1
            deg[u] = deg.get(u, 0) + 1
    return TwoBMatching(chosen, matched, b)


class AppliedPath(NamedTuple):
    arrival: int | None
    length: int
    vertices: tuple[int, ...]


@dataclass
class AugmentationState:
    """Matching under augmentation plus the log of applied paths."""

    matching: Matching
    applied: list[AppliedPath] = field(default_factory=list)

    def path_length_histogram(self) -> dict[int, int]:
        hist = {1: 0, 3: 0, 5: 0}
        hist.update(Counter(p.length for p in self.applied))
        return hist


def phase2b_step(
    state: AugmentationState,
    t: TwoBMatching,
    e: tuple[int, int],
    arrival: int | None = None,
) -> AugmentationState:
    """Process one Phase II.B arrival.

    Repeatedly finds and applies augmenting paths of length up to five in
    M | T | {e} (shortest first, lowest vertex index first) until none
    remains, then returns the updated state.
    """
    ea, eb = edge_key(*e)

    def nbrs(v: int):
        base = t.neighbors(v)
        if v == ea:
            merged = list(base)
            bisect.insort(merged, eb)
            return merged
        if v == eb:
            merged = list(base)
            bisect.insort(merged, ea)
            return merged
        return base

    starts = sorted(set(t.vertices) | {ea, eb})
    while True:
        verts = _augmenting_search(state.matching.partner_map, starts, nbrs, 5)
        if verts is None:
            return state
        universe = t.edge_set | state.matching.edges | {(ea, eb)}
        path = Path(verts, universe)
        state.matching = apply_augmenting_path(state.matching, path)
        state.applied.append(AppliedPath(arrival, len(path.edges), path.vertices))


def greedy_match(stream: EdgeStream) -> Matching:
    """Maximal matching: accept each arriving edge with both endpoints free."""
    m = Matching()
    for u, v in stream.arrivals():
        if not m.is_matched(u) and not m.is_matched(v):
            m.add(u, v)
    return m


@dataclass(frozen=True)
class TrialDiagnostics:
    """Artifacts and measurements from one full streamed run."""

    split: PhaseSplit
    h: Graph
    u: frozenset[Edge]
    t: TwoBMatching
    m_h: Matching
    m_aug: Matching
    mu_hu: int
    applied: tuple[AppliedPath, ...]

    @property
    def path_length_histogram(self) -> dict[int, int]:
        hist = {1: 0, 3: 0, 5: 0}
        hist.update(Counter(p.length for p in self.applied))
        return hist


def beats23_match(
    stream: EdgeStream,
    params: AlgoParams,
    rng,
    safety_cap: int | None = None,
) -> tuple[Matching, TrialDiagnostics]:
    """Full pipeline: Phase I sparsifier, maximal (2, b)-matching over
    Phase II.A, length-<=5 augmentation over Phase II.B with U collected
    across all of Phase II, returning a maximum matching of M | H | U."""
    g = stream.graph
    m = len(stream)
    split = split_phases(m, params.eps, params.gamma, rng)

    h = phase1_build_h(stream.slice(1, split.eps_cut), g.n, params, g.bipartition)
    m_h = max_matching(h)
    matched = m_h.vertices()
    deg_h = h.degrees

    cap = default_u_cap(g.n) if safety_cap is None else safety_cap
    u_set: set[Edge] = set()
    t_deg: dict[int, int] = {}
    t_edges: list[Edge] = []
    iia_end = split.eps_cut + split.tau
    state = AugmentationState(matching=m_h.copy())
    t: TwoBMatching | None = None

    for pos in range(split.eps_cut + 1, m + 1):
        e = stream.edge_at(pos)
        a, b = e
        if deg_h[a] + deg_h[b] < params.beta_minus:
            u_set.add(e)
            if len(u_set) > cap:
                raise SafetyCapExceeded(f"|U| exceeded the safety cap of {cap}")
        if pos <= iia_end:
            a_in = a in matched
            if a_in != (b in matched):
                v, u = (a, b) if a_in else (b, a)
                if t_deg.get(v, 0) < 2 and t_deg.get(u, 0) < params.b:
                    t_edges.append(e)
                    t_deg[v] = t_deg.get(v, 0) + 1
                    t_deg[u] = t_deg.get(u, 0) + 1
        else:
            if t is None:
                t = TwoBMatching(t_edges, matched, params.b)
            phase2b_step(state, t, e, arrival=pos)
    if t is None:
        t = TwoBMatching(t_edges, matched, params.b)

    hu = union_graph(g.n, h.edges, u_set, bipartition=g.bipartition)
    mu_hu = len(max_matching(hu))
    final_graph = union_graph(
        g.n, state.matching.edges, h.edges, u_set, bipartition=g.bipartition
    )
    final = max_matching(final_graph)
    diag = TrialDiagnostics(
        split=split,
        h=h,
        u=frozenset(u_set),
        t=t,
        m_h=m_h,
        m_aug=state.matching,
        mu_hu=mu_hu,
        applied=tuple(state.applied),
    )
    return final, diag
