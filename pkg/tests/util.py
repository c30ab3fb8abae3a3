"""Shared test helpers: small random instance makers and independent
brute-force oracles that the library code must agree with."""

from __future__ import annotations

import random

from streammatch import Graph, Matching, edge_key


def random_general(rnd: random.Random, n: int, p: float) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rnd.random() < p]
    return Graph(n, edges)


def random_bipartite(rnd: random.Random, left: int, right: int, p: float) -> Graph:
    edges = [
        (i, left + j) for i in range(left) for j in range(right) if rnd.random() < p
    ]
    return Graph(left + right, edges, (range(left), range(left, left + right)))


def random_instance(rnd: random.Random, max_n: int = 10) -> Graph:
    """Mixed bipartite/general instance with at most max_n vertices."""
    p = rnd.choice([0.1, 0.2, 0.4, 0.6, 0.9])
    if rnd.random() < 0.5:
        n = rnd.randint(1, max_n)
        return random_general(rnd, n, p)
    left = rnd.randint(1, max_n // 2)
    right = rnd.randint(1, max_n - left)
    return random_bipartite(rnd, left, right, p)


def enumerate_matchings(g: Graph):
    """Yield every matching of g as a frozenset of edges (includes empty)."""
    edges = g.edges

    def rec(i: int, used: set[int], chosen: list):
        if i == len(edges):
            yield frozenset(chosen)
            return
        yield from rec(i + 1, used, chosen)
        u, v = edges[i]
        if u not in used and v not in used:
            used.add(u)
            used.add(v)
            chosen.append(edges[i])
            yield from rec(i + 1, used, chosen)
            chosen.pop()
            used.discard(u)
            used.discard(v)

    yield from rec(0, set(), [])


def maximum_matchings(g: Graph) -> tuple[int, list[frozenset]]:
    """(mu, all maximum matchings) by exhaustive enumeration."""
    best = 0
    collected: list[frozenset] = []
    for m in enumerate_matchings(g):
        if len(m) > best:
            best = len(m)
            collected = [m]
        elif len(m) == best and best > 0:
            collected.append(m)
    return best, collected


def exists_augmenting(matching: Matching, allowed, max_len: int) -> bool:
    """Exhaustive search for an augmenting path of odd length <= max_len,
    independent of the library's structured search."""
    allowed_set = {edge_key(u, v) for u, v in allowed}
    adj: dict[int, set[int]] = {}
    for u, v in allowed_set:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    def extend(v: int, visited: frozenset, next_matching: bool, length: int) -> bool:
        for w in sorted(adj.get(v, ())):
            if w in visited:
                continue
            if (edge_key(v, w) in matching) != next_matching:
                continue
            if length + 1 > max_len:
                continue
            if not next_matching and not matching.is_matched(w):
                return True
            if extend(w, visited | {w}, not next_matching, length + 1):
                return True
        return False

    for start in sorted(adj):
        if not matching.is_matched(start):
            if extend(start, frozenset({start}), False, 0):
                return True
    return False
