"""Brute-force reference implementations for cross-checking the fast paths.

These are deliberately naive: reachability and acyclicity via adjacency-matrix
powers, cycle enumeration via anchored depth-first walks, and the SCC
partition via pairwise reachability.  They share no code with the search-based
implementations in :mod:`formfill.graph`, which makes them usable as
independent oracles in tests.  Intended for small graphs only (n <= 8 or so).
"""

from __future__ import annotations

import numpy as np

from .graph import DepGraph


def matrix_powers(g: DepGraph) -> list[np.ndarray]:
    """[M^1, ..., M^n] for the base adjacency matrix M.

    Walks of length up to n cover every question asked here: a path between
    distinct vertices needs at most n - 1 edges, a cycle at most n.
    """
    m = g.adjacency_matrix().entries
    powers = []
    acc = m.copy()
    for _ in range(len(g.vertices)):
        powers.append(acc)
        acc = acc @ m
    return powers


def has_path_by_matrix(g: DepGraph, x: str, y: str) -> bool:
    """Path of length >= 1 exists iff some M^k entry (x, y) is positive."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    i, j = idx[x], idx[y]
    return any(p[i, j] > 0 for p in matrix_powers(g))


def is_dag_by_trace(g: DepGraph) -> bool:
    """Acyclic iff the traces of M^1 .. M^n sum to zero."""
    return sum(int(np.trace(p)) for p in matrix_powers(g)) == 0


def elementary_cycle_sets(g: DepGraph) -> set[frozenset[str]]:
    """Member sets of all elementary cycles, by anchored DFS.

    A walk starts at its smallest vertex and may only visit larger vertices,
    so every cycle is produced from exactly one anchor.
    """
    found: set[frozenset[str]] = set()

    def walk(anchor: str, current: str, on_path: set[str]) -> None:
        for nxt in g.out_set(current):
            if nxt == anchor:
                found.add(frozenset(on_path))
            elif nxt > anchor and nxt not in on_path:
                on_path.add(nxt)
                walk(anchor, nxt, on_path)
                on_path.discard(nxt)

    for v in g.vertices:
        walk(v, v, {v})
    return found


def scc_by_reachability(g: DepGraph) -> tuple[tuple[str, ...], ...]:
    """SCC partition from pairwise mutual reachability (paths of length >= 1)."""
    reach = {v: g.reachable_from(v) for v in g.vertices}
    assigned: set[str] = set()
    comps: list[tuple[str, ...]] = []
    for v in g.vertices:
        if v in assigned:
            continue
        comp = {v} | {w for w in g.vertices if w != v and w in reach[v] and v in reach[w]}
        assigned |= comp
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))
