"""Immutable directed graphs over field identifiers.

A :class:`DepGraph` is a finite, directed, self-loopless graph whose vertices
are field names.  Everything downstream (filling analysis, form autofill)
reduces to structural queries on this object: incoming sets, source vertices,
reachability, acyclicity, elementary cycles, and the strongly-connected
component condensation.

All collections returned by this module are deterministically ordered by the
lexicographic order on vertex ids, so repeated runs produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np


class GraphError(ValueError):
    """Base class for graph construction and lookup errors."""


class SelfLoopError(GraphError):
    def __init__(self, vertex: str):
        super().__init__(f"self-loop on vertex {vertex!r} is not allowed")
        self.vertex = vertex


class UnknownVertexError(GraphError):
    def __init__(self, vertex: str):
        super().__init__(f"unknown vertex {vertex!r}")
        self.vertex = vertex


class DuplicateVertexError(GraphError):
    def __init__(self, vertex: str):
        super().__init__(f"duplicate vertex {vertex!r}")
        self.vertex = vertex


class EmptyVertexSetError(GraphError):
    def __init__(self) -> None:
        super().__init__("a graph needs at least one vertex")


@dataclass(frozen=True)
class Cycle:
    """An elementary cycle, identified by its member set.

    ``witness`` is one vertex sequence realizing the cycle (consecutive pairs
    and last->first are edges), rotated to start at the smallest member.  Two
    walks with the same member set count as the same cycle.
    """

    members: frozenset[str]
    witness: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {"members": sorted(self.members), "witness": list(self.witness)}


@dataclass(frozen=True, eq=False)
class AdjMatrix:
    """0/1 adjacency matrix in the graph's (sorted) vertex order."""

    order: tuple[str, ...]
    entries: np.ndarray

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class Condensation:
    """SCC partition plus the quotient graph over it.

    ``components`` are sorted internally and listed in lexicographic order of
    their member tuples; ``quotient_edges`` holds (from, to) component indices
    and never contains a self-pair.  The quotient graph is acyclic.
    """

    components: tuple[tuple[str, ...], ...]
    quotient_edges: frozenset[tuple[int, int]]
    component_of: Mapping[str, int] = field(hash=False, compare=False)

    def source_components(self) -> tuple[tuple[str, ...], ...]:
        """Components with no incoming quotient edge."""
        targets = {d for _, d in self.quotient_edges}
        return tuple(c for i, c in enumerate(self.components) if i not in targets)


class DepGraph:
    """Finite directed self-loopless graph with deterministic vertex order.

    Immutable after construction; all queries are pure, so instances are safe
    to share across threads.
    """

    __slots__ = ("vertices", "edges", "_in", "_out", "_index", "_cycle_cache")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        seen: set[str] = set()
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex ids must be non-empty strings, got {v!r}")
            if v in seen:
                raise DuplicateVertexError(v)
            seen.add(v)
        if not seen:
            raise EmptyVertexSetError()

        edge_set: set[tuple[str, str]] = set()
        for a, b in edges:
            if a == b:
                raise SelfLoopError(a)
            if a not in seen:
                raise UnknownVertexError(a)
            if b not in seen:
                raise UnknownVertexError(b)
            edge_set.add((a, b))  # duplicate edges collapse silently

        self.vertices: tuple[str, ...] = tuple(sorted(seen))
        self.edges: frozenset[tuple[str, str]] = frozenset(edge_set)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        ins: dict[str, set[str]] = {v: set() for v in self.vertices}
        outs: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in edge_set:
            ins[b].add(a)
            outs[a].add(b)
        self._in = {v: frozenset(s) for v, s in ins.items()}
        self._out = {v: frozenset(s) for v, s in outs.items()}
        # safe to memoize: instances are immutable after construction
        self._cycle_cache: tuple[Cycle, ...] | None = None

    def __repr__(self) -> str:
        return f"DepGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DepGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def _check_vertex(self, v: str) -> None:
        if v not in self._index:
            raise UnknownVertexError(v)

    def in_set(self, v: str) -> frozenset[str]:
        """Edge sources pointing into ``v``."""
        self._check_vertex(v)
        return self._in[v]

    def out_set(self, v: str) -> frozenset[str]:
        """Edge targets reachable from ``v`` in one step."""
        self._check_vertex(v)
        return self._out[v]

    def sources(self) -> frozenset[str]:
        """Vertices with no incoming edge (always-mandatory fields)."""
        return frozenset(v for v in self.vertices if not self._in[v])

    def adjacency_matrix(self) -> AdjMatrix:
        """Base 0/1 matrix; entry (i, j) = 1 iff edge from vertex i to j."""
        n = len(self.vertices)
        m = np.zeros((n, n), dtype=np.int64)
        for a, b in self.edges:
            m[self._index[a], self._index[b]] = 1
        return AdjMatrix(order=self.vertices, entries=m)

    def has_path(self, x: str, y: str) -> bool:
        """True iff a directed path of length >= 1 leads from x to y.

        Paths of length 0 do not count: ``has_path(v, v)`` holds only when v
        lies on a cycle.
        """
        self._check_vertex(x)
        self._check_vertex(y)
        frontier = list(self._out[x])
        seen: set[str] = set()
        while frontier:
            v = frontier.pop()
            if v == y:
                return True
            if v in seen:
                continue
            seen.add(v)
            frontier.extend(self._out[v] - seen)
        return False

    def reachable_from(self, x: str) -> frozenset[str]:
        """All vertices reachable from x by a path of length >= 1."""
        self._check_vertex(x)
        frontier = list(self._out[x])
        seen: set[str] = set()
        while frontier:
            v = frontier.pop()
            if v in seen:
                continue
            seen.add(v)
            frontier.extend(self._out[v] - seen)
        return frozenset(seen)

    def is_dag(self) -> bool:
        """True iff the graph has no cycle (Kahn peeling)."""
        indeg = {v: len(self._in[v]) for v in self.vertices}
        queue = [v for v, d in indeg.items() if d == 0]
        removed = 0
        while queue:
            v = queue.pop()
            removed += 1
            for w in self._out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return removed == len(self.vertices)

    def minimal_cycles(self) -> tuple[Cycle, ...]:
        """All elementary cycles, one per distinct member set.

        Uses Johnson-style enumeration (SCC peeling plus a blocked DFS).
        Sorted by member count, then lexicographically by member list; each
        witness is rotated to start at its smallest member, and when several
        walks share a member set the lexicographically smallest witness wins.
        """
        if self._cycle_cache is not None:
            return self._cycle_cache
        by_members: dict[frozenset[str], tuple[str, ...]] = {}
        for circuit in self._elementary_circuits():
            members = frozenset(circuit)
            pivot = circuit.index(min(circuit))
            witness = tuple(circuit[pivot:] + circuit[:pivot])
            prev = by_members.get(members)
            if prev is None or witness < prev:
                by_members[members] = witness
        cycles = [Cycle(members, witness) for members, witness in by_members.items()]
        cycles.sort(key=lambda c: (len(c.members), sorted(c.members)))
        self._cycle_cache = tuple(cycles)
        return self._cycle_cache

    def _elementary_circuits(self) -> Iterable[list[str]]:
        # Johnson's algorithm: peel one vertex of one nontrivial SCC at a
        # time, enumerating every circuit through that vertex with a blocked
        # depth-first search before removing it.
        adj: dict[str, set[str]] = {v: set(s) for v, s in self._out.items()}

        def sccs_of(nodes: set[str]) -> list[set[str]]:
            return _tarjan(sorted(nodes), lambda v: sorted(adj[v] & nodes))

        pending = [c for c in sccs_of(set(self.vertices)) if len(c) >= 2]
        while pending:
            comp = pending.pop()
            start = min(comp)
            yield from _blocked_search(start, comp, adj)
            for v in comp:
                adj[v].discard(start)
            adj[start] = set()
            rest = comp - {start}
            pending.extend(c for c in sccs_of(rest) if len(c) >= 2)

    def scc(self) -> tuple[tuple[str, ...], ...]:
        """Strongly connected components (mutual reachability classes).

        Components are sorted internally and listed lexicographically.
        """
        comps = _tarjan(self.vertices, lambda v: sorted(self._out[v]))
        return tuple(sorted(tuple(sorted(c)) for c in comps))

    def condense(self) -> Condensation:
        """Quotient the graph by its SCC partition; the result is a DAG."""
        components = self.scc()
        component_of: dict[str, int] = {}
        for i, comp in enumerate(components):
            for v in comp:
                component_of[v] = i
        quotient = {
            (component_of[a], component_of[b])
            for a, b in self.edges
            if component_of[a] != component_of[b]
        }
        cond = Condensation(
            components=components,
            quotient_edges=frozenset(quotient),
            component_of=component_of,
        )
        assert _quotient_is_acyclic(len(components), quotient)
        return cond

    def drop_edges_into(self, targets: Iterable[str]) -> "DepGraph":
        """Copy of the graph without any edge whose head is in ``targets``."""
        drop = set(targets)
        for v in drop:
            self._check_vertex(v)
        return DepGraph(self.vertices, [e for e in self.edges if e[1] not in drop])

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": sorted([a, b] for a, b in self.edges),
        }


def build_graph(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> DepGraph:
    """Validate and build a DepGraph; vertex order is normalized to sorted."""
    return DepGraph(vertices, edges)


def graph_from_json_dict(doc: Mapping) -> DepGraph:
    """Read the graph interchange form {"vertices": [...], "edges": [[a,b]...]}."""
    try:
        vertices = list(doc["vertices"])
        edges = [(a, b) for a, b in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    return DepGraph(vertices, edges)


def _tarjan(vertices: Iterable[str], neighbours) -> list[set[str]]:
    # Classic recursive Tarjan; deterministic given sorted inputs.
    index_counter = [0]
    indices: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    out: list[set[str]] = []

    def strongconnect(v: str) -> None:
        indices[v] = lowlink[v] = index_counter[0]
        index_counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in neighbours(v):
            if w not in indices:
                strongconnect(w)
                lowlink[v] = min(lowlink[v], lowlink[w])
            elif w in on_stack:
                lowlink[v] = min(lowlink[v], indices[w])
        if lowlink[v] == indices[v]:
            comp: set[str] = set()
            while True:
                w = stack.pop()
                on_stack.remove(w)
                comp.add(w)
                if w == v:
                    break
            out.append(comp)

    for v in vertices:
        if v not in indices:
            strongconnect(v)
    return out


def _blocked_search(start: str, comp: set[str], adj: dict[str, set[str]]) -> Iterable[list[str]]:
    # Johnson's blocked DFS for all elementary circuits through `start`
    # inside the subgraph induced by `comp` (iterative form).
    neighbours = {v: sorted(adj[v] & comp) for v in comp}
    path = [start]
    blocked = {start}
    blocked_by: dict[str, set[str]] = {v: set() for v in comp}
    stack = [iter(neighbours[start])]
    closed = [False]
    while stack:
        advanced = False
        for w in stack[-1]:
            if w == start:
                yield path[:]
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                closed.append(False)
                blocked.add(w)
                stack.append(iter(neighbours[w]))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        v = path.pop()
        if closed.pop():
            if closed:
                closed[-1] = True
            unblock = [v]
            while unblock:
                u = unblock.pop()
                if u in blocked:
                    blocked.remove(u)
                    unblock.extend(blocked_by[u])
                    blocked_by[u].clear()
        else:
            for w in neighbours[v]:
                blocked_by[w].add(v)


def _quotient_is_acyclic(n: int, edges: set[tuple[int, int]]) -> bool:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        indeg[b] += 1
        out[a].append(b)
    queue = [i for i in range(n) if indeg[i] == 0]
    removed = 0
    while queue:
        v = queue.pop()
        removed += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed == n
