"""Determination closures and filling analysis.

Two determination notions over a :class:`~formfill.graph.DepGraph`:

* complete: a vertex can be derived once *all* of its incoming vertices are
  available;
* partial: *any* available incoming vertex suffices.

From either notion, iterating "add everything currently derivable" converges
to a fixed point; an input set fills the graph when that closure reaches every
vertex.  This module computes the closures, the structural characterizations
of filling (cycle cover, edge-deleted DAG, source SCCs), minimal filling sets
by greedy and by exhaustive search, and suggestions completing a partial
input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping

from .graph import Condensation, Cycle, DepGraph, UnknownVertexError

Mode = Literal["complete", "partial"]

EXACT_SEARCH_LIMIT = 12


class TooLargeError(ValueError):
    def __init__(self, n: int):
        super().__init__(
            f"exhaustive minimal-filling search is capped at "
            f"{EXACT_SEARCH_LIMIT} vertices, got {n}"
        )
        self.n = n


@dataclass(frozen=True)
class ClosureTrace:
    """Stages of a determination closure, up to its fixed point.

    ``stages[0]`` is the input set; each following stage is strictly larger,
    and the last equals ``fixed_point``.  ``filled`` means the fixed point is
    the whole vertex set.
    """

    stages: tuple[frozenset[str], ...]
    fixed_point: frozenset[str]
    filled: bool

    def stage_lists(self) -> list[list[str]]:
        return [sorted(s) for s in self.stages]


def _checked(g: DepGraph, vertex_set: Iterable[str]) -> frozenset[str]:
    s = frozenset(vertex_set)
    for v in s:
        if not g.has_vertex(v):
            raise UnknownVertexError(v)
    return s


def dtm(g: DepGraph, provided: Iterable[str]) -> frozenset[str]:
    """Vertices completely determined: non-empty In(v) entirely inside the set."""
    s = _checked(g, provided)
    return frozenset(v for v in g.vertices if g.in_set(v) and g.in_set(v) <= s)


def pdtm(g: DepGraph, provided: Iterable[str]) -> frozenset[str]:
    """Vertices partially determined: In(v) meets the set."""
    s = _checked(g, provided)
    return frozenset(v for v in g.vertices if g.in_set(v) & s)


def closure(g: DepGraph, provided: Iterable[str], mode: Mode) -> ClosureTrace:
    """Iterate determination to its fixed point, recording every stage."""
    step = dtm if mode == "complete" else pdtm
    return _closure(g, _checked(g, provided), lambda s: step(g, s))


def closure_by_rule_modes(
    g: DepGraph, provided: Iterable[str], modes: Mapping[str, Mode]
) -> ClosureTrace:
    """Closure where each vertex carries its own determination mode.

    ``modes`` maps a vertex to how its own value may be derived; vertices
    absent from the map (no rule) are never derived.  With a uniform map this
    is exactly :func:`closure`.
    """

    def step(current: frozenset[str]) -> frozenset[str]:
        out = set()
        for v, mode in modes.items():
            ins = g.in_set(v)
            if not ins:
                continue
            if (ins <= current) if mode == "complete" else (ins & current):
                out.add(v)
        return frozenset(out)

    return _closure(g, _checked(g, provided), step)


def _closure(g: DepGraph, start: frozenset[str], step) -> ClosureTrace:
    stages = [start]
    current = start
    while True:
        nxt = current | step(current)
        if nxt == current:
            break
        stages.append(nxt)
        current = nxt
    return ClosureTrace(
        stages=tuple(stages),
        fixed_point=current,
        filled=current == frozenset(g.vertices),
    )


def is_filling(g: DepGraph, provided: Iterable[str], mode: Mode) -> bool:
    """Does iterated determination from the set reach every vertex?"""
    return closure(g, provided, mode).filled


def is_filling_by_cycles(g: DepGraph, provided: Iterable[str]) -> bool:
    """Complete-mode filling via structure: contains all sources, hits every cycle."""
    s = _checked(g, provided)
    if not g.sources() <= s:
        return False
    return all(c.members & s for c in g.minimal_cycles())


def is_filling_by_dag(g: DepGraph, provided: Iterable[str]) -> bool:
    """Complete-mode filling via edge deletion.

    Drop every edge whose head is in the set; the set fills iff the remainder
    is a DAG whose sources it contains.
    """
    s = _checked(g, provided)
    stripped = g.drop_edges_into(s)
    return stripped.is_dag() and stripped.sources() <= s


def is_p_filling_by_scc(g: DepGraph, provided: Iterable[str]) -> bool:
    """Partial-mode filling via condensation: meets every source component."""
    s = _checked(g, provided)
    return all(set(comp) & s for comp in g.condense().source_components())


def is_p_filling_by_path(g: DepGraph, provided: Iterable[str]) -> bool:
    """Partial-mode filling via reachability.

    The set must contain every source vertex and reach every vertex outside
    itself by a directed path.
    """
    s = _checked(g, provided)
    if not g.sources() <= s:
        return False
    reachable: set[str] = set()
    for j in s:
        reachable |= g.reachable_from(j)
    return all(x in reachable for x in g.vertices if x not in s)


def greedy_min_filling(g: DepGraph) -> frozenset[str]:
    """Small complete-mode filling set, greedily.

    Start from the sources, then repeatedly add the vertex lying on the most
    not-yet-covered elementary cycles (ties broken by vertex order) until
    every cycle is covered.  Always filling, not necessarily optimal.
    """
    chosen = set(g.sources())
    cycles = [c.members for c in g.minimal_cycles()]
    while True:
        uncovered = [c for c in cycles if not (c & chosen)]
        if not uncovered:
            return frozenset(chosen)
        chosen.add(_best_cycle_cover_pick(uncovered))


def exact_min_fillings(g: DepGraph, mode: Mode) -> list[frozenset[str]]:
    """All inclusion-minimal filling sets, by exhaustive subset search.

    Subsets are visited in increasing cardinality (lexicographic within one
    size); filling is upward-closed, so a filling set is minimal exactly when
    it contains no smaller one already found.  Guarded against large graphs.
    """
    from itertools import combinations

    n = len(g.vertices)
    if n > EXACT_SEARCH_LIMIT:
        raise TooLargeError(n)
    minimal: list[frozenset[str]] = []
    for size in range(n + 1):
        for combo in combinations(g.vertices, size):
            s = frozenset(combo)
            if any(m <= s for m in minimal):
                continue
            if is_filling(g, s, mode):
                minimal.append(s)
    return minimal


def min_p_filling(g: DepGraph) -> frozenset[str]:
    """A minimum partial-mode filling set: one vertex per source component."""
    return frozenset(comp[0] for comp in g.condense().source_components())


def suggest_additional(g: DepGraph, provided: Iterable[str], mode: Mode) -> frozenset[str]:
    """A small set of extra inputs that makes ``provided`` filling.

    Complete mode: the missing sources, then a greedy cover of the cycles not
    yet hit.  Partial mode: the smallest vertex of each source component not
    yet hit.  Empty exactly when the input already fills.  Greedy, so not
    guaranteed minimum.
    """
    s = _checked(g, provided)
    if mode == "partial":
        return frozenset(
            comp[0] for comp in g.condense().source_components() if not (set(comp) & s)
        )
    extra = set(g.sources() - s)
    cycles = [c.members for c in g.minimal_cycles()]
    while True:
        uncovered = [c for c in cycles if not (c & (s | extra))]
        if not uncovered:
            return frozenset(extra)
        extra.add(_best_cycle_cover_pick(uncovered))


def _best_cycle_cover_pick(uncovered: list[frozenset[str]]) -> str:
    # Vertex on the most uncovered cycles; max() keeps the first maximum and
    # the candidates are sorted, so ties fall to the smallest vertex id.
    candidates = sorted({v for c in uncovered for v in c})
    counts = {v: sum(1 for c in uncovered if v in c) for v in candidates}
    return max(candidates, key=counts.__getitem__)


def suggest_by_rule_modes(
    g: DepGraph, provided: Iterable[str], modes: Mapping[str, Mode]
) -> frozenset[str]:
    """Suggestion heuristic for graphs whose vertices mix determination modes.

    Adds the missing sources first, then greedily the vertex whose addition
    grows the per-rule closure the most (ties by vertex order).
    """
    s = _checked(g, provided)
    extra = set(g.sources() - s)
    while True:
        trace = closure_by_rule_modes(g, s | extra, modes)
        if trace.filled:
            return frozenset(extra)
        gain = {}
        for v in g.vertices:
            if v in s or v in extra or v in trace.fixed_point:
                continue
            bigger = closure_by_rule_modes(g, s | extra | {v}, modes)
            gain[v] = len(bigger.fixed_point)
        best = max(sorted(gain), key=lambda v: gain[v])
        extra.add(best)


@dataclass(frozen=True)
class AnalysisReport:
    """Structural summary of one dependency graph.

    ``exact_min_fillings`` (complete mode) is present only when the exhaustive
    search ran; ``min_p_filling_cardinality`` always equals the number of
    source components.
    """

    sources: tuple[str, ...]
    minimal_cycles: tuple[Cycle, ...]
    condensation: Condensation
    source_components: tuple[tuple[str, ...], ...]
    greedy_min_filling: tuple[str, ...]
    exact_min_fillings: tuple[tuple[str, ...], ...] | None
    min_p_filling: tuple[str, ...]
    min_p_filling_cardinality: int

    def to_json_dict(self) -> dict:
        doc: dict[str, object] = {
            "sources": list(self.sources),
            "minimal_cycles": [c.to_json_dict() for c in self.minimal_cycles],
            "sccs": [list(c) for c in self.condensation.components],
            "source_components": [list(c) for c in self.source_components],
            "greedy_min_filling": list(self.greedy_min_filling),
        }
        if self.exact_min_fillings is not None:
            doc["exact_min_fillings"] = [
                list(s) for s in self.exact_min_fillings
            ]
        doc["min_p_filling"] = list(self.min_p_filling)
        doc["min_p_filling_cardinality"] = self.min_p_filling_cardinality
        return doc


def analyze(g: DepGraph, include_exact: bool = False) -> AnalysisReport:
    """Run the full structural analysis over one graph."""
    condensation = g.condense()
    source_components = condensation.source_components()
    exact: tuple[tuple[str, ...], ...] | None = None
    if include_exact:
        found = exact_min_fillings(g, "complete")
        exact = tuple(tuple(sorted(s)) for s in found)
    return AnalysisReport(
        sources=tuple(sorted(g.sources())),
        minimal_cycles=tuple(g.minimal_cycles()),
        condensation=condensation,
        source_components=source_components,
        greedy_min_filling=tuple(sorted(greedy_min_filling(g))),
        exact_min_fillings=exact,
        min_p_filling=tuple(sorted(min_p_filling(g))),
        min_p_filling_cardinality=len(source_components),
    )


def check_document(g: DepGraph, provided: Iterable[str], mode: Mode) -> dict:
    """Verdict/stages/suggestions as one JSON-ready document.

    Shared by the check command and the check endpoint so both emit
    identical payloads.
    """
    trace = closure(g, provided, mode)
    return {
        "filling": trace.filled,
        "stages": trace.stage_lists(),
        "suggestions": sorted(suggest_additional(g, provided, mode)),
    }
