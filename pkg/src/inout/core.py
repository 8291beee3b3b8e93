"""Directed-graph substrate shared by every other module.

Vertices are 1-based integers so the construction formulas can be used
verbatim.  An undirected edge is always stored as the two opposite arcs;
there is no separate undirected-edge type.  Graph values are immutable
after construction and all operations here are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable


class GraphError(ValueError):
    """Malformed graph, or an operation applied to an unsuitable graph."""


class ParseError(GraphError):
    """Text input could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class DiGraph:
    """Immutable directed graph on vertices 1..order."""

    order: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.order < 1:
            raise GraphError("order must be at least 1")
        for u, w in self.arcs:
            if u == w:
                raise GraphError(f"self-loop ({u},{w}) not allowed")
            if not (1 <= u <= self.order and 1 <= w <= self.order):
                raise GraphError(f"arc ({u},{w}) outside 1..{self.order}")

    @classmethod
    def from_arcs(cls, order: int, arcs: Iterable[tuple[int, int]]) -> DiGraph:
        return cls(order, frozenset((int(u), int(w)) for u, w in arcs))

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        """Arcs in a fixed order, for deterministic output files."""
        return sorted(self.arcs)

    def has_arc(self, u: int, w: int) -> bool:
        return (u, w) in self.arcs

    @cached_property
    def _succ(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in range(1, self.order + 1)}
        for u, w in sorted(self.arcs):
            out[u].append(w)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def _pred(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {v: [] for v in range(1, self.order + 1)}
        for u, w in sorted(self.arcs):
            inc[w].append(u)
        return {v: tuple(us) for v, us in inc.items()}

    def successors(self, u: int) -> tuple[int, ...]:
        return self._succ[u]

    def predecessors(self, w: int) -> tuple[int, ...]:
        return self._pred[w]

    @cached_property
    def undirected_adjacency(self) -> dict[int, tuple[int, ...]]:
        """Neighbours when every arc is read as an undirected edge."""
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.order + 1)}
        for u, w in self.arcs:
            adj[u].add(w)
            adj[w].add(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def drawn_segments(self) -> list[tuple[int, int]]:
        """Arcs collapsed to undirected segments: (u,w) and (w,u) are one."""
        return sorted({(min(u, w), max(u, w)) for u, w in self.arcs})

    def is_weakly_connected(self) -> bool:
        adj = self.undirected_adjacency
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.order


@dataclass(frozen=True)
class InOutGraph:
    """A directed graph with ordered incoming and outgoing vertex labels.

    ``incoming[j-1]`` is the j-th incoming vertex i_j and likewise for
    ``outgoing``.  The two lists may overlap but entries within each list
    are distinct.
    """

    graph: DiGraph
    incoming: tuple[int, ...]
    outgoing: tuple[int, ...]

    def __post_init__(self):
        if len(self.incoming) != len(self.outgoing):
            raise GraphError("incoming and outgoing lists must have equal length")
        if not self.incoming:
            raise GraphError("k must be at least 1")
        for name, vs in (("incoming", self.incoming), ("outgoing", self.outgoing)):
            if len(set(vs)) != len(vs):
                raise GraphError(f"duplicate vertex in {name} list")
            for v in vs:
                if not (1 <= v <= self.graph.order):
                    raise GraphError(f"{name} vertex {v} outside 1..{self.graph.order}")

    @property
    def k(self) -> int:
        return len(self.incoming)


@dataclass(frozen=True)
class VertexPartition:
    """Four-way split of the vertices of an in-out graph.

    incoming_only / outgoing_only / both / neither correspond to the sets
    I, O, B, N used in the edge-bound argument; a, b, c are their sizes
    (a counts incoming-only, which equals outgoing-only on any valid
    candidate).
    """

    incoming_only: frozenset[int]
    outgoing_only: frozenset[int]
    both: frozenset[int]
    neither: frozenset[int]

    @property
    def a(self) -> int:
        return len(self.incoming_only)

    @property
    def b(self) -> int:
        return len(self.both)

    @property
    def c(self) -> int:
        return len(self.neither)


def classify_vertices(g: InOutGraph) -> VertexPartition:
    """Partition vertices into incoming-only, outgoing-only, both, neither."""
    inc = set(g.incoming)
    out = set(g.outgoing)
    allv = set(range(1, g.graph.order + 1))
    both = inc & out
    return VertexPartition(
        incoming_only=frozenset(inc - out),
        outgoing_only=frozenset(out - inc),
        both=frozenset(both),
        neither=frozenset(allv - inc - out),
    )


def bipartition(g: DiGraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Two-colour the underlying undirected graph.

    Returns (V1, V2) with vertex 1 in V1, or None if the graph is not
    bipartite.  Raises GraphError on a disconnected graph, where the
    colouring would be ambiguous.
    """
    adj = g.undirected_adjacency
    colour = {1: 0}
    queue = [1]
    while queue:
        v = queue.pop()
        for w in adj[v]:
            if w not in colour:
                colour[w] = colour[v] ^ 1
                queue.append(w)
            elif colour[w] == colour[v]:
                return None
    if len(colour) != g.order:
        raise GraphError("disconnected")
    v1 = frozenset(v for v, c in colour.items() if c == 0)
    v2 = frozenset(v for v, c in colour.items() if c == 1)
    return v1, v2


def satisfies_lemma1(g: InOutGraph) -> bool:
    """Bipartite shortcut certifying the single-visit condition.

    True iff the underlying graph is bipartite with parts sized |V1| =
    |V2| + 1 and every incoming and outgoing vertex in V1.  Either part
    may play the role of V1.  A disconnected graph is never certified.
    """
    try:
        parts = bipartition(g.graph)
    except GraphError:
        return False
    if parts is None:
        return False
    labelled = set(g.incoming) | set(g.outgoing)
    for v1, v2 in (parts, parts[::-1]):
        if len(v1) == len(v2) + 1 and labelled <= v1:
            return True
    return False


def write_graph(g: InOutGraph) -> str:
    """Serialize to the plain-text graph format (see docs/formats.md)."""
    lines = [f"{g.graph.order} {g.k}"]
    lines.append(" ".join(str(v) for v in g.incoming))
    lines.append(" ".join(str(v) for v in g.outgoing))
    for u, w in g.graph.sorted_arcs():
        lines.append(f"{u} {w}")
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> InOutGraph:
    """Parse the plain-text graph format; '#' starts a comment line."""
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty input")
    it = iter(rows)

    def ints(fields: list[str], lineno: int, expect: int | None = None) -> list[int]:
        if expect is not None and len(fields) != expect:
            raise ParseError(f"expected {expect} integers, got {len(fields)}", lineno)
        try:
            return [int(f) for f in fields]
        except ValueError:
            raise ParseError(f"not an integer: {' '.join(fields)}", lineno) from None

    lineno, fields = next(it)
    order, k = ints(fields, lineno, expect=2)
    try:
        lineno, fields = next(it)
        incoming = ints(fields, lineno, expect=k)
        lineno, fields = next(it)
        outgoing = ints(fields, lineno, expect=k)
    except StopIteration:
        raise ParseError("missing incoming/outgoing lines") from None
    arcs = []
    for lineno, fields in it:
        u, w = ints(fields, lineno, expect=2)
        arcs.append((u, w))
    try:
        return InOutGraph(DiGraph.from_arcs(order, arcs), tuple(incoming), tuple(outgoing))
    except GraphError as exc:
        raise ParseError(str(exc)) from exc
