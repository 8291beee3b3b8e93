"""Builds the optimal k-in-out graphs S_k, their canonical Hamiltonian
paths and their canonical drawings.

The family is defined by explicit edge formulas with separate even and
odd cases for k >= 4; k = 1, 2, 3 are special graphs.  Incoming vertices
are i_j = 2j-1.  Every public result is validated structurally before it
is returned, so a transcription slip in a formula fails loudly instead of
propagating.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import DiGraph, GraphError, InOutGraph


@dataclass(frozen=True)
class CanonicalPath:
    """The unique Hamiltonian path from i_j to o_j in S_k."""

    j: int
    vertices: tuple[int, ...]

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.vertices, self.vertices[1:]))


@dataclass
class Layout:
    """Straight-line drawing: integer grid position per vertex."""

    coords: dict[int, tuple[int, int]]
    crossings: int = 0


def _undirected(arcs: set[tuple[int, int]], a: int, b: int) -> None:
    arcs.add((a, b))
    arcs.add((b, a))


@lru_cache(maxsize=None)
def build_inout(k: int) -> InOutGraph:
    """Construct S_k: order 2k-1 (6 for k=3), minimal arc count.

    Arc counts come out as 0, 4, 10 for k = 1, 2, 3, then 4k-4 for even
    k and 4k-3 for odd k.  Results are immutable and cached.
    """
    if k < 1:
        raise GraphError(f"invalid k: {k}")
    if k == 1:
        return InOutGraph(DiGraph(1, frozenset()), (1,), (1,))
    if k == 2:
        g = DiGraph.from_arcs(3, [(1, 2), (2, 1), (2, 3), (3, 2)])
        return InOutGraph(g, (1, 3), (3, 1))
    if k == 3:
        arcs = [(v, v + 1) for v in range(1, 6)]
        arcs += [(1, 5), (2, 1), (3, 2), (5, 1), (6, 4)]
        return InOutGraph(DiGraph.from_arcs(6, arcs), (1, 3, 6), (6, 4, 3))

    arcs: set[tuple[int, int]] = set()
    if k % 2 == 0:
        for i in range(1, (k - 2) // 2 + 1):
            _undirected(arcs, 4 * i - 2, 4 * i - 1)
            _undirected(arcs, 4 * i - 1, 4 * i)
            _undirected(arcs, 4 * i, 4 * i + 1)
        for i in range(1, (k - 4) // 2 + 1):
            arcs.add((4 * i - 2, 4 * i + 5))
            arcs.add((4 * i + 1, 4 * i + 2))
        arcs.update(
            {(1, 2), (2 * k - 6, 2 * k - 1), (2 * k - 3, 2 * k - 2),
             (2 * k - 2, 1), (2 * k - 2, 5), (2 * k - 1, 2 * k - 2)}
        )
    else:
        for i in range(1, (k - 1) // 2 + 1):
            _undirected(arcs, 4 * i - 2, 4 * i - 1)
            _undirected(arcs, 4 * i - 1, 4 * i)
            _undirected(arcs, 4 * i, 4 * i + 1)
        for i in range(1, (k - 3) // 2 + 1):
            arcs.add((4 * i - 2, 4 * i + 5))
            arcs.add((4 * i + 1, 4 * i + 2))
        arcs.update({(1, 2), (2 * k - 4, 1), (2 * k - 2, 5)})

    incoming = tuple(2 * j - 1 for j in range(1, k + 1))
    out: dict[int, int] = {}
    for j in range(1, (k - 3) // 2 + 1):
        out[2 * j] = 4 * j + 3
        out[2 * j + 1] = 4 * j - 3
    if k % 2 == 0:
        out[1] = 3
        out[k - 2] = 2 * k - 1
        out[k - 1] = 2 * k - 7
        out[k] = 2 * k - 3
    else:
        out[1] = 2 * k - 1
        out[k - 1] = 3
        out[k] = 2 * k - 5
    outgoing = tuple(out[j] for j in range(1, k + 1))
    return InOutGraph(DiGraph.from_arcs(2 * k - 1, sorted(arcs)), incoming, outgoing)


_PATHS_K3 = {
    1: (1, 2, 3, 4, 5, 6),
    2: (3, 2, 1, 5, 6, 4),
    3: (6, 4, 5, 1, 2, 3),
}


def _descending_block(m: int) -> list[int]:
    # 4m+1, 4m, 4m-1, 4m-2: one pole walked against vertex order
    return [4 * m + 1, 4 * m, 4 * m - 1, 4 * m - 2]


def _path_vertices(k: int, j: int) -> list[int]:
    if k == 1:
        return [1]
    if k == 2:
        return [1, 2, 3] if j == 1 else [3, 2, 1]
    if k == 3:
        return list(_PATHS_K3[j])

    if k % 2 == 0:
        half = (k - 2) // 2
        if j == 1:
            seq = [1, 2]
            for m in range(2, half + 1):
                seq += _descending_block(m)
            return seq + [2 * k - 1, 2 * k - 2, 5, 4, 3]
        if j == k:
            return [2 * k - 1, 2 * k - 2, 1] + list(range(2, 2 * k - 2))
        if j == k - 2:
            seq = [2 * k - 5, 2 * k - 4, 2 * k - 3, 2 * k - 2, 1]
            return seq + list(range(2, 2 * k - 5)) + [2 * k - 1]
        if j % 2 == 0:
            jj = j // 2
            seq = [4 * jj - 1, 4 * jj, 4 * jj + 1, 4 * jj + 2]
            for m in range(jj + 2, half + 1):
                seq += _descending_block(m)
            seq += [2 * k - 1, 2 * k - 2, 1]
            seq += list(range(2, 4 * jj - 1))
            return seq + [4 * jj + 5, 4 * jj + 4, 4 * jj + 3]
        jj = (j - 1) // 2
        seq = [4 * jj + 1, 4 * jj, 4 * jj - 1, 4 * jj - 2]
        for m in range(jj + 1, half + 1):
            seq += _descending_block(m)
        seq += [2 * k - 1, 2 * k - 2, 1]
        return seq + list(range(2, 4 * jj - 2))

    half = (k - 1) // 2
    if j == 1:
        return list(range(1, 2 * k))
    if j == k - 1:
        # uses the same descending 4m+1..4m-2 blocks as every other case;
        # canonical_path validates the result against the arc set
        seq = [2 * k - 3, 2 * k - 4, 1, 2]
        for m in range(2, (k - 3) // 2 + 1):
            seq += _descending_block(m)
        return seq + [2 * k - 1, 2 * k - 2, 5, 4, 3]
    if j % 2 == 0:
        jj = j // 2
        seq = [4 * jj - 1, 4 * jj, 4 * jj + 1, 4 * jj + 2]
        for m in range(jj + 2, half + 1):
            seq += _descending_block(m)
        seq += [1]
        seq += list(range(2, 4 * jj - 1))
        return seq + [4 * jj + 5, 4 * jj + 4, 4 * jj + 3]
    jj = (j - 1) // 2
    seq = [4 * jj + 1, 4 * jj, 4 * jj - 1, 4 * jj - 2]
    for m in range(jj + 1, half + 1):
        seq += _descending_block(m)
    seq += [1]
    return seq + list(range(2, 4 * jj - 2))


def canonical_path(k: int, j: int) -> CanonicalPath:
    """The explicit Hamiltonian path from i_j to o_j in S_k.

    The result is checked against build_inout(k): every vertex exactly
    once, consecutive vertices joined by an arc, correct endpoints.
    """
    if k < 1:
        raise GraphError(f"invalid k: {k}")
    if not 1 <= j <= k:
        raise GraphError(f"path index {j} outside 1..{k}")
    g = build_inout(k)
    seq = _path_vertices(k, j)
    if sorted(seq) != list(range(1, g.graph.order + 1)):
        raise GraphError(f"path recipe for k={k}, j={j} is not Hamiltonian")
    if seq[0] != g.incoming[j - 1] or seq[-1] != g.outgoing[j - 1]:
        raise GraphError(f"path recipe for k={k}, j={j} has wrong endpoints")
    for u, w in zip(seq, seq[1:]):
        if not g.graph.has_arc(u, w):
            raise GraphError(f"path recipe for k={k}, j={j} uses missing arc ({u},{w})")
    return CanonicalPath(j, tuple(seq))


def layout(k: int) -> Layout:
    """Canonical drawing of S_k on an integer grid.

    Poles (the 4-vertex undirected columns) sit at x = 2, 4, ... with
    every second pole flipped vertically; the handful of vertices outside
    the poles are placed around the body so that the straight-line
    crossing count is 0, except exactly 1 when k = 1 mod 4 (k >= 5),
    where the pole parity leaves one unavoidable crossing.
    """
    if k < 1:
        raise GraphError(f"invalid k: {k}")
    if k == 1:
        coords = {1: (0, 0)}
    elif k == 2:
        coords = {1: (0, 0), 2: (2, 0), 3: (4, 0)}
    elif k == 3:
        coords = {1: (0, 0), 2: (2, 0), 3: (3, 2), 4: (2, 4), 5: (0, 3), 6: (2, 6)}
    else:
        poles = (k - 2) // 2 if k % 2 == 0 else (k - 1) // 2
        coords = {}
        for i in range(1, poles + 1):
            first = 4 * i - 2
            heights = (0, 1, 2, 3) if i % 2 == 1 else (3, 2, 1, 0)
            for t in range(4):
                coords[first + t] = (2 * i, heights[t])
        if k % 2 == 0:
            if poles % 2 == 1:
                coords[1] = (0, 4)
                coords[2 * k - 2] = (2 * poles if poles > 1 else 3, 6)
                coords[2 * k - 1] = (2 * poles + 2, 6)
            else:
                coords[1] = (0, 0)
                coords[2 * k - 2] = (-2, -1)
                coords[2 * k - 1] = (2 * poles + 2, -2)
        else:
            # 2k-2 overhangs the last pole so its long edge back to vertex 5
            # clears the body instead of slicing through every column.
            coords[2 * k - 2] = (2 * poles + 2, 5)
            coords[1] = (poles + 1, -2) if poles % 2 == 1 else (0, 4)
    lay = Layout(coords)
    lay.crossings = crossing_count(lay, build_inout(k).graph)
    return lay


def _orient(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    d = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return (d > 0) - (d < 0)


def _on_open_segment(p: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> bool:
    if _orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and \
        min(a[1], b[1]) <= p[1] <= max(a[1], b[1]) and p != a and p != b


def crossing_count(lay: Layout, g: DiGraph) -> int:
    """Count pairs of drawn segments whose open interiors intersect.

    The two arcs of an undirected pair count as a single drawn segment.
    Integer coordinates make every intersection test exact.  A degenerate
    layout (coincident vertices, or a vertex inside a segment) is refused.
    """
    pos = lay.coords
    for v in range(1, g.order + 1):
        if v not in pos:
            raise GraphError(f"layout missing vertex {v}")
    if len({pos[v] for v in range(1, g.order + 1)}) != g.order:
        raise GraphError("degenerate layout: coincident vertices")
    segs = g.drawn_segments()
    for a, b in segs:
        for v in range(1, g.order + 1):
            if v != a and v != b and _on_open_segment(pos[v], pos[a], pos[b]):
                raise GraphError(
                    f"degenerate layout: vertex {v} lies on segment ({a},{b})")
    crossings = 0
    for idx, (a, b) in enumerate(segs):
        pa, pb = pos[a], pos[b]
        for c, d in segs[idx + 1:]:
            if a in (c, d) or b in (c, d):
                continue
            pc, pd = pos[c], pos[d]
            if _orient(pa, pb, pc) * _orient(pa, pb, pd) < 0 and \
                    _orient(pc, pd, pa) * _orient(pc, pd, pb) < 0:
                crossings += 1
    return crossings
