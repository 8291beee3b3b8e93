"""Generalized TSP instances and their conversion to sparse asymmetric TSP.

Each group of size k is replaced by the canonical k-in-out gadget with
zero-weight internal arcs; an original arc (u, w) becomes an arc from the
exit vertex paired with u's position to the entry vertex of w's position.
No artificial large weights are ever introduced: the converted instance
is sparse and absent arcs are simply unusable.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product

import numpy as np

from .construct import build_inout
from .core import GraphError, ParseError
from .verify import OracleLimitError


@dataclass(frozen=True)
class GtspInstance:
    """Weighted directed graph with vertices partitioned into groups.

    `groups[i]` lists the members of group i in input order; a vertex's
    1-based rank in that list is its position, which the conversion map
    relies on.  `dropped_arcs` records intra-group arcs removed by the
    parser (a tour visits one vertex per group, so they are unusable).
    """

    n: int
    groups: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, int, int], ...]
    name: str = "gtsp"
    dropped_arcs: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("instance needs at least one vertex")
        seen: set[int] = set()
        for gi, members in enumerate(self.groups):
            if not members:
                raise GraphError(f"group {gi + 1} is empty")
            for v in members:
                if not 1 <= v <= self.n:
                    raise GraphError(f"group vertex {v} outside 1..{self.n}")
                if v in seen:
                    raise GraphError(f"vertex {v} appears in two groups")
                seen.add(v)
        if len(seen) != self.n:
            missing = sorted(set(range(1, self.n + 1)) - seen)
            raise GraphError(f"vertices not covered by any group: {missing}")
        arcset: set[tuple[int, int]] = set()
        for u, w, wt in self.arcs:
            if not (1 <= u <= self.n and 1 <= w <= self.n) or u == w:
                raise GraphError(f"bad arc ({u},{w})")
            if wt < 0:
                raise GraphError(f"negative weight on arc ({u},{w})")
            if self.group_of[u] == self.group_of[w]:
                raise GraphError(f"intra-group arc ({u},{w}) not allowed")
            if (u, w) in arcset:
                raise GraphError(f"duplicate arc ({u},{w})")
            arcset.add((u, w))

    @property
    def g(self) -> int:
        return len(self.groups)

    @cached_property
    def group_of(self) -> dict[int, int]:
        return {v: gi for gi, members in enumerate(self.groups) for v in members}

    @cached_property
    def position_of(self) -> dict[int, int]:
        return {v: s for members in self.groups
                for s, v in enumerate(members, start=1)}

    @cached_property
    def weight(self) -> dict[tuple[int, int], int]:
        return {(u, w): wt for u, w, wt in self.arcs}

    @property
    def max_weight(self) -> int:
        return max((wt for _, _, wt in self.arcs), default=0)


@dataclass(frozen=True)
class AtspInstance:
    """Sparse weighted arc list; an absent arc is unusable, not expensive."""

    order: int
    arcs: tuple[tuple[int, int, int], ...]
    name: str = "atsp"

    def __post_init__(self):
        seen: set[tuple[int, int]] = set()
        for u, w, wt in self.arcs:
            if not (1 <= u <= self.order and 1 <= w <= self.order) or u == w:
                raise GraphError(f"bad arc ({u},{w})")
            if wt < 0:
                raise GraphError(f"negative weight on arc ({u},{w})")
            if (u, w) in seen:
                raise GraphError(f"duplicate arc ({u},{w})")
            seen.add((u, w))

    @cached_property
    def weight(self) -> dict[tuple[int, int], int]:
        return {(u, w): wt for u, w, wt in self.arcs}

    @property
    def max_weight(self) -> int:
        return max((wt for _, _, wt in self.arcs), default=0)


@dataclass(frozen=True)
class ConversionMap:
    """Bidirectional bookkeeping between a GTSP instance and its conversion.

    vertex_entries rows are (group, position, original vertex, entry
    vertex of the gadget, exit vertex).  arc_map is a bijection between
    inter-gadget arcs of the converted instance and original arcs.
    """

    n: int
    order: int
    offsets: tuple[int, ...]
    ks: tuple[int, ...]
    vertex_entries: tuple[tuple[int, int, int, int, int], ...]
    arc_map: dict[tuple[int, int], tuple[int, int, int]]
    warnings: tuple[str, ...] = ()

    @property
    def g(self) -> int:
        return len(self.offsets)

    @cached_property
    def entry_exit(self) -> dict[tuple[int, int], tuple[int, int]]:
        """(group, position) -> (entry vertex, exit vertex), global ids."""
        return {(gi, s): (vin, vout)
                for gi, s, _orig, vin, vout in self.vertex_entries}

    @cached_property
    def original_vertex(self) -> dict[tuple[int, int], int]:
        return {(gi, s): orig for gi, s, orig, _vin, _vout in self.vertex_entries}

    def gadget_vertices(self, gi: int) -> range:
        size = 2 * self.ks[gi] - 1 if self.ks[gi] != 3 else 6
        return range(self.offsets[gi] + 1, self.offsets[gi] + size + 1)

    @cached_property
    def internal_arcs(self) -> frozenset[tuple[int, int]]:
        arcs: set[tuple[int, int]] = set()
        for gi, (off, k) in enumerate(zip(self.offsets, self.ks)):
            for u, w in build_inout(k).graph.arcs:
                arcs.add((u + off, w + off))
        return frozenset(arcs)

    def group_of_vertex(self, v: int) -> int:
        for gi in range(self.g):
            if v in self.gadget_vertices(gi):
                return gi
        raise GraphError(f"vertex {v} outside every gadget")


def convert(inst: GtspInstance) -> tuple[AtspInstance, ConversionMap]:
    """Replace every group by its in-out gadget and remap the arcs.

    Internal gadget arcs get weight 0; every original arc keeps its
    weight, so the converted maximum weight equals the original one.
    The converted order is 2n - g + m with m the number of size-3 groups.
    """
    offsets: list[int] = []
    ks: list[int] = []
    vertex_entries: list[tuple[int, int, int, int, int]] = []
    arcs: list[tuple[int, int, int]] = []
    off = 0
    for gi, members in enumerate(inst.groups):
        k = len(members)
        gadget = build_inout(k)
        offsets.append(off)
        ks.append(k)
        for s, orig in enumerate(members, start=1):
            vin = gadget.incoming[s - 1] + off
            vout = gadget.outgoing[s - 1] + off
            vertex_entries.append((gi, s, orig, vin, vout))
        for u, w in gadget.graph.sorted_arcs():
            arcs.append((u + off, w + off, 0))
        off += gadget.graph.order

    entry = {}
    exit_ = {}
    for gi, s, orig, vin, vout in vertex_entries:
        entry[orig] = vin
        exit_[orig] = vout
    arc_map: dict[tuple[int, int], tuple[int, int, int]] = {}
    for u, w, wt in inst.arcs:
        conv = (exit_[u], entry[w])
        arcs.append((conv[0], conv[1], wt))
        arc_map[conv] = (u, w, wt)

    warnings: list[str] = []
    if inst.g == 1:
        warnings.append("instance has a single group: no tour can exist")
    else:
        gadj: dict[int, set[int]] = {gi: set() for gi in range(inst.g)}
        gradj: dict[int, set[int]] = {gi: set() for gi in range(inst.g)}
        for u, w, _ in inst.arcs:
            gadj[inst.group_of[u]].add(inst.group_of[w])
            gradj[inst.group_of[w]].add(inst.group_of[u])
        for adj in (gadj, gradj):
            seen = {0}
            stack = [0]
            while stack:
                gi = stack.pop()
                for gj in adj[gi]:
                    if gj not in seen:
                        seen.add(gj)
                        stack.append(gj)
            if len(seen) != inst.g:
                warnings.append(
                    "groups are not mutually reachable: converted instance "
                    "will have no tour")
                break

    cmap = ConversionMap(
        n=inst.n, order=off, offsets=tuple(offsets), ks=tuple(ks),
        vertex_entries=tuple(vertex_entries), arc_map=arc_map,
        warnings=tuple(warnings),
    )
    atsp = AtspInstance(order=off, arcs=tuple(arcs), name=inst.name + "-atsp")
    return atsp, cmap


@dataclass(frozen=True)
class GtspTour:
    """Cyclic visit order over original vertices, one per group."""

    vertices: tuple[int, ...]
    cost: int


def map_tour_back(tour, cmap: ConversionMap) -> GtspTour:
    """Translate a Hamiltonian cycle of the converted instance back.

    The inter-gadget arcs of the cycle, taken in cyclic order, map to
    original arcs whose heads form the GTSP tour; the cost carries over
    exactly because internal arcs weigh 0.
    """
    tour = [int(v) for v in tour]
    if sorted(tour) != list(range(1, cmap.order + 1)):
        raise GraphError("invalid tour: not a permutation of the converted vertices")
    internal = cmap.internal_arcs
    crossing: list[tuple[int, int, int]] = []
    for u, w in zip(tour, tour[1:] + tour[:1]):
        if (u, w) in internal:
            continue
        orig = cmap.arc_map.get((u, w))
        if orig is None:
            raise GraphError(f"invalid tour: arc ({u},{w}) not in the instance")
        crossing.append(orig)
    if len(crossing) != cmap.g:
        raise GraphError(
            f"invalid tour: {len(crossing)} inter-gadget arcs for {cmap.g} groups")
    for (_, head, _), (tail2, _, _) in zip(crossing, crossing[1:] + crossing[:1]):
        if head != tail2:
            raise GraphError(
                "invalid tour: gadget entered and left at unpaired positions")
    vertices = tuple(head for _, head, _ in crossing)
    if len(set(vertices)) != cmap.g:
        raise GraphError("invalid tour: group visited twice")
    return GtspTour(vertices=vertices, cost=sum(wt for _, _, wt in crossing))


def brute_force_gtsp(inst: GtspInstance, *, max_n: int = 10
                     ) -> tuple[int, tuple[int, ...]] | None:
    """Exact GTSP optimum by enumerating group orders and representatives.

    Returns (cost, tour) or None when no feasible tour exists.
    """
    if inst.n > max_n:
        raise OracleLimitError(f"instance too large for oracle: n {inst.n} > {max_n}")
    if inst.g < 2:
        return None
    weight = inst.weight
    best: tuple[int, tuple[int, ...]] | None = None
    rest = list(range(1, inst.g))
    for order in permutations(rest):
        group_seq = (0,) + order
        for reps in product(*(inst.groups[gi] for gi in group_seq)):
            cost = 0
            ok = True
            for u, w in zip(reps, reps[1:] + reps[:1]):
                wt = weight.get((u, w))
                if wt is None:
                    ok = False
                    break
                cost += wt
            if ok and (best is None or (cost, reps) < best):
                best = (cost, reps)
    return best


def brute_force_atsp(inst: AtspInstance, *, max_order: int = 18
                     ) -> tuple[int, tuple[int, ...]] | None:
    """Exact ATSP optimum via Held-Karp over vertex subsets.

    Integer weights stay exact in float64 at these sizes.  Returns
    (cost, tour starting at vertex 1) or None when no Hamiltonian cycle
    exists in the sparse arc set.
    """
    n = inst.order
    if n > max_order:
        raise OracleLimitError(
            f"instance too large for oracle: order {n} > {max_order}")
    if n < 2:
        return None
    wmat = np.full((n, n), np.inf)
    for u, w, wt in inst.arcs:
        wmat[u - 1, w - 1] = wt
    size = 1 << n
    dp = np.full((size, n), np.inf)
    dp[1, 0] = 0.0
    parent = np.full((size, n), -1, dtype=np.int8)
    for mask in range(1, size, 2):
        row = dp[mask]
        if not np.isfinite(row).any():
            continue
        totals = row[:, None] + wmat
        best = totals.min(axis=0)
        arg = totals.argmin(axis=0)
        for j in range(n):
            if mask >> j & 1:
                continue
            bj = best[j]
            if bj == np.inf:
                continue
            nm = mask | (1 << j)
            if bj < dp[nm, j]:
                dp[nm, j] = bj
                parent[nm, j] = arg[j]
    full = size - 1
    closing = dp[full] + wmat[:, 0]
    j = int(np.argmin(closing))
    if not np.isfinite(closing[j]):
        return None
    cost = int(closing[j])
    seq = []
    mask = full
    while j != 0 or mask != 1:
        seq.append(j)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    seq.append(0)
    seq.reverse()
    return cost, tuple(v + 1 for v in seq)


def random_instance(seed: int, n: int, g: int, *, density: float = 0.6,
                    max_weight: int = 100, name: str | None = None
                    ) -> GtspInstance:
    """Seeded random GTSP instance: random partition, random inter-group arcs."""
    if not 1 <= g <= n:
        raise GraphError("need 1 <= g <= n")
    rng = random.Random(seed)
    vertices = list(range(1, n + 1))
    rng.shuffle(vertices)
    sizes = [1] * g
    for _ in range(n - g):
        sizes[rng.randrange(g)] += 1
    groups: list[tuple[int, ...]] = []
    pos = 0
    for s in sizes:
        groups.append(tuple(vertices[pos:pos + s]))
        pos += s
    gof = {v: gi for gi, members in enumerate(groups) for v in members}
    arcs = []
    for u in range(1, n + 1):
        for w in range(1, n + 1):
            if u != w and gof[u] != gof[w] and rng.random() < density:
                arcs.append((u, w, rng.randint(0, max_weight)))
    return GtspInstance(n=n, groups=tuple(groups), arcs=tuple(arcs),
                        name=name or f"random-{seed}")


# ---------------------------------------------------------------------------
# File formats (see docs/formats.md).
# ---------------------------------------------------------------------------


def parse_gtsp(text: str) -> GtspInstance:
    """Parse a TSPLIB-style GTSP file.

    Accepts an EDGE_DATA_SECTION of explicit weighted arcs (u w weight,
    -1 terminated) or a full-matrix EDGE_WEIGHT_SECTION, plus the usual
    GTSP_SET_SECTION of -1 terminated member lists.  Intra-group arcs are
    dropped and reported via the instance's dropped_arcs field.
    """
    lines = text.splitlines()
    header: dict[str, str] = {}
    arcs: list[tuple[int, int, int, int]] = []  # (u, w, wt, line)
    matrix: list[int] | None = None
    sets: list[tuple[int, ...]] | None = None
    i = 0

    def intval(tok: str, lineno: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}", lineno) from None

    while i < len(lines):
        lineno = i + 1
        line = lines[i].strip()
        i += 1
        if not line or line == "EOF":
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            header[key.strip().upper()] = value.strip()
            continue
        section = line.split()[0].upper()
        if section == "EDGE_DATA_SECTION":
            while i < len(lines):
                lineno = i + 1
                row = lines[i].strip()
                if not row:
                    i += 1
                    continue
                if row == "-1" or row.endswith("_SECTION") or row == "EOF":
                    break
                fields = row.split()
                if len(fields) != 3:
                    raise ParseError("arc line must be 'u w weight'", lineno)
                u, w, wt = (intval(f, lineno) for f in fields)
                arcs.append((u, w, wt, lineno))
                i += 1
            if i < len(lines) and lines[i].strip() == "-1":
                i += 1
        elif section == "EDGE_WEIGHT_SECTION":
            n = intval(header.get("DIMENSION", "0"), lineno)
            if n < 1:
                raise ParseError("DIMENSION must precede EDGE_WEIGHT_SECTION", lineno)
            matrix = []
            while i < len(lines) and len(matrix) < n * n:
                lineno = i + 1
                for tok in lines[i].split():
                    matrix.append(intval(tok, lineno))
                i += 1
            if len(matrix) < n * n:
                raise ParseError(f"matrix needs {n * n} entries, got {len(matrix)}",
                                 lineno)
        elif section == "GTSP_SET_SECTION":
            g = intval(header.get("GTSP_SETS", "0"), lineno)
            if g < 1:
                raise ParseError("GTSP_SETS must precede GTSP_SET_SECTION", lineno)
            tokens: list[tuple[int, int]] = []
            while i < len(lines):
                lineno = i + 1
                row = lines[i].strip()
                if row == "EOF" or row.endswith("_SECTION"):
                    break
                for tok in row.split():
                    tokens.append((intval(tok, lineno), lineno))
                i += 1
            sets = []
            pos = 0
            for _ in range(g):
                if pos >= len(tokens):
                    raise ParseError("truncated GTSP_SET_SECTION", lineno)
                _set_index, at = tokens[pos]
                pos += 1
                members: list[int] = []
                while pos < len(tokens) and tokens[pos][0] != -1:
                    members.append(tokens[pos][0])
                    pos += 1
                if pos >= len(tokens):
                    raise ParseError("set not terminated by -1", at)
                pos += 1
                if not members:
                    raise ParseError("empty group", at)
                sets.append(tuple(members))
        else:
            raise ParseError(f"unknown section {section!r}", lineno)

    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION header")
    n = intval(header["DIMENSION"], 0)
    gtype = header.get("TYPE", "GTSP").upper()
    if "GTSP" not in gtype:
        raise ParseError(f"unsupported TYPE {gtype!r}")
    if sets is None:
        raise ParseError("missing GTSP_SET_SECTION")

    raw: list[tuple[int, int, int, int]] = []
    if matrix is not None:
        for u in range(1, n + 1):
            for w in range(1, n + 1):
                if u != w:
                    raw.append((u, w, matrix[(u - 1) * n + (w - 1)], 0))
    raw.extend(arcs)

    gof: dict[int, int] = {}
    for gi, members in enumerate(sets):
        for v in members:
            if v in gof:
                raise ParseError(f"vertex {v} appears in two groups")
            gof[v] = gi
    kept: list[tuple[int, int, int]] = []
    dropped: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int]] = set()
    for u, w, wt, lineno in raw:
        if not (1 <= u <= n and 1 <= w <= n) or u == w:
            raise ParseError(f"bad arc ({u},{w})", lineno or None)
        if wt < 0:
            raise ParseError(f"negative weight on arc ({u},{w})", lineno or None)
        if u not in gof or w not in gof:
            raise ParseError(f"arc ({u},{w}) references uncovered vertex",
                             lineno or None)
        if (u, w) in seen:
            raise ParseError(f"duplicate arc ({u},{w})", lineno or None)
        seen.add((u, w))
        if gof[u] == gof[w]:
            dropped.append((u, w, wt))
        else:
            kept.append((u, w, wt))

    return GtspInstance(
        n=n, groups=tuple(sets), arcs=tuple(kept),
        name=header.get("NAME", "gtsp"), dropped_arcs=tuple(dropped),
    )


def write_atsp(inst: AtspInstance) -> str:
    """Sparse arc-list format: '# name', 'order arc_count', then arcs."""
    lines = [f"# {inst.name}", f"{inst.order} {len(inst.arcs)}"]
    for u, w, wt in sorted(inst.arcs):
        lines.append(f"{u} {w} {wt}")
    return "\n".join(lines) + "\n"


def read_atsp(text: str) -> AtspInstance:
    rows: list[tuple[int, list[str]]] = []
    name = "atsp"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            if lineno == 1:
                name = line[1:].strip() or name
            continue
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty input")
    lineno, fields = rows[0]
    if len(fields) != 2:
        raise ParseError("expected 'order arc_count'", lineno)
    try:
        order, count = int(fields[0]), int(fields[1])
    except ValueError:
        raise ParseError("expected integers", lineno) from None
    arcs = []
    for lineno, fields in rows[1:]:
        if len(fields) != 3:
            raise ParseError("arc line must be 'u w weight'", lineno)
        try:
            arcs.append((int(fields[0]), int(fields[1]), int(fields[2])))
        except ValueError:
            raise ParseError("expected integers", lineno) from None
    if len(arcs) != count:
        raise ParseError(f"header promises {count} arcs, found {len(arcs)}")
    try:
        return AtspInstance(order=order, arcs=tuple(arcs), name=name)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def write_tsplib_atsp(inst: AtspInstance, sentinel: int) -> tuple[str, list[str]]:
    """TSPLIB FULL_MATRIX writer for solver interop.

    Absent arcs (and the diagonal) get the sentinel weight, which
    reintroduces exactly the large-weight pathology the sparse conversion
    avoids; the returned warnings say so and flag a sentinel small enough
    to corrupt optima.
    """
    warnings = ["full-matrix export assigns the sentinel weight to absent "
                "arcs; this reintroduces the large-weight issue the sparse "
                "format avoids"]
    if sentinel <= inst.max_weight * inst.order:
        warnings.append(
            f"sentinel {sentinel} may be too small: an optimal tour of the "
            f"matrix could use a sentinel arc (max weight {inst.max_weight}, "
            f"order {inst.order})")
    weight = inst.weight
    lines = [
        f"NAME: {inst.name}",
        "TYPE: ATSP",
        f"DIMENSION: {inst.order}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    for u in range(1, inst.order + 1):
        row = [weight.get((u, w), sentinel) if u != w else sentinel
               for w in range(1, inst.order + 1)]
        lines.append(" ".join(str(x) for x in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n", warnings


def write_map(cmap: ConversionMap) -> str:
    """Serialize a ConversionMap as JSON lines, one record per line."""
    out = [json.dumps({"record": "meta", "n": cmap.n, "g": cmap.g,
                       "order": cmap.order}, sort_keys=True)]
    for gi, (off, k) in enumerate(zip(cmap.offsets, cmap.ks)):
        out.append(json.dumps({"record": "group", "group": gi, "offset": off,
                               "k": k, "gadget": f"S{k}"}, sort_keys=True))
    for gi, s, orig, vin, vout in cmap.vertex_entries:
        out.append(json.dumps({"record": "vertex", "group": gi, "pos": s,
                               "orig": orig, "entry": vin, "exit": vout},
                              sort_keys=True))
    for (tail, head), (ou, ow, wt) in sorted(cmap.arc_map.items()):
        out.append(json.dumps({"record": "arc", "tail": tail, "head": head,
                               "orig_tail": ou, "orig_head": ow, "weight": wt},
                              sort_keys=True))
    for msg in cmap.warnings:
        out.append(json.dumps({"record": "warning", "message": msg},
                              sort_keys=True))
    return "\n".join(out) + "\n"


def read_map(text: str) -> ConversionMap:
    meta = None
    groups: dict[int, tuple[int, int]] = {}
    vertex_entries = []
    arc_map: dict[tuple[int, int], tuple[int, int, int]] = {}
    warnings: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc}", lineno) from None
        kind = rec.get("record")
        if kind == "meta":
            meta = rec
        elif kind == "group":
            groups[rec["group"]] = (rec["offset"], rec["k"])
        elif kind == "vertex":
            vertex_entries.append((rec["group"], rec["pos"], rec["orig"],
                                   rec["entry"], rec["exit"]))
        elif kind == "arc":
            arc_map[(rec["tail"], rec["head"])] = (
                rec["orig_tail"], rec["orig_head"], rec["weight"])
        elif kind == "warning":
            warnings.append(rec["message"])
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)
    if meta is None:
        raise ParseError("missing meta record")
    if sorted(groups) != list(range(meta["g"])):
        raise ParseError("group records do not cover 0..g-1")
    return ConversionMap(
        n=meta["n"], order=meta["order"],
        offsets=tuple(groups[gi][0] for gi in range(meta["g"])),
        ks=tuple(groups[gi][1] for gi in range(meta["g"])),
        vertex_entries=tuple(sorted(vertex_entries)),
        arc_map=arc_map, warnings=tuple(warnings),
    )
