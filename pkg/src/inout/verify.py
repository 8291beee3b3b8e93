"""Independent brute-force oracle for the in-out property, plus the
exhaustive search for extremal in-out graphs.

Nothing here knows how the canonical graphs are built: Hamiltonian paths
are enumerated by depth-first search with connectivity and degree
pruning, and the single-visit condition is checked by searching for a
covering family of two or more disjoint incoming-to-outgoing paths.
"""
from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

from .core import DiGraph, GraphError, InOutGraph, satisfies_lemma1

DEFAULT_ORACLE_CAP = 25


class OracleLimitError(GraphError):
    """Instance too large for exhaustive search."""


def bound_order(k: int) -> int:
    """Least possible order of a k-in-out graph: 2k-1."""
    if k < 1:
        raise GraphError(f"invalid k: {k}")
    return 2 * k - 1


def bound_arcs(k: int) -> int:
    """Least possible arc count at order 2k-1: 4k-4."""
    if k < 1:
        raise GraphError(f"invalid k: {k}")
    return 4 * k - 4


def _bit_adjacency(order: int, arcs) -> tuple[list[int], list[int]]:
    adj = [0] * order
    radj = [0] * order
    for u, w in arcs:
        adj[u - 1] |= 1 << (w - 1)
        radj[w - 1] |= 1 << (u - 1)
    return adj, radj


def _check_cap(order: int, oracle_cap: int) -> None:
    if order > oracle_cap:
        raise OracleLimitError(
            f"instance too large for oracle: order {order} > cap {oracle_cap}")


def find_ham_paths(
    g: DiGraph,
    start: int,
    goal: int,
    *,
    limit: int | None = None,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> list[tuple[int, ...]]:
    """All Hamiltonian paths from start to goal, as 1-based vertex tuples.

    Stops after `limit` paths when given.  A single vertex is a valid
    length-0 Hamiltonian path, so start == goal succeeds only on the
    one-vertex graph.
    """
    _check_cap(g.order, oracle_cap)
    if start == goal:
        return [(start,)] if g.order == 1 else []
    adj, radj = _bit_adjacency(g.order, g.arcs)
    s, t = start - 1, goal - 1
    tbit = 1 << t
    found: list[tuple[int, ...]] = []
    path = [s]

    def rec(cur: int, rest: int) -> bool:
        if rest == tbit:
            if adj[cur] & tbit:
                found.append(tuple(v + 1 for v in path) + (goal,))
                return limit is None or len(found) < limit
            return True
        # Every unvisited vertex (goal included) must stay reachable.
        reached = adj[cur] & rest
        frontier = reached
        while frontier:
            new = 0
            m = frontier
            while m:
                b = m & -m
                new |= adj[b.bit_length() - 1]
                m ^= b
            new &= rest & ~reached
            reached |= new
            frontier = new
        if rest & ~reached:
            return True
        # Degree prunes: everything unvisited must still be enterable and,
        # except the goal, leavable within the remaining vertices.
        pred_pool = (rest & ~tbit) | (1 << cur)
        m = rest
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            if not radj[v] & pred_pool & ~b:
                return True
            if b != tbit and not adj[v] & rest & ~b:
                return True
        nxt = adj[cur] & rest & ~tbit
        while nxt:
            b = nxt & -nxt
            nxt ^= b
            v = b.bit_length() - 1
            path.append(v)
            ok = rec(v, rest & ~b)
            path.pop()
            if not ok:
                return False
        return True

    rec(s, ((1 << g.order) - 1) & ~(1 << s))
    return found


def ham_path_exists(g: DiGraph, start: int, goal: int, *,
                    oracle_cap: int = DEFAULT_ORACLE_CAP) -> bool:
    return bool(find_ham_paths(g, start, goal, limit=1, oracle_cap=oracle_cap))


def ham_path_matrix(g: InOutGraph, *, oracle_cap: int = DEFAULT_ORACLE_CAP
                    ) -> tuple[tuple[bool, ...], ...]:
    """Entry (j, m): does a Hamiltonian path run from i_j to o_m?"""
    _check_cap(g.graph.order, oracle_cap)
    return tuple(
        tuple(ham_path_exists(g.graph, i, o, oracle_cap=oracle_cap)
              for o in g.outgoing)
        for i in g.incoming
    )


def check_single_visit(
    g: InOutGraph,
    *,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    vertex_disjoint: bool = True,
    allow_trivial: bool = True,
) -> tuple[bool, tuple[tuple[int, ...], ...] | None]:
    """Search for >= 2 disjoint incoming-to-outgoing paths covering V.

    Returns (True, None) when no such cover exists (the single-visit
    condition holds), else (False, witness) with the covering paths.
    Paths are vertex-disjoint by default; `vertex_disjoint=False` relaxes
    to arc-disjoint.  `allow_trivial` admits a single vertex that is both
    incoming and outgoing as a length-0 path.
    """
    _check_cap(g.graph.order, oracle_cap)
    n = g.graph.order
    if n == 1:
        return True, None
    adj, radj = _bit_adjacency(n, g.graph.arcs)
    inc_mask = 0
    for v in g.incoming:
        inc_mask |= 1 << (v - 1)
    out_mask = 0
    for v in g.outgoing:
        out_mask |= 1 << (v - 1)
    full = (1 << n) - 1
    witness: tuple[tuple[int, ...], ...] | None = None
    paths: list[list[int]] = []

    if vertex_disjoint:
        def closed(uncovered: int, t: int, last_start: int) -> bool:
            nonlocal witness
            if uncovered == 0:
                if t >= 2:
                    witness = tuple(tuple(v + 1 for v in p) for p in paths)
                    return False
                return True
            starts = uncovered & inc_mask
            if last_start >= 0:
                starts &= ~((1 << (last_start + 1)) - 1)
            if not starts:
                return True
            m = uncovered
            while m:
                b = m & -m
                v = b.bit_length() - 1
                m ^= b
                if not b & starts and not radj[v] & uncovered & ~b:
                    return True
            s = starts
            while s:
                b = s & -s
                s ^= b
                v = b.bit_length() - 1
                paths.append([v])
                ok = opened(uncovered & ~b, v, t, v)
                paths.pop()
                if not ok:
                    return False
            return True

        def opened(uncovered: int, end: int, t: int, last_start: int) -> bool:
            if (1 << end) & out_mask and (len(paths[-1]) > 1 or allow_trivial):
                if not closed(uncovered, t + 1, last_start):
                    return False
            nxt = adj[end] & uncovered
            while nxt:
                b = nxt & -nxt
                nxt ^= b
                v = b.bit_length() - 1
                paths[-1].append(v)
                ok = opened(uncovered & ~b, v, t, last_start)
                paths[-1].pop()
                if not ok:
                    return False
            return True

        ok = closed(full, 0, -1)
        return (True, None) if ok else (False, witness)

    # Arc-disjoint reading: paths are individually simple, may share
    # vertices, never share an arc.  Every path must cover a fresh vertex:
    # any cover can be ordered so that each member contributes one, so
    # this loses nothing and it bounds the recursion.  Unlike the
    # vertex-disjoint search, path starts cannot be canonically ordered,
    # because shared vertices make the ordering interact with progress.
    used: set[tuple[int, int]] = set()

    def closed_a(covered: int, t: int) -> bool:
        nonlocal witness
        if covered == full:
            if t >= 2:
                witness = tuple(tuple(v + 1 for v in p) for p in paths)
                return False
            return True
        s = inc_mask
        while s:
            b = s & -s
            s ^= b
            v = b.bit_length() - 1
            paths.append([v])
            ok = opened_a(covered | b, b, v, t, bool(~covered & b))
            paths.pop()
            if not ok:
                return False
        return True

    def opened_a(covered: int, pathvis: int, end: int, t: int,
                 progressed: bool) -> bool:
        if (1 << end) & out_mask and progressed and \
                (len(paths[-1]) > 1 or allow_trivial):
            if not closed_a(covered, t + 1):
                return False
        nxt = adj[end] & ~pathvis
        while nxt:
            b = nxt & -nxt
            nxt ^= b
            v = b.bit_length() - 1
            arc = (end, v)
            if arc in used:
                continue
            used.add(arc)
            paths[-1].append(v)
            ok = opened_a(covered | b, pathvis | b, v, t,
                          progressed or bool(~covered & b))
            paths[-1].pop()
            used.discard(arc)
            if not ok:
                return False
        return True

    ok = closed_a(0, 0)
    return (True, None) if ok else (False, witness)


@dataclass
class VerificationReport:
    """Outcome of the full Definition-1 check on one labelled graph."""

    paired_ok: bool
    single_visit_ok: bool
    ham_path_matrix: tuple[tuple[bool, ...], ...]
    witness_path: tuple[int, ...] | None = None
    witness_cover: tuple[tuple[int, ...], ...] | None = None
    single_visit_method: str = "search"

    @property
    def is_inout(self) -> bool:
        return self.paired_ok and self.single_visit_ok


def verify_inout(
    g: InOutGraph,
    *,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    paranoid: bool = False,
    vertex_disjoint: bool = True,
    allow_trivial: bool = True,
) -> VerificationReport:
    """Certify both in-out conditions by brute force.

    When the bipartite shortcut applies, the single-visit search is
    skipped and the report says so; `paranoid` always runs the search.
    The shortcut is only trusted under the default vertex-disjoint
    reading, which is the one its counting argument is stated for.
    """
    matrix = ham_path_matrix(g, oracle_cap=oracle_cap)
    k = g.k
    paired_ok = all(matrix[j][m] == (j == m) for j in range(k) for m in range(k))
    witness_path = None
    if not paired_ok:
        for j in range(k):
            for m in range(k):
                if j != m and matrix[j][m]:
                    witness_path = find_ham_paths(
                        g.graph, g.incoming[j], g.outgoing[m],
                        limit=1, oracle_cap=oracle_cap)[0]
                    break
            if witness_path:
                break
    if vertex_disjoint and not paranoid and satisfies_lemma1(g):
        return VerificationReport(paired_ok, True, matrix,
                                  witness_path=witness_path,
                                  single_visit_method="lemma1")
    sv_ok, cover = check_single_visit(
        g, oracle_cap=oracle_cap, vertex_disjoint=vertex_disjoint,
        allow_trivial=allow_trivial)
    return VerificationReport(paired_ok, sv_ok, matrix,
                              witness_path=witness_path, witness_cover=cover,
                              single_visit_method="search")


def enumerate_hamiltonian_cycles(order: int, arcs) -> list[tuple[int, ...]]:
    """All directed Hamiltonian cycles, each rooted at vertex 1."""
    if order == 1:
        return []
    adj, _ = _bit_adjacency(order, arcs)
    full = (1 << order) - 1
    cycles: list[tuple[int, ...]] = []
    path = [0]

    def rec(cur: int, rest: int) -> None:
        if not rest:
            if adj[cur] & 1:
                cycles.append(tuple(v + 1 for v in path))
            return
        reached = adj[cur] & (rest | 1)
        frontier = reached
        while frontier:
            new = 0
            m = frontier
            while m:
                b = m & -m
                new |= adj[b.bit_length() - 1]
                m ^= b
            new &= (rest | 1) & ~reached
            reached |= new
            frontier = new
        if (rest | 1) & ~reached:
            return
        nxt = adj[cur] & rest
        while nxt:
            b = nxt & -nxt
            nxt ^= b
            v = b.bit_length() - 1
            path.append(v)
            rec(v, rest & ~b)
            path.pop()

    rec(0, full & ~1)
    return cycles


# ---------------------------------------------------------------------------
# Exhaustive search for extremal in-out graphs.
#
# Arc sets are enumerated size by size; incoming/outgoing labelings are
# normalised up to relabeling by fixing the incoming set to {1..k} and the
# outgoing set to the k-subset overlapping it in its last b elements.  The
# pairing itself is not guessed: Definition 1 forces the matrix of
# Hamiltonian-path existence between the two sets to be a permutation
# matrix, which pins the pairing down uniquely when it exists.
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    graphs: list[InOutGraph]
    complete: bool
    capped: bool = False
    examined: int = 0
    elapsed: float = 0.0
    sizes_done: list[int] = field(default_factory=list)


def _structures(order: int, k: int) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for b in range(max(0, 2 * k - order), k + 1):
        o_set = tuple(range(k - b + 1, 2 * k - b + 1))
        out.append((b, o_set))
    return out


def _stabilizer_perms(order: int, k: int, b: int):
    """Vertex permutations preserving the fixed I/O structure, 0-based."""
    a = k - b
    blocks = [range(a), range(a, k), range(k, 2 * k - b), range(2 * k - b, order)]
    for ps in _product_perms(blocks):
        perm = list(range(order))
        for block, p in zip(blocks, ps):
            for src, dst in zip(block, p):
                perm[src] = dst
        yield perm


def _product_perms(blocks):
    if not blocks:
        yield ()
        return
    head, *tail = blocks
    for p in permutations(head):
        for rest in _product_perms(tail):
            yield (p,) + rest


def _canonical_key(order, k, b, arcs0, pairing0):
    """Least relabeling of (arcs, pairing) under the structure stabilizer."""
    best = None
    for perm in _stabilizer_perms(order, k, b):
        rel_arcs = tuple(sorted((perm[u], perm[w]) for u, w in arcs0))
        inv = [0] * order
        for src, dst in enumerate(perm):
            inv[dst] = src
        rel_pair = tuple(perm[pairing0[inv[j]]] for j in range(k))
        key = (rel_arcs, rel_pair)
        if best is None or key < best:
            best = key
    return best


def _exists0(adj, n, s, t) -> bool:
    """Hamiltonian-path existence on bitmask adjacency, 0-based ids."""
    if s == t:
        return n == 1
    tbit = 1 << t

    def rec(cur, rest):
        if rest == tbit:
            return bool(adj[cur] & tbit)
        reached = adj[cur] & rest
        frontier = reached
        while frontier:
            new = 0
            m = frontier
            while m:
                bb = m & -m
                new |= adj[bb.bit_length() - 1]
                m ^= bb
            new &= rest & ~reached
            reached |= new
            frontier = new
        if rest & ~reached:
            return False
        nxt = adj[cur] & rest & ~tbit
        while nxt:
            bb = nxt & -nxt
            nxt ^= bb
            if rec(bb.bit_length() - 1, rest & ~bb):
                return True
        return False

    return rec(s, ((1 << n) - 1) & ~(1 << s))


def _search_chunk(args):
    """Scan one slice of the arc-set enumeration; used by the worker pool."""
    (order, k, size, prefix, oracle_cap, allow_trivial) = args
    A = order * (order - 1)
    arc_of = [(u, w) for u in range(order) for w in range(order) if u != w]
    outbits = [0] * order
    inbits = [0] * order
    for idx, (u, w) in enumerate(arc_of):
        outbits[u] |= 1 << idx
        inbits[w] |= 1 << idx
    structures = _structures(order, k)
    imask = (1 << k) - 1
    prefix_mask = 0
    for idx in prefix:
        prefix_mask |= 1 << idx
    start = prefix[-1] + 1 if prefix else 0
    remaining = size - len(prefix)
    full = (1 << order) - 1
    need_degrees = k >= 2
    found: list[tuple] = []
    examined = 0

    def reaches_all(adj, src):
        reached = 1 << src
        frontier = reached
        while frontier:
            new = 0
            m = frontier
            while m:
                b = m & -m
                new |= adj[b.bit_length() - 1]
                m ^= b
            new &= ~reached
            reached |= new
            frontier = new
        return reached == full

    for rest in combinations(range(start, A), remaining):
        examined += 1
        mask = prefix_mask
        for idx in rest:
            mask |= 1 << idx
        if need_degrees:
            rejected = False
            for v in range(order):
                if not mask & outbits[v] or not mask & inbits[v]:
                    rejected = True
                    break
            if rejected:
                continue
        adj = [0] * order
        radj = [0] * order
        m = mask
        while m:
            b = m & -m
            u, w = arc_of[b.bit_length() - 1]
            adj[u] |= 1 << w
            radj[w] |= 1 << u
            m ^= b
        if order > 1:
            und = [adj[v] | radj[v] for v in range(order)]
            if not reaches_all(und, 0):
                continue
            ok = True
            for i in range(k):
                if not reaches_all(adj, i):
                    ok = False
                    break
            if not ok:
                continue
        rev_all: dict[int, bool] = {}
        for b, o_set in structures:
            omask = 0
            for o in o_set:
                omask |= 1 << (o - 1)
            if need_degrees:
                ok = True
                for o in o_set:
                    if not adj[o - 1] & ~imask:
                        ok = False
                        break
                if ok:
                    for i in range(k):
                        if not radj[i] & ~omask:
                            ok = False
                            break
                if not ok:
                    continue
            ok = True
            for o in o_set:
                hit = rev_all.get(o)
                if hit is None:
                    hit = reaches_all(radj, o - 1) if order > 1 else True
                    rev_all[o] = hit
                if not hit:
                    ok = False
                    break
            if not ok:
                continue
            # Hamiltonian-path existence matrix must be a permutation matrix.
            pairing = [0] * k
            used_cols = 0
            ok = True
            for i in range(k):
                row_col = -1
                for o in o_set:
                    if _exists0(adj, order, i, o - 1):
                        if row_col >= 0:
                            ok = False
                            break
                        row_col = o - 1
                if not ok or row_col < 0 or used_cols & (1 << row_col):
                    ok = False
                    break
                used_cols |= 1 << row_col
                pairing[i] = row_col
            if not ok:
                continue
            arcs1 = [(arc_of[i][0] + 1, arc_of[i][1] + 1)
                     for i in range(A) if mask & (1 << i)]
            cand = InOutGraph(
                DiGraph.from_arcs(order, arcs1),
                tuple(range(1, k + 1)),
                tuple(p + 1 for p in pairing),
            )
            sv_ok, _ = check_single_visit(
                cand, oracle_cap=oracle_cap, allow_trivial=allow_trivial)
            if not sv_ok:
                continue
            arcs0 = [(u - 1, w - 1) for u, w in arcs1]
            key = (b, _canonical_key(order, k, b, arcs0, pairing))
            found.append((key, order, tuple(sorted(arcs1)),
                          tuple(range(1, k + 1)), tuple(p + 1 for p in pairing)))
    return found, examined


def _chunk_prefixes(A: int, size: int, cap: int):
    def rec(prefix, start, remaining):
        if remaining == 0 or comb(A - start, remaining) <= cap:
            yield prefix
            return
        for b in range(start, A - remaining + 1):
            yield from rec(prefix + (b,), b + 1, remaining - 1)

    yield from rec((), 0, size)


def search_min(
    order: int,
    k: int,
    max_arcs: int,
    *,
    time_budget: float | None = None,
    result_cap: int = 20,
    threads: int = 1,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    allow_trivial: bool = True,
    chunk_cap: int = 250_000,
) -> SearchResult:
    """Enumerate all k-in-out graphs on `order` vertices with <= max_arcs arcs.

    Labelings are canonicalised up to relabeling; results are deduplicated
    and capped at `result_cap`.  A time budget (seconds) yields a partial
    result marked incomplete.  `threads` > 1 fans chunks of the arc-set
    enumeration out to a process pool.
    """
    if order < 1 or k < 1 or max_arcs < 0:
        raise GraphError("order and k must be positive, max_arcs non-negative")
    _check_cap(order, oracle_cap)
    t0 = time.perf_counter()
    A = order * (order - 1)
    max_arcs = min(max_arcs, A)
    if k >= 2:
        smin = order
    else:
        smin = 0 if order == 1 else order - 1
    chunks: list[tuple[int, tuple[int, ...]]] = []
    for size in range(smin, max_arcs + 1):
        for prefix in _chunk_prefixes(A, size, chunk_cap):
            chunks.append((size, prefix))

    found: dict[tuple, InOutGraph] = {}
    examined = 0
    complete = True
    capped = False
    sizes_done: list[int] = []
    last_size_started = None

    def merge(batch) -> bool:
        nonlocal capped
        for key, order_, arcs, inc, out in batch:
            if key not in found:
                found[key] = InOutGraph(DiGraph.from_arcs(order_, arcs), inc, out)
                if len(found) >= result_cap:
                    capped = True
                    return False
        return True

    def args_for(chunk):
        size, prefix = chunk
        return (order, k, size, prefix, oracle_cap, allow_trivial)

    if threads <= 1:
        for chunk in chunks:
            if time_budget is not None and time.perf_counter() - t0 > time_budget:
                complete = False
                break
            if last_size_started is not None and chunk[0] != last_size_started:
                sizes_done.append(last_size_started)
            last_size_started = chunk[0]
            batch, n_exam = _search_chunk(args_for(chunk))
            examined += n_exam
            if not merge(batch):
                complete = False
                break
        else:
            if last_size_started is not None:
                sizes_done.append(last_size_started)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_search_chunk, args_for(c)): i
                       for i, c in enumerate(chunks)}
            slots: dict[int, tuple] = {}
            next_idx = 0
            pending = set(futures)
            stop = False
            while pending and not stop:
                timeout = None
                if time_budget is not None:
                    timeout = max(0.0, time_budget - (time.perf_counter() - t0))
                done, pending = wait(pending, timeout=timeout,
                                     return_when=FIRST_COMPLETED)
                if not done:
                    complete = False
                    break
                for fut in done:
                    slots[futures[fut]] = fut.result()
                # Merge contiguous finished chunks so output order is stable.
                while next_idx in slots:
                    batch, n_exam = slots.pop(next_idx)
                    examined += n_exam
                    size = chunks[next_idx][0]
                    if last_size_started is not None and size != last_size_started:
                        sizes_done.append(last_size_started)
                    last_size_started = size
                    next_idx += 1
                    if not merge(batch):
                        complete = False
                        stop = True
                        break
                if time_budget is not None and \
                        time.perf_counter() - t0 > time_budget and pending:
                    complete = False
                    stop = True
            for fut in pending:
                fut.cancel()
        if complete and last_size_started is not None:
            sizes_done.append(last_size_started)

    return SearchResult(
        graphs=list(found.values()),
        complete=complete,
        capped=capped,
        examined=examined,
        elapsed=time.perf_counter() - t0,
        sizes_done=sizes_done,
    )
