"""Command-line entry point wiring all modules together.

Exit codes: 0 success, 1 verification failure or empty search, 2 usage
error, 3 budget exhausted.  `--json` switches reports to one JSON object
per line on stdout; diagnostics always go to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import constraints as cons
from . import construct, core, gtsp, verify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _emit(obj: dict, as_json: bool, text: str | None = None) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True))
    elif text is not None:
        print(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _cmd_construct(args) -> int:
    g = construct.build_inout(args.k)
    lay = construct.layout(args.k)
    if args.format == "text":
        payload = core.write_graph(g)
    else:
        lines = [f"// S_{args.k}: order {g.graph.order}, "
                 f"{g.graph.arc_count} arcs, crossings: {lay.crossings}",
                 f"digraph S{args.k} {{"]
        for v in range(1, g.graph.order + 1):
            x, y = lay.coords[v]
            lines.append(f'  {v} [pos="{x},{y}!"];')
        done = set()
        for u, w in g.graph.sorted_arcs():
            if (u, w) in done:
                continue
            if g.graph.has_arc(w, u):
                lines.append(f"  {u} -> {w} [dir=both];")
                done.add((w, u))
            else:
                lines.append(f"  {u} -> {w};")
            done.add((u, w))
        lines.append(f"  // incoming: {' '.join(map(str, g.incoming))}")
        lines.append(f"  // outgoing: {' '.join(map(str, g.outgoing))}")
        lines.append("}")
        payload = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(payload)
    elif not args.json:
        sys.stdout.write(payload)
    if args.plot:
        from . import plotting

        plotting.save_layout(g, lay, args.plot)
    _emit({"k": args.k, "order": g.graph.order, "arcs": g.graph.arc_count,
           "crossings": lay.crossings, "incoming": list(g.incoming),
           "outgoing": list(g.outgoing)}, args.json)
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = core.read_graph(Path(args.input).read_text())
    report = verify.verify_inout(
        g, oracle_cap=args.oracle_cap, paranoid=args.paranoid,
        vertex_disjoint=not args.arc_disjoint,
        allow_trivial=not args.no_trivial_paths)
    verdict = "YES" if report.is_inout else "NO"
    lines = [f"k-in-out: {verdict}",
             f"paired vertices: {'ok' if report.paired_ok else 'violated'}",
             f"single visit: {'ok' if report.single_visit_ok else 'violated'} "
             f"({report.single_visit_method})"]
    for j, row in enumerate(report.ham_path_matrix):
        cells = " ".join("1" if x else "." for x in row)
        lines.append(f"  i{j + 1}: {cells}")
    if report.witness_path:
        lines.append("forbidden path: " +
                     " -> ".join(map(str, report.witness_path)))
    if report.witness_cover:
        covers = "; ".join(" -> ".join(map(str, p)) for p in report.witness_cover)
        lines.append(f"covering paths: {covers}")
    _emit({"k_in_out": report.is_inout, "paired_ok": report.paired_ok,
           "single_visit_ok": report.single_visit_ok,
           "single_visit_method": report.single_visit_method,
           "matrix": [[int(x) for x in row] for row in report.ham_path_matrix],
           "witness_path": list(report.witness_path or ()) or None,
           "witness_cover": [list(p) for p in report.witness_cover]
           if report.witness_cover else None},
          args.json, "\n".join(lines))
    return EXIT_OK if report.is_inout else EXIT_FAIL


def _cmd_search(args) -> int:
    result = verify.search_min(
        args.order, args.k, args.max_arcs,
        time_budget=args.time_budget, result_cap=args.result_cap,
        threads=args.threads, oracle_cap=args.oracle_cap)
    if args.json:
        for g in result.graphs:
            print(json.dumps({
                "order": g.graph.order, "k": g.k,
                "arcs": sorted(g.graph.arcs),
                "incoming": list(g.incoming), "outgoing": list(g.outgoing),
            }, sort_keys=True))
        print(json.dumps({
            "found": len(result.graphs), "complete": result.complete,
            "capped": result.capped, "examined": result.examined,
            "elapsed": round(result.elapsed, 3)}, sort_keys=True))
    else:
        for i, g in enumerate(result.graphs, start=1):
            print(f"--- graph {i} ---")
            sys.stdout.write(core.write_graph(g))
        status = "complete" if result.complete else \
            ("capped" if result.capped else "budget exhausted, partial")
        print(f"{len(result.graphs)} graph(s) found "
              f"({status}; {result.examined} arc sets examined, "
              f"{result.elapsed:.1f}s)")
        if not result.graphs:
            print("none found")
    if result.graphs:
        return EXIT_OK
    return EXIT_FAIL if result.complete else EXIT_BUDGET


def _cmd_convert(args) -> int:
    inst = gtsp.parse_gtsp(Path(args.input).read_text())
    for u, w, wt in inst.dropped_arcs:
        _warn(f"dropped intra-group arc ({u},{w}) weight {wt}")
    atsp, cmap = gtsp.convert(inst)
    for msg in cmap.warnings:
        _warn(msg)
    if args.tsplib:
        payload, warnings = gtsp.write_tsplib_atsp(atsp, args.sentinel)
        for msg in warnings:
            _warn(msg)
    else:
        payload = gtsp.write_atsp(atsp)
    Path(args.output).write_text(payload)
    if args.map:
        Path(args.map).write_text(gtsp.write_map(cmap))
    _emit({"n": inst.n, "g": inst.g, "order": atsp.order,
           "arcs": len(atsp.arcs), "max_weight": atsp.max_weight,
           "dropped": len(inst.dropped_arcs)},
          args.json,
          f"converted {inst.name}: n={inst.n}, g={inst.g} -> "
          f"order {atsp.order}, {len(atsp.arcs)} arcs, "
          f"max weight {atsp.max_weight}")
    return EXIT_OK


def _cmd_map_tour(args) -> int:
    cmap = gtsp.read_map(Path(args.map).read_text())
    tour = [int(line.split()[0])
            for line in Path(args.tour).read_text().splitlines()
            if line.strip() and not line.lstrip().startswith("#")]
    back = gtsp.map_tour_back(tour, cmap)
    _emit({"tour": list(back.vertices), "cost": back.cost}, args.json,
          "\n".join(map(str, back.vertices)) + f"\ncost {back.cost}")
    return EXIT_OK


def _cmd_emit_constraints(args) -> int:
    host = gtsp.read_atsp(Path(args.instance).read_text())
    cmap = gtsp.read_map(Path(args.map).read_text())
    cset = cons.emit_constraints(host, cmap)
    for msg in cset.warnings:
        _warn(msg)
    objective = {(u, w): wt for u, w, wt in host.arcs}
    Path(args.output).write_text(cons.write_lp(cset, objective))
    _emit({"constraints": len(cset.constraints),
           "variables": len(cset.variables)},
          args.json,
          f"wrote {len(cset.constraints)} constraints over "
          f"{len(cset.variables)} variables to {args.output}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    failures: list[str] = []

    def block(name, fn):
        t0 = time.perf_counter()
        try:
            fn()
            status = "pass"
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures.append(f"{name}: {exc}")
            status = f"FAIL ({exc})"
        print(f"{name:<28} {status}  [{time.perf_counter() - t0:.2f}s]")

    def check_construction():
        for k in range(1, args.kmax + 1):
            g = construct.build_inout(k)
            expected_order = 6 if k == 3 else 2 * k - 1
            assert g.graph.order == expected_order, k
            report = verify.verify_inout(g, paranoid=True)
            assert report.is_inout, f"k={k} not certified"

    def check_paths():
        for k in range(1, args.kmax + 1):
            g = construct.build_inout(k)
            for j in range(1, k + 1):
                p = construct.canonical_path(k, j)
                all_paths = verify.find_ham_paths(
                    g.graph, g.incoming[j - 1], g.outgoing[j - 1])
                assert all_paths == [p.vertices], (k, j)

    def check_lemma1():
        for k in range(1, args.kmax + 1):
            g = construct.build_inout(k)
            assert core.satisfies_lemma1(g) == (k != 3), k

    def check_layout():
        for k in range(1, args.kmax + 1):
            lay = construct.layout(k)
            expected = 1 if k >= 5 and k % 4 == 1 else 0
            assert lay.crossings == expected, k

    def check_conversion():
        for seed in range(5):
            inst = gtsp.random_instance(args.seed + seed, n=7, g=3,
                                        density=0.6)
            atsp, cmap = gtsp.convert(inst)
            a = gtsp.brute_force_gtsp(inst)
            b = gtsp.brute_force_atsp(atsp)
            if a is None or b is None:
                assert a is None and b is None
                continue
            assert a[0] == b[0], (seed, a[0], b[0])
            back = gtsp.map_tour_back(b[1], cmap)
            assert back.cost == a[0]

    def check_constraints():
        inst = gtsp.random_instance(args.seed, n=6, g=3, density=0.8)
        atsp, cmap = gtsp.convert(inst)
        cset = cons.emit_constraints(atsp, cmap)
        cycles = verify.enumerate_hamiltonian_cycles(
            atsp.order, [(u, w) for u, w, _ in atsp.arcs])
        for cyc in cycles:
            ok, violated = cons.check_constraints(
                cset, cons.incidence_of_cycle(cyc, atsp))
            assert ok, violated

    def check_search():
        r = verify.search_min(3, 2, 3)
        assert r.complete and not r.graphs
        r = verify.search_min(3, 2, 4)
        assert r.complete and len(r.graphs) == 1

    block("construction + oracle", check_construction)
    block("canonical paths unique", check_paths)
    block("bipartite shortcut", check_lemma1)
    block("layout crossings", check_layout)
    block("conversion cost equality", check_conversion)
    block("constraint validity", check_constraints)
    block("extremal search (tiny)", check_search)
    if failures:
        print(f"{len(failures)} block(s) failed")
        return EXIT_FAIL
    print("all selftest blocks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inout",
        description="Optimal in-out graphs: construction, verification, "
                    "GTSP conversion and cutting-plane constraints.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the canonical graph S_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--output", help="write the graph/drawing here instead of stdout")
    p.add_argument("--plot", help="also render the drawing to this image file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="run the brute-force in-out oracle")
    p.add_argument("--input", required=True, help="graph in the text format")
    p.add_argument("--paranoid", action="store_true",
                   help="always run the single-visit search, even when the "
                        "bipartite shortcut applies")
    p.add_argument("--oracle-cap", type=int, default=verify.DEFAULT_ORACLE_CAP)
    p.add_argument("--arc-disjoint", action="store_true",
                   help="read the single-visit condition with arc-disjoint "
                        "paths instead of vertex-disjoint")
    p.add_argument("--no-trivial-paths", action="store_true",
                   help="disallow length-0 paths in the single-visit search")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="exhaustive search for k-in-out graphs")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-arcs", type=int, required=True)
    p.add_argument("--time-budget", type=float, default=None,
                   help="seconds; partial results are marked incomplete")
    p.add_argument("--result-cap", type=int, default=20)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--oracle-cap", type=int, default=verify.DEFAULT_ORACLE_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("convert", help="convert a GTSP instance to sparse ATSP")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--map", help="write the conversion map (JSON lines) here")
    p.add_argument("--tsplib", action="store_true",
                   help="write a TSPLIB FULL_MATRIX file instead of the "
                        "sparse arc list (requires --sentinel)")
    p.add_argument("--sentinel", type=int, default=None,
                   help="weight for absent arcs in --tsplib output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("map-tour", help="map an ATSP tour back to GTSP")
    p.add_argument("--map", required=True)
    p.add_argument("--tour", required=True,
                   help="one vertex id per line, cycle implied")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_map_tour)

    p = sub.add_parser("emit-constraints",
                       help="emit cutting-plane constraints as an LP file")
    p.add_argument("--instance", required=True, help="sparse ATSP file")
    p.add_argument("--map", required=True, help="conversion map (JSON lines)")
    p.add_argument("--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_emit_constraints)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--seed", type=int, default=20240901)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tsplib", False) and args.sentinel is None:
        parser.error("--tsplib requires --sentinel")
    if getattr(args, "sentinel", None) is not None and not args.tsplib:
        parser.error("--sentinel only applies with --tsplib")
    try:
        return args.func(args)
    except (core.GraphError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
