from itertools import product

import pytest

from inout import (AtspInstance, GraphError, GtspInstance, build_inout,
                   canonical_path, check_constraints, convert,
                   emit_constraints, enumerate_hamiltonian_cycles,
                   random_instance, write_lp)
from inout.constraints import incidence_of_cycle


def two_s2_instance():
    return GtspInstance(
        n=4, groups=((1, 2), (3, 4)),
        arcs=((1, 3, 5), (3, 1, 5), (2, 4, 7), (4, 2, 7)))


def counts_by_family(cset, subgraph):
    return {fam: sum(1 for c in cset.constraints
                     if c.subgraph == subgraph and c.family == fam)
            for fam in ("in", "out", "pair", "path-force", "path-gate")}


def test_counts_k2():
    atsp, cmap = convert(two_s2_instance())
    cset = emit_constraints(atsp, cmap)
    counts = counts_by_family(cset, 0)
    assert counts == {"in": 1, "out": 1, "pair": 2, "path-force": 2,
                      "path-gate": 4}
    # 1 + 1 + k + k + |arcs| = 10 per k=2 subgraph
    assert sum(counts.values()) == 10
    assert len(cset.constraints) == 20


def test_counts_k1_and_k3():
    inst = GtspInstance(n=4, groups=((1,), (2, 3, 4)),
                        arcs=((1, 2, 1), (2, 1, 1), (1, 3, 2), (4, 1, 3)))
    atsp, cmap = convert(inst)
    cset = emit_constraints(atsp, cmap)
    c1 = counts_by_family(cset, 0)
    assert c1 == {"in": 1, "out": 1, "pair": 1, "path-force": 1,
                  "path-gate": 0}
    c3 = counts_by_family(cset, 1)
    assert c3 == {"in": 1, "out": 1, "pair": 3, "path-force": 3,
                  "path-gate": 10}
    # k=1: the path-force row has no path terms and coefficient 0
    pf1 = [c for c in cset.constraints
           if c.subgraph == 0 and c.family == "path-force"]
    assert len(pf1) == 1 and pf1[0].terms == ()


def test_k3_path_force_coefficient_is_five():
    inst = GtspInstance(
        n=6, groups=((1, 2, 3), (4, 5, 6)),
        arcs=tuple((u, w, 1) for u in (1, 2, 3) for w in (4, 5, 6))
        + tuple((w, u, 1) for u in (1, 2, 3) for w in (4, 5, 6)))
    atsp, cmap = convert(inst)
    cset = emit_constraints(atsp, cmap)
    for c in cset.constraints:
        if c.family == "path-force":
            positives = {coef for coef, _ in c.terms if coef > 0}
            assert positives == {5}
            assert len(canonical_path(3, 1).arcs) == 5


def test_every_hamiltonian_cycle_satisfies():
    inst = two_s2_instance()
    atsp, cmap = convert(inst)
    cset = emit_constraints(atsp, cmap)
    cycles = enumerate_hamiltonian_cycles(
        atsp.order, [(u, w) for u, w, _ in atsp.arcs])
    assert cycles
    for cyc in cycles:
        ok, violated = check_constraints(cset, incidence_of_cycle(cyc, atsp))
        assert ok, violated


def test_zero_incidence_violates_in():
    atsp, cmap = convert(two_s2_instance())
    cset = emit_constraints(atsp, cmap)
    zero = {(u, w): 0 for u, w, _ in atsp.arcs}
    ok, violated = check_constraints(cset, zero)
    assert not ok and violated.family == "in"


def test_double_entry_pseudo_tour_violates_in():
    atsp, cmap = convert(two_s2_instance())
    cset = emit_constraints(atsp, cmap)
    incidence = {(u, w): 0 for u, w, _ in atsp.arcs}
    entries = [arc for arc in cmap.arc_map
               if cmap.group_of_vertex(arc[1]) == 0]
    assert len(entries) >= 2
    for arc in entries[:2]:
        incidence[arc] = 1
    ok, violated = check_constraints(cset, incidence)
    assert not ok and violated.family == "in" and violated.subgraph == 0


def test_check_constraints_missing_variable():
    atsp, cmap = convert(two_s2_instance())
    cset = emit_constraints(atsp, cmap)
    with pytest.raises(GraphError, match="missing variable"):
        check_constraints(cset, {})


def test_non_canonical_subgraph_rejected():
    atsp, cmap = convert(two_s2_instance())
    # drop one internal arc of gadget 0
    internal = next(iter(cmap.internal_arcs))
    arcs = tuple(a for a in atsp.arcs if (a[0], a[1]) != internal)
    broken = AtspInstance(order=atsp.order, arcs=arcs)
    with pytest.raises(GraphError, match="uniqueness"):
        emit_constraints(broken, cmap)


def test_missing_incoming_arcs_warn():
    inst = GtspInstance(n=2, groups=((1,), (2,)), arcs=((1, 2, 1),))
    atsp, cmap = convert(inst)
    cset = emit_constraints(atsp, cmap)
    assert any("no incoming host arcs" in w for w in cset.warnings)


def test_forced_entry_activates_exactly_the_path():
    """0/1 assignments satisfying the per-gadget families with one entry
    at i_j must light up exactly the arcs of P_j, for k <= 4."""
    for k in (1, 2, 3, 4):
        sizes = (k, 2)
        n = k + 2
        groups = (tuple(range(1, k + 1)), (k + 1, k + 2))
        arcs = []
        for u in range(1, k + 1):
            for w in (k + 1, k + 2):
                arcs.append((u, w, 1))
                arcs.append((w, u, 1))
        inst = GtspInstance(n=n, groups=groups, arcs=tuple(arcs))
        atsp, cmap = convert(inst)
        cset = emit_constraints(atsp, cmap)
        gadget = build_inout(k)
        off = cmap.offsets[0]
        internal = sorted((u + off, w + off) for u, w in gadget.graph.arcs)
        local = [c for c in cset.constraints if c.subgraph == 0]
        entry_arcs = {j: [a for a in cmap.arc_map
                          if a[1] == cmap.entry_exit[(0, j + 1)][0]]
                      for j in range(k)}
        exit_arcs = {j: [a for a in cmap.arc_map
                         if a[0] == cmap.entry_exit[(0, j + 1)][1]]
                     for j in range(k)}
        for j in range(k):
            expected = set((u + off, w + off)
                           for u, w in canonical_path(k, j + 1).arcs)
            base = {arc: 0 for c in local for _, arc in c.terms}
            base[entry_arcs[j][0]] = 1
            base[exit_arcs[j][0]] = 1
            solutions = []
            for bits in product((0, 1), repeat=len(internal)):
                incidence = dict(base)
                incidence.update(zip(internal, bits))
                if all(c.satisfied(incidence) for c in local):
                    solutions.append({a for a, v in zip(internal, bits) if v})
            assert solutions == [expected], (k, j)


def test_write_lp_formats_in_constraint():
    # sizes (2, 3): gadget 2 is S_3 with exits at global 9 and 7, so the
    # incoming row of gadget 1 reads x_7_1 + x_9_3 = 1
    inst = GtspInstance(n=5, groups=((1, 2), (3, 4, 5)),
                        arcs=((4, 1, 1), (3, 2, 1), (1, 3, 1), (2, 4, 1)))
    atsp, cmap = convert(inst)
    cset = emit_constraints(atsp, cmap)
    text = write_lp(cset)
    assert " c_s1_in: x_7_1 + x_9_3 = 1" in text.splitlines()
    assert "Binary" in text and text.endswith("End\n")


def test_write_lp_objective_and_trivial_rows():
    cset = emit_constraints(*convert(
        GtspInstance(n=2, groups=((1,), (2,)),
                     arcs=((1, 2, 3), (2, 1, 4)))))
    text = write_lp(cset, objective={(2, 1): 4, (1, 2): 3})
    assert "obj: 3 x_1_2 + 4 x_2_1" in text
    # k=1 path-force rows have no terms and become comments
    assert "\\ c_s1_path_1: 0 <= 0" in text


def test_determinism():
    inst = random_instance(7, n=6, g=3, density=0.7)
    atsp, cmap = convert(inst)
    a = write_lp(emit_constraints(atsp, cmap))
    b = write_lp(emit_constraints(atsp, cmap))
    assert a == b
