import pytest

from inout import (AtspInstance, GraphError, GtspInstance, OracleLimitError,
                   ParseError, brute_force_atsp, brute_force_gtsp, convert,
                   map_tour_back, parse_gtsp, random_instance, read_atsp,
                   read_map, write_atsp, write_map, write_tsplib_atsp)

TINY = """NAME: tiny
TYPE: GTSP
DIMENSION: 4
GTSP_SETS: 2
EDGE_DATA_SECTION
1 3 5
3 1 5
2 4 7
4 2 7
-1
GTSP_SET_SECTION
1 1 2 -1
2 3 4 -1
EOF
"""


def tiny_instance():
    return parse_gtsp(TINY)


def test_parse_minimal():
    inst = tiny_instance()
    assert inst.n == 4 and inst.g == 2
    assert inst.groups == ((1, 2), (3, 4))
    assert len(inst.arcs) == 4
    assert inst.dropped_arcs == ()


def test_parse_drops_intra_group_arcs():
    text = TINY.replace("EDGE_DATA_SECTION\n", "EDGE_DATA_SECTION\n1 2 3\n")
    inst = parse_gtsp(text)
    assert inst.dropped_arcs == ((1, 2, 3),)
    assert (1, 2) not in {(u, w) for u, w, _ in inst.arcs}


def test_parse_full_matrix():
    text = """NAME: m
TYPE: GTSP
DIMENSION: 3
GTSP_SETS: 2
EDGE_WEIGHT_SECTION
0 2 3
4 0 6
7 8 0
GTSP_SET_SECTION
1 1 2 -1
2 3 -1
EOF
"""
    inst = parse_gtsp(text)
    # intra-group entries (1,2) and (2,1) dropped; 4 inter-group arcs kept
    assert len(inst.arcs) == 4
    assert inst.weight[(1, 3)] == 3 and inst.weight[(3, 2)] == 8
    assert len(inst.dropped_arcs) == 2


def test_parse_agtsp_wrapped_sets_and_unterminated_edge_data():
    text = """NAME: wrapped
TYPE: AGTSP
COMMENT: robustness probe
DIMENSION: 6
GTSP_SETS: 2
EDGE_DATA_SECTION
1 4 3
4 1 2
2 5 9
GTSP_SET_SECTION
1 1 2
3 -1
2 4 5 6 -1
EOF
"""
    inst = parse_gtsp(text)
    assert inst.groups == ((1, 2, 3), (4, 5, 6))
    assert inst.arcs == ((1, 4, 3), (4, 1, 2), (2, 5, 9))


def test_parse_errors():
    with pytest.raises(ParseError, match="empty group"):
        parse_gtsp(TINY.replace("1 1 2 -1", "1 -1"))
    with pytest.raises(ParseError, match="two groups"):
        parse_gtsp(TINY.replace("2 3 4 -1", "2 2 3 4 -1"))
    with pytest.raises(ParseError, match="negative"):
        parse_gtsp(TINY.replace("1 3 5", "1 3 -5"))
    with pytest.raises(ParseError, match="line 6"):
        parse_gtsp(TINY.replace("1 3 5", "1 3"))
    with pytest.raises(ParseError, match="DIMENSION"):
        parse_gtsp("TYPE: GTSP\nGTSP_SETS: 1\nGTSP_SET_SECTION\n1 1 -1\n")


def test_instance_validation():
    with pytest.raises(GraphError, match="not covered"):
        GtspInstance(n=3, groups=((1, 2),), arcs=())
    with pytest.raises(GraphError, match="intra-group"):
        GtspInstance(n=3, groups=((1, 2), (3,)), arcs=((1, 2, 1),))
    with pytest.raises(GraphError, match="duplicate"):
        GtspInstance(n=3, groups=((1, 2), (3,)),
                     arcs=((1, 3, 1), (1, 3, 2)))


def test_convert_order_formula_examples():
    # two groups of size 2: order 2n - g + m = 6
    atsp, _ = convert(tiny_instance())
    assert atsp.order == 6
    # one group of size 3: degenerate but still 2*3 - 1 + 1 = 6
    inst = GtspInstance(n=3, groups=((1, 2, 3),), arcs=())
    atsp, cmap = convert(inst)
    assert atsp.order == 6
    assert any("single group" in w for w in cmap.warnings)
    # groups of sizes 1, 2, 3: 1 + 3 + 6 = 10 = 2*6 - 3 + 1
    inst = GtspInstance(n=6, groups=((1,), (2, 3), (4, 5, 6)),
                        arcs=((1, 2, 1), (2, 4, 1), (4, 1, 1)))
    atsp, _ = convert(inst)
    assert atsp.order == 10


def test_convert_no_big_m():
    inst = tiny_instance()
    atsp, _ = convert(inst)
    assert atsp.max_weight == inst.max_weight == 7
    weightless = GtspInstance(n=2, groups=((1,), (2,)), arcs=())
    atsp, _ = convert(weightless)
    assert atsp.max_weight == 0


def test_convert_warns_on_group_unreachability():
    inst = GtspInstance(n=2, groups=((1,), (2,)), arcs=((1, 2, 1),))
    _, cmap = convert(inst)
    assert any("not mutually reachable" in w for w in cmap.warnings)


def test_brute_force_gtsp_example():
    inst = GtspInstance(
        n=4, groups=((1, 2), (3, 4)),
        arcs=((1, 3, 5), (3, 1, 5), (2, 4, 7), (4, 2, 7), (1, 4, 9), (4, 1, 9)))
    cost, tour = brute_force_gtsp(inst)
    assert cost == 10
    assert set(tour) == {1, 3}
    atsp, _ = convert(inst)
    acost, _ = brute_force_atsp(atsp)
    assert acost == 10


def test_brute_force_single_group_infeasible():
    inst = GtspInstance(n=2, groups=((1, 2),), arcs=())
    assert brute_force_gtsp(inst) is None
    atsp, _ = convert(inst)
    assert brute_force_atsp(atsp) is None


def test_brute_force_caps():
    inst = random_instance(1, n=11, g=3)
    with pytest.raises(OracleLimitError):
        brute_force_gtsp(inst)
    big = AtspInstance(order=19, arcs=())
    with pytest.raises(OracleLimitError):
        brute_force_atsp(big)


def test_oracles_agree_at_the_atsp_cap():
    # three size-3 groups convert to order 2*9 - 3 + 3 = 18, the cap
    import random

    rng = random.Random(7)
    groups = ((1, 2, 3), (4, 5, 6), (7, 8, 9))
    gof = {v: gi for gi, ms in enumerate(groups) for v in ms}
    arcs = tuple((u, w, rng.randint(0, 100))
                 for u in range(1, 10) for w in range(1, 10)
                 if u != w and gof[u] != gof[w] and rng.random() < 0.7)
    inst = GtspInstance(n=9, groups=groups, arcs=arcs)
    atsp, cmap = convert(inst)
    assert atsp.order == 18
    aopt = brute_force_atsp(atsp)
    gopt = brute_force_gtsp(inst)
    assert aopt is not None and gopt is not None
    assert aopt[0] == gopt[0]
    assert map_tour_back(aopt[1], cmap).cost == gopt[0]


def test_cost_equivalence_random():
    for seed in range(12):
        inst = random_instance(seed, n=6, g=3, density=0.5)
        opt = brute_force_gtsp(inst)
        atsp, cmap = convert(inst)
        aopt = brute_force_atsp(atsp)
        if opt is None:
            assert aopt is None
            continue
        assert aopt is not None and opt[0] == aopt[0]
        back = map_tour_back(aopt[1], cmap)
        assert back.cost == opt[0]
        assert sorted(inst.group_of[v] for v in back.vertices) == \
            list(range(inst.g))


def test_every_cycle_maps_back_consistently():
    # every Hamiltonian cycle of a composed instance enters each gadget at
    # some i_j and provably leaves at the paired o_j, so back-mapping is
    # total over all cycles, not just optimal ones
    from inout import enumerate_hamiltonian_cycles

    for seed in (3, 5, 8):
        inst = random_instance(seed, n=5, g=2, density=0.9)
        atsp, cmap = convert(inst)
        weight = atsp.weight
        cycles = enumerate_hamiltonian_cycles(
            atsp.order, [(u, w) for u, w, _ in atsp.arcs])
        assert cycles
        for cyc in cycles:
            cost = sum(weight[(u, w)]
                       for u, w in zip(cyc, cyc[1:] + (cyc[0],)))
            back = map_tour_back(cyc, cmap)
            assert back.cost == cost
            assert sorted(inst.group_of[v] for v in back.vertices) == \
                list(range(inst.g))


def test_map_tour_back_rejects_bad_tours():
    inst = tiny_instance()
    atsp, cmap = convert(inst)
    _, tour = brute_force_atsp(atsp)
    with pytest.raises(GraphError, match="not a permutation"):
        map_tour_back(tour[:-1], cmap)
    with pytest.raises(GraphError, match="invalid tour"):
        # 1 -> 3 skips the interior of the first gadget and is not an arc
        map_tour_back((1, 3, 2, 4, 5, 6), cmap)


def test_atsp_file_round_trip():
    atsp, _ = convert(tiny_instance())
    again = read_atsp(write_atsp(atsp))
    assert again.order == atsp.order
    assert set(again.arcs) == set(atsp.arcs)
    with pytest.raises(ParseError, match="promises"):
        read_atsp("2 3\n1 2 1\n")


def test_map_file_round_trip():
    _, cmap = convert(tiny_instance())
    again = read_map(write_map(cmap))
    assert again.offsets == cmap.offsets
    assert again.ks == cmap.ks
    assert again.vertex_entries == cmap.vertex_entries
    assert again.arc_map == cmap.arc_map


def test_tsplib_writer_sentinel():
    atsp, _ = convert(tiny_instance())
    text, warnings = write_tsplib_atsp(atsp, sentinel=9999)
    assert "FULL_MATRIX" in text
    rows = text.splitlines()
    body = rows[rows.index("EDGE_WEIGHT_SECTION") + 1:-1]
    assert len(body) == atsp.order
    assert body[0].split()[0] == "9999"  # diagonal
    assert any("large-weight" in w for w in warnings)
    _, warnings_small = write_tsplib_atsp(atsp, sentinel=3)
    assert any("too small" in w for w in warnings_small)


def test_conversion_map_positions_follow_input_order():
    inst = GtspInstance(n=4, groups=((2, 1), (4, 3)),
                        arcs=((2, 4, 1), (4, 2, 1)))
    _, cmap = convert(inst)
    # vertex 2 is the 1st entry of group 0, vertex 1 the 2nd
    assert cmap.original_vertex[(0, 1)] == 2
    assert cmap.original_vertex[(0, 2)] == 1
