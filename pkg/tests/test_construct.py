import pytest

from inout import (GraphError, build_inout, canonical_path, crossing_count,
                   layout)
from inout.construct import Layout


def test_invalid_k():
    with pytest.raises(GraphError, match="invalid k"):
        build_inout(0)
    with pytest.raises(GraphError, match="invalid k"):
        build_inout(-3)


def test_s2_exact():
    g = build_inout(2)
    assert g.graph.order == 3
    assert g.graph.arcs == {(1, 2), (2, 1), (2, 3), (3, 2)}
    assert g.incoming == (1, 3)
    assert g.outgoing == (3, 1)


def test_s3_exact():
    g = build_inout(3)
    assert g.graph.order == 6
    path = {(v, v + 1) for v in range(1, 6)}
    assert g.graph.arcs == path | {(1, 5), (2, 1), (3, 2), (5, 1), (6, 4)}
    assert g.incoming == (1, 3, 6)
    assert g.outgoing == (6, 4, 3)


def test_s4_exact():
    g = build_inout(4)
    assert g.graph.order == 7
    undirected = set()
    for a, b in ((2, 3), (3, 4), (4, 5)):
        undirected |= {(a, b), (b, a)}
    directed = {(1, 2), (2, 7), (5, 6), (6, 1), (6, 5), (7, 6)}
    assert g.graph.arcs == undirected | directed
    assert g.incoming == (1, 3, 5, 7)
    assert g.outgoing == (3, 7, 1, 5)


def test_s5_shape():
    g = build_inout(5)
    assert g.graph.order == 9
    assert g.graph.arc_count == 17
    assert g.incoming == (1, 3, 5, 7, 9)
    assert g.outgoing == (9, 7, 1, 3, 5)


@pytest.mark.parametrize("k", range(1, 13))
def test_order_and_arc_formulas(k):
    g = build_inout(k)
    assert g.graph.order == (6 if k == 3 else 2 * k - 1)
    if k == 1:
        expected = 0
    elif k == 3:
        expected = 10
    elif k % 2 == 0:
        expected = 4 * k - 4
    else:
        expected = 4 * k - 3
    assert g.graph.arc_count == expected


def test_path_k3_from_listing():
    assert canonical_path(3, 1).vertices == (1, 2, 3, 4, 5, 6)
    assert canonical_path(3, 2).vertices == (3, 2, 1, 5, 6, 4)
    assert canonical_path(3, 3).vertices == (6, 4, 5, 1, 2, 3)


def test_path_trivial_and_small():
    assert canonical_path(1, 1).vertices == (1,)
    assert canonical_path(2, 1).vertices == (1, 2, 3)
    assert canonical_path(2, 2).vertices == (3, 2, 1)


def test_path_k5_j1_vertex_order():
    assert canonical_path(5, 1).vertices == tuple(range(1, 10))


def test_path_k4_j4():
    assert canonical_path(4, 4).vertices == (7, 6, 1, 2, 3, 4, 5)


def test_path_index_out_of_range():
    with pytest.raises(GraphError):
        canonical_path(4, 0)
    with pytest.raises(GraphError):
        canonical_path(4, 5)


@pytest.mark.parametrize("k", range(1, 11))
def test_paths_are_hamiltonian_with_right_endpoints(k):
    g = build_inout(k)
    for j in range(1, k + 1):
        p = canonical_path(k, j)
        assert sorted(p.vertices) == list(range(1, g.graph.order + 1))
        assert p.vertices[0] == g.incoming[j - 1]
        assert p.vertices[-1] == g.outgoing[j - 1]
        for u, w in p.arcs:
            assert g.graph.has_arc(u, w)


@pytest.mark.parametrize("k,expected", [
    (1, 0), (2, 0), (3, 0), (4, 0), (5, 1), (6, 0), (7, 0), (8, 0),
    (9, 1), (10, 0), (11, 0), (12, 0), (13, 1),
])
def test_layout_crossings(k, expected):
    assert layout(k).crossings == expected


def test_crossing_count_empty_graph():
    g = build_inout(1)
    assert crossing_count(layout(1), g.graph) == 0


def test_crossing_count_rejects_degenerate_layouts():
    g = build_inout(2).graph
    with pytest.raises(GraphError, match="coincident"):
        crossing_count(Layout({1: (0, 0), 2: (0, 0), 3: (1, 0)}), g)
    # vertex 3 sits inside the drawn segment 1-2
    bad = Layout({1: (0, 0), 2: (4, 0), 3: (2, 0)})
    with pytest.raises(GraphError, match="lies on segment"):
        crossing_count(bad, g)
    with pytest.raises(GraphError, match="missing vertex"):
        crossing_count(Layout({1: (0, 0), 2: (1, 0)}), g)


def test_crossing_count_detects_a_crossing():
    from inout import DiGraph

    g = DiGraph.from_arcs(4, [(1, 2), (3, 4)])
    lay = Layout({1: (0, 0), 2: (2, 2), 3: (0, 2), 4: (2, 0)})
    assert crossing_count(lay, g) == 1
    # sharing an endpoint never counts
    g2 = DiGraph.from_arcs(3, [(1, 2), (1, 3)])
    lay2 = Layout({1: (0, 0), 2: (2, 2), 3: (2, 0)})
    assert crossing_count(lay2, g2) == 0


def test_layout_covers_all_vertices():
    for k in range(1, 13):
        lay = layout(k)
        g = build_inout(k)
        assert set(lay.coords) == set(range(1, g.graph.order + 1))


def test_wide_k_sweep():
    # canonical_path validates Hamiltonicity, endpoints and arc existence
    # internally, so this drives every recipe branch well past the small
    # cases; the layout invariant is checked alongside
    for k in range(1, 41):
        for j in range(1, k + 1):
            canonical_path(k, j)
        expected = 1 if k >= 5 and k % 4 == 1 else 0
        assert layout(k).crossings == expected, k
