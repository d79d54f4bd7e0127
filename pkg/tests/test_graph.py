import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsumm.errors import DegenerateGraphError, EdgeListParseError, EmptyGraphError
from graphsumm.graph import (Graph, induced_subgraph, input_size_bits, load_edge_list,
                             write_edge_list)
from graphsumm.synthetic import random_graph

# 2 * 88234 * log2(4039), evaluated with 40-digit arithmetic
EGO_FACEBOOK_BITS = 2114048.2459813123


def test_cleaning_drops_loops_and_duplicates():
    g = load_edge_list(b"0 1\n1 0\n1 1\n1 2\n")
    assert g.num_nodes == 3
    assert g.num_edges == 2
    assert g.edges.tolist() == [[0, 1], [1, 2]]
    assert g.stats.self_loops_dropped == 1
    assert g.stats.duplicates_dropped == 1


def test_ids_remapped_in_first_seen_order():
    g = load_edge_list(b"10 20\n20 30\n")
    assert g.num_nodes == 3
    assert g.original_ids.tolist() == [10, 20, 30]
    assert g.edges.tolist() == [[0, 1], [1, 2]]


def test_comments_and_blank_lines():
    g = load_edge_list(b"# header\n% matrix market style\n\n5 7\n")
    assert g.num_edges == 1
    assert g.stats.comment_lines == 2


@pytest.mark.parametrize("text, lineno", [
    (b"0 1\n1 x\n", 2),
    (b"0 1\n\n1 2 3\n", 3),
    (b"7\n", 1),
    (b"0 1\n-1 2\n", 2),
])
def test_malformed_line_reports_line_number(text, lineno):
    with pytest.raises(EdgeListParseError) as info:
        load_edge_list(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_empty_after_cleaning():
    with pytest.raises(EmptyGraphError):
        load_edge_list(b"# nothing\n3 3\n")


def test_sources(tmp_path):
    text = "1 2\n2 3\n"
    path = tmp_path / "g.txt"
    path.write_text(text)
    expected = load_edge_list(text.encode())
    assert load_edge_list(path) == expected
    assert load_edge_list(str(path)) == expected
    assert load_edge_list(io.StringIO(text)) == expected
    assert load_edge_list(io.BytesIO(text.encode())) == expected


def test_input_size_examples():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7),
                          (0, 7), (0, 2), (1, 3)])
    assert g.num_nodes == 8 and g.num_edges == 10
    assert input_size_bits(g) == pytest.approx(60.0, abs=1e-12)
    assert input_size_bits(Graph.from_edges([(0, 1)])) == pytest.approx(2.0)


def test_input_size_ego_facebook_scale():
    g = random_graph(4039, 88234, seed=1)
    assert (g.num_nodes, g.num_edges) == (4039, 88234)
    assert input_size_bits(g) == pytest.approx(EGO_FACEBOOK_BITS, rel=1e-9)


def test_degenerate_size():
    with pytest.raises(DegenerateGraphError):
        input_size_bits(Graph(1, np.empty((0, 2))))
    with pytest.raises(DegenerateGraphError):
        input_size_bits(Graph(5, np.empty((0, 2))))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_graph_is_immutable():
    g = Graph.from_edges([(0, 1)])
    with pytest.raises(AttributeError):
        g.num_nodes = 5


def test_induced_subgraph():
    g = Graph.from_edges([(0, 1), (1, 2), (2, 3), (0, 3)])
    sub = induced_subgraph(g, [0, 1, 3])
    assert sub.num_nodes == 3
    assert sub.edges.tolist() == [[0, 1], [0, 2]]
    assert sub.original_ids.tolist() == [0, 1, 3]


raw_edges = st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)),
                     min_size=1, max_size=80)


@given(raw_edges)
@settings(max_examples=150, deadline=None)
def test_round_trip_identity(pairs):
    text = "".join(f"{a} {b}\n" for a, b in pairs)
    if all(a == b for a, b in pairs):
        with pytest.raises(EmptyGraphError):
            load_edge_list(text.encode())
        return
    g = load_edge_list(text.encode())
    buf = io.StringIO()
    write_edge_list(g, buf)
    again = load_edge_list(buf.getvalue().encode())
    assert again == g
    assert again.original_ids.tolist() == g.original_ids.tolist()


@given(raw_edges)
@settings(max_examples=150, deadline=None)
def test_adjacency_invariants(pairs):
    if all(a == b for a, b in pairs):
        return
    g = load_edge_list("".join(f"{a} {b}\n" for a, b in pairs).encode())
    assert g.degree().sum() == 2 * g.num_edges
    for u in range(g.num_nodes):
        nbrs = g.neighbors(u).tolist()
        assert u not in nbrs
        assert nbrs == sorted(set(nbrs))
        for v in nbrs:
            assert u in g.neighbors(v).tolist()
    assert (g.edges[:, 0] < g.edges[:, 1]).all()


@given(st.integers(3, 60), st.data())
def test_input_size_monotone_in_edges(n, data):
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = data.draw(st.integers(1, len(all_pairs) - 1))
    smaller = Graph(n, all_pairs[:m])
    larger = Graph(n, all_pairs[:m + 1])
    assert input_size_bits(larger) > input_size_bits(smaller)
