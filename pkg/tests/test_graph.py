import pytest

from modview.graph import (
    Graph,
    GraphError,
    EdgeListParseError,
    MISSING_CATEGORY,
    connected_components,
    induced_subgraph,
    largest_component_subgraph,
    load_attributes,
    load_edge_list,
    quotient_graph,
)


def test_load_edge_list_tokens_and_degrees():
    g = load_edge_list("a b\nb c\n# comment\n\na c\n")
    assert g.node_count == 3
    assert g.edge_count == 3
    assert g.tokens == ("a", "b", "c")
    assert g.degrees == (2, 2, 2)


def test_load_edge_list_drops_duplicates_and_self_loops():
    g = load_edge_list("a b\nb a\na a\nb c\n")
    assert g.edge_count == 2
    assert g.ingest.duplicate_edges == 1
    assert g.ingest.self_loops == 1


def test_load_edge_list_reports_bad_line_number():
    with pytest.raises(EdgeListParseError) as err:
        load_edge_list("a b\njust-one-token\n")
    assert err.value.line_number == 2


def test_graph_rejects_non_simple_input():
    with pytest.raises(GraphError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 5)])


def test_connected_components_ordering():
    g = Graph(7, [(0, 1), (2, 3), (3, 4), (2, 4), (5, 6)])
    comps = connected_components(g)
    # largest first, ties broken by smallest member id
    assert comps[0] == frozenset({2, 3, 4})
    assert comps[1] == frozenset({0, 1})
    assert comps[2] == frozenset({5, 6})


def test_largest_component_subgraph_keeps_tokens():
    g = load_edge_list("a b\nc d\nd e\nc e\n")
    sub = largest_component_subgraph(g)
    assert sub.node_count == 3
    assert sub.tokens == ("c", "d", "e")
    assert sub.edge_count == 3


def test_induced_subgraph_relabels_ascending():
    g = Graph(6, [(0, 2), (2, 4), (4, 0), (1, 3)])
    sub = induced_subgraph(g, [4, 0, 2])
    assert sub.node_count == 3
    assert sub.edge_count == 3
    assert sub.tokens == (g.tokens[0], g.tokens[2], g.tokens[4])


def test_quotient_graph_counts_and_no_self_edges(planted):
    labels = [i // 5 for i in range(20)]
    qg = quotient_graph(planted, labels)
    assert qg.cluster_nodes == ((0, 5), (1, 5), (2, 5), (3, 5))
    # cycle of bridges: 4 quotient edges, weight 1 each
    assert sorted(qg.weighted_edges) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert all(w == 1 for w in qg.weighted_edges.values())
    assert qg.total_edge_weight == 4


def test_load_attributes_tab_and_comma():
    g = load_edge_list("a b\nb c\n")
    for sep in ("\t", ","):
        table = f"node{sep}kind\na{sep}x\nb{sep}y\n"
        gg = load_attributes(g, table)
        assert gg.attributes["kind"] == ("x", "y", MISSING_CATEGORY)


def test_load_attributes_duplicate_row_rejected():
    g = load_edge_list("a b\n")
    with pytest.raises(GraphError):
        load_attributes(g, "node\tkind\na\tx\na\ty\n")


def test_load_attributes_unknown_token_warns_not_errors():
    g = load_edge_list("a b\n")
    gg = load_attributes(g, "node\tkind\na\tx\nzz\ty\n")
    assert gg.attributes["kind"] == ("x", MISSING_CATEGORY)
    assert any("zz" in w for w in gg.attribute_warnings)
