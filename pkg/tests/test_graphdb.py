"""Storage graphs: construction, lookup maps, validation."""

import pytest

from graphspir.graphdb import Graph, build_graph, validate_graph


def test_path_graph_layout():
    g = build_graph("path", 4)
    assert g.n_servers == 4
    assert g.kind == "path"
    assert g.edges == ((1, 2), (2, 3), (3, 4))
    assert g.message_count == 3
    assert g.servers_of(2) == (2, 3)
    assert g.storage_of(1) == (1,)
    assert g.storage_of(2) == (1, 2)
    assert g.storage_of(4) == (3,)


def test_cycle_graph_layout():
    g = build_graph("cycle", 3)
    assert g.edges == ((1, 2), (2, 3), (1, 3))
    assert g.message_count == 3
    assert g.storage_of(1) == (1, 3)
    assert g.storage_of(2) == (1, 2)
    assert g.storage_of(3) == (2, 3)
    g5 = build_graph("cycle", 5)
    assert g5.edges == ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))
    assert all(len(g5.storage_of(n)) == 2 for n in range(1, 6))


def test_every_message_lives_on_exactly_two_servers():
    for kind, n in (("path", 3), ("path", 8), ("cycle", 3), ("cycle", 6)):
        g = build_graph(kind, n)
        for k in range(1, g.message_count + 1):
            i, j = g.servers_of(k)
            assert 1 <= i < j <= g.n_servers
            assert k in g.storage_of(i)
            assert k in g.storage_of(j)


def test_edges_are_normalized_to_sorted_pairs():
    g = Graph(n_servers=3, edges=((2, 1), (3, 2)), kind="custom")
    assert g.edges == ((1, 2), (2, 3))


def test_validate_graph_flags_bad_shapes():
    assert validate_graph(build_graph("path", 5)) is None
    assert validate_graph(build_graph("cycle", 4)) is None
    loop = Graph(n_servers=3, edges=((1, 1),), kind="custom")
    assert "single server" in validate_graph(loop)
    dup = Graph(n_servers=2, edges=((1, 2), (2, 1)), kind="custom")
    assert "duplicate" in validate_graph(dup)


def test_out_of_range_edges_are_rejected_eagerly():
    with pytest.raises(ValueError):
        Graph(n_servers=2, edges=((1, 3),), kind="custom")


def test_build_graph_rejects_tiny_or_unknown():
    with pytest.raises(ValueError):
        build_graph("path", 1)
    with pytest.raises(ValueError):
        build_graph("cycle", 2)
    with pytest.raises(ValueError):
        build_graph("star", 4)


def test_graph_serializes_to_plain_data():
    g = build_graph("path", 3)
    data = g.to_json()
    assert data["kind"] == "path"
    assert data["N"] == 3
    assert data["edges"] == [[1, 2], [2, 3]]
