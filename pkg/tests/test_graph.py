import json

import pytest

from graphcfg.graph import (
    FIXTURES,
    Graph,
    GraphError,
    GraphParseError,
    essential_vertices,
    format_graph,
    is_circle,
    load_fixture,
    load_graph,
    parse_graph,
    subdivide,
)


def test_parse_basic_and_comments():
    g = parse_graph("# a path\nv a\nv b  # trailing\ne x a b\n")
    assert g.vertices == ("a", "b")
    assert [(e.id, e.u, e.v) for e in g.edges] == [("x", "a", "b")]


@pytest.mark.parametrize("text, line", [
    ("v a\ne x a b\n", 2),
    ("v a\nv a\n", 2),
    ("v a\nv b\ne x a b\ne x b a\n", 4),
    ("v a\nq a\n", 2),
    ("v a b\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(GraphParseError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_loop_degree_counts_twice():
    g = parse_graph("v c\nv t\ne loop c c\ne stem c t\n")
    assert g.degrees() == {"c": 3, "t": 1}
    assert not g.is_simple()
    assert essential_vertices(g) == ["c"]


def test_json_roundtrip(tmp_path):
    g = load_fixture("h")
    path = tmp_path / "h.json"
    path.write_text(json.dumps(g.to_dict()))
    assert load_graph(path) == g
    text = tmp_path / "h.graph"
    text.write_text(format_graph(g))
    assert load_graph(text) == g


@pytest.mark.parametrize("name, v, circle", [
    ("y", 1, False), ("h", 2, False), ("q", 1, False), ("cycle5", 0, True),
    ("circle", 0, True), ("star4", 1, False), ("path", 0, False),
])
def test_fixture_essential_counts(name, v, circle):
    g = load_fixture(name)
    assert len(essential_vertices(g)) == v
    assert is_circle(g) is circle


def test_all_fixtures_load_and_are_connected():
    for name in FIXTURES:
        assert load_fixture(name).is_connected()


def test_is_circle_rejects_disconnected():
    g = parse_graph("v a\nv b\n")
    with pytest.raises(GraphError):
        is_circle(g)


def test_subdivide_ids_and_counts():
    g = load_fixture("y")
    sg = subdivide(g, 3)
    assert sg.graph.n_vertices == 4 + 3 * 2
    assert sg.graph.n_edges == 9
    assert "e1#1" in sg.graph and "e1#2" in sg.graph
    assert sg.parent_edge["e1:3"] == ("e1", 3)
    assert sg.graph.first_betti() == g.first_betti()


def test_subdivide_makes_loops_simple():
    q = load_fixture("q")
    assert not subdivide(q, 2).graph.is_simple()  # parallel pair left by the loop
    assert subdivide(q, 3).graph.is_simple()


def test_subdivide_rejects_bad_factor_and_collisions():
    with pytest.raises(GraphError):
        subdivide(load_fixture("y"), 0)
    g = Graph.from_edges(["a", "b", "x#1"], [("x", "a", "b")])
    with pytest.raises(GraphError):
        subdivide(g, 2)


def test_remove_vertices_and_components():
    g = load_fixture("h").remove_vertices(["a"])
    parts = g.components()
    assert sorted(p.n_vertices for p in parts) == [1, 1, 3]
