import random

import pytest

from graphcfg.complex import ResourceLimitError
from graphcfg.graph import load_fixture, subdivide
from graphcfg.planner import (
    PlanningError,
    _Space,
    all_configurations,
    diameter,
    heuristic,
    plan,
    reversal_configurations,
    reversal_distance,
)
from graphcfg.verify import bfs_distance_oracle, random_planning_instances
from oracles import check_moves, graph_distances


def test_y_transposition():
    g = subdivide(load_fixture("y"), 3)
    p = plan(g, ("v1", "v2"), ("v2", "v1"))
    assert p.length == 14
    assert check_moves(g.graph, p.start, p.goal, p.moves)
    assert plan(g, ("v1", "v2"), ("v2", "v1"), "astar").length == 14


def test_plans_are_valid_and_optimal():
    for g, s, t in random_planning_instances(40, seed=7):
        want = bfs_distance_oracle(g, len(s), s, t)
        for mode in ("bfs", "astar"):
            p = plan(g, s, t, mode)
            if want is None:
                assert not p.reachable
            else:
                assert p.reachable and p.length == want
                assert check_moves(g, s, t, p.moves)


def test_symmetry():
    for g, s, t in random_planning_instances(30, seed=11):
        a, b = plan(g, s, t), plan(g, t, s)
        assert a.reachable == b.reachable
        if a.reachable:
            assert a.length == b.length


def test_heuristic_is_admissible():
    g = subdivide(load_fixture("star3"), 3).graph
    rng = random.Random(3)
    configs = all_configurations(g, 2)
    for _ in range(60):
        s, t = rng.sample(configs, 2)
        s = tuple(g.vertices[i] for i in s)
        t = tuple(g.vertices[i] for i in t)
        p = plan(g, s, t)
        assert heuristic(g, s, t) <= p.length


def test_unreachable_components_differ():
    path = load_fixture("path")
    res = plan(path, ("p1", "p2"), ("p2", "p1"))
    assert not res.reachable
    assert res.components[0] != res.components[1]
    assert res.to_dict() == {"reachable": False, "components": list(res.components)}
    ok = plan(path, ("p0", "p2"), ("p1", "p3"))
    assert ok.reachable and ok.length == 2


def test_single_token_matches_graph_distance():
    g = load_fixture("h")
    dist = graph_distances(g)
    for a in g.vertices:
        for b in g.vertices:
            assert plan(g, (a,), (b,)).length == dist[g.index(a), g.index(b)]


def test_plan_json_layout():
    p = plan(load_fixture("y"), ("v1",), ("v2",))
    data = p.to_dict()
    assert list(data) == ["start", "goal", "moves", "length", "mode", "expanded", "min_token_gap"]
    assert data["moves"][0] == {"token": 0, "from": "v1", "to": "v0"}
    assert data["min_token_gap"] is None


def test_min_gap_two_tokens():
    p = plan(load_fixture("path"), ("p0", "p3"), ("p0", "p2"))
    assert p.min_token_gap == 2


def test_bad_inputs():
    y = load_fixture("y")
    with pytest.raises(PlanningError):
        plan(y, ("v1", "v1"), ("v2", "v3"))
    with pytest.raises(PlanningError):
        plan(y, ("v1",), ("nope",))
    with pytest.raises(PlanningError):
        plan(y, ("v1",), ("v2", "v3"))
    with pytest.raises(PlanningError):
        plan(y, ("v1",), ("v2",), mode="dfs")
    with pytest.raises(ResourceLimitError):
        plan(subdivide(y, 3), ("v1", "v2"), ("v2", "v1"), max_states=10)


def test_reversal_against_oracle_and_diameter():
    star = subdivide(load_fixture("star3"), 4)
    s, t = reversal_configurations(star, 3)
    assert s == tuple(reversed(t))
    d = reversal_distance(star, 3)
    assert d == bfs_distance_oracle(star, 3, s, t)
    assert d <= diameter(star, 3)[0]


def test_diameter_witness_is_realised():
    g = subdivide(load_fixture("y"), 3)
    value, (a, b) = diameter(g, 2)
    assert plan(g, a, b).length == value


def test_space_packing_is_injective():
    space = _Space(load_fixture("y"), 2)
    codes = {space.packed(s) for s in all_configurations(load_fixture("y"), 2)}
    assert len(codes) == 12
