import warnings

import numpy as np
import pytest

from graphcfg.complex import (
    ConfigCell,
    ResourceLimitError,
    UnfaithfulSubdivisionWarning,
    build_complex,
    configuration_complex,
    face_signs,
    sigma_subcomplex,
    sigma_union,
)
from graphcfg.graph import GraphError, load_fixture, subdivide
from oracles import gal_euler


def test_y_two_tokens_f_vector():
    _, c = configuration_complex(load_fixture("y"), 2)
    assert c.f_vector == [90, 144, 54]
    assert c.dim == 2


def test_cells_are_closure_disjoint():
    _, c = configuration_complex(load_fixture("star3"), 2)
    g = c.graph
    ends = {e.id: {e.u, e.v} for e in g.edges}
    for d in range(c.dim + 1):
        for cell in c.iter_cells(d):
            seen = set()
            for coord in cell.coordinates:
                kind, name = coord.split(":", 1)
                closure = {name} if kind == "v" else ends[name]
                assert not closure & seen
                seen |= closure
            assert cell.dimension == d


def test_index_of_roundtrip():
    _, c = configuration_complex(load_fixture("y"), 2)
    for d in range(c.dim + 1):
        for i in range(0, c.count(d), 7):
            assert c.index_of(c.cell(d, i)) == (d, i)
    with pytest.raises(KeyError):
        c.index_of(("v:v0", "v:v0"))


def test_boundary_squares_vanish():
    for name, n in [("y", 3), ("h", 2), ("q", 2), ("cycle5", 2)]:
        _, c = configuration_complex(load_fixture(name), n)
        for d in range(2, c.dim + 1):
            assert (c.boundary_matrix(d - 1) @ c.boundary_matrix(d)).count_nonzero() == 0


def test_face_signs_alternate():
    assert face_signs(1).tolist() == [1, -1]
    assert face_signs(2).tolist() == [1, -1, -1, 1]


def test_euler_matches_generating_function():
    for name, n in [("y", 2), ("y", 3), ("h", 2), ("q", 2), ("circle", 3), ("star4", 2)]:
        g = load_fixture(name)
        _, c = configuration_complex(g, n)
        chi = sum((-1) ** d * f for d, f in enumerate(c.f_vector))
        assert chi == gal_euler(g, n)


def test_more_tokens_than_fit():
    c = build_complex(load_fixture("path"), 5)
    assert c.n_cells == 0


def test_non_simple_graph_rejected():
    with pytest.raises(GraphError):
        build_complex(load_fixture("q"), 2)


def test_cell_cap(monkeypatch):
    with pytest.raises(ResourceLimitError):
        configuration_complex(load_fixture("h"), 3, cap=100)
    monkeypatch.setenv("GRAPHCFG_CELL_CAP", "50")
    with pytest.raises(ResourceLimitError):
        configuration_complex(load_fixture("y"), 2)


def test_unfaithful_factor_warns():
    with pytest.warns(UnfaithfulSubdivisionWarning):
        configuration_complex(load_fixture("y"), 3, factor=2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        configuration_complex(load_fixture("y"), 2, factor=3)


def test_sigma_pieces_are_subcomplexes():
    _, c = configuration_complex(load_fixture("y"), 2)
    s1 = sigma_subcomplex(c, "v0", 1)
    assert all(cell.coordinates[0] == "v:v0" for d in range(s1.dim + 1) for cell in s1.iter_cells(d))
    union = sigma_union(c, "v0")
    assert union.n_cells == s1.n_cells + sigma_subcomplex(c, "v0", 2).n_cells
    avoid = c.avoiding("v0")
    assert avoid.n_cells + union.n_cells < c.n_cells  # edge cells at v0 are in neither


def test_export_formats():
    sg = subdivide(load_fixture("path"), 1)
    c = build_complex(sg, 2)
    data = c.to_dict()
    assert data["f_vector"] == c.f_vector
    assert data["cells"][0][0] == list(c.cell(0, 0).coordinates)
    dot = c.to_dot()
    assert dot.startswith("graph") and dot.count("--") == c.count(1)
    with pytest.raises(ResourceLimitError):
        c.to_dot(max_vertices=1)


def test_config_cell_str():
    assert str(ConfigCell(("v:a", "e:x"))) == "(v:a, e:x)"
    assert ConfigCell(("v:a", "e:x")).dimension == 1


def test_subcomplex_rejects_unclosed_selection():
    _, c = configuration_complex(load_fixture("y"), 2)
    masks = [np.zeros(c.count(d), bool) for d in range(c.dim + 1)]
    masks[1][0] = True
    with pytest.raises(ValueError):
        c.subcomplex(masks)
