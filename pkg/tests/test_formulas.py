import time
from math import factorial

import pytest

from graphcfg.formulas import (
    RadialParams,
    count_e,
    count_e_product,
    enumerate_distributions,
    euler_closed,
    euler_recursive,
    format_table,
    formula_table,
    multinomial,
    rank_q,
    star_graph,
    verify_sigma_decomposition,
)
from graphcfg.graph import GraphError, load_fixture
from oracles import gal_euler


def test_closed_form_against_generating_function():
    for k in range(3, 8):
        for n in range(1, 6):
            assert euler_closed(n, k) == gal_euler(star_graph(k), n)


def test_recursion_grid_is_fast():
    t0 = time.perf_counter()
    for n in range(1, 7):
        for k in range(3, 8):
            assert euler_recursive(n, k) == euler_closed(n, k)
            assert rank_q(n, k) == 1 - euler_closed(n, k)
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.parametrize("n, k, q", [(2, 3, 1), (3, 3, 13), (2, 4, 5), (2, 5, 11), (3, 4, 61)])
def test_known_ranks(n, k, q):
    assert rank_q(n, k) == q


def test_single_token_is_contractible():
    for k in range(3, 8):
        assert euler_closed(1, k) == 1
        assert count_e(1, k) == 1


def test_count_forms_agree():
    for n in range(1, 8):
        for k in range(3, 9):
            assert count_e(n, k) == count_e_product(n, k)
    assert count_e(3, 3) == 6


def test_params_validation():
    with pytest.raises(ValueError):
        RadialParams(0, 3)
    with pytest.raises(ValueError):
        RadialParams(2, 2)
    assert euler_closed(RadialParams(3, 3)) == -12


def test_distributions():
    d = enumerate_distributions(2, 3)
    assert d[0] == (2, 0, 0) and d[-1] == (0, 0, 2)
    assert len(d) == 6 and len(set(d)) == 6
    assert sum(multinomial(x) for x in enumerate_distributions(4, 3)) == 3**4
    assert multinomial((1, 1, 1)) == factorial(3)


@pytest.mark.parametrize("name, n", [("y", 2), ("y", 3), ("star3", 3), ("h", 2), ("star4", 2)])
def test_sigma_decomposition(name, n):
    g = load_fixture(name)
    for p in g.vertices:
        if g.degrees()[p] > 2:
            assert verify_sigma_decomposition(g, p, n).passed


def test_sigma_needs_essential_vertex_of_a_tree():
    with pytest.raises(GraphError):
        verify_sigma_decomposition(load_fixture("y"), "v1", 2)
    with pytest.raises(GraphError):
        verify_sigma_decomposition(load_fixture("q"), "c", 2)


def test_table_with_complex():
    rows = formula_table(3, 4, with_complex=True)
    by_key = {(r.n, r.k): r for r in rows}
    assert by_key[(3, 3)].q == 13 and by_key[(3, 3)].b1_complex == 13
    assert by_key[(2, 4)].b1_complex == 5
    text = format_table(rows)
    assert text.splitlines()[0].split() == ["N", "K", "E", "chi_closed", "chi_recursive", "Q", "b1_complex"]
    csv_text = format_table(rows, as_csv=True)
    assert "3,3,6,-12,-12,13,13" in csv_text
