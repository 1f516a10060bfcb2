"""End-to-end reproduction checks for the bundled fixtures.

Each check carries the value it expects, where that value comes from
(``paper``, ``derived`` or ``trivial``), the value computed here, and a verdict.
"""
from __future__ import annotations

import random
import time
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.sparse import coo_array
from scipy.sparse.csgraph import shortest_path

from .complex import UnfaithfulSubdivisionWarning, configuration_complex
from .formulas import (
    euler_closed,
    euler_recursive,
    rank_q,
    star_graph,
    verify_sigma_decomposition,
)
from .graph import Graph, essential_vertices, load_fixture, subdivide
from .invariants import betti_numbers, euler_characteristic, integral_homology, trim_betti
from .planner import (
    all_configurations,
    diameter,
    plan,
    reversal_configurations,
    reversal_distance,
)
from .reduction import collapse, reduced_betti


@dataclass
class Check:
    name: str
    group: str
    expected: Any
    computed: Any
    provenance: str
    passed: bool
    seconds: float = 0.0
    note: str = ""

    def to_dict(self, stable: bool = False) -> dict:
        out = {
            "name": self.name,
            "group": self.group,
            "expected": self.expected,
            "computed": self.computed,
            "provenance": self.provenance,
            "passed": self.passed,
        }
        if self.note:
            out["note"] = self.note
        if not stable:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class VerifyResult:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, stable: bool = False) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict(stable) for c in self.checks]}

    def format_table(self, stable: bool = False) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"{mark}  [{c.group}] {c.name}: expected {c.expected}, computed {c.computed} ({c.provenance})"
            if not stable:
                line += f"  {c.seconds:.2f}s"
            lines.append(line)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines) + "\n"


class _Recorder:
    def __init__(self, group: str):
        self.group = group
        self.checks: list[Check] = []

    def check(self, name: str, expected, compute: Callable[[], Any], provenance: str,
              compare: Callable[[Any, Any], bool] | None = None, note: str = "") -> None:
        t0 = time.perf_counter()
        try:
            computed = compute()
            ok = compare(expected, computed) if compare else computed == expected
        except Exception as exc:  # a crashing check is a failing check
            computed, ok = f"error: {exc}", False
        self.checks.append(Check(name, self.group, expected, computed, provenance, bool(ok),
                                 time.perf_counter() - t0, note))


def _complex(g: Graph, n: int, factor: int | None = None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnfaithfulSubdivisionWarning)
        return configuration_complex(g, n, factor)[1]


def _b1(betti: list[int]) -> int:
    return betti[1] if len(betti) > 1 else 0


# criterion 1
def radial_checks() -> list[Check]:
    rec = _Recorder("radial")
    grid = [(n, k) for n in range(1, 7) for k in range(3, 8)]

    def recursion_matches():
        t0 = time.perf_counter()
        bad = [(n, k) for n, k in grid if euler_recursive(n, k) != euler_closed(n, k)]
        bad += [(n, k) for n, k in grid if rank_q(n, k) != 1 - euler_closed(n, k)]
        return {"mismatches": bad, "under_1s": time.perf_counter() - t0 < 1.0}

    rec.check("recursion == closed form, Q == 1 - chi, N<=6, 3<=K<=7",
              {"mismatches": [], "under_1s": True}, recursion_matches, "paper")
    rec.check("Q(2,3)", 1, lambda: rank_q(2, 3), "paper")
    rec.check("Q(3,3)", 13, lambda: rank_q(3, 3), "paper")
    rec.check("Q(2,4)", 5, lambda: rank_q(2, 4), "derived")
    rec.check("chi(3,3)", -12, lambda: euler_closed(3, 3), "paper")
    return rec.checks


# criterion 2
FORMULA_COMPLEX_CASES = [(2, 3, 1, "paper"), (3, 3, 13, "paper"), (2, 4, 5, "derived"),
                         (2, 5, None, "derived"), (3, 4, None, "derived")]


def formula_complex_checks() -> list[Check]:
    rec = _Recorder("formula-complex")
    for n, k, expected, prov in FORMULA_COMPLEX_CASES:
        expected = rank_q(n, k) if expected is None else expected
        rec.check(f"b1 of collapsed C^{n}(star{k}) == Q", expected,
                  lambda n=n, k=k: _b1(reduced_betti(_complex(star_graph(k), n))), prov)
    return rec.checks


# criterion 3
def fixture_checks() -> list[Check]:
    rec = _Recorder("fixtures")
    y = load_fixture("y")
    rec.check("Y-graph N=2 chi", 0, lambda: euler_characteristic(_complex(y, 2)), "paper")
    rec.check("Y-graph N=2 Betti", [1, 1], lambda: trim_betti(betti_numbers(_complex(y, 2))), "paper")
    rec.check("star3 N=3 b1", 13, lambda: _b1(reduced_betti(_complex(load_fixture("star3"), 3))), "paper")
    h = load_fixture("h")
    rec.check("H-graph N=2 b1", 3, lambda: _b1(reduced_betti(_complex(h, 2))), "paper")
    rec.check("H-graph N=3 b1", 25, lambda: _b1(reduced_betti(_complex(h, 3))), "paper")
    rec.check("Q-graph N=2 b1", 3, lambda: _b1(reduced_betti(_complex(load_fixture("q"), 2))), "paper")
    circle = load_fixture("circle")
    rec.check("circle N=2 Betti", [1, 1], lambda: trim_betti(betti_numbers(_complex(circle, 2))), "paper")
    rec.check("circle N=3 Betti", [1, 1], lambda: trim_betti(betti_numbers(_complex(circle, 3))), "paper")
    return rec.checks


# criterion 4
def hgraph4_checks(factor: int = 3) -> list[Check]:
    rec = _Recorder("hgraph4")
    rec.check(f"H-graph N=4 factor {factor} collapsed [b1, b2]", [207, 6],
              lambda: reduced_betti(_complex(load_fixture("h"), 4, factor))[1:3], "derived")
    return rec.checks


# criterion 5
DIMENSION_CASES = [("y", (2, 3)), ("h", (2, 3)), ("q", (2, 3)), ("star3", (2, 3)),
                   ("star4", (2, 3)), ("star5", (2,))]


def dimension_checks() -> list[Check]:
    rec = _Recorder("dimension")
    for name, ns in DIMENSION_CASES:
        g = load_fixture(name)
        v = len(essential_vertices(g))
        for n in ns:
            rec.check(f"{name} N={n} collapsed dim <= V={v}", v,
                      lambda g=g, n=n: collapse(_complex(g, n)).dim_after, "paper",
                      compare=lambda bound, got: got <= bound)
    circle = load_fixture("circle")
    for n in (2, 3):
        rec.check(f"circle N={n} collapsed dim (V=0)", 1,
                  lambda n=n: collapse(_complex(circle, n)).dim_after, "paper")
    return rec.checks


# criterion 6
STRUCTURE_CASES = [("y", 2), ("y", 3), ("h", 2), ("q", 2), ("circle", 2), ("circle", 3),
                   ("star3", 2), ("star3", 3), ("star4", 2), ("star5", 2), ("path", 2), ("cycle5", 2)]


def _boundary_squares_vanish(c) -> bool:
    for d in range(2, len(c.f_vector)):
        prod = c.boundary_matrix(d - 1) @ c.boundary_matrix(d)
        if prod.count_nonzero():
            return False
    return True


def structure_checks() -> list[Check]:
    rec = _Recorder("structure")
    for name, n in STRUCTURE_CASES:
        g = load_fixture(name)
        c = _complex(g, n)
        rec.check(f"{name} N={n} boundary of boundary is zero", True, lambda c=c: _boundary_squares_vanish(c), "trivial")

        def collapse_invariance(c=c):
            res = collapse(c).residual
            return [euler_characteristic(res) == euler_characteristic(c), trim_betti(betti_numbers(res)) == trim_betti(betti_numbers(c))]

        rec.check(f"{name} N={n} chi and Betti unchanged by collapse", [True, True], collapse_invariance, "paper")

        def stability(g=g, n=n):
            return [trim_betti(reduced_betti(_complex(g, n, n + 1 + extra))) for extra in range(3)]

        rec.check(f"{name} N={n} Betti stable for factors {n + 1}..{n + 3}", True, stability, "derived",
                  compare=lambda _, got: all(b == got[0] for b in got))
    for name, n in (("y", 2), ("y", 3), ("star3", 2), ("star3", 3)):
        g = load_fixture(name)
        for p in essential_vertices(g):
            rec.check(f"{name} N={n} sigma decomposition at {p}", True,
                      lambda g=g, p=p, n=n: verify_sigma_decomposition(g, p, n).passed, "paper")
    return rec.checks


# criterion 7
TORSION_CASES = [("y", 2), ("y", 3), ("h", 2), ("q", 2), ("circle", 2), ("circle", 3),
                 ("star3", 2), ("star3", 3), ("star4", 2), ("cycle5", 2)]


def torsion_checks() -> list[Check]:
    rec = _Recorder("torsion")
    for name, n in TORSION_CASES:
        c = _complex(load_fixture(name), n)
        rec.check(f"{name} N={n} integral H1 torsion", [], lambda c=c: list(integral_homology(c, 1).torsion), "paper")
    return rec.checks


# criterion 8
def random_planning_instances(count: int = 100, seed: int = 20240611, max_states: int = 10**5):
    """Random connected graphs (a random tree plus a few chords, lightly
    subdivided) with random start and goal configurations."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nv = rng.randint(3, 7)
        verts = [f"u{i}" for i in range(nv)]
        edges = [(f"t{i}", verts[i], verts[rng.randrange(i)]) for i in range(1, nv)]
        present = {frozenset((u, v)) for _, u, v in edges}
        for j in range(rng.randint(0, 2)):
            u, v = rng.sample(verts, 2)
            if frozenset((u, v)) not in present:
                present.add(frozenset((u, v)))
                edges.append((f"c{j}", u, v))
        g = subdivide(Graph.from_edges(verts, edges), rng.choice((1, 2))).graph
        n = rng.randint(1, 3)
        states = 1
        for i in range(n):
            states *= g.n_vertices - i
        if states > max_states or g.n_vertices < n:
            continue
        start = tuple(rng.sample(g.vertices, n))
        goal = tuple(rng.sample(g.vertices, n))
        out.append((g, start, goal))
    return out


def bfs_distance_oracle(g, n: int, start, goal) -> int | None:
    """Distance in the configuration graph via scipy's all-pairs machinery."""
    graph = g.graph if hasattr(g, "graph") else g
    states = all_configurations(graph, n)
    index = {s: i for i, s in enumerate(states)}
    adj = {i: set() for i in range(graph.n_vertices)}
    for e in graph.edges:
        a, b = graph.index(e.u), graph.index(e.v)
        adj[a].add(b)
        adj[b].add(a)
    rows, cols = [], []
    for i, s in enumerate(states):
        occ = set(s)
        for t, v in enumerate(s):
            for w in adj[v]:
                if w not in occ:
                    rows.append(i)
                    cols.append(index[s[:t] + (w,) + s[t + 1:]])
    m = len(states)
    mat = coo_array((np.ones(len(rows)), (rows, cols)), shape=(m, m)).tocsr()
    src = index[tuple(graph.index(v) for v in start)]
    dst = index[tuple(graph.index(v) for v in goal)]
    d = shortest_path(mat, unweighted=True, indices=[src])[0, dst]
    return None if np.isinf(d) else int(d)


def planner_checks() -> list[Check]:
    rec = _Recorder("planner")

    def astar_vs_bfs():
        mismatches = 0
        for g, s, t in random_planning_instances():
            a, b = plan(g, s, t, "astar"), plan(g, s, t, "bfs")
            la = a.length if a.reachable else None
            lb = b.length if b.reachable else None
            mismatches += la != lb
        return mismatches

    rec.check("astar length == bfs length on 100 random instances (mismatches)", 0, astar_vs_bfs, "derived")
    path = load_fixture("path")
    rec.check("path transposition is unreachable", False,
              lambda: plan(path, ("p1", "p2"), ("p2", "p1")).reachable, "trivial")
    y = subdivide(load_fixture("y"), 3)

    def single_token():
        g = y.graph
        rows = [g.index(e.u) for e in g.edges]
        cols = [g.index(e.v) for e in g.edges]
        adj = coo_array((np.ones(len(rows)), (rows, cols)), shape=(g.n_vertices,) * 2)
        dist = shortest_path(adj, unweighted=True, directed=False)
        bad = 0
        for a in g.vertices:
            for b in g.vertices:
                bad += plan(y, (a,), (b,)).length != dist[g.index(a), g.index(b)]
        return bad

    rec.check("N=1 plan length == graph distance (mismatches)", 0, single_token, "trivial")
    star = subdivide(load_fixture("star3"), 4)
    expected = bfs_distance_oracle(star, 3, *reversal_configurations(star, 3))
    rec.check("3-token reversal on factor-4 star3 == exhaustive BFS", expected,
              lambda: reversal_distance(star, 3), "derived")

    def reversal_within_diameter():
        d, _ = diameter(star, 3)
        return {"reversal": reversal_distance(star, 3), "diameter": d}

    rec.check("3-token reversal <= component diameter", True, reversal_within_diameter, "derived",
              compare=lambda _, got: got["reversal"] <= got["diameter"])
    return rec.checks


GROUPS: dict[str, Callable[[], list[Check]]] = {
    "radial": radial_checks,
    "formula-complex": formula_complex_checks,
    "fixtures": fixture_checks,
    "hgraph4": hgraph4_checks,
    "dimension": dimension_checks,
    "structure": structure_checks,
    "torsion": torsion_checks,
    "planner": planner_checks,
}


def run_verify(filters: list[str] | None = None) -> VerifyResult:
    selected = filters or list(GROUPS)
    unknown = [f for f in selected if f not in GROUPS]
    if unknown:
        raise KeyError(f"unknown check group(s): {', '.join(unknown)}; choose from {', '.join(GROUPS)}")
    result = VerifyResult()
    for name in GROUPS:
        if name in selected:
            result.checks.extend(GROUPS[name]())
    return result
