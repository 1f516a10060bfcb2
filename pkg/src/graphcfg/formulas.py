"""Closed forms for configuration spaces of radial trees, and checks of the
decomposition of a tree's configuration space at an essential vertex."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod

from .complex import build_complex, configuration_complex, sigma_subcomplex, sigma_union
from .graph import Graph, GraphError, essential_vertices, subdivide
from .invariants import betti_numbers, connected_components
from .reduction import collapse


@dataclass(frozen=True)
class RadialParams:
    """N labeled tokens on a star with K prongs."""

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"token count must be >= 1, got {self.n!r}")
        if not isinstance(self.k, int) or self.k < 3:
            raise ValueError(f"prong count must be >= 3, got {self.k!r}")


def _params(p, k=None) -> RadialParams:
    return p if isinstance(p, RadialParams) else RadialParams(p, k)


def _growth(n: int, k: int) -> int:
    # (NK - 2N - K + 1)(N+K-2)!/(K-1)!
    return (n * k - 2 * n - k + 1) * (factorial(n + k - 2) // factorial(k - 1))


def euler_closed(p: RadialParams | int, k: int | None = None) -> int:
    p = _params(p, k)
    return -_growth(p.n, p.k)


def rank_q(p: RadialParams | int, k: int | None = None) -> int:
    """Rank of the free fundamental group of a component of the star's configuration space."""
    p = _params(p, k)
    return 1 + _growth(p.n, p.k)


def count_e(p: RadialParams | int, k: int | None = None) -> int:
    """Components of the gluing set: (N+K-3)!/(K-2)!, the number of ways to
    place N-1 labeled tokens in order on K-1 disjoint prongs."""
    p = _params(p, k)
    return factorial(p.n + p.k - 3) // factorial(p.k - 2)


def count_e_product(p: RadialParams | int, k: int | None = None) -> int:
    """The same count as a rising product (K-1)K...(K+N-3)."""
    p = _params(p, k)
    return prod(p.k + i - 2 for i in range(1, p.n))


def euler_recursive(p: RadialParams | int, k: int | None = None) -> int:
    p = _params(p, k)
    return _euler_rec(p.n, p.k)


@lru_cache(maxsize=None)
def _euler_rec(n: int, k: int) -> int:
    if n == 1:
        return 1  # one token on a tree: contractible
    if k == 2:
        return factorial(n)  # an interval: n! contractible orderings
    gluing = factorial(n + k - 3) // factorial(k - 2)
    return _euler_rec(n, k - 1) + n * (_euler_rec(n - 1, k) - gluing)


def enumerate_distributions(n: int, k: int) -> list[tuple[int, ...]]:
    """All ordered k-tuples of non-negative integers summing to n, in decreasing
    lexicographic order (so (1,0,0) comes before (0,1,0))."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if k == 1:
        return [(n,)]
    return [(first, *rest) for first in range(n, -1, -1) for rest in enumerate_distributions(n - first, k - 1)]


def multinomial(parts: tuple[int, ...]) -> int:
    out, total = 1, 0
    for x in parts:
        total += x
        out *= comb(total, x)
    return out


@dataclass
class SigmaReport:
    vertex: str
    degree: int
    n_tokens: int
    factor: int
    sigma_components: int
    sigma_predicted: int
    per_token_components: list[int]
    complement_components: int
    complement_predicted: int

    @property
    def passed(self) -> bool:
        return (self.sigma_components == self.sigma_predicted
                and self.complement_components == self.complement_predicted)

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex, "degree": self.degree, "n_tokens": self.n_tokens, "factor": self.factor,
            "sigma_components": self.sigma_components, "sigma_predicted": self.sigma_predicted,
            "complement_components": self.complement_components,
            "complement_predicted": self.complement_predicted, "passed": self.passed,
        }


def _predicted_components(pieces: list[Graph], tokens: int, cache: dict) -> int:
    """Components of the configuration space of ``tokens`` labeled tokens on a
    disjoint union of graphs, from the per-piece counts."""
    total = 0
    for j in enumerate_distributions(tokens, len(pieces)):
        term = multinomial(j)
        for i, ji in enumerate(j):
            if ji == 0:
                continue
            key = (i, ji)
            if key not in cache:
                cache[key] = connected_components(build_complex(pieces[i], ji)) if pieces[i].n_vertices else 0
            term *= cache[key]
            if not term:
                break
        total += term
    return total


def verify_sigma_decomposition(g: Graph, p: str, n: int, factor: int | None = None) -> SigmaReport:
    """Compare component counts of the pinned-token subcomplex and of its
    complement against counts assembled from the branches at ``p``."""
    if not g.is_tree():
        raise GraphError("sigma decomposition check needs a tree")
    if p not in essential_vertices(g):
        raise GraphError(f"{p!r} is not an essential vertex")
    factor = n + 1 if factor is None else factor
    sg, c = configuration_complex(g, n, factor)
    degree = g.degrees()[p]

    per_token = [connected_components(sigma_subcomplex(c, p, t)) for t in range(1, n + 1)]
    sigma = connected_components(sigma_union(c, p))
    complement = connected_components(c.avoiding(p))

    # branches: the subdivided tree minus p and the edges at p
    star_cut = sg.graph.remove_vertices([p])
    pieces = star_cut.components()
    cache: dict = {}
    sigma_pred = n * _predicted_components(pieces, n - 1, cache)
    complement_pred = _predicted_components(pieces, n, cache)
    return SigmaReport(p, degree, n, factor, sigma, sigma_pred, per_token, complement, complement_pred)


def star_graph(k: int) -> Graph:
    return Graph.from_edges(["c", *(f"l{i}" for i in range(1, k + 1))],
                            [(f"p{i}", "c", f"l{i}") for i in range(1, k + 1)])


@dataclass
class FormulaRow:
    n: int
    k: int
    e: int
    euler_closed: int
    euler_recursive: int
    q: int
    b1_complex: int | None

    def as_list(self) -> list:
        return [self.n, self.k, self.e, self.euler_closed, self.euler_recursive, self.q,
                "" if self.b1_complex is None else self.b1_complex]


TABLE_HEADER = ["N", "K", "E", "chi_closed", "chi_recursive", "Q", "b1_complex"]


def formula_table(nmax: int, kmax: int, with_complex: bool = False, max_cells: int = 2 * 10**5) -> list[FormulaRow]:
    rows = []
    for n in range(1, nmax + 1):
        for k in range(3, kmax + 1):
            b1 = None
            if with_complex and _star_cells_estimate(n, k) <= max_cells:
                _, c = configuration_complex(star_graph(k), n)
                betti = betti_numbers(collapse(c).residual)
                b1 = betti[1] if len(betti) > 1 else 0
            rows.append(FormulaRow(n, k, count_e(n, k), euler_closed(n, k), euler_recursive(n, k), rank_q(n, k), b1))
    return rows


def _star_cells_estimate(n: int, k: int) -> int:
    # upper bound: ordered n-tuples of distinct graph cells
    cells = (k * (n + 1) + 1) + k * (n + 1)
    return prod(cells - i for i in range(n))


def format_table(rows: list[FormulaRow], as_csv: bool = False) -> str:
    if as_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        for r in rows:
            w.writerow(r.as_list())
        return buf.getvalue()
    cells = [TABLE_HEADER] + [[str(x) for x in r.as_list()] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(TABLE_HEADER))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells) + "\n"


def subdivided_star(k: int, factor: int):
    return subdivide(star_graph(k), factor)
