"""Exact sparse elimination for boundary matrices.

Both routines eliminate one pivot at a time, choosing the sparsest remaining
column and, inside it, the sparsest row (a Markowitz-style rule). The modular
version works over GF(p); the integral version only pivots on units so that
it preserves the Smith normal form, and hands any leftover block to a dense
Smith normal form.
"""
from __future__ import annotations

import heapq

import scipy.sparse as sps

DEFAULT_PRIME = 1073741789


def _columns(matrix: sps.sparray, modulus: int | None = None) -> list[dict[int, int]]:
    m = sps.csc_array(matrix)
    m.sum_duplicates()
    cols: list[dict[int, int]] = []
    indptr, indices, data = m.indptr.tolist(), m.indices.tolist(), m.data.tolist()
    for j in range(m.shape[1]):
        col = {}
        for k in range(indptr[j], indptr[j + 1]):
            v = int(data[k])
            if modulus is not None:
                v %= modulus
            if v:
                col[indices[k]] = v
        cols.append(col)
    return cols


class _Eliminator:
    def __init__(self, cols: list[dict[int, int]]):
        self.cols = {j: c for j, c in enumerate(cols) if c}
        self.rows: dict[int, set[int]] = {}
        for j, col in self.cols.items():
            for r in col:
                self.rows.setdefault(r, set()).add(j)
        self.heap = [(len(c), j) for j, c in self.cols.items()]
        heapq.heapify(self.heap)

    def pop_column(self):
        while self.heap:
            size, j = heapq.heappop(self.heap)
            col = self.cols.get(j)
            if col is None:
                continue
            if len(col) != size:
                heapq.heappush(self.heap, (len(col), j))
                continue
            return j
        return None

    def eliminate(self, j: int, r: int, combine) -> None:
        """Clear row r from every other column using column j, then drop j."""
        pivot_col = self.cols[j]
        for j2 in list(self.rows[r]):
            if j2 == j:
                continue
            col2 = self.cols[j2]
            combine(col2, pivot_col, col2[r], pivot_col[r], j2)
            heapq.heappush(self.heap, (len(col2), j2))
        for rr in pivot_col:
            s = self.rows[rr]
            s.discard(j)
        del self.cols[j]

    def _set(self, col: dict[int, int], r: int, value: int, j: int) -> None:
        if value:
            if r not in col:
                self.rows.setdefault(r, set()).add(j)
            col[r] = value
        elif r in col:
            del col[r]
            self.rows[r].discard(j)


def rank_mod_p(matrix: sps.sparray, p: int = DEFAULT_PRIME) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p``."""
    if min(matrix.shape) == 0:
        return 0
    el = _Eliminator(_columns(matrix, p))

    def combine(col2, pivot_col, a, b, j2):
        factor = a * pow(b, p - 2, p) % p
        for rr, v in pivot_col.items():
            el._set(col2, rr, (col2.get(rr, 0) - factor * v) % p, j2)

    rank = 0
    while (j := el.pop_column()) is not None:
        col = el.cols[j]
        if not col:
            del el.cols[j]
            continue
        r = min(col, key=lambda rr: (len(el.rows[rr]), rr))
        el.eliminate(j, r, combine)
        rank += 1
    return rank


def smith_invariants(matrix: sps.sparray) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order.

    The count of returned factors is the rank over the rationals; factors
    greater than one are the torsion coefficients of the cokernel.
    """
    if min(matrix.shape) == 0:
        return []
    el = _Eliminator(_columns(matrix))

    def combine(col2, pivot_col, a, b, j2):
        factor = a * b  # b is a unit, so a / b == a * b
        for rr, v in pivot_col.items():
            el._set(col2, rr, col2.get(rr, 0) - factor * v, j2)

    unit_pivots = 0
    stuck: set[int] = set()
    while (j := el.pop_column()) is not None:
        col = el.cols[j]
        units = [rr for rr, v in col.items() if v in (1, -1)]
        if not units:
            stuck.add(j)
            continue
        stuck.discard(j)
        r = min(units, key=lambda rr: (len(el.rows[rr]), rr))
        el.eliminate(j, r, combine)
        unit_pivots += 1

    leftover = [j for j in sorted(stuck) if el.cols.get(j)]
    factors = [1] * unit_pivots
    if leftover:
        factors.extend(_dense_invariants([el.cols[j] for j in leftover]))
    return factors


def _dense_invariants(cols: list[dict[int, int]]) -> list[int]:
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    rows = sorted({r for c in cols for r in c})
    pos = {r: i for i, r in enumerate(rows)}
    dense = [[0] * len(cols) for _ in rows]
    for j, c in enumerate(cols):
        for r, v in c.items():
            dense[pos[r]][j] = v
    found = invariant_factors(Matrix(dense), domain=ZZ)
    return sorted((abs(int(x)) for x in found if x != 0))
