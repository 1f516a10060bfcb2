"""Greedy elementary collapses on cube complexes.

Cells are ordered by (dimension, index). At every step the smallest cell
that is currently a free face (exactly one remaining coface) is removed
together with that coface. In a cube complex every incidence coefficient is
+-1, so this is always a legal elementary collapse.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .complex import CubeComplex, configuration_complex
from .graph import Graph, essential_vertices, is_circle
from .invariants import betti_numbers
from .linalg import DEFAULT_PRIME


@dataclass
class CollapseTrace:
    pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    residual: CubeComplex
    dim_before: int
    dim_after: int
    cells_before: int
    cells_after: int

    def to_dict(self, include_residual: bool = True) -> dict:
        out = {
            "dim_before": self.dim_before,
            "dim_after": self.dim_after,
            "cells_before": self.cells_before,
            "cells_after": self.cells_after,
            "pairs": [[list(a), list(b)] for a, b in self.pairs],
        }
        if include_residual:
            out["residual"] = self.residual.to_dict()
        return out


def collapse(c: CubeComplex) -> CollapseTrace:
    """Collapse free faces until none remain.

    Pairs are recorded as ((d, face index), (d + 1, coface index)) using the
    indexing of the input complex.
    """
    top = len(c.cells)
    alive = [bytearray(b"\x01") * c.count(d) for d in range(top)]
    faces = [c.faces[d].tolist() for d in range(top)]
    coface_ptr, coface_idx, remaining = [], [], []
    for d in range(top):
        ptr, idx = c.cofaces(d)
        coface_ptr.append(ptr.tolist())
        coface_idx.append(idx.tolist())
        remaining.append(np.diff(ptr).tolist())

    heap = [(d, i) for d in range(top) for i, k in enumerate(remaining[d]) if k == 1]
    heapq.heapify(heap)
    pairs = []
    while heap:
        d, i = heapq.heappop(heap)
        if not alive[d][i] or remaining[d][i] != 1:
            continue
        up_alive = alive[d + 1]
        ptr = coface_ptr[d]
        for j in coface_idx[d][ptr[i]:ptr[i + 1]]:
            if up_alive[j]:
                break
        else:  # pragma: no cover - guarded by the remaining count
            raise AssertionError("free face without a live coface")
        alive[d][i] = 0
        up_alive[j] = 0
        remaining[d][i] = 0
        pairs.append(((d, i), (d + 1, j)))
        rem = remaining[d]
        for f in faces[d + 1][j]:
            if f != i:
                rem[f] -= 1
                if rem[f] == 1 and alive[d][f]:
                    heapq.heappush(heap, (d, f))
        if d > 0:
            rem = remaining[d - 1]
            for f in faces[d][i]:
                rem[f] -= 1
                if rem[f] == 1 and alive[d - 1][f]:
                    heapq.heappush(heap, (d - 1, f))

    masks = [np.frombuffer(bytes(a), dtype=np.uint8).astype(bool) for a in alive]
    residual = c.subcomplex(masks)
    return CollapseTrace(pairs, residual, c.dim, residual.dim, c.n_cells, residual.n_cells)


def is_valid_trace(c: CubeComplex, pairs) -> bool:
    """Replay ``pairs`` on ``c`` checking the free-face condition at each step."""
    alive = [set(range(c.count(d))) for d in range(len(c.cells))]
    cof = {}
    for d in range(1, len(c.cells)):
        for j, fs in enumerate(c.faces[d].tolist()):
            for f in fs:
                cof.setdefault((d - 1, f), []).append(j)
    for (d, i), (d1, j) in pairs:
        if d1 != d + 1 or i not in alive[d] or j not in alive[d1]:
            return False
        live = [k for k in cof.get((d, i), []) if k in alive[d1]]
        if live != [j]:
            return False
        alive[d].discard(i)
        alive[d1].discard(j)
    return True


@dataclass(frozen=True)
class DimensionReport:
    essential: int
    dim_before: int
    dim_after: int
    circle: bool
    violation: bool

    def to_dict(self) -> dict:
        return {
            "V": self.essential,
            "dim_before": self.dim_before,
            "dim_after": self.dim_after,
            "is_circle": self.circle,
            "violation": self.violation,
        }


def dimension_report(g: Graph, n: int, factor: int | None = None) -> DimensionReport:
    circle = is_circle(g)  # also rejects disconnected graphs
    v = len(essential_vertices(g))
    _, c = configuration_complex(g, n, factor)
    trace = collapse(c)
    bound = 1 if circle else v
    return DimensionReport(v, trace.dim_before, trace.dim_after, circle, trace.dim_after > bound)


def reduced_betti(c: CubeComplex, prime: int = DEFAULT_PRIME) -> list[int]:
    """Betti numbers computed on the collapsed residual of ``c``."""
    return betti_numbers(collapse(c).residual, prime)
