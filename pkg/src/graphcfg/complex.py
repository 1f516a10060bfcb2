"""Discretized configuration spaces of labeled tokens on a simple graph.

A cell is an ordered N-tuple of graph cells (vertices or edges) whose
closures are pairwise disjoint; its dimension is the number of edge entries.
Internally a graph cell is an integer code: vertex i -> i, edge j -> nV + j.
Cells of each dimension are stored as rows of an (f_d, N) array sorted
lexicographically, which is also the order of their packed integer keys.
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from .graph import Graph, GraphError, SubdividedGraph, subdivide
from .unionfind import UnionFind

DEFAULT_CELL_CAP = 10**8


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded."""


class UnfaithfulSubdivisionWarning(UserWarning):
    pass


def cell_cap() -> int:
    value = os.environ.get("GRAPHCFG_CELL_CAP")
    return int(value) if value else DEFAULT_CELL_CAP


@dataclass(frozen=True)
class ConfigCell:
    """Coordinates are ``v:<vertex-id>`` or ``e:<edge-id>`` strings, one per token."""

    coordinates: tuple[str, ...]

    @property
    def dimension(self) -> int:
        return sum(c.startswith("e:") for c in self.coordinates)

    def __str__(self) -> str:
        return "(" + ", ".join(self.coordinates) + ")"


def face_signs(d: int) -> np.ndarray:
    """Incidence signs matching the column layout of ``CubeComplex.faces[d]``.

    Faces are listed per edge coordinate k = 1..d (in token order) as
    [lower endpoint, higher endpoint]; the sign is (-1)^k times -1 for the
    lower and +1 for the higher endpoint in graph vertex order.
    """
    signs = np.empty(2 * d, dtype=np.int64)
    for k in range(1, d + 1):
        s = -1 if k % 2 else 1
        signs[2 * k - 2] = -s
        signs[2 * k - 1] = s
    return signs


class CubeComplex:
    def __init__(self, graph: Graph, n_tokens: int, cells: list[np.ndarray], faces: list[np.ndarray]):
        self.graph = graph
        self.n_tokens = n_tokens
        self.cells = cells
        self.faces = faces
        nv = graph.n_vertices
        self._base = nv + graph.n_edges
        self._weights = np.array([self._base ** (n_tokens - 1 - t) for t in range(n_tokens)], dtype=np.int64)
        self.keys = [arr.astype(np.int64) @ self._weights if len(arr) else np.zeros(0, np.int64) for arr in cells]
        lo, hi = _edge_endpoints(graph)
        self._lo, self._hi = lo, hi

    # -- sizes ---------------------------------------------------------
    @property
    def f_vector(self) -> list[int]:
        f = [len(a) for a in self.cells]
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        return f

    @property
    def dim(self) -> int:
        f = self.f_vector
        return len(f) - 1 if f[-1] else -1

    @property
    def n_cells(self) -> int:
        return sum(len(a) for a in self.cells)

    def count(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    # -- cells ---------------------------------------------------------
    def _label(self, code: int) -> str:
        nv = self.graph.n_vertices
        if code < nv:
            return "v:" + self.graph.vertices[code]
        return "e:" + self.graph.edges[code - nv].id

    def cell(self, d: int, i: int) -> ConfigCell:
        return ConfigCell(tuple(self._label(int(c)) for c in self.cells[d][i]))

    def iter_cells(self, d: int):
        for i in range(self.count(d)):
            yield self.cell(d, i)

    def encode(self, cell: ConfigCell | tuple[str, ...]) -> np.ndarray:
        coords = cell.coordinates if isinstance(cell, ConfigCell) else tuple(cell)
        if len(coords) != self.n_tokens:
            raise ValueError(f"expected {self.n_tokens} coordinates, got {len(coords)}")
        edge_index = {e.id: j for j, e in enumerate(self.graph.edges)}
        out = []
        for c in coords:
            kind, _, name = c.partition(":")
            if kind == "v":
                out.append(self.graph.index(name))
            elif kind == "e" and name in edge_index:
                out.append(self.graph.n_vertices + edge_index[name])
            else:
                raise ValueError(f"bad cell coordinate {c!r}")
        return np.array(out, dtype=np.int64)

    def index_of(self, cell: ConfigCell | tuple[str, ...]) -> tuple[int, int]:
        """(dimension, index) of a cell; KeyError if it is not in the complex."""
        codes = self.encode(cell)
        d = int((codes >= self.graph.n_vertices).sum())
        if d >= len(self.keys):
            raise KeyError(cell)
        key = int(codes @ self._weights)
        keys = self.keys[d]
        i = int(np.searchsorted(keys, key))
        if i == len(keys) or keys[i] != key:
            raise KeyError(cell)
        return d, i

    # -- boundary ------------------------------------------------------
    def boundary_matrix(self, d: int) -> sps.csc_array:
        """Signed boundary from d-cells to (d-1)-cells, shape (f_{d-1}, f_d)."""
        if not 1 <= d < len(self.cells):
            raise ValueError(f"dimension {d} out of range 1..{len(self.cells) - 1}")
        faces = self.faces[d]
        n = len(faces)
        rows = faces.ravel()
        cols = np.repeat(np.arange(n), 2 * d)
        data = np.tile(face_signs(d), n)
        return sps.csc_array((data, (rows, cols)), shape=(self.count(d - 1), n), dtype=np.int64)

    def cofaces(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """CSR-style (indptr, indices) listing the (d+1)-cofaces of each d-cell."""
        n = self.count(d)
        if d + 1 >= len(self.cells) or self.count(d + 1) == 0:
            return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
        faces = self.faces[d + 1]
        flat = faces.ravel()
        owners = np.repeat(np.arange(len(faces), dtype=np.int64), faces.shape[1])
        order = np.argsort(flat, kind="stable")
        counts = np.bincount(flat, minlength=n)
        indptr = np.concatenate([[0], np.cumsum(counts)])
        return indptr, owners[order]

    # -- subcomplexes --------------------------------------------------
    def subcomplex(self, masks: list[np.ndarray]) -> "CubeComplex":
        """Restriction to the selected cells; the selection must be closed under faces."""
        cells, faces = [], []
        remap_prev = None
        for d, (arr, mask) in enumerate(zip(self.cells, masks)):
            mask = np.asarray(mask, dtype=bool)
            cells.append(arr[mask])
            if d == 0:
                faces.append(np.zeros((int(mask.sum()), 0), dtype=np.int64))
            else:
                sub = self.faces[d][mask]
                if not masks[d - 1][sub].all():
                    raise ValueError(f"selection is not closed under faces in dimension {d}")
                faces.append(remap_prev[sub])
            remap_prev = np.cumsum(mask) - 1
        return CubeComplex(self.graph, self.n_tokens, cells, faces)

    def _closure_touches(self, vertex: int) -> list[np.ndarray]:
        """Per dimension: which cells have some coordinate whose closure contains ``vertex``."""
        nv = self.graph.n_vertices
        out = []
        for arr in self.cells:
            hit = arr == vertex
            is_edge = arr >= nv
            e = np.where(is_edge, arr - nv, 0)
            hit |= is_edge & ((self._lo[e] == vertex) | (self._hi[e] == vertex))
            out.append(hit.any(axis=1) if arr.size else np.zeros(len(arr), bool))
        return out

    def avoiding(self, vertex: str) -> "CubeComplex":
        """Full subcomplex of cells whose closures miss ``vertex``."""
        touches = self._closure_touches(self.graph.index(vertex))
        return self.subcomplex([~t for t in touches])

    # -- export --------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n_tokens": self.n_tokens,
            "f_vector": self.f_vector,
            "cells": [[list(self.cell(d, i).coordinates) for i in range(self.count(d))]
                      for d in range(len(self.f_vector))],
        }

    def to_dot(self, max_vertices: int = 10**4) -> str:
        if self.count(0) > max_vertices:
            raise ResourceLimitError(f"{self.count(0)} 0-cells exceeds the DOT export limit {max_vertices}")
        lines = ["graph configuration {"]
        for i in range(self.count(0)):
            lines.append(f'  {i} [label="{self.cell(0, i)}"];')
        if len(self.cells) > 1:
            for a, b in self.faces[1]:
                lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def one_skeleton_components(self) -> list[int]:
        """Component label (smallest member index) of each 0-cell."""
        uf = UnionFind(self.count(0))
        if len(self.cells) > 1:
            for a, b in self.faces[1].tolist():
                uf.union(a, b)
        return uf.labels()

    def __repr__(self) -> str:
        return f"CubeComplex(n_tokens={self.n_tokens}, f_vector={self.f_vector})"


def _edge_endpoints(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([g.index(e.u) for e in g.edges], dtype=np.int64)
    b = np.array([g.index(e.v) for e in g.edges], dtype=np.int64)
    return np.minimum(a, b), np.maximum(a, b)


def build_complex(g: SubdividedGraph | Graph, n: int, cap: int | None = None) -> CubeComplex:
    """Enumerate all ordered n-tuples of pairwise-disjoint closed cells of ``g``."""
    graph = g.graph if isinstance(g, SubdividedGraph) else g
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"token count must be >= 1, got {n!r}")
    if not graph.is_simple():
        raise GraphError("configuration complex needs a simple graph; subdivide first")
    cap = cell_cap() if cap is None else cap
    nv, ne = graph.n_vertices, graph.n_edges
    base = nv + ne
    if base ** n >= 2**62:
        raise ResourceLimitError(f"{base} graph cells and {n} tokens overflow the packed cell key")
    lo, hi = _edge_endpoints(graph)

    partial = np.zeros((1, 0), dtype=np.int32)
    occupied = np.zeros((1, nv), dtype=bool)
    for _ in range(n):
        new_partial, new_occupied = [], []
        total = 0
        for code in range(base):
            if code < nv:
                ok = ~occupied[:, code]
                closure = (code,)
            else:
                a, b = lo[code - nv], hi[code - nv]
                ok = ~(occupied[:, a] | occupied[:, b])
                closure = (a, b)
            k = int(ok.sum())
            if not k:
                continue
            total += k
            if total > cap:
                raise ResourceLimitError(f"configuration complex exceeds the cell cap of {cap}")
            p = np.empty((k, partial.shape[1] + 1), dtype=np.int32)
            p[:, :-1] = partial[ok]
            p[:, -1] = code
            o = occupied[ok].copy()
            o[:, list(closure)] = True
            new_partial.append(p)
            new_occupied.append(o)
        if not new_partial:
            partial = np.zeros((0, partial.shape[1] + 1), dtype=np.int32)
            occupied = np.zeros((0, nv), dtype=bool)
            break
        partial = np.concatenate(new_partial)
        occupied = np.concatenate(new_occupied)
    del occupied

    weights = np.array([base ** (n - 1 - t) for t in range(n)], dtype=np.int64)
    keys = partial.astype(np.int64) @ weights
    order = np.argsort(keys, kind="stable")
    partial, keys = partial[order], keys[order]
    dims = (partial >= nv).sum(axis=1)

    cells, key_list = [], []
    for d in range(n + 1):
        sel = dims == d
        cells.append(partial[sel])
        key_list.append(keys[sel])

    faces = [np.zeros((len(cells[0]), 0), dtype=np.int64)]
    for d in range(1, n + 1):
        faces.append(_faces(cells[d], key_list[d], key_list[d - 1], d, nv, lo, hi, weights))
    return CubeComplex(graph, n, cells, faces)


def _faces(arr, keys, lower_keys, d, nv, lo, hi, weights) -> np.ndarray:
    f = len(arr)
    out = np.empty((f, 2 * d), dtype=np.int64)
    if f == 0:
        return out
    is_edge = arr >= nv
    rank = np.cumsum(is_edge, axis=1)
    for t in range(arr.shape[1]):
        rows = np.nonzero(is_edge[:, t])[0]
        if not len(rows):
            continue
        e = arr[rows, t].astype(np.int64) - nv
        base = keys[rows] - arr[rows, t].astype(np.int64) * weights[t]
        col = 2 * (rank[rows, t] - 1)
        for offset, end in ((0, lo[e]), (1, hi[e])):
            target = base + end * weights[t]
            idx = np.searchsorted(lower_keys, target)
            if (idx >= len(lower_keys)).any() or (lower_keys[np.minimum(idx, len(lower_keys) - 1)] != target).any():
                raise AssertionError("face lookup failed; complex is not closed")
            out[rows, col + offset] = idx
    return out


def faithful_factor(n: int) -> int:
    return n + 1


def configuration_complex(
    g: Graph, n: int, factor: int | None = None, cap: int | None = None
) -> tuple[SubdividedGraph, CubeComplex]:
    """Subdivide ``g`` (default factor n+1) and build its n-token complex."""
    if factor is None:
        factor = faithful_factor(n)
    elif factor < faithful_factor(n):
        warnings.warn(
            f"subdivision factor {factor} is below {faithful_factor(n)} for {n} tokens; "
            "the discrete model may not match the configuration space",
            UnfaithfulSubdivisionWarning,
            stacklevel=2,
        )
    sg = subdivide(g, factor)
    return sg, build_complex(sg, n, cap=cap)


def sigma_subcomplex(c: CubeComplex, p: str, n: int) -> CubeComplex:
    """Cells whose n-th coordinate (1-based) is the vertex ``p``."""
    if not 1 <= n <= c.n_tokens:
        raise ValueError(f"token index {n} out of range 1..{c.n_tokens}")
    code = c.graph.index(p)
    return c.subcomplex([arr[:, n - 1] == code if len(arr) else np.zeros(0, bool) for arr in c.cells])


def sigma_union(c: CubeComplex, p: str) -> CubeComplex:
    """Cells with some token parked at ``p``."""
    code = c.graph.index(p)
    return c.subcomplex([(arr == code).any(axis=1) if len(arr) else np.zeros(0, bool) for arr in c.cells])
