"""Collision-free motion planning for labeled tokens on a graph.

States are tuples of distinct vertex indices, one per token. A move slides a
single token along an edge onto a vacant vertex; these are exactly the 1-cells
of the discretized configuration space.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np
from scipy.sparse import coo_array
from scipy.sparse.csgraph import connected_components, shortest_path

from .complex import ResourceLimitError
from .graph import Graph, GraphError, SubdividedGraph, essential_vertices

DEFAULT_STATE_CAP = 10**7

Configuration = tuple[str, ...]


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    token: int
    source: str
    target: str

    def to_dict(self) -> dict:
        return {"token": self.token, "from": self.source, "to": self.target}


@dataclass
class Plan:
    start: Configuration
    goal: Configuration
    moves: list[Move]
    mode: str
    expanded: int
    min_token_gap: int | None

    reachable = True

    @property
    def length(self) -> int:
        return len(self.moves)

    def to_dict(self) -> dict:
        return {
            "start": list(self.start),
            "goal": list(self.goal),
            "moves": [m.to_dict() for m in self.moves],
            "length": self.length,
            "mode": self.mode,
            "expanded": self.expanded,
            "min_token_gap": self.min_token_gap,
        }


@dataclass
class Unreachable:
    start: Configuration
    goal: Configuration
    components: tuple[int, int]
    expanded: int = 0

    reachable = False

    def to_dict(self) -> dict:
        return {"reachable": False, "components": list(self.components)}


@dataclass
class _Space:
    graph: Graph
    n: int
    adj: list[list[int]] = field(init=False)

    def __post_init__(self):
        g = self.graph
        adj: list[set[int]] = [set() for _ in g.vertices]
        for e in g.edges:
            if e.is_loop:
                continue
            a, b = g.index(e.u), g.index(e.v)
            adj[a].add(b)
            adj[b].add(a)
        self.adj = [sorted(s) for s in adj]

    def successors(self, state: tuple[int, ...]):
        occupied = set(state)
        for t, v in enumerate(state):
            for w in self.adj[v]:
                if w not in occupied:
                    yield t, state[:t] + (w,) + state[t + 1:]

    def encode(self, config) -> tuple[int, ...]:
        if len(config) != self.n:
            raise PlanningError(f"expected {self.n} tokens, got {len(config)}")
        try:
            state = tuple(self.graph.index(v) for v in config)
        except GraphError as exc:
            raise PlanningError(str(exc)) from None
        if len(set(state)) != len(state):
            raise PlanningError(f"tokens collide in configuration {tuple(config)}")
        return state

    def decode(self, state) -> Configuration:
        return tuple(self.graph.vertices[i] for i in state)

    def packed(self, state) -> int:
        code = 0
        for i in state:
            code = code * self.graph.n_vertices + i
        return code

    def distances_from(self, source: int) -> list[int]:
        dist = [-1] * self.graph.n_vertices
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def component_id(self, state, cap: int) -> int:
        """Smallest packed code among states reachable from ``state``."""
        seen = {state}
        queue = deque([state])
        while queue:
            s = queue.popleft()
            for _, nxt in self.successors(s):
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise ResourceLimitError(f"configuration component exceeds {cap} states")
                    queue.append(nxt)
        return min(self.packed(s) for s in seen)


def _graph(g: Graph | SubdividedGraph) -> Graph:
    return g.graph if isinstance(g, SubdividedGraph) else g


def plan(
    g: Graph | SubdividedGraph,
    start,
    goal,
    mode: str = "bfs",
    max_states: int = DEFAULT_STATE_CAP,
) -> Plan | Unreachable:
    """Shortest single-move plan from ``start`` to ``goal``.

    ``astar`` uses the sum of per-token graph distances to the goal, which
    changes by at most one per move and so never overestimates.
    """
    if mode not in ("bfs", "astar"):
        raise PlanningError(f"unknown search mode {mode!r}")
    start, goal = tuple(start), tuple(goal)
    space = _Space(_graph(g), len(start))
    s, t = space.encode(start), space.encode(goal)
    if mode == "bfs":
        parents, expanded = _bfs(space, s, t, max_states)
    else:
        parents, expanded = _astar(space, s, t, max_states)
    if t not in parents:
        ids = (space.component_id(s, max_states), space.component_id(t, max_states))
        return Unreachable(start, goal, ids, expanded)
    moves: list[Move] = []
    states = [t]
    cur = t
    while parents[cur] is not None:
        prev, token = parents[cur]
        moves.append(Move(token, space.graph.vertices[prev[token]], space.graph.vertices[cur[token]]))
        states.append(prev)
        cur = prev
    moves.reverse()
    return Plan(start, goal, moves, mode, expanded, _min_gap(space, states))


def _bfs(space: _Space, s, t, cap):
    parents = {s: None}
    queue = deque([s])
    expanded = 0
    while queue:
        cur = queue.popleft()
        expanded += 1
        if cur == t:
            break
        for token, nxt in space.successors(cur):
            if nxt not in parents:
                parents[nxt] = (cur, token)
                if len(parents) > cap:
                    raise ResourceLimitError(f"search exceeds {cap} states")
                queue.append(nxt)
    return parents, expanded


def _astar(space: _Space, s, t, cap):
    dist = [space.distances_from(v) for v in t]

    def h(state):
        total = 0
        for k, v in enumerate(state):
            d = dist[k][v]
            if d < 0:
                return None
            total += d
        return total

    h0 = h(s)
    parents = {s: None}
    if h0 is None:
        return parents, 0
    best = {s: 0}
    closed = set()
    tick = 0
    heap = [(h0, tick, 0, s)]
    expanded = 0
    while heap:
        _, _, cost, cur = heapq.heappop(heap)
        if cur in closed:
            continue
        closed.add(cur)
        expanded += 1
        if cur == t:
            break
        for token, nxt in space.successors(cur):
            ng = cost + 1
            if nxt in closed or ng >= best.get(nxt, ng + 1):
                continue
            hn = h(nxt)
            if hn is None:
                continue
            best[nxt] = ng
            parents[nxt] = (cur, token)
            if len(parents) > cap:
                raise ResourceLimitError(f"search exceeds {cap} states")
            tick += 1
            heapq.heappush(heap, (ng + hn, tick, ng, nxt))
    if t not in closed:
        parents.pop(t, None)
    return parents, expanded


def _min_gap(space: _Space, states) -> int | None:
    if space.n < 2:
        return None
    cache: dict[int, list[int]] = {}
    gap = None
    for state in states:
        for i in range(space.n):
            if state[i] not in cache:
                cache[state[i]] = space.distances_from(state[i])
            di = cache[state[i]]
            for j in range(i + 1, space.n):
                d = di[state[j]]
                if d >= 0 and (gap is None or d < gap):
                    gap = d
    return gap


def heuristic(g: Graph | SubdividedGraph, config, goal) -> int:
    """Sum over tokens of the graph distance to the token's goal vertex."""
    space = _Space(_graph(g), len(goal))
    s, t = space.encode(config), space.encode(goal)
    return sum(space.distances_from(b)[a] for a, b in zip(s, t))


def all_configurations(g: Graph | SubdividedGraph, n: int, cap: int = DEFAULT_STATE_CAP) -> list[tuple[int, ...]]:
    nv = _graph(g).n_vertices
    count = 1
    for i in range(n):
        count *= max(nv - i, 0)
    if count > cap:
        raise ResourceLimitError(f"{count} configurations exceed the state cap {cap}")
    return list(permutations(range(nv), n))


def diameter(
    g: Graph | SubdividedGraph, n: int, max_states: int = DEFAULT_STATE_CAP
) -> tuple[int, tuple[Configuration, Configuration]]:
    """Diameter of the largest component of the configuration graph and a
    pair of configurations at that distance."""
    space = _Space(_graph(g), n)
    states = all_configurations(g, n, max_states)
    if not states:
        raise PlanningError("no configurations: more tokens than vertices")
    index = {s: i for i, s in enumerate(states)}
    rows, cols = [], []
    for i, s in enumerate(states):
        for _, nxt in space.successors(s):
            rows.append(i)
            cols.append(index[nxt])
    m = len(states)
    adj = coo_array((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, m)).tocsr()
    _, labels = connected_components(adj, directed=False)
    sizes = np.bincount(labels)
    biggest = int(np.argmax(sizes))  # first label wins ties
    members = np.nonzero(labels == biggest)[0]
    sub = adj[members][:, members]
    best, witness = -1, (0, 0)
    chunk = 256
    for lo in range(0, len(members), chunk):
        block = shortest_path(sub, unweighted=True, directed=False, indices=np.arange(lo, min(lo + chunk, len(members))))
        flat = int(np.argmax(block))
        value = int(block.flat[flat])
        if value > best:
            r, c = divmod(flat, block.shape[1])
            best, witness = value, (int(members[lo + r]), int(members[c]))
    a, b = witness
    return best, (space.decode(states[a]), space.decode(states[b]))


def star_prong(g: Graph | SubdividedGraph) -> tuple[str, list[str]]:
    """Centre of a (subdivided) star and the vertices of its first prong, centre excluded,
    ordered outward."""
    graph = _graph(g)
    centres = essential_vertices(graph)
    if len(centres) != 1 or not graph.is_tree():
        raise GraphError("expected a subdivided star: a tree with one essential vertex")
    space = _Space(graph, 1)
    centre = graph.index(centres[0])
    prong, prev, cur = [], centre, space.adj[centre][0]
    while True:
        prong.append(graph.vertices[cur])
        nxt = [w for w in space.adj[cur] if w != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
    return graph.vertices[centre], prong


def reversal_configurations(g: Graph | SubdividedGraph, n: int) -> tuple[Configuration, Configuration]:
    """Tokens 0..n-1 stacked from the leaf inward on the first prong, and the
    same positions with the order reversed."""
    _, prong = star_prong(g)
    if len(prong) < n:
        raise PlanningError(f"prong has {len(prong)} vertices, too short for {n} tokens")
    slots = prong[::-1][:n]  # leaf first
    return tuple(slots), tuple(reversed(slots))


def reversal_distance(g: Graph | SubdividedGraph, n: int, mode: str = "bfs") -> int:
    start, goal = reversal_configurations(g, n)
    result = plan(g, start, goal, mode)
    if not result.reachable:
        raise PlanningError("reversal is unreachable on this graph")
    return result.length
