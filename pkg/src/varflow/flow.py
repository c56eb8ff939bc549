"""Edmonds-Karp max-flow on a residual arc list.

Every call to :meth:`FlowGraph.add_edge` creates an arc and its reverse.
An undirected link is an arc pair where both directions start with the same
capacity, so flow pushed one way frees budget the other way.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, Hashable, List, Set

EPS = 1e-12


class FlowGraph:
    def __init__(self):
        self._head: List[Hashable] = []
        self._cap: List[float] = []
        self._adj: Dict[Hashable, List[int]] = {}

    def add_node(self, node: Hashable) -> None:
        self._adj.setdefault(node, [])

    def add_edge(self, u: Hashable, v: Hashable, cap: float, rev_cap: float = 0.0) -> int:
        """Add arc u->v; returns the arc index (its reverse is index ^ 1)."""
        self.add_node(u)
        self.add_node(v)
        idx = len(self._head)
        self._head += [v, u]
        self._cap += [float(cap), float(rev_cap)]
        self._adj[u].append(idx)
        self._adj[v].append(idx + 1)
        return idx

    def add_undirected(self, u: Hashable, v: Hashable, cap: float) -> int:
        return self.add_edge(u, v, cap, cap)

    def residual(self, arc: int) -> float:
        return self._cap[arc]

    def _bfs(self, s, t):
        parent = {s: None}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for arc in self._adj[x]:
                y = self._head[arc]
                if y not in parent and self._cap[arc] > EPS:
                    parent[y] = arc
                    if y == t:
                        return parent
                    queue.append(y)
        return None

    def max_flow(self, s: Hashable, t: Hashable, limit: float = float("inf")) -> float:
        """Push flow from s to t until no augmenting path remains or ``limit`` is reached."""
        self.add_node(s)
        self.add_node(t)
        total = 0.0
        while total < limit:
            parent = self._bfs(s, t)
            if parent is None:
                break
            push = limit - total
            y = t
            while y != s:
                arc = parent[y]
                push = min(push, self._cap[arc])
                y = self._head[arc ^ 1]
            y = t
            while y != s:
                arc = parent[y]
                self._cap[arc] -= push
                self._cap[arc ^ 1] += push
                y = self._head[arc ^ 1]
            total += push
        return total

    def reachable(self, s: Hashable) -> Set[Hashable]:
        """Vertices reachable from s through arcs with positive residual capacity."""
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for arc in self._adj.get(x, ()):
                y = self._head[arc]
                if y not in seen and self._cap[arc] > EPS:
                    seen.add(y)
                    queue.append(y)
        return seen
