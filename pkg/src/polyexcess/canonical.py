"""Canonical forms of incidence polytopes.

The vertex-facet incidence is treated as a bipartite graph.  Colour
refinement splits it into cells, and ties are broken by individualising one
node of a target cell at a time.  Each discrete colouring yields a
certificate; the smallest certificate over the search tree is the canonical
form.  Automorphisms found along the way prune equivalent branches.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ResourceLimitError
from .lattice import IncidencePolytope

DEFAULT_NODE_BUDGET = 200_000

Cert = Tuple[Tuple[int, ...], ...]


def _refine(col: List[int], adj: Sequence[Sequence[int]]) -> List[int]:
    ncells = len(set(col))
    while True:
        sigs = [(col[x], tuple(sorted(col[y] for y in nb))) for x, nb in enumerate(adj)]
        keys = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [keys[s] for s in sigs]
        if len(keys) == ncells:
            return new
        col, ncells = new, len(keys)


def _orbits(n: int, gens: List[List[int]]) -> List[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in enumerate(g):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    return [find(x) for x in range(n)]


class _Search:
    def __init__(self, P: IncidencePolytope, budget: int):
        n, m = P.n_vertices, len(P.facets)
        adj: List[List[int]] = [[] for _ in range(n + m)]
        for i, facet in enumerate(P.facets):
            for v in facet:
                adj[v].append(n + i)
                adj[n + i].append(v)
        self.n, self.m, self.adj = n, m, adj
        self.facets = P.facets
        self.budget = budget
        self.nodes = 0
        self.first: Optional[Tuple[Cert, List[int], List[int]]] = None
        self.best: Optional[Tuple[Cert, List[int], List[int]]] = None
        self.gens: List[List[int]] = []

    def cert(self, col: List[int]) -> Cert:
        n = self.n
        rows = sorted((col[n + i], tuple(sorted(col[v] for v in f)))
                      for i, f in enumerate(self.facets))
        return tuple(r for _, r in rows)

    def _jump(self, leaf, col: List[int], path: List[int]) -> Optional[int]:
        _, lab, other = leaf
        inv = [0] * len(col)
        for x, c in enumerate(col):
            inv[c] = x
        gamma = [inv[lab[x]] for x in range(len(col))]
        self.gens.append(gamma)
        j = 0
        while j < min(len(other), len(path)) and other[j] == path[j]:
            j += 1
        if j < len(path) and j < len(other) and gamma[other[j]] == path[j] \
                and all(gamma[x] == x for x in path[:j]):
            return j
        return None

    def leaf(self, col: List[int], path: List[int]) -> Optional[int]:
        c = self.cert(col)
        if self.first is None:
            self.first = self.best = (c, col, list(path))
            return None
        if c == self.first[0]:
            return self._jump(self.first, col, path)
        if c < self.best[0]:
            self.best = (c, col, list(path))
            return None
        if c == self.best[0]:
            return self._jump(self.best, col, path)
        return None

    def run(self, col: List[int], path: List[int]) -> Optional[int]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(
                f"canonical form search exceeded the node budget of {self.budget}")
        col = _refine(col, self.adj)
        cells: Dict[int, List[int]] = {}
        for x, c in enumerate(col):
            cells.setdefault(c, []).append(x)
        if len(cells) == len(col):
            return self.leaf(col, path)
        target = min((len(v), c) for c, v in cells.items() if len(v) > 1)[1]
        explored: List[int] = []
        level = len(path)
        for x in cells[target]:
            if explored:
                fixing = [g for g in self.gens if all(g[p] == p for p in path)]
                orb = _orbits(len(col), fixing)
                if any(orb[x] == orb[e] for e in explored):
                    continue
            explored.append(x)
            child = [2 * c + (0 if y == x else 1) for y, c in enumerate(col)]
            j = self.run(child, path + [x])
            if j is not None and j < level:
                return j
        return None


def canonical_form(P: IncidencePolytope, node_budget: int = DEFAULT_NODE_BUDGET) -> str:
    """String invariant under vertex and facet relabelling.

    Two polytopes of equal dimension have the same string exactly when their
    incidences are isomorphic.  Raises :class:`ResourceLimitError` if the
    search visits more than ``node_budget`` nodes.
    """
    cached = P._cache.get("canonical")
    if cached is not None:
        return cached
    s = _Search(P, node_budget)
    s.run([0] * s.n + [1] * s.m, [])
    cert = s.best[0]
    text = f"{P.dim}:{P.n_vertices}:" + ";".join(",".join(map(str, f)) for f in cert)
    P._cache["canonical"] = text
    return text


def invariants(P: IncidencePolytope) -> tuple:
    """Cheap relabelling-invariant summary used to reject non-isomorphic pairs."""
    return (P.dim, P.n_vertices, len(P.facets),
            tuple(sorted(len(f) for f in P.facets)),
            tuple(sorted(vf.bit_count() for vf in P.vertex_facets)))


def is_isomorphic(P: IncidencePolytope, Q: IncidencePolytope,
                  node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if invariants(P) != invariants(Q):
        return False
    return canonical_form(P, node_budget) == canonical_form(Q, node_budget)
