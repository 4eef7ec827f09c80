from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import PreconditionError, ResourceLimitError

Edge = Tuple[int, int]


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Immutable by convention; adjacency is precomputed and sorted so every
    traversal in the package enumerates neighbors in increasing vertex id.
    """

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm: Set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges: FrozenSet[Edge] = frozenset(norm)
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self._adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def closed_neighbors(self, v: int) -> Tuple[int, ...]:
        """N[v] sorted by vertex id (v merged into its neighbor list)."""
        out: List[int] = []
        placed = False
        for u in self._adj[v]:
            if not placed and v < u:
                out.append(v)
                placed = True
            out.append(u)
        if not placed:
            out.append(v)
        return tuple(out)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> Tuple["Graph", Tuple[int, ...]]:
        """Induced subgraph with dense ids. Returns (subgraph, old_ids) where
        new vertex i corresponds to old_ids[i]; old_ids is sorted."""
        old_ids = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(old_ids)}
        sub = [
            (index[u], index[v])
            for u, v in self.edges
            if u in index and v in index
        ]
        return Graph(len(old_ids), sub), old_ids

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complement(g: Graph) -> Graph:
    missing = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if (u, v) not in g.edges
    ]
    return Graph(g.n, missing)


def is_clique(g: Graph, vertices: Optional[Iterable[int]] = None) -> bool:
    """True when the given vertex set (default: all of g) is pairwise adjacent."""
    vs = sorted(set(vertices)) if vertices is not None else range(g.n)
    vs = list(vs)
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            if not g.has_edge(u, v):
                return False
    return True


def _reduce(adj: Dict[int, Set[int]], chosen: Set[int]) -> bool:
    """Apply safe reductions in place: drop isolated vertices, and for any
    degree-1 vertex put its neighbor in the cover. Returns False if the
    running cover already exceeds any budget the caller tracks separately
    (always True here; sizing is the caller's job)."""
    again = True
    while again:
        again = False
        for v in list(adj.keys()):
            nbrs = adj.get(v)
            if nbrs is None:
                continue
            if not nbrs:
                del adj[v]
                continue
            if len(nbrs) == 1:
                (u,) = nbrs
                chosen.add(u)
                for w in list(adj[u]):
                    adj[w].discard(u)
                del adj[u]
                del adj[v]
                again = True
    return True


def _vc_branch(adj: Dict[int, Set[int]], budget: int) -> Optional[int]:
    """Minimum vertex cover size of the graph in `adj`, or None if > budget."""
    chosen: Set[int] = set()
    _reduce(adj, chosen)
    base = len(chosen)
    if base > budget:
        return None
    if not adj:
        return base
    if budget == base:
        return None
    # branch on an endpoint of maximum degree: cover all edges at u, or keep
    # u out which forces every neighbor in
    u = max(adj, key=lambda v: (len(adj[v]), -v))
    best: Optional[int] = None

    sub = {v: set(ns) for v, ns in adj.items()}
    for w in sub.pop(u):
        sub[w].discard(u)
    r = _vc_branch(sub, budget - base - 1)
    if r is not None:
        best = base + 1 + r

    nbrs = adj[u]
    if base + len(nbrs) <= budget:
        sub = {v: set(ns) for v, ns in adj.items()}
        for x in nbrs:
            for w in sub.pop(x):
                sub[w].discard(x)
        inner_budget = (best - base - len(nbrs) - 1) if best is not None else (
            budget - base - len(nbrs)
        )
        if inner_budget >= 0:
            r = _vc_branch(sub, inner_budget)
            if r is not None:
                cand = base + len(nbrs) + r
                if best is None or cand < best:
                    best = cand
    return best


def _adj_map(g: Graph, exclude: Set[int]) -> Dict[int, Set[int]]:
    return {
        v: {u for u in g.neighbors(v) if u not in exclude}
        for v in range(g.n)
        if v not in exclude
    }


def min_vertex_cover(g: Graph, budget: int = 20) -> Optional[FrozenSet[int]]:
    """Exact minimum vertex cover, or None when every cover exceeds `budget`.

    Among all minimum covers the lexicographically smallest (as a sorted
    vertex tuple) is returned, so results are reproducible.
    """
    if budget < 0:
        return None
    size = _vc_branch(_adj_map(g, set()), budget)
    if size is None:
        return None
    chosen: Set[int] = set()
    while True:
        adj = _adj_map(g, chosen)
        if all(not ns for ns in adj.values()):
            break
        for v in range(g.n):
            if v in chosen or not adj.get(v):
                continue
            trial = chosen | {v}
            rest = _vc_branch(_adj_map(g, trial), size - len(trial))
            if rest is not None and len(trial) + rest == size:
                chosen.add(v)
                break
        else:
            raise AssertionError("cover reconstruction failed")
    return frozenset(chosen)


@dataclass(frozen=True)
class CliqueSplit:
    """Partition of the vertex set into a modulator and a clique remainder."""

    modulator: FrozenSet[int]
    clique: FrozenSet[int]

    @property
    def dc(self) -> int:
        return len(self.modulator)


def clique_split(g: Graph, budget: int = 20) -> CliqueSplit:
    """Smallest vertex set whose removal leaves a complete graph.

    Equals a minimum vertex cover of the complement. Raises
    ResourceLimitError when the distance to clique exceeds `budget`.
    """
    cover = min_vertex_cover(complement(g), budget)
    if cover is None:
        raise ResourceLimitError(
            f"distance to clique exceeds budget {budget}"
        )
    clique = frozenset(range(g.n)) - cover
    if not is_clique(g, clique):
        raise PreconditionError("internal: split remainder is not a clique")
    return CliqueSplit(modulator=cover, clique=clique)
