"""Simple undirected graphs and the neighbourhood statistics used by the reductions.

Vertex ids are arbitrary non-negative integers.  A :class:`Graph` is immutable;
operations that delete vertices return a new graph.

The neighbourhood helpers come in two flavours: public functions taking a
:class:`Graph`, and ``*_adj`` variants that work on any mapping
``vertex -> set of neighbours`` so the reduction engine can apply them to its
mutable working copy.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Collection
from typing import Optional


class GraphError(ValueError):
    """Malformed graph input or a vertex that is not in the graph."""


class Graph:
    __slots__ = ("_adj", "_vertices", "_m")

    def __init__(self, adj: Mapping[int, Iterable[int]]):
        fixed: dict[int, frozenset[int]] = {}
        for v, nbrs in adj.items():
            if v < 0:
                raise GraphError(f"negative vertex id {v}")
            fixed[v] = frozenset(nbrs)
        m2 = 0
        for v, nbrs in fixed.items():
            if v in nbrs:
                raise GraphError(f"self-loop at vertex {v}")
            for x in nbrs:
                if x not in fixed or v not in fixed[x]:
                    raise GraphError(f"asymmetric adjacency between {v} and {x}")
            m2 += len(nbrs)
        self._adj = fixed
        self._vertices = tuple(sorted(fixed))
        self._m = m2 // 2

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]],
                   vertices: Iterable[int] = ()) -> "Graph":
        return build_graph(edges, vertices)

    @property
    def adj(self) -> Mapping[int, frozenset[int]]:
        return self._adj

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(frozenset(self.edges())) ^ hash(self._vertices)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, nbrs in self._adj.items() for v in nbrs if u < v)

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj.values()), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self._adj.values()), default=0)

    def isolated_vertices(self) -> list[int]:
        return [v for v in self._vertices if not self._adj[v]]

    def remove_vertices(self, removed: Iterable[int]) -> "Graph":
        gone = set(removed)
        return Graph({v: nb - gone for v, nb in self._adj.items() if v not in gone})

    def relabeled(self) -> tuple["Graph", list[int]]:
        """Relabel to 0..n-1 in sorted order; returns (graph, old ids by new id)."""
        order = list(self._vertices)
        index = {v: i for i, v in enumerate(order)}
        return Graph({index[v]: [index[x] for x in self._adj[v]] for v in order}), order


def build_graph(edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> Graph:
    """Build a simple graph from an edge list; duplicate edges collapse.

    Isolated vertices exist only when listed in ``vertices``.
    """
    adj: dict[int, set[int]] = {int(v): set() for v in vertices}
    for pair in edges:
        u, v = (int(x) for x in pair)
        if u == v:
            raise GraphError(f"self-loop pair ({u}, {v})")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return Graph(adj)


def _check_subset(G: Graph, S: Iterable[int]) -> frozenset[int]:
    S = frozenset(S)
    for v in S:
        if v not in G:
            raise GraphError(f"vertex {v} not in graph")
    return S


def _check_vertex(G: Graph, *vs: int) -> None:
    for v in vs:
        if v not in G:
            raise GraphError(f"vertex {v} not in graph")


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    S = _check_subset(G, S)
    return Graph({v: G.adj[v] & S for v in S})


def is_odd_set(G: Graph, S: Iterable[int]) -> bool:
    """True iff every vertex of ``G[S]`` has odd degree (vacuously true for ``S = {}``)."""
    S = _check_subset(G, S)
    return odd_set_violation(G.adj, S) is None


def odd_set_violation(adj: Mapping[int, Collection[int]], S: Collection[int]) -> Optional[int]:
    """First vertex (smallest id) of ``S`` with even degree inside ``S``, or None."""
    for v in sorted(S):
        nb = adj[v]
        if len(nb) <= len(S):
            d = sum(1 for x in nb if x in S)
        else:
            d = sum(1 for x in S if x in nb)
        if d % 2 == 0:
            return v
    return None


def is_even_set(G: Graph, S: Iterable[int]) -> bool:
    """True iff every vertex of ``G[S]`` has even degree."""
    S = _check_subset(G, S)
    return all(len(G.adj[v] & S) % 2 == 0 for v in S)


# -- neighbourhood statistics -------------------------------------------------

def pendant_neighbors_adj(adj, u) -> set[int]:
    return {x for x in adj[u] if len(adj[x]) == 1}


def deg2_neighbors_adj(adj, u) -> set[int]:
    return {x for x in adj[u] if len(adj[x]) == 2}


def common_deg2_adj(adj, u, v) -> set[int]:
    au, av = adj[u], adj[v]
    if len(au) > len(av):
        au, av = av, au
    return {x for x in au if x in av and len(adj[x]) == 2}


def far_end(adj, z, u):
    """The neighbour of the degree-2 vertex ``z`` other than ``u``."""
    a, b = adj[z]
    return b if a == u else a


def s_set_adj(adj, u, limit: Optional[int] = None) -> set[int]:
    """Vertices x != u that are neighbours of degree >= 3, or share a degree-2
    common neighbour with u.  Stops early once the set exceeds ``limit``."""
    out: set[int] = set()
    for x in adj[u]:
        dx = len(adj[x])
        if dx >= 3:
            out.add(x)
        elif dx == 2:
            out.add(far_end(adj, x, u))
        if limit is not None and len(out) > limit:
            break
    return out


def pendant_neighbors(G: Graph, u: int) -> frozenset[int]:
    _check_vertex(G, u)
    return frozenset(pendant_neighbors_adj(G.adj, u))


def deg2_neighbors(G: Graph, u: int) -> frozenset[int]:
    _check_vertex(G, u)
    return frozenset(deg2_neighbors_adj(G.adj, u))


def common_deg2(G: Graph, u: int, v: int) -> frozenset[int]:
    _check_vertex(G, u, v)
    return frozenset(common_deg2_adj(G.adj, u, v))


def common_deg2_excl(G: Graph, v: int, w: int, u: int) -> frozenset[int]:
    _check_vertex(G, u, v, w)
    if v == w:
        raise GraphError("common_deg2_excl needs two distinct vertices")
    return frozenset(common_deg2_adj(G.adj, v, w) - {u})


def s_set(G: Graph, u: int) -> frozenset[int]:
    _check_vertex(G, u)
    return frozenset(s_set_adj(G.adj, u))


def d_big(G: Graph, u: int) -> int:
    return len(s_set(G, u))


# -- components ---------------------------------------------------------------

def components_adj(adj: Mapping[int, Collection[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for x in adj[v]:
                if x not in seen:
                    seen.add(x)
                    comp.append(x)
                    stack.append(x)
        comp.sort()
        comps.append(comp)
    return comps


def components(G: Graph) -> list[frozenset[int]]:
    return [frozenset(c) for c in components_adj(G.adj)]


def star_center_adj(adj, comp: Collection[int]) -> Optional[int]:
    k = len(comp)
    if k < 2:
        return None
    if k == 2:
        return min(comp)
    for v in comp:
        if len(adj[v]) == k - 1:
            if all(len(adj[x]) == 1 for x in adj[v]):
                return v
            return None
    return None


def is_star(G: Graph, component: Iterable[int]) -> Optional[int]:
    """Centre of ``component`` if it induces ``K_{1,m}`` (m >= 1), else None.

    For ``K2`` the smaller endpoint is the centre.
    """
    comp = _check_subset(G, component)
    return star_center_adj(G.adj, comp)
