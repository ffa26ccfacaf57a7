"""Treewidth-2 recognition, tree decompositions and their nice form.

Recognition eliminates vertices of degree <= 2 (smallest id first), joining
the two neighbours of an eliminated degree-2 vertex.  A graph is a partial
2-tree exactly when this never gets stuck; when it does, the remaining graph
has minimum degree >= 3 and is a minor of the input.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Union

from .graph import Graph, s_set_adj


class DecompositionError(ValueError):
    pass


class LemmaViolation(RuntimeError):
    """No low-degree structure found; the input is not K4-minor free."""


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def __len__(self) -> int:
        return len(self.bags)

    def to_json(self) -> list[dict]:
        children: dict[int, list[int]] = {i: [] for i in range(len(self.bags))}
        parent = _orient(len(self.bags), self.tree_edges, 0)
        for c, p in parent.items():
            if p >= 0:
                children[p].append(c)
        return [{"id": i, "kind": "bag", "bag": sorted(b), "children": sorted(children[i])}
                for i, b in enumerate(self.bags)]


@dataclass(frozen=True)
class StuckCore:
    """Refusal witness: the part of the filled graph where every degree is >= 3."""
    core: Graph


LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class NiceNode:
    kind: str
    bag: tuple[int, ...]
    children: tuple[int, ...] = ()
    vertex: Optional[int] = None


@dataclass
class NiceTreeDecomposition:
    """Rooted nice decomposition.  ``nodes`` are in post-order: every child
    precedes its parent and the root is the last node."""
    nodes: list[NiceNode] = field(default_factory=list)

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def __len__(self) -> int:
        return len(self.nodes)

    def to_json(self) -> list[dict]:
        out = []
        for i, nd in enumerate(self.nodes):
            rec = {"id": i, "kind": nd.kind, "bag": list(nd.bag), "children": list(nd.children)}
            if nd.vertex is not None:
                rec["vertex"] = nd.vertex
            out.append(rec)
        return out


@dataclass(frozen=True)
class MinDegreeLE1:
    vertex: int


@dataclass(frozen=True)
class AdjacentTwoVertices:
    u: int
    v: int


@dataclass(frozen=True)
class HighDegreeSmallD:
    u: int


StructureWitness = Union[MinDegreeLE1, AdjacentTwoVertices, HighDegreeSmallD]


def _orient(n: int, edges, root: int) -> dict[int, int]:
    nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    parent = {root: -1} if n else {}
    stack = [root] if n else []
    while stack:
        x = stack.pop()
        for y in nbrs[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    return parent


def recognize_tw2(G: Graph) -> Union[TreeDecomposition, StuckCore]:
    adj = {v: set(nb) for v, nb in G.adj.items()}
    heap = [v for v in adj if len(adj[v]) <= 2]
    heapq.heapify(heap)
    order: list[int] = []
    bag_nbrs: dict[int, tuple[int, ...]] = {}
    position: dict[int, int] = {}
    while heap:
        v = heapq.heappop(heap)
        if v in position or len(adj[v]) > 2:
            continue
        nb = tuple(sorted(adj[v]))
        position[v] = len(order)
        order.append(v)
        bag_nbrs[v] = nb
        for x in nb:
            adj[x].discard(v)
        if len(nb) == 2:
            a, b = nb
            adj[a].add(b)
            adj[b].add(a)
        del adj[v]
        for x in nb:
            if len(adj[x]) <= 2:
                heapq.heappush(heap, x)
    if adj:
        return StuckCore(Graph(adj))

    # node i holds the bag of order[-1 - i]
    k = len(order)
    node_of = {v: k - 1 - position[v] for v in order}
    bags = [frozenset()] * k
    tree_edges = []
    for v in order:
        i = node_of[v]
        bags[i] = frozenset((v,) + bag_nbrs[v])
        if i == 0:
            continue
        if bag_nbrs[v]:
            first = min(bag_nbrs[v], key=position.__getitem__)
            tree_edges.append((node_of[first], i))
        else:
            tree_edges.append((0, i))
    return TreeDecomposition(tuple(bags), tuple(sorted(tree_edges)))


def validate_decomposition(G: Graph, td: Union[TreeDecomposition, NiceTreeDecomposition],
                           max_width: int = 2) -> tuple[bool, str]:
    """Check vertex coverage, edge coverage, connected occurrence and width.

    Returns ``(ok, diagnostic)``; the diagnostic names the first failed condition.
    """
    if isinstance(td, NiceTreeDecomposition):
        ok, msg = _validate_nice_shape(td)
        if not ok:
            return ok, msg
        bags = [frozenset(nd.bag) for nd in td.nodes]
        edges = [(c, i) for i, nd in enumerate(td.nodes) for c in nd.children]
    else:
        bags = list(td.bags)
        edges = list(td.tree_edges)
    n = len(bags)
    if G.n and n == 0:
        return False, "vertex coverage: empty decomposition"
    if len(edges) != max(n - 1, 0) or len(_orient(n, edges, 0)) != n:
        return False, "tree: node graph is not a tree"
    if max((len(b) for b in bags), default=0) - 1 > max_width:
        return False, f"width: exceeds {max_width}"
    occ: dict[int, list[int]] = {}
    for i, b in enumerate(bags):
        for v in b:
            if v not in G:
                return False, f"vertex coverage: bag {i} holds unknown vertex {v}"
            occ.setdefault(v, []).append(i)
    for v in G.vertices:
        if v not in occ:
            return False, f"vertex coverage: vertex {v} in no bag"
    for u, v in G.edges():
        if not any(v in bags[i] for i in occ[u]):
            return False, f"edge coverage: edge ({u}, {v}) in no bag"
    # a node subset of a tree is connected iff it spans (count - 1) tree edges
    inner = {v: 0 for v in occ}
    for a, b in edges:
        for v in bags[a] & bags[b]:
            inner[v] += 1
    for v, nodes in occ.items():
        if inner[v] != len(nodes) - 1:
            return False, f"connectivity: occurrences of vertex {v} are disconnected"
    return True, "ok"


def _validate_nice_shape(ntd: NiceTreeDecomposition) -> tuple[bool, str]:
    nodes = ntd.nodes
    if not nodes:
        return False, "nice: no nodes"
    if nodes[-1].bag:
        return False, "nice: root bag not empty"
    seen_child = set()
    for i, nd in enumerate(nodes):
        if any(c >= i for c in nd.children):
            return False, f"nice: node {i} not in post-order"
        for c in nd.children:
            if c in seen_child:
                return False, f"nice: node {c} has two parents"
            seen_child.add(c)
        bag = set(nd.bag)
        if list(nd.bag) != sorted(bag):
            return False, f"nice: node {i} bag not sorted"
        if nd.kind == LEAF:
            if nd.children or nd.bag:
                return False, f"nice: leaf {i} malformed"
        elif nd.kind in (INTRODUCE, FORGET):
            if len(nd.children) != 1:
                return False, f"nice: node {i} needs one child"
            cb = set(nodes[nd.children[0]].bag)
            want = (cb | {nd.vertex}) if nd.kind == INTRODUCE else (cb - {nd.vertex})
            ok = (nd.vertex not in cb) if nd.kind == INTRODUCE else (nd.vertex in cb)
            if not ok or bag != want:
                return False, f"nice: {nd.kind} node {i} malformed"
        elif nd.kind == JOIN:
            if len(nd.children) != 2 or any(set(nodes[c].bag) != bag for c in nd.children):
                return False, f"nice: join {i} malformed"
        else:
            return False, f"nice: unknown kind {nd.kind!r}"
    if len(seen_child) != len(nodes) - 1:
        return False, "nice: not a single rooted tree"
    return True, "ok"


def to_nice(td: TreeDecomposition, G: Optional[Graph] = None) -> NiceTreeDecomposition:
    """Convert to nice form rooted at node 0.  Passing ``G`` validates ``td`` first."""
    if G is not None:
        ok, msg = validate_decomposition(G, td, max_width=max(td.width, 0))
        if not ok:
            raise DecompositionError(msg)
    nodes: list[NiceNode] = []

    def add(kind, bag, children=(), vertex=None) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(children), vertex))
        return len(nodes) - 1

    def chain(top: int, frm: frozenset, to: frozenset) -> int:
        cur = set(frm)
        for v in sorted(frm - to):
            cur.discard(v)
            top = add(FORGET, cur, (top,), v)
        for v in sorted(to - frm):
            cur.add(v)
            top = add(INTRODUCE, cur, (top,), v)
        return top

    k = len(td.bags)
    if k == 0:
        add(LEAF, ())
        return NiceTreeDecomposition(nodes)
    parent = _orient(k, td.tree_edges, 0)
    kids: dict[int, list[int]] = {i: [] for i in range(k)}
    for c, p in parent.items():
        if p >= 0:
            kids[p].append(c)
    top_of: dict[int, int] = {}
    # iterative post-order over the decomposition tree
    stack = [(0, False)]
    while stack:
        i, done = stack.pop()
        if not done:
            stack.append((i, True))
            for c in sorted(kids[i], reverse=True):
                stack.append((c, False))
            continue
        bag = td.bags[i]
        if not kids[i]:
            top_of[i] = chain(add(LEAF, ()), frozenset(), bag)
            continue
        tops = [chain(top_of[c], td.bags[c], bag) for c in sorted(kids[i])]
        t = tops[0]
        for other in tops[1:]:
            t = add(JOIN, bag, (t, other))
        top_of[i] = t
    chain(top_of[0], td.bags[0], frozenset())
    return NiceTreeDecomposition(nodes)


def lwz_find(G: Graph) -> StructureWitness:
    """Locate a degree-<=1 vertex, two adjacent 2-vertices, or a vertex u with
    d(u) >= 3 and D(u) <= 2, searched in that order."""
    adj = G.adj
    if G.n == 0:
        raise LemmaViolation("empty graph")
    for v in G.vertices:
        if len(adj[v]) <= 1:
            return MinDegreeLE1(v)
    for v in G.vertices:
        if len(adj[v]) == 2:
            for x in sorted(adj[v]):
                if len(adj[x]) == 2:
                    return AdjacentTwoVertices(min(v, x), max(v, x))
    for v in G.vertices:
        if len(adj[v]) >= 3 and len(s_set_adj(adj, v, limit=2)) <= 2:
            return HighDegreeSmallD(v)
    raise LemmaViolation("no low-degree structure: graph has a K4 minor or the search is wrong")


def treewidth_brute(G: Graph) -> int:
    """Exact treewidth by trying every elimination order (tiny graphs only)."""
    from itertools import permutations

    verts = list(G.vertices)
    if len(verts) > 9:
        raise DecompositionError("treewidth_brute is limited to 9 vertices")
    if not verts:
        return -1
    best = len(verts) - 1
    for order in permutations(verts):
        adj = {v: set(G.adj[v]) for v in verts}
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for x in nb:
                adj[x].discard(v)
                adj[x] |= nb - {x}
        else:
            best = width
    return best
