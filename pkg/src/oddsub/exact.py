"""Ground-truth solvers: maximum odd induced subgraph, Gallai partition,
chromatic number."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from . import _kernels
from .decomposition import (
    FORGET, INTRODUCE, JOIN, LEAF, DecompositionError, NiceTreeDecomposition,
    StuckCore, recognize_tw2, to_nice, validate_decomposition,
)
from .graph import Graph

BRUTE_CAP = 24
CHROMATIC_CAP = 12


class SolverRefused(ValueError):
    """Input outside the solver's supported size."""


class GallaiViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class MoisResult:
    size: int
    witness: tuple[int, ...]

    def to_json(self, method: str) -> dict:
        return {"f": self.size, "witness": list(self.witness), "method": method}


@dataclass(frozen=True)
class EvenPartition:
    side_a: frozenset[int]
    side_b: frozenset[int]


def _adjmask(G: Graph) -> tuple[np.ndarray, tuple[int, ...]]:
    order = G.vertices
    index = {v: i for i, v in enumerate(order)}
    masks = np.zeros(len(order), dtype=np.int64)
    for v in order:
        m = 0
        for x in G.adj[v]:
            m |= 1 << index[x]
        masks[index[v]] = m
    return masks, order


def mois_brute(G: Graph, cap: int = BRUTE_CAP) -> MoisResult:
    """Exhaustive maximum odd induced subgraph (lexicographically smallest optimum)."""
    if G.n > cap:
        raise SolverRefused(f"mois_brute limited to {cap} vertices (got {G.n}); use mois_dp")
    if G.n == 0:
        return MoisResult(0, ())
    masks, order = _adjmask(G)
    best = _kernels.brute_search(masks)
    wit = tuple(order[i] for i in range(len(order)) if (best >> i) & 1)
    return MoisResult(len(wit), wit)


def nice_arrays(G: Graph, ntd: NiceTreeDecomposition):
    """Flatten a nice decomposition into the arrays the DP kernel consumes."""
    order = G.vertices
    index = {v: i for i, v in enumerate(order)}
    N = len(ntd.nodes)
    kind = np.zeros(N, dtype=np.int64)
    left = np.full(N, -1, dtype=np.int64)
    right = np.full(N, -1, dtype=np.int64)
    bagsize = np.zeros(N, dtype=np.int64)
    pos = np.zeros(N, dtype=np.int64)
    vertex = np.full(N, -1, dtype=np.int64)
    nbrmask = np.zeros(N, dtype=np.int64)
    codes = {LEAF: _kernels.KIND_LEAF, INTRODUCE: _kernels.KIND_INTRO,
             FORGET: _kernels.KIND_FORGET, JOIN: _kernels.KIND_JOIN}
    for i, nd in enumerate(ntd.nodes):
        kind[i] = codes[nd.kind]
        bagsize[i] = len(nd.bag)
        if nd.children:
            left[i] = nd.children[0]
            if len(nd.children) > 1:
                right[i] = nd.children[1]
        if nd.kind == INTRODUCE:
            pos[i] = nd.bag.index(nd.vertex)
            vertex[i] = index[nd.vertex]
        elif nd.kind == FORGET:
            cbag = ntd.nodes[nd.children[0]].bag
            pos[i] = cbag.index(nd.vertex)
            vertex[i] = index[nd.vertex]
            nb = G.adj[nd.vertex]
            m = 0
            for q, x in enumerate(cbag):
                if x in nb:
                    m |= 1 << q
            nbrmask[i] = m
    return kind, left, right, bagsize, pos, vertex, nbrmask


def mois_dp(G: Graph, ntd: Optional[NiceTreeDecomposition] = None,
            validate: bool = True) -> MoisResult:
    """Exact maximum odd induced subgraph by DP over a width-<=2 nice decomposition.

    Without ``ntd`` one is built via :func:`recognize_tw2`.
    """
    if G.n == 0:
        return MoisResult(0, ())
    if ntd is None:
        td = recognize_tw2(G)
        if isinstance(td, StuckCore):
            raise DecompositionError("graph has treewidth > 2; mois_dp needs a width-2 decomposition")
        ntd = to_nice(td)
    elif validate:
        ok, msg = validate_decomposition(G, ntd)
        if not ok:
            raise DecompositionError(msg)
    if ntd.width > 2:
        raise DecompositionError("mois_dp supports width <= 2 only")
    kind, left, right, bagsize, pos, vertex, nbrmask = nice_arrays(G, ntd)
    val, bp1, bp2 = _kernels.mois_dp_tables(kind, left, right, bagsize, pos, nbrmask)
    chosen = _kernels.mois_dp_witness(kind, left, right, pos, vertex, val, bp1, bp2)
    order = G.vertices
    wit = tuple(order[i] for i in np.flatnonzero(chosen))
    size = int(val[len(ntd.nodes) - 1, 0])
    if size != len(wit):
        raise RuntimeError("DP witness reconstruction mismatch")
    return MoisResult(size, wit)


def gallai_partition(G: Graph) -> EvenPartition:
    """Split V(G) into two sets that each induce an all-even-degree subgraph.

    Unknown x_v is the side of v.  For every v:
    ``sum_{u in N(v)} x_u + d(v) x_v = d(v)  (mod 2)``.
    Solved by Gaussian elimination over GF(2) with rows as Python int bitsets;
    free variables are set to 0.
    """
    order = G.vertices
    n = len(order)
    index = {v: i for i, v in enumerate(order)}
    rhs_bit = 1 << n
    rows = []
    for v in order:
        d = G.degree(v)
        r = 0
        for x in G.adj[v]:
            r |= 1 << index[x]
        if d % 2:
            r |= (1 << index[v]) | rhs_bit
        rows.append(r)
    pivots: list[tuple[int, int]] = []  # (column, row)
    rank = 0
    for col in range(n):
        bit = 1 << col
        p = next((i for i in range(rank, n) if rows[i] & bit), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pr = rows[rank]
        for i in range(n):
            if i != rank and rows[i] & bit:
                rows[i] ^= pr
        pivots.append((col, rank))
        rank += 1
    for i in range(rank, n):
        if rows[i] & rhs_bit:
            raise GallaiViolation("parity system inconsistent")
    x = [0] * n
    for col, r in pivots:
        x[col] = 1 if rows[r] & rhs_bit else 0
    side_a = frozenset(order[i] for i in range(n) if x[i] == 0)
    side_b = frozenset(order[i] for i in range(n) if x[i] == 1)
    return EvenPartition(side_a, side_b)


def max_even_subgraph(G: Graph) -> frozenset[int]:
    part = gallai_partition(G)
    a, b = part.side_a, part.side_b
    if len(a) != len(b):
        return a if len(a) > len(b) else b
    return a if sorted(a) <= sorted(b) else b


def chromatic_brute(G: Graph, cap: int = CHROMATIC_CAP) -> int:
    """Smallest k admitting a proper k-colouring, by exhaustive search over k = 1, 2, ..."""
    if G.n > cap:
        raise SolverRefused(f"chromatic_brute limited to {cap} vertices (got {G.n})")
    if G.n == 0:
        return 0
    order = sorted(G.vertices, key=lambda v: (-G.degree(v), v))
    index = {v: i for i, v in enumerate(order)}
    earlier = [[index[x] for x in G.adj[v] if index[x] < i] for i, v in enumerate(order)]
    for k in range(1, G.n + 1):
        colour = [-1] * len(order)

        def place(i: int, used: int) -> bool:
            if i == len(order):
                return True
            banned = {colour[j] for j in earlier[i]}
            # a fresh colour is interchangeable with any other fresh one
            for c in range(min(k, used + 1)):
                if c in banned:
                    continue
                colour[i] = c
                if place(i + 1, max(used, c + 1)):
                    return True
            colour[i] = -1
            return False

        if place(0, 0):
            return k
    raise AssertionError("unreachable")


def chromatic_exhaustive(G: Graph) -> int:
    """Plain enumeration of all k^n colourings; slow independent cross-check."""
    verts = G.vertices
    if not verts:
        return 0
    edges = [(verts.index(a), verts.index(b)) for a, b in G.edges()]
    for k in range(1, len(verts) + 1):
        for col in product(range(k), repeat=len(verts)):
            if all(col[a] != col[b] for a, b in edges):
                return k
    raise AssertionError("unreachable")
