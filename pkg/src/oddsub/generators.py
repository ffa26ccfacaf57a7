"""Seeded graph families.

Random families draw from numpy's PCG64 bit generator seeded through
``SeedSequence(seed, spawn_key=(index,))``, so instance ``index`` of a
campaign is reproducible on its own and independent of the others.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .graph import Graph, build_graph
from .io import parse_edge_list

FAMILIES = ("path", "cycle", "star", "c5_union", "hk",
            "random_tree", "random_sp", "random_subcubic")
DEFAULT_P2 = 0.6


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: Optional[int] = None
    k: Optional[int] = None
    seed: int = 0
    p2: float = DEFAULT_P2
    index: Optional[int] = None


def make_rng(seed: int, index: Optional[int] = None) -> np.random.Generator:
    if index is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def path(n: int) -> Graph:
    if n < 2:
        raise FamilyError("path needs n >= 2")
    return build_graph([(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise FamilyError("cycle needs n >= 3")
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """K_{1,n-1}; vertex 0 is the centre."""
    if n < 2:
        raise FamilyError("star needs n >= 2")
    return build_graph([(0, i) for i in range(1, n)])


def c5_union(k: int) -> Graph:
    if k < 1:
        raise FamilyError("c5_union needs k >= 1")
    return build_graph([(5 * c + i, 5 * c + (i + 1) % 5) for c in range(k) for i in range(5)])


def hk(k: int) -> Graph:
    """The extremal graphs H_1..H_4 (treewidth k, f = 2)."""
    if k == 1:
        return path(4)
    if k == 2:
        return cycle(5)
    if k in (3, 4):
        text = resources.files("oddsub").joinpath(f"assets/h{k}.txt").read_text(encoding="ascii")
        return parse_edge_list(text.splitlines())
    raise FamilyError(f"hk defined for k in 1..4, got {k}")


def random_tree(n: int, seed: int = 0, index: Optional[int] = None) -> Graph:
    """Uniform labelled tree on 0..n-1 by decoding a random Pruefer sequence."""
    if n < 2:
        raise FamilyError("random_tree needs n >= 2")
    if n == 2:
        return build_graph([(0, 1)])
    rng = make_rng(seed, index)
    seq = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return build_graph(edges)


def random_sp(n: int, p2: float = DEFAULT_P2, seed: int = 0,
              index: Optional[int] = None) -> Graph:
    """Grow a connected partial 2-tree from one edge.  Each new vertex joins
    both ends of a uniformly random edge with probability ``p2``, otherwise one
    uniformly random existing vertex."""
    if n < 2:
        raise FamilyError("random_sp needs n >= 2")
    if not 0.0 <= p2 <= 1.0:
        raise FamilyError("p2 must lie in [0, 1]")
    rng = make_rng(seed, index)
    edges = [(0, 1)]
    coins = rng.random(n)
    picks = rng.random(n)
    for v in range(2, n):
        if coins[v] < p2:
            a, b = edges[int(picks[v] * len(edges))]
            edges.append((a, v))
            edges.append((b, v))
        else:
            edges.append((int(picks[v] * v), v))
    return build_graph(edges)


def random_subcubic(n: int, seed: int = 0, index: Optional[int] = None) -> Graph:
    """Connected graph with maximum degree 3: a random tree on free stubs,
    then a random number of extra edges between non-adjacent free-stub vertices."""
    if n < 2:
        raise FamilyError("random_subcubic needs n >= 2")
    rng = make_rng(seed, index)
    adj: list[set[int]] = [set() for _ in range(n)]
    free = [0]
    for v in range(1, n):
        a = free[int(rng.integers(len(free)))]
        adj[a].add(v)
        adj[v].add(a)
        if len(adj[a]) == 3:
            free.remove(a)
        free.append(v)
    extra = int(rng.integers(0, n // 2 + 1))
    for _ in range(extra):
        cands = [v for v in range(n) if len(adj[v]) < 3]
        while cands:
            a = cands[int(rng.integers(len(cands)))]
            partners = [b for b in cands if b != a and b not in adj[a]]
            if partners:
                b = partners[int(rng.integers(len(partners)))]
                adj[a].add(b)
                adj[b].add(a)
                break
            cands.remove(a)
        else:
            break
    return Graph({v: adj[v] for v in range(n)})


def generate(spec: FamilySpec) -> Graph:
    f = spec.family
    if f == "path":
        return path(_need(spec.n, "n"))
    if f == "cycle":
        return cycle(_need(spec.n, "n"))
    if f == "star":
        return star(_need(spec.n, "n"))
    if f == "c5_union":
        return c5_union(_need(spec.k, "k"))
    if f == "hk":
        return hk(_need(spec.k, "k"))
    if f == "random_tree":
        return random_tree(_need(spec.n, "n"), spec.seed, spec.index)
    if f == "random_sp":
        return random_sp(_need(spec.n, "n"), spec.p2, spec.seed, spec.index)
    if f == "random_subcubic":
        return random_subcubic(_need(spec.n, "n"), spec.seed, spec.index)
    raise FamilyError(f"unknown family {f!r}; expected one of {', '.join(FAMILIES)}")


def _need(value: Optional[int], name: str) -> int:
    if value is None:
        raise FamilyError(f"family needs --{name}")
    return int(value)
