"""Certified odd induced subgraphs of order >= 2n/5 on partial 2-trees.

Every reduction removes a small vertex set ``V0`` around a vertex ``u`` whose
anchor set ``S(u)`` has one or two members and whose *kit*
(``N1(u)`` plus the degree-2 paths from ``u`` to its anchors) is non-empty.
The rest of the graph is solved first.  Then a subset of ``V0`` is added back
to that solution, sometimes also swapping one residual vertex, so that every
degree stays odd.  Each step gains at least ``2/5 |V0|`` vertices.

Exceptional parameter combinations are recognised before the residual graph is
solved and routed to their own self-contained ``V0``.  So every step makes
exactly one residual call, and the driver can run the whole thing as a flat
loop: reduce forward until only small components and stars remain, then
assemble in reverse.

Branch labels (``L1/...``, ``L2/...``) name the case of the case analysis a
step came from; failures carry the label.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np

from .decomposition import StuckCore, lwz_find, HighDegreeSmallD, recognize_tw2
from .exact import mois_brute, mois_dp
from . import _kernels
from .graph import (
    Graph, common_deg2_adj, components_adj, induced_subgraph, odd_set_violation,
    pendant_neighbors_adj, s_set_adj, star_center_adj,
)

log = logging.getLogger(__name__)

TWO_FIFTHS = Fraction(2, 5)
DEFAULT_N0 = 16


class CaseTableDefect(RuntimeError):
    def __init__(self, branch: str, detail: str):
        super().__init__(f"{branch}: {detail}")
        self.branch = branch


class StructureExhaustion(RuntimeError):
    """No reducible configuration in a graph that should have one."""


# -- data --------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    kind: str                      # "star" | "lemma1" | "lemma2"
    u: int
    v: Optional[int] = None
    w: Optional[int] = None
    t1: int = 0
    t2: int = 0
    t3: Optional[int] = None
    uv_edge: Optional[bool] = None
    uw_edge: Optional[bool] = None


@dataclass(frozen=True)
class ReductionStep:
    branch: str
    removed: tuple[int, ...]
    added: tuple[int, ...]
    dropped: tuple[int, ...] = ()

    @property
    def gain(self) -> int:
        return len(self.added) - len(self.dropped)

    def ratio_ok(self) -> bool:
        return 5 * self.gain >= 2 * len(self.removed)

    def to_json(self) -> dict:
        rec = {"branch": self.branch, "removed": list(self.removed), "added": list(self.added)}
        if self.dropped:
            rec["dropped"] = list(self.dropped)
        return rec


@dataclass
class OddCertificate:
    set: frozenset[int]
    n: int
    trace: list[ReductionStep] = field(default_factory=list)
    fallback_used: bool = False
    ratio: Optional[Fraction] = None
    fallback_branches: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.ratio is None:
            self.ratio = Fraction(len(self.set), self.n) if self.n else Fraction(0)

    @property
    def size(self) -> int:
        return len(self.set)

    def to_json(self) -> dict:
        return {
            "set": sorted(self.set),
            "size": self.size,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "trace": [s.to_json() for s in self.trace],
            "fallback_used": self.fallback_used,
        }


# -- small helpers -------------------------------------------------------------

def _odd_prefix(items: Iterable[int]) -> list[int]:
    s = sorted(items)
    return s if len(s) % 2 else s[:-1]


def _even_prefix(items: Iterable[int]) -> list[int]:
    s = sorted(items)
    return s[:-1] if len(s) % 2 else s


def _fixed(added, dropped=()):
    added = frozenset(added)
    dropped = frozenset(dropped)
    return lambda inH: ("", added, dropped)


@dataclass
class _Plan:
    config: Configuration
    branch: str
    removed: frozenset
    assemble: Callable


# -- configurations -------------------------------------------------------------

def configuration_at(adj: Mapping, u: int) -> Optional[Configuration]:
    """Lemma configuration centred at ``u``, if ``1 <= D(u) <= 2`` and the kit
    is non-empty and disjoint from the anchors."""
    if not adj[u]:
        return None
    S = s_set_adj(adj, u, limit=2)
    if not 1 <= len(S) <= 2:
        return None
    n1u = pendant_neighbors_adj(adj, u)
    anchors = sorted(S)
    kits = [common_deg2_adj(adj, u, a) for a in anchors]
    if not n1u and not any(kits):
        return None
    for k in kits:
        if k & S:
            return None
    if n1u & S:
        return None
    au = adj[u]
    if len(anchors) == 1:
        v = anchors[0]
        return Configuration("lemma1", u, v, None, len(n1u), len(kits[0]), None, v in au, None)
    v, w = anchors
    return Configuration("lemma2", u, v, w, len(n1u), len(kits[0]), len(kits[1]), v in au, w in au)


def find_configuration(G: Graph) -> Configuration:
    """Cascade over a connected graph: star, pendant neighbour of low residual
    degree, adjacent 2-vertices, then the low-degree structure of ``G`` minus
    its pendant vertices.  Returns the first hit."""
    adj = G.adj
    if G.n == 0:
        raise StructureExhaustion("empty graph")
    centre = star_center_adj(adj, G.vertices)
    if centre is not None:
        return Configuration("star", centre)
    v1 = {v for v in G.vertices if len(adj[v]) == 1}
    P = sorted({x for v in v1 for x in adj[v]})
    for x in P:
        d1 = sum(1 for y in adj[x] if y not in v1)
        if 0 < d1 <= 2:
            cfg = configuration_at(adj, x)
            if cfg is not None:
                return cfg
    for u in G.vertices:
        if len(adj[u]) == 2 and any(len(adj[y]) == 2 for y in adj[u]):
            cfg = configuration_at(adj, u)
            if cfg is not None:
                return cfg
    G1 = G.remove_vertices(v1)
    if G1.n:
        wit = lwz_find(G1)
        if isinstance(wit, HighDegreeSmallD):
            cfg = configuration_at(adj, wit.u)
            if cfg is not None:
                return cfg
    raise StructureExhaustion("no reducible configuration found")


# -- plans ---------------------------------------------------------------------

def _plan(adj: Mapping, cfg: Configuration) -> Optional[_Plan]:
    if cfg.kind == "lemma1":
        return _plan_lemma1(adj, cfg)
    if cfg.kind == "lemma2":
        return _plan_lemma2(adj, cfg)
    return None


def _plan_lemma1(adj, cfg: Configuration) -> _Plan:
    u, v = cfg.u, cfg.v
    n1u = pendant_neighbors_adj(adj, u)
    n2uv = common_deg2_adj(adj, u, v)
    kit = n1u | n2uv
    t1, t2 = len(n1u), len(n2uv)
    uv = cfg.uv_edge
    n1v = pendant_neighbors_adj(adj, v)

    if len(n1v) <= 1:
        V0 = frozenset(kit | {u, v} | n1v)
        return _Plan(cfg, "L1/C1", V0, _fixed(_odd_prefix(kit) + [u]))

    if t1 == 2 and t2 == 2 and not uv:
        V0 = frozenset(kit | {u})
        return _Plan(cfg, "L1/C2/reset-t1=t2=2", V0, _fixed([min(n1u), u]))

    x = min(n1v)
    V0 = frozenset(kit | {u, x})
    star = frozenset(_odd_prefix(kit) + [u])

    def assemble(inH):
        if not inH(v):
            return "v-out", star, frozenset()
        if t2 >= t1 + 1:
            return "t2>t1", frozenset(n2uv | {x}) if t2 % 2 else frozenset(n2uv), frozenset()
        if not uv:
            return "T1", frozenset(_odd_prefix(n1u) + [u]), frozenset()
        return "T2", frozenset(_even_prefix(n1u) + [u, x]), frozenset()

    return _Plan(cfg, "L1/C2", V0, assemble)


def _plan_lemma2(adj, cfg: Configuration) -> Optional[_Plan]:
    u, v, w = cfg.u, cfg.v, cfg.w
    Nu = adj[u]
    n1u = pendant_neighbors_adj(adj, u)
    n2uv = common_deg2_adj(adj, u, v)
    n2uw = common_deg2_adj(adj, u, w)
    kit = n1u | n2uv | n2uw
    n1v = pendant_neighbors_adj(adj, v)
    n1w = pendant_neighbors_adj(adj, w)
    nbar = common_deg2_adj(adj, v, w) - {u}

    if (not n1v and not (n1w or nbar)) or (not n1w and not (n1v or nbar)):
        V0 = frozenset(Nu | {u, v, w})
        return _Plan(cfg, "L2/claim-l6c2", V0, _fixed(_odd_prefix(kit) + [u]))

    if n1v and not n1w:
        v, w = w, v
        n2uv, n2uw = n2uw, n2uv
        n1v, n1w = n1w, n1v
    uv, uw = v in Nu, w in Nu
    t1, t2, t3 = len(n1u), len(n2uv), len(n2uw)

    if not n1v:
        return _plan_lemma2_case1(adj, cfg, u, v, w, n1u, n2uv, n2uw, n1w, nbar, uv, uw)
    return _plan_lemma2_case2(adj, cfg, u, v, w, n1u, n2uv, n2uw, n1v, n1w, uv, uw)


def _plan_lemma2_case1(adj, cfg, u, v, w, n1u, n2uv, n2uw, n1w, nbar, uv, uw):
    Nu = adj[u]
    kit = n1u | n2uv | n2uw
    t1, t2, t3 = len(n1u), len(n2uv), len(n2uw)
    rest_w = adj[w] - n2uw - {u, v}

    if len(rest_w) <= 1:
        (x,) = tuple(n1w | nbar)
        V0a = frozenset(Nu | {u, v, w, x})
        if t1 + t2 + t3 != 2:
            return _Plan(cfg, "L2/C1/S1.1", V0a, _fixed(_odd_prefix(kit) + [u]))
        if all(y in V0a for y in adj[v]):
            # the whole component is V0a, six vertices
            sub = induced_subgraph(Graph({y: adj[y] & V0a for y in V0a}), V0a)
            best = mois_brute(sub)
            return _Plan(cfg, "L2/C1/S1.1/order-six", V0a, _fixed(best.witness))
        if t3 == 2:
            return _Plan(cfg, "L2/C1/S1.1/t3=2", V0a, _fixed(set(n2uw) | {w, x}))
        V0 = frozenset((Nu | {u, w, x}) - {v})
        vw, vx = w in adj[v], x in adj[v]
        nv_in_v0 = sorted(adj[v] & V0)
        pair = None
        for i, a in enumerate(nv_in_v0):
            for b in nv_in_v0[i + 1:]:
                if b not in adj[a]:
                    pair = (a, b)
                    break
            if pair:
                break
        a_kit = min(kit)
        a1 = min(n1u) if n1u else None

        def assemble(inH):
            if not inH(v) or (not vw and not vx):
                return "wx", frozenset({w, x}), frozenset()
            if pair is not None:
                return "pair", frozenset(pair), frozenset()
            if uv and a1 is not None:
                return "auwx", frozenset({a1, u, w, x}), frozenset()
            # v sees only w and/or x inside V0 and is not adjacent to u
            return "ua", frozenset({u, a_kit}), frozenset()

        return _Plan(cfg, "L2/C1/S1.1/reset", V0, assemble)

    x = min(n1w | nbar)
    s12 = t1 + t2
    if t3 == 2 and s12 == 1:
        V0 = frozenset((Nu | {u, v}) - {w})
        y = min(n2uw)

        def assemble(inH):
            if inH(w):
                return "w-in", frozenset(n2uw), frozenset()
            return "w-out", frozenset({u, y}), frozenset()

        return _Plan(cfg, "L2/C1/S1.2/l6c4-reset", V0, assemble)
    if not uw and (s12, t3) == (2, 1):
        V0 = frozenset(Nu | {u, v})
        return _Plan(cfg, "L2/C1/S1.2/exc-a", V0, _fixed([u, min(n1u | n2uv)]))
    if not uw and (s12, t3) == (2, 2):
        Q = n1w | nbar
        three = sorted(kit)[:3] + [u]
        if len(Q) <= 2:
            V0 = frozenset(Nu | Q | {u, v, w, x})
            return _Plan(cfg, "L2/C1/S1.2/exc-b/small", V0, _fixed(three))
        y = min(Q - {x})
        V0 = frozenset(Nu | {u, v, x, y})

        def assemble(inH):
            if inH(w):
                return "w-in", frozenset(n2uw | {x, y}), frozenset()
            return "w-out", frozenset(three), frozenset()

        return _Plan(cfg, "L2/C1/S1.2/exc-b/large", V0, assemble)
    if not uw and (s12, t3) == (4, 4):
        V0 = frozenset(Nu | {u, v})
        star = frozenset(_odd_prefix(kit) + [u])

        def assemble(inH):
            if inH(w):
                return "w-in", frozenset(n2uw), frozenset()
            # N1(u) u N2(u,v) u {u} would give u even degree; take an odd kit subset
            return "w-out", star, frozenset()

        return _Plan(cfg, "L2/C1/S1.2/exc-c", V0, assemble)

    V0 = frozenset((Nu | {u, v, x}) - {w})
    star = frozenset(_odd_prefix(kit) + [u])
    big3 = frozenset(_even_prefix(n2uw | {x}))
    side = n1u | n2uv
    with_uw = frozenset(_even_prefix(side) + [u, x])
    without_uw = frozenset(_odd_prefix(side) + [u]) if side else None

    def assemble(inH):
        if not inH(w):
            return "w-out", star, frozenset()
        if t3 >= s12 + 1:
            return "t3>t1+t2", big3, frozenset()
        if uw:
            return "uw", with_uw, frozenset()
        return "no-uw", without_uw, frozenset()

    return _Plan(cfg, "L2/C1/S1.2", V0, assemble)


def _plan_lemma2_case2(adj, cfg, u, v, w, n1u, n2uv, n2uw, n1v, n1w, uv, uw):
    kit = n1u | n2uv | n2uw
    t1, t2, t3 = len(n1u), len(n2uv), len(n2uw)
    x, y = min(n1v), min(n1w)

    # the exceptional combinations, each with its own V0, for either orientation
    for (a, b, n2ua, n2ub, xa, xb, ua, ub, ta, tb, tag) in (
        (v, w, n2uv, n2uw, x, y, uv, uw, t2, t3, "w"),
        (w, v, n2uw, n2uv, y, x, uw, uv, t3, t2, "v"),
    ):
        # roles: b plays w (in H'), a plays v
        if tb == 2 and t1 + ta == 1:
            V0 = frozenset(kit | {u, xa})
            plan = _case2_l6c6_reset(u, a, b, n1u, n2ua, n2ub, xa, ua)
            return _Plan(cfg, f"L2/C2/l6c6-reset[{tag}]", V0, plan)
        if not ub and (t1 + ta, tb) == (2, 1):
            V0 = frozenset(kit | {u, xa})
            plan = _case2_exc_a(u, a, n1u, n2ua, xa, ua)
            return _Plan(cfg, f"L2/C2/l6c9a[{tag}]", V0, plan)
        if not ub and t1 + ta == tb and tb in (2, 4):
            V0 = frozenset(kit | {u})
            plan = _case2_exc_b(u, a, b, n2ub, xa, ua, tb)
            return _Plan(cfg, f"L2/C2/l6c9b[{tag}]", V0, plan)
    if not uv and not uw and t1 == t2 + t3 and t1 in (2, 4):
        V0 = frozenset(kit | {u})
        return _Plan(cfg, "L2/C2/S2.2/reset-p", V0, _fixed(sorted(n1u)[: t1 - 1] + [u]))

    V0 = frozenset(kit | {u, x, y})
    star = frozenset(_odd_prefix(kit) + [u])

    def assemble(inH):
        vin, win = inH(v), inH(w)
        if not vin and not win:
            return "l6c5", star, frozenset()
        # orient so that b is in H'
        if win:
            a, b, n2ua, n2ub, xa, xb, ua, ub, ta, tb = v, w, n2uv, n2uw, x, y, uv, uw, t2, t3
        else:
            a, b, n2ua, n2ub, xa, xb, ua, ub, ta, tb = w, v, n2uw, n2uv, y, x, uw, uv, t3, t2
        ain = inH(a)
        if tb >= t1 + ta + 1:
            return "l6c6", frozenset(_even_prefix(n2ub | {xb})), frozenset()
        if ain and ta >= t1 + tb + 1:
            return "l6c6-other", frozenset(_even_prefix(n2ua | {xa})), frozenset()
        if not ain:
            side = n1u | n2ua
            if ub:
                return "S2.1/ub", frozenset(_even_prefix(side) + [u, xb]), frozenset()
            return "S2.1/no-ub", frozenset(_odd_prefix(side) + [u]), frozenset()
        if t2 + t3 >= t1 + 1:
            return "S2.2/l6c8", frozenset(_even_prefix(n2uv | {x}) + _even_prefix(n2uw | {y})), frozenset()
        if uv and uw:
            return "S2.2/i", frozenset(_odd_prefix(n1u) + [u, x, y]), frozenset()
        if uv:
            return "S2.2/ii", frozenset(_even_prefix(n1u) + [u, x]), frozenset()
        if uw:
            return "S2.2/iii", frozenset(_even_prefix(n1u) + [u, y]), frozenset()
        return "S2.2/iv", frozenset(_odd_prefix(n1u) + [u]), frozenset()

    return _Plan(cfg, "L2/C2", V0, assemble)


def _case2_l6c6_reset(u, a, b, n1u, n2ua, n2ub, xa, ua):
    side = n1u | n2ua
    z_side = min(side)

    def assemble(inH):
        if inH(b):
            return "b-in", frozenset(n2ub), frozenset()
        if not inH(a):
            return "both-out", frozenset({u, z_side}), frozenset()
        if n2ua:
            return "a-in/path", frozenset({xa, min(n2ua)}), frozenset()
        if ua:
            return "a-in/u", frozenset({xa, u}), frozenset()
        return "a-in/ua", frozenset({u, min(n1u)}), frozenset()

    return assemble


def _case2_exc_a(u, a, n1u, n2ua, xa, ua):
    side = n1u | n2ua

    def assemble(inH):
        if not inH(a):
            return "a-out", frozenset({u, min(side)}), frozenset()
        if n2ua:
            return "a-in/path", frozenset({xa, min(n2ua)}), frozenset()
        if ua:
            return "a-in/u", frozenset({xa, u}), frozenset()
        return "a-in/ua", frozenset({u, min(n1u)}), frozenset()

    return assemble


def _case2_exc_b(u, a, b, n2ub, xa, ua, p):
    part = sorted(n2ub)[: p - 1]

    def assemble(inH):
        if inH(b):
            return "b-in", frozenset(n2ub), frozenset()
        if not ua or not inH(a):
            return "b-out", frozenset(part + [u]), frozenset()
        if inH(xa):
            return "swap-x", frozenset(n2ub | {u}), frozenset({xa})
        return "add-x", frozenset(n2ub | {u, xa}), frozenset()

    return assemble


# -- engine ----------------------------------------------------------------------

class _Engine:
    """Forward reduction over a mutable copy, then reverse assembly."""

    def __init__(self, G: Graph, n0: int = DEFAULT_N0, local_checks: bool = True):
        self.G = G
        self.n0 = n0
        self.local_checks = local_checks
        self.W: dict[int, set[int]] = {v: set(nb) for v, nb in G.adj.items()}
        self.plans: list[_Plan] = []
        self.bases: list[tuple[str, frozenset, frozenset]] = []
        self.fallback_used = False
        self.fallback_branches: list[str] = []
        self._stack: list[int] = []
        self._queued: set[int] = set()
        self._brute_memo: dict[tuple, int] = {}
        self._small: set[int] = set()

    # worklist
    def _push(self, v):
        if v not in self._queued and v in self.W:
            self._queued.add(v)
            self._stack.append(v)

    def _piece(self, b, excluded=(), big=None) -> Optional[set]:
        """Component of ``b`` in ``W - excluded`` if it has at most ``n0``
        vertices, else None.  Vertices of oversized pieces go into ``big``
        so later searches can stop as soon as they reach one."""
        W, limit = self.W, self.n0
        comp = {b}
        stack = [b]
        while stack:
            x = stack.pop()
            for y in W[x]:
                if y in excluded or y in comp:
                    continue
                if big is not None and y in big:
                    big |= comp
                    return None
                comp.add(y)
                if len(comp) > limit:
                    if big is not None:
                        big |= comp
                    return None
                stack.append(y)
        return comp

    def _isolates(self, V0) -> Optional[int]:
        W = self.W
        checked = set()
        for a in V0:
            for b in W[a]:
                if b in V0 or b in checked:
                    continue
                checked.add(b)
                if all(c in V0 for c in W[b]):
                    return b
        return None

    def _try(self, u) -> bool:
        if u in self._small:
            return False
        cfg = configuration_at(self.W, u)
        if cfg is None:
            return False
        piece = self._piece(u)
        if piece is not None:
            # components only shrink, so this one stays small
            self._small |= piece
            return False
        plan = _plan(self.W, cfg)
        if plan is None:
            return False
        bad = self._isolates(plan.removed)
        if bad is None:
            bad = self._deficient_residual(plan.removed)
        if bad is not None:
            log.debug("reject %s at %d: residual vertex %d isolated or in a deficient piece",
                      plan.branch, u, bad)
            # the anchors usually carry a configuration of their own
            for a in (cfg.v, cfg.w):
                if a is not None:
                    self._push(a)
            return False
        self._remove(plan.removed)
        self.plans.append(plan)
        return True

    def _best_mask(self, comp, excluded=()) -> tuple[int, list[int]]:
        """Brute-force optimum of the small piece ``comp``, memoised on its
        adjacency masks; returns the bitmask over ``order``."""
        order = sorted(comp)
        index = {v: i for i, v in enumerate(order)}
        key = []
        for v in order:
            m = 0
            for x in self.W[v]:
                if x in index:
                    m |= 1 << index[x]
            key.append(m)
        key = tuple(key)
        best = self._brute_memo.get(key)
        if best is None:
            best = _kernels.brute_search(np.array(key, dtype=np.int64))
            self._brute_memo[key] = best
        return best, order

    def _deficient_residual(self, V0) -> Optional[int]:
        """A boundary vertex whose component in ``W - V0`` is small and has
        f below 2/5 of its order.  Such pieces exist (a triangle with a
        degree-2 vertex on each side has f = 2 on six vertices), so the
        reduction must not cut them loose."""
        W = self.W
        seen: set[int] = set()
        big: set[int] = set()
        for a in V0:
            for b in W[a]:
                if b in V0 or b in seen or b in big:
                    continue
                comp = self._piece(b, V0, big)
                if comp is None:
                    continue
                seen |= comp
                best, _ = self._best_mask(comp)
                if 5 * bin(best).count("1") < 2 * len(comp):
                    return b
        self._small |= seen
        return None

    def _remove(self, V0):
        W = self.W
        boundary = set()
        for a in V0:
            for b in W[a]:
                if b not in V0:
                    boundary.add(b)
        for a in V0:
            for b in W[a]:
                if b not in V0:
                    W[b].discard(a)
            del W[a]
        for b in boundary:
            self._push(b)
            if len(W[b]) <= 2:
                for c in W[b]:
                    self._push(c)
                    if len(W[c]) == 2:
                        for d in W[c]:
                            self._push(d)

    def _drain(self) -> int:
        done = 0
        while self._stack:
            u = self._stack.pop()
            self._queued.discard(u)
            if u not in self.W:
                continue
            if self._try(u):
                done += 1
        return done

    def forward(self):
        for v in sorted(self.W, reverse=True):
            self._push(v)
        self._drain()
        while True:
            stuck = []
            for comp in components_adj(self.W):
                if len(comp) <= self.n0 or star_center_adj(self.W, comp) is not None:
                    continue
                stuck.append(comp)
            if not stuck:
                break
            for comp in stuck:
                for v in reversed(comp):
                    self._push(v)
            if self._drain() == 0:
                break
        for comp in components_adj(self.W):
            self._solve_base(comp)

    def _solve_base(self, comp):
        W = self.W
        cset = frozenset(comp)
        if len(comp) <= self.n0:
            best, order = self._best_mask(comp)
            wit = frozenset(order[i] for i in range(len(order)) if (best >> i) & 1)
            self.bases.append(("base/brute", cset, wit))
            return
        centre = star_center_adj(W, comp)
        if centre is not None:
            leaves = sorted(W[centre])
            if len(leaves) % 2 == 0:
                leaves = leaves[:-1]
            self.bases.append(("base/star", cset, frozenset(leaves + [centre])))
            return
        log.warning("no reducible configuration in a component of %d vertices", len(comp))
        self.bases.append(("stuck", cset, frozenset()))

    def backward(self) -> tuple[set[int], list[ReductionStep]]:
        """Assemble in reverse.  Any defect taints the component of ``G`` it
        lies in; tainted components are re-solved exactly at the end."""
        adj = self.G.adj
        comps = components_adj(adj)
        comp_of = {v: i for i, c in enumerate(comps) for v in c}
        tainted: dict[int, str] = {}
        H: set[int] = set()
        hdeg: dict[int, int] = {}
        alive: set[int] = set()

        def add(a):
            H.add(a)
            for b in adj[a]:
                hdeg[b] = hdeg.get(b, 0) + 1

        def drop(a):
            H.discard(a)
            for b in adj[a]:
                hdeg[b] -= 1

        def taint(v, label, problem):
            cid = comp_of[v]
            if cid not in tainted:
                log.warning("case table defect at %s: %s", label, problem)
                tainted[cid] = label

        base_steps = []
        for label, comp, wit in self.bases:
            alive |= comp
            for a in wit:
                add(a)
            step = ReductionStep(label, tuple(sorted(comp)), tuple(sorted(wit)))
            if label == "stuck":
                taint(step.removed[0], label, "no reducible configuration")
            elif not step.ratio_ok():
                taint(step.removed[0], label, f"ratio {step.gain}/{len(comp)} below 2/5")
            base_steps.append((comp_of[step.removed[0]], step))

        steps = []
        for plan in reversed(self.plans):
            V0 = plan.removed
            cid = comp_of[plan.config.u]
            suffix, added, dropped = plan.assemble(H.__contains__)
            label = plan.branch + ("/" + suffix if suffix else "")
            alive |= V0
            if added is None or added & H or not dropped <= H or not added <= alive:
                taint(plan.config.u, label, "inconsistent add/drop sets")
                continue
            for a in dropped:
                drop(a)
            for a in added:
                add(a)
            step = ReductionStep(label, tuple(sorted(V0)), tuple(sorted(added)), tuple(sorted(dropped)))
            steps.append((cid, step))
            if not step.ratio_ok():
                taint(plan.config.u, label, f"ratio {step.gain}/{len(V0)} below 2/5")
            elif self.local_checks and cid not in tainted:
                touched = set(added) | dropped
                for a in list(touched):
                    touched.update(adj[a])
                for a in touched:
                    if a in H and hdeg.get(a, 0) % 2 == 0:
                        taint(a, label, f"vertex {a} has even degree")
                        break
        steps.reverse()

        fallback_steps = []
        for cid, label in sorted(tainted.items()):
            self._mark_fallback(label)
            C = frozenset(comps[cid])
            H -= C
            res = mois_dp(Graph({a: adj[a] for a in C})).witness
            H |= set(res)
            fallback_steps.append(ReductionStep("fallback/dp:" + label, tuple(sorted(C)), tuple(res)))
        trace = [s for c, s in steps if c not in tainted]
        trace += [s for c, s in reversed(base_steps) if c not in tainted]
        return H, trace + fallback_steps

    def _mark_fallback(self, label):
        self.fallback_used = True
        self.fallback_branches.append(label)


def construct_odd(G: Graph, n0: int = DEFAULT_N0, check_treewidth: bool = True,
                  local_checks: bool = True) -> OddCertificate:
    """Odd induced subgraph of order at least ``2|V(G)|/5`` with a reduction trace.

    ``G`` must have treewidth <= 2 and no isolated vertices.
    """
    if G.isolated_vertices():
        raise ValueError(f"graph has isolated vertices, e.g. {G.isolated_vertices()[0]}")
    if check_treewidth and isinstance(recognize_tw2(G), StuckCore):
        raise ValueError("graph has treewidth > 2")
    eng = _Engine(G, n0, local_checks)
    eng.forward()
    H, trace = eng.backward()
    return OddCertificate(frozenset(H), G.n, trace, eng.fallback_used,
                          fallback_branches=eng.fallback_branches)


# -- recursive single-step API --------------------------------------------------------

ResidualSolver = Callable[[Graph], Union[OddCertificate, Iterable[int]]]


def _apply(G: Graph, cfg: Configuration, residual_solver: ResidualSolver, kind: str) -> OddCertificate:
    if cfg.kind != kind:
        raise ValueError(f"expected a {kind} configuration, got {cfg.kind}")
    plan = _plan(G.adj, cfg)
    rest = G.remove_vertices(plan.removed)
    if rest.isolated_vertices():
        raise CaseTableDefect(plan.branch, f"residual graph has isolated vertex {rest.isolated_vertices()[0]}")
    sub = residual_solver(rest) if rest.n else frozenset()
    if isinstance(sub, OddCertificate):
        inner, trace = sub.set, list(sub.trace)
    else:
        inner = frozenset(sub)
        trace = [ReductionStep("residual/solver", tuple(sorted(rest.vertices)), tuple(sorted(inner)))] if rest.n else []
    suffix, added, dropped = plan.assemble(inner.__contains__)
    label = plan.branch + ("/" + suffix if suffix else "")
    if added is None:
        raise CaseTableDefect(label, "no admissible set")
    H = (set(inner) - dropped) | added
    step = ReductionStep(label, tuple(sorted(plan.removed)), tuple(sorted(added)), tuple(sorted(dropped)))
    bad = odd_set_violation(G.adj, H)
    if bad is not None:
        raise CaseTableDefect(label, f"vertex {bad} has even degree")
    if not step.ratio_ok():
        raise CaseTableDefect(label, "step ratio below 2/5")
    return OddCertificate(frozenset(H), G.n, [step] + trace)


def apply_lemma1(G: Graph, cfg: Configuration, residual_solver: ResidualSolver) -> OddCertificate:
    return _apply(G, cfg, residual_solver, "lemma1")


def apply_lemma2(G: Graph, cfg: Configuration, residual_solver: ResidualSolver) -> OddCertificate:
    return _apply(G, cfg, residual_solver, "lemma2")


def plan_branch(G: Graph, cfg: Configuration) -> tuple[str, frozenset]:
    """Branch label and removed set a configuration is routed to, before any
    residual solving."""
    plan = _plan(G.adj, cfg)
    return plan.branch, plan.removed


# -- verification ------------------------------------------------------------------------

def verify_certificate(G: Graph, cert: Union[OddCertificate, Iterable[int]]) -> tuple[bool, str]:
    """Re-check oddness, the exact 2/5 ratio and the reduction trace."""
    if not isinstance(cert, OddCertificate):
        cert = OddCertificate(frozenset(cert), G.n)
    S = cert.set
    for v in S:
        if v not in G:
            return False, f"vertex {v} not in graph"
    bad = odd_set_violation(G.adj, S)
    if bad is not None:
        return False, f"vertex {bad} has even degree"
    actual = Fraction(len(S), G.n) if G.n else Fraction(0)
    if cert.ratio != actual:
        return False, f"ratio: claimed {cert.ratio} but set gives {actual}"
    if G.n and actual < TWO_FIFTHS:
        return False, f"ratio: {actual} below 2/5"
    if cert.trace:
        seen: set[int] = set()
        H: set[int] = set()
        for step in reversed(cert.trace):
            rem = set(step.removed)
            if rem & seen:
                return False, f"trace: step {step.branch} removes a vertex twice"
            seen |= rem
            if not all(a in H for a in step.dropped):
                return False, f"trace: step {step.branch} drops a vertex it does not hold"
            H.difference_update(step.dropped)
            if any(a in H for a in step.added):
                return False, f"trace: step {step.branch} adds a vertex twice"
            if not step.branch.startswith("fallback") and not step.ratio_ok():
                return False, f"ratio: step {step.branch} gains {step.gain} of {len(step.removed)}"
            H.update(step.added)
        if seen != set(G.vertices):
            return False, "trace: removed sets do not partition the vertex set"
        if H != set(S):
            return False, "trace: replay does not reproduce the set"
    return True, "ok"
