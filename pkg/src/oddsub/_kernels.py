"""Hot loops for the exact solvers.

Each kernel is written once in a numba-compatible subset of Python.  With
numba available and ``ODDSUB_NO_NUMBA`` unset the kernels are compiled with
``@njit``; otherwise they run as plain Python, and the brute-force search
switches to a vectorised numpy implementation.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("ODDSUB_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    USE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag in a subprocess
    USE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


POW3 = np.array([1, 3, 9, 27], dtype=np.int64)

KIND_LEAF, KIND_INTRO, KIND_FORGET, KIND_JOIN = 0, 1, 2, 3
NSTATE = 27


@njit(cache=True)
def _digit(code, pos):
    return (code // POW3[pos]) % 3


@njit(cache=True)
def _remove_digit(code, pos, size):
    out = 0
    j = 0
    for i in range(size):
        if i != pos:
            out += ((code // POW3[i]) % 3) * POW3[j]
            j += 1
    return out


@njit(cache=True)
def _insert_digit(code, pos, size, d):
    # size is the length before insertion
    out = 0
    j = 0
    for i in range(size + 1):
        if i == pos:
            out += d * POW3[i]
        else:
            out += ((code // POW3[j]) % 3) * POW3[i]
            j += 1
    return out


@njit(cache=True)
def mois_dp_tables(kind, left, right, bagsize, pos, nbrmask):
    """Fill the DP tables over a post-ordered nice decomposition.

    State digits per bag position: 0 = out, 1 = in with even count of forgotten
    included neighbours, 2 = in with odd count.  ``val[i, c]`` is the largest
    number of included vertices in the subtree of node ``i`` consistent with
    state ``c`` (-1 when infeasible).
    """
    n = kind.shape[0]
    val = np.full((n, NSTATE), -1, dtype=np.int64)
    bp1 = np.full((n, NSTATE), -1, dtype=np.int64)
    bp2 = np.full((n, NSTATE), -1, dtype=np.int64)
    for i in range(n):
        k = kind[i]
        if k == KIND_LEAF:
            val[i, 0] = 0
        elif k == KIND_INTRO:
            c = left[i]
            csz = bagsize[c]
            p = pos[i]
            for code in range(POW3[csz]):
                base = val[c, code]
                if base < 0:
                    continue
                out_code = _insert_digit(code, p, csz, 0)
                if base > val[i, out_code]:
                    val[i, out_code] = base
                    bp1[i, out_code] = code
                in_code = _insert_digit(code, p, csz, 1)
                if base + 1 > val[i, in_code]:
                    val[i, in_code] = base + 1
                    bp1[i, in_code] = code
        elif k == KIND_FORGET:
            c = left[i]
            csz = bagsize[c]
            p = pos[i]
            mask = nbrmask[i]
            for code in range(POW3[csz]):
                base = val[c, code]
                if base < 0:
                    continue
                d = _digit(code, p)
                newcode = code
                if d != 0:
                    par = d - 1
                    for q in range(csz):
                        if q != p and (mask >> q) & 1 and _digit(code, q) != 0:
                            par += 1
                    if par % 2 == 0:
                        continue
                    # the edge to each included bag neighbour is counted here, once
                    for q in range(csz):
                        if q != p and (mask >> q) & 1:
                            dq = _digit(code, q)
                            if dq != 0:
                                newcode += (3 - 2 * dq) * POW3[q]
                pc = _remove_digit(newcode, p, csz)
                if base > val[i, pc]:
                    val[i, pc] = base
                    bp1[i, pc] = code
        else:
            a = left[i]
            b = right[i]
            sz = bagsize[i]
            for ca in range(POW3[sz]):
                va = val[a, ca]
                if va < 0:
                    continue
                for cb in range(POW3[sz]):
                    vb = val[b, cb]
                    if vb < 0:
                        continue
                    ok = True
                    code = 0
                    nin = 0
                    for q in range(sz):
                        da = _digit(ca, q)
                        db = _digit(cb, q)
                        if (da == 0) != (db == 0):
                            ok = False
                            break
                        if da != 0:
                            nin += 1
                            code += (1 + ((da - 1 + db - 1) % 2)) * POW3[q]
                    if not ok:
                        continue
                    tot = va + vb - nin
                    if tot > val[i, code]:
                        val[i, code] = tot
                        bp1[i, code] = ca
                        bp2[i, code] = cb
    return val, bp1, bp2


@njit(cache=True)
def mois_dp_witness(kind, left, right, pos, vertex, val, bp1, bp2):
    """Walk back-pointers from the root; returns a 0/1 array over vertex slots."""
    n = kind.shape[0]
    nv = 0
    for i in range(n):
        if vertex[i] + 1 > nv:
            nv = vertex[i] + 1
    chosen = np.zeros(nv, dtype=np.uint8)
    stack_node = np.empty(n, dtype=np.int64)
    stack_code = np.empty(n, dtype=np.int64)
    top = 0
    stack_node[0] = n - 1
    stack_code[0] = 0
    top = 1
    while top > 0:
        top -= 1
        i = stack_node[top]
        code = stack_code[top]
        k = kind[i]
        if k == KIND_LEAF:
            continue
        if k == KIND_INTRO:
            if _digit(code, pos[i]) != 0:
                chosen[vertex[i]] = 1
        stack_node[top] = left[i]
        stack_code[top] = bp1[i, code]
        top += 1
        if k == KIND_JOIN:
            stack_node[top] = right[i]
            stack_code[top] = bp2[i, code]
            top += 1
    return chosen


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def mois_brute_kernel(adjmask):
    """Largest odd induced subset of a graph on at most 62 vertices given as
    neighbour bitmasks.  Even sizes are tried from the top down; within a size,
    combinations are visited in lexicographic order, so the first hit is the
    lexicographically smallest optimum.  Returns the bitmask (0 if none)."""
    n = adjmask.shape[0]
    idx = np.empty(n + 1, dtype=np.int64)
    top = n - (n % 2)
    for s in range(top, 0, -2):
        for j in range(s):
            idx[j] = j
        while True:
            mask = 0
            for j in range(s):
                mask |= 1 << idx[j]
            ok = True
            for j in range(s):
                if _popcount(adjmask[idx[j]] & mask) % 2 == 0:
                    ok = False
                    break
            if ok:
                return mask
            # next combination
            j = s - 1
            while j >= 0 and idx[j] == n - s + j:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for t in range(j + 1, s):
                idx[t] = idx[t - 1] + 1
    return 0


def mois_brute_numpy(adjmask: np.ndarray, chunk: int = 1 << 18) -> int:
    """Vectorised equivalent of :func:`mois_brute_kernel` over all 2^n masks."""
    n = int(adjmask.shape[0])
    best_size = 0
    best_key = -1
    best_mask = 0
    total = 1 << n
    adj = adjmask.astype(np.uint64)
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        ok = np.ones(masks.shape, dtype=bool)
        for v in range(n):
            inside = ((masks >> np.uint64(v)) & np.uint64(1)).astype(bool)
            par = np.bitwise_count(masks & adj[v]) & 1
            ok &= ~inside | (par == 1)
        cand = masks[ok]
        if cand.size == 0:
            continue
        sizes = np.bitwise_count(cand).astype(np.int64)
        m = int(sizes.max())
        if m < best_size:
            continue
        top = cand[sizes == m]
        # lexicographically smallest sorted tuple == largest bit-reversed mask
        rev = np.zeros(top.shape, dtype=np.uint64)
        for v in range(n):
            bit = (top >> shifts[v]) & np.uint64(1)
            rev |= bit << np.uint64(n - 1 - v)
        k = int(np.argmax(rev))
        key = int(rev[k])
        if m > best_size or key > best_key:
            best_size, best_key, best_mask = m, key, int(top[k])
    return best_mask


def brute_search(adjmask: np.ndarray) -> int:
    if USE_NUMBA:
        return int(mois_brute_kernel(adjmask))
    return mois_brute_numpy(adjmask)
