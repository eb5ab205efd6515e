"""Compiled DPLL kernel for the arrow search.

One variable per hypervertex holds a colour in {1, 2} (0 = unassigned).  A
hyperedge of type t is violated when all its variables have colour t; it is
satisfied once any variable has colour 3 - t.

The search is DPLL with unit propagation over per-hyperedge counters and
conflict-directed backjumping.  Every refuted subtree carries the set of
decision levels its refutation depends on and the set of hyperedges it used,
so an UNSAT answer comes with a refutation core: the hyperedges of a tree
resolution proof, which on their own are still unsatisfiable.
"""

import numpy as np
from numba import njit

RESULT_SAT = 0
RESULT_UNSAT = 1
RESULT_BUDGET = 2

HEUR_STATIC = 0
HEUR_WEIGHTED = 1


@njit(cache=True)
def _analyze(confl, color, reason, level, cl_ptr, cl_var, vmark, stack, Srow, Drow):
    """Cone of the conflict in the implication graph.

    Adds every hyperedge met to the bitset Srow and every decision level met
    to the flag array Drow.  vmark must be all zero on entry and is restored.
    """
    top = 0
    Srow[confl >> 6] |= np.uint64(1) << np.uint64(confl & 63)
    for k in range(cl_ptr[confl], cl_ptr[confl + 1]):
        v = cl_var[k]
        if vmark[v] == 0:
            vmark[v] = 1
            stack[top] = v
            top += 1
    visited = 0
    while visited < top:
        v = stack[visited]
        visited += 1
        r = reason[v]
        if r < 0:
            Drow[level[v]] = 1
            continue
        Srow[r >> 6] |= np.uint64(1) << np.uint64(r & 63)
        for k in range(cl_ptr[r], cl_ptr[r + 1]):
            u = cl_var[k]
            if vmark[u] == 0:
                vmark[u] = 1
                stack[top] = u
                top += 1
    for i in range(top):
        vmark[stack[i]] = 0


@njit(cache=True)
def _assign(v, col, why, lev, color, reason, level, trail, tl, cl_ptr, cl_var, cl_typ,
            occ_ptr, occ_cl, nown, noth, pend_v, pend_c, pend_r):
    """Assign and propagate.  Returns (conflict hyperedge or -1, new trail length, props)."""
    np_ = 0
    pend_v[0] = v
    pend_c[0] = col
    pend_r[0] = why
    np_ = 1
    props = 0
    while np_ > 0:
        np_ -= 1
        v = pend_v[np_]
        c = pend_c[np_]
        why = pend_r[np_]
        cv = color[v]
        if cv != 0:
            if cv != c:
                return why, tl, props
            continue
        color[v] = c
        reason[v] = why
        level[v] = lev
        trail[tl] = v
        tl += 1
        props += 1
        conflict = -1
        for k in range(occ_ptr[v], occ_ptr[v + 1]):
            h = occ_cl[k]
            if cl_typ[h] == c:
                n_own = nown[h] + 1
                nown[h] = n_own
                if noth[h] == 0:
                    size = cl_ptr[h + 1] - cl_ptr[h]
                    if n_own == size:
                        if conflict < 0:
                            conflict = h
                    elif n_own == size - 1 and conflict < 0:
                        for j in range(cl_ptr[h], cl_ptr[h + 1]):
                            u = cl_var[j]
                            if color[u] == 0:
                                pend_v[np_] = u
                                pend_c[np_] = 3 - c
                                pend_r[np_] = h
                                np_ += 1
                                break
            else:
                noth[h] += 1
        if conflict >= 0:
            return conflict, tl, props
    return -1, tl, props


@njit(cache=True)
def _undo(target, color, trail, tl, occ_ptr, occ_cl, cl_typ, nown, noth):
    while tl > target:
        tl -= 1
        v = trail[tl]
        c = color[v]
        for k in range(occ_ptr[v], occ_ptr[v + 1]):
            h = occ_cl[k]
            if cl_typ[h] == c:
                nown[h] -= 1
            else:
                noth[h] -= 1
        color[v] = 0
    return tl


@njit(cache=True)
def _pick(nv, color, heuristic, cl_ptr, cl_var, nown, noth, score, pow2):
    if heuristic == HEUR_STATIC:
        for v in range(nv):
            if color[v] == 0:
                return v
        return -1
    for v in range(nv):
        score[v] = 0.0
    m = cl_ptr.shape[0] - 1
    for h in range(m):
        if noth[h] != 0:
            continue
        free = (cl_ptr[h + 1] - cl_ptr[h]) - nown[h]
        w = pow2[free]
        for j in range(cl_ptr[h], cl_ptr[h + 1]):
            u = cl_var[j]
            if color[u] == 0:
                score[u] += w
    best = -1
    bs = -1.0
    for v in range(nv):
        if color[v] == 0 and score[v] > bs:
            bs = score[v]
            best = v
    return best


@njit(cache=True)
def dpll(nv, cl_ptr, cl_var, cl_typ, budget, first_color, heuristic):
    """Decide whether the hyperedges admit a colouring violating none of them.

    Returns (result, colour array, core flags per hyperedge, nodes, props).
    """
    m = cl_ptr.shape[0] - 1
    W = (m >> 6) + 1
    color = np.zeros(nv, np.int8)
    reason = np.full(nv, -1, np.int64)
    level = np.zeros(nv, np.int64)
    trail = np.empty(nv + 1, np.int64)
    nown = np.zeros(m, np.int64)
    noth = np.zeros(m, np.int64)
    # occurrence lists
    cnt = np.zeros(nv + 1, np.int64)
    for k in range(cl_ptr[m]):
        cnt[cl_var[k] + 1] += 1
    occ_ptr = np.cumsum(cnt)
    fill = occ_ptr[:-1].copy()
    occ_cl = np.empty(cl_ptr[m], np.int64)
    for h in range(m):
        for k in range(cl_ptr[h], cl_ptr[h + 1]):
            v = cl_var[k]
            occ_cl[fill[v]] = h
            fill[v] += 1
    pend = nv + m + 2
    pend_v = np.empty(pend, np.int64)
    pend_c = np.empty(pend, np.int8)
    pend_r = np.empty(pend, np.int64)
    vmark = np.zeros(nv, np.int8)
    stack = np.empty(nv + 1, np.int64)
    score = np.zeros(nv, np.float64)
    pow2 = np.empty(64, np.float64)
    for i in range(64):
        pow2[i] = 2.0 ** (-i)

    L = nv + 2
    dec_var = np.full(L, -1, np.int64)
    dec_start = np.zeros(L, np.int64)
    branch = np.zeros(L, np.int8)
    S_first = np.zeros((L, W), np.uint64)
    D_first = np.zeros((L, L), np.int8)
    S = np.zeros(W, np.uint64)
    D = np.zeros(L, np.int8)

    tl = 0
    nodes = 0
    props = 0
    nlev = 0
    second = 3 - first_color

    def core_flags(S):
        out = np.zeros(m, np.int8)
        for h in range(m):
            if (S[h >> 6] >> np.uint64(h & 63)) & np.uint64(1):
                out[h] = 1
        return out

    # root: empty hyperedges and singletons
    for h in range(m):
        if cl_ptr[h + 1] == cl_ptr[h]:
            out = np.zeros(m, np.int8)
            out[h] = 1
            return RESULT_UNSAT, color, out, nodes, props
    for h in range(m):
        if cl_ptr[h + 1] - cl_ptr[h] == 1:
            v = cl_var[cl_ptr[h]]
            confl, tl, p = _assign(v, 3 - cl_typ[h], h, 0, color, reason, level, trail, tl,
                                   cl_ptr, cl_var, cl_typ, occ_ptr, occ_cl, nown, noth,
                                   pend_v, pend_c, pend_r)
            props += p
            if confl >= 0:
                S[:] = 0
                D[:] = 0
                _analyze(confl, color, reason, level, cl_ptr, cl_var, vmark, stack, S, D)
                return RESULT_UNSAT, color, core_flags(S), nodes, props

    while True:
        if props > budget:
            return RESULT_BUDGET, color, np.zeros(m, np.int8), nodes, props
        v = _pick(nv, color, heuristic, cl_ptr, cl_var, nown, noth, score, pow2)
        if v < 0:
            return RESULT_SAT, color, np.zeros(m, np.int8), nodes, props
        nodes += 1
        nlev += 1
        dec_var[nlev] = v
        dec_start[nlev] = tl
        branch[nlev] = 0
        confl, tl, p = _assign(v, first_color, -1, nlev, color, reason, level, trail, tl,
                               cl_ptr, cl_var, cl_typ, occ_ptr, occ_cl, nown, noth,
                               pend_v, pend_c, pend_r)
        props += p
        while confl >= 0:
            S[:] = 0
            D[:] = 0
            _analyze(confl, color, reason, level, cl_ptr, cl_var, vmark, stack, S, D)
            confl = -1
            while True:
                j = -1
                for i in range(nlev, 0, -1):
                    if D[i]:
                        j = i
                        break
                if j < 0:
                    return RESULT_UNSAT, color, core_flags(S), nodes, props
                tl = _undo(dec_start[j], color, trail, tl, occ_ptr, occ_cl, cl_typ, nown, noth)
                nlev = j
                if branch[j] == 0:
                    S_first[j, :] = S
                    D_first[j, :] = D
                    D_first[j, j] = 0
                    branch[j] = 1
                    nodes += 1
                    confl, tl, p = _assign(dec_var[j], second, -1, j, color, reason, level, trail, tl,
                                           cl_ptr, cl_var, cl_typ, occ_ptr, occ_cl, nown, noth,
                                           pend_v, pend_c, pend_r)
                    props += p
                    break
                for w in range(W):
                    S[w] |= S_first[j, w]
                for i in range(L):
                    if D_first[j, i]:
                        D[i] = 1
                D[j] = 0
