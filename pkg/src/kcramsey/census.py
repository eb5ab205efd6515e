"""Vertex-extension census of good colourings of complete graphs.

A 2-colouring of K_k avoids a colour-1 K_r and a colour-2 C_ell exactly when
its colour-2 graph B is C_ell-free and has no independent r-set.  Such graphs
are grown one vertex at a time and kept up to isomorphism.  K_k arrows
(K_r, C_ell) iff the census at k is empty.

This path shares nothing with the DPLL search except the canonical form, so
it serves as an independent check of arrow decisions on complete hosts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, bits, canonical_code, edge_id, popcount


def _long_paths(adj: list[int], k: int, ell: int) -> list[int]:
    """reach[a] = mask of b such that some simple a-b path has ell-1 vertices."""
    reach = [0] * k
    target = ell - 1

    def walk(start: int, v: int, used: int, depth: int) -> None:
        if depth == target:
            reach[start] |= 1 << v
            return
        nxt = adj[v] & ~used
        while nxt:
            low = nxt & -nxt
            w = low.bit_length() - 1
            nxt ^= low
            walk(start, w, used | low, depth + 1)

    for a in range(k):
        walk(a, a, 1 << a, 1)
    return reach


def _independent_sets(adj: list[int], k: int, size: int) -> list[int]:
    out = []

    def grow(mask: int, cand: int, need: int) -> None:
        if need == 0:
            out.append(mask)
            return
        while cand:
            if popcount(cand) < need:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            grow(mask | low, cand & ~adj[v], need - 1)

    grow(0, (1 << k) - 1, size)
    return out


def extensions(B: Graph, r: int, ell: int) -> list[Graph]:
    """All one-vertex extensions of a good colour-2 graph that stay good."""
    k = B.n
    adj = list(B.adj)
    reach = _long_paths(adj, k, ell)
    indep = _independent_sets(adj, k, r - 1)
    out = []
    for S in range(1 << k):
        if any(S & reach[a] for a in bits(S)):
            continue
        if any(I & S == 0 for I in indep):
            continue
        new = adj + [S]
        for a in bits(S):
            new[a] |= 1 << k
        out.append(Graph(k + 1, new))
    return out


@dataclass
class Census:
    r: int
    ell: int
    levels: dict = field(default_factory=dict)  # k -> list of representatives

    def counts(self) -> dict:
        return {k: len(v) for k, v in self.levels.items()}

    def first_empty(self):
        for k in sorted(self.levels):
            if not self.levels[k]:
                return k
        return None


def run_census(r: int, ell: int, upto: int) -> Census:
    """Good colour-2 graphs on k = 1..upto vertices, up to isomorphism.

    Stops early at the first empty level (every larger level is empty too).
    """
    census = Census(r, ell)
    level = [Graph(1, [0])]
    census.levels[1] = level
    for k in range(2, upto + 1):
        seen = {}
        for B in level:
            for X in extensions(B, r, ell):
                code = canonical_code(X)
                if code not in seen:
                    seen[code] = X
        level = list(seen.values())
        census.levels[k] = level
        if not level:
            break
    return census


def colouring_from_census(B: Graph) -> dict:
    """Edge colouring of K_{v(B)}: colour 2 on B, colour 1 elsewhere."""
    k = B.n
    return {edge_id(u, v): 2 if B.has_edge(u, v) else 1 for v in range(k) for u in range(v)}


def complete_arrows(k: int, r: int, ell: int) -> tuple[bool, dict | None]:
    """Decide K_k -> (K_r, C_ell) by census; returns (arrows, witness colouring)."""
    census = run_census(r, ell, k)
    level = census.levels.get(k, [])
    if not level:
        return True, None
    return False, colouring_from_census(level[0])
