"""Exact density functionals: m, m2, asymmetric m2, lambda, beta, epsilon.

Every value is a :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .graph import Graph, PreconditionError, bits, popcount, subgraph_intersection

Rational = Fraction


class DomainError(ValueError):
    """Density requested outside the range where it is defined."""


def edge_density(G: Graph) -> Fraction:
    v = G.num_vertices()
    if v == 0:
        raise DomainError("edge density of the empty vertex set")
    return Fraction(G.num_edges(), v)


def _induced_counts(G: Graph):
    """Yield (v(J), e(J)) over all induced subgraphs J on nonempty vertex subsets.

    Fixing the vertex set, adding edges only raises both ratios we maximise,
    so induced subgraphs attain the maxima over all subgraphs.
    """
    verts = G.vertices()
    k = len(verts)
    rows = [G.adj[v] for v in verts]
    local = []
    for row in rows:
        m = 0
        for j, w in enumerate(verts):
            if (row >> w) & 1:
                m |= 1 << j
        local.append(m)
    # edges[mask] built incrementally from the mask without its top bit
    edges = [0] * (1 << k)
    for mask in range(1, 1 << k):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        edges[mask] = edges[rest] + popcount(local[top] & rest)
        yield popcount(mask), edges[mask]


def m2(F: Graph) -> Fraction:
    """max over J ⊆ F with v(J) >= 3 of (e(J)-1)/(v(J)-2), by brute force."""
    if F.num_vertices() < 3:
        raise DomainError("m2 needs at least 3 vertices")
    best = None
    for v, e in _induced_counts(F):
        if v < 3:
            continue
        val = Fraction(e - 1, v - 2)
        if best is None or val > best:
            best = val
    return best


def m2_pair(F: Graph, H: Graph) -> Fraction:
    """max over J ⊆ F with e(J) >= 1 of e(J)/(v(J) - 2 + 1/m2(H))."""
    if F.num_edges() == 0:
        raise DomainError("m2(F, H) needs e(F) >= 1")
    inv = 1 / m2(H)
    best = None
    for v, e in _induced_counts(F):
        if e == 0:
            continue
        val = e / (v - 2 + inv)
        if best is None or val > best:
            best = val
    return best


def m2_cycle(ell: int) -> Fraction:
    return Fraction(ell - 1, ell - 2)


def m2_clique(r: int) -> Fraction:
    return Fraction(r + 1, 2)


def m2_clique_cycle(r: int, ell: int) -> Fraction:
    return comb(r, 2) / (r - 2 + Fraction(ell - 2, ell - 1))


def m2_closed(kind: str, r: int | None = None, ell: int | None = None) -> Fraction:
    """Closed forms for m2(C_ell), m2(K_r) and m2(K_r, C_ell)."""
    if kind == "cycle":
        return m2_cycle(ell)
    if kind == "clique":
        return m2_clique(r)
    if kind == "pair":
        return m2_clique_cycle(r, ell)
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class PairParams:
    r: int
    ell: int
    m2_pair: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r < 3 or self.ell < 3:
            raise DomainError(f"need r, ell >= 3, got ({self.r}, {self.ell})")
        object.__setattr__(self, "m2_pair", m2_clique_cycle(self.r, self.ell))

    @property
    def paper_regime(self) -> bool:
        return self.r >= 4 and self.ell >= 4

    @property
    def epsilon(self) -> Fraction:
        return epsilon(self)

    @property
    def lambda_clique(self) -> Fraction:
        return self.r - comb(self.r, 2) / self.m2_pair

    @property
    def perfect_flower_growth(self) -> int:
        """Vertex gain of a non-degenerate flower step: (r-1)(ell-1)-1."""
        return (self.r - 1) * (self.ell - 1) - 1


def lam(G: Graph, pp: PairParams) -> Fraction:
    """lambda(G) = v(G) - e(G)/m2(K_r, C_ell)."""
    return G.num_vertices() - G.num_edges() / pp.m2_pair


def lam_counts(v: int, e: int, pp: PairParams) -> Fraction:
    return v - e / pp.m2_pair


def beta(J: Graph, pp: PairParams) -> Fraction:
    v = J.num_vertices()
    if v > pp.r:
        raise DomainError(f"beta needs v(J) <= r = {pp.r}, got {v}")
    return pp.r - v - (comb(pp.r, 2) - J.num_edges()) / pp.m2_pair


def beta_counts(v: int, e: int, pp: PairParams) -> Fraction:
    return pp.r - v - (comb(pp.r, 2) - e) / pp.m2_pair


def beta_k2(pp: PairParams) -> Fraction:
    return 1 / pp.m2_pair - Fraction(pp.ell - 2, pp.ell - 1)


def critical_density_floor(r: int) -> Fraction:
    """Lower bound on m(G) for underlying graphs of *-critical hypergraphs."""
    return Fraction(r + 1, 2) - Fraction(3, 2 * (r + 3))


@lru_cache(maxsize=None)
def _epsilon(r: int, ell: int) -> Fraction:
    return comb(r, 2) * (1 / m2_clique_cycle(r, ell) - 1 / critical_density_floor(r))


def epsilon(pp: PairParams) -> Fraction:
    """Stopping margin: lambda <= -epsilon holds on every *-critical underlying graph.

    lambda(G) = e(G)(1/m2 - 1/m(G)) <= -e(G)(1/m2 - 1/m*) with m(G) >= m* and
    e(G) >= binom(r, 2).
    """
    if not pp.paper_regime:
        raise DomainError(f"epsilon is only derived for r, ell >= 4, got ({pp.r}, {pp.ell})")
    return _epsilon(pp.r, pp.ell)


def lambda_increment(F1: Graph, F2: Graph, pp: PairParams) -> Fraction:
    """lambda(F1 ∪ F2) - lambda(F1) via the intersection of F1 and F2."""
    J = subgraph_intersection(F1, F2)
    return (F2.num_vertices() - J.num_vertices()) - (F2.num_edges() - J.num_edges()) / pp.m2_pair


def f_ell(t: int, ell: int) -> Fraction:
    """binom(t, 2)/(t - 2 + 1/m2(C_ell)); equals m2(K_t, C_ell)."""
    return comb(t, 2) / (t - 2 + 1 / m2_cycle(ell))


def has_degree_one_vertex(J: Graph) -> bool:
    return any(popcount(J.adj[v]) == 1 for v in bits(J.vmask))


def require_regime(pp: PairParams) -> None:
    if not pp.paper_regime:
        raise PreconditionError("operation needs r, ell >= 4")
