"""Clique and cycle copies of a graph and the Ramsey hypergraph they form.

Hypervertices are host edges (colex edge ids).  A hyperedge is the edge set
of one K_r copy (kind ``CLIQUE``, type 1) or one C_ell copy (kind ``CYCLE``,
type 2).  Hyperedges sort by (kind, sorted edge ids), which fixes every
"smallest" choice made downstream.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

from .graph import Graph, GraphError, bits, edge_from_id, edge_id

SCHEMA_VERSION = 1


class Kind(IntEnum):
    CLIQUE = 1
    CYCLE = 2

    @property
    def label(self) -> str:
        return "clique" if self is Kind.CLIQUE else "cycle"


@dataclass(frozen=True, order=True)
class Hyperedge:
    kind: Kind
    edges: tuple[int, ...]

    def __post_init__(self):
        if list(self.edges) != sorted(set(self.edges)):
            raise GraphError("hyperedge edges must be sorted and distinct")

    @classmethod
    def of(cls, kind: Kind, eids: Iterable[int]) -> "Hyperedge":
        return cls(Kind(kind), tuple(sorted(set(eids))))

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def vertex_mask(self) -> int:
        m = 0
        for e in self.edges:
            u, v = edge_from_id(e)
            m |= (1 << u) | (1 << v)
        return m

    def vertices(self) -> list[int]:
        return list(bits(self.vertex_mask()))

    def graph(self, n: int) -> Graph:
        return Graph.from_edge_ids(n, self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        return [edge_from_id(e) for e in self.edges]


def clique_hyperedge(vertices: Sequence[int]) -> Hyperedge:
    vs = sorted(vertices)
    return Hyperedge.of(Kind.CLIQUE, (edge_id(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]))


def cycle_hyperedge(cyc: Sequence[int]) -> Hyperedge:
    k = len(cyc)
    return Hyperedge.of(Kind.CYCLE, (edge_id(cyc[i], cyc[(i + 1) % k]) for i in range(k)))


def is_valid_hyperedge(E: Hyperedge, r: int, ell: int) -> bool:
    """Check that E really is a K_r or C_ell edge set."""
    G = Graph.from_edge_ids(max(max(edge_from_id(e)) for e in E.edges) + 1, E.edges) if E.edges else None
    if G is None:
        return False
    verts = G.vertices()
    if E.kind is Kind.CLIQUE:
        return len(verts) == r and len(E.edges) == r * (r - 1) // 2
    if len(verts) != ell or len(E.edges) != ell or any(G.degree(v) != 2 for v in verts):
        return False
    # connected 2-regular graph is a single cycle
    seen, stack = {verts[0]}, [verts[0]]
    while stack:
        x = stack.pop()
        for y in G.neighbours(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == ell


# enumeration ----------------------------------------------------------

def enum_cliques(G: Graph, r: int) -> list[Hyperedge]:
    """One hyperedge per r-vertex clique, in lexicographic vertex-set order."""
    if r < 2:
        raise ValueError("r must be at least 2")
    adj = G.adj
    out: list[tuple[int, ...]] = []

    def extend(chosen: list[int], cand: int) -> None:
        need = r - len(chosen)
        if need == 0:
            out.append(tuple(chosen))
            return
        while cand:
            if bin(cand).count("1") < need:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            extend(chosen, cand & adj[v])
            chosen.pop()

    extend([], G.vmask)
    return [clique_hyperedge(c) for c in out]


_CYCLE_WARN_LEN = 12


def enum_cycles(G: Graph, ell: int) -> list[Hyperedge]:
    """One hyperedge per ell-cycle subgraph.

    A cycle is emitted from its smallest vertex s, walking only through
    vertices > s, and only in the direction where the second vertex is
    smaller than the last; output is in DFS order, which is deterministic.
    """
    if ell < 3:
        raise ValueError("ell must be at least 3")
    if ell > _CYCLE_WARN_LEN and G.num_edges() > 3 * G.num_vertices():
        warnings.warn(f"enumerating {ell}-cycles in a dense graph may be slow", RuntimeWarning)
    adj = G.adj
    found: list[tuple[int, ...]] = []
    path: list[int] = []

    def walk(v: int, allowed: int, depth: int, s: int) -> None:
        if depth == ell:
            if (adj[v] >> s) & 1 and path[1] < path[-1]:
                found.append(tuple(path))
            return
        nxt = adj[v] & allowed
        while nxt:
            low = nxt & -nxt
            w = low.bit_length() - 1
            nxt ^= low
            path.append(w)
            walk(w, allowed & ~low, depth + 1, s)
            path.pop()

    for s in bits(G.vmask):
        higher = G.vmask & ~((1 << (s + 1)) - 1)
        path.append(s)
        walk(s, higher, 1, s)
        path.pop()
    return [cycle_hyperedge(c) for c in found]


# hypergraphs ----------------------------------------------------------

class Hypergraph:
    """Immutable set of clique/cycle hyperedges over a host graph.

    The hypervertex set is always the union of the hyperedges.
    """

    __slots__ = ("host", "hyperedges", "_vertices", "_set")

    def __init__(self, host: Graph, hyperedges: Iterable[Hyperedge], check: bool = True):
        hes = tuple(sorted(set(hyperedges)))
        if check:
            host_edges = host.edge_ids()
            for E in hes:
                if not E.edge_set <= host_edges:
                    raise GraphError(f"hyperedge {E} uses edges missing from the host")
        vs: set[int] = set()
        for E in hes:
            vs.update(E.edges)
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "hyperedges", hes)
        object.__setattr__(self, "_vertices", tuple(sorted(vs)))
        object.__setattr__(self, "_set", frozenset(hes))

    def __setattr__(self, key, value):
        raise AttributeError("Hypergraph is immutable")

    def __reduce__(self):
        return (Hypergraph, (self.host, self.hyperedges, False))

    @property
    def hypervertices(self) -> tuple[int, ...]:
        return self._vertices

    def num_hypervertices(self) -> int:
        return len(self._vertices)

    def __len__(self) -> int:
        return len(self.hyperedges)

    def __iter__(self):
        return iter(self.hyperedges)

    def __contains__(self, E) -> bool:
        return E in self._set

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self._set == other._set and self.host.n == other.host.n

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return (f"Hypergraph(cliques={len(self.cliques())}, cycles={len(self.cycles())}, "
                f"hypervertices={len(self._vertices)})")

    def as_set(self) -> frozenset[Hyperedge]:
        return self._set

    def cliques(self) -> list[Hyperedge]:
        return [E for E in self.hyperedges if E.kind is Kind.CLIQUE]

    def cycles(self) -> list[Hyperedge]:
        return [E for E in self.hyperedges if E.kind is Kind.CYCLE]

    def with_hyperedges(self, hyperedges: Iterable[Hyperedge]) -> "Hypergraph":
        return Hypergraph(self.host, hyperedges, check=False)

    def without(self, E: Hyperedge) -> "Hypergraph":
        return Hypergraph(self.host, (F for F in self.hyperedges if F != E), check=False)

    def without_hypervertex(self, e: int) -> "Hypergraph":
        return Hypergraph(self.host, (F for F in self.hyperedges if e not in F.edge_set), check=False)

    def issubset(self, other: "Hypergraph") -> bool:
        return self._set <= other._set

    def relabel(self, perm: Sequence[int], n: int | None = None) -> "Hypergraph":
        """Image under a host vertex map; the new host is the image of the old one."""
        host = self.host.relabel(perm, n)

        def mv(E: Hyperedge) -> Hyperedge:
            return Hyperedge.of(E.kind, (edge_id(perm[u], perm[v]) for u, v in E.pairs()))

        return Hypergraph(host, (mv(E) for E in self.hyperedges), check=False)


def build_hypergraph(G: Graph, pp) -> Hypergraph:
    """The Ramsey hypergraph of G for (K_r, C_ell)."""
    return Hypergraph(G, enum_cliques(G, pp.r) + enum_cycles(G, pp.ell), check=False)


def underlying_graph(H: Hypergraph) -> Graph:
    """Subgraph of the host spanned by the union of the hyperedges."""
    return Graph.from_edge_ids(H.host.n, H.hypervertices)


# interchange format ---------------------------------------------------

def hypergraph_to_json(H: Hypergraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": H.host.n,
        "host_edges": [list(e) for e in H.host.edges()],
        "hyperedges": [{"kind": E.kind.label, "edges": [list(p) for p in E.pairs()]} for E in H.hyperedges],
    }


def hypergraph_from_json(data: dict) -> Hypergraph:
    n = int(data["n"])
    hes = []
    for item in data["hyperedges"]:
        kind = {"clique": Kind.CLIQUE, "cycle": Kind.CYCLE}[item["kind"]]
        hes.append(Hyperedge.of(kind, (edge_id(u, v) for u, v in item["edges"])))
    if "host_edges" in data:
        host = Graph.from_edges(n, [tuple(e) for e in data["host_edges"]])
    else:
        eids = {e for E in hes for e in E.edges}
        host = Graph.from_edges(n, [edge_from_id(e) for e in eids])
    return Hypergraph(host, hes)


def dump_hypergraph(H: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(hypergraph_to_json(H), fh)


def load_hypergraph(path) -> Hypergraph:
    with open(path) as fh:
        return hypergraph_from_json(json.load(fh))
