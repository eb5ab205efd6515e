"""Small labelled graphs on bitset adjacency rows.

A :class:`Graph` lives in a label space ``0..n-1`` and carries a vertex mask,
so subgraphs of a common host keep the host's labels and may contain isolated
vertices.  Edges are identified by their colex index, which does not depend
on ``n``; this lets hypergraphs built on different hosts share edge ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

VERTEX_CAP = 64


class GraphError(ValueError):
    """Malformed graph data or an out-of-range argument."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def edge_id(u: int, v: int) -> int:
    """Colex index of the unordered pair {u, v}."""
    if u == v:
        raise GraphError(f"loop at vertex {u}")
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def edge_from_id(eid: int) -> tuple[int, int]:
    v = int(((8 * eid + 1) ** 0.5 + 1) / 2)
    while v * (v - 1) // 2 > eid:
        v -= 1
    while (v + 1) * v // 2 <= eid:
        v += 1
    return eid - v * (v - 1) // 2, v


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Edge:
    u: int
    v: int

    def __post_init__(self):
        if not self.u < self.v:
            raise GraphError(f"edge must satisfy u < v, got ({self.u}, {self.v})")

    @property
    def id(self) -> int:
        return edge_id(self.u, self.v)


class Graph:
    """Immutable simple graph; ``adj[v]`` is the neighbourhood bitmask of v."""

    __slots__ = ("n", "adj", "vmask", "_edges")

    def __init__(self, n: int, adj: Sequence[int], vmask: int | None = None, cap: int = VERTEX_CAP):
        if n < 0 or n > cap:
            raise GraphError(f"vertex count {n} outside [0, {cap}]")
        adj = tuple(adj)
        if len(adj) != n:
            raise GraphError("need one adjacency row per vertex")
        full = (1 << n) - 1
        vmask = full if vmask is None else vmask
        if vmask & ~full:
            raise GraphError("vertex mask exceeds label space")
        for v, row in enumerate(adj):
            if row & ~full or (row >> v) & 1:
                raise GraphError(f"bad adjacency row for vertex {v}")
            if row and not (vmask >> v) & 1:
                raise GraphError(f"vertex {v} has edges but is not in the vertex set")
            for w in bits(row):
                if not (adj[w] >> v) & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {w})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "vmask", vmask)
        object.__setattr__(self, "_edges", None)

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, self.adj, self.vmask))

    # construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None) -> "Graph":
        adj = [0] * n
        vmask = 0
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside label space {n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            vmask |= (1 << u) | (1 << v)
        if vertices is None:
            vmask = (1 << n) - 1
        else:
            for v in vertices:
                if not 0 <= v < n:
                    raise GraphError(f"vertex {v} outside label space {n}")
                vmask |= 1 << v
        return cls(n, adj, vmask)

    @classmethod
    def from_edge_ids(cls, n: int, eids: Iterable[int]) -> "Graph":
        """Subgraph spanned by the given edges: vertex set = their endpoints."""
        return cls.from_edges(n, (edge_from_id(e) for e in eids), vertices=())

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    # basic queries ----------------------------------------------------
    def vertices(self) -> list[int]:
        return list(bits(self.vmask))

    def num_vertices(self) -> int:
        return popcount(self.vmask)

    def num_edges(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            out = []
            for u, row in enumerate(self.adj):
                for v in bits(row >> (u + 1)):
                    out.append((u, u + 1 + v))
            object.__setattr__(self, "_edges", tuple(out))
        return list(self._edges)

    def edge_ids(self) -> frozenset[int]:
        return frozenset(edge_id(u, v) for u, v in self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n and (self.vmask >> v) & 1):
            raise GraphError(f"vertex {v} not in graph")

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return popcount(self.adj[v])

    def restricted_degree(self, v: int, S: Iterable[int]) -> int:
        """|N(v) ∩ S|."""
        self._check_vertex(v)
        mask = 0
        for w in S:
            self._check_vertex(w)
            mask |= 1 << w
        return popcount(self.adj[v] & mask)

    def min_degree(self) -> int:
        return min((popcount(self.adj[v]) for v in bits(self.vmask)), default=0)

    def neighbours(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    # derived graphs ---------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> "Graph":
        mask = 0
        for v in vertices:
            mask |= 1 << v
        mask &= self.vmask
        return Graph(self.n, [row & mask if (mask >> v) & 1 else 0 for v, row in enumerate(self.adj)], mask)

    def compact(self) -> "Graph":
        """Relabel the vertex set to 0..v(G)-1 preserving label order."""
        vs = self.vertices()
        pos = {v: i for i, v in enumerate(vs)}
        return Graph.from_edges(len(vs), [(pos[u], pos[v]) for u, v in self.edges()])

    def relabel(self, perm: Sequence[int], n: int | None = None) -> "Graph":
        """Image under the vertex map ``v -> perm[v]`` into label space ``n``."""
        n = self.n if n is None else n
        return Graph.from_edges(n, [(perm[u], perm[v]) for u, v in self.edges()],
                                vertices=[perm[v] for v in self.vertices()])

    def complement(self) -> "Graph":
        return Graph(self.n, [(self.vmask ^ (1 << v)) & ~row if (self.vmask >> v) & 1 else 0
                              for v, row in enumerate(self.adj)], self.vmask)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges()) + list(edges), vertices=self.vertices())

    def is_subgraph_of(self, other: "Graph") -> bool:
        if self.n > other.n or self.vmask & ~other.vmask:
            return False
        return all(row & ~other.adj[v] == 0 for v, row in enumerate(self.adj))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.vmask == other.vmask and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.vmask, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, v={self.num_vertices()}, e={self.num_edges()})"


# subgraph algebra -----------------------------------------------------

def _common_space(F1: Graph, F2: Graph) -> int:
    return max(F1.n, F2.n)


def _pad(G: Graph, n: int) -> tuple[tuple[int, ...], int]:
    return G.adj + (0,) * (n - G.n), G.vmask


def subgraph_intersection(F1: Graph, F2: Graph) -> Graph:
    n = _common_space(F1, F2)
    a1, m1 = _pad(F1, n)
    a2, m2 = _pad(F2, n)
    return Graph(n, [x & y for x, y in zip(a1, a2)], m1 & m2)


def subgraph_union(F1: Graph, F2: Graph) -> Graph:
    n = _common_space(F1, F2)
    a1, m1 = _pad(F1, n)
    a2, m2 = _pad(F2, n)
    return Graph(n, [x | y for x, y in zip(a1, a2)], m1 | m2)


# degree partition -----------------------------------------------------

@dataclass(frozen=True)
class VertexPartitionAB:
    A: frozenset[int]
    B: frozenset[int]


def partition_AB(G: Graph, r: int) -> VertexPartitionAB:
    """Split V(G) into degree-exactly-r vertices (A) and higher-degree ones (B)."""
    A, B = [], []
    for v in G.vertices():
        d = popcount(G.adj[v])
        if d < r:
            raise PreconditionError(f"vertex {v} has degree {d} < r = {r}")
        (A if d == r else B).append(v)
    return VertexPartitionAB(frozenset(A), frozenset(B))


# edge labellings ------------------------------------------------------

class EdgeLabelling:
    """Bijection from a set of edge ids onto 1..m."""

    __slots__ = ("_label",)

    def __init__(self, labels: dict[int, int]):
        vals = sorted(labels.values())
        if vals != list(range(1, len(vals) + 1)):
            raise GraphError("labels must be a bijection onto 1..m")
        object.__setattr__(self, "_label", dict(labels))

    def __setattr__(self, key, value):
        raise AttributeError("EdgeLabelling is immutable")

    def __reduce__(self):
        return (EdgeLabelling, (self._label,))

    def __getitem__(self, eid: int) -> int:
        return self._label[eid]

    def __contains__(self, eid: int) -> bool:
        return eid in self._label

    def __len__(self) -> int:
        return len(self._label)

    def __eq__(self, other):
        return isinstance(other, EdgeLabelling) and self._label == other._label

    def __hash__(self):
        return hash(frozenset(self._label.items()))

    def edges(self) -> frozenset[int]:
        return frozenset(self._label)

    def in_order(self) -> list[int]:
        """Edge ids sorted by label."""
        return sorted(self._label, key=self._label.__getitem__)

    def as_dict(self) -> dict[int, int]:
        return dict(self._label)


# canonical forms ------------------------------------------------------

def _refine(adj: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition given as cell bitmasks.

    Splits are ordered by neighbour-count signatures only, so the result is
    label-independent up to the action of isomorphisms on the input partition.
    """
    while True:
        changed = False
        new_cells: list[int] = []
        for cell in cells:
            if cell & (cell - 1) == 0:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], int] = {}
            for v in bits(cell):
                sig = tuple(popcount(adj[v] & c) for c in cells)
                groups[sig] = groups.get(sig, 0) | (1 << v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _code_of_order(adj: Sequence[int], order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    code = 0
    k = len(order)
    for i, v in enumerate(order):
        row = 0
        for w in bits(adj[v]):
            j = pos[w]
            if j > i:
                row |= 1 << (k - 1 - j)
        code = (code << (k - 1 - i)) | row
    return code


class _Orbits:
    def __init__(self, verts):
        self.parent = {v: v for v in verts}

    def find(self, v):
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if b < a:
                a, b = b, a
            self.parent[b] = a


def _canonical_order(adj: Sequence[int], verts: list[int], prefix_cells: list[int]) -> tuple[int, list[int]]:
    """Individualisation-refinement search returning (max code, vertex order).

    Automorphisms discovered at equal leaves prune sibling branches whose
    vertices are in the same orbit of the subgroup fixing the current path.
    """
    rest = 0
    for v in verts:
        rest |= 1 << v
    for c in prefix_cells:
        rest &= ~c
    start = list(prefix_cells) + ([rest] if rest else [])
    best: list = [None, None]  # code, order
    first: list = [None, None, ()]  # code, order, path
    generators: list[dict[int, int]] = []

    def search(cells: list[int], path: tuple[int, ...]) -> int:
        # returns the depth to jump back to, or -1
        cells = _refine(adj, cells)
        target = next((i for i, c in enumerate(cells) if c & (c - 1)), None)
        if target is None:
            order = [c.bit_length() - 1 for c in cells]
            code = _code_of_order(adj, order)
            if first[0] is None:
                first[0], first[1], first[2] = code, order, path
            elif code == first[0]:
                # the whole subtree below the divergence point is an image of the first one
                generators.append({a: b for a, b in zip(first[1], order)})
                lcp = 0
                while lcp < len(path) and path[lcp] == first[2][lcp]:
                    lcp += 1
                if best[0] is None or code > best[0]:
                    best[0], best[1] = code, order
                return lcp
            if best[0] is None or code > best[0]:
                best[0], best[1] = code, order
            elif code == best[0]:
                generators.append({a: b for a, b in zip(best[1], order)})
            return -1
        depth = len(path)
        cell = cells[target]
        tried: list[int] = []
        for v in bits(cell):
            if tried:
                orb = _Orbits(verts)
                for g in generators:
                    if all(g[p] == p for p in path):
                        for a, b in g.items():
                            orb.union(a, b)
                if any(orb.find(v) == orb.find(t) for t in tried):
                    continue
            tried.append(v)
            child = cells[:target] + [1 << v, cell ^ (1 << v)] + cells[target + 1:]
            j = search(child, path + (v,))
            if 0 <= j < depth:
                return j
        return -1

    search(start, ())
    return best[0], best[1]


def _encode(k: int, n_anchor: int, code: int) -> bytes:
    nbytes = (k * (k - 1) // 2 + 7) // 8
    return bytes([k, n_anchor]) + code.to_bytes(nbytes, "big")


def canonical_code(G: Graph) -> bytes:
    """Isomorphism-invariant byte string; equal iff the graphs are isomorphic.

    Isolated vertices count: the code reflects the whole vertex set.
    """
    verts = G.vertices()
    if not verts:
        return _encode(0, 0, 0)
    code, _ = _canonical_order(G.adj, verts, [])
    return _encode(len(verts), 0, code)


def canonical_order(G: Graph) -> list[int]:
    verts = G.vertices()
    if not verts:
        return []
    return _canonical_order(G.adj, verts, [])[1]


def are_isomorphic(G1: Graph, G2: Graph) -> bool:
    if G1.num_vertices() != G2.num_vertices() or G1.num_edges() != G2.num_edges():
        return False
    return canonical_code(G1) == canonical_code(G2)


def anchored_canonical_code(H: Graph, anchors: Sequence[int]) -> bytes:
    """Canonical code under isomorphisms fixing each anchor individually."""
    return _encode_anchored(H, anchors)[0]


def anchored_canonical_order(H: Graph, anchors: Sequence[int]) -> list[int]:
    return _encode_anchored(H, anchors)[1]


def _encode_anchored(H: Graph, anchors: Sequence[int]) -> tuple[bytes, list[int]]:
    if len(set(anchors)) != len(anchors):
        raise GraphError("anchors must be distinct")
    for a in anchors:
        if not (0 <= a < H.n and (H.vmask >> a) & 1):
            raise GraphError(f"anchor {a} not in V(H)")
    verts = H.vertices()
    if not verts:
        return _encode(0, 0, 0), []
    code, order = _canonical_order(H.adj, verts, [1 << a for a in anchors])
    return _encode(len(verts), len(anchors), code), order


# text format ----------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` / ``u v`` edge-list format."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphError("empty input")
    head = lines[0].split(" ")
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise GraphError(f"bad header line {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise GraphError(f"header declares {m} edges, found {len(lines) - 1} lines")
    seen = set()
    edges = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not all(t.isdigit() for t in parts):
            raise GraphError(f"line {k}: bad edge {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v < n:
            raise GraphError(f"line {k}: need 0 <= u < v < n, got {u} {v}")
        if (u, v) in seen:
            raise GraphError(f"line {k}: duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_graph(G: Graph) -> str:
    edges = G.edges()
    return "".join([f"{G.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def read_graph(path) -> Graph:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_graph(fh.read())


def write_graph(G: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_graph(G))


def all_pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))
