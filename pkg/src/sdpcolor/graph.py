"""Immutable simple undirected graphs, colorings, and structural helpers.

Vertices are the integers 0..n-1. Graphs are immutable after construction and
every operation here is read-only, so instances can be shared freely between
threads. DIMACS .col files use 1-indexed vertices; the conversion happens at
the I/O boundary only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

import numpy as np


class DimacsError(ValueError):
    """Malformed DIMACS .col input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Graph:
    """Simple undirected graph on vertices 0..n-1 (no loops, no multi-edges)."""

    __slots__ = ("_n", "_edges", "_adj", "_cache")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e!r} out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self._adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._cache: dict = {}

    @classmethod
    def _from_parts(cls, n: int, edges: tuple[tuple[int, int], ...],
                    adj: tuple[frozenset[int], ...]) -> "Graph":
        # Trusted constructor for internal callers that already hold
        # normalized, validated parts. Skips all checks.
        g = object.__new__(cls)
        g._n = n
        g._edges = edges
        g._adj = adj
        g._cache = {}
        return g

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    @property
    def average_degree(self) -> float:
        if self._n == 0:
            return 0.0
        return 2.0 * self.m / self._n

    @property
    def max_degree(self) -> int:
        if self._n == 0:
            return 0
        return max(len(s) for s in self._adj)

    def adjacency_matrix(self) -> np.ndarray:
        """Boolean n*n adjacency matrix (cached)."""
        mat = self._cache.get("adjmat")
        if mat is None:
            mat = np.zeros((self._n, self._n), dtype=bool)
            if self._edges:
                eu, ev = self.edge_arrays()
                mat[eu, ev] = True
                mat[ev, eu] = True
            self._cache["adjmat"] = mat
        return mat

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as two int64 arrays (u[i] < v[i]; cached)."""
        arrs = self._cache.get("edgearr")
        if arrs is None:
            if self._edges:
                arr = np.asarray(self._edges, dtype=np.int64)
                arrs = (arr[:, 0].copy(), arr[:, 1].copy())
            else:
                arrs = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
            self._cache["edgearr"] = arrs
        return arrs

    def __eq__(self, other) -> bool:
        if isinstance(other, Graph):
            return self._n == other._n and self._edges == other._edges
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


@dataclass(frozen=True)
class Coloring:
    """Vertex coloring: assignment[v] is the color index of vertex v."""

    assignment: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment))

    @classmethod
    def from_sequence(cls, seq: Iterable[int]) -> "Coloring":
        return cls(tuple(int(c) for c in seq))


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by vertex set ``s`` plus the old->new id mapping.

    New ids are assigned in increasing order of the old ids, so the mapping is
    the order-preserving bijection s -> [0, |s|).
    """
    verts = sorted(set(s))
    if verts and not (0 <= verts[0] and verts[-1] < g.n):
        raise ValueError(f"subset contains invalid vertex ids for n={g.n}")
    mapping = {old: new for new, old in enumerate(verts)}
    member = mapping.keys()
    edges = []
    for u in verts:
        mu = mapping[u]
        for v in g.neighbors(u):
            if v > u and v in member:
                edges.append((mu, mapping[v]))
    adj: list[set[int]] = [set() for _ in verts]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    sub = Graph._from_parts(len(verts), tuple(sorted(edges)),
                            tuple(frozenset(x) for x in adj))
    return sub, mapping


def common_neighbors(g: Graph, u: int, v: int) -> set[int]:
    """N(u) & N(v)."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError(f"invalid vertex pair ({u}, {v}) for n={g.n}")
    if u == v:
        raise ValueError("common_neighbors requires two distinct vertices")
    return set(g.neighbors(u) & g.neighbors(v))


def peel_low_degree(g: Graph, threshold: float) -> tuple[set[int], set[int]]:
    """Exhaustively remove vertices of residual degree < threshold.

    Returns (U, W): U is everything removed, W = V - U is the unique maximal
    subgraph of minimum degree >= threshold. Runs in O(n + m) via a work
    queue; the result does not depend on removal order.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    deg = g.degrees()
    removed = [False] * g.n
    queue = deque(v for v in range(g.n) if deg[v] < threshold)
    in_queue = [False] * g.n
    for v in queue:
        in_queue[v] = True
    while queue:
        v = queue.popleft()
        if removed[v]:
            continue
        removed[v] = True
        for w in g.neighbors(v):
            if not removed[w]:
                deg[w] -= 1
                if deg[w] < threshold and not in_queue[w]:
                    in_queue[w] = True
                    queue.append(w)
    u_set = {v for v in range(g.n) if removed[v]}
    w_set = {v for v in range(g.n) if not removed[v]}
    return u_set, w_set


def verify_coloring(g: Graph, c: Coloring) -> bool:
    """True iff c assigns a color to every vertex and no edge is monochromatic."""
    a = c.assignment
    if len(a) != g.n:
        return False
    return all(a[u] != a[v] for u, v in g.edges)


def verify_independent_set(g: Graph, s: Iterable[int]) -> bool:
    """True iff s is a valid vertex set with no internal edge."""
    members = set(s)
    if any(not (0 <= v < g.n) for v in members):
        return False
    return all(not (g.neighbors(v) & members) for v in members)


def largest_color_class(c: Coloring) -> set[int]:
    """Largest color class; ties broken by the smallest color index."""
    classes: dict[int, set[int]] = {}
    for v, col in enumerate(c.assignment):
        classes.setdefault(col, set()).add(v)
    best_color = None
    best_size = -1
    for col in sorted(classes):
        size = len(classes[col])
        if size > best_size:
            best_size = size
            best_color = col
    return classes[best_color] if best_color is not None else set()


def bipartition(g: Graph) -> tuple[set[int], set[int]] | None:
    """A 2-coloring's two sides via BFS, or None if an odd cycle exists."""
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] != -1:
            continue
        side[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if side[w] == -1:
                    side[w] = 1 - side[v]
                    queue.append(w)
                elif side[w] == side[v]:
                    return None
    return ({v for v in range(g.n) if side[v] == 0},
            {v for v in range(g.n) if side[v] == 1})


def two_coloring(g: Graph) -> Coloring | None:
    """Proper 2-coloring (1 color reused for isolated vertices), or None."""
    parts = bipartition(g)
    if parts is None:
        return None
    assignment = [0] * g.n
    for v in parts[1]:
        assignment[v] = 1
    return Coloring(tuple(assignment))


# ---------------------------------------------------------------------------
# DIMACS .col I/O
# ---------------------------------------------------------------------------

def read_dimacs(source: str | IO[str]) -> Graph:
    """Parse a DIMACS .col file ("p edge n m" header, "e u v" edges, 1-indexed).

    Self-loops, duplicate edges, out-of-range endpoints, and a mismatched edge
    count are all hard parse errors: benchmark files are not silently cleaned.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="ascii") as fh:
            return _read_dimacs_lines(fh)
    return _read_dimacs_lines(source)


def _read_dimacs_lines(lines: Iterator[str]) -> Graph:
    n = None
    m_declared = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    line_no = 0
    for raw in lines:
        line_no += 1
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if n is not None:
                raise DimacsError("duplicate problem line", line_no)
            if len(fields) != 4 or fields[1] != "edge":
                raise DimacsError(f"expected 'p edge <n> <m>', got {line!r}", line_no)
            try:
                n = int(fields[2])
                m_declared = int(fields[3])
            except ValueError:
                raise DimacsError(f"non-integer sizes in {line!r}", line_no) from None
            if n < 0 or m_declared < 0:
                raise DimacsError("negative size in problem line", line_no)
        elif fields[0] == "e":
            if n is None:
                raise DimacsError("edge line before problem line", line_no)
            if len(fields) != 3:
                raise DimacsError(f"expected 'e <u> <v>', got {line!r}", line_no)
            try:
                u = int(fields[1]) - 1
                v = int(fields[2]) - 1
            except ValueError:
                raise DimacsError(f"non-integer endpoint in {line!r}", line_no) from None
            if not (0 <= u < n and 0 <= v < n):
                raise DimacsError(f"endpoint out of range in {line!r}", line_no)
            if u == v:
                raise DimacsError(f"self-loop at vertex {u + 1}", line_no)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DimacsError(f"duplicate edge ({u + 1}, {v + 1})", line_no)
            seen.add(key)
            edges.append(key)
        else:
            raise DimacsError(f"unrecognized line {line!r}", line_no)
    if n is None:
        raise DimacsError("missing problem line")
    if len(edges) != m_declared:
        raise DimacsError(f"problem line declared {m_declared} edges, found {len(edges)}")
    return Graph(n, edges)


def write_dimacs(g: Graph, target: str | IO[str]) -> None:
    """Write g in DIMACS .col format (edges sorted, 1-indexed endpoints)."""
    if isinstance(target, str):
        with open(target, "w", encoding="ascii") as fh:
            write_dimacs(g, fh)
        return
    target.write(f"p edge {g.n} {g.m}\n")
    for u, v in g.edges:
        target.write(f"e {u + 1} {v + 1}\n")
