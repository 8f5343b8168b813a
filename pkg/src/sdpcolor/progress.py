"""Contraction-based progress framework and the candidate-set construction.

Two ways of making progress toward an O~(n^a)-coloring: proving that two
non-adjacent vertices share a color in some valid k-coloring (contract
them), or finding a large independent set (spend one color on it). The
driver loops a caller-supplied finder over the shrinking quotient graph,
verifying every claim before applying it.

The candidate collection groups vertices into geometric degree buckets
I_j = {v : (1+delta)^j <= d(v) < (1+delta)^{j+1}} and emits, for every
vertex v and bucket pair (j, i), the set

    T = N_i(N(v) & I_j) = {u in N(S) : (1+delta)^i <= d_S(u) < (1+delta)^{i+1}},

S = N(v) & I_j. On a k-colorable graph with minimum degree d_min and common
neighborhoods bounded by s, at least one of these O(n log^2 n) sets is both
large (d_min^2/s up to polylogs) and nearly 1/(k-1) pure in one color class;
the checker verifies that against a known planted partition.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .graph import Coloring, Graph, verify_coloring
from .testkit import PlantedInstance


# ---------------------------------------------------------------------------
# Degree buckets and the candidate collection
# ---------------------------------------------------------------------------

def bucket_index(degree: int, delta: float) -> int:
    """j with (1+delta)^j <= degree < (1+delta)^{j+1} (degree >= 1).

    Float-robust: the initial estimate from logs is corrected against the
    powers actually computed by ** so boundary degrees land deterministically.
    """
    if degree < 1:
        raise ValueError("bucket index needs degree >= 1")
    base = 1.0 + delta
    j = max(0, int(math.floor(math.log(degree) / math.log(base))))
    while base ** (j + 1) <= degree:
        j += 1
    while j > 0 and base ** j > degree:
        j -= 1
    return j


def default_delta(n: int) -> float:
    """Bucket width 1/ln n with a floor of 0.05 for tiny graphs."""
    if n < 2:
        return 1.0
    return max(1.0 / math.log(n), 0.05)


def degree_buckets(g: Graph, delta: float) -> dict[int, set[int]]:
    """Partition of the positive-degree vertices by geometric degree bucket."""
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    buckets: dict[int, set[int]] = {}
    for v in range(g.n):
        d = g.degree(v)
        if d >= 1:
            buckets.setdefault(bucket_index(d, delta), set()).add(v)
    return buckets


@dataclass(frozen=True)
class CandidateSet:
    members: frozenset[int]
    v: int
    j: int
    i: int


@dataclass(frozen=True)
class CandidateCollection:
    sets: tuple[CandidateSet, ...]
    delta: float

    def __len__(self) -> int:
        return len(self.sets)


def build_candidate_collection(g: Graph, delta: float | None = None) -> CandidateCollection:
    """All nonempty T = N_i(N(v) & I_j), deduplicated with first-provenance.

    Deterministic: v, j, i are enumerated in increasing order and the first
    occurrence of each distinct member set keeps its (v, j, i) tag.
    """
    if delta is None:
        delta = default_delta(g.n)
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    adj = g.adjacency_matrix()
    degs = np.asarray(g.degrees(), dtype=np.int64)
    jbucket = np.array([bucket_index(int(d), delta) if d >= 1 else -1
                        for d in degs], dtype=np.int64)
    out: list[CandidateSet] = []
    seen: dict[frozenset[int], int] = {}
    for v in range(g.n):
        nbrs = np.nonzero(adj[v])[0]
        if nbrs.size == 0:
            continue
        for j in sorted(set(int(x) for x in jbucket[nbrs])):
            s_idx = nbrs[jbucket[nbrs] == j]
            d_s = adj[:, s_idx].sum(axis=1)
            touched = np.nonzero(d_s)[0]
            if touched.size == 0:
                continue
            ibuckets = np.array([bucket_index(int(d_s[u]), delta) for u in touched],
                                dtype=np.int64)
            for i in sorted(set(int(x) for x in ibuckets)):
                members = frozenset(int(u) for u in touched[ibuckets == i])
                if members not in seen:
                    seen[members] = len(out)
                    out.append(CandidateSet(members, v, j, i))
    return CandidateCollection(tuple(out), delta)


def collection_to_json(coll: CandidateCollection) -> str:
    payload = [
        {"v": cs.v, "j": cs.j, "i": cs.i, "members": sorted(cs.members)}
        for cs in coll.sets
    ]
    return json.dumps({"delta": coll.delta, "sets": payload}, sort_keys=True)


# ---------------------------------------------------------------------------
# Pigeonhole search utility (test oracle for the bucket selection argument)
# ---------------------------------------------------------------------------

def find_pigeon_index(x, y, delta: float, beta: float | None = None) -> int:
    """Index i with x_i >= delta * mean(x) and x_i >= (1-delta) * beta * y_i.

    beta defaults to sum(x)/sum(y). Existence is guaranteed for nonnegative
    sequences with sum(x) >= beta * sum(y); raises if the inputs break that
    contract.
    """
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if len(x) != len(y) or not x:
        raise ValueError("need two equal-length nonempty sequences")
    if min(x) < 0 or min(y) < 0:
        raise ValueError("sequences must be nonnegative")
    total_x = sum(x)
    if beta is None:
        total_y = sum(y)
        beta = total_x / total_y if total_y > 0 else float("inf")
    mean_x = total_x / len(x)
    for i in range(len(x)):
        if x[i] >= delta * mean_x and x[i] >= (1.0 - delta) * beta * y[i]:
            return i
    raise ValueError("no index satisfies the pigeonhole conditions; "
                     "inputs violate sum(x) >= beta * sum(y)")


# ---------------------------------------------------------------------------
# Guarantee check against a planted partition (test-only oracle)
# ---------------------------------------------------------------------------

def collection_guarantee_check(g: Graph, coll: CandidateCollection, k: int,
                               planted: PlantedInstance) -> dict:
    """Search the collection for a witness set that is simultaneously large
    (>= d_min^2 / (s ln^2 n)) and nearly 1/(k-1) pure in the heaviest planted
    class. Returns a report; the caller asserts report["found"]."""
    if planted.graph != g:
        raise ValueError("planted instance does not match the graph")
    n = g.n
    degs = g.degrees()
    class_weight = [sum(degs[v] for v in cls) for cls in planted.classes]
    red_class = min(range(len(class_weight)),
                    key=lambda c: (-class_weight[c], c))
    red = set(planted.classes[red_class])
    d_min = min(degs) if n else 0
    adj = g.adjacency_matrix().astype(np.int16)
    common = adj @ adj
    np.fill_diagonal(common, 0)
    s_max = int(common.max()) if n else 0
    logn = math.log(max(n, 3))
    size_floor = d_min * d_min / (max(s_max, 1) * logn * logn)
    purity_floor = 1.0 / (k - 1) - 2.0 / logn
    best = None
    found = None
    for cs in coll.sets:
        size = len(cs.members)
        red_frac = len(cs.members & red) / size if size else 0.0
        key = (min(size / max(size_floor, 1e-12), 4.0)
               + min((red_frac - purity_floor) * 4.0, 4.0))
        if best is None or key > best["score"]:
            best = {"score": key, "v": cs.v, "j": cs.j, "i": cs.i,
                    "size": size, "red_fraction": red_frac}
        if size >= size_floor and red_frac >= purity_floor:
            if found is None:
                found = {"v": cs.v, "j": cs.j, "i": cs.i, "size": size,
                         "red_fraction": red_frac}
    if best is not None:
        best.pop("score", None)
    return {
        "n": n,
        "k": k,
        "delta": coll.delta,
        "d_min": d_min,
        "s_max": s_max,
        "size_floor": size_floor,
        "purity_floor": purity_floor,
        "collection_size": len(coll),
        "red_class": red_class,
        "found": found is not None,
        "witness": found,
        "best": best,
    }


# ---------------------------------------------------------------------------
# Contraction and the progress driver
# ---------------------------------------------------------------------------

class ContradictionError(RuntimeError):
    """A same-color merge hit an edge: no valid coloring is consistent with
    the accumulated inferences (the input was not k-colorable, or a finder
    made an unsound claim)."""


@dataclass(frozen=True)
class SameColor:
    u: int
    v: int


@dataclass(frozen=True)
class LargeIndependentSet:
    members: frozenset[int]


@dataclass(frozen=True)
class Colored:
    coloring: dict[int, int]  # quotient vertex -> color


ProgressResult = SameColor | LargeIndependentSet | Colored


class ContractedGraph:
    """Union-find over a base graph with a live quotient adjacency.

    Vertices of the quotient are base-vertex representatives (the smallest id
    in each merged group). Single-owner mutable; the driver serializes all
    mutations. Every mutation is appended to ``oplog`` so observers (the
    combined finder) can replay changes incrementally.
    """

    def __init__(self, base: Graph):
        self.base = base
        self.parent = list(range(base.n))
        self.adj: dict[int, set[int]] = {v: set(base.neighbors(v))
                                         for v in range(base.n)}
        self.members: dict[int, set[int]] = {v: {v} for v in range(base.n)}
        self.oplog: list[tuple] = []

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    @property
    def alive(self) -> list[int]:
        return sorted(self.adj)

    @property
    def alive_count(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def is_independent(self, vs: Iterable[int]) -> bool:
        vset = set(vs)
        if not all(v in self.adj for v in vset):
            return False
        return all(not (self.adj[v] & vset) for v in vset)

    def merge(self, u: int, v: int) -> int:
        """Merge two live, distinct, non-adjacent quotient vertices; returns
        the surviving representative (the smaller id)."""
        u, v = self.find(u), self.find(v)
        if u == v or u not in self.adj or v not in self.adj:
            raise ValueError(f"merge needs two live distinct vertices, got {u},{v}")
        if v in self.adj[u]:
            raise ContradictionError(
                f"vertices {u} and {v} are adjacent; no valid coloring gives "
                f"them the same color")
        keep, drop = (u, v) if u < v else (v, u)
        self.parent[drop] = keep
        new_nbrs = (self.adj[keep] | self.adj[drop]) - {keep, drop}
        for w in self.adj[keep]:
            self.adj[w].discard(keep)
        for w in self.adj[drop]:
            self.adj[w].discard(drop)
        for w in new_nbrs:
            self.adj[w].add(keep)
        self.adj[keep] = new_nbrs
        del self.adj[drop]
        self.members[keep] |= self.members.pop(drop)
        self.oplog.append(("merge", keep, drop))
        return keep

    def delete(self, vs: Iterable[int]) -> None:
        vset = {self.find(v) for v in vs}
        for v in vset:
            if v not in self.adj:
                raise ValueError(f"vertex {v} is not live")
        for v in vset:
            for w in self.adj[v]:
                if w not in vset:
                    self.adj[w].discard(v)
            del self.adj[v]
        self.oplog.append(("delete", frozenset(vset)))

    def quotient_graph(self) -> tuple[Graph, dict[int, int]]:
        """The quotient as an immutable Graph plus representative -> index."""
        reps = self.alive
        mapping = {rep: i for i, rep in enumerate(reps)}
        edges = []
        for rep in reps:
            for w in self.adj[rep]:
                if rep < w:
                    edges.append((mapping[rep], mapping[w]))
        return Graph(len(reps), edges), mapping

    def base_members(self, rep: int) -> set[int]:
        return set(self.members[self.find(rep)])


def merge_same_color(cg: ContractedGraph, u: int, v: int) -> ContractedGraph:
    """Apply one same-color inference in place (raises ContradictionError on
    an adjacent pair); returns cg for chaining."""
    cg.merge(u, v)
    return cg


class NotKColorableError(RuntimeError):
    """Driver-level failure: contradiction, color budget exhaustion, or a
    subordinate solver failure. ``kind`` distinguishes the cause."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def progress_driver(g: Graph, k: int, alpha_target: float,
                    finder: Callable[[ContractedGraph], ProgressResult],
                    budget: int | None = None) -> Coloring:
    """Drive a progress finder to a full proper coloring of g.

    SameColor claims contract the quotient; LargeIndependentSet claims spend
    one color on the base vertices of the claimed set; Colored finishes the
    remaining quotient outright. Every claim is verified against the quotient
    before
    being applied, and the color count is capped by ``budget`` (default
    4 n^alpha_target (1 + ln n)^2).
    """
    if budget is None:
        budget = max(1, int(4.0 * max(g.n, 1) ** alpha_target
                            * (1.0 + math.log(max(g.n, 1))) ** 2))
    cg = ContractedGraph(g)
    assignment: dict[int, int] = {}
    next_color = 0
    while cg.alive_count > 0:
        result = finder(cg)
        if isinstance(result, SameColor):
            u, v = result.u, result.v
            if cg.find(u) != u or cg.find(v) != v or u == v:
                raise ValueError(f"finder returned a stale same-color pair {u},{v}")
            cg.merge(u, v)  # raises ContradictionError on adjacency
        elif isinstance(result, LargeIndependentSet):
            members = result.members
            if not members:
                raise ValueError("finder returned an empty independent set")
            if not cg.is_independent(members):
                raise ValueError("finder returned a dependent vertex set")
            if next_color + 1 > budget:
                raise NotKColorableError(
                    "budget", f"color budget {budget} exhausted")
            for rep in members:
                for base_v in cg.base_members(rep):
                    assignment[base_v] = next_color
            next_color += 1
            cg.delete(members)
        elif isinstance(result, Colored):
            quotient, mapping = cg.quotient_graph()
            proposal = result.coloring
            if set(proposal) != set(mapping):
                raise ValueError("finder coloring does not cover the quotient")
            qcol = Coloring(tuple(proposal[rep] for rep in sorted(mapping)))
            if not verify_coloring(quotient, qcol):
                raise ValueError("finder returned an improper quotient coloring")
            used = sorted(set(proposal.values()))
            relabel = {c: next_color + i for i, c in enumerate(used)}
            if next_color + len(used) > budget:
                raise NotKColorableError(
                    "budget", f"color budget {budget} exhausted")
            for rep, c in proposal.items():
                for base_v in cg.base_members(rep):
                    assignment[base_v] = relabel[c]
            next_color += len(used)
            cg.delete(list(proposal))
        else:
            raise TypeError(f"finder returned {result!r}, not a progress result")
    coloring = Coloring(tuple(assignment[v] for v in range(g.n)))
    if not verify_coloring(g, coloring):
        raise AssertionError("driver assembled an improper coloring")
    return coloring
