"""The combined coloring algorithm and its exponent sequence.

The color-count exponents are the exact rationals

    a_2 = 0,  a_3 = 3/14,
    a_k = 1 - 6 / (k + 4 + 3 (1 - 2/k) / (1 - a_{k-2}))   for k >= 4,

chosen so that (2 a_k/(1-2/k) - (1-a_k)/(1-a_{k-2})) * 3/k = 1 - a_k: the
independent sets produced by the candidate-collection route match the
n^{1-a_k} progress size.

One round of the finder on the current quotient graph (n vertices):

  1/2. k = 2 exact bipartite coloring; k = 3 via the degree-split fallback.
  3.   peel vertices of residual degree < n^{a_k/(1-2/k)} into U, core W.
  4.   |U| >= n/2: threshold rounding on G[U] gives a large independent set.
  5/6. otherwise probe the pair u,v in W with the largest common
       neighborhood S (when |S| >= n^{(1-a_k)/(1-a_{k-2})}): color G[S] with
       k-2 colors recursively; success within the cutoff extracts a large
       color class, failure proves u,v share a color and they are merged.
  7-9. no qualifying pair: build the candidate collection on G[W] and run
       the promise extractor on the largest candidates until one yields a
       set of size n^{1-a_k} up to the harness constant.

Every claim is re-verified by the driver before it is applied. The whole
algorithm reruns with fresh seeds on failure (contradiction, budget, or
solver stall), since the randomized inner steps can produce false
"not colorable" evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graph import (
    Coloring,
    Graph,
    bipartition,
    induced_subgraph,
    largest_color_class,
    two_coloring,
)
from .indset import ak_independent_set, greedy_independent_set
from .progress import (
    Colored,
    ContractedGraph,
    ContradictionError,
    LargeIndependentSet,
    NotKColorableError,
    SameColor,
    build_candidate_collection,
    default_delta,
    progress_driver,
)
from .rounding import (
    NotVectorColorableError,
    RoundingParams,
    kms_color,
    kms_independent_set,
    kms_threshold,
)
from .testkit import CHROMATIC_GUARD, brute_force_chromatic
from .vecsdp import InfeasibleError, solve_vector_coloring


@lru_cache(maxsize=None)
def alpha_k(k: int) -> Fraction:
    """Exact color-count exponent for k-colorable graphs."""
    if k < 2:
        raise ValueError(f"exponent sequence starts at k = 2, got {k}")
    if k == 2:
        return Fraction(0)
    if k == 3:
        return Fraction(3, 14)
    prev = alpha_k(k - 2)
    return 1 - Fraction(6) / (k + 4 + 3 * (1 - Fraction(2, k)) / (1 - prev))


def step9_identity_holds(k: int) -> bool:
    """Exact check of (2a_k/(1-2/k) - (1-a_k)/(1-a_{k-2})) * 3/k == 1 - a_k."""
    if k < 4:
        raise ValueError("the identity applies for k >= 4")
    a = alpha_k(k)
    prev = alpha_k(k - 2)
    lhs = (2 * a / (1 - Fraction(2, k)) - (1 - a) / (1 - prev)) * Fraction(3, k)
    return lhs == 1 - a


def cutoff(size: int, k: int, c0: float = 4.0) -> int:
    """Color-count threshold c0 * size^{a_k} * (1 + ln size)^2 (floored)."""
    if size < 1:
        raise ValueError(f"cutoff needs a positive size, got {size}")
    if k < 2:
        raise ValueError(f"cutoff needs k >= 2, got {k}")
    a = float(alpha_k(k))
    return max(1, int(c0 * size ** a * (1.0 + math.log(size)) ** 2))


@dataclass(frozen=True)
class CombinedConfig:
    """Tunable constants of the combined algorithm (all config-overridable)."""

    eps: float = 1e-3
    trials: int = 64
    seed: int = 0
    repeats: int = 3
    c0: float = 4.0                 # cutoff / budget constant
    size_floor_const: float = 4.0   # step-9 acceptance divisor
    candidate_cap: int = 8          # step-9 candidate probes per round
    solver_budget: int = 1600
    indset_budget: int = 3000
    exact_threshold: int = CHROMATIC_GUARD  # quotient size for exact finish
    # Declarations stay auditable: general ones up to the exact oracle's
    # size guard, 2-colorability ones up to 80 (bipartiteness is exact at
    # any size).
    declaration_limit: int = 30
    declaration_limit_bipartite: int = 80


@dataclass(frozen=True)
class Declaration:
    """One step-6 "not (k-2)-colorable" inference, kept for oracle audits.

    Edges are in the local indexing of the probed common-neighborhood
    subgraph; only subgraphs up to the configured size are recorded.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    k: int  # the number of colors the subgraph was declared to exceed


@dataclass
class CombinedResult:
    n: int
    k: int
    coloring: Coloring | None
    failure: str | None
    alpha_exponent: Fraction
    seed: int
    repeats_used: int
    k3_fallback: bool
    declarations: list[Declaration] = field(default_factory=list)

    @property
    def colors_used(self) -> int | None:
        return self.coloring.colors_used if self.coloring is not None else None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "colors_used": self.colors_used,
            "coloring": (list(self.coloring.assignment)
                         if self.coloring is not None else None),
            "failure": self.failure,
            "alpha_k": str(self.alpha_exponent),
            "bound_n_pow_alpha": float(self.n ** float(self.alpha_exponent)),
            "seed": self.seed,
            "repeats_used": self.repeats_used,
            "k3_fallback": self.k3_fallback,
        }


# ---------------------------------------------------------------------------
# k = 3 fallback: high-degree neighborhood splitting + threshold rounding
# ---------------------------------------------------------------------------

def color_three_fallback(g: Graph, cfg: CombinedConfig, seed: int) -> Coloring:
    """Color a 3-colorable graph with roughly n^{1/4} polylog colors.

    While a vertex of degree >= n^{3/4} exists, its neighborhood must be
    bipartite in a 3-colorable graph (a non-bipartite neighborhood is a
    sound "not 3-colorable" witness) and is finished with two fresh colors;
    the low-degree remainder goes to threshold-rounding coloring.
    """
    assignment = [-1] * g.n
    remaining = list(range(g.n))
    next_color = 0
    while remaining:
        sub, mapping = induced_subgraph(g, remaining)
        inverse = {new: old for old, new in mapping.items()}
        if sub.n <= cfg.exact_threshold:
            col = brute_force_chromatic(sub)
            for idx, c in enumerate(col.assignment):
                assignment[inverse[idx]] = next_color + c
            break
        exact2 = two_coloring(sub)
        if exact2 is not None:
            for idx, c in enumerate(exact2.assignment):
                assignment[inverse[idx]] = next_color + c
            break
        v_star = max(range(sub.n), key=lambda v: (sub.degree(v), -v))
        if sub.degree(v_star) >= sub.n ** 0.75:
            nbrs = sorted(sub.neighbors(v_star))
            nsub, nmap = induced_subgraph(sub, nbrs)
            parts = bipartition(nsub)
            if parts is None:
                raise NotKColorableError(
                    "witness",
                    "a vertex neighborhood is not bipartite, so the graph "
                    "is not 3-colorable")
            ninv = {new: old for old, new in nmap.items()}
            for side, color in zip(parts, (next_color, next_color + 1)):
                for idx in side:
                    assignment[inverse[ninv[idx]]] = color
            next_color += 2
            colored = {inverse[ninv[idx]] for side in parts for idx in side}
            remaining = [v for v in remaining if v not in colored]
        else:
            try:
                col = kms_color(sub, 3, eps=cfg.eps, trials=cfg.trials,
                                seed=seed)
            except NotVectorColorableError as exc:
                raise NotKColorableError("solver", str(exc)) from exc
            for idx, c in enumerate(col.assignment):
                assignment[inverse[idx]] = next_color + c
            break
    return Coloring(tuple(assignment))


# ---------------------------------------------------------------------------
# The per-round finder for k >= 4
# ---------------------------------------------------------------------------

def _bipartition_submatrix(sub: np.ndarray) -> tuple[list[int], list[int]] | None:
    """BFS 2-coloring of a boolean adjacency submatrix; None on an odd cycle."""
    s = sub.shape[0]
    color = np.full(s, -1, dtype=np.int8)
    for root in range(s):
        if color[root] != -1:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            v = queue.pop()
            nbrs = np.nonzero(sub[v])[0]
            for w in nbrs:
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    queue.append(int(w))
                elif color[w] == color[v]:
                    return None
    side0 = [int(i) for i in np.nonzero(color == 0)[0]]
    side1 = [int(i) for i in np.nonzero(color != 0)[0]]
    return side0, side1


class _CombinedFinder:
    """Progress finder realizing peeling, pair probes, and candidate probes.

    Maintains an incremental mirror of the quotient: boolean adjacency A and
    the common-neighbor count matrix C over base vertex ids, replayed from
    the ContractedGraph oplog. All returned vertex ids are quotient
    representatives (= base ids), which is what the driver verifies against.
    """

    def __init__(self, k: int, cfg: CombinedConfig, seed: int,
                 declarations: list[Declaration]):
        self.k = k
        self.cfg = cfg
        self.seed = seed
        self.declarations = declarations
        self.round_no = 0
        self._synced = 0
        self._a = None
        self._c = None
        self._alive = None
        self._deg = None
        self._warm: dict[int, np.ndarray] = {}  # rep id -> last solution row

    # -- incremental state ---------------------------------------------------

    def _init_state(self, cg: ContractedGraph) -> None:
        base = cg.base
        a = base.adjacency_matrix().copy()
        af = a.astype(np.float32)
        c = (af @ af).astype(np.int32)
        np.fill_diagonal(c, 0)
        self._a = a
        self._c = c
        self._alive = np.ones(base.n, dtype=bool)
        self._deg = a.sum(axis=1).astype(np.int64)

    def _apply_merge(self, keep: int, drop: int) -> None:
        a, c = self._a, self._c
        row_keep = a[keep].copy()
        row_drop = a[drop].copy()
        union = row_keep | row_drop
        union[keep] = False
        union[drop] = False
        only_keep = np.nonzero(row_keep & ~row_drop & self._alive)[0]
        only_drop = np.nonzero(row_drop & ~row_keep & self._alive)[0]
        both = np.nonzero(row_keep & row_drop & self._alive)[0]
        # The merged vertex is one common neighbor where there were two
        # (pairs adjacent to both halves) or none (pairs split across the
        # symmetric difference).
        if both.size:
            c[np.ix_(both, both)] -= 1
        if only_keep.size and only_drop.size:
            c[np.ix_(only_keep, only_drop)] += 1
            c[np.ix_(only_drop, only_keep)] += 1
        self._alive[drop] = False
        a[drop, :] = False
        a[:, drop] = False
        c[drop, :] = 0
        c[:, drop] = 0
        a[keep, :] = union
        a[:, keep] = union
        nbr_idx = np.nonzero(union)[0]
        fresh = a[:, nbr_idx].sum(axis=1).astype(np.int32)
        fresh[~self._alive] = 0
        fresh[keep] = 0
        c[keep, :] = fresh
        c[:, keep] = fresh
        np.fill_diagonal(c, 0)
        self._deg = a.sum(axis=1).astype(np.int64)

    def _apply_delete(self, vs: frozenset[int]) -> None:
        a, c = self._a, self._c
        idx = np.fromiter(sorted(vs), dtype=np.int64)
        cols = a[:, idx].astype(np.float32)
        c -= (cols @ cols.T).astype(np.int32)
        self._alive[idx] = False
        a[idx, :] = False
        a[:, idx] = False
        c[idx, :] = 0
        c[:, idx] = 0
        np.fill_diagonal(c, 0)
        self._deg = a.sum(axis=1).astype(np.int64)

    def _sync(self, cg: ContractedGraph) -> None:
        if self._a is None:
            self._init_state(cg)
        for op in cg.oplog[self._synced:]:
            if op[0] == "merge":
                self._apply_merge(op[1], op[2])
            else:
                self._apply_delete(op[1])
        self._synced = len(cg.oplog)

    # -- helpers --------------------------------------------------------------

    def _materialize(self, ids: list[int]) -> tuple[Graph, dict[int, int]]:
        idx = np.fromiter(ids, dtype=np.int64)
        sub = self._a[np.ix_(idx, idx)]
        iu, iv = np.nonzero(np.triu(sub, 1))
        edges = tuple(sorted((int(a), int(b)) for a, b in zip(iu, iv)))
        adj: list[set[int]] = [set() for _ in ids]
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        graph = Graph._from_parts(len(ids), edges,
                                  tuple(frozenset(s) for s in adj))
        return graph, {rep: i for i, rep in enumerate(ids)}

    def _peel(self, thr: float) -> tuple[list[int], list[int]]:
        alive_idx = np.nonzero(self._alive)[0]
        sub = self._a[np.ix_(alive_idx, alive_idx)]
        keep = np.ones(alive_idx.size, dtype=bool)
        deg = sub.sum(axis=1).astype(np.int64)
        while True:
            low = keep & (deg < thr)
            if not low.any():
                break
            keep &= ~low
            deg = (sub[:, keep].sum(axis=1)).astype(np.int64)
        u_ids = [int(alive_idx[i]) for i in np.nonzero(~keep)[0]]
        w_ids = [int(alive_idx[i]) for i in np.nonzero(keep)[0]]
        return u_ids, w_ids

    # -- the round ------------------------------------------------------------

    def __call__(self, cg: ContractedGraph):
        self._sync(cg)
        self.round_no += 1
        k, cfg = self.k, self.cfg
        n = cg.alive_count
        if n <= cfg.exact_threshold:
            quotient, mapping = cg.quotient_graph()
            col = brute_force_chromatic(quotient)
            inverse = {i: rep for rep, i in mapping.items()}
            return Colored({inverse[i]: int(c)
                            for i, c in enumerate(col.assignment)})
        ak = float(alpha_k(k))
        ak2 = float(alpha_k(k - 2))
        peel_thr = n ** (ak / (1.0 - 2.0 / k))
        u_ids, w_ids = self._peel(peel_thr)
        if len(u_ids) >= n / 2:
            return self._round_low_degree(u_ids)
        pair = self._best_pair(w_ids)
        s_thr = n ** ((1.0 - ak) / (1.0 - ak2))
        if pair is not None and pair[2] >= s_thr:
            return self._probe_pair(cg, pair[0], pair[1])
        return self._candidate_round(cg, w_ids, n, ak)

    def _best_pair(self, w_ids: list[int]) -> tuple[int, int, int] | None:
        if len(w_ids) < 2:
            return None
        idx = np.fromiter(w_ids, dtype=np.int64)
        sub_c = self._c[np.ix_(idx, idx)]
        flat = int(np.argmax(sub_c))
        i, j = divmod(flat, sub_c.shape[1])
        if i == j:
            return None
        best = int(sub_c[i, j])
        if best <= 0:
            return None
        u, v = int(idx[i]), int(idx[j])
        return (min(u, v), max(u, v), best)

    def _round_low_degree(self, u_ids: list[int]):
        sub, mapping = self._materialize(u_ids)
        inverse = {i: rep for rep, i in mapping.items()}
        if sub.m == 0:
            return LargeIndependentSet(frozenset(u_ids))
        rng_seed = self.seed * 1009 + self.round_no
        init = None
        cached = [self._warm.get(rep) for rep in u_ids]
        hits = [row for row in cached if row is not None]
        if hits and len(hits) >= len(u_ids) // 2:
            width = max(row.shape[0] for row in hits)
            init = np.zeros((len(u_ids), width))
            for i, row in enumerate(cached):
                if row is not None:
                    init[i, :row.shape[0]] = row
        try:
            vc = solve_vector_coloring(sub, float(self.k), eps=self.cfg.eps,
                                       budget=self.cfg.solver_budget,
                                       seed=rng_seed, restarts=2, init=init)
        except InfeasibleError as exc:
            raise NotKColorableError("solver", str(exc)) from exc
        self._warm = {rep: vc.vectors[mapping[rep]].copy() for rep in u_ids}
        c = kms_threshold(float(self.k), sub.average_degree)
        chosen = kms_independent_set(
            sub, vc, RoundingParams(c, trials=self.cfg.trials, seed=rng_seed))
        return LargeIndependentSet(frozenset(inverse[i] for i in chosen))

    def _probe_pair(self, cg: ContractedGraph, u: int, v: int):
        s_ids = sorted(cg.adj[u] & cg.adj[v])
        k2 = self.k - 2
        if k2 == 2:
            idx = np.fromiter(s_ids, dtype=np.int64)
            sub = self._a[np.ix_(idx, idx)]
            parts = _bipartition_submatrix(sub)
            if parts is not None:
                side = max(parts, key=len)
                return LargeIndependentSet(
                    frozenset(int(idx[i]) for i in side))
            self._record_declaration(s_ids, k2)
        else:
            sub, mapping = self._materialize(s_ids)
            probe_cfg = CombinedConfig(
                eps=self.cfg.eps, trials=max(8, self.cfg.trials // 2),
                seed=self.seed, repeats=1, c0=self.cfg.c0,
                size_floor_const=self.cfg.size_floor_const,
                candidate_cap=self.cfg.candidate_cap,
                solver_budget=self.cfg.solver_budget,
                indset_budget=self.cfg.indset_budget,
                exact_threshold=self.cfg.exact_threshold,
                declaration_limit=0, declaration_limit_bipartite=0)
            result = combined_color(sub, k2, probe_cfg)
            if (result.coloring is not None
                    and result.colors_used <= cutoff(sub.n, k2, self.cfg.c0)):
                cls = largest_color_class(result.coloring)
                inverse = {i: rep for rep, i in mapping.items()}
                return LargeIndependentSet(
                    frozenset(inverse[i] for i in cls))
            self._record_declaration(s_ids, k2)
        if cg.has_edge(u, v):
            # Adjacent endpoints can never share a color: together with the
            # failed probe this certifies the graph is not k-colorable.
            raise ContradictionError(
                f"adjacent pair {u},{v} has a common neighborhood needing "
                f"more than {k2} colors")
        return SameColor(u, v)

    def _record_declaration(self, s_ids: list[int], k2: int) -> None:
        limit = (self.cfg.declaration_limit_bipartite if k2 == 2
                 else self.cfg.declaration_limit)
        if len(s_ids) > limit:
            return
        sub, _ = self._materialize(s_ids)
        self.declarations.append(Declaration(sub.n, sub.edges, k2))

    def _candidate_round(self, cg: ContractedGraph, w_ids: list[int],
                         n: int, ak: float):
        if len(w_ids) >= 2:
            wsub, wmap = self._materialize(w_ids)
            winv = {i: rep for rep, i in wmap.items()}
            coll = build_candidate_collection(wsub, default_delta(n))
            floor_size = max(1, int(n ** (1.0 - ak) / self.cfg.size_floor_const))
            order = sorted(range(len(coll.sets)),
                           key=lambda i: (-len(coll.sets[i].members), i))
            alpha_probe = (self.k - 1) + 3.0 / math.log(max(n, 3))
            for rank, i in enumerate(order[:self.cfg.candidate_cap]):
                members = sorted(coll.sets[i].members)
                tsub, tmap = induced_subgraph(wsub, members)
                tinv = {new: old for old, new in tmap.items()}
                found = ak_independent_set(
                    tsub, alpha_probe, eps=self.cfg.eps,
                    trials=max(8, self.cfg.trials // 4),
                    seed=self.seed * 131 + self.round_no * 17 + rank,
                    solver_budget=self.cfg.indset_budget)
                if len(found) >= floor_size:
                    return LargeIndependentSet(frozenset(
                        winv[tinv[x]] for x in found))
        # Last resort: greedy progress keeps the driver moving; the color
        # budget polices the overall count.
        quotient, mapping = cg.quotient_graph()
        inverse = {i: rep for rep, i in mapping.items()}
        chosen = greedy_independent_set(quotient)
        return LargeIndependentSet(frozenset(inverse[i] for i in chosen))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def combined_color(g: Graph, k: int, cfg: CombinedConfig | None = None) -> CombinedResult:
    """Color g with roughly n^{a_k} polylog colors when g is k-colorable.

    Always returns a CombinedResult; the coloring (when present) is proper
    regardless of whether g was k-colorable. Failures (contradiction, color
    budget, solver stall) trigger up to cfg.repeats full reruns with fresh
    seeds before being reported.
    """
    if cfg is None:
        cfg = CombinedConfig()
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    a_exp = alpha_k(k)
    failures: list[str] = []
    declarations: list[Declaration] = []
    for attempt in range(max(1, cfg.repeats)):
        seed = cfg.seed + 7919 * attempt
        try:
            coloring, used_fallback = _attempt(g, k, cfg, seed, declarations)
        except (ContradictionError, NotKColorableError) as exc:
            kind = exc.kind if isinstance(exc, NotKColorableError) else "contradiction"
            failures.append(f"{kind}: {exc}")
            continue
        return CombinedResult(g.n, k, coloring, None, a_exp, cfg.seed,
                              attempt + 1, used_fallback, declarations)
    return CombinedResult(
        g.n, k, None,
        "not k-colorable or algorithm failure: " + " | ".join(failures),
        a_exp, cfg.seed, max(1, cfg.repeats), False, declarations)


def _attempt(g: Graph, k: int, cfg: CombinedConfig, seed: int,
             declarations: list[Declaration]) -> tuple[Coloring, bool]:
    if g.n == 0:
        return Coloring(()), False
    if k == 2:
        col = two_coloring(g)
        if col is None:
            raise NotKColorableError("witness", "graph is not bipartite")
        return col, False
    if k == 3:
        return color_three_fallback(g, cfg, seed), True
    finder = _CombinedFinder(k, cfg, seed, declarations)
    budget = cutoff(g.n, k, cfg.c0)
    coloring = progress_driver(g, k, float(alpha_k(k)), finder, budget=budget)
    return coloring, False


def fit_exponent(sizes, values) -> float:
    """Least-squares slope of log(values) against log(sizes)."""
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.asarray(values, dtype=float))
    if len(xs) < 2:
        raise ValueError("need at least two points to fit an exponent")
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
