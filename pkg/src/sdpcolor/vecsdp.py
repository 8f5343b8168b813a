"""Semidefinite relaxations via low-rank Gram factorization.

Two programs are solved here, both over unit vectors optimized directly on
the product of spheres (gradient descent with Adam steps and row
renormalization; no external SDP solver):

* vector alpha-coloring: unit v_1..v_n with v_i . v_j <= -1/(alpha-1) + eps
  on every edge. Solved as a penalty problem on the hinge violations,
  followed by a margin polish (minimize the total edge inner product while
  keeping feasibility) and an optional rank-reduction pass; the polish drives
  planted instances toward their natural clustered configurations, which is
  what makes downstream threshold rounding effective.

* the independence-number program: maximize sum (1 + v0 . v_i)/2 subject to
  (v0 + v_i) . (v0 + v_j) = 0 on edges, solved by an augmented Lagrangian.

Infeasibility reports are evidence only (best residual reached), never dual
certificates. All logarithms are natural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from ._rng import stream
from .graph import Graph, induced_subgraph


class InfeasibleError(RuntimeError):
    """The penalty solver could not reach the requested tolerance.

    Evidence only: carries the best residual achieved, not a certificate
    that no feasible solution exists.
    """

    def __init__(self, alpha: float, eps: float, best_residual: float,
                 iterations: int):
        super().__init__(
            f"no vector {alpha:g}-coloring found at tolerance {eps:g} "
            f"(best edge residual {best_residual:.3e} after {iterations} "
            f"iterations; evidence only, not a certificate)")
        self.alpha = alpha
        self.eps = eps
        self.best_residual = best_residual
        self.iterations = iterations


class DegenerateProjectionError(ValueError):
    """A vector was too close to +-axis for a stable orthogonal projection."""


class PromiseNotMetError(RuntimeError):
    """The independence-promise precondition failed (solver slack too large
    or the graph lacks the promised independent set)."""


@dataclass(frozen=True)
class VectorColoring:
    """Unit vectors with every edge inner product <= -1/(alpha-1) + eps."""

    alpha: float
    vectors: np.ndarray  # shape (n, d)
    eps: float
    max_edge_residual: float = float("-inf")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def target(self) -> float:
        return -1.0 / (self.alpha - 1.0)

    def edge_residual(self, g: Graph) -> float:
        """max over edges of v_i . v_j + 1/(alpha-1); -inf if no edges."""
        if g.m == 0:
            return float("-inf")
        eu, ev = g.edge_arrays()
        dots = (self.vectors[eu] * self.vectors[ev]).sum(axis=1)
        return float(dots.max() - self.target)

    def norm_residual(self) -> float:
        """max over vertices of | ||v_i|| - 1 |."""
        if self.n == 0:
            return 0.0
        return float(np.abs(np.linalg.norm(self.vectors, axis=1) - 1.0).max())

    def is_feasible_for(self, g: Graph) -> bool:
        return self.norm_residual() <= self.eps and self.edge_residual(g) <= self.eps

    def restrict(self, indices) -> "VectorColoring":
        """Row restriction; valid for the induced subgraph on sorted(indices)."""
        idx = sorted(indices)
        return VectorColoring(self.alpha, self.vectors[idx].copy(), self.eps,
                              self.max_edge_residual)


@dataclass(frozen=True)
class IndSetSdpSolution:
    """Feasible point of the independence-number relaxation."""

    v0: np.ndarray
    vectors: np.ndarray  # shape (n, d)
    objective: float     # sum (1 + v0 . v_i) / 2
    eps: float
    max_constraint_residual: float
    slack_estimate: float  # heuristic optimality slack; not a certificate

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def alignment_sum(self) -> float:
        return float(self.vectors @ self.v0).__float__() if self.n == 1 else \
            float((self.vectors @ self.v0).sum())

    def constraint_residual(self, g: Graph) -> float:
        if g.m == 0:
            return 0.0
        eu, ev = g.edge_arrays()
        p = self.vectors + self.v0
        return float(np.abs((p[eu] * p[ev]).sum(axis=1)).max())


def simplex_vectors(count: int, dim: int | None = None) -> np.ndarray:
    """count unit vectors with pairwise inner product exactly -1/(count-1)."""
    if count < 2:
        raise ValueError("simplex needs at least 2 vectors")
    d = count - 1 if dim is None else dim
    if d < count - 1:
        raise ValueError(f"simplex on {count} vectors needs dimension >= {count - 1}")
    eye = np.eye(count)
    centered = eye - eye.mean(axis=0, keepdims=True)
    # Rows of `centered` live in a (count-1)-dim subspace; orthonormalize it.
    q, _ = np.linalg.qr(centered.T)
    coords = centered @ q[:, :count - 1]
    coords /= np.linalg.norm(coords, axis=1, keepdims=True)
    out = np.zeros((count, d))
    out[:, :count - 1] = coords
    return out


# ---------------------------------------------------------------------------
# Shared descent machinery
# ---------------------------------------------------------------------------

def _row_normalize(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    v /= norms
    return v


def _scatter_rows(idx: np.ndarray, weights: np.ndarray, rows: np.ndarray,
                  n: int) -> np.ndarray:
    """out[idx[t]] += weights[t] * rows[t], accumulated over t."""
    out = np.empty((n, rows.shape[1]))
    for col in range(rows.shape[1]):
        out[:, col] = np.bincount(idx, weights=weights * rows[:, col], minlength=n)
    return out


class _Adam:
    def __init__(self, like, lr):
        self.lr = lr
        self.m = np.zeros_like(like)
        self.v = np.zeros_like(like)
        self.t = 0

    def step(self, params, grad):
        self.t += 1
        self.m = 0.9 * self.m + 0.1 * grad
        self.v = 0.999 * self.v + 0.001 * grad * grad
        mhat = self.m / (1.0 - 0.9 ** self.t)
        vhat = self.v / (1.0 - 0.999 ** self.t)
        params -= self.lr * mhat / (np.sqrt(vhat) + 1e-12)


def _solver_dim(n: int, m: int, cap: int = 24) -> int:
    # Low-rank factorization dimension ceil(sqrt(2m)) + 4, generous enough
    # that the factorized landscape is benign, capped at 24: every iteration
    # scales with this width and desk-scale instances gain nothing past the
    # cap (restarts cover the residual risk of a spurious stall).
    return max(1, min(n, int(math.ceil(math.sqrt(2.0 * max(m, 1)))) + 4, cap))


# ---------------------------------------------------------------------------
# Vector alpha-coloring
# ---------------------------------------------------------------------------

def _coloring_descent(v, eu, ev, both_idx, target, mode, iters, lr,
                      mu=50.0, stop_at=None, adj=None):
    """Adam descent phases for the coloring program.

    mode "feasible": minimize sum relu(d_e - target)^2.
    mode "polish":   minimize sum d_e + mu * relu(d_e - target)^2.
    The learning rate is halved in six stages over the run; in feasible mode
    the loop exits early once the max edge dot drops to ``stop_at``. The
    hinge part of the gradient only touches violated edges; the uniform part
    of the polish gradient uses the dense adjacency product when ``adj`` is
    supplied. Returns the iteration count actually used.
    """
    n = v.shape[0]
    m = len(eu)
    d = v.shape[1]
    stage = max(1, iters // 6)
    opt = _Adam(v, lr)
    used = 0
    other = np.concatenate([ev, eu])
    # Dense weighted-adjacency workspace: one gemm beats per-column scatters
    # once enough edges are active to amortize the n^2 traffic.
    dense_w = np.zeros((n, n), dtype=v.dtype) if n <= 2048 else None
    dense_bar = max(32, (n * n) // max(16 * d, 16))
    for it in range(iters):
        used += 1
        if it % stage == 0 and it > 0:
            opt.lr *= 0.5
        dots = (v[eu] * v[ev]).sum(axis=1)
        viol = np.maximum(dots - target, 0.0)
        if mode == "feasible" and it % 10 == 0 and stop_at is not None \
                and dots.max() <= stop_at:
            break
        hinge_w = (2.0 if mode == "feasible" else 2.0 * mu) * viol
        active = np.nonzero(viol)[0]
        use_dense = dense_w is not None and (
            active.size > dense_bar or (mode == "polish" and m > dense_bar))
        if use_dense:
            dense_w.fill(0.0)
            if mode == "polish":
                wall = 1.0 + hinge_w
                dense_w[eu, ev] = wall
                dense_w[ev, eu] = wall
            else:
                ea, va, wa = eu[active], ev[active], hinge_w[active]
                dense_w[ea, va] = wa
                dense_w[va, ea] = wa
            grad = dense_w @ v
        else:
            if active.size:
                act2 = np.concatenate([active, active + m])
                wa = hinge_w[active]
                grad = _scatter_rows(both_idx[act2], np.concatenate([wa, wa]),
                                     v[other[act2]], n)
            else:
                grad = np.zeros_like(v)
            if mode == "polish":
                if adj is not None:
                    grad += adj @ v
                else:
                    grad += _scatter_rows(both_idx, np.ones(2 * m), v[other], n)
        grad -= (grad * v).sum(axis=1, keepdims=True) * v
        opt.step(v, grad)
        _row_normalize(v)
    return used


def _rank_reduce(v, rank):
    """Coordinates of the rows in their top-``rank`` right-singular basis,
    renormalized; the returned array has only ``rank`` columns."""
    if rank >= min(v.shape):
        return v.copy()
    _, _, vt = np.linalg.svd(v, full_matrices=False)
    out = v @ vt[:rank].T
    return _row_normalize(out)


def solve_vector_coloring(g: Graph, alpha: float, eps: float = 1e-3,
                          budget: int = 2000, seed: int = 0,
                          restarts: int = 3,
                          init: np.ndarray | None = None) -> VectorColoring:
    """Find a vector alpha-coloring of g at tolerance eps.

    budget caps the gradient iterations of the feasibility phase per restart;
    the polish and rank-reduction phases each get at most half that again.
    ``init`` warm-starts the first restart (rows are renormalized and padded
    or truncated to the working width). Raises InfeasibleError (evidence
    only) when every restart stalls above eps.
    """
    if alpha < 2.0:
        raise ValueError(f"alpha must be at least 2, got {alpha}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    n = g.n
    if n == 0:
        return VectorColoring(alpha, np.zeros((0, 1)), eps)
    d = _solver_dim(n, g.m)
    if g.m == 0:
        vecs = np.zeros((n, d))
        vecs[:, 0] = 1.0
        return VectorColoring(alpha, vecs, eps)

    target = -1.0 / (alpha - 1.0)
    cushion = 0.5 * eps
    eu, ev = g.edge_arrays()
    both_idx = np.concatenate([eu, ev])

    best_res = float("inf")
    total_iters = 0
    stop_at = target - 0.25 * eps
    adj = g.adjacency_matrix().astype(float) if n <= 2048 else None
    # The wide phase only has to land a warm start within eps; float32 is
    # plenty for that whenever eps is far above float32 resolution.
    wide_dtype = np.float32 if (eps >= 1e-4 and d > 8) else np.float64
    rank = max(2, int(math.ceil(alpha)) - 1)

    def try_lowrank(full):
        # Re-descend in the top-rank basis; cheap iterations carry the long
        # margin polish that clusters planted-style instances.
        reduced = _rank_reduce(full, rank)
        _coloring_descent(reduced, eu, ev, both_idx, target - cushion,
                          "feasible", budget, lr=0.02, stop_at=stop_at)
        if _residual(reduced, eu, ev, target) > eps:
            return None
        _coloring_descent(reduced, eu, ev, both_idx, target - cushion,
                          "polish", budget, lr=0.01, adj=adj)
        _coloring_descent(reduced, eu, ev, both_idx, target - cushion,
                          "feasible", budget // 2, lr=0.005, stop_at=stop_at)
        if _residual(reduced, eu, ev, target) > eps:
            return None
        return reduced

    for attempt in range(max(1, restarts)):
        rng = stream(seed, "veccol", attempt)
        if attempt == 0 and init is not None and init.shape[0] == n:
            v = np.zeros((n, d))
            w = min(d, init.shape[1])
            v[:, :w] = init[:, :w]
            zero = np.linalg.norm(v, axis=1) == 0.0
            if zero.any():
                v[zero] = rng.standard_normal((int(zero.sum()), d))
            _row_normalize(v)
        else:
            v = _row_normalize(rng.standard_normal((n, d)))
        work = v.astype(wide_dtype) if wide_dtype is np.float32 else v
        total_iters += _coloring_descent(
            work, eu, ev, both_idx, target - cushion, "feasible", budget,
            lr=0.05, stop_at=target + 0.5 * eps)
        res = _residual(work, eu, ev, target)
        if res <= 10.0 * eps and rank < d:
            reduced = try_lowrank(_row_normalize(work.astype(np.float64)))
            if reduced is not None:
                return VectorColoring(
                    alpha, reduced, eps,
                    max_edge_residual=_residual(reduced, eu, ev, target))
        # Shrinking-step refinement when the wide pass lands just above eps;
        # two lr sweeps cover instances whose active boundary settles slowly.
        for lr in (0.02, 0.008, 0.003, 0.02, 0.008, 0.003):
            if res <= eps:
                break
            total_iters += _coloring_descent(
                work, eu, ev, both_idx, target - cushion, "feasible",
                budget // 2, lr=lr, stop_at=stop_at)
            res = _residual(work, eu, ev, target)
        v = _row_normalize(work.astype(np.float64)) \
            if wide_dtype is np.float32 else work
        res = _residual(v, eu, ev, target)
        best_res = min(best_res, res)
        if res > eps:
            continue
        if rank < d:
            reduced = try_lowrank(v)
            if reduced is not None:
                return VectorColoring(
                    alpha, reduced, eps,
                    max_edge_residual=_residual(reduced, eu, ev, target))
        polished = v.copy()
        _coloring_descent(polished, eu, ev, both_idx, target - cushion,
                          "polish", budget // 4, lr=0.02, adj=adj)
        if _residual(polished, eu, ev, target) <= eps:
            v = polished
        res = _residual(v, eu, ev, target)
        return VectorColoring(alpha, v, eps, max_edge_residual=res)
    raise InfeasibleError(alpha, eps, best_res, total_iters)


def _residual(v, eu, ev, target):
    dots = (v[eu] * v[ev]).sum(axis=1)
    return float(dots.max() - target)


# ---------------------------------------------------------------------------
# Independence-number relaxation
# ---------------------------------------------------------------------------

def solve_indset_sdp(g: Graph, eps: float = 1e-3, budget: int = 6000,
                     seed: int = 0, restarts: int = 2) -> IndSetSdpSolution:
    """Near-optimal feasible point of the independence-number program.

    Augmented Lagrangian on the edge constraints (v0+v_i).(v0+v_j) = 0 with
    the alignment objective; budget caps total inner gradient iterations per
    restart. The reported slack is a stall-based heuristic, not a duality
    certificate.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    n = g.n
    if n == 0:
        v0 = np.zeros(1)
        v0[0] = 1.0
        return IndSetSdpSolution(v0, np.zeros((0, 1)), 0.0, eps, 0.0, 0.0)
    if g.m == 0:
        d = 1
        v0 = np.ones(1)
        vecs = np.ones((n, 1))
        return IndSetSdpSolution(v0, vecs, float(n), eps, 0.0, 0.0)

    d = max(3, min(n + 1, 32))
    eu, ev = g.edge_arrays()
    dense = n <= 2048
    if dense:
        s_buf = np.zeros((n, n))
    else:
        both_idx = np.concatenate([eu, ev])
        other_idx = np.concatenate([ev, eu])

    best = None
    for attempt in range(max(1, restarts)):
        rng = stream(seed, "indsdp", attempt)
        w = np.zeros((n + 1, d))
        w[0] = _row_normalize(rng.standard_normal((1, d)))[0]
        w[1:] = _row_normalize(w[0] + 0.3 * rng.standard_normal((n, d)))
        lam = np.zeros(g.m)
        mu = 4.0
        inner = max(40, budget // 30)
        used = 0
        prev_obj = None
        stall = 0.0
        outer = 0
        while used < budget:
            outer += 1
            lr = 0.03 * 0.85 ** min(outer, 30)
            opt = _Adam(w, lr)
            for _ in range(inner):
                used += 1
                v0 = w[0]
                p = w[1:] + v0
                if dense:
                    # Full Gram beats per-edge gathers once the graph is
                    # dense enough to amortize the gemm.
                    h = (p @ p.T)[eu, ev] if g.m * 16 >= n * n \
                        else (p[eu] * p[ev]).sum(axis=1)
                    s = lam + mu * h
                    s_buf[eu, ev] = s
                    s_buf[ev, eu] = s
                    c = s_buf @ p
                    grad = np.empty_like(w)
                    grad[1:] = c - v0
                    grad[0] = c.sum(axis=0) - w[1:].sum(axis=0)
                else:
                    h = (p[eu] * p[ev]).sum(axis=1)
                    s = lam + mu * h
                    s2 = np.concatenate([s, s])
                    grad = np.empty_like(w)
                    grad[1:] = _scatter_rows(both_idx, s2, p[other_idx], n)
                    grad[1:] -= v0
                    grad[0] = (s[:, None] * (p[eu] + p[ev])).sum(axis=0) \
                        - w[1:].sum(axis=0)
                grad -= (grad * w).sum(axis=1, keepdims=True) * w
                opt.step(w, grad)
                _row_normalize(w)
            v0 = w[0]
            p = w[1:] + v0
            h = (p[eu] * p[ev]).sum(axis=1)
            res = float(np.abs(h).max())
            obj = float((1.0 + w[1:] @ v0).sum() / 2.0)
            if prev_obj is not None:
                stall = abs(obj - prev_obj)
            prev_obj = obj
            if res <= 0.5 * eps and outer >= 4 and stall <= max(1e-7, 0.01 * eps * n):
                break
            lam = lam + mu * h
            if res > 0.25 * eps:
                mu = min(mu * 1.6, 1e8)
        v0 = w[0].copy()
        vecs = w[1:].copy()
        p = vecs + v0
        res = float(np.abs((p[eu] * p[ev]).sum(axis=1)).max())
        obj = float((1.0 + vecs @ v0).sum() / 2.0)
        cand = IndSetSdpSolution(v0, vecs, obj, eps, res,
                                 slack_estimate=n * eps + stall)
        if best is None:
            best = cand
        else:
            cand_ok = cand.max_constraint_residual <= eps
            best_ok = best.max_constraint_residual <= eps
            if (cand_ok, cand.objective) > (best_ok, best.objective):
                best = cand
    return best


# ---------------------------------------------------------------------------
# Projections
# ---------------------------------------------------------------------------

def project_orthogonal(v0: np.ndarray, v: np.ndarray, eps: float) -> np.ndarray:
    """Normalized projection of v onto the hyperplane orthogonal to v0."""
    residual = v - float(v0 @ v) * v0
    norm = float(np.linalg.norm(residual))
    if norm <= eps:
        raise DegenerateProjectionError(
            f"vector within {eps:g} of +-span(v0); projection is unstable")
    return residual / norm


@dataclass(frozen=True)
class ReducedColoring:
    """A vector coloring of an induced subgraph plus the vertex mapping."""

    coloring: VectorColoring
    graph: Graph
    mapping: dict[int, int]  # original vertex id -> row index in coloring


def _perturb_axis(axis: np.ndarray, magnitude: float, rng) -> np.ndarray:
    noise = rng.standard_normal(axis.shape[0])
    noise -= float(noise @ axis) * axis
    nn = float(np.linalg.norm(noise))
    if nn == 0.0:
        return axis
    out = axis + magnitude * noise / nn
    return out / float(np.linalg.norm(out))


def _project_all(axis, rows, eps, fill_degenerate=False):
    """Normalized projections of rows orthogonal to axis.

    Returns None when a row is within eps of +-axis, unless fill_degenerate
    is set, in which case such rows become an arbitrary unit vector (used for
    vertices that are provably isolated in the restricted subgraph, where
    the vector is unconstrained; the caller re-measures residuals anyway).
    """
    proj = rows - (rows @ axis)[:, None] * axis[None, :]
    norms = np.linalg.norm(proj, axis=1)
    bad = norms <= eps
    if bad.any():
        if not fill_degenerate:
            return None
        proj[bad] = 0.0
        proj[bad, 0] = 1.0
        norms = np.linalg.norm(proj, axis=1)
    return proj / norms[:, None]


def neighborhood_reduce(vc: VectorColoring, g: Graph, v: int,
                        seed: int = 0) -> ReducedColoring:
    """Vector (alpha-1)-coloring of G[N(v)] by projecting orthogonal to v_v.

    The tolerance of the result is the measured residual of the projected
    vectors against -1/(alpha-2) (first-order, the input eps grows by about
    2/(1 - t^2) with t = -1/(alpha-1)). A degenerate neighbor triggers one
    seeded perturbation of the axis before failing.
    """
    if vc.alpha <= 2.0:
        raise ValueError(f"neighborhood reduction needs alpha > 2, got {vc.alpha}")
    if g.degree(v) < 1:
        raise ValueError(f"vertex {v} has no neighbors")
    neighbors = sorted(g.neighbors(v))
    rows = vc.vectors[neighbors]
    axis = vc.vectors[v] / float(np.linalg.norm(vc.vectors[v]))
    proj = _project_all(axis, rows, vc.eps)
    if proj is None:
        rng = stream(seed, "nbr-perturb", v)
        axis = _perturb_axis(axis, 10.0 * vc.eps, rng)
        proj = _project_all(axis, rows, vc.eps)
        if proj is None:
            raise DegenerateProjectionError(
                f"a neighbor of {v} is within eps of +-v_{v} even after "
                f"perturbation")
    sub, mapping = induced_subgraph(g, neighbors)
    alpha_prime = vc.alpha - 1.0
    reduced = VectorColoring(alpha_prime, proj, vc.eps)
    measured = reduced.edge_residual(sub)
    eps_prime = max(vc.eps, measured + 1e-12)
    reduced = VectorColoring(alpha_prime, proj, eps_prime,
                             max_edge_residual=measured)
    return ReducedColoring(reduced, sub, mapping)


@dataclass(frozen=True)
class WellAlignedResult:
    """Output of the aligned-subset extraction."""

    subset: tuple[int, ...]          # original vertex ids, sorted
    coloring: VectorColoring         # vector alpha'-coloring of graph
    graph: Graph
    mapping: dict[int, int]
    alpha_prime: float
    threshold: float                 # the alignment cut beta


def well_aligned_subset(sol: IndSetSdpSolution, g: Graph, alpha: float,
                        seed: int = 0) -> WellAlignedResult:
    """Aligned subset S = {i : v0 . v_i > 2/alpha - 1 - 3/ln n} and a vector
    alpha'-coloring of G[S] with -1/(alpha'-1) = -(1+beta)/(1-beta).

    Requires the promise sum v0 . v_i >= (2/alpha - 1 - 1/ln n) n; refuses
    otherwise (the graph lacked the promised independent set or the solver
    slack was too large). When the promise holds, |S| >= n / ln n.
    """
    if alpha < 2.0:
        raise ValueError(f"alpha must be at least 2, got {alpha}")
    n = g.n
    if n < 2:
        raise ValueError("aligned-subset extraction needs at least 2 vertices")
    logn = math.log(n)
    align = sol.vectors @ sol.v0
    total = float(align.sum())
    required = (2.0 / alpha - 1.0 - 1.0 / logn) * n
    if total < required - 1e-9:
        raise PromiseNotMetError(
            f"alignment sum {total:.6g} below the promised {required:.6g} "
            f"for alpha={alpha:g}; refusing extraction")
    beta = 2.0 / alpha - 1.0 - 3.0 / logn
    # Membership uses the raw threshold (below -1 it admits every unit
    # vector, antipodal ones included); the coloring parameter needs the
    # clamp so alpha' stays finite and positive.
    members = sorted(int(i) for i in np.nonzero(align > beta)[0])
    beta = max(beta, -1.0 + 1e-9)
    if len(members) < n / logn - 1e-9:
        raise RuntimeError(
            "aligned subset smaller than the guaranteed n/ln n; "
            "inconsistent solver output")
    rows = sol.vectors[members]
    v0 = sol.v0 / float(np.linalg.norm(sol.v0))
    proj = _project_all(v0, rows, sol.eps)
    if proj is None:
        rng = stream(seed, "aligned-perturb")
        v0p = _perturb_axis(v0, 10.0 * sol.eps, rng)
        proj = _project_all(v0p, rows, sol.eps)
        if proj is None:
            # Vectors still parallel to v0 after a perturbation sit at
            # v_i ~ v0; feasibility forces such vertices to be isolated
            # inside S (an S-edge at one would need |v_i . v_j| > 1), so
            # their projected vector is unconstrained.
            proj = _project_all(v0, rows, sol.eps, fill_degenerate=True)
        else:
            v0 = v0p
    alpha_prime = 1.0 + (1.0 - beta) / (1.0 + beta)
    sub, mapping = induced_subgraph(g, members)
    vc = VectorColoring(alpha_prime, proj, sol.eps)
    measured = vc.edge_residual(sub)
    eps_prime = max(sol.eps, (measured if math.isfinite(measured) else 0.0) + 1e-12)
    vc = VectorColoring(alpha_prime, proj, eps_prime, max_edge_residual=measured)
    return WellAlignedResult(tuple(members), vc, sub, mapping, alpha_prime, beta)


# ---------------------------------------------------------------------------
# Solution persistence
# ---------------------------------------------------------------------------

def vector_coloring_to_json(vc: VectorColoring) -> str:
    payload = {
        "alpha": vc.alpha,
        "eps": vc.eps,
        "dim": vc.dim,
        "vectors": [[float(x) for x in row] for row in vc.vectors],
        "max_edge_residual": (None if not math.isfinite(vc.max_edge_residual)
                              else vc.max_edge_residual),
    }
    return json.dumps(payload, sort_keys=True)


def vector_coloring_from_json(text: str | IO[str]) -> VectorColoring:
    payload = json.loads(text if isinstance(text, str) else text.read())
    res = payload.get("max_edge_residual")
    return VectorColoring(
        float(payload["alpha"]),
        np.asarray(payload["vectors"], dtype=float).reshape(-1, int(payload["dim"])),
        float(payload["eps"]),
        max_edge_residual=float("-inf") if res is None else float(res),
    )
