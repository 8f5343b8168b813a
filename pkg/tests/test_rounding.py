import math

import numpy as np
import pytest

from sdpcolor._rng import stream
from sdpcolor.graph import Graph, verify_coloring, verify_independent_set
from sdpcolor.rounding import (
    NotVectorColorableError,
    RoundingParams,
    classic_threshold,
    kms_color,
    kms_independent_set,
    kms_threshold,
    paired_threshold_trials,
    round_once,
    rounding_report,
)
from sdpcolor.testkit import (
    complete_multipartite,
    cycle_graph,
    path_graph,
    petersen_graph,
    planted_k_colorable,
    random_graph,
)
from sdpcolor.vecsdp import VectorColoring, solve_vector_coloring

PLANAR_120 = np.array([
    [1.0, 0.0],
    [-0.5, math.sqrt(3) / 2],
    [-0.5, -math.sqrt(3) / 2],
])


def test_threshold_values():
    # Frozen high-precision evaluations of the closed form.
    assert kms_threshold(3.0, math.e ** 6) == pytest.approx(
        1.844653583627736, abs=1e-12)
    assert kms_threshold(4.0, math.e ** 4) == pytest.approx(
        1.818475410732863, abs=1e-12)


def test_threshold_alpha3_specialization():
    # sqrt((1-2/3)(2 ln D - ln ln D)) == sqrt((2/3) ln D - (1/3) ln ln D).
    for d in (math.e ** 6, 25.0, 400.0):
        direct = math.sqrt((2.0 / 3.0) * math.log(d) - math.log(math.log(d)) / 3.0)
        assert kms_threshold(3.0, d) == pytest.approx(direct, rel=1e-12)


def test_threshold_validation_and_clamp():
    with pytest.raises(ValueError):
        kms_threshold(2.0, 100.0)
    with pytest.raises(ValueError):
        classic_threshold(1.5, 100.0)
    # D below e is clamped to e, where ln ln D = 0.
    assert kms_threshold(3.0, 1.0) == pytest.approx(
        math.sqrt((1.0 / 3.0) * 2.0), rel=1e-12)
    assert kms_threshold(3.0, 0.0) == kms_threshold(3.0, math.e)


def test_refined_below_classic():
    for d in (10.0, 50.0, 1000.0):
        assert kms_threshold(3.0, d) < classic_threshold(3.0, d)


def test_round_once_triangle_single_survivor():
    g = Graph(3, [(0, 1), (0, 2), (1, 2)])
    vc = VectorColoring(3.0, PLANAR_120, 1e-9)
    r = PLANAR_120[0]  # aligned with the first vector, norm 1
    out = round_once(vc, g, r, 0.9)
    assert out == frozenset({0})


def test_round_once_threshold_above_everything():
    g = Graph(3, [(0, 1), (0, 2), (1, 2)])
    vc = VectorColoring(3.0, PLANAR_120, 1e-9)
    assert round_once(vc, g, PLANAR_120[0], 1.5) == frozenset()


def test_round_once_edgeless_keeps_selection():
    g = Graph(3)
    vc = VectorColoring(3.0, PLANAR_120, 1e-9)
    out = round_once(vc, g, np.array([1.0, 0.0]), -2.0)
    assert out == frozenset({0, 1, 2})


def test_round_once_deletion_prefers_high_degree():
    # Path 0-1-2 with all three selected: the middle vertex has internal
    # degree 2 and is deleted first, leaving both endpoints.
    g = path_graph(3)
    vectors = np.tile(np.array([1.0, 0.0]), (3, 1))
    vc = VectorColoring(3.0, vectors, 1e-9)
    out = round_once(vc, g, np.array([1.0, 0.0]), 0.5)
    assert out == frozenset({0, 2})


def test_round_once_deterministic():
    g = random_graph(40, 0.2, seed=3)
    rng = stream(0, "fuzz-vectors")
    vecs = rng.standard_normal((40, 5))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    vc = VectorColoring(float(40), vecs, 1.0)
    r = stream(1, "dir").standard_normal(5)
    assert round_once(vc, g, r, 0.3) == round_once(vc, g, r, 0.3)


def test_round_once_always_independent_fuzz():
    # Independence must hold for arbitrary vectors, not just feasible ones.
    for seed in range(25):
        g = random_graph(30, 0.25, seed=seed)
        rng = stream(seed, "fuzz-vectors")
        vecs = rng.standard_normal((30, 4))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        vc = VectorColoring(float(30), vecs, 1.0)
        r = rng.standard_normal(4)
        out = round_once(vc, g, r, 0.2)
        assert verify_independent_set(g, out)


def test_kms_independent_set_edgeless():
    g = Graph(7)
    vecs = np.zeros((7, 2))
    vecs[:, 0] = 1.0
    vc = VectorColoring(2.0, vecs, 1e-9)
    out = kms_independent_set(g, vc, RoundingParams(0.0, trials=4, seed=0))
    assert out == frozenset(range(7))


def test_kms_independent_set_fallback_single_vertex():
    # A threshold no draw can reach forces the min-degree fallback.
    g = path_graph(3)
    vecs = np.tile(np.array([1.0, 0.0]), (3, 1))
    vc = VectorColoring(3.0, vecs, 1e-9)
    out = kms_independent_set(g, vc, RoundingParams(1e9, trials=3, seed=0))
    assert out == frozenset({0})  # degree-1 tie broken by lowest id


def test_kms_color_small_graphs_exact():
    assert kms_color(cycle_graph(5), 3).colors_used == 3
    assert kms_color(petersen_graph(), 3).colors_used == 3


def test_kms_color_bipartite_shortcut():
    g = complete_multipartite([15, 15])
    col = kms_color(g, 2)
    assert col.colors_used == 2
    assert verify_coloring(g, col)


def test_kms_color_rejects_odd_cycle_for_k2():
    with pytest.raises(NotVectorColorableError):
        kms_color(cycle_graph(25), 2)


def test_kms_color_planted_proper():
    inst = planted_k_colorable(60, 3, 0.25, seed=11)
    col = kms_color(inst.graph, 3, trials=16, seed=2)
    assert verify_coloring(inst.graph, col)
    assert col.colors_used <= inst.graph.n


def test_kms_color_low_degree_color_bound():
    # Planted 3-colorable, n = 1000, average degree ~20: the color count must
    # land under 4 D^{1/3} (ln D)^{1/3} ln n (the 4 is a test margin).
    inst = planted_k_colorable(1000, 3, 0.03, seed=42)
    g = inst.graph
    col = kms_color(g, 3, trials=32, seed=7)
    assert verify_coloring(g, col)
    d = g.average_degree
    bound = 4.0 * d ** (1 / 3) * math.log(d) ** (1 / 3) * math.log(g.n)
    assert col.colors_used <= bound


def test_paired_trials_shapes_and_types():
    inst = planted_k_colorable(60, 3, 0.25, seed=1)
    vc = solve_vector_coloring(inst.graph, 3.0, eps=1e-3, seed=0)
    res = paired_threshold_trials(inst.graph, vc, 3.0, 8, seed=5)
    assert len(res["refined_sizes"]) == 8
    assert res["c_refined"] < res["c_classic"]
    for size in res["refined_sizes"]:
        assert 0 <= size <= inst.graph.n


def test_rounding_report():
    rep = rounding_report(3.0, 20.0, 1.2, 4, [10, 12, 8, 30], seed=7)
    assert rep["mean_size"] == 15.0
    assert rep["best_size"] == 30
    assert rep["seed"] == 7
    assert set(rep) == {"alpha", "D", "c", "trials", "mean_size", "best_size", "seed"}
