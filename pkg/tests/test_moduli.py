import math

import numpy as np
import pytest

from treemoduli.cover import circle_cover, circle_distance, devadoss_length, logit
from treemoduli.moduli import (
    BadIndex,
    ChartPoint,
    Configuration,
    DimensionMismatch,
    InvalidChart,
    NonFiniteEntry,
    NotAPermutation,
    SeamTooClose,
    albanese,
    albanese_jacobian,
    chart_coords,
    chart_embed,
    curve_length,
    forgetful,
    jacobian_rank,
    metric_eval,
    metric_matrix,
    rank_scan,
    regauged_sigma_ratios,
    relabel,
    triple_coord,
    triples,
)
from treemoduli.moduli import _chart_ratios, _seam_margin, _triple_arrays
from treemoduli.projline import (
    INFINITY,
    ONE,
    ZERO,
    MobiusMap,
    ProjPoint,
    cross_ratio,
)


def pt(x):
    return ProjPoint.from_affine(x)


def random_chart(rng, n, margin=1e-4):
    """Open-stratum chart drawn from the circle's round measure."""
    trip, at_inf = _triple_arrays(n)
    while True:
        u = np.tan(np.pi * (rng.random(n - 2) + 0.25))
        if np.isfinite(u).all() and _seam_margin(_chart_ratios(u, trip, at_inf)) > margin:
            return ChartPoint(tuple(u))


def random_mobius(rng):
    while True:
        a, b, c, d = rng.uniform(-2, 2, size=4)
        if abs(a * d - b * c) > 1e-2:
            return MobiusMap(a, b, c, d)


# -- configurations and charts ---------------------------------------------------


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration((ZERO, ONE, INFINITY))
    c = Configuration((ZERO, pt(0.5), ONE, INFINITY))
    assert c.n == 3
    assert c.in_open_stratum()
    near = Configuration((ZERO, ProjPoint(1e-14, 1.0), ONE, INFINITY))
    assert not near.in_open_stratum()


def test_configuration_json_round_trip():
    c = Configuration((ZERO, pt(0.25), pt(0.6), ONE, INFINITY))
    assert Configuration.from_json(c.to_json()).points == c.points
    with pytest.raises(ValueError):
        Configuration.from_json({"n": 4, "points": [0, 0.5, 1, "inf"]})


def test_chart_coords_examples():
    c = Configuration((ZERO, pt(0.5), ONE, INFINITY))
    assert chart_coords(c).u == (0.5,)
    c = Configuration((ZERO, pt(0.2), pt(0.6), ONE, INFINITY))
    assert chart_coords(c).u == pytest.approx((0.2, 0.6))
    c = Configuration((pt(-1.0), ZERO, ONE, INFINITY))
    assert chart_coords(c).u == pytest.approx((0.5,))


def test_chart_embed_examples():
    c = chart_embed(ChartPoint((0.5,)))
    assert [p.to_json() for p in c.points] == [0.0, 0.5, 1.0, "inf"]
    c = chart_embed(ChartPoint((0.2, 0.6)))
    assert [p.to_json() for p in c.points] == [0.0, 0.2, 0.6, 1.0, "inf"]


def test_chart_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        u = random_chart(rng, n)
        v = chart_coords(chart_embed(u))
        assert v.u == pytest.approx(u.u, rel=1e-9)


def test_embed_of_coords_is_equivalent_configuration():
    # the other composition returns the same moduli point: all triple
    # coordinates agree even though the representing tuples differ
    rng = np.random.default_rng(99)
    for _ in range(30):
        n = int(rng.integers(3, 6))
        c = chart_embed(random_chart(rng, n)).transform(random_mobius(rng))
        c2 = chart_embed(chart_coords(c))
        for s in triples(n):
            assert circle_distance(triple_coord(c, s), triple_coord(c2, s)) < 1e-9


def test_chart_embed_rejects_collisions():
    with pytest.raises(InvalidChart):
        chart_embed(ChartPoint((0.5, 0.5)))
    with pytest.raises(InvalidChart):
        chart_embed(ChartPoint((1.0,)))
    with pytest.raises(InvalidChart):
        chart_embed(ChartPoint((0.0,)))


def test_gauge_invariance():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        c = chart_embed(random_chart(rng, n))
        m = random_mobius(rng)
        u1 = chart_coords(c)
        u2 = chart_coords(c.transform(m))
        assert np.allclose(u1.u, u2.u, rtol=1e-9, atol=1e-9)


# -- forgetful maps and triple coordinates ------------------------------------------


def test_forgetful_examples():
    pts = (ZERO, pt(0.3), pt(0.5), pt(0.7), ONE, INFINITY)
    c = Configuration(pts)
    assert forgetful(c, (1, 2, 3)) == (pts[0], pts[1], pts[2], pts[3])
    c3 = Configuration((ZERO, pt(0.5), ONE, INFINITY))
    assert forgetful(c3, (1, 2, 3)) == c3.points
    with pytest.raises(BadIndex):
        forgetful(c, (1, 2, 6))
    with pytest.raises(BadIndex):
        forgetful(c, (2, 1, 3))


def test_triple_coord_examples():
    c = Configuration((ZERO, pt(0.5), ONE, INFINITY))
    assert triple_coord(c, (1, 2, 3)).t == 0.5
    collided = Configuration((ZERO, pt(0.4), pt(0.4), ONE, INFINITY))
    assert triple_coord(collided, (1, 2, 3)).t == 0.0
    c4 = Configuration((ZERO, pt(1.0 / 3.0), pt(0.5), ONE, INFINITY))
    assert triple_coord(c4, (1, 2, 4)).t == pytest.approx(2.0 / 3.0)


def test_fast_chart_path_matches_point_path():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        u = random_chart(rng, n)
        trip, at_inf = _triple_arrays(n)
        rho = _chart_ratios(u.as_array(), trip, at_inf)
        c = chart_embed(u)
        for s, r in zip(triples(n), rho):
            slow = triple_coord(c, s)
            fast = circle_cover(ProjPoint.from_affine(r))
            assert circle_distance(slow, fast) < 1e-9


def test_albanese_enumeration():
    c = Configuration((ZERO, pt(0.5), ONE, INFINITY))
    vals = albanese(c)
    assert len(vals) == 1 and vals[0].t == 0.5
    assert triples(4) == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    c4 = chart_embed(ChartPoint((0.3, 0.7)))
    assert len(albanese(c4)) == 4


def test_albanese_permutation_covariance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(4, 7))
        c = chart_embed(random_chart(rng, n))
        perm = [int(v) for v in rng.permutation(np.arange(1, n + 1))]
        moved = relabel(perm, c)
        base = {s: t.t for s, t in zip(triples(n), albanese(c))}
        for s, t in zip(triples(n), albanese(moved)):
            src = tuple(sorted(perm.index(i) + 1 for i in s))
            # each factor is acted on through the quotient, so values
            # match up to the orientation-reversing reflection
            d_same = circle_distance(t.t, base[src])
            d_flip = circle_distance(t.t, (1.0 - base[src]) % 1.0)
            assert min(d_same, d_flip) < 1e-9


def test_devadoss_compatibility():
    rng = np.random.default_rng(4)
    for _ in range(50):
        c = chart_embed(random_chart(rng, 5, margin=1e-3))
        for s in triples(5):
            gamma = devadoss_length(*forgetful(c, s))
            via_cover = logit(ProjPoint.from_affine(triple_coord(c, s).t))
            assert gamma.isclose(via_cover, 1e-8)


def test_boundary_continuity():
    # colliding leaves drive every affected coordinate to 0 in R/Z
    prev = None
    for eps in (1e-2, 1e-4, 1e-6, 1e-8):
        c = Configuration((ZERO, pt(0.4), pt(0.4 + eps), ONE, INFINITY))
        d = circle_distance(triple_coord(c, (1, 2, 3)), 0.0)
        if prev is not None:
            assert d < prev
        prev = d
    assert prev < 1e-7


# -- jacobians ------------------------------------------------------------------------


def test_jacobian_trivial_chart():
    jac = albanese_jacobian(ChartPoint((0.5,)))
    assert jac.shape == (1, 1)
    assert jac[0, 0] == pytest.approx(1.0, abs=1e-9)
    for x in (0.1, 0.37, 0.9):
        assert albanese_jacobian(ChartPoint((x,)))[0, 0] == pytest.approx(1.0, abs=1e-8)


def test_jacobian_seam_guard():
    with pytest.raises(SeamTooClose):
        albanese_jacobian(ChartPoint((0.5, 0.5 + 1e-9)))
    with pytest.raises(SeamTooClose):
        albanese_jacobian(ChartPoint((1.0 + 1e-9,)))


def test_jacobian_central_vs_analytic():
    rng = np.random.default_rng(5)
    for _ in range(100):
        u = random_chart(rng, 4)
        fd = albanese_jacobian(u, method="central")
        an = albanese_jacobian(u, method="analytic")
        assert np.allclose(fd, an, rtol=1e-5, atol=1e-8 * np.abs(an).max())


def test_jacobian_rank():
    assert jacobian_rank(np.array([[1.0]])) == 1
    assert jacobian_rank(np.zeros((4, 3))) == 0
    rng = np.random.default_rng(6)
    low = rng.standard_normal((10, 2)) @ rng.standard_normal((2, 3))
    assert jacobian_rank(low) == 2
    with pytest.raises(NonFiniteEntry):
        jacobian_rank(np.array([[1.0, np.nan]]))


# -- the averaged metric -----------------------------------------------------------------


def test_metric_trivial_chart():
    g = metric_matrix(ChartPoint((0.5,)))
    assert g.shape == (1, 1)
    assert g[0, 0] == pytest.approx(1.0, abs=1e-9)
    for x in (0.2, 0.8):
        assert metric_matrix(ChartPoint((x,)))[0, 0] == pytest.approx(1.0, abs=1e-8)


def test_metric_properties():
    rng = np.random.default_rng(7)
    for n in (4, 5, 6):
        for _ in range(20):
            u = random_chart(rng, n)
            g = metric_matrix(u)
            assert np.allclose(g, g.T, atol=1e-12)
            w = np.linalg.eigvalsh(g)
            assert w.min() >= -1e-9 * max(np.abs(w).max(), 1e-30)
            jac = albanese_jacobian(u)
            # singular values of G are the squares of those of J
            assert jacobian_rank(g, 1e-12) == jacobian_rank(jac, 1e-6)
    g = metric_matrix(ChartPoint((0.3, 0.7)))
    assert g.shape == (2, 2)
    assert np.linalg.matrix_rank(g, tol=1e-9) == 2


def test_metric_eval():
    u = ChartPoint((0.5,))
    assert metric_eval(u, [0.0], [0.0]) == 0.0
    assert metric_eval(u, [1.0], [1.0]) == pytest.approx(1.0, abs=1e-9)
    rng = np.random.default_rng(8)
    u4 = random_chart(rng, 4)
    v, w = rng.standard_normal(2), rng.standard_normal(2)
    assert metric_eval(u4, 2 * v, w) == pytest.approx(2 * metric_eval(u4, v, w), rel=1e-9)
    assert metric_eval(u4, v, w) == pytest.approx(metric_eval(u4, w, v), rel=1e-9)
    assert metric_eval(u4, v, v) >= 0.0
    with pytest.raises(DimensionMismatch):
        metric_eval(u4, [1.0], [1.0, 2.0])


def test_relabel():
    pts = (ZERO, pt(0.3), pt(0.6), ONE, INFINITY)
    c = Configuration(pts)
    assert relabel([1, 2, 3, 4], c).points == pts
    swapped = relabel([2, 1, 3, 4], c)
    assert swapped.points[1] is pts[2]
    assert swapped.points[2] is pts[1]
    assert relabel([2, 1, 3, 4], swapped).points == pts
    with pytest.raises(NotAPermutation):
        relabel([1, 1, 3, 4], c)


def transition(perm, u):
    return np.asarray(chart_coords(relabel(perm, chart_embed(u))).u)


def test_relabeling_acts_by_isometries():
    rng = np.random.default_rng(9)
    checked = 0
    while checked < 30:
        n = int(rng.integers(4, 7))
        u = random_chart(rng, n, margin=1e-3)
        perm = [int(v) for v in rng.permutation(np.arange(1, n + 1))]
        base = u.as_array()
        u2 = transition(perm, u)
        trip, at_inf = _triple_arrays(n)
        if np.abs(u2).max() > 1e3 or _seam_margin(_chart_ratios(u2, trip, at_inf)) < 1e-3:
            continue
        dim = n - 2
        dphi = np.empty((dim, dim))
        for m in range(dim):
            h = 1e-6 * max(1.0, abs(base[m]))
            up, dn = base.copy(), base.copy()
            up[m] += h
            dn[m] -= h
            dphi[:, m] = (
                transition(perm, ChartPoint(tuple(up)))
                - transition(perm, ChartPoint(tuple(dn)))
            ) / (2.0 * h)
        v = rng.standard_normal(dim)
        q1 = metric_eval(u, v, v)
        q2 = metric_eval(ChartPoint(tuple(u2)), dphi @ v, dphi @ v)
        assert q2 == pytest.approx(q1, rel=1e-4)
        checked += 1


def test_three_leaf_pseudometric_chain_rule():
    # the blown-up edge-length form relates to the cover form by the
    # logit derivative: d(gamma)/du = kappa'(u) / (kappa(u) (1 - kappa(u)))
    rng = np.random.default_rng(10)
    for u in rng.uniform(0.05, 0.95, size=50):
        h = 1e-6
        gp = devadoss_length(ZERO, pt(u + h), ONE, INFINITY).affine
        gm = devadoss_length(ZERO, pt(u - h), ONE, INFINITY).affine
        fd = (gp - gm) / (2.0 * h)
        t = circle_cover(pt(u)).t
        analytic = 1.0 / (t * (1.0 - t))  # cover derivative is 1 on (0, 1)
        assert fd == pytest.approx(analytic, rel=1e-5)


# -- curve length --------------------------------------------------------------------------


def test_curve_length_constant():
    u = ChartPoint((0.4,))
    assert curve_length([u, u, u]) == 0.0


def test_curve_length_unit_branch_segment():
    samples = [ChartPoint((0.3,)), ChartPoint((0.6,))]
    assert curve_length(samples) == pytest.approx(0.3, abs=1e-6)


def test_curve_length_reversal_and_additivity():
    rng = np.random.default_rng(11)
    samples = [ChartPoint((x,)) for x in (0.2, 0.35, 0.62, 0.8)]
    fwd = curve_length(samples)
    rev = curve_length(list(reversed(samples)))
    assert rev == pytest.approx(fwd, rel=1e-12)
    split = curve_length(samples[:2]) + curve_length(samples[1:])
    assert split == pytest.approx(fwd, rel=1e-12)
    u4 = [random_chart(rng, 4, margin=1e-2) for _ in range(3)]
    assert curve_length(list(reversed(u4))) == pytest.approx(curve_length(u4), rel=1e-9)


def test_curve_length_across_seam():
    # crossing u = 1 splits the segment; the exact length is
    # int_{0.5}^{1} 1 du + int_1^{1.5} u^-2 du = 1/2 + 1/3
    samples = [ChartPoint((0.5 + i / 200,)) for i in range(201)]
    assert curve_length(samples) == pytest.approx(5.0 / 6.0, abs=1e-4)


def test_curve_length_input_validation():
    with pytest.raises(ValueError):
        curve_length([ChartPoint((0.5,))])
    with pytest.raises(DimensionMismatch):
        curve_length([ChartPoint((0.5,)), ChartPoint((0.5, 0.6))])


# -- rank scan ----------------------------------------------------------------------------


def test_rank_scan_trivial_case():
    rep = rank_scan(3, 50, seed=0)
    assert rep["full_rank_count"] == 50
    assert rep["min_rank"] == 1
    assert rep["counterexample"] is None


def test_rank_scan_deterministic():
    a = rank_scan(4, 25, seed=7)
    b = rank_scan(4, 25, seed=7)
    assert a == b
    c = rank_scan(4, 25, seed=8)
    assert c != a


def test_regauged_sigma_ratios_expose_chart_scaling():
    # a coordinate near the tangent pole depresses the sigma ratio in
    # the drawn gauge; swapping it into the infinity anchor recovers it
    u = ChartPoint((-1.9402308244564916, 1039.0048485204481, 0.04369664961997496))
    ratios = regauged_sigma_ratios(u)
    assert len(ratios) >= 2
    assert ratios[0] < 1e-6
    assert max(ratios) > 1e-4


def test_rank_scan_schema_and_preconditions():
    rep = rank_scan(5, 10, seed=1, h=1e-6, tol=1e-6)
    assert list(rep) == [
        "n",
        "trials",
        "seed",
        "h",
        "tol",
        "full_rank_count",
        "min_rank",
        "worst_sigma_ratio",
        "counterexample",
    ]
    assert rep["n"] == 5 and rep["trials"] == 10 and rep["seed"] == 1
    assert 0 <= rep["full_rank_count"] <= 10
    assert 0.0 <= rep["worst_sigma_ratio"] <= 1.0
    with pytest.raises(ValueError):
        rank_scan(4, 0)
    with pytest.raises(ValueError):
        rank_scan(9, 10)
