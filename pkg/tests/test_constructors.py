import math

import numpy as np
import pytest

from seppack import bodies, constructors as cons, linearization as lin, packing, separability as sep
from seppack.errors import InvalidArgumentError, PreconditionError


def test_cross_polytope_config_ball3():
    vecs = cons.cross_polytope_config(bodies.ball(3), np.eye(3))
    assert vecs.shape == (6, 3)
    s = lin.from_configuration(bodies.ball(3), vecs)
    for name in ("lin", "strict", "smooth"):
        assert lin.check_condition(s, name).holds
    pk = packing.Packing(bodies.ball(3), np.vstack([np.zeros(3), vecs]))
    assert sep.certify_totally_separable(pk, n_random=64, refine_steps=5).certified


def test_cross_polytope_config_pball():
    body = bodies.p_ball(4, 2)
    vecs = cons.cross_polytope_config(body, np.eye(2))
    s = lin.from_configuration(body, vecs)
    assert lin.check_condition(s, "lin").holds
    V = s.values()
    # axis functionals: -1 on the antipode, 0 on every other cross term
    expected = np.eye(4) - np.roll(np.eye(4), 2, axis=1)
    assert np.max(np.abs(V - expected)) <= 1e-9


def test_cross_polytope_config_rejects_non_auerbach():
    bad = np.array([[1.0, 0.0], [1.0, 1.0]]) / np.array([[1.0], [math.sqrt(2.0)]])
    with pytest.raises(PreconditionError):
        cons.cross_polytope_config(bodies.ball(2), bad)


def test_grid_packing_examples():
    grid = cons.grid_packing_2d(bodies.ball(2), np.eye(2), 10)
    assert grid.n == 100
    stats = packing.contact_statistics(packing.contact_graph(grid))
    assert stats["contact_number"] == 180 == math.floor(200 - 20)

    single = cons.grid_packing_2d(bodies.ball(2), np.eye(2), 1)
    assert packing.contact_statistics(packing.contact_graph(single))["contact_number"] == 0

    pgrid = cons.grid_packing_2d(bodies.p_ball(4, 2), np.eye(2), 3)
    pstats = packing.contact_statistics(packing.contact_graph(pgrid))
    assert pstats["contact_number"] == 12 == math.floor(18 - 6)


def test_grid_packing_certifies():
    for k in (2, 3, 4):
        grid = cons.grid_packing_2d(bodies.ball(2), np.eye(2), k)
        cert = sep.certify_totally_separable(grid)
        assert cert.certified
        stats = packing.contact_statistics(packing.contact_graph(grid))
        assert stats["contact_number"] == 2 * k * (k - 1)


def test_grid_packing_ellipse_conjugate_basis():
    from util import quad_orthogonal_basis

    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    quad = q @ np.diag([0.5, 2.0]) @ q.T
    ell = bodies.ellipsoid(quad)
    basis = quad_orthogonal_basis(rng, quad)
    assert bodies.is_auerbach_basis(ell, basis)
    grid = cons.grid_packing_2d(ell, basis, 4)
    stats = packing.contact_statistics(packing.contact_graph(grid))
    assert stats["contact_number"] == 2 * 4 * 3
    assert sep.certify_totally_separable(grid).certified


def test_example_5d_exactness():
    s = cons.example_5d()
    V = s.values()
    root3 = math.sqrt(3.0)
    v = {4: np.array([1.0, 0.0]), 5: np.array([-0.5, root3 / 2]), 6: np.array([-0.5, -root3 / 2])}
    expected = np.empty((6, 6))
    for i in range(6):
        for j in range(6):
            if i == j:
                expected[i, j] = 1.0
            elif i < 3 and j < 3:
                expected[i, j] = -0.5
            elif i < 3 or j < 3:
                expected[i, j] = 0.0
            else:
                expected[i, j] = float(v[i + 1] @ v[j + 1])
    irrational = {(4, 5), (5, 4), (4, 4), (5, 5)}
    for i in range(6):
        for j in range(6):
            if (i, j) in irrational:
                assert abs(V[i, j] - expected[i, j]) <= 1e-12
            else:
                assert V[i, j] == expected[i, j]  # exact float arithmetic
    assert lin.check_condition(s, "open-lin").holds
    assert lin.one_sided_check(s)["x_hull_avoids_o"]


def test_spiky_body_examples():
    body = cons.spiky_body_3d(0.01)
    assert body.smooth and not body.strictly_convex
    assert body.gauge(np.array([1.01, 0.0, 0.0])) == pytest.approx(1.0, abs=1e-9)
    u = np.ones(3) / math.sqrt(3.0)
    bp = body.boundary_point(u)
    assert np.linalg.norm(bp) == pytest.approx(0.9 * math.sqrt(3.0) + 0.01, abs=1e-9)
    # support plane at the axis boundary point is coordinate-orthogonal
    f = body.supporting_functional(np.array([1.01, 0.0, 0.0]))
    np.testing.assert_allclose(f, [1.0 / 1.01, 0.0, 0.0], atol=1e-9)
    for bad in (0.0, -0.1, 0.2):
        with pytest.raises(InvalidArgumentError):
            cons.spiky_body_3d(bad)


def test_spiky_cross_configuration_end_to_end():
    """Axis configuration of the rounded spiky body: linearizes cleanly and
    the 7-member packing certifies (exercises the smoothed-body gauge and
    supporting functionals throughout)."""
    eps = 0.05
    body = cons.spiky_body_3d(eps)
    auer = (1.0 + eps) * np.eye(3)
    assert bodies.is_auerbach_basis(body, auer)
    vecs = cons.cross_polytope_config(body, auer)
    s = lin.from_configuration(body, vecs)
    assert lin.check_condition(s, "lin").holds
    pk = packing.Packing(body, np.vstack([np.zeros(3), vecs]))
    assert packing.check_packing(pk)["valid"]
    g = packing.contact_graph(pk)
    assert packing.contact_statistics(g)["contact_number"] == 6
    cert = sep.certify_totally_separable(pk, n_random=32, refine_steps=5)
    assert cert.certified


def test_search_finds_cross_on_disk():
    res = cons.hadwiger_config_search(bodies.ball(2), 4, iterations=10**4, seed=0)
    assert res.success
    assert lin.check_condition(res.system, "lin").holds
    assert res.max_clean_n == 4


def test_search_gate_never_lies():
    """Reported success always re-verifies through the condition check."""
    for seed in range(3):
        res = cons.hadwiger_config_search(bodies.ball(2), 5, iterations=3000, seed=seed)
        if res.success:
            assert lin.check_condition(res.system, "lin").holds
        else:
            assert not lin.check_condition(res.system, "lin").holds
            assert res.violation > 0.05
            assert res.max_clean_n <= 4


def test_search_pball_3d():
    res = cons.hadwiger_config_search(bodies.p_ball(4, 3), 6, iterations=2 * 10**4, seed=1)
    assert res.success
    assert lin.check_condition(res.system, "lin").holds


def test_search_rejects_nonsmooth():
    sq = bodies.polytope_v([[1, 1], [1, -1], [-1, 1], [-1, -1]])
    with pytest.raises(PreconditionError):
        cons.hadwiger_config_search(sq, 4)


def test_search_deterministic():
    a = cons.hadwiger_config_search(bodies.ball(2), 4, iterations=2000, seed=9)
    b = cons.hadwiger_config_search(bodies.ball(2), 4, iterations=2000, seed=9)
    assert a.violation == b.violation
    np.testing.assert_array_equal(a.system.xs, b.system.xs)
