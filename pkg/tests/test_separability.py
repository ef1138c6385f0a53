import math

import numpy as np
import pytest

from seppack import bodies, packing, separability as sep
from seppack.constructors import grid_packing_2d
from seppack.errors import InvalidArgumentError

HEX3 = [[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3.0)]]


def disks(centers):
    return packing.Packing(bodies.ball(2), centers)


def grid22():
    return grid_packing_2d(bodies.ball(2), np.eye(2), 2)


def test_verify_hyperplane_examples():
    pk = grid22()  # centers (0,0), (0,2), (2,0), (2,2)
    i = 0
    j = next(k for k, c in enumerate(pk.centers) if tuple(c) == (2.0, 0.0))
    good = sep.Hyperplane([1.0, 0.0], 1.0)
    assert sep.verify_hyperplane(pk, i, j, good)
    bad = sep.Hyperplane([1.0, 0.0], 0.5)  # cuts the interior of the disk at o
    assert not sep.verify_hyperplane(pk, i, j, bad)
    with pytest.raises(InvalidArgumentError):
        sep.verify_hyperplane(pk, 0, 0, good)
    with pytest.raises(InvalidArgumentError):
        sep.Hyperplane([0.0, 0.0], 1.0)


def test_hex_cluster_no_plane_through_contact():
    """Brute force over many (direction, offset) pairs: no plane separates a
    touching pair of the mutually touching triple while avoiding the third."""
    pk = disks(HEX3)
    rng = np.random.default_rng(23)
    found = False
    for _ in range(10**4):
        theta = rng.uniform(0, 2 * math.pi)
        f = np.array([math.cos(theta), math.sin(theta)])
        c = rng.uniform(-2.0, 4.0)
        plane = sep.Hyperplane(f, c)
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            if sep.verify_hyperplane(pk, i, j, plane):
                found = True
    assert not found


def test_separating_hyperplane_examples():
    pk = grid22()
    j = next(k for k, c in enumerate(pk.centers) if tuple(c) == (2.0, 0.0))
    plane = sep.separating_hyperplane(pk, 0, j, n_random=64, refine_steps=5)
    assert plane is not None
    assert sep.verify_hyperplane(pk, 0, j, plane)

    collinear = disks([[0, 0], [2, 0], [4, 0]])
    plane2 = sep.separating_hyperplane(collinear, 0, 2, n_random=32, refine_steps=5)
    assert plane2 is not None
    assert sep.verify_hyperplane(collinear, 0, 2, plane2)

    hexp = disks(HEX3)
    assert sep.separating_hyperplane(hexp, 0, 1, n_random=256, refine_steps=10) is None


def test_certify_grid_and_single():
    cert = sep.certify_totally_separable(grid22())
    assert cert.certified
    assert len(cert.pair_witnesses) == 6
    single = disks([[0, 0]])
    assert sep.certify_totally_separable(single).certified


def test_certify_hex_cluster_inconclusive():
    cert = sep.certify_totally_separable(disks(HEX3), n_random=64, refine_steps=5)
    assert cert.status == "inconclusive"
    assert set(cert.failed_pairs) == {(0, 1), (0, 2), (1, 2)}


def test_certify_staggered_squares_refuted():
    """Two touching squares capped by a third: the only line separating the
    bottom pair runs through their touching segment and cuts the cap, so the
    exhaustive polytope search refutes rather than reports inconclusive."""
    sq = bodies.polytope_v([[1, 1], [1, -1], [-1, 1], [-1, -1]])
    pk = packing.Packing(sq, [[0, 0], [2, 0], [1, 2]])
    assert packing.check_packing(pk)["valid"]
    cert = sep.certify_totally_separable(pk, n_random=128, refine_steps=10)
    assert cert.status == "refuted"
    assert (0, 1) in cert.failed_pairs


def test_certify_square_grid():
    sq = bodies.polytope_v([[1, 1], [1, -1], [-1, 1], [-1, -1]])
    grid = packing.Packing(sq, [[2 * i, 2 * j] for i in range(3) for j in range(3)])
    cert = sep.certify_totally_separable(grid)
    assert cert.certified
    for (i, j), plane in cert.pair_witnesses.items():
        assert sep.verify_hyperplane(grid, i, j, plane)


def test_certificate_soundness_reverify():
    for pk in (grid22(), grid_packing_2d(bodies.p_ball(4, 2), np.eye(2), 3)):
        cert = sep.certify_totally_separable(pk)
        assert cert.certified
        for (i, j), plane in cert.pair_witnesses.items():
            assert sep.verify_hyperplane(pk, i, j, plane)


def test_witness_reuse():
    cert = sep.certify_totally_separable(grid_packing_2d(bodies.ball(2), np.eye(2), 3))
    assert cert.certified
    distinct = {id(p) for p in cert.pair_witnesses.values()}
    assert len(distinct) < len(cert.pair_witnesses)


def test_rho_separable_examples():
    grid = grid_packing_2d(bodies.ball(2), np.eye(2), 3)
    for rho in (1.0, 2.0, 4.0):
        assert sep.check_rho_separable(grid, rho)["separable"]

    hexp = disks(HEX3)
    rep4 = sep.check_rho_separable(hexp, 4.0, n_random=64, refine_steps=5)
    assert not rep4["separable"]
    assert all(entry["status"] != "certified" for entry in rep4["per_center"])
    rep1 = sep.check_rho_separable(hexp, 1.0)
    assert rep1["separable"]
    with pytest.raises(InvalidArgumentError):
        sep.check_rho_separable(grid, 0.5)


def test_rho_monotonicity():
    """If the check passes at rho2 it passes at every rho1 <= rho2."""
    pk = grid_packing_2d(bodies.ball(2), np.eye(2), 4)
    results = {rho: sep.check_rho_separable(pk, rho)["separable"] for rho in (1, 2, 3, 5)}
    passed = [rho for rho, ok in results.items() if ok]
    if passed:
        top = max(passed)
        assert all(results[rho] for rho in results if rho <= top)


def test_totally_separable_implies_rho_separable():
    cases = [
        grid_packing_2d(bodies.ball(2), np.eye(2), 2),
        grid_packing_2d(bodies.ball(2), np.eye(2), 3),
        grid_packing_2d(bodies.p_ball(4, 2), np.eye(2), 2),
        packing.Packing(bodies.ball(3), np.vstack([np.zeros(3), 2 * np.eye(3), -2 * np.eye(3)])),
    ]
    for pk in cases:
        assert sep.certify_totally_separable(pk, n_random=64, refine_steps=5).certified
        for rho in (1.0, 2.0, 4.0):
            assert sep.check_rho_separable(pk, rho, n_random=64, refine_steps=5)["separable"]


def test_symmetrization_preserves_witness_after_recentering():
    tri = bodies.polytope_v([[0, 0], [1, 0], [0, 1]])
    sym = bodies.minkowski_symmetrize(tri)
    b1 = sym.boundary_point(np.array([1.0, 0.0]))
    b2 = sym.boundary_point(np.array([0.0, 1.0]))
    centers = np.array([np.zeros(2), 2 * b1, 2 * b2, 2 * b1 + 2 * b2])
    p_tri = packing.Packing(tri, centers)
    p_sym = packing.Packing(sym, centers)
    cert = sep.certify_totally_separable(p_tri)
    assert cert.certified
    for (i, j), plane in cert.pair_witnesses.items():
        f = plane.normal
        shift = 0.5 * (tri.support(f) - tri.support(-f))
        moved = sep.Hyperplane(f, plane.offset - shift)
        assert sep.verify_hyperplane(p_sym, i, j, moved)
