"""Generator guarantees: size bounds, worthiness, and determinism."""

import random

from farkaskit import instances, lp
from farkaskit.rational import ZERO


def test_random_lp_size_bounds():
    rng = random.Random(11)
    for _ in range(200):
        prog, bounds = instances.random_lp(rng)
        assert 1 <= prog.n <= 6
        assert len(prog.G) + len(prog.E) <= 8
        if bounds is not None:
            assert len(bounds) == prog.n
            assert all(lo <= hi for lo, hi in bounds)
            assert not prog.E  # box draws are pure inequality programs


def test_random_lp_deterministic():
    a, _ = instances.random_lp(random.Random(5))
    b, _ = instances.random_lp(random.Random(5))
    assert a == b


def test_feasible_instances_are_feasible():
    rng = random.Random(12)
    for _ in range(30):
        inst = instances.random_feasible_instance(rng)
        assert not inst.feasible_polyhedron().is_empty()
        assert 1 <= inst.n <= 3 and 1 <= inst.m <= 3


def test_infeasible_instances_are_infeasible():
    rng = random.Random(13)
    for _ in range(30):
        inst = instances.random_infeasible_instance(rng)
        assert inst.feasible_polyhedron().is_empty()


def test_row_range_is_exact():
    # row (2, -3) over [0,1] x [-1, 2]
    lo, hi = instances._row_range_over_box(
        [instances.Q(2), instances.Q(-3)],
        [(instances.Q(0), instances.Q(1)),
         (instances.Q(-1), instances.Q(2))])
    assert (lo, hi) == (-6, 5)


def test_random_grid_size_bounds():
    rng = random.Random(14)
    for _ in range(30):
        grid = instances.random_grid(rng)
        assert 1 <= grid.n <= 4
        assert 1 <= grid.size <= 6
        for row in grid.rows:
            assert row.lower <= row.upper


def test_concave_instances_have_full_domain():
    rng = random.Random(15)
    for _ in range(20):
        inst = instances.random_concave_instance(rng)
        assert inst.objective.domain is None
        assert not inst.feasible_polyhedron().is_empty()


def test_sample_feasible_points():
    rng = random.Random(16)
    for _ in range(20):
        inst = instances.random_feasible_instance(rng)
        pts = instances.sample_feasible_points(inst, rng, count=3)
        assert pts
        feas = inst.feasible_polyhedron()
        for p in pts:
            assert feas.contains(p)
            assert inst.objective.value(p) is not None
            if inst.objective.domain is not None:
                assert inst.objective.domain.contains(p)
        keys = {tuple(p) for p in pts}
        assert len(keys) == len(pts)
