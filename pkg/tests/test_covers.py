import random

import pytest

from nonfill_scl.covers import (SurfaceBase, build_homology_cover, compose, cycle_type,
                                degrees_over, from_cycle_type, identity, inverse,
                                plan_branched_cover, transpositions_of)
from nonfill_scl.errors import BadPartition, DiskBase


def test_permutation_helpers():
    p = (1, 2, 0, 4, 3)
    assert compose(p, inverse(p)) == identity(5)
    assert cycle_type(p) == (3, 2)
    assert cycle_type(from_cycle_type([3, 1, 1])) == (3, 1, 1)
    # p then q: 0 -> 1 under p, 1 -> 0 under q
    q = (1, 0, 2, 3, 4)
    assert compose(p, q)[0] == 0
    for perm in [p, (0, 1, 2), (2, 0, 1, 4, 3, 5)]:
        ts = transpositions_of(perm)
        assert compose(identity(len(perm)), *ts) == tuple(perm)
        assert len(ts) == len(perm) - len(cycle_type(perm))


def test_trivial_partitions_give_trivial_cover():
    base = SurfaceBase(1, 2)
    plan = plan_branched_cover(base, [[1, 1, 1], [1, 1, 1]])
    assert plan.n_branch == 0
    assert plan.euler_char_cover == 3 * base.euler_char
    assert plan.verify()


def test_single_merge_costs_one_euler():
    base = SurfaceBase(2, 3)
    plan = plan_branched_cover(base, [[2, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]])
    assert plan.n_branch == 1
    assert plan.euler_char_cover == 4 * base.euler_char - 1
    assert plan.verify()


def test_sigma1_style_uniform_degrees():
    # one-holed torus, boundary covered by two circles of degree 2
    plan = plan_branched_cover(SurfaceBase(1, 1), [[2, 2]])
    assert plan.verify() and plan.boundary_degrees(1) == (2, 2)
    assert plan.n_branch == 2


def test_bad_partition():
    with pytest.raises(BadPartition) as info:
        plan_branched_cover(SurfaceBase(0, 2), [[2], [1, 1, 1]])
    assert info.value.code == "BAD_PARTITION"
    with pytest.raises(BadPartition):
        plan_branched_cover(SurfaceBase(0, 2), [[2]])


def test_disk_base():
    with pytest.raises(DiskBase) as info:
        build_homology_cover(SurfaceBase(0, 1), uniform=2)
    assert info.value.code == "DISK_BASE"


def test_one_holed_torus_uniform_two():
    plan = build_homology_cover(SurfaceBase(1, 1), uniform=2)
    assert plan.recipe == "double+cyclic"
    assert set(plan.boundary_degrees(1)) == {2}
    assert plan.verify() and plan.n_branch == 0 and plan.n_components() == 1


def test_pants_with_one_prescribed_degree():
    plan = build_homology_cover(SurfaceBase(0, 3), prescribed={1: 3})
    assert plan.sheets == 3
    assert set(degrees_over(plan, 1)) == {3}
    assert plan.verify()


def test_unit_degrees_give_identity():
    plan = build_homology_cover(SurfaceBase(1, 3), prescribed={1: 1, 2: 1})
    assert plan.sheets == 1 and plan.verify()


def test_free_circle_relabelling():
    # prescribing the last circle forces a reorder; degrees are read back by caller index
    plan = build_homology_cover(SurfaceBase(0, 4), prescribed={4: 2, 2: 3})
    assert plan.boundary_labels[-1] in (1, 3)
    assert set(degrees_over(plan, 4)) == {2} and set(degrees_over(plan, 2)) == {3}


@pytest.mark.parametrize("g,b,n", [(0, 2, 3), (0, 3, 2), (1, 2, 2), (2, 1, 3), (1, 1, 5)])
def test_uniform_covers(g, b, n):
    plan = build_homology_cover(SurfaceBase(g, b), uniform=n)
    assert plan.verify()
    assert all(set(plan.boundary_degrees(j)) == {n} for j in range(1, b + 1))


def test_disjoint_union_keeps_blocks_apart():
    base = SurfaceBase(1, 1)
    a = plan_branched_cover(base, [[2]])
    b = plan_branched_cover(base, [[1, 1, 1]])
    u = a.disjoint_union(b)
    assert u.sheets == 5 and u.verify()
    assert u.boundary_degrees(1) == (2, 1, 1, 1)
    assert u.n_components() == a.n_components() + b.n_components()


def test_random_branched_plans_verify():
    rng = random.Random(1)
    for _ in range(40):
        base = SurfaceBase(rng.randint(0, 2), rng.randint(1, 3))
        n = rng.randint(1, 5)
        parts = []
        for _ in range(base.n_boundary):
            left, lam = n, []
            while left:
                v = rng.randint(1, left)
                lam.append(v)
                left -= v
            parts.append(lam)
        assert plan_branched_cover(base, parts).verify()
