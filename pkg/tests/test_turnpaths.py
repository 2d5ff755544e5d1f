from fractions import Fraction

import pytest

from conftest import fixture_pipeline, fixture_spec

from nonfill_scl.errors import PathExplosion
from nonfill_scl.model import validate
from nonfill_scl.turnpaths import (ArcRef, brute_force_cycles, build_side_graph,
                                   enumerate_taut_turn_paths, kappa)

MODES = [False, True]
NAMES = ["SEP2", "ANN"]


def graph_of(name, single=False):
    return fixture_pipeline(name, single)[1]


def paths_of(name, single=False):
    return fixture_pipeline(name, single)[2]


def test_arcref_text_round_trip():
    for a in (ArcRef.turn("g#3"), ArcRef.alpha("a1"), ArcRef.alpha("a7", False)):
        assert ArcRef.parse(str(a)) == a


@pytest.mark.parametrize("single", MODES)
def test_sep2_turn_nodes_have_successors(single):
    g = graph_of("SEP2", single)
    for nodes in g.nodes.values():
        for x in nodes:
            if x.is_turn:
                assert g.successors(x)


def test_strandless_handle_gives_only_whole_side_alpha_edges():
    # ANN: the second handle carries no strands; its long sides sit between
    # a2/a3 (side A) and a4/a1 (side B) on the single disk
    g = graph_of("ANN")
    h2 = {(str(x), str(y)) for (x, y), s in g.edges.items() if s.middle.handle == "h2"}
    assert h2 == {("A:a2+", "A:a3+"), ("A:a3-", "A:a2-"),
                  ("A:a4+", "A:a1+"), ("A:a1-", "A:a4-")}
    s = g.side(ArcRef.alpha("a2"), ArcRef.alpha("a3"))
    d = g.dual(s)
    assert d.middle.handle == "h2" and d.middle.side != s.middle.side
    assert (d.middle.lo, d.middle.hi) == (0, 1)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("single", MODES)
def test_dual_is_an_involution_on_the_same_slots(name, single):
    g = graph_of(name, single)
    for s in g.edges.values():
        d = g.dual(s)
        assert g.dual(d) == s
        assert d.middle.slots == s.middle.slots and d.middle.side != s.middle.side
        assert g.side(d.first, d.second) == d


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("single", MODES)
def test_paths_are_taut_closed_and_canonical(name, single):
    g, paths = graph_of(name, single), paths_of(name, single)
    labels = set(g.edges.values())
    for p in paths:
        assert len(set(p.steps)) == len(p.steps)
        assert len(p.sides) == len(p.steps)
        assert all(s in labels for s in p.sides)
        assert g.make_path(p.disk, p.steps[1:] + p.steps[:1]) == p
        assert kappa(p) == 1 - Fraction(len(p.steps), 2) == p.kappa
    assert len({(p.disk, p.steps) for p in paths}) == len(paths)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("single", MODES)
def test_enumeration_matches_plain_dfs(name, single):
    g, paths = graph_of(name, single), paths_of(name, single)
    assert {(p.disk, p.steps) for p in paths} == brute_force_cycles(g)


def test_single_slot_paths_are_multi_slot_paths():
    multi = {(p.disk, p.steps) for p in paths_of("SEP2")}
    single = {(p.disk, p.steps) for p in paths_of("SEP2", True)}
    assert single < multi


def test_sep2_contains_the_four_turn_arc_disk():
    labels = {p.label: p for p in paths_of("SEP2")}
    p = labels["T:g#0 T:g#3 T:g#2 T:g#1"]
    assert p.kappa == -1


def test_pure_boundary_paths_are_included_and_mirror():
    paths = paths_of("ANN")
    pure = {p.steps: p for p in paths if not any(s.is_turn for s in p.steps)}
    assert pure
    g = graph_of("ANN")
    for steps, p in pure.items():
        mirrored = g.make_path(p.disk, [s.reverse_alpha() for s in reversed(steps)])
        assert mirrored.steps in pure and mirrored.kappa == p.kappa


def test_mixed_direction_paths_are_admitted():
    # an alpha and a reversed alpha inside one path (a twisted turn disk)
    mixed = [p for p in paths_of("SEP2")
             if {s.forward for s in p.steps if not s.is_turn} == {True, False}]
    assert mixed


def test_enumeration_is_deterministic():
    rep = validate(fixture_spec("SEP2"))
    a = enumerate_taut_turn_paths(rep)
    b = enumerate_taut_turn_paths(build_side_graph(rep))
    assert [p.steps for p in a] == [p.steps for p in b]


def test_path_cap():
    rep = validate(fixture_spec("SEP2"))
    with pytest.raises(PathExplosion) as info:
        enumerate_taut_turn_paths(rep, cap=10)
    assert info.value.code == "PATH_EXPLOSION"
    assert info.value.count > 10
    assert len(enumerate_taut_turn_paths(rep, cap=10, single_slot=True)) <= 10
