"""Default paths, divisor classes, and graded section counts."""

from __future__ import annotations

import pytest

import branetile as bt
from branetile import lattice
from branetile.tilting import (arrow_heights, picard_presentation,
                               stable_matchings, weak_path_weight)

from conftest import QUIVER_FIXTURES

# free rank of the divisor class group at the first chamber
EXPECTED_RANK = {"honeycomb": 0, "conifold": 1, "spp": 2, "z2z2": 3}

HONEYCOMB_SECTION_COUNTS = ((0, 1, 1), (1, 3, 3), (2, 6, 6), (3, 10, 10),
                            (4, 15, 15))


def first_chamber(name, towers, chambers_by_name):
    return towers[name], chambers_by_name[name][0].representative


# ---------------------------------------------------------------------------
# default paths and path weights
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_default_paths_reach_every_vertex(name, tilings):
    tiling = tilings[name]
    for base in tiling.vertices:
        paths = bt.default_paths(tiling, base)
        assert set(paths) == set(tiling.vertices)
        assert paths[base].steps == ()
        for v, path in paths.items():
            assert path.source == base
            assert path.target == v


def test_default_paths_default_base_is_the_first_vertex(spp):
    paths = bt.default_paths(spp)
    assert paths["1"].source == "1"
    with pytest.raises(ValueError):
        bt.default_paths(spp, "ghost")


@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_path_weights_have_the_endpoint_degree(name, tilings, towers):
    tiling, tower = tilings[name], towers[name]
    index = {v: i for i, v in enumerate(tiling.vertices)}
    base = tiling.vertices[0]
    for v, path in bt.default_paths(tiling).items():
        weight = weak_path_weight(tower, path)
        expected = [0] * len(tiling.vertices)
        expected[index[v]] += 1
        expected[index[base]] -= 1
        assert list(tower.degree(weight)) == expected


def test_inverse_steps_cancel_in_the_path_weight(spp, towers):
    tower = towers["spp"]
    there_and_back = bt.make_weak_path(spp, [("12", 1), ("12", -1)])
    assert weak_path_weight(tower, there_and_back) == (0,) * tower.rank


# ---------------------------------------------------------------------------
# divisors and the class group presentation
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_path_divisor_evaluates_stable_functionals(name, tilings, towers,
                                                   matchings_by_name,
                                                   chambers_by_name):
    tiling = tilings[name]
    tower, theta = first_chamber(name, towers, chambers_by_name)
    stable = stable_matchings(tiling, theta, matchings_by_name[name])
    for path in bt.default_paths(tiling).values():
        weight = weak_path_weight(tower, path)
        divisor = bt.path_divisor(tower, path, stable)
        assert divisor == tuple(
            (m.matching_id, lattice.dot(m.chi, weight)) for m in stable)


@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_presentation_rank_counts_stable_matchings_minus_three(
        name, tilings, towers, matchings_by_name, chambers_by_name):
    tiling = tilings[name]
    tower, theta = first_chamber(name, towers, chambers_by_name)
    stable = stable_matchings(tiling, theta, matchings_by_name[name])
    pres = picard_presentation(stable)
    assert pres.rank == len(stable) - 3
    assert pres.rank == EXPECTED_RANK[name]
    assert pres.torsion == ()
    assert pres.matching_ids == tuple(m.matching_id for m in stable)
    zero = pres.class_of((0,) * len(stable))
    assert zero == ((0,) * pres.rank, ())


def test_presentation_class_of_is_linear(towers, matchings_by_name,
                                         chambers_by_name, tilings):
    tiling = tilings["spp"]
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    stable = stable_matchings(tiling, theta, matchings_by_name["spp"])
    pres = picard_presentation(stable)
    a = (1, 0, 2, -1, 0)
    b = (0, 3, -2, 1, 1)
    fa, ta = pres.class_of(a)
    fb, tb = pres.class_of(b)
    fs, ts = pres.class_of(tuple(x + y for x, y in zip(a, b)))
    assert fs == tuple(x + y for x, y in zip(fa, fb))
    assert ts == ()


def test_presentation_rejects_rank_deficient_functionals(matchings_by_name):
    # a single matching spans one line, not the full kernel dual
    with pytest.raises(bt.ConsistencyError):
        picard_presentation(matchings_by_name["spp"][:1])


@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_kernel_image_classes_vanish(name, tilings, towers,
                                     matchings_by_name, chambers_by_name):
    """Divisors of kernel weights are exactly the relations killed by
    the presentation."""
    tiling = tilings[name]
    tower, theta = first_chamber(name, towers, chambers_by_name)
    stable = stable_matchings(tiling, theta, matchings_by_name[name])
    pres = picard_presentation(stable)
    for coords in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (3, -2, 1)]:
        weight = tower.from_kernel(coords)
        divisor = tuple(lattice.dot(m.chi, weight) for m in stable)
        assert pres.class_of(divisor) == ((0,) * pres.rank, ())


# ---------------------------------------------------------------------------
# tilting collections
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_collection_is_internally_consistent(name, tilings, towers,
                                             matchings_by_name,
                                             chambers_by_name):
    tiling = tilings[name]
    tower, theta = first_chamber(name, towers, chambers_by_name)
    matchings = matchings_by_name[name]
    coll = bt.tilting_collection(tiling, tower, theta, matchings)
    stable = stable_matchings(tiling, theta, matchings)
    assert coll.base == tiling.vertices[0]
    assert coll.ray_ids == tuple(m.matching_id for m in stable)
    paths = dict(coll.paths)
    divisors = dict(coll.divisors)
    classes = dict(coll.classes)
    for v in tiling.vertices:
        expected = tuple(
            c for _, c in bt.path_divisor(tower, paths[v], stable))
        assert divisors[v] == expected
        assert classes[v] == coll.presentation.class_of(divisors[v])
    assert divisors[coll.base] == (0,) * len(stable)
    assert classes[coll.base] == ((0,) * coll.presentation.rank, ())


def test_collection_honors_an_explicit_base(spp, towers, matchings_by_name,
                                            chambers_by_name):
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    coll = bt.tilting_collection(spp, tower, theta,
                                 matchings_by_name["spp"], base="2")
    assert coll.base == "2"
    assert all(path.source == "2" for _, path in coll.paths)
    assert dict(coll.divisors)["2"] == (0,) * len(coll.ray_ids)


def test_collection_classes_are_path_independent(spp, towers,
                                                 matchings_by_name,
                                                 chambers_by_name):
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    matchings = matchings_by_name["spp"]
    default = bt.tilting_collection(spp, tower, theta, matchings)
    detour = {
        "1": bt.make_weak_path(spp, [], source="1"),
        "2": bt.make_weak_path(spp, [("13", 1), ("32", 1)]),
        "3": bt.make_weak_path(spp, [("12", 1), ("23", 1)]),
    }
    other = bt.tilting_collection(spp, tower, theta, matchings, paths=detour)
    assert dict(other.classes) == dict(default.classes)
    assert dict(other.divisors) != dict(default.divisors)


def test_class_path_independence_verifies_and_rejects(spp, towers,
                                                      matchings_by_name,
                                                      chambers_by_name):
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    stable = stable_matchings(spp, theta, matchings_by_name["spp"])
    first = bt.make_weak_path(spp, [("12", 1)])
    second = bt.make_weak_path(spp, [("13", 1), ("32", 1)])
    assert bt.class_path_independence(tower, first, second, stable)
    loop = bt.make_weak_path(spp, [], source="1")
    with pytest.raises(ValueError):
        bt.class_path_independence(tower, first, loop, stable)


# ---------------------------------------------------------------------------
# graded section counts
# ---------------------------------------------------------------------------

def test_honeycomb_section_counts_are_the_plane_count(honeycomb, towers,
                                                      matchings_by_name,
                                                      chambers_by_name):
    tower, theta = first_chamber("honeycomb", towers, chambers_by_name)
    path = bt.make_weak_path(honeycomb, [], source="1")
    count = bt.graded_sections_count(honeycomb, tower, theta, path,
                                     matchings_by_name["honeycomb"])
    assert count.heights == HONEYCOMB_SECTION_COUNTS
    assert count.matches
    assert count.path_height == 0
    assert count.max_height == 4


@pytest.mark.parametrize("name", QUIVER_FIXTURES)
def test_section_counts_agree_between_lattice_and_paths(
        name, tilings, towers, matchings_by_name, chambers_by_name):
    tiling = tilings[name]
    tower, theta = first_chamber(name, towers, chambers_by_name)
    for path in bt.default_paths(tiling).values():
        count = bt.graded_sections_count(tiling, tower, theta, path,
                                         matchings_by_name[name],
                                         max_height=3)
        assert count.matches
        assert [h for h, _, _ in count.heights] == [0, 1, 2, 3]


def test_empty_path_has_the_trivial_section(conifold, towers,
                                            matchings_by_name,
                                            chambers_by_name):
    tower, theta = first_chamber("conifold", towers, chambers_by_name)
    path = bt.make_weak_path(conifold, [], source="1")
    count = bt.graded_sections_count(conifold, tower, theta, path,
                                     matchings_by_name["conifold"],
                                     max_height=2)
    assert count.heights[0] == (0, 1, 1)


def test_sections_reject_an_empty_stable_set(spp, towers, chambers_by_name):
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    path = bt.make_weak_path(spp, [], source="1")
    with pytest.raises(bt.ConsistencyError):
        bt.graded_sections_count(spp, tower, theta, path, [])


def test_sections_reject_uncovered_arrows(spp, towers, matchings_by_name,
                                          chambers_by_name):
    # with only one matching supplied, most arrows have height zero and
    # the forward-path search could not terminate; the guard must fire
    tower, theta = first_chamber("spp", towers, chambers_by_name)
    path = bt.make_weak_path(spp, [], source="1")
    matchings = matchings_by_name["spp"]
    with pytest.raises(bt.ConsistencyError):
        bt.graded_sections_count(spp, tower, theta, path, matchings[:1])


def test_arrow_heights_count_matching_membership(spp, matchings_by_name):
    heights = arrow_heights(matchings_by_name["spp"])
    assert set(heights) == {a.arrow_id for a in spp.arrows}
    for aid, h in heights.items():
        assert h == sum(1 for m in matchings_by_name["spp"]
                        if aid in m.arrows)
        assert h > 0
