from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_names, load
from rp3kh.cube import CubeTooLargeError, EssentialCountError, build_cube, edge_kind_census, essential_census, resolve
from rp3kh.diagram import link_class, make_diagram
from rp3kh.tangle import braid_closure


@pytest.mark.parametrize("name", corpus_names())
def test_fast_and_reference_cubes_agree(name):
    d = load(name)
    fast, ref = build_cube(d), build_cube(d, method="reference")
    assert np.array_equal(fast.arc_circle, ref.arc_circle)
    for key in ("src", "tgt", "crossing", "kind", "touched_src", "touched_tgt", "corr"):
        assert np.array_equal(fast.edge_arrays[key], ref.edge_arrays[key]), key


@pytest.mark.parametrize("name", corpus_names())
def test_essential_count_matches_class(name):
    d = load(name)
    assert set(essential_census(d)) == {link_class(d)}


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=7), st.booleans(), st.sampled_from([4, 5]))
def test_random_closures_agree_and_satisfy_essential_condition(word, projective, strands):
    # a projective closure crosses the cross-cap once per strand
    d = braid_closure(word, strands, projective)
    expected = int(projective and strands % 2 == 1)
    assert link_class(d) == expected
    fast, ref = build_cube(d), build_cube(d, method="reference")
    assert np.array_equal(fast.arc_circle, ref.arc_circle)
    assert set(fast.circle_essential.sum(axis=1).tolist()) == {expected}


def test_edges_change_circle_count_by_one_or_zero():
    cube = build_cube(load("figure_eight"))
    for e in cube.edges():
        s, t = cube.resolution(e.source), cube.resolution(e.target)
        delta = len(t.circles) - len(s.circles)
        assert delta == {"merge": -1, "split": 1, "onetoone": 0}[e.kind]


def test_one_crossing_has_a_single_one_to_one_edge():
    census = edge_kind_census(build_cube(load("one_crossing")))
    assert census["onetoone"] == 1 and census["edges"] == 1
    assert census["merge"] == census["split"] == 0


def test_one_to_one_never_occurs_in_class_one():
    for name in corpus_names():
        d = load(name)
        if link_class(d) == 1:
            assert edge_kind_census(build_cube(d))["onetoone"] == 0


def test_resolution_circle_ids():
    res = resolve(load("uprime"), ())
    assert [c.label for c in res.circles] == ["L0"]
    assert res.n_essential() == 1
    kink = resolve(load("uprime_kink"), (0,))
    assert sorted(c.essential for c in kink.circles) == [False, True]


def test_essential_condition_enforced():
    d = make_diagram([(1, 1, 2, 2)], {1: 1, 2: 1})
    with pytest.raises(EssentialCountError):
        build_cube(d)
    build_cube(d, check=False)


def test_crossing_cap():
    with pytest.raises(CubeTooLargeError):
        build_cube(load("trefoil"), max_n=2)


def test_vertex_order_puts_crossing_zero_first():
    cube = build_cube(load("trefoil"))
    assert cube.vertex(4) == (1, 0, 0)
    assert cube.vertex_index((0, 1, 1)) == 3
