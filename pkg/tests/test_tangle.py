from __future__ import annotations

import pytest

from rp3kh.diagram import components, crossing_signs, link_class, validate
from rp3kh.invariants import kh
from rp3kh.tangle import MorseBuilder, braid_closure


def test_cup_cap_unknot_with_kink():
    d = MorseBuilder(0).cup(0).cross(0, 1).cap(0).close()
    assert d.n_crossings == 1
    assert validate(d) == []
    assert kh(d).total == 2


def test_cup_cap_without_crossings_is_a_loop():
    d = MorseBuilder(0).cup(0).cap(0).close()
    assert d.n_crossings == 0 and len(d.loops) == 1 and d.loops[0].weight == 0


def test_projective_closure_of_one_strand_is_projective_line():
    d = MorseBuilder(1).close(projective=True)
    assert link_class(d) == 1 and d.loops[0].weight == 1


def test_strand_count_mismatch():
    with pytest.raises(ValueError):
        MorseBuilder(2).cup(0).close()


def test_bad_positions():
    with pytest.raises(IndexError):
        MorseBuilder(2).cross(1)
    with pytest.raises(ValueError):
        MorseBuilder(2).sigma([0])


def test_mark_bottom_picks_the_strand_arc():
    d = braid_closure([1, 1, 1], 2, mark_bottom=1)
    assert isinstance(d.marked, int)
    untouched = braid_closure([1], 3, mark_bottom=2)
    assert untouched.marked == "L0"


def test_projective_class_follows_strand_parity():
    for n in (1, 2, 3, 4):
        assert link_class(braid_closure([], n, projective=True)) == n % 2


def test_braid_orientation_is_upward():
    d = braid_closure([1, -2, 1, -2], 3, projective=True)
    assert crossing_signs(d) == (2, 2)
    assert len(components(d)) + len(d.loops) >= 1
