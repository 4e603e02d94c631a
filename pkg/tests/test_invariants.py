from __future__ import annotations

import json

import pytest

from conftest import corpus_names, load
from rp3kh.diagram import link_class, make_diagram, mirror, with_marked
from rp3kh.invariants import (
    block_match,
    e2_page,
    instanton_e1,
    kh,
    kh1,
    kh_complex,
    reduced_by_position,
    verify,
)
from rp3kh.complex import ChainComplexError


@pytest.mark.parametrize("name", corpus_names())
def test_verify_passes_on_corpus(name):
    rep = verify(load(name))
    failed = [c for c in rep.checks if not c["pass"]]
    assert failed == []
    names = {c["name"] for c in rep.checks}
    assert {"essential-count", "d-squared", "block-structure", "rank-inequality"} <= names


def test_verify_report_json_shape():
    rep = verify(load("proj_trefoil"))
    doc = json.loads(rep.dumps())
    assert set(doc) == {"diagram", "class", "n_crossings", "marked", "profiles", "checks"}
    assert doc["profiles"]["kh1"]["total"] == 6
    assert "kh-ge-kh1" in {c["name"] for c in doc["checks"]}


def test_verify_stops_on_resolution_condition():
    d = make_diagram([(1, 1, 2, 2)], {1: 1, 2: 1}, name="bad")
    rep = verify(d)
    assert not rep.passed
    assert rep.checks[0]["name"] == "essential-count" and len(rep.checks) == 1
    assert rep.profiles["kh"] is None


def test_threads_do_not_change_results():
    d = load("proj_1212")
    assert verify(d, threads=3).to_json() == verify(d).to_json()


def test_reduced_needs_marked_point():
    with pytest.raises(ChainComplexError):
        kh(with_marked(load("trefoil"), None), reduced=True)


def test_kh1_rejects_class_zero():
    with pytest.raises(ValueError):
        kh1(load("trefoil"))


@pytest.mark.parametrize("name", ["proj_trefoil", "proj_121", "uprime_kink", "trefoil_uprime"])
def test_class1_instanton_blocks_are_two_kh1_copies(name):
    d = load(name)
    ok, detail = block_match(instanton_e1(d), kh_complex(mirror(d), variant="kh1"))
    assert ok, detail


@pytest.mark.parametrize("name", ["trefoil", "figure_eight", "one_crossing", "two_one"])
def test_class0_instanton_blocks_are_two_kh_copies(name):
    d = load(name)
    ok, detail = block_match(instanton_e1(d), kh_complex(mirror(d)))
    assert ok, detail


def test_block_match_detects_a_wrong_partner():
    d = load("proj_trefoil")
    ok, _ = block_match(instanton_e1(d), kh_complex(mirror(d), variant="kh"))
    assert not ok


def test_reduced_planar_knot_is_position_independent():
    assert {p.total for p in reduced_by_position(load("figure_eight")).values()} == {5}


def test_class1_reduced_position_dependence_is_reported():
    # The k-preserving class-1 rules give a reduced theory that moves with the
    # marked arc; the deformed variant does not.  Both are reported as values.
    d = load("proj_trefoil")
    khr = {m: p.total for m, p in reduced_by_position(d).items()}
    kh1r = {m: p.total for m, p in reduced_by_position(d, "kh1").items()}
    assert set(kh1r.values()) == {3}
    assert sorted(set(khr.values())) == [3, 7]


def test_crossingless_instanton_ranks():
    for n in range(4):
        assert instanton_e1(make_diagram([], loops=[0] * n)).chain_rank == 2 ** (n + 1)
        assert instanton_e1(make_diagram([], loops=[0] * n + [1])).chain_rank == 2 ** (n + 2)


def test_class1_kink_e2():
    assert e2_page(load("uprime_kink")).total == 4
    assert link_class(load("uprime_kink")) == 1
