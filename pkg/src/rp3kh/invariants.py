"""Named invariants and the structural cross-checks between them.

``kh``/``kh1`` are forward complexes; the instanton E_1 page is the reversed
complex of the INST tables.  Comparisons with the mirror always mirror the
diagram and rebuild its cube, so they exercise two independent code paths.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complex import (
    FORWARD,
    REVERSED,
    ChainComplexError,
    GradedComplex,
    RankProfile,
    assemble,
    homology_ranks,
)
from .cube import ResolutionCube, build_cube
from .diagram import Diagram, default_marked, link_class, mirror, with_marked
from .rules import RuleTable, builtin, essential_blocks

__all__ = [
    "InvariantReport",
    "block_match",
    "e2_page",
    "instanton_e1",
    "kh",
    "kh1",
    "kh_complex",
    "reduced_by_position",
    "verify",
]


@dataclass
class InvariantReport:
    diagram: str
    link_class: int
    n_crossings: int
    marked: int | str | None
    profiles: dict[str, RankProfile | None] = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def add(self, name: str, ok: bool, detail: str) -> None:
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram,
            "class": self.link_class,
            "n_crossings": self.n_crossings,
            "marked": self.marked,
            "profiles": {k: (None if v is None else v.to_json()) for k, v in self.profiles.items()},
            "checks": self.checks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def _cube(d: Diagram | ResolutionCube) -> ResolutionCube:
    return d if isinstance(d, ResolutionCube) else build_cube(d)


def _marked_for(d: Diagram, reduced: bool) -> Diagram:
    if reduced and d.marked is None:
        raise ChainComplexError("reduced homology needs a marked point (M line)")
    return d


def kh_complex(d: Diagram | ResolutionCube, reduced: bool = False, variant: str = "kh") -> GradedComplex:
    cube = _cube(d)
    _marked_for(cube.diagram, reduced)
    cls = link_class(cube.diagram)
    if variant == "kh1":
        if cls != 1:
            raise ValueError("kh1 is only defined here for class-1 diagrams; use kh for class 0")
        theory = "KH1-CLASS1"
    elif variant == "kh":
        theory = "KH-CLASS1" if cls == 1 else "KH0"
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return assemble(cube, builtin(theory), reduced, FORWARD)


def kh(d: Diagram | ResolutionCube, reduced: bool = False) -> RankProfile:
    return homology_ranks(kh_complex(d, reduced, "kh"))


def kh1(d: Diagram | ResolutionCube, reduced: bool = False) -> RankProfile:
    return homology_ranks(kh_complex(d, reduced, "kh1"))


def reduced_by_position(d: Diagram, variant: str = "kh") -> dict[int | str, RankProfile]:
    """Reduced ranks with the marked point on each arc and loop in turn.

    For class-1 diagrams the reduced theory built from the k-preserving
    rules can change with the marked arc, so callers get every value and
    decide what to compare.
    """
    marks: list[int | str] = sorted({a for x in d.crossings for a in x.legs})
    marks += [f"L{k}" for k in range(len(d.loops))]
    return {m: homology_ranks(kh_complex(with_marked(d, m), True, variant)) for m in marks}


def instanton_e1(d: Diagram | ResolutionCube, reduced: bool = False) -> GradedComplex:
    cube = _cube(d)
    _marked_for(cube.diagram, reduced)
    theory = "INST1" if link_class(cube.diagram) == 1 else "INST0"
    return assemble(cube, builtin(theory), reduced, REVERSED)


def e2_page(d: Diagram | ResolutionCube, reduced: bool = False) -> RankProfile:
    return homology_ranks(instanton_e1(d, reduced))


# ---------------------------------------------------------------------------
# Block comparison
# ---------------------------------------------------------------------------


def _renamings(inst: RuleTable, khc: RuleTable) -> list[tuple[dict[str, str], str | None]]:
    """Generator renamings from a Khovanov table into each block of an instanton table.

    Generators are paired by quantum degree.  For a class-0 table the blocks
    are the generators of the extra tensor factor.
    """

    def pair(src, dst_gens, dst_mod) -> dict[str, str]:
        out = {}
        for g, dg in zip(src.generators, src.deg):
            match = [h for h in dst_gens if dst_mod.deg[dst_mod.index(h)] == dg]
            if len(match) != 1:
                raise ValueError(f"cannot pair generator {g} of {src.name} with {dst_gens}")
            out[g] = match[0]
        return out

    trivial = pair(khc.trivial, inst.trivial.generators, inst.trivial)
    if inst.extra is not None:
        return [(dict(trivial), g) for g in inst.extra.generators]
    out = []
    for block in essential_blocks(inst):
        m = dict(trivial)
        m.update(pair(khc.essential, block, inst.essential))
        out.append((m, None))
    return out


def _block_indices(khx: GradedComplex, inst: GradedComplex, h: int, renamings) -> list[np.ndarray]:
    """Index in ``inst`` (height N - h) of every ``khx`` generator at height ``h``, per block."""
    dig = khx.digits(h)
    vert, _ = khx.vertex_and_index(h)
    full = khx.cube.n_vertices - 1
    vi = full ^ vert  # complementary vertex
    npos = int(khx.cube.n_circles.max()) if len(vert) else 0
    width = max(m.rank for m in khx.modules + inst.modules)
    out = []
    for rename, extra in renamings:
        # conv[kh module code, kh digit, inst module code] -> inst digit (-1 when absent)
        conv = np.full((len(khx.modules), width, len(inst.modules)), -1, dtype=np.int64)
        for kc, km in enumerate(khx.modules):
            for kd, g in enumerate(km.generators):
                name = rename.get(g)
                for ic, im in enumerate(inst.modules):
                    if name is not None and name in im.generators:
                        conv[kc, kd, ic] = im.generators.index(name)
        idx = inst.local_offset[vi].copy()
        for p in range(npos):
            live = dig[:, p] >= 0
            if not live.any():
                continue
            rep = khx.cube.circle_rep[vert[live], p]
            ipos = inst.cube.arc_circle[vi[live], rep]
            contrib = conv[khx.codes[vert[live], p], dig[live, p], inst.codes[vi[live], ipos]]
            if np.any(contrib < 0):
                idx[:] = -1
                break
            idx[live] += contrib * inst.places[vi[live], ipos]
        if extra is not None and idx.size and idx[0] >= 0:
            ext = inst.table.extra.generators.index(extra)
            idx += ext * inst.places[vi, inst.cube.n_circles[vi]]
        out.append(idx)
    return out


def block_match(inst: GradedComplex, khx: GradedComplex) -> tuple[bool, str]:
    """Check that ``inst`` is two renamed copies of ``khx`` with complemented vertices.

    Every generator of ``inst`` must be hit exactly once, and each
    differential of ``inst`` restricted to a block must equal the matching
    differential of ``khx`` entry for entry.
    """
    n = inst.cube.n
    if khx.cube.n != n:
        return False, "cube sizes differ"
    renamings = _renamings(inst.table, khx.table)
    indices = {h: _block_indices(khx, inst, h, renamings) for h in khx.heights}
    for h, blocks in indices.items():
        hit = np.concatenate(blocks)
        size = inst.group_sizes.get(n - h, 0)
        if len(hit) != size or not np.array_equal(np.sort(hit), np.arange(size)):
            return False, f"generators at height {n - h} are not a disjoint union of renamed copies"
    for h in khx.heights:
        t = h + 1
        if t not in khx.group_sizes:
            continue
        k = khx.differential(h)
        dmat = inst.differential(n - h).tocsr()
        for b, (cols, rows) in enumerate(zip(indices[h], indices[t])):
            sub = dmat[rows, :][:, cols]
            if (sub != k).nnz:
                return False, f"block {b} differs at Khovanov height {h}"
        if dmat.nnz != len(renamings) * k.nnz:
            return False, f"entries between blocks at height {n - h}"
    return True, f"{len(renamings)} blocks, {sum(khx.differential(h).nnz for h in khx.heights)} entries each"


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _map(fn, jobs, threads: int):
    if threads <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def _fmt(p: RankProfile) -> str:
    return "{" + ", ".join(f"{i}: {r}" for i, r in sorted(p.ranks.items())) + "}"


def verify(d: Diagram, threads: int = 1) -> InvariantReport:
    """Compute every invariant of ``d`` and run the cross-checks; failures become report entries."""
    cls = link_class(d)
    if d.marked is None:
        d = with_marked(d, default_marked(d))
    rep = InvariantReport(d.name or "<diagram>", cls, d.n_crossings, d.marked)
    cube_d = build_cube(d, check=False)
    census = dict(Counter(cube_d.circle_essential.sum(axis=1).tolist()))
    bad = {k: v for k, v in census.items() if k != cls}
    rep.add("essential-count", not bad,
            f"essential-circle counts {dict(sorted(census.items()))}, expected {cls} at every vertex")
    if bad:
        rep.profiles = {"kh": None, "khr": None, "kh1": None, "e2": None, "e2_reduced": None}
        return rep

    m = mirror(d)
    cube_m = build_cube(m)
    has_mark = d.marked is not None
    jobs = [("kh", cube_d, "kh", False), ("e2", cube_d, "e2", False), ("m_kh", cube_m, "kh", False)]
    if has_mark:
        jobs += [("khr", cube_d, "kh", True), ("e2_reduced", cube_d, "e2", True), ("m_khr", cube_m, "kh", True)]
    if cls == 1:
        jobs += [("kh1", cube_d, "kh1", False), ("m_kh1", cube_m, "kh1", False)]
        if has_mark:
            jobs += [("m_kh1r", cube_m, "kh1", True)]

    def build(job):
        key, cube, what, red = job
        if what == "e2":
            return key, instanton_e1(cube, red)
        return key, kh_complex(cube, red, what)

    complexes = dict(_map(build, jobs, threads))
    squares = {k: c.check_d_squared() for k, c in complexes.items()}
    bad_sq = {k: v for k, v in squares.items() if v}
    rep.add("d-squared", not bad_sq,
            f"{len(squares)} complexes checked" + (f"; nonzero at {bad_sq}" if bad_sq else ""))
    if bad_sq:
        rep.profiles = {"kh": None, "khr": None, "kh1": None, "e2": None, "e2_reduced": None}
        return rep

    profiles = dict(zip(complexes, _map(homology_ranks, list(complexes.values()), threads)))
    rep.profiles = {
        "kh": profiles["kh"],
        "khr": profiles.get("khr"),
        "kh1": profiles.get("kh1"),
        "e2": profiles["e2"],
        "e2_reduced": profiles.get("e2_reduced"),
    }

    n = d.n_crossings
    theory_check = "mirror-e2-class0" if cls == 0 else "mirror-e2-class1"
    base = "kh" if cls == 0 else "kh1"
    pairs = [("e2", f"m_{base}")]
    if has_mark:
        pairs.append(("e2_reduced", "m_khr" if cls == 0 else "m_kh1r"))
    for e2_key, m_key in pairs:
        e2h = profiles[e2_key].by_height()
        mh = profiles[m_key].by_height()
        expected = {n - h: 2 * r for h, r in mh.items()}
        ok = e2h == expected
        rep.add(f"{theory_check}{'-reduced' if 'reduced' in e2_key else ''}", ok,
                f"{e2_key} by height {dict(sorted(e2h.items()))}; twice {m_key} at complementary "
                f"height {dict(sorted(expected.items()))}")

    ok, detail = block_match(complexes["e2"], complexes[f"m_{base}"])
    rep.add("block-structure", ok, detail)
    if has_mark:
        ok, detail = block_match(complexes["e2_reduced"], complexes["m_khr" if cls == 0 else "m_kh1r"])
        rep.add("block-structure-reduced", ok, detail)

    two_kh, e2t = 2 * profiles["kh"].total, profiles["e2"].total
    rep.add("rank-inequality", two_kh >= e2t, f"2 kh = {two_kh} >= e2 = {e2t}")
    if has_mark:
        two_khr, e2r = 2 * profiles["khr"].total, profiles["e2_reduced"].total
        rep.add("rank-inequality-reduced", two_khr >= e2r, f"2 khr = {two_khr} >= e2_reduced = {e2r}")
    if cls == 1:
        a, b = profiles["kh"].total, profiles["kh1"].total
        rep.add("kh-ge-kh1", a >= b, f"kh = {a} >= kh1 = {b}")
    return rep


def format_report(rep: InvariantReport) -> str:
    """Plain-text rendering carrying the same fields as the JSON report."""
    lines = [f"diagram {rep.diagram}", f"class {rep.link_class}", f"n_crossings {rep.n_crossings}",
             f"marked {rep.marked}"]
    for k in ("kh", "khr", "kh1", "e2", "e2_reduced"):
        p = rep.profiles.get(k)
        lines.append(f"{k} " + ("-" if p is None else f"total {p.total} ranks {_fmt(p)}"))
    for c in rep.checks:
        lines.append(f"check {c['name']} {'pass' if c['pass'] else 'FAIL'}: {c['detail']}")
    return "\n".join(lines)
