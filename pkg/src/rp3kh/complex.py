"""Graded chain complexes over F_2 assembled from a resolution cube and a rule table.

The chain group at a vertex is the tensor product of one module per circle
(in circle order) followed by the table's extra factor, if any.  Generators
are numbered per vertex in mixed radix with the first circle most
significant, and vertices are taken in lexicographic bitstring order, so
every basis and matrix is reproducible.

``forward`` complexes map height h to h + 1 along cube edges.  ``reversed``
complexes map h to h - 1: each edge u -> v contributes a map C(v) -> C(u),
where a merge edge acts by the split rule and vice versa.

Over F_2 no signs are attached to edges.  The sign exponent
``delta(v, u) = sum_{j >= i} v_j`` is computed only by :func:`edge_sign_exponent`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numba
import numpy as np
import scipy.sparse as sp

from .cube import MERGE, ONE_TO_ONE, SPLIT, ResolutionCube
from .diagram import MissingOrientationError, crossing_signs
from .f2 import as_f2, matmul_f2_is_zero, rank_f2, rank_f2_dense
from .rules import CircleModule, RuleError, RuleTable

__all__ = [
    "ChainComplexError",
    "Generator",
    "GradedComplex",
    "RankProfile",
    "assemble",
    "bigraded_ranks",
    "dump_complex",
    "edge_sign_exponent",
    "homology_ranks",
]

FORWARD, REVERSED = "forward", "reversed"

# Module codes used by the array layout.
T_CODE, E_CODE, TR_CODE, ER_CODE, EXTRA_CODE = 0, 1, 2, 3, 4


class ChainComplexError(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    vertex: tuple[int, ...]
    labeling: tuple[tuple[str, str], ...]  # (circle label, generator); extra factor uses its module name
    i: int
    j: int
    k: int

    def to_json(self) -> dict:
        return {
            "vertex": "".join(map(str, self.vertex)),
            "labels": {c: g for c, g in self.labeling},
            "i": self.i,
            "j": self.j,
            "k": self.k,
        }


@dataclass
class RankProfile:
    ranks: dict[int, int]
    n_minus: int = 0

    @property
    def total(self) -> int:
        return sum(self.ranks.values())

    def by_height(self) -> dict[int, int]:
        return {i + self.n_minus: r for i, r in self.ranks.items()}

    def doubled(self) -> "RankProfile":
        return RankProfile({i: 2 * r for i, r in self.ranks.items()}, self.n_minus)

    def to_json(self) -> dict:
        return {"total": self.total, "ranks": {str(i): r for i, r in sorted(self.ranks.items())}}


@dataclass
class GradedComplex:
    cube: ResolutionCube
    table: RuleTable
    reduced: bool
    direction: str
    n_plus: int
    n_minus: int
    oriented: bool
    modules: tuple[CircleModule, ...]  # indexed by module code
    codes: np.ndarray  # (V, P) module code per position, -1 beyond the last position
    places: np.ndarray  # (V, P) mixed-radix place values
    sizes: np.ndarray  # (V,) chain-group rank per vertex
    local_offset: np.ndarray  # (V,) first index of the vertex inside its height group
    group_sizes: dict[int, int]  # height -> rank of that chain group
    differentials: dict[int, sp.csr_matrix] = field(default_factory=dict)  # height -> matrix out of it

    @property
    def heights(self) -> list[int]:
        return sorted(self.group_sizes)

    def grading(self, h: int) -> int:
        return h - self.n_minus

    def target(self, h: int) -> int:
        return h + 1 if self.direction == FORWARD else h - 1

    @property
    def chain_rank(self) -> int:
        return int(self.sizes.sum())

    def chain_ranks(self) -> dict[int, int]:
        return {self.grading(h): n for h, n in sorted(self.group_sizes.items()) if n}

    def differential(self, h: int) -> sp.csr_matrix:
        m = self.differentials.get(h)
        if m is None:
            return sp.csr_matrix((self.group_sizes.get(self.target(h), 0), self.group_sizes.get(h, 0)), dtype=np.uint8)
        return m

    @cached_property
    def _vertices_by_height(self) -> dict[int, np.ndarray]:
        hs = self.cube.heights
        return {h: np.nonzero(hs == h)[0] for h in self.group_sizes}

    def vertex_and_index(self, h: int) -> tuple[np.ndarray, np.ndarray]:
        """For each generator of height ``h``: its vertex and its index inside the vertex."""
        verts = self._vertices_by_height[h]
        sizes = self.sizes[verts]
        vert = np.repeat(verts, sizes)
        starts = np.repeat(np.cumsum(sizes) - sizes, sizes)
        idx = np.arange(int(sizes.sum())) - starts
        return vert, idx

    def digits(self, h: int) -> np.ndarray:
        """(generators, P) array of per-position local generator indices (-1 past the last position)."""
        vert, idx = self.vertex_and_index(h)
        places = self.places[vert]
        codes = self.codes[vert]
        ranks = np.array([m.rank for m in self.modules] + [1])[codes]
        out = (idx[:, None] // places) % ranks
        return np.where(codes >= 0, out, -1)

    def gradings_jk(self, h: int) -> tuple[np.ndarray, np.ndarray]:
        dig = self.digits(h)
        vert, _ = self.vertex_and_index(h)
        codes = self.codes[vert]
        width = max(m.rank for m in self.modules)
        deg = np.zeros((len(self.modules) + 1, width), dtype=np.int64)
        kk = np.zeros_like(deg)
        for c, m in enumerate(self.modules):
            deg[c, : m.rank] = m.deg
            kk[c, : m.rank] = m.k
        safe_c = np.where(codes >= 0, codes, len(self.modules))
        safe_d = np.where(dig >= 0, dig, 0)
        jsum = deg[safe_c, safe_d].sum(axis=1)
        ksum = kk[safe_c, safe_d].sum(axis=1)
        n = self.cube.n
        if self.direction == FORWARD:
            j = jsum + h + self.n_plus - 2 * self.n_minus
        else:
            j = jsum - h + n + self.n_minus - 2 * self.n_plus
        return j, ksum

    def basis(self, h: int) -> list[Generator]:
        dig = self.digits(h)
        vert, _ = self.vertex_and_index(h)
        j, k = self.gradings_jk(h)
        out = []
        for g in range(len(vert)):
            v = int(vert[g])
            ids = self.cube.circle_ids(v)
            labeling = []
            for p in range(self.codes.shape[1]):
                code = int(self.codes[v, p])
                if code < 0:
                    break
                mod = self.modules[code]
                name = mod.name if code == EXTRA_CODE else (f"L{-ids[p] - 1}" if ids[p] < 0 else str(ids[p]))
                labeling.append((name, mod.generators[int(dig[g, p])]))
            out.append(Generator(self.cube.vertex(v), tuple(labeling), self.grading(h), int(j[g]), int(k[g])))
        return out

    def check_d_squared(self) -> list[int]:
        """Heights h where the composite out of h is nonzero."""
        bad = []
        for h in self.heights:
            t = self.target(h)
            if t in self.group_sizes and self.target(t) in self.group_sizes:
                if not matmul_f2_is_zero(self.differential(t), self.differential(h)):
                    bad.append(h)
        return bad


def edge_sign_exponent(source, target) -> int:
    """delta(v, u) = sum_{j >= i} v_j for the edge u -> v changing coordinate i (kept for integer lifts)."""
    i = next(p for p, (a, b) in enumerate(zip(source, target)) if a != b)
    return sum(target[i:])


# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------


def _module_list(table: RuleTable) -> tuple[CircleModule, ...]:
    triv = table.trivial
    ess = table.essential or CircleModule("none", ("-",), (0,), (0,))
    extra = table.extra or CircleModule("none", ("-",), (0,), (0,))
    return (triv, ess, triv.reduced(), ess.reduced() if table.essential else ess, extra)


def _marked_column(cube: ResolutionCube) -> int:
    d = cube.diagram
    if d.marked is None:
        raise ChainComplexError("reduced complex requested but the diagram has no marked point")
    lp = d.marked_loop()
    if lp is not None:
        return cube.n_arcs + lp
    return cube.col_of[int(d.marked)]


def _layout(cube: ResolutionCube, table: RuleTable, reduced: bool):
    nv = cube.n_vertices
    maxc = max(cube.max_circles, 1)
    width = maxc + 1
    pos = np.arange(width)[None, :]
    ncirc = cube.n_circles
    codes = np.full((nv, width), -1, dtype=np.int64)
    ess = np.zeros((nv, width), dtype=bool)
    ess[:, : cube.circle_essential.shape[1]] = cube.circle_essential
    valid = pos < ncirc[:, None]
    codes = np.where(valid, np.where(ess, E_CODE, T_CODE), -1)
    if table.essential is None and ess.any():
        raise RuleError(f"theory {table.name} has no essential module but the diagram has class 1")
    if reduced:
        mc = _marked_column(cube)
        mpos = cube.arc_circle[:, mc]
        rows = np.arange(nv)
        codes[rows, mpos] += 2
    if table.extra is not None:
        codes[np.arange(nv), ncirc] = EXTRA_CODE
    modules = _module_list(table)
    rank_of = np.array([m.rank for m in modules] + [1], dtype=np.int64)
    ranks = rank_of[codes]  # code -1 picks the trailing 1
    rev = np.cumprod(ranks[:, ::-1], axis=1)[:, ::-1]
    places = np.concatenate([rev[:, 1:], np.ones((nv, 1), dtype=np.int64)], axis=1)
    sizes = rev[:, 0].copy()
    heights = cube.heights
    local_offset = np.zeros(nv, dtype=np.int64)
    group_sizes: dict[int, int] = {}
    for h in range(cube.n + 1):
        sel = np.nonzero(heights == h)[0]
        if len(sel):
            s = sizes[sel]
            local_offset[sel] = np.cumsum(s) - s
            group_sizes[h] = int(s.sum())
    return modules, codes, places, sizes, local_offset, group_sizes


def _signs(cube: ResolutionCube) -> tuple[int, int, bool]:
    try:
        p, m = crossing_signs(cube.diagram)
        return p, m, True
    except MissingOrientationError:
        return 0, 0, False


# ---------------------------------------------------------------------------
# Fast path
# ---------------------------------------------------------------------------


def _rule_arrays(table: RuleTable, modules):
    full = {T_CODE: table.trivial, E_CODE: table.essential}
    width = max(m.rank for m in modules)
    ncode = len(modules)
    to_full = np.full((ncode, width), -1, dtype=np.int64)
    from_full = np.full((ncode, width), -1, dtype=np.int64)
    base_type = np.array([0, 1, 0, 1, -1], dtype=np.int64)
    for code, mod in enumerate(modules):
        if code == EXTRA_CODE:
            continue
        src = full[base_type[code]]
        if src is None:
            continue
        for li, g in enumerate(mod.generators):
            to_full[code, li] = src.index(g)
            from_full[code, src.index(g)] = li
    maxt = 4
    merge = np.full((2, 2, width, width, maxt), -1, dtype=np.int64)
    split = np.full((2, width, maxt, 2), -1, dtype=np.int64)
    tname = ("T", "E")
    for ta in (0, 1):
        for tb in (0, 1):
            if ta == 1 and tb == 1:
                continue
            ma, mb = full[ta], full[tb]
            if ma is None or mb is None:
                continue
            out = full[1 if 1 in (ta, tb) else 0]
            for ia, ga in enumerate(ma.generators):
                for ib, gb in enumerate(mb.generators):
                    img = table.merge_image(tname[ta], ga, tname[tb], gb)
                    if len(img) > maxt:
                        raise RuleError("merge images with more than 4 terms are not supported")
                    for t, g in enumerate(img):
                        merge[ta, tb, ia, ib, t] = out.index(g)
    for ta in (0, 1):
        m = full[ta]
        if m is None:
            continue
        for ig, g in enumerate(m.generators):
            img = table.split_image(tname[ta], g)
            if len(img) > maxt:
                raise RuleError("split images with more than 4 terms are not supported")
            for t, (x, y) in enumerate(img):
                split[ta, ig, t, 0] = m.index(x)
                split[ta, ig, t, 1] = table.trivial.index(y)
    return to_full, from_full, base_type, merge, split


@numba.njit(cache=True, nogil=True)
def _assemble_kernel(es, et, ekind, ts, tt, corr, codes, places, sizes, local_offset,
                     to_full, from_full, base_type, merge, split, out_col, out_row, out_src):
    n = 0
    width = codes.shape[1]
    digits = np.zeros(width, dtype=np.int64)
    for e in range(es.shape[0]):
        kind = ekind[e]
        if kind == 2:
            continue
        s = es[e]
        t = et[e]
        soff = local_offset[s]
        toff = local_offset[t]
        p1 = ts[e, 0]
        p2 = ts[e, 1]
        q1 = tt[e, 0]
        q2 = tt[e, 1]
        for idx in range(sizes[s]):
            base = 0
            for c in range(width):
                code = codes[s, c]
                if code < 0:
                    break
                dgt = (idx // places[s, c]) % (places[s, c - 1] // places[s, c] if c > 0 else sizes[s] // places[s, 0])
                digits[c] = dgt
                q = corr[e, c]
                if q >= 0:
                    base += dgt * places[t, q]
            if kind == 0:
                ca = codes[s, p1]
                cb = codes[s, p2]
                ga = to_full[ca, digits[p1]]
                gb = to_full[cb, digits[p2]]
                cq = codes[t, q1]
                for k in range(merge.shape[4]):
                    gc = merge[base_type[ca], base_type[cb], ga, gb, k]
                    if gc < 0:
                        break
                    loc = from_full[cq, gc]
                    if loc < 0:
                        continue
                    out_col[n] = soff + idx
                    out_row[n] = toff + base + loc * places[t, q1]
                    out_src[n] = s
                    n += 1
            else:
                ca = codes[s, p1]
                ta = base_type[ca]
                g = to_full[ca, digits[p1]]
                qa = q1
                qb = q2
                if ta == 1 and base_type[codes[t, q1]] != 1:
                    qa = q2
                    qb = q1
                cqa = codes[t, qa]
                cqb = codes[t, qb]
                for k in range(split.shape[2]):
                    g1 = split[ta, g, k, 0]
                    if g1 < 0:
                        break
                    g2 = split[ta, g, k, 1]
                    l1 = from_full[cqa, g1]
                    l2 = from_full[cqb, g2]
                    if l1 < 0 or l2 < 0:
                        continue
                    out_col[n] = soff + idx
                    out_row[n] = toff + base + l1 * places[t, qa] + l2 * places[t, qb]
                    out_src[n] = s
                    n += 1
    return n


def _edge_data(cube: ResolutionCube, direction: str, has_extra: bool, width: int):
    ea = cube.edge_arrays
    n_e = len(ea["src"])
    kind = np.select([ea["kind"] == -1, ea["kind"] == 1], [0, 1], 2)
    corr = np.full((n_e, width), -1, dtype=np.int64)
    corr[:, : ea["corr"].shape[1]] = ea["corr"]
    if has_extra and n_e:
        corr[np.arange(n_e), cube.n_circles[ea["src"]]] = cube.n_circles[ea["tgt"]]
    if direction == FORWARD:
        return ea["src"], ea["tgt"], kind, ea["touched_src"], ea["touched_tgt"], corr
    rev = np.full_like(corr, -1)
    rows, cols = np.nonzero(corr >= 0)
    rev[rows, corr[rows, cols]] = cols
    kind_rev = np.select([kind == 0, kind == 1], [1, 0], 2)
    return ea["tgt"], ea["src"], kind_rev, ea["touched_tgt"], ea["touched_src"], rev


def _assemble_fast(cx: GradedComplex) -> None:
    cube = cx.cube
    width = cx.codes.shape[1]
    es, et, kind, ts, tt, corr = _edge_data(cube, cx.direction, cx.table.extra is not None, width)
    to_full, from_full, base_type, merge, split = _rule_arrays(cx.table, cx.modules)
    bound = int((cx.sizes[es] * np.where(kind == 2, 0, 4)).sum()) if len(es) else 0
    out_col = np.empty(bound, dtype=np.int64)
    out_row = np.empty(bound, dtype=np.int64)
    out_src = np.empty(bound, dtype=np.int64)
    n = _assemble_kernel(es.astype(np.int64), et.astype(np.int64), kind.astype(np.int64),
                         np.ascontiguousarray(ts, dtype=np.int64), np.ascontiguousarray(tt, dtype=np.int64),
                         corr, cx.codes, cx.places, cx.sizes, cx.local_offset,
                         to_full, from_full, base_type, merge, split, out_col, out_row, out_src)
    out_col, out_row, out_src = out_col[:n], out_row[:n], out_src[:n]
    hs = cube.heights[out_src]
    for h in cx.heights:
        t = cx.target(h)
        if t not in cx.group_sizes:
            continue
        sel = hs == h
        m = sp.csr_matrix(
            (np.ones(int(sel.sum()), dtype=np.int64), (out_row[sel], out_col[sel])),
            shape=(cx.group_sizes[t], cx.group_sizes[h]),
        )
        cx.differentials[h] = as_f2(m)


# ---------------------------------------------------------------------------
# Reference path
# ---------------------------------------------------------------------------


def _assemble_reference(cx: GradedComplex) -> None:
    cube, table = cx.cube, cx.table
    d = cube.diagram
    marked_arc = d.marked if isinstance(d.marked, int) else None
    marked_loop = d.marked_loop()

    def circle_modules(res):
        mods = []
        for c in res.circles:
            is_marked = cx.reduced and (
                (marked_arc is not None and marked_arc in c.segments)
                or (marked_loop is not None and c.id == -(marked_loop + 1))
            )
            mods.append(table.module("E" if c.essential else "T", is_marked))
        return mods

    res_of = {}
    index: dict[tuple, int] = {}
    for v in range(cube.n_vertices):
        res = cube.resolution(v)
        mods = circle_modules(res)
        res_of[v] = (res, mods)
    counters: dict[int, int] = {}
    hs = cube.heights
    for v in range(cube.n_vertices):
        res, mods = res_of[v]
        factors = [m.generators for m in mods]
        if table.extra is not None:
            factors.append(table.extra.generators)
        h = int(hs[v])
        for labels in itertools.product(*factors):
            index[(v, labels)] = counters.get(h, 0)
            counters[h] = counters.get(h, 0) + 1

    entries: dict[int, list[tuple[int, int]]] = {}
    for edge in cube.edges():
        u, v = cube.vertex_index(edge.source), cube.vertex_index(edge.target)
        kind = edge.kind
        if kind == ONE_TO_ONE:
            continue
        if cx.direction == FORWARD:
            s, t, ins, outs = u, v, edge.inputs, edge.outputs
            corr = dict(edge.correspondence)
        else:
            s, t, ins, outs = v, u, edge.outputs, edge.inputs
            corr = {b: a for a, b in edge.correspondence}
            kind = SPLIT if kind == MERGE else MERGE
        (res_s, mods_s), (res_t, mods_t) = res_of[s], res_of[t]
        ids_s = [c.id for c in res_s.circles]
        ids_t = [c.id for c in res_t.circles]
        ess_t = {c.id: c.essential for c in res_t.circles}
        ess_s = {c.id: c.essential for c in res_s.circles}
        h = int(hs[s])
        factors = [m.generators for m in mods_s] + ([table.extra.generators] if table.extra else [])
        for labels in itertools.product(*factors):
            lab_s = dict(zip(ids_s, labels))
            rest = {corr[cid]: g for cid, g in lab_s.items() if cid in corr}
            extra = (labels[-1],) if table.extra else ()
            images: list[dict[int, str]] = []
            if kind == MERGE:
                a, b = ins
                ta = "E" if ess_s[a] else "T"
                tb = "E" if ess_s[b] else "T"
                for g in table.merge_image(ta, lab_s[a], tb, lab_s[b]):
                    images.append({**rest, outs[0]: g})
            else:
                (a,) = ins
                ta = "E" if ess_s[a] else "T"
                first, second = outs
                if ta == "E" and not ess_t[first]:
                    first, second = second, first
                for x, y in table.split_image(ta, lab_s[a]):
                    images.append({**rest, first: x, second: y})
            col = index[(s, labels)]
            for img in images:
                key = (t, tuple(img[c] for c in ids_t) + extra)
                if key in index:  # killed generators of the reduced quotient are absent
                    entries.setdefault(h, []).append((index[key], col))
    for h in cx.heights:
        t = cx.target(h)
        if t not in cx.group_sizes:
            continue
        pairs = entries.get(h, [])
        rows = np.array([p[0] for p in pairs], dtype=np.int64)
        cols = np.array([p[1] for p in pairs], dtype=np.int64)
        m = sp.csr_matrix((np.ones(len(pairs), dtype=np.int64), (rows, cols)),
                          shape=(cx.group_sizes[t], cx.group_sizes[h]))
        cx.differentials[h] = as_f2(m)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def assemble(cube: ResolutionCube, table: RuleTable, reduced: bool = False,
             direction: str = FORWARD, method: str = "fast") -> GradedComplex:
    """Build the complex of ``table`` over ``cube``.

    ``reduced`` (or a reduced table) replaces the module of the circle through
    the marked point by its quotient; rule images are taken in the quotient.
    """
    if direction not in (FORWARD, REVERSED):
        raise ValueError(f"direction must be {FORWARD!r} or {REVERSED!r}")
    reduced = reduced or table.reduced
    if cube.circle_essential.any() and table.essential is None:
        raise RuleError(f"theory {table.name} cannot be assembled on a class-1 cube")
    modules, codes, places, sizes, local_offset, group_sizes = _layout(cube, table, reduced)
    n_plus, n_minus, oriented = _signs(cube)
    cx = GradedComplex(cube, table, reduced, direction, n_plus, n_minus, oriented,
                       modules, codes, places, sizes, local_offset, group_sizes)
    if method == "fast":
        _assemble_fast(cx)
    elif method == "reference":
        _assemble_reference(cx)
    else:
        raise ValueError(f"unknown method {method!r}")
    return cx


def homology_ranks(c: GradedComplex, method: str = "fast") -> RankProfile:
    """Per-grading homology ranks; a nonzero composite of differentials is a hard error."""
    bad = c.check_d_squared()
    if bad:
        raise ChainComplexError(f"d^2 != 0 out of heights {bad} ({c.table.name}, {c.direction})")
    rank = rank_f2 if method == "fast" else rank_f2_dense
    out_rank = {h: rank(c.differential(h)) for h in c.heights if c.target(h) in c.group_sizes}
    ranks = {}
    for h, n in c.group_sizes.items():
        src = h - 1 if c.direction == FORWARD else h + 1
        r = n - out_rank.get(h, 0) - out_rank.get(src, 0)
        if r:
            ranks[c.grading(h)] = r
    return RankProfile(dict(sorted(ranks.items())), c.n_minus)


def bigraded_ranks(c: GradedComplex) -> dict[tuple[int, int], int]:
    """Homology ranks split by (i, j); j is convention-relative for class-1 diagrams.

    Requires the differential to preserve j, which holds for every builtin table.
    """
    jmap = {h: c.gradings_jk(h)[0] for h in c.heights}
    out: dict[tuple[int, int], int] = {}
    rank_in: dict[tuple[int, int], int] = {}
    rank_out: dict[tuple[int, int], int] = {}
    for h in c.heights:
        t = c.target(h)
        if t not in c.group_sizes:
            continue
        m = c.differential(h).tocoo()
        js, jt = jmap[h][m.col], jmap[t][m.row]
        if np.any(js != jt):
            raise ChainComplexError("differential does not preserve the quantum grading")
        csr = c.differential(h).tocsc()
        for j in np.unique(jmap[h]):
            cols = np.nonzero(jmap[h] == j)[0]
            rows = np.nonzero(jmap[t] == j)[0]
            if len(rows) == 0:
                continue
            r = rank_f2(csr[:, cols].tocsr()[rows, :])
            rank_out[(h, int(j))] = r
            rank_in[(t, int(j))] = r
    for h in c.heights:
        vals, counts = np.unique(jmap[h], return_counts=True)
        for j, n in zip(vals.tolist(), counts.tolist()):
            r = n - rank_out.get((h, j), 0) - rank_in.get((h, j), 0)
            if r:
                out[(c.grading(h), j)] = r
    return dict(sorted(out.items()))


def dump_complex(c: GradedComplex) -> str:
    """JSON document with every basis and the differential as (row, col) triplets."""
    doc = {
        "theory": c.table.name,
        "direction": c.direction,
        "reduced": c.reduced,
        "n_minus": c.n_minus,
        "gradings": [],
    }
    for h in c.heights:
        m = c.differential(h).tocoo()
        order = np.lexsort((m.row, m.col))
        doc["gradings"].append({
            "i": c.grading(h),
            "basis": [g.to_json() for g in c.basis(h)],
            "differential": {
                "target_i": c.grading(c.target(h)),
                "entries": [[int(m.row[x]), int(m.col[x]), 1] for x in order],
            },
        })
    return json.dumps(doc, indent=1, sort_keys=True)
