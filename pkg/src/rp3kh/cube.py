"""Resolution cube: smoothings, circle tracing and edge classification.

Smoothing convention for a crossing stored as ``(a, b, c, d)``:
the 0-smoothing joins legs a-b and c-d, the 1-smoothing joins a-d and b-c.
Vertices are indexed by their bitstring read as a binary number with
crossing 0 as the most significant bit, so integer order is lexicographic.

Circles inside a resolution are numbered by their smallest arc id; free
loops come after all arc circles, in loop order.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .diagram import Diagram, link_class

__all__ = [
    "Circle",
    "CubeEdge",
    "CubeTooLargeError",
    "EssentialCountError",
    "Resolution",
    "ResolutionCube",
    "build_cube",
    "edge_kind_census",
    "essential_census",
    "max_crossings",
    "resolve",
]

DEFAULT_MAX_N = 24

MERGE, SPLIT, ONE_TO_ONE = "merge", "split", "onetoone"
_KIND_CODE = {-1: MERGE, 1: SPLIT, 0: ONE_TO_ONE}


class CubeTooLargeError(RuntimeError):
    pass


class EssentialCountError(ValueError):
    """A resolution has an essential-circle count incompatible with the link class."""


def max_crossings() -> int:
    env = os.environ.get("RP3KH_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


@dataclass(frozen=True)
class Circle:
    id: int  # smallest arc id; free loop k has id -(k + 1)
    essential: bool
    segments: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"L{-self.id - 1}" if self.id < 0 else str(self.id)


@dataclass(frozen=True)
class Resolution:
    vertex: tuple[int, ...]
    circles: tuple[Circle, ...]

    @property
    def bits(self) -> str:
        return "".join(map(str, self.vertex))

    def n_essential(self) -> int:
        return sum(c.essential for c in self.circles)


@dataclass(frozen=True)
class CubeEdge:
    source: tuple[int, ...]
    target: tuple[int, ...]
    crossing: int
    kind: str  # merge | split | onetoone
    inputs: tuple[int, ...]  # participating circle ids at the source
    outputs: tuple[int, ...]  # participating circle ids at the target
    essential_involved: bool
    correspondence: tuple[tuple[int, int], ...]  # untouched circle id at source -> id at target


def _smoothing_pairs(legs: tuple[int, int, int, int], choice: int) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b, c, d = legs
    return ((a, b), (c, d)) if choice == 0 else ((a, d), (b, c))


def resolve(d: Diagram, v) -> Resolution:
    """Trace the circles of one resolution (reference path, pure Python)."""
    v = tuple(int(x) for x in v)
    if len(v) != d.n_crossings or any(x not in (0, 1) for x in v):
        raise ValueError(f"vertex must be a 0/1 tuple of length {d.n_crossings}")
    parent = {a.id: a.id for a in d.arcs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, choice in zip(d.crossings, v):
        for p, q in _smoothing_pairs(x.legs, choice):
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[max(rp, rq)] = min(rp, rq)
    groups: dict[int, list[int]] = {}
    for a in sorted(parent):
        groups.setdefault(find(a), []).append(a)
    w = d._weights
    circles = [Circle(min(seg), sum(w[s] for s in seg) % 2 == 1, tuple(seg)) for seg in groups.values()]
    circles.sort(key=lambda c: c.id)
    circles += [Circle(-(k + 1), lp.weight == 1, ()) for k, lp in enumerate(d.loops)]
    return Resolution(v, tuple(circles))


def _vertex_tuple(idx: int, n: int) -> tuple[int, ...]:
    return tuple((idx >> (n - 1 - i)) & 1 for i in range(n))


class ResolutionCube:
    """All resolutions of a diagram stored as compact arrays.

    ``arc_circle[v, j]`` is the circle position (0-based, in circle order) of
    column ``j`` at vertex ``v``.  Columns are the arcs in increasing id
    order, followed by one pseudo-column per free loop.
    """

    def __init__(self, diagram: Diagram, arc_circle: np.ndarray, check: bool = True):
        self.diagram = diagram
        self.n = diagram.n_crossings
        self.arc_ids = diagram.arc_ids()
        self.n_arcs = len(self.arc_ids)
        self.arc_circle = arc_circle
        self.n_vertices = 1 << self.n
        self.col_of = {a: j for j, a in enumerate(self.arc_ids)}
        weights = np.array([diagram.weight(a) for a in self.arc_ids] + [lp.weight for lp in diagram.loops], dtype=np.int64)
        self.n_circles = arc_circle.max(axis=1) + 1 if arc_circle.shape[1] else np.zeros(self.n_vertices, dtype=np.int64)
        self.n_circles = self.n_circles.astype(np.int64)
        self.max_circles = int(self.n_circles.max()) if self.n_vertices else 0
        # Smallest column of each circle (its canonical representative).
        rep = np.full((self.n_vertices, max(self.max_circles, 1)), -1, dtype=np.int64)
        wsum = np.zeros((self.n_vertices, max(self.max_circles, 1)), dtype=np.int64)
        rows = np.arange(self.n_vertices)
        for j in range(arc_circle.shape[1] - 1, -1, -1):
            rep[rows, arc_circle[:, j]] = j
            wsum[rows, arc_circle[:, j]] += weights[j]
        self.circle_rep = rep
        self.circle_essential = (wsum % 2 == 1) & (rep >= 0)
        if check:
            census = Counter(self.circle_essential.sum(axis=1).tolist())
            cls = link_class(diagram)
            bad = sorted(k for k in census if k != cls)
            if bad:
                raise EssentialCountError(
                    f"class-{cls} diagram has resolutions with {bad} essential circles "
                    f"(counts {dict(sorted(census.items()))}); every resolution must have exactly {cls}"
                )

    # -- accessors ---------------------------------------------------------

    def vertex_index(self, v) -> int:
        idx = 0
        for b in v:
            idx = (idx << 1) | int(b)
        return idx

    def vertex(self, idx: int) -> tuple[int, ...]:
        return _vertex_tuple(idx, self.n)

    def circle_ids(self, idx: int) -> list[int]:
        out = []
        for c in range(int(self.n_circles[idx])):
            j = int(self.circle_rep[idx, c])
            out.append(self.arc_ids[j] if j < self.n_arcs else -(j - self.n_arcs + 1))
        return out

    def resolution(self, v) -> Resolution:
        idx = v if isinstance(v, (int, np.integer)) else self.vertex_index(v)
        idx = int(idx)
        segs: dict[int, list[int]] = {}
        for j, a in enumerate(self.arc_ids):
            segs.setdefault(int(self.arc_circle[idx, j]), []).append(a)
        circles = []
        for c, cid in enumerate(self.circle_ids(idx)):
            circles.append(Circle(cid, bool(self.circle_essential[idx, c]), tuple(segs.get(c, ()))))
        return Resolution(self.vertex(idx), tuple(circles))

    def resolutions(self) -> Iterator[Resolution]:
        for idx in range(self.n_vertices):
            yield self.resolution(idx)

    @property
    def heights(self) -> np.ndarray:
        return np.array([bin(i).count("1") for i in range(self.n_vertices)], dtype=np.int64)

    @cached_property
    def edge_arrays(self) -> dict[str, np.ndarray]:
        """Vectorized edge data: source/target vertex, crossing, kind code, touched circles.

        ``touched_src``/``touched_tgt`` hold the participating circle positions
        (second column -1 when only one circle participates); ``corr`` maps every
        circle position at the source to its position at the target (-1 for
        touched circles).
        """
        n = self.n
        src_l, tgt_l, xing_l = [], [], []
        all_idx = np.arange(self.n_vertices, dtype=np.int64)
        for k in range(n):
            bit = 1 << (n - 1 - k)
            src = all_idx[(all_idx & bit) == 0]
            src_l.append(src)
            tgt_l.append(src | bit)
            xing_l.append(np.full(src.shape, k, dtype=np.int64))
        if n == 0:
            empty = np.zeros(0, dtype=np.int64)
            return dict(src=empty, tgt=empty, crossing=empty, kind=empty,
                        touched_src=np.zeros((0, 2), np.int64), touched_tgt=np.zeros((0, 2), np.int64),
                        corr=np.zeros((0, max(self.max_circles, 1)), np.int64))
        src = np.concatenate(src_l)
        tgt = np.concatenate(tgt_l)
        xing = np.concatenate(xing_l)
        order = np.lexsort((xing, src))
        src, tgt, xing = src[order], tgt[order], xing[order]
        kind = self.n_circles[tgt] - self.n_circles[src]
        leg_cols = np.array([[self.col_of[a] for a in x.legs] for x in self.diagram.crossings], dtype=np.int64)
        cols = leg_cols[xing]  # (E, 4)
        ts = np.sort(self.arc_circle[src[:, None], cols], axis=1)
        tt = np.sort(self.arc_circle[tgt[:, None], cols], axis=1)

        def two(t: np.ndarray) -> np.ndarray:
            lo = t[:, 0]
            hi = t[:, 3]
            return np.stack([lo, np.where(hi != lo, hi, -1)], axis=1)

        touched_src, touched_tgt = two(ts), two(tt)
        maxc = max(self.max_circles, 1)
        rep = self.circle_rep[src]  # (E, maxc)
        safe = np.where(rep >= 0, rep, 0)
        corr = self.arc_circle[tgt[:, None], safe]
        pos = np.arange(maxc)[None, :]
        valid = pos < self.n_circles[src][:, None]
        hit = (pos == touched_src[:, :1]) | (pos == touched_src[:, 1:2])
        corr = np.where(valid & ~hit, corr, -1)
        return dict(src=src, tgt=tgt, crossing=xing, kind=kind,
                    touched_src=touched_src, touched_tgt=touched_tgt, corr=corr)

    @property
    def n_edges(self) -> int:
        return len(self.edge_arrays["src"])

    def edges(self) -> Iterator[CubeEdge]:
        ea = self.edge_arrays
        for e in range(self.n_edges):
            yield self._edge(ea, e)

    def _edge(self, ea: dict[str, np.ndarray], e: int) -> CubeEdge:
        s, t = int(ea["src"][e]), int(ea["tgt"][e])
        ids_s, ids_t = self.circle_ids(s), self.circle_ids(t)
        ins = tuple(ids_s[p] for p in ea["touched_src"][e] if p >= 0)
        outs = tuple(ids_t[p] for p in ea["touched_tgt"][e] if p >= 0)
        ess = any(self.circle_essential[s, p] for p in ea["touched_src"][e] if p >= 0)
        corr = tuple((ids_s[c], ids_t[q]) for c, q in enumerate(ea["corr"][e][: len(ids_s)]) if q >= 0)
        return CubeEdge(self.vertex(s), self.vertex(t), int(ea["crossing"][e]), _KIND_CODE[int(ea["kind"][e])],
                        ins, outs, bool(ess), corr)

    def edge(self, source, crossing: int) -> CubeEdge:
        s = source if isinstance(source, (int, np.integer)) else self.vertex_index(source)
        ea = self.edge_arrays
        hits = np.nonzero((ea["src"] == s) & (ea["crossing"] == crossing))[0]
        if len(hits) == 0:
            raise ValueError("no such edge (crossing already 1-smoothed at source?)")
        return self._edge(ea, int(hits[0]))


def _trace_reference(d: Diagram) -> np.ndarray:
    n = d.n_crossings
    ids = d.arc_ids()
    col = {a: j for j, a in enumerate(ids)}
    out = np.zeros((1 << n, len(ids) + len(d.loops)), dtype=np.int64)
    for idx in range(1 << n):
        res = resolve(d, _vertex_tuple(idx, n))
        for c, circ in enumerate(res.circles):
            if circ.id >= 0:
                for a in circ.segments:
                    out[idx, col[a]] = c
            else:
                out[idx, len(ids) + (-circ.id - 1)] = c
    return out


def _trace_vectorized(d: Diagram) -> np.ndarray:
    """Label propagation over all vertices at once (shared-trace fast path)."""
    n = d.n_crossings
    ids = d.arc_ids()
    col = {a: j for j, a in enumerate(ids)}
    n_arcs = len(ids)
    nv = 1 << n
    label = np.tile(np.arange(n_arcs, dtype=np.int64), (nv, 1))
    rows = np.arange(nv)
    # Partner column of each arc end through the smoothing, as (column, partner column) per vertex.
    pairs = []
    for k, x in enumerate(d.crossings):
        bit = (rows >> (n - 1 - k)) & 1
        a, b, c, e = (col[t] for t in x.legs)
        # choice 0: a-b, c-e ; choice 1: a-e, b-c
        p1 = np.where(bit == 0, b, e)
        p2 = np.where(bit == 0, e, b)
        pairs.append((np.full(nv, a), p1))
        pairs.append((np.full(nv, c), p2))
    if n_arcs:
        lhs = np.stack([p[0] for p in pairs], axis=1)
        rhs = np.stack([p[1] for p in pairs], axis=1)
        while True:
            lv = label[rows[:, None], lhs]
            rv = label[rows[:, None], rhs]
            m = np.minimum(lv, rv)
            new = label.copy()
            np.minimum.at(new, (np.broadcast_to(rows[:, None], lhs.shape), lhs), m)
            np.minimum.at(new, (np.broadcast_to(rows[:, None], rhs.shape), rhs), m)
            # pointer jumping: label <- label[label]
            new = new[rows[:, None], new]
            if np.array_equal(new, label):
                break
            label = new
    is_root = label == np.arange(n_arcs)[None, :]
    rank = np.cumsum(is_root, axis=1) - 1
    circ = rank[rows[:, None], label] if n_arcs else np.zeros((nv, 0), dtype=np.int64)
    n_arc_circles = is_root.sum(axis=1)
    loops = n_arc_circles[:, None] + np.arange(len(d.loops))[None, :]
    return np.concatenate([circ, loops], axis=1).astype(np.int64)


def build_cube(d: Diagram, method: str = "fast", check: bool = True, max_n: int | None = None) -> ResolutionCube:
    """Resolve every vertex, classify edges, and enforce the essential-count condition.

    ``method="reference"`` resolves vertices one at a time via :func:`resolve`;
    ``"fast"`` traces all vertices together.  Both produce identical cubes.
    """
    cap = max_crossings() if max_n is None else max_n
    if d.n_crossings > cap:
        raise CubeTooLargeError(f"{d.n_crossings} crossings exceeds the cap of {cap} (set RP3KH_MAX_N to override)")
    if method == "reference":
        arr = _trace_reference(d)
    elif method == "fast":
        arr = _trace_vectorized(d)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ResolutionCube(d, arr, check=check)


def essential_census(d: Diagram) -> dict[int, int]:
    """Number of resolutions per essential-circle count."""
    cube = build_cube(d, check=False)
    return dict(Counter(cube.circle_essential.sum(axis=1).tolist()))


def edge_kind_census(cube: ResolutionCube) -> dict[str, int]:
    ea = cube.edge_arrays
    kinds = Counter(_KIND_CODE[int(k)] for k in ea["kind"])
    out = {MERGE: kinds.get(MERGE, 0), SPLIT: kinds.get(SPLIT, 0), ONE_TO_ONE: kinds.get(ONE_TO_ONE, 0)}
    if cube.n_edges:
        src = ea["src"]
        ts = ea["touched_src"]
        ess = cube.circle_essential[src, ts[:, 0]] | np.where(ts[:, 1] >= 0, cube.circle_essential[src, np.maximum(ts[:, 1], 0)], False)
        for code, name in _KIND_CODE.items():
            sel = ea["kind"] == code
            out[f"{name}_essential"] = int((sel & ess).sum())
            out[f"{name}_trivial"] = int((sel & ~ess).sum())
    else:
        for name in (MERGE, SPLIT, ONE_TO_ONE):
            out[f"{name}_essential"] = 0
            out[f"{name}_trivial"] = 0
    out["edges"] = cube.n_edges
    out["vertices"] = cube.n_vertices
    return out
