"""Combinatorial link diagrams on RP^2 and the ``.rpd`` text format.

A diagram is a PD-style crossing list whose arcs carry a Z/2 weight: the
parity of the arc's intersections with the cross-cap line (the boundary
circle of the disk model, antipodal points identified).  Crossingless
components are stored as free loops.

Crossing legs are listed counterclockwise starting from the incoming
under-strand, so ``(a, c)`` is the under-strand and ``(b, d)`` the over-strand.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

__all__ = [
    "Arc",
    "Crossing",
    "Diagram",
    "DiagramError",
    "FreeLoop",
    "MissingOrientationError",
    "RpdSyntaxError",
    "components",
    "crossing_signs",
    "disjoint_union",
    "link_class",
    "mirror",
    "orient",
    "parse_rpd",
    "read_rpd",
    "serialize",
    "validate",
]


class DiagramError(ValueError):
    """Raised for structurally invalid diagrams or unsupported operations."""


class RpdSyntaxError(DiagramError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MissingOrientationError(DiagramError):
    pass


@dataclass(frozen=True)
class Arc:
    id: int
    weight: int = 0


@dataclass(frozen=True)
class Crossing:
    legs: tuple[int, int, int, int]
    index: int

    @property
    def under(self) -> tuple[int, int]:
        return self.legs[0], self.legs[2]

    @property
    def over(self) -> tuple[int, int]:
        return self.legs[1], self.legs[3]


@dataclass(frozen=True)
class FreeLoop:
    weight: int = 0


# An arc end is (crossing index, leg position).  The stored direction of an
# arc runs from its lexicographically smaller end to the larger one; an
# orientation entry of +1/-1 says whether the strand follows that direction.
End = tuple[int, int]


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...] = ()
    arcs: tuple[Arc, ...] = ()
    loops: tuple[FreeLoop, ...] = ()
    orientation: tuple[tuple[int, int], ...] | None = None
    marked: int | str | None = None  # arc id, or "L<k>" for the k-th free loop
    name: str | None = field(default=None, compare=False)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def weight(self, arc_id: int) -> int:
        return self._weights.get(arc_id, 0)

    @property
    def _weights(self) -> dict[int, int]:
        return {a.id: a.weight for a in self.arcs}

    def arc_ids(self) -> list[int]:
        return sorted(a.id for a in self.arcs)

    def arc_ends(self) -> dict[int, list[End]]:
        ends: dict[int, list[End]] = {}
        for x in self.crossings:
            for pos, arc in enumerate(x.legs):
                ends.setdefault(arc, []).append((x.index, pos))
        for lst in ends.values():
            lst.sort()
        return ends

    def orientation_map(self) -> dict[int, int]:
        if self.orientation is None:
            raise MissingOrientationError("diagram carries no orientation data")
        return dict(self.orientation)

    @property
    def oriented(self) -> bool:
        return self.orientation is not None

    def marked_loop(self) -> int | None:
        if isinstance(self.marked, str):
            return int(self.marked[1:])
        return None


def make_diagram(
    crossings: Iterable[Sequence[int]],
    weights: dict[int, int] | None = None,
    loops: Iterable[int] = (),
    orientation: dict[int, int] | None = None,
    marked: int | str | None = None,
    name: str | None = None,
) -> Diagram:
    """Build a diagram from raw leg lists; arcs are those referenced by crossings."""
    xs = tuple(Crossing(tuple(int(v) for v in legs), i) for i, legs in enumerate(crossings))
    weights = dict(weights or {})
    ids = sorted({a for x in xs for a in x.legs} | set(weights))
    arcs = tuple(Arc(a, weights.get(a, 0) % 2) for a in ids)
    orient_t = None if orientation is None else tuple(sorted(orientation.items()))
    if not arcs:
        orient_t = ()  # free loops carry no crossing signs, so any orientation is coherent
    return Diagram(xs, arcs, tuple(FreeLoop(w % 2) for w in loops), orient_t, marked, name)


# ---------------------------------------------------------------------------
# .rpd text format
# ---------------------------------------------------------------------------


def _int_token(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise RpdSyntaxError(f"expected integer {what}, got {tok!r}", line, col) from None


def _tokens(text: str) -> list[tuple[int, str, list[tuple[int, str]]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks: list[tuple[int, str]] = []
        col = 0
        for piece in body.split():
            col = body.index(piece, col)
            toks.append((col + 1, piece))
            col += len(piece)
        if toks:
            out.append((lineno, raw, toks))
    return out


def parse_rpd(text: str, name: str | None = None) -> Diagram:
    """Parse an ``.rpd`` document.

    Raises :class:`RpdSyntaxError` (with line/column) on malformed lines, and
    :class:`DiagramError` for duplicate weight declarations, arcs that do not
    appear exactly twice among the crossing legs, and undeclared marked points.
    """
    crossings: list[tuple[int, int, int, int]] = []
    weights: dict[int, int] = {}
    loops: list[int] = []
    orientation: dict[int, int] = {}
    marked: int | str | None = None
    marked_at: tuple[int, int] | None = None

    for lineno, _raw, toks in _tokens(text):
        col, head = toks[0]
        args = toks[1:]
        if head == "X":
            if len(args) != 4:
                raise RpdSyntaxError(f"crossing needs 4 legs, got {len(args)}", lineno, col)
            legs = tuple(_int_token(t, lineno, c, "arc id") for c, t in args)
            for (c, _), a in zip(args, legs):
                if a <= 0:
                    raise RpdSyntaxError("arc ids must be positive", lineno, c)
            crossings.append(legs)  # type: ignore[arg-type]
        elif head == "W":
            if len(args) != 2:
                raise RpdSyntaxError("weight line is 'W <arc> <0|1>'", lineno, col)
            a = _int_token(args[0][1], lineno, args[0][0], "arc id")
            w = _int_token(args[1][1], lineno, args[1][0], "weight")
            if w not in (0, 1):
                raise RpdSyntaxError("weight must be 0 or 1", lineno, args[1][0])
            if a in weights:
                raise DiagramError(f"line {lineno}: duplicate weight declaration for arc {a}")
            weights[a] = w
        elif head == "L":
            if len(args) != 1 or not args[0][1].startswith("w="):
                raise RpdSyntaxError("free loop line is 'L w=<0|1>'", lineno, col)
            w = _int_token(args[0][1][2:], lineno, args[0][0] + 2, "weight")
            if w not in (0, 1):
                raise RpdSyntaxError("weight must be 0 or 1", lineno, args[0][0] + 2)
            loops.append(w)
        elif head == "O":
            if len(args) != 2 or args[1][1] not in ("+", "-"):
                raise RpdSyntaxError("orientation line is 'O <arc> <+|->'", lineno, col)
            a = _int_token(args[0][1], lineno, args[0][0], "arc id")
            if a in orientation:
                raise DiagramError(f"line {lineno}: duplicate orientation for arc {a}")
            orientation[a] = 1 if args[1][1] == "+" else -1
        elif head == "M":
            if len(args) != 1:
                raise RpdSyntaxError("marked point line is 'M <arc>' or 'M L<k>'", lineno, col)
            if marked is not None:
                raise DiagramError(f"line {lineno}: at most one marked point")
            tok = args[0][1]
            if tok.startswith("L"):
                marked = "L" + str(_int_token(tok[1:], lineno, args[0][0] + 1, "loop index"))
            else:
                marked = _int_token(tok, lineno, args[0][0], "arc id")
            marked_at = (lineno, args[0][0])
        else:
            raise RpdSyntaxError(f"unknown declaration {head!r}", lineno, col)

    counts = Counter(a for legs in crossings for a in legs)
    bad = sorted(a for a, n in counts.items() if n != 2)
    if bad:
        raise DiagramError(f"arc(s) {bad} must appear exactly twice among crossing legs")
    stray = sorted(set(weights) - set(counts))
    if stray:
        raise DiagramError(f"weight declared for arc(s) {stray} not used by any crossing")
    if orientation and set(orientation) != set(counts):
        missing = sorted(set(counts) - set(orientation))
        extra = sorted(set(orientation) - set(counts))
        raise DiagramError(f"orientation must cover every arc (missing {missing}, unknown {extra})")
    if marked is not None:
        assert marked_at is not None
        if isinstance(marked, int) and marked not in counts:
            raise DiagramError(f"line {marked_at[0]}: marked arc {marked} is not declared")
        if isinstance(marked, str) and int(marked[1:]) >= len(loops):
            raise DiagramError(f"line {marked_at[0]}: marked loop {marked} does not exist")

    return make_diagram(
        crossings,
        weights,
        loops,
        orientation if orientation else None,
        marked,
        name,
    )


def read_rpd(path) -> Diagram:
    from pathlib import Path

    p = Path(path)
    return parse_rpd(p.read_text(encoding="utf-8"), name=p.stem)


def serialize(d: Diagram) -> str:
    """Byte-stable ``.rpd`` rendering of ``d``."""
    lines = [f"X {a} {b} {c} {e}" for (a, b, c, e) in (x.legs for x in d.crossings)]
    lines += [f"W {a.id} 1" for a in sorted(d.arcs, key=lambda a: a.id) if a.weight]
    lines += [f"L w={lp.weight}" for lp in d.loops]
    if d.orientation is not None:
        lines += [f"O {a} {'+' if s > 0 else '-'}" for a, s in sorted(d.orientation)]
    if d.marked is not None:
        lines.append(f"M {d.marked}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

# Through-strand partner of each leg position: a<->c, b<->d.
_STRAIGHT = (2, 3, 0, 1)


def _strand_walk(d: Diagram) -> list[list[tuple[int, End, End]]]:
    """Walk link components through crossings.

    Returns one list per component of ``(arc, tail_end, head_end)`` in travel
    order.  Arcs whose ends are malformed are skipped (``validate`` reports them).
    """
    ends = d.arc_ends()
    legs = {x.index: x.legs for x in d.crossings}
    seen: set[int] = set()
    comps = []
    for start in sorted(ends):
        if start in seen or len(ends[start]) != 2:
            continue
        comp = []
        arc, tail = start, ends[start][0]
        while arc not in seen:
            seen.add(arc)
            pair = ends[arc]
            if len(pair) != 2:
                break
            head = pair[1] if pair[0] == tail else pair[0]
            if pair[0] == pair[1]:
                break
            comp.append((arc, tail, head))
            xi, pos = head
            nxt_pos = _STRAIGHT[pos]
            nxt = legs[xi][nxt_pos]
            tail = (xi, nxt_pos)
            arc = nxt
        comps.append(comp)
    return comps


def components(d: Diagram) -> list[list[int]]:
    """Arc ids of each crossing-carrying link component, in travel order."""
    return [[arc for arc, _, _ in comp] for comp in _strand_walk(d)]


def link_class(d: Diagram) -> int:
    """Homology class in H_1(RP^3) = Z/2: total arc weight plus loop weights, mod 2."""
    return (sum(a.weight for a in d.arcs) + sum(lp.weight for lp in d.loops)) % 2


def _heads(d: Diagram) -> dict[int, End]:
    """Head end of each arc under the diagram's orientation."""
    orient_map = d.orientation_map()
    ends = d.arc_ends()
    return {a: (e[1] if orient_map.get(a, 1) > 0 else e[0]) for a, e in ends.items()}


def _incoming(d: Diagram) -> dict[End, bool]:
    heads = _heads(d)
    ends = d.arc_ends()
    inc: dict[End, bool] = {}
    for a, pair in ends.items():
        for e in pair:
            inc[e] = e == heads[a]
    return inc


def validate(d: Diagram, check_resolutions: bool = True) -> list[str]:
    """Return a list of human-readable violations; empty means valid.

    Besides the combinatorial invariants this runs the necessary condition
    that every resolution has no essential circle (class 0) or exactly one
    (class 1).  That part builds all resolutions, so it respects the crossing
    cap in :mod:`rp3kh.cube`.
    """
    out: list[str] = []
    ids = [a.id for a in d.arcs]
    dup = sorted(a for a, n in Counter(ids).items() if n > 1)
    if dup:
        out.append(f"duplicate-arc: arc(s) {dup} declared more than once")
    for a in d.arcs:
        if a.weight not in (0, 1):
            out.append(f"bad-weight: arc {a.id} has weight {a.weight}")
    for i, lp in enumerate(d.loops):
        if lp.weight not in (0, 1):
            out.append(f"bad-weight: loop L{i} has weight {lp.weight}")
    if [x.index for x in d.crossings] != list(range(len(d.crossings))):
        out.append("bad-index: crossing indices must be 0..N-1 in order")
    counts = Counter(a for x in d.crossings for a in x.legs)
    declared = set(ids)
    for a in sorted(set(counts) - declared):
        out.append(f"undeclared-arc: arc {a} is used by a crossing but not declared")
    for a in sorted(declared):
        n = counts.get(a, 0)
        if n == 0:
            out.append(f"isolated-arc: arc {a} belongs to no crossing")
        elif n == 1:
            out.append(f"dangling-arc: arc {a} appears once among crossing legs")
        elif n > 2:
            out.append(f"overused-arc: arc {a} appears {n} times among crossing legs")
    if d.marked is not None:
        lp = d.marked_loop()
        if lp is not None:
            if not 0 <= lp < len(d.loops):
                out.append(f"bad-marked: loop {d.marked} does not exist")
        elif d.marked not in declared:
            out.append(f"bad-marked: arc {d.marked} is not declared")
    if d.orientation is not None and not out:
        omap = dict(d.orientation)
        if set(omap) != declared:
            out.append("orientation: orientation must cover exactly the declared arcs")
        elif any(s not in (1, -1) for s in omap.values()):
            out.append("orientation: entries must be +1 or -1")
        else:
            inc = _incoming(d)
            for x in d.crossings:
                i = x.index
                if inc[(i, 0)] == inc[(i, 2)] or inc[(i, 1)] == inc[(i, 3)]:
                    out.append(f"orientation: strands through crossing {i} are not coherently oriented")
    if out or not check_resolutions:
        return out

    from .cube import essential_census

    cls = link_class(d)
    counts_seen = essential_census(d)
    expected = cls
    wrong = sorted(k for k in counts_seen if k != expected)
    if wrong:
        out.append(
            f"essential-count: class {cls} diagram has resolutions with "
            f"{', '.join(str(k) for k in wrong)} essential circle(s); expected {expected} in every resolution"
        )
    return out


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


def _orientation_from_heads(d_new: Diagram, heads_by_leg: dict[int, End]) -> tuple[tuple[int, int], ...]:
    ends = d_new.arc_ends()
    return tuple(sorted((a, 1 if heads_by_leg[a] == e[1] else -1) for a, e in ends.items()))


def mirror(d: Diagram) -> Diagram:
    """Switch every crossing; the new incoming under-strand leads each leg list.

    With orientation data the old over-strand's incoming end becomes leg ``a``;
    without it the rotation ``(d, a, b, c)`` is used, which swaps the 0- and
    1-smoothings exactly as the oriented rule does.
    """
    inc = _incoming(d) if d.oriented else None
    new_legs = []
    # Old leg position -> new position at the same crossing.
    moved: dict[int, tuple[int, int, int, int]] = {}
    for x in d.crossings:
        a, b, c, e = x.legs
        if inc is None or inc[(x.index, 3)]:
            new_legs.append((e, a, b, c))
            moved[x.index] = (1, 2, 3, 0)
        else:
            new_legs.append((b, c, e, a))
            moved[x.index] = (3, 0, 1, 2)
    out = replace(d, crossings=tuple(Crossing(l, i) for i, l in enumerate(new_legs)), orientation=None)
    if inc is not None:
        heads = _heads(d)
        new_heads = {a: (h[0], moved[h[0]][h[1]]) for a, h in heads.items()}
        out = replace(out, orientation=_orientation_from_heads(out, new_heads))
    return out


def crossing_signs(d: Diagram) -> tuple[int, int]:
    """Return ``(n_plus, n_minus)`` under the right-hand rule.

    A crossing is positive when the over-strand enters at leg ``d`` while the
    under-strand enters at ``a`` (equivalently: over enters at ``b`` while
    under enters at ``c``).
    """
    if not d.oriented:
        raise MissingOrientationError("crossing signs need an oriented diagram")
    inc = _incoming(d)
    pos = 0
    for x in d.crossings:
        i = x.index
        if inc[(i, 0)] == inc[(i, 3)]:
            pos += 1
    return pos, len(d.crossings) - pos


def writhe(d: Diagram) -> int:
    p, m = crossing_signs(d)
    return p - m


def orient(d: Diagram, reverse: Iterable[int] = ()) -> Diagram:
    """Return ``d`` with a coherent orientation and normalized leg lists.

    Each component runs along the travel order found by walking from its
    smallest arc (reversed for component indices in ``reverse``).  Crossings
    whose leg ``a`` ends up outgoing are rotated by two positions, which keeps
    the under-strand and both smoothings unchanged.
    """
    rev = set(reverse)
    heads: dict[int, End] = {}
    for k, comp in enumerate(_strand_walk(d)):
        for arc, tail, head in comp:
            heads[arc] = tail if k in rev else head
    if set(heads) != {a for x in d.crossings for a in x.legs}:
        raise DiagramError("cannot orient a diagram with malformed arcs")
    moved: dict[int, tuple[int, int, int, int]] = {}
    new_legs = []
    incoming = {h for h in heads.values()}
    for x in d.crossings:
        if (x.index, 0) in incoming:
            new_legs.append(x.legs)
            moved[x.index] = (0, 1, 2, 3)
        else:
            a, b, c, e = x.legs
            new_legs.append((c, e, a, b))
            moved[x.index] = (2, 3, 0, 1)
    out = replace(d, crossings=tuple(Crossing(l, i) for i, l in enumerate(new_legs)), orientation=None)
    new_heads = {a: (h[0], moved[h[0]][h[1]]) for a, h in heads.items()}
    return replace(out, orientation=_orientation_from_heads(out, new_heads))


def relabel(d: Diagram, mapping: dict[int, int]) -> Diagram:
    """Rename arcs via ``mapping`` (must be injective on the diagram's arcs)."""
    xs = tuple(Crossing(tuple(mapping[a] for a in x.legs), x.index) for x in d.crossings)  # type: ignore[misc]
    arcs = tuple(sorted((Arc(mapping[a.id], a.weight) for a in d.arcs), key=lambda a: a.id))
    out = replace(d, crossings=xs, arcs=arcs, orientation=None)
    if d.oriented:
        heads = _heads(d)
        out = replace(out, orientation=_orientation_from_heads(out, {mapping[a]: h for a, h in heads.items()}))
    if isinstance(d.marked, int):
        out = replace(out, marked=mapping[d.marked])
    return out


def disjoint_union(d1: Diagram, d2: Diagram) -> Diagram:
    """Place ``d2`` beside ``d1`` (arcs of ``d2`` are shifted past those of ``d1``).

    The marked point of ``d1`` wins when both carry one.  Orientation survives
    only if both inputs are oriented.
    """
    if link_class(d1) == 1 and link_class(d2) == 1:
        raise DiagramError("disjoint union of two class-1 diagrams is not realizable on one RP^2")
    shift = max((a.id for a in d1.arcs), default=0)
    d2s = relabel(d2, {a.id: a.id + shift for a in d2.arcs})
    n1 = len(d1.crossings)
    xs = d1.crossings + tuple(Crossing(x.legs, x.index + n1) for x in d2s.crossings)
    arcs = d1.arcs + d2s.arcs
    loops = d1.loops + d2s.loops
    marked = d1.marked
    if marked is None and d2s.marked is not None:
        marked = d2s.marked if isinstance(d2s.marked, int) else f"L{d2s.marked_loop() + len(d1.loops)}"
    out = Diagram(xs, arcs, loops, None, marked)
    if d1.oriented and d2s.oriented:
        h1 = _heads(d1)
        h2 = {a: (i + n1, p) for a, (i, p) in _heads(d2s).items()}
        out = replace(out, orientation=_orientation_from_heads(out, {**h1, **h2}))
    return out


def with_marked(d: Diagram, marked: int | str | None) -> Diagram:
    return replace(d, marked=marked)


def default_marked(d: Diagram) -> int | str | None:
    """The smallest arc id, else the first free loop, else ``None``."""
    if d.arcs:
        return min(a.id for a in d.arcs)
    if d.loops:
        return "L0"
    return None
