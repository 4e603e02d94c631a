"""Build diagrams from Morse words drawn in a square model of RP^2.

The square is the disk whose boundary points are identified antipodally.
With ``n`` points on the bottom edge and ``n`` on the top edge, taken
counterclockwise, top point ``j`` is identified with bottom point
``n + 1 - j`` (1-based).  Every passage through the boundary flips the
weight of the arc it lies on.

Strands are read bottom to top.  ``cross(i, +1)`` is the generator whose
over-strand runs from bottom-left to top-right at positions ``i, i + 1``;
with both strands oriented upward it is a positive crossing.
"""

from __future__ import annotations

from collections.abc import Iterable

from .diagram import Diagram, make_diagram, orient

__all__ = ["MorseBuilder", "braid_closure"]


class MorseBuilder:
    def __init__(self, n_bottom: int = 0):
        self._parent: list[int] = []
        self._flip: list[int] = []
        self.bottom = [self._token() for _ in range(n_bottom)]
        self.strands = list(self.bottom)
        self._legs: list[list[int]] = []
        self._incoming: list[tuple[int, int]] = []
        self._braid = True

    def _token(self) -> int:
        self._parent.append(len(self._parent))
        self._flip.append(0)
        return len(self._parent) - 1

    def _find(self, t: int) -> int:
        while self._parent[t] != t:
            self._parent[t] = self._parent[self._parent[t]]
            t = self._parent[t]
        return t

    def _join(self, a: int, b: int, flips: int = 0) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[rb] = ra
            self._flip[ra] += self._flip[rb]
        self._flip[ra] += flips

    def _check(self, i: int, width: int) -> None:
        if i < 0 or i + width > len(self.strands):
            raise IndexError(f"position {i} out of range for {len(self.strands)} strands")

    def cup(self, i: int) -> "MorseBuilder":
        """Open a new pair of strands at positions ``i, i + 1`` (0-based)."""
        if not 0 <= i <= len(self.strands):
            raise IndexError(f"cup position {i} out of range")
        t = self._token()
        self._braid = False
        self.strands[i:i] = [t, t]
        return self

    def cap(self, i: int) -> "MorseBuilder":
        self._check(i, 2)
        self._braid = False
        self._join(self.strands[i], self.strands[i + 1])
        del self.strands[i : i + 2]
        return self

    def cross(self, i: int, sign: int = 1) -> "MorseBuilder":
        self._check(i, 2)
        bl, br = self.strands[i], self.strands[i + 1]
        tl, tr = self._token(), self._token()
        if sign > 0:
            self._legs.append([br, tr, tl, bl])
            self._incoming.append((0, 3))
        else:
            self._legs.append([bl, br, tr, tl])
            self._incoming.append((0, 1))
        self.strands[i : i + 2] = [tl, tr]
        return self

    def sigma(self, word: Iterable[int]) -> "MorseBuilder":
        """Apply braid generators given as signed 1-based indices."""
        for g in word:
            if g == 0:
                raise ValueError("braid generators are nonzero integers")
            self.cross(abs(g) - 1, 1 if g > 0 else -1)
        return self

    def close(self, projective: bool = False, name: str | None = None, oriented: bool = True,
              marked: int | str | None = None, mark_bottom: int | None = None) -> Diagram:
        """Join the top strands to the bottom ones and return the diagram.

        ``projective`` routes strand ``j`` through the boundary to bottom
        point ``n + 1 - j``; otherwise strand ``j`` closes around the side
        onto bottom point ``j`` without meeting the boundary.

        Pure braid words get every strand oriented upward; words with cups
        or caps fall back to :func:`orient`.  ``mark_bottom`` marks the arc
        through bottom point ``mark_bottom`` (0-based), a spot that local
        moves inside the square leave in place.
        """
        n = len(self.bottom)
        if len(self.strands) != n:
            raise ValueError(f"{len(self.strands)} strands at the top but {n} at the bottom")
        for j, t in enumerate(self.strands):
            if projective:
                self._join(t, self.bottom[n - 1 - j], 1)
            else:
                self._join(t, self.bottom[j])
        ids: dict[int, int] = {}
        crossings = []
        for legs in self._legs:
            row = []
            for t in legs:
                r = self._find(t)
                row.append(ids.setdefault(r, len(ids) + 1))
            crossings.append(row)
        weights = {a: self._flip[r] % 2 for r, a in ids.items()}
        loops = []
        seen = set(ids)
        for t in range(len(self._parent)):
            r = self._find(t)
            if r not in seen:
                seen.add(r)
                loops.append(self._flip[r] % 2)
        loop_of = {}
        for t in range(len(self._parent)):
            r = self._find(t)
            if r not in ids and r not in loop_of:
                loop_of[r] = len(loop_of)
        if mark_bottom is not None:
            r = self._find(self.bottom[mark_bottom])
            marked = ids[r] if r in ids else f"L{loop_of[r]}"
        if oriented and self._braid and crossings:
            heads: dict[int, tuple[int, int]] = {}
            for k, (legs, inc) in enumerate(zip(crossings, self._incoming)):
                for pos in inc:
                    heads[legs[pos]] = (k, pos)
            ends: dict[int, list[tuple[int, int]]] = {}
            for k, legs in enumerate(crossings):
                for pos, a in enumerate(legs):
                    ends.setdefault(a, []).append((k, pos))
            orientation = {a: 1 if heads[a] == max(e) else -1 for a, e in ends.items()}
            return make_diagram(crossings, weights, loops, orientation=orientation,
                                marked=marked, name=name)
        d = make_diagram(crossings, weights, loops, marked=marked, name=name)
        return orient(d) if oriented and (crossings or loops) else d


def braid_closure(word: Iterable[int], n: int, projective: bool = False, name: str | None = None,
                  marked: int | str | None = None, mark_bottom: int | None = None) -> Diagram:
    return MorseBuilder(n).sigma(word).close(projective, name, marked=marked,
                                             mark_bottom=mark_bottom)
