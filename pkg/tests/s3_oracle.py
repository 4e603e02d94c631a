"""Brute-force Khovanov homology over F_2 for planar PD codes.

Independent of the library: its own smoothing, circle tracing, generator
enumeration and elimination.  Input is a list of crossings ``(a, b, c, d)``
with legs counterclockwise from the incoming under-strand, plus a sign per
crossing.  The 0-smoothing joins a-b and c-d, the 1-smoothing joins a-d and
b-c.  Only meant for a handful of crossings.
"""

from __future__ import annotations

from itertools import product


def _circles(pd, state):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for (a, b, c, d), s in zip(pd, state):
        if s == 0:
            union(a, b)
            union(c, d)
        else:
            union(a, d)
            union(b, c)
    roots = sorted({find(x) for x in parent})
    return [find(x) for x in roots], find


def _rank(rows):
    """Rank of a list of int bitmasks over F_2."""
    basis = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return len(basis)


def khovanov(pd, signs, reduced_arc=None):
    """Return {(i, j): rank} for the Khovanov homology over F_2.

    With ``reduced_arc`` the circle through that arc may only carry ``1``
    (the quotient by ``X`` on the marked circle); j is then shifted so the
    unknot sits at j = 0.
    """
    n = len(pd)
    n_plus = sum(1 for s in signs if s > 0)
    n_minus = n - n_plus
    gens = {}
    index = {}
    for state in product((0, 1), repeat=n):
        roots, find = _circles(pd, state)
        marked = find(reduced_arc) if reduced_arc is not None else None
        for labels in product((1, -1), repeat=len(roots)):
            lab = dict(zip(roots, labels))
            if marked is not None and lab[marked] == -1:
                continue
            h = sum(state)
            j = sum(labels) + h + n_plus - 2 * n_minus - (1 if marked is not None else 0)
            key = (state, tuple(sorted(lab.items())))
            gens.setdefault(h, []).append((key, j, lab, find))
            index[key] = len(gens[h]) - 1

    def image(state, lab, k):
        """d applied along the edge that flips crossing k from 0 to 1."""
        tgt = state[:k] + (1,) + state[k + 1:]
        _, f0 = _circles(pd, state)
        roots1, f1 = _circles(pd, tgt)
        marked = f1(reduced_arc) if reduced_arc is not None else None
        a, b, c, d = pd[k]
        src_circles = {f0(a), f0(b), f0(c), f0(d)}
        tgt_circles = {f1(a), f1(b), f1(c), f1(d)}
        # untouched circles keep their labels, matched by any arc they contain
        base = {}
        for r in roots1:
            if r in tgt_circles:
                continue
            base[r] = lab[f0(r)]
        outs = []
        if len(src_circles) == 2 and len(tgt_circles) == 1:
            x, y = (lab[s] for s in src_circles)
            (t,) = tgt_circles
            if x == 1 and y == 1:
                outs.append({**base, t: 1})
            elif x * y == -1:
                outs.append({**base, t: -1})
        elif len(src_circles) == 1 and len(tgt_circles) == 2:
            (s,) = src_circles
            t1, t2 = sorted(tgt_circles)
            if lab[s] == 1:
                outs += [{**base, t1: 1, t2: -1}, {**base, t1: -1, t2: 1}]
            else:
                outs.append({**base, t1: -1, t2: -1})
        res = []
        for o in outs:
            if marked is not None and o[marked] == -1:
                continue
            res.append((tgt, tuple(sorted(o.items()))))
        return res

    out = {}
    ranks_out = {}
    for h in range(n + 1):
        for j in sorted({g[1] for g in gens.get(h, [])}):
            rows = []
            for (state, labs), gj, lab, _ in gens[h]:
                if gj != j:
                    continue
                mask = 0
                for k in range(n):
                    if state[k] == 0:
                        for key in image(state, lab, k):
                            mask ^= 1 << index[key]
                rows.append(mask)
            ranks_out[(h, j)] = _rank(rows)
    for h in range(n + 1):
        for j in sorted({g[1] for g in gens.get(h, [])}):
            dim = sum(1 for g in gens[h] if g[1] == j)
            r = dim - ranks_out.get((h, j), 0) - ranks_out.get((h - 1, j), 0)
            if r:
                out[(h - n_minus, j)] = r
    return out


def by_height(bigraded):
    out = {}
    for (i, _), r in bigraded.items():
        out[i] = out.get(i, 0) + r
    return dict(sorted(out.items()))


# Hand-written PD codes (legs ccw from the incoming under-strand).
LEFT_TREFOIL = ([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)], [-1, -1, -1])
RIGHT_TREFOIL = ([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)], [1, 1, 1])
FIGURE_EIGHT = ([(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)], [1, 1, -1, -1])
HOPF = ([(4, 1, 3, 2), (2, 3, 1, 4)], [1, 1])
