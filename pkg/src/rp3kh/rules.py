"""Local algebra: circle modules and merge/split rule tables over F_2.

Circle types are ``"T"`` (trivial) and ``"E"`` (essential).  Merge rules are
stored with the essential factor first, i.e. under keys ``("T", "T")`` and
``("E", "T")``; split rules under ``"T"`` (output ``T x T``) and ``"E"``
(output ``E x T``).  Images are F_2 sums, stored as sorted tuples without
repeats.  1-to-1 bifurcations always carry the zero map.
"""

from __future__ import annotations

import functools
import itertools
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "CircleModule",
    "RuleError",
    "RuleTable",
    "THEORIES",
    "block_decompose",
    "builtin",
    "check_table",
    "format_rule_file",
    "load_rule_file",
    "parse_rule_text",
]


class RuleError(ValueError):
    pass


Term = tuple[str, ...]


def f2_sum(terms: Iterable) -> tuple:
    """Reduce a multiset of terms mod 2 and return it sorted."""
    c = Counter(terms)
    return tuple(sorted(t for t, n in c.items() if n % 2))


@dataclass(frozen=True)
class CircleModule:
    name: str
    generators: tuple[str, ...]
    deg: tuple[int, ...]
    k: tuple[int, ...]
    killed: tuple[str, ...] = ()  # generators sent to zero in the reduced quotient
    essential: bool = False

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, g: str) -> int:
        return self.generators.index(g)

    def grading(self, g: str) -> tuple[int, int]:
        i = self.index(g)
        return self.deg[i], self.k[i]

    def reduced(self) -> "CircleModule":
        keep = [i for i, g in enumerate(self.generators) if g not in self.killed]
        return CircleModule(
            self.name + "_r",
            tuple(self.generators[i] for i in keep),
            tuple(self.deg[i] for i in keep),
            tuple(self.k[i] for i in keep),
            (),
            self.essential,
        )


V = CircleModule("V", ("1", "X"), (1, -1), (0, 0), ("X",))
VBAR = CircleModule("Vbar", ("1b", "Xb"), (1, -1), (1, -1), ("Xb",), essential=True)
V_INST = CircleModule("V", ("v+", "v-"), (1, -1), (0, 0), ("v-",))
W = CircleModule("W", ("w+", "w-", "w+'", "w-'"), (1, -1, 1, -1), (1, -1, 1, -1), ("w-", "w-'"), essential=True)
V0 = CircleModule("V0", ("u0", "u1"), (0, 0), (0, 0))


@dataclass(frozen=True)
class RuleTable:
    name: str
    trivial: CircleModule
    essential: CircleModule | None
    merge: Mapping[tuple[str, str], Mapping[tuple[str, str], tuple[str, ...]]]
    split: Mapping[str, Mapping[str, tuple[tuple[str, str], ...]]]
    extra: CircleModule | None = None  # tensor factor carried by every vertex (identity on edges)
    reduced: bool = False
    source: str = field(default="builtin", compare=False)

    def module(self, ctype: str, marked: bool = False) -> CircleModule:
        m = self.trivial if ctype == "T" else self.essential
        if m is None:
            raise RuleError(f"theory {self.name} has no essential-circle module")
        return m.reduced() if marked else m

    def merge_image(self, ta: str, ga: str, tb: str, gb: str) -> tuple[str, ...]:
        """Image of ``ga (x) gb`` where ``ga`` lives on a circle of type ``ta``."""
        if ta == "T" and tb == "E":
            ta, ga, tb, gb = tb, gb, ta, ga
        return tuple(self.merge[(ta, tb)].get((ga, gb), ()))

    def split_image(self, t: str, g: str) -> tuple[tuple[str, str], ...]:
        return tuple(self.split[t].get(g, ()))

    def merge_out_type(self, ta: str, tb: str) -> str:
        return "E" if "E" in (ta, tb) else "T"

    def with_reduced(self, reduced: bool = True) -> "RuleTable":
        return replace(self, reduced=reduced)

    def rename(self, mapping: Mapping[str, str], name: str | None = None,
               trivial: CircleModule | None = None, essential: CircleModule | None = None) -> "RuleTable":
        """Rename generators in every rule (modules must be supplied for the new alphabet)."""
        merge = {
            key: {(mapping[a], mapping[b]): tuple(sorted(mapping[x] for x in img)) for (a, b), img in rules.items()}
            for key, rules in self.merge.items()
        }
        split = {
            key: {mapping[g]: tuple(sorted((mapping[x], mapping[y]) for x, y in img)) for g, img in rules.items()}
            for key, rules in self.split.items()
        }
        return replace(self, name=name or self.name, merge=merge, split=split,
                       trivial=trivial or self.trivial, essential=essential or self.essential)

    def same_rules(self, other: "RuleTable") -> bool:
        def norm_m(t: RuleTable):
            return {k: {g: v for g, v in r.items() if v} for k, r in t.merge.items() if any(r.values())}

        def norm_s(t: RuleTable):
            return {k: {g: v for g, v in r.items() if v} for k, r in t.split.items() if any(r.values())}

        return (
            norm_m(self) == norm_m(other)
            and norm_s(self) == norm_s(other)
            and self.trivial.generators == other.trivial.generators
            and (self.essential.generators if self.essential else None)
            == (other.essential.generators if other.essential else None)
        )


# ---------------------------------------------------------------------------
# Builtin tables
# ---------------------------------------------------------------------------


def _frob_tt(one: str, x: str):
    merge = {(one, one): (one,), (one, x): (x,), (x, one): (x,), (x, x): ()}
    split = {one: f2_sum([(one, x), (x, one)]), x: ((x, x),)}
    return merge, split


def _kh0() -> RuleTable:
    m, s = _frob_tt("1", "X")
    return RuleTable("KH0", V, None, {("T", "T"): m}, {"T": s})


def _kh_class1() -> RuleTable:
    m, s = _frob_tt("1", "X")
    em = {(y, "1"): (y,) for y in ("1b", "Xb")} | {(y, "X"): () for y in ("1b", "Xb")}
    es = {y: ((y, "X"),) for y in ("1b", "Xb")}
    return RuleTable("KH-CLASS1", V, VBAR, {("T", "T"): m, ("E", "T"): em}, {"T": s, "E": es})


def _kh1_class1() -> RuleTable:
    m, s = _frob_tt("1", "X")
    em = {("1b", "1"): ("1b",), ("Xb", "1"): ("Xb",), ("1b", "X"): ("Xb",), ("Xb", "X"): ()}
    es = {"1b": f2_sum([("1b", "X"), ("Xb", "1")]), "Xb": (("Xb", "X"),)}
    return RuleTable("KH1-CLASS1", V, VBAR, {("T", "T"): m, ("E", "T"): em}, {"T": s, "E": es})


def _inst0() -> RuleTable:
    m, s = _frob_tt("v+", "v-")
    return RuleTable("INST0", V_INST, None, {("T", "T"): m}, {"T": s}, extra=V0)


def _inst1() -> RuleTable:
    m, s = _frob_tt("v+", "v-")
    em = {
        ("w+", "v+"): ("w+",), ("w-", "v+"): ("w-",), ("w+'", "v+"): ("w+'",), ("w-'", "v+"): ("w-'",),
        ("w+", "v-"): ("w-",), ("w-", "v-"): (), ("w+'", "v-"): ("w-'",), ("w-'", "v-"): (),
    }
    es = {
        "w+": f2_sum([("w+", "v-"), ("w-", "v+")]),
        "w-": (("w-", "v-"),),
        "w+'": f2_sum([("w+'", "v-"), ("w-'", "v+")]),
        "w-'": (("w-'", "v-"),),
    }
    return RuleTable("INST1", V_INST, W, {("T", "T"): m, ("E", "T"): em}, {"T": s, "E": es})


_BUILDERS = {
    "KH0": _kh0,
    "KH-CLASS1": _kh_class1,
    "KH1-CLASS1": _kh1_class1,
    "INST0": _inst0,
    "INST1": _inst1,
}
THEORIES = tuple(_BUILDERS) + tuple(f"{t}-R" for t in _BUILDERS)


@functools.lru_cache(maxsize=None)
def builtin(theory: str) -> RuleTable:
    """Return a validated builtin table; a ``-R`` suffix selects the reduced variant.

    Tables are validated once and shared; treat them as read-only.
    """
    reduced = theory.endswith("-R")
    base = theory[:-2] if reduced else theory
    if base not in _BUILDERS:
        raise RuleError(f"unknown theory {theory!r}; expected one of {', '.join(THEORIES)}")
    table = _BUILDERS[base]()
    check_table(table)
    return table.with_reduced(reduced) if reduced else table


# ---------------------------------------------------------------------------
# Local consistency checks
# ---------------------------------------------------------------------------

# Formal elements are dicts {labels tuple: 1} over an ordered list of circle types.


def _apply_merge(t: RuleTable, types: list[str], elem: Counter, i: int, j: int):
    """Merge circles i and j; the result takes position min(i, j)."""
    out: Counter = Counter()
    lo, hi = min(i, j), max(i, j)
    for labels, n in elem.items():
        for g in t.merge_image(types[i], labels[i], types[j], labels[j]):
            new = list(labels)
            new[lo] = g
            del new[hi]
            out[tuple(new)] += n
    new_types = list(types)
    new_types[lo] = t.merge_out_type(types[i], types[j])
    del new_types[hi]
    return new_types, Counter({k: v % 2 for k, v in out.items() if v % 2})


def _apply_split(t: RuleTable, types: list[str], elem: Counter, i: int):
    """Split circle i; the essential (or first) output stays at i, the new trivial circle is appended."""
    out: Counter = Counter()
    for labels, n in elem.items():
        for a, b in t.split_image(types[i], labels[i]):
            new = list(labels)
            new[i] = a
            out[tuple(new) + (b,)] += n
    return types + ["T"], Counter({k: v % 2 for k, v in out.items() if v % 2})


def _basis(t: RuleTable, types: list[str]):
    mods = [t.module(ty) for ty in types]
    for labels in itertools.product(*(m.generators for m in mods)):
        yield labels


def _permute(elem: Counter, perm: list[int]) -> Counter:
    return Counter({tuple(k[p] for p in perm): v for k, v in elem.items()})


def _typings(n: int, allow_essential: bool):
    yield ["T"] * n
    if allow_essential:
        for i in range(n):
            yield ["T"] * i + ["E"] + ["T"] * (n - i - 1)


def square_failures(t: RuleTable) -> list[str]:
    """Enumerate commuting-square shapes on at most three circles.

    Each shape is a pair of cube paths between the same two resolutions; over
    F_2 the composites must agree.  Shapes covered: merge-merge
    (associativity), split-split (coassociativity), merge-then-split versus
    split-then-merge (Frobenius relations), and split-then-merge against a
    1-to-1 path (the composite must vanish on trivial circles).
    """
    fails: list[str] = []
    ess = t.essential is not None

    def one(types, labels):
        return types, Counter({labels: 1})

    # Associativity: three circles into one, either pairing first.
    for types in _typings(3, ess):
        for labels in _basis(t, types):
            ty, e = one(types, labels)
            ta, a = _apply_merge(t, ty, e, 0, 1)
            ta, a = _apply_merge(t, ta, a, 0, 1)
            tb, b = _apply_merge(t, ty, e, 1, 2)
            tb, b = _apply_merge(t, tb, b, 0, 1)
            if a != b:
                fails.append(f"merge associativity fails on {list(zip(types, labels))}")
    # Commutativity of trivial merges.
    for labels in _basis(t, ["T", "T"]):
        _, a = _apply_merge(t, ["T", "T"], Counter({labels: 1}), 0, 1)
        _, b = _apply_merge(t, ["T", "T"], Counter({labels[::-1]: 1}), 0, 1)
        if a != b:
            fails.append(f"trivial merge is not commutative on {labels}")
    # Coassociativity: split twice, splitting either output second.
    for types in _typings(1, ess):
        for labels in _basis(t, types):
            ty, e = one(types, labels)
            t1, s1 = _apply_split(t, ty, e, 0)  # (c, n1)
            ta, a = _apply_split(t, t1, s1, 0)  # (c, n1, n2)
            tb, b = _apply_split(t, t1, s1, 1)  # (c, n1, n1')
            if a != b and a != _permute(b, [0, 2, 1]):
                fails.append(f"split coassociativity fails on {list(zip(types, labels))}")
    # Cocommutativity of trivial splits.
    for labels in _basis(t, ["T"]):
        _, a = _apply_split(t, ["T"], Counter({labels: 1}), 0)
        if a != _permute(a, [1, 0]):
            fails.append(f"trivial split is not cocommutative on {labels}")
    # Frobenius: merge(x, y) then split  ==  split x then merge its new piece with y
    #            ==  split y then merge its new piece with x.
    for types in _typings(2, ess):
        for labels in _basis(t, types):
            ty, e = one(types, labels)
            tm, m = _apply_merge(t, ty, e, 0, 1)
            tl, lhs = _apply_split(t, tm, m, 0)  # (merged, new)
            # split circle 0 into (0, new); merge new with circle 1 -> (0, merged)
            t2, s = _apply_split(t, ty, e, 0)
            t2, r1 = _apply_merge(t, t2, s, 1, 2)
            # split circle 1 into (1, new); merge circle 0 with new piece -> (merged, 1)
            t3, s3 = _apply_split(t, ty, e, 1)
            t3, r2 = _apply_merge(t, t3, s3, 0, 2)
            for tr, r, desc in ((t2, r1, "first"), (t3, r2, "second")):
                aligned = r if tr == tl else _permute(r, [1, 0])
                if lhs != aligned:
                    fails.append(f"Frobenius relation (split {desc} factor) fails on {list(zip(types, labels))}")
    # Split then merge back must vanish on trivial circles (paired with a 1-to-1 path).
    for labels in _basis(t, ["T"]):
        ty, s = _apply_split(t, ["T"], Counter({labels: 1}), 0)
        _, m = _apply_merge(t, ty, s, 0, 1)
        if m:
            fails.append(f"merge after split is nonzero on trivial {labels[0]}")
    return fails


def quotient_failures(t: RuleTable) -> list[str]:
    """The reduced quotient needs the killed generators on the marked circle to span a subcomplex."""
    fails = []
    types_avail = ["T", "E"] if t.essential is not None else ["T"]
    for ta in types_avail:
        for tb in ["T"]:
            for ga in t.module(ta).generators:
                for gb in t.module(tb).generators:
                    out_mod = t.module(t.merge_out_type(ta, tb))
                    img = t.merge_image(ta, ga, tb, gb)
                    for marked_g, mod in ((ga, t.module(ta)), (gb, t.module(tb))):
                        if marked_g in mod.killed and any(g not in out_mod.killed for g in img):
                            fails.append(f"merge {ta}x{tb}: {ga}*{gb} leaves the reduced subcomplex")
        mod = t.module(ta)
        for g in mod.killed:
            for a, b in t.split_image(ta, g):
                if a not in mod.killed or b not in t.trivial.killed:
                    fails.append(f"split {ta}: {g} leaves the reduced subcomplex")
    return fails


def lint_failures(t: RuleTable) -> list[str]:
    fails = []
    one = t.trivial.generators[0]
    for g in t.trivial.generators:
        if t.merge_image("T", g, "T", one) != (g,):
            fails.append(f"unit axiom: merging {g} with {one} must return {g}")
    if t.essential is not None:
        for g in t.essential.generators:
            if t.merge_image("E", g, "T", one) != (g,):
                fails.append(f"unit axiom: merging essential {g} with {one} must return {g}")
    return fails


def arithmetic_failures(t: RuleTable) -> list[str]:
    fails = []
    for key in t.merge:
        if key not in (("T", "T"), ("E", "T")):
            fails.append(f"merge of {key} violates essential-count arithmetic")
    for key in t.split:
        if key not in ("T", "E"):
            fails.append(f"split of {key} violates essential-count arithmetic")
    if t.essential is None and (("E", "T") in t.merge or "E" in t.split):
        fails.append("essential rules given without an essential module")
    for (ta, tb), rules in t.merge.items():
        out = t.module(t.merge_out_type(ta, tb)).generators
        for (a, b), img in rules.items():
            if a not in t.module(ta).generators or b not in t.module(tb).generators or any(g not in out for g in img):
                fails.append(f"merge {ta}x{tb}: {a}*{b} -> {img} uses generators outside the modules")
    for ty, rules in t.split.items():
        for g, img in rules.items():
            if g not in t.module(ty).generators or any(
                x not in t.module(ty).generators or y not in t.trivial.generators for x, y in img
            ):
                fails.append(f"split {ty}: {g} -> {img} uses generators outside the modules")
    return fails


def check_table(t: RuleTable) -> None:
    fails = arithmetic_failures(t)
    if not fails:
        fails = lint_failures(t) + square_failures(t) + quotient_failures(t)
    if fails:
        raise RuleError(f"rule table {t.name} rejected:\n  " + "\n  ".join(fails))


# ---------------------------------------------------------------------------
# Rule files
# ---------------------------------------------------------------------------

_MERGE_RE = re.compile(r"^merge\s+(\S+?)\s*x\s*(\S+?)\s*->\s*(\S+?)\s*:\s*(\S+)\s*\*\s*(\S+)\s*->\s*(.+)$")
_SPLIT_RE = re.compile(r"^split\s+(\S+?)\s*->\s*(\S+?)\s*x\s*(\S+?)\s*:\s*(\S+)\s*->\s*(.+)$")
_MODULE_RE = re.compile(r"^module\s+(\S+)\s+(trivial|essential|extra)\s*:\s*(.+)$")


def _parse_ints(text: str, n: int, lineno: int) -> tuple[int, ...]:
    vals = tuple(int(v) for v in text.split())
    if len(vals) != n:
        raise RuleError(f"line {lineno}: expected {n} integers")
    return vals


def parse_rule_text(text: str, source: str = "<text>") -> RuleTable:
    """Parse the rule-file grammar (without running the consistency checks).

    Declarations::

        theory <name>
        module <Name> <trivial|essential|extra>: g1 g2 ...
        deg <Name>: d1 d2 ...        (optional, default +1/-1 alternating)
        kgrading <Name>: k1 k2 ...   (optional, default 0)
        reduce <Name>: g ...         (generators killed in the reduced quotient)
        merge <A>x<B>-><C>: g1*g2 -> h1 + h2 | 0   (terms separated by ' + ')
        split <A>-><B>x<C>: g -> h1*k1 + h2*k2 | 0
        onetoone: zero
    """
    name = Path(source).stem if source != "<text>" else "CUSTOM"
    modules: dict[str, dict] = {}
    merges: list[tuple[int, str, str, str, str, str, str]] = []
    splits: list[tuple[int, str, str, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("theory "):
            name = line.split(None, 1)[1].strip()
        elif m := _MODULE_RE.match(line):
            gens = tuple(m.group(3).split())
            if len(set(gens)) != len(gens):
                raise RuleError(f"line {lineno}: repeated generator in module {m.group(1)}")
            modules[m.group(1)] = dict(role=m.group(2), gens=gens, deg=None, k=None, killed=())
        elif line.startswith(("deg ", "kgrading ", "reduce ")):
            head, rest = line.split(None, 1)
            mname, _, vals = rest.partition(":")
            mname = mname.strip()
            if mname not in modules:
                raise RuleError(f"line {lineno}: module {mname!r} not declared")
            mod = modules[mname]
            if head == "reduce":
                killed = tuple(vals.split())
                if any(g not in mod["gens"] for g in killed):
                    raise RuleError(f"line {lineno}: unknown generator in reduce list")
                mod["killed"] = killed
            else:
                mod["deg" if head == "deg" else "k"] = _parse_ints(vals, len(mod["gens"]), lineno)
        elif line.startswith("onetoone"):
            if line.replace(" ", "") != "onetoone:zero":
                raise RuleError(f"line {lineno}: only 'onetoone: zero' is supported")
        elif m := _MERGE_RE.match(line):
            merges.append((lineno, *m.groups()))  # type: ignore[arg-type]
        elif m := _SPLIT_RE.match(line):
            splits.append((lineno, *m.groups()))  # type: ignore[arg-type]
        else:
            raise RuleError(f"line {lineno}: cannot parse {raw.strip()!r}")

    def build(mname: str) -> CircleModule:
        decl = modules[mname]
        n = len(decl["gens"])
        deg = decl["deg"] or tuple(1 if i % 2 == 0 else -1 for i in range(n))
        k = decl["k"] or (0,) * n
        return CircleModule(mname, decl["gens"], deg, k, decl["killed"], decl["role"] == "essential")

    by_role: dict[str, CircleModule] = {}
    for mname, decl in modules.items():
        if decl["role"] in by_role:
            raise RuleError(f"more than one {decl['role']} module declared")
        by_role[decl["role"]] = build(mname)
    if "trivial" not in by_role:
        raise RuleError("a trivial module must be declared")
    type_of = {mod.name: ("E" if role == "essential" else "T") for role, mod in by_role.items() if role != "extra"}

    def ctype(mname: str, lineno: int) -> str:
        if mname not in type_of:
            raise RuleError(f"line {lineno}: unknown circle module {mname!r}")
        return type_of[mname]

    def terms(text: str) -> list[str]:
        text = text.strip()
        if text == "0":
            return []
        # generator names may contain '+', so terms are separated by ' + '
        return [p.strip() for p in re.split(r"\s+\+\s+", text)]

    merge: dict[tuple[str, str], dict[tuple[str, str], tuple[str, ...]]] = {}
    for lineno, a, b, c, ga, gb, rhs in merges:
        ta, tb, tc = ctype(a, lineno), ctype(b, lineno), ctype(c, lineno)
        if ta == "T" and tb == "E":
            ta, tb, ga, gb = tb, ta, gb, ga
        if (ta, tb) not in (("T", "T"), ("E", "T")) or tc != ("E" if ta == "E" else "T"):
            raise RuleError(f"line {lineno}: merge {a}x{b}->{c} violates essential-count arithmetic")
        rules = merge.setdefault((ta, tb), {})
        if (ga, gb) in rules:
            raise RuleError(f"line {lineno}: duplicate merge rule for {ga}*{gb}")
        rules[(ga, gb)] = f2_sum(terms(rhs))
    split: dict[str, dict[str, tuple[tuple[str, str], ...]]] = {}
    for lineno, a, b, c, g, rhs in splits:
        ta, tb, tc = ctype(a, lineno), ctype(b, lineno), ctype(c, lineno)
        swap = tb == "T" and tc == "E"
        if ta == "T" and (tb, tc) != ("T", "T") or ta == "E" and {tb, tc} != {"E", "T"}:
            raise RuleError(f"line {lineno}: split {a}->{b}x{c} violates essential-count arithmetic")
        out = []
        for term in terms(rhs):
            if "*" not in term:
                raise RuleError(f"line {lineno}: split image terms must be products g*h")
            x, y = (s.strip() for s in term.split("*", 1))
            out.append((y, x) if swap else (x, y))
        rules = split.setdefault(ta, {})
        if g in rules:
            raise RuleError(f"line {lineno}: duplicate split rule for {g}")
        rules[g] = f2_sum(out)
    return RuleTable(
        name,
        by_role["trivial"],
        by_role.get("essential"),
        merge,
        split,
        extra=by_role.get("extra"),
        source=source,
    )


def load_rule_file(path) -> RuleTable:
    """Parse a rule file and run the arithmetic, unit-axiom, square and quotient checks."""
    p = Path(path)
    table = parse_rule_text(p.read_text(encoding="utf-8"), source=str(p))
    check_table(table)
    return table


def format_rule_file(t: RuleTable) -> str:
    """Render ``t`` in the rule-file grammar (every generator pair listed, zeros included)."""
    lines = [f"theory {t.name}"]
    mods = [("trivial", t.trivial)]
    if t.essential is not None:
        mods.append(("essential", t.essential))
    if t.extra is not None:
        mods.append(("extra", t.extra))
    for role, m in mods:
        lines.append(f"module {m.name} {role}: {' '.join(m.generators)}")
        lines.append(f"deg {m.name}: {' '.join(str(x) for x in m.deg)}")
        lines.append(f"kgrading {m.name}: {' '.join(str(x) for x in m.k)}")
        if m.killed:
            lines.append(f"reduce {m.name}: {' '.join(m.killed)}")
    name = {"T": t.trivial.name, "E": t.essential.name if t.essential else "?"}
    for (ta, tb), rules in sorted(t.merge.items()):
        tc = t.merge_out_type(ta, tb)
        for ga in t.module(ta).generators:
            for gb in t.module(tb).generators:
                img = rules.get((ga, gb), ())
                rhs = " + ".join(img) if img else "0"
                lines.append(f"merge {name[ta]}x{name[tb]}->{name[tc]}: {ga}*{gb} -> {rhs}")
    for ta, rules in sorted(t.split.items()):
        for g in t.module(ta).generators:
            img = rules.get(g, ())
            rhs = " + ".join(f"{x}*{y}" for x, y in img) if img else "0"
            lines.append(f"split {name[ta]}->{name[ta]}x{name['T']}: {g} -> {rhs}")
    lines.append("onetoone: zero")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Block decomposition of the essential module
# ---------------------------------------------------------------------------


def essential_blocks(t: RuleTable) -> list[tuple[str, ...]]:
    """Partition the essential generators into classes never mixed by any rule."""
    if t.essential is None:
        raise RuleError(f"{t.name} has no essential module")
    parent = {g: g for g in t.essential.generators}

    def find(g: str) -> str:
        while parent[g] != g:
            g = parent[g]
        return g

    def join(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for (ga, _gb), img in t.merge.get(("E", "T"), {}).items():
        for h in img:
            join(ga, h)
    for g, img in t.split.get("E", {}).items():
        for x, _ in img:
            join(g, x)
    blocks: dict[str, list[str]] = {}
    for g in t.essential.generators:
        blocks.setdefault(find(g), []).append(g)
    return [tuple(b) for b in blocks.values()]


def block_decompose(t: RuleTable) -> tuple[RuleTable, RuleTable]:
    """Split a table whose essential module is a sum of two rule-invariant halves.

    Each block table keeps the trivial rules and restricts the essential rules
    to one half.  Generator names are kept; use :meth:`RuleTable.rename` to
    compare a block with another table.
    """
    blocks = essential_blocks(t)
    if len(blocks) != 2:
        raise RuleError(f"{t.name}: essential module does not split into two blocks (found {len(blocks)})")
    out = []
    assert t.essential is not None
    for i, block in enumerate(blocks):
        idx = [t.essential.index(g) for g in block]
        mod = CircleModule(
            f"{t.essential.name}[{i}]",
            block,
            tuple(t.essential.deg[j] for j in idx),
            tuple(t.essential.k[j] for j in idx),
            tuple(g for g in t.essential.killed if g in block),
            essential=True,
        )
        em = {(ga, gb): img for (ga, gb), img in t.merge.get(("E", "T"), {}).items() if ga in block}
        es = {g: img for g, img in t.split.get("E", {}).items() if g in block}
        merge = dict(t.merge)
        merge[("E", "T")] = em
        split = dict(t.split)
        split["E"] = es
        out.append(replace(t, name=f"{t.name}[{i}]", essential=mod, merge=merge, split=split))
    return out[0], out[1]
