"""Command-line interface.

Exit codes: 0 success, 1 a check or expectation failed, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .complex import ChainComplexError, dump_complex, homology_ranks
from .cube import CubeTooLargeError, EssentialCountError, build_cube, edge_kind_census
from .diagram import DiagramError, components, default_marked, link_class, read_rpd, with_marked
from .invariants import (
    InvariantReport,
    format_report,
    instanton_e1,
    kh_complex,
    reduced_by_position,
    verify,
)
from .rules import RuleError, check_table, parse_rule_text

PROFILE_KEYS = ("kh", "khr", "kh1", "e2", "e2_reduced")
PROVENANCE = ("PAPER", "TRIVIAL", "DERIVED")


class InputError(Exception):
    pass


def _load(path: str, marked: str | None = None):
    try:
        d = read_rpd(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if marked is not None:
        d = with_marked(d, marked if marked.startswith("L") else int(marked))
    return d


def _emit(args, doc: dict, text: str) -> None:
    print(json.dumps(doc, indent=1, sort_keys=True) if args.json else text)


def _profile_text(label: str, p) -> str:
    lines = [f"{label} total {p.total}"]
    lines += [f"  i={i}: {r}" for i, r in sorted(p.ranks.items())]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    d = _load(args.file)
    comps = components(d)
    doc = {"diagram": d.name, "class": link_class(d), "n_crossings": d.n_crossings,
           "components": len(comps) + len(d.loops)}
    _emit(args, doc, f"class {doc['class']}\nn_crossings {doc['n_crossings']}\ncomponents {doc['components']}")
    return 0


def cmd_cube(args) -> int:
    d = _load(args.file)
    cube = build_cube(d)
    if args.vertex is not None:
        bits = args.vertex
        if len(bits) != cube.n or set(bits) - {"0", "1"}:
            raise InputError(f"--vertex needs {cube.n} binary digits")
        res = cube.resolution(tuple(int(b) for b in bits))
        doc = {"vertex": bits, "circles": [
            {"id": c.label, "essential": c.essential, "arcs": list(c.segments)} for c in res.circles]}
        text = "\n".join([f"vertex {bits}"] + [
            f"circle {c['id']} {'essential' if c['essential'] else 'trivial'} arcs {c['arcs']}"
            for c in doc["circles"]])
    else:
        doc = {"diagram": d.name, "class": link_class(d), "census": edge_kind_census(cube)}
        text = "\n".join([f"class {doc['class']}"] + [f"{k} {v}" for k, v in doc["census"].items()])
    _emit(args, doc, text)
    return 0


def _marked_default(d, reduced: bool):
    if reduced and d.marked is None:
        return with_marked(d, default_marked(d))
    return d


def cmd_kh(args) -> int:
    if args.per_position:
        d = _load(args.file)
        by_pos = reduced_by_position(d, args.variant)
        label = args.variant + "r"
        doc = {"diagram": d.name, "variant": args.variant, "reduced": True,
               "positions": {str(m): p.to_json() for m, p in by_pos.items()}}
        _emit(args, doc, "\n".join(f"{label} marked {m} total {p.total}" for m, p in by_pos.items()))
        return 0
    d = _marked_default(_load(args.file, args.marked), args.reduced)
    cx = kh_complex(d, args.reduced, args.variant)
    if args.dump_complex:
        Path(args.dump_complex).write_text(dump_complex(cx) + "\n", encoding="utf-8")
    p = homology_ranks(cx)
    label = args.variant + ("r" if args.reduced else "")
    doc = {"diagram": d.name, "variant": args.variant, "reduced": args.reduced, "marked": d.marked,
           "profile": p.to_json()}
    _emit(args, doc, _profile_text(label, p))
    return 0


def cmd_instanton(args) -> int:
    d = _marked_default(_load(args.file, args.marked), args.reduced)
    cx = instanton_e1(d, args.reduced)
    if args.dump_complex:
        Path(args.dump_complex).write_text(dump_complex(cx) + "\n", encoding="utf-8")
    doc = {"diagram": d.name, "reduced": args.reduced, "marked": d.marked,
           "e1_chain_ranks": {str(i): n for i, n in cx.chain_ranks().items()},
           "e1_total": cx.chain_rank}
    lines = [f"e1 chain rank {cx.chain_rank}"] + [f"  i={i}: {n}" for i, n in cx.chain_ranks().items()]
    if args.e2:
        p = homology_ranks(cx)
        doc["e2"] = p.to_json()
        lines.append(_profile_text("e2", p))
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    d = _load(args.file, args.marked)
    rep = verify(d, threads=args.threads)
    _emit(args, rep.to_json(), format_report(rep))
    return 0 if rep.passed else 1


def cmd_rules_check(args) -> int:
    try:
        table = parse_rule_text(Path(args.rulefile).read_text(encoding="utf-8"), source=args.rulefile)
    except OSError as exc:
        raise InputError(f"cannot read {args.rulefile}: {exc.strerror or exc}") from exc
    try:
        check_table(table)
    except RuleError as exc:
        doc = {"theory": table.name, "pass": False, "failures": str(exc).splitlines()}
        _emit(args, doc, f"theory {table.name}\nFAIL\n{exc}")
        return 1
    doc = {"theory": table.name, "pass": True, "failures": []}
    _emit(args, doc, f"theory {table.name}\npass")
    return 0


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


def _lookup(rep: InvariantReport, key: str):
    if key == "class":
        return rep.link_class
    if key == "n_crossings":
        return rep.n_crossings
    name, _, field = key.partition(".")
    p = rep.profiles.get(name)
    if p is None:
        return None
    if field == "total":
        return p.total
    if field.startswith("i="):
        return p.ranks.get(int(field[2:]), 0)
    raise InputError(f"unknown expectation key {key!r}")


def _pair_signature(d) -> dict:
    """kh, khr, kh1 and kh1r profiles, the reduced ones at the diagram's marked point.

    Reduced theories are compared at one fixed marked point because for
    class-1 diagrams they can depend on where the point sits.
    """
    dm = d if d.marked is not None else with_marked(d, default_marked(d))
    sig = {"kh": homology_ranks(kh_complex(d, False)).ranks,
           "khr": homology_ranks(kh_complex(dm, True)).ranks}
    if link_class(d) == 1:
        sig["kh1"] = homology_ranks(kh_complex(d, False, "kh1")).ranks
        sig["kh1r"] = homology_ranks(kh_complex(dm, True, "kh1")).ranks
    return sig


def run_corpus(directory, threads: int = 1, skip: tuple[str, ...] = ()) -> dict:
    """Verify every .rpd file in ``directory`` against the optional manifest.json."""
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"{directory} is not a directory")
    manifest_path = root / "manifest.json"
    manifest = {"entries": {}, "pairs": []}
    if manifest_path.exists():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"unreadable manifest {manifest_path}: {exc}") from exc
    files = sorted(p for p in root.glob("*.rpd") if p.stem not in skip)
    diagrams = {p.stem: _load(str(p)) for p in files}

    def one(name: str) -> dict:
        rep = verify(diagrams[name])
        wanted = manifest.get("entries", {}).get(name, {})
        expectations = []
        for key, exp in sorted(wanted.get("expect", {}).items()):
            if exp.get("provenance") not in PROVENANCE:
                raise InputError(f"{name}: expectation {key} lacks a provenance tag")
            actual = _lookup(rep, key)
            expectations.append({"check": key, "expected": exp["value"], "actual": actual,
                                 "provenance": exp["provenance"], "pass": actual == exp["value"]})
        observations = {key: _lookup(rep, key) for key in wanted.get("observe", [])}
        return {"name": name, "report": rep.to_json(), "checks_pass": rep.passed,
                "expectations": expectations, "observations": observations,
                "pass": rep.passed and all(x["pass"] for x in expectations)}

    names = sorted(diagrams)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(one, names))
    else:
        entries = [one(n) for n in names]

    pairs = []
    for a, b, move in manifest.get("pairs", []):
        if a not in diagrams or b not in diagrams:
            continue
        sa, sb = _pair_signature(diagrams[a]), _pair_signature(diagrams[b])
        pairs.append({"a": a, "b": b, "move": move, "pass": sa == sb,
                      "detail": "identical kh/khr/kh1 profiles" if sa == sb else f"{sa} != {sb}"})
    ok = all(e["pass"] for e in entries) and all(p["pass"] for p in pairs)
    return {"entries": entries, "pairs": pairs, "pass": ok}


CSV_FIELDS = ["name", "class", "n_crossings"] + [f"{k}_total" for k in PROFILE_KEYS] + [
    "checks_pass", "expectations_pass"]


def corpus_csv(summary: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for e in summary["entries"]:
        rep = e["report"]
        row = [e["name"], rep["class"], rep["n_crossings"]]
        for k in PROFILE_KEYS:
            p = rep["profiles"].get(k)
            row.append("" if p is None else p["total"])
        row += [e["checks_pass"], all(x["pass"] for x in e["expectations"])]
        w.writerow(row)
    for p in summary["pairs"]:
        w.writerow([f"pair:{p['a']}~{p['b']}", "", p["move"]] + [""] * len(PROFILE_KEYS) + [p["pass"], ""])
    return buf.getvalue()


def cmd_corpus(args) -> int:
    summary = run_corpus(args.dir, threads=args.threads, skip=tuple(args.skip or ()))
    if args.format == "csv":
        out = corpus_csv(summary)
    else:
        out = json.dumps(summary, indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0 if summary["pass"] else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON document instead of text")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent builds")

    p = argparse.ArgumentParser(prog="rp3kh", description="Khovanov-type homology of links in RP^3.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="homology class of the link")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("cube", parents=[common], help="resolution cube census or one vertex")
    s.add_argument("file")
    s.add_argument("--vertex", help="bitstring, crossing 0 first")
    s.set_defaults(func=cmd_cube)

    s = sub.add_parser("kh", parents=[common], help="Khovanov homology ranks")
    s.add_argument("file")
    s.add_argument("--reduced", action="store_true")
    s.add_argument("--variant", choices=["kh", "kh1"], default="kh")
    s.add_argument("--marked", help="arc id or L<k>; defaults to the file's M line, else the smallest arc")
    s.add_argument("--dump-complex", metavar="PATH", help="write bases and matrix triplets as JSON")
    s.add_argument("--per-position", action="store_true",
                   help="reduced ranks with the marked point on every arc and loop")
    s.set_defaults(func=cmd_kh)

    s = sub.add_parser("instanton", parents=[common], help="E1 chain ranks and optionally the E2 page")
    s.add_argument("file")
    s.add_argument("--reduced", action="store_true")
    s.add_argument("--e2", action="store_true")
    s.add_argument("--marked")
    s.add_argument("--dump-complex", metavar="PATH")
    s.set_defaults(func=cmd_instanton)

    s = sub.add_parser("verify", parents=[common], help="all invariants and cross-checks")
    s.add_argument("file")
    s.add_argument("--marked")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", parents=[common], help="verify a directory against its manifest")
    s.add_argument("dir")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out", help="write the summary here instead of stdout")
    s.add_argument("--skip", action="append", metavar="NAME", help="leave out an entry (repeatable)")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("rules", parents=[common], help="rule-file tools")
    rsub = s.add_subparsers(dest="rules_command", required=True)
    r = rsub.add_parser("check", parents=[common], help="parse a rule file and run the algebra checks")
    r.add_argument("rulefile")
    r.set_defaults(func=cmd_rules_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InputError, DiagramError, CubeTooLargeError, EssentialCountError, ChainComplexError, RuleError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
