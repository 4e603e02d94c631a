from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from rp3kh.diagram import read_rpd

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
sys.path.insert(0, str(Path(__file__).resolve().parent))

PERF_ENTRY = "perf14"


def corpus_names(include_perf: bool = False) -> list[str]:
    names = sorted(p.stem for p in CORPUS.glob("*.rpd"))
    return [n for n in names if include_perf or n != PERF_ENTRY]


def load(name: str):
    return read_rpd(CORPUS / f"{name}.rpd")


@pytest.fixture(scope="session")
def manifest() -> dict:
    return json.loads((CORPUS / "manifest.json").read_text(encoding="utf-8"))


# Acceptance lines collected during the run and printed in the terminal summary.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"acceptance {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
