"""Regenerate tests/golden/<id>.json from tests/golden/cases.json.

Run from anywhere; commands execute with the repository root as working directory.
Only rerun after an intended change in report content, and review the diff.
"""
from __future__ import annotations

import contextlib
import io
import json
import os
from pathlib import Path

from morita.cli import main

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def run(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def freeze() -> None:
    os.chdir(ROOT)
    cases = json.loads((GOLDEN / "cases.json").read_text())
    for case in cases:
        code, text = run(case["argv"])
        if code != case["exit"]:
            raise SystemExit(f"{case['id']}: exit {code}, expected {case['exit']}")
        (GOLDEN / f"{case['id']}.json").write_text(text)
        print(f"froze {case['id']}")


if __name__ == "__main__":
    freeze()
