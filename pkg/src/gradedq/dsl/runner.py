"""Script driver: parse, elaborate, execute, report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import GradedError, ParseError, SemanticError
from .elaborate import ERROR, FAIL, PASS, Record, Session
from .parser import parse
from .printer import format_script

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


@dataclass
class RunResult:
    records: list[Record] = field(default_factory=list)
    exit_code: int = EXIT_OK
    error: GradedError | None = None

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, ERROR: 0}
        for r in self.records:
            out[r.status] += 1
        return out


def run_text(text: str, base_dir: Path | str = ".", execute: bool = True) -> RunResult:
    try:
        script = parse(text)
    except ParseError as exc:
        return RunResult([], EXIT_PARSE, exc)
    session = Session(base_dir, execute=execute)
    try:
        session.run_script(script)
    except SemanticError as exc:
        return RunResult(session.records, EXIT_SEMANTIC, exc)
    res = RunResult(session.records)
    if any(r.status != PASS for r in res.records):
        res.exit_code = EXIT_FAIL
    return res


def fmt_text(text: str) -> str:
    return format_script(parse(text))


def render_text(res: RunResult, timing: bool = True) -> str:
    lines = []
    for r in res.records:
        head = f"[{r.status}] {r.command}  (line {r.line})"
        if r.expected:
            head += f"  [expected {r.expected}]"
        lines.append(head)
        if r.error:
            lines.append(f"    error: {r.error}")
        if r.witness:
            lines.append(f"    witness: {r.witness}")
        if r.residual is not None:
            lines.append(f"    residual: {r.residual}")
        for k, v in r.outputs.items():
            lines.append(f"    {k} = {v}")
        for k, v in r.data.items():
            lines.append(f"    {k}: {v}")
        if timing and r.timing_ms is not None:
            lines.append(f"    time: {r.timing_ms:.1f} ms")
    c = res.counts()
    lines.append(f"summary: {c[PASS]} PASS, {c[FAIL]} FAIL, {c[ERROR]} ERROR")
    if res.error is not None:
        lines.append(f"error: {type(res.error).__name__} at {res.error}")
    return "\n".join(lines) + "\n"


def render_json(res: RunResult, timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in res.records], indent=2) + "\n"
