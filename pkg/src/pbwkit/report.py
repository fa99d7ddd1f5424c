"""Structured pass/fail verdicts shared by the checkers and the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, is_dataclass

PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    witness: object = None


@dataclass
class VerdictReport:
    title: str
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def add(self, name, ok, detail="", witness=None):
        if ok is None:
            status = UNDECIDED
        else:
            status = PASS if ok else FAIL
        self.checks.append(Check(name, status, detail, witness))
        return ok

    def get(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def status_of(self, name) -> str:
        return self.get(name).status

    def passed(self, name) -> bool:
        return self.get(name).status == PASS

    @property
    def overall(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if UNDECIDED in statuses:
            return UNDECIDED
        return PASS

    @property
    def ok(self) -> bool:
        return self.overall == PASS

    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, UNDECIDED: 2}[self.overall]

    def merge(self, other: "VerdictReport", prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.detail, c.witness))
        for k, v in other.tables.items():
            self.tables[prefix + k] = v
        for k, v in other.info.items():
            self.info[prefix + k] = v

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "overall": self.overall,
            "checks": [
                {"name": c.name, "status": c.status, "detail": c.detail,
                 "witness": _plain(c.witness)}
                for c in self.checks
            ],
            "tables": {k: _plain(v) for k, v in self.tables.items()},
            "info": {k: _plain(v) for k, v in self.info.items()},
        }

    def to_json(self, extra: dict | None = None) -> str:
        d = self.to_dict()
        if extra:
            d.update({k: _plain(v) for k, v in extra.items()})
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"# {self.title}"]
        for c in self.checks:
            line = f"{c.status.upper():9s}\t{c.name}"
            if c.detail:
                line += f"\t{c.detail}"
            if c.witness is not None:
                line += f"\twitness={_plain(c.witness)}"
            lines.append(line)
        for name, rows in self.tables.items():
            lines.append(f"## {name}")
            for row in rows:
                lines.append("\t".join(str(_plain(x)) for x in row))
        lines.append(f"overall\t{self.overall}")
        return "\n".join(lines) + "\n"


def _plain(x):
    """Convert scalars, vectors and nested containers to JSON friendly values."""
    if x is None or isinstance(x, (bool, int, str, float)):
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if is_dataclass(x) and not isinstance(x, type):
        return {f.name: _plain(getattr(x, f.name)) for f in fields(x)}
    return str(x)
