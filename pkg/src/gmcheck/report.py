"""Run reports shared by the ``check``, ``sweep`` and ``homotopy`` commands."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

STATUSES = ("pass", "fail", "skip", "error")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ALL_SKIP = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4


@dataclass
class CheckResult:
    graph_id: str
    check: str
    status: str
    margin: float | None = None
    detail: str = ""


@dataclass
class CheckSummary:
    counts: dict[str, int] = field(default_factory=lambda: dict.fromkeys(STATUSES, 0))
    min_margin: float | None = None

    def add(self, status: str, margin: float | None, n: int = 1) -> None:
        self.counts[status] += n
        if margin is not None and (self.min_margin is None or margin < self.min_margin):
            self.min_margin = margin

    def merge(self, other: CheckSummary) -> None:
        for s in STATUSES:
            self.counts[s] += other.counts[s]
        if other.min_margin is not None and (self.min_margin is None or other.min_margin < self.min_margin):
            self.min_margin = other.min_margin


@dataclass
class RunReport:
    """Outcome of one CLI invocation.

    ``results`` lists every per-graph entry for ``check``; sweeps keep only
    the non-passing entries and carry full totals in ``per_check``.
    """

    command: list[str]
    results: list[CheckResult] = field(default_factory=list)
    per_check: dict[str, CheckSummary] = field(default_factory=dict)
    graphs: int = 0
    wall_time: float = 0.0
    tolerances: dict[str, float] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def record(self, res: CheckResult, keep: bool = True) -> None:
        self.per_check.setdefault(res.check, CheckSummary()).add(res.status, res.margin)
        if keep:
            self.results.append(res)

    @property
    def summary(self) -> dict[str, int]:
        tot = dict.fromkeys(STATUSES, 0)
        for cs in self.per_check.values():
            for s in STATUSES:
                tot[s] += cs.counts[s]
        return tot

    def exit_code(self) -> int:
        s = self.summary
        if s["fail"]:
            return EXIT_FAIL
        if s["error"]:
            return EXIT_NUMERIC
        if s["pass"] == 0:
            return EXIT_ALL_SKIP
        return EXIT_OK

    def to_dict(self) -> dict:
        d = asdict(self)
        d["summary"] = self.summary
        d["exit_code"] = self.exit_code()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunReport:
        return cls(
            command=list(d["command"]),
            results=[CheckResult(**r) for r in d["results"]],
            per_check={k: CheckSummary(dict(v["counts"]), v["min_margin"]) for k, v in d["per_check"].items()},
            graphs=d["graphs"],
            wall_time=d["wall_time"],
            tolerances=dict(d["tolerances"]),
            extra=dict(d["extra"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    def format_text(self) -> str:
        lines = [f"graphs: {self.graphs}"]
        for name, cs in sorted(self.per_check.items()):
            c = cs.counts
            mm = "n/a" if cs.min_margin is None else f"{cs.min_margin:.3e}"
            lines.append(f"  {name:16s} pass={c['pass']} fail={c['fail']} skip={c['skip']} "
                         f"error={c['error']} min_margin={mm}")
        bad = [r for r in self.results if r.status in ("fail", "error")]
        for r in bad[:20]:
            lines.append(f"  {r.status.upper()} {r.check} graph={r.graph_id}: {r.detail}")
        if len(bad) > 20:
            lines.append(f"  ... {len(bad) - 20} more")
        s = self.summary
        lines.append(f"total: pass={s['pass']} fail={s['fail']} skip={s['skip']} error={s['error']} "
                     f"({self.wall_time:.2f}s)")
        return "\n".join(lines)
