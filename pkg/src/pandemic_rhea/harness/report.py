"""Summaries over records files: win ratio, loss causes, durations, action usage, timing."""

from __future__ import annotations

import json
import statistics
from collections import defaultdict
from pathlib import Path
from typing import Any, Iterable

from ..rules import KIND_NAMES, LossCause
from .experiment import TIMING_KEY, read_records

EMPTY_NOTICE = "empty report: no game records found"
LOSS_CAUSES = tuple(c.value for c in LossCause)


def _mean(xs: list[float]) -> float | None:
    return statistics.fmean(xs) if xs else None


def _percentiles(times: list[float]) -> dict[str, float] | None:
    if not times:
        return None
    if len(times) == 1:
        t = times[0]
        return {"mean": t, "p50": t, "p90": t, "p99": t, "max": t}
    qs = statistics.quantiles(times, n=100, method="inclusive")
    return {"mean": statistics.fmean(times), "p50": qs[49], "p90": qs[89], "p99": qs[98], "max": max(times)}


def summarize(records: Iterable[dict[str, Any]]) -> dict[str, Any]:
    """Aggregate metrics of one group of game records."""
    records = list(records)
    failed = [r for r in records if r.get("outcome") == "failed"]
    played = [r for r in records if r.get("outcome") in ("won", "lost")]
    won = [r for r in played if r["outcome"] == "won"]
    lost = [r for r in played if r["outcome"] == "lost"]
    causes = {c: 0 for c in LOSS_CAUSES}
    for r in lost:
        causes[r["loss_cause"]] += 1
    turns = sum(r["duration"] for r in played)
    actions = {k: 0 for k in KIND_NAMES.values()}
    for r in played:
        for k, v in r.get("actions", {}).items():
            actions[k] = actions.get(k, 0) + v
    times = [t for r in played for t in r.get(TIMING_KEY, {}).get("per_decision", [])]
    return {
        "games": len(played),
        "failed": len(failed),
        "wins": len(won),
        "win_ratio": len(won) / len(played) if played else None,
        "loss_causes": {c: (n / len(lost) if lost else None) for c, n in causes.items()},
        "loss_counts": causes,
        "mean_duration_won": _mean([r["duration"] for r in won]),
        "mean_duration_lost": _mean([r["duration"] for r in lost]),
        "actions_per_turn": {k: (v / turns if turns else None) for k, v in actions.items()},
        "decision_time": _percentiles(times),
    }


def build_report(records: list[dict[str, Any]]) -> dict[str, Any]:
    games = [r for r in records if r.get("type") == "game"]
    if not games:
        return {"empty": True, "notice": EMPTY_NOTICE, "agents": {}}
    by_agent: dict[str, list] = defaultdict(list)
    by_setup: dict[str, dict[str, list]] = defaultdict(lambda: defaultdict(list))
    for r in games:
        by_agent[r["agent"]].append(r)
        by_setup[r["agent"]][r["setup"]].append(r)
    agents = {}
    for agent in sorted(by_agent):
        entry = summarize(by_agent[agent])
        entry["setups"] = {sid: summarize(rs) for sid, rs in sorted(by_setup[agent].items())}
        agents[agent] = entry
    return {"empty": False, "agents": agents}


def load_records(paths: Iterable[str | Path]) -> list[dict[str, Any]]:
    out = []
    for p in paths:
        _, records, _ = read_records(p)
        out.extend(records)
    return out


def _fmt(v, pct=False, digits=2) -> str:
    if v is None:
        return "-"
    if pct:
        return f"{100 * v:.1f}%"
    return f"{v:.{digits}f}"


def _row(label: str, s: dict[str, Any]) -> str:
    causes = " ".join(f"{_fmt(s['loss_causes'][c], pct=True):>6}" for c in LOSS_CAUSES)
    t = s["decision_time"] or {}
    return (
        f"{label:<34} {s['games']:>6} {_fmt(s['win_ratio'], pct=True):>7} {causes} "
        f"{_fmt(s['mean_duration_won'], digits=1):>6} {_fmt(s['mean_duration_lost'], digits=1):>6} "
        f"{_fmt(t.get('p50'), digits=3):>7} {_fmt(t.get('p90'), digits=3):>7}"
    )


def render_text(report: dict[str, Any]) -> str:
    if report["empty"]:
        return report["notice"] + "\n"
    head = (
        f"{'group':<34} {'games':>6} {'win':>7} "
        + " ".join(f"{c[:6]:>6}" for c in LOSS_CAUSES)
        + f" {'d.won':>6} {'d.lost':>6} {'t.p50':>7} {'t.p90':>7}"
    )
    lines = ["loss-cause columns are fractions of lost games; d.* are mean durations in turns; t.* are seconds per decision", head]
    for agent, s in report["agents"].items():
        lines.append("-" * len(head))
        lines.append(_row(agent[:34], s))
        for sid, ss in s["setups"].items():
            lines.append(_row("  setup " + sid, ss))
        if s["failed"]:
            lines.append(f"  ({s['failed']} failed games excluded)")
    lines.append("")
    lines.append("actions per turn")
    kinds = list(KIND_NAMES.values())
    lines.append(f"{'agent':<34} " + " ".join(f"{k[:8]:>8}" for k in kinds))
    for agent, s in report["agents"].items():
        apt = s["actions_per_turn"]
        lines.append(f"{agent[:34]:<34} " + " ".join(f"{_fmt(apt[k], digits=3):>8}" for k in kinds))
    return "\n".join(lines) + "\n"


def render_machine(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"
