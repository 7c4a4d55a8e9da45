"""Structured reports: JSON-ready dicts plus a plain-text rendering.

Every rational is written as a ``"p/q"`` string. Reports carry no clock
readings unless asked, so the same input and seed give byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Sequence

from .games import MixedStrategy, SimplexPoint
from .nash import NEResult
from .regularity import RegularityReport, Theorem1Report, Violation, Witness

SCHEMA_VERSION = 1
OK_STATUSES = ("certified", "valid")


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def q(x: Fraction) -> str:
    return str(x)


def labels_for(labels, i: int, size: int) -> Sequence[str]:
    if labels is None:
        return [f"a{k + 1}" for k in range(size)]
    return labels[i]


def strategy_text(s: MixedStrategy, names: Sequence[str]) -> str:
    if s.is_pure:
        return names[s.pure_action]
    return " + ".join(f"{p} {names[k]}" for k, p in enumerate(s) if p)


def strategy_doc(s: MixedStrategy, names: Sequence[str]) -> dict:
    return {"probs": [q(p) for p in s], "text": strategy_text(s, names)}


def point_text(p: SimplexPoint) -> str:
    return "(" + ", ".join(q(x) for x in p) + ")"


def profile_doc(profile, labels) -> list[dict]:
    return [strategy_doc(s, labels_for(labels, i, len(s))) for i, s in enumerate(profile)]


def ne_doc(result: NEResult, labels) -> dict:
    return {
        "equilibria": [
            {"pure": result.is_pure(k), "profile": profile_doc(eq, labels)}
            for k, eq in enumerate(result)
        ],
        "degenerate_supports": [[list(s) for s in pair] for pair in result.degenerate],
        "degenerate_game": result.is_degenerate,
    }


def witness_doc(w: Witness, labels) -> list[dict]:
    """Per agent: the vertex strategies and the coefficient of each action in
    the barycentric extension, as a vector over vertices."""
    out = []
    for i, row in enumerate(w.strategies):
        names = labels_for(labels, i, len(row[0]))
        out.append({
            "agent": i,
            "vertices": [strategy_doc(s, names) for s in row],
            "extension": {names[x]: [q(s[x]) for s in row] for x in range(len(names))},
        })
    return out


def violation_doc(v: Violation, labels) -> dict:
    return {
        "types": [[q(x) for x in t] for t in v.types],
        "agent": v.agent,
        "deviation": labels_for(labels, v.agent, len(v.profile[v.agent]))[v.action],
        "gain": q(v.gain),
        "profile": profile_doc(v.profile, labels),
    }


def regularity_doc(r: RegularityReport, labels, limit: int | None = None) -> dict:
    shown = r.violations if limit is None else r.violations[:limit]
    return {
        "status": r.status,
        "region": r.region,
        "grid": r.grid,
        "checked_profiles": r.checked,
        "violation_count": len(r.violations),
        "violating_profiles": len(r.violating_profiles()),
        "violations": [violation_doc(v, labels) for v in shown],
        "complete_search": r.complete_search,
        "notes": list(r.notes),
        "witness": witness_doc(r.witness, labels) if r.witness else None,
    }


def theorem1_doc(r: Theorem1Report, labels) -> dict:
    return {
        "local_ne_everywhere": r.local_ne_everywhere,
        "local_violations": [
            {"types": list(theta), "agent": i,
             "deviation": labels_for(labels, i, 0)[x] if labels else f"a{x + 1}",
             "gain": q(gain)}
            for theta, i, x, gain in r.local_violations
        ],
        "bne_under_all_priors": r.bne_under_all_priors,
        "priors_checked": len(r.prior_verdicts),
        "failing_priors": [name for name, ok in r.prior_verdicts if not ok],
        "falsifying_point_mass": list(r.falsifying_prior) if r.falsifying_prior else None,
        "agreement": r.agreement,
        "seed": r.seed,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def to_human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    for line in report.get("summary", []):
        lines.append("  " + line)
    return "\n".join(lines) + "\n"
