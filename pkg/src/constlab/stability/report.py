"""JSON stability reports."""

from __future__ import annotations

import json

from constlab.beliefs import Belief
from constlab.scf import SCF, vector_to_string
from constlab.stability.core import TieBreak, Universe, all_universe, stable_tables, welfare_table


def stability_report(
    candidates: list[SCF],
    F: Belief,
    tb,
    universe: Universe | None = None,
    allow_large: bool = False,
    config: dict | None = None,
) -> dict:
    """Classify ``candidates`` and collect witnesses and welfare for the stable ones."""
    tb = TieBreak.parse(tb)
    n = F.n
    universe = universe or all_universe(n)
    alts = universe.scfs(allow_large=allow_large)
    weights, _ = F.integer_weights()
    results = stable_tables([f.table for f in candidates], [g.table for g in alts], weights, n, tb)
    stable, witnesses = [], {}
    for f, (idx, c) in zip(candidates, results):
        if idx < 0:
            stable.append(f)
        else:
            witnesses[f.canonical()] = {"f_prime": alts[idx].canonical(), "c": vector_to_string(c, n)}
    cfg = {"n": n, "belief": F.label, "tie_break": tb.value, "universe": universe.label()}
    cfg.update(config or {})
    return {
        "config": cfg,
        "stable_set": [f.canonical() for f in stable],
        "witnesses": witnesses,
        "welfare_table": welfare_table(stable, F),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
