"""Voter best responses and the induced equilibrium SCF."""

from __future__ import annotations

from constlab.scf import SCF


def _dominant_reports(f: SCF, i: int, pref: int) -> list[int]:
    """Reports that are weakly best for voter i against every report of the others."""
    out = []
    others = [v for v in range(f.size) if not (v >> i) & 1]
    for r in (0, 1):
        alt = 1 - r
        if all(
            (f(y | (r << i)) == pref) >= (f(y | (alt << i)) == pref)
            for y in others
        ):
            out.append(r)
    return out


def dominant_strategy_profile(f: SCF) -> list[tuple[int, int]] | None:
    """Per voter, the report for a preference of 0 and of 1.

    A voter whose both reports are always equally good keeps the truthful
    report.  Returns None when some voter has no weakly dominant report.
    """
    profile = []
    for i in range(f.n):
        choice = []
        for pref in (0, 1):
            reports = _dominant_reports(f, i, pref)
            if not reports:
                return None
            choice.append(pref if pref in reports else reports[0])
        profile.append((choice[0], choice[1]))
    return profile


def best_response_equilibrium(f: SCF) -> SCF | None:
    """The SCF f∘e induced by dominant best responses, or None when undefined."""
    profile = dominant_strategy_profile(f)
    if profile is None:
        return None

    def composed(v: int) -> int:
        e = 0
        for i, (r0, r1) in enumerate(profile):
            if r1 if (v >> i) & 1 else r0:
                e |= 1 << i
        return f(e)

    return SCF.from_function(f.n, composed)
