"""Utilities, choice vectors and the self-maintenance check."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from constlab import backend
from constlab.beliefs import Belief, format_rational
from constlab.errors import CapacityError, DimensionError, ParameterError
from constlab.scf import SCF, NamedSCF, all_scfs, materialize, vector_to_string


class TieBreak(enum.Enum):
    ARBITRARY = "arbitrary"
    STATUS_QUO_BIAS = "sqb"

    @classmethod
    def parse(cls, text: "str | TieBreak") -> "TieBreak":
        if isinstance(text, TieBreak):
            return text
        key = text.strip().lower().replace("-", "_")
        aliases = {"arbitrary": cls.ARBITRARY, "sqb": cls.STATUS_QUO_BIAS,
                   "status_quo_bias": cls.STATUS_QUO_BIAS, "statusquobias": cls.STATUS_QUO_BIAS}
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown tie-break {text!r} (use arbitrary or sqb)") from None

    @property
    def arbitrary(self) -> bool:
        return self is TieBreak.ARBITRARY


# --- universes of alternatives ------------------------------------------------


@dataclass(frozen=True)
class Universe:
    """The set of alternatives a stability check quantifies over.

    ``kind`` is ``"all"`` (every SCF at n), ``"thresholds"`` (the rules
    ``η >= k`` for k = 1..n) or ``"explicit"``.
    """

    kind: str
    n: int
    members: tuple[SCF, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("all", "thresholds", "explicit"):
            raise ParameterError(f"unknown universe {self.kind!r}")

    def scfs(self, allow_large: bool = False) -> list[SCF]:
        if self.kind == "all":
            return list(all_scfs(self.n, allow_large=allow_large))
        if self.kind == "thresholds":
            return threshold_rules(self.n)
        return list(self.members)

    def label(self) -> str:
        return self.kind if self.kind != "explicit" else f"explicit[{len(self.members)}]"


def all_universe(n: int) -> Universe:
    return Universe("all", n)


def thresholds_universe(n: int) -> Universe:
    return Universe("thresholds", n)


def explicit_universe(scfs: Iterable[SCF]) -> Universe:
    scfs = tuple(scfs)
    if not scfs:
        raise ParameterError("explicit universe must be nonempty")
    n = scfs[0].n
    if any(g.n != n for g in scfs):
        raise DimensionError("all SCFs in a universe must share n")
    return Universe("explicit", n, scfs)


def threshold_rules(n: int) -> list[SCF]:
    """Anonymous monotone rules ``η >= k`` for k = 1..n (k = 1 first)."""
    if n > 12:
        raise CapacityError("threshold truth tables are only built for n <= 12")
    return [materialize(NamedSCF.threshold(k), n) for k in range(1, n + 1)]


# --- utilities ----------------------------------------------------------------


def _same_n(*objs) -> int:
    ns = {o.n for o in objs}
    if len(ns) != 1:
        raise DimensionError(f"dimension mismatch: n values {sorted(ns)}")
    return ns.pop()


def utility(f: SCF, F: Belief, i: int) -> Fraction:
    """Probability under F that f's decision matches voter i's vote."""
    n = _same_n(f, F)
    if not 0 <= i < n:
        raise ParameterError(f"voter {i} out of range for n={n}")
    total = Fraction(0)
    for v, pr in F.pmf.items():
        if f(v) == (v >> i) & 1:
            total += pr
    return total


def utilities(f: SCF, F: Belief) -> list[Fraction]:
    n = _same_n(f, F)
    weights, den = F.integer_weights()
    row = backend.kernels(n, [weights]).utility_matrix([f.table], weights, n)[0]
    return [Fraction(x, den) for x in row]


def welfare(f: SCF, F: Belief) -> Fraction:
    return sum(utilities(f, F), Fraction(0))


def nash_welfare(f: SCF, F: Belief) -> Fraction:
    return math.prod(utilities(f, F), start=Fraction(1))


# --- choice vectors -------------------------------------------------------------


@dataclass(frozen=True)
class ChoiceProfileSet:
    """Admissible choice vectors when voting between an incumbent and a challenger.

    ``fixed`` maps each voter with a forced vote to that vote; ``free`` lists
    the voters who may vote either way.
    """

    n: int
    fixed: dict
    free: frozenset

    @property
    def forced_mask(self) -> int:
        return sum(1 << i for i, x in self.fixed.items() if x)

    @property
    def allowed_mask(self) -> int:
        return self.forced_mask | sum(1 << i for i in self.free)

    def __len__(self) -> int:
        return 1 << len(self.free)

    def __iter__(self):
        free = sorted(self.free)
        base = self.forced_mask
        for sub in range(1 << len(free)):
            c = base
            for j, i in enumerate(free):
                if (sub >> j) & 1:
                    c |= 1 << i
            yield c

    def __contains__(self, c: int) -> bool:
        forced = self.forced_mask
        return c & forced == forced and not c & ~self.allowed_mask


def choice_profiles(f: SCF, f2: SCF, F: Belief, tb: TieBreak | str) -> ChoiceProfileSet:
    n = _same_n(f, f2, F)
    tb = TieBreak.parse(tb)
    weights, _ = F.integer_weights()
    k = backend.kernels(n, [weights])
    uf, ua = k.utility_matrix([f.table, f2.table], weights, n)
    fixed = {}
    free = set()
    for i in range(n):
        if ua[i] > uf[i]:
            fixed[i] = 1
        elif ua[i] < uf[i] or not tb.arbitrary:
            fixed[i] = 0
        else:
            free.add(i)
    return ChoiceProfileSet(n, fixed, frozenset(free))


# --- verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A challenger ``f_prime`` and admissible vote ``c`` with f(c) = 1."""

    f_prime: SCF
    c: int
    belief: Belief | None = None

    def to_json(self) -> dict:
        out = {"f_prime": self.f_prime.canonical(), "c": vector_to_string(self.c, self.f_prime.n)}
        if self.belief is not None:
            out["belief"] = self.belief.to_json()
        return out


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a stability check.

    ``certified`` is False for verdicts that only report the absence of a
    refutation within a bounded search.
    """

    stable: bool
    witness: Witness | None
    universe: str
    certified: bool = True

    def __post_init__(self):
        if self.stable != (self.witness is None):
            raise ParameterError("a witness is present exactly when the verdict is unstable")

    def __bool__(self) -> bool:
        return self.stable

    @property
    def label(self) -> str:
        if not self.stable:
            return "unstable"
        return "stable" if self.certified else "not refuted"


def check_witness(f: SCF, F: Belief, tb: TieBreak | str, witness: Witness) -> bool:
    """Independently re-verify a witness with exact rational utilities."""
    tb = TieBreak.parse(tb)
    g = witness.f_prime
    if g.n != f.n or g.table == f.table or not f(witness.c):
        return False
    c = 0
    for i in range(f.n):
        a, b = utility(g, F, i), utility(f, F, i)
        bit = (witness.c >> i) & 1
        if a > b:
            if not bit:
                return False
        elif a < b or not tb.arbitrary:
            if bit:
                return False
        c |= bit << i
    return c == witness.c


def is_self_maintaining(
    f: SCF,
    F: Belief,
    tb: TieBreak | str,
    universe: Universe | Sequence[SCF] | None = None,
    allow_large: bool = False,
) -> StabilityVerdict:
    """Does f vote itself out against no alternative in ``universe``?"""
    tb = TieBreak.parse(tb)
    if universe is None:
        universe = all_universe(f.n)
    elif not isinstance(universe, Universe):
        universe = explicit_universe(universe)
    n = _same_n(f, F, universe)
    alts = universe.scfs(allow_large=allow_large)
    weights, _ = F.integer_weights()
    k = backend.kernels(n, [weights])
    [(idx, c)] = k.witness_scan([f.table], [g.table for g in alts], weights, n,
                                tb.arbitrary, threads=backend.threads())
    if idx < 0:
        return StabilityVerdict(True, None, universe.label())
    return StabilityVerdict(False, Witness(alts[idx], c, F), universe.label())


def stable_tables(
    tables: Sequence[int],
    alt_tables: Sequence[int],
    weights: Sequence[int],
    n: int,
    tb: TieBreak,
) -> list[tuple[int, int]]:
    """Batch form of :func:`is_self_maintaining` on raw tables."""
    k = backend.kernels(n, [weights])
    return k.witness_scan(tables, alt_tables, weights, n, tb.arbitrary, threads=backend.threads())


def welfare_table(scfs: Iterable[SCF], F: Belief) -> list[dict]:
    rows = []
    for f in scfs:
        us = utilities(f, F)
        rows.append({
            "scf": f.canonical(),
            "utilities": [format_rational(u) for u in us],
            "sw": format_rational(sum(us, Fraction(0))),
            "nw": format_rational(math.prod(us, start=Fraction(1))),
        })
    return rows


__all__ = [
    "TieBreak", "Universe", "all_universe", "thresholds_universe", "explicit_universe",
    "threshold_rules", "utility", "utilities", "welfare", "nash_welfare",
    "ChoiceProfileSet", "choice_profiles", "Witness", "StabilityVerdict",
    "check_witness", "is_self_maintaining", "stable_tables", "welfare_table",
]
