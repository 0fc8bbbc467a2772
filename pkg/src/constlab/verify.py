"""Machine checks of the stability and oligarchy results.

Each suite returns a list of :class:`Check` records; a suite passes when all
of its checks pass.  Suites are exhaustive at n = 3 (the default) and also
run at n = 2; the oligarchy suite uses its own sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from constlab.beliefs import iid, uniform_support
from constlab.errors import CapacityError
from constlab import jury
from constlab.scf import (
    SCF,
    NamedSCF,
    all_scfs,
    anti_dictatorships,
    classify_entangled,
    dictatorships,
    entangled_pairs,
    is_anonymous,
    is_monotone,
    is_never_negation_agnostic,
    materialize,
    necessary_conditions,
)
from constlab.stability import (
    TieBreak,
    anonymous_iid_stable,
    best_response_equilibrium,
    check_main_structural_lemma,
    check_witness,
    classify_iid,
    dictatorship_nodes,
    is_self_maintaining,
    nash_welfare,
    optimistic_classify,
    pessimistic_refute,
    pessimistic_survivors,
    thresholds_universe,
    transition_graph,
    welfare,
)

SUITES = ("opt", "pess", "iid", "appendix", "equilibrium", "scf", "jury")
P_GRID = [Fraction(k, 10) for k in range(1, 10)]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"[{mark}] {self.suite}: {self.name}{tail}"


def _need_n3(n: int) -> None:
    if n > 3:
        raise CapacityError("theorem suites enumerate every SCF and support n <= 3")


# --- optimistic ------------------------------------------------------------------


def suite_opt(n: int = 3) -> list[Check]:
    _need_n3(n)
    out = []
    for strict, name in ((False, "lexicographic belief"), (True, "strict lexicographic belief")):
        found = optimistic_classify(n, TieBreak.ARBITRARY, strict=strict)
        bad = [t for t, order in found.items()
               if (order is not None) != is_never_negation_agnostic(SCF(n, t))]
        out.append(Check(
            "opt", f"some ordering stabilizes f <=> never negation-agnostic ({name})",
            not bad, f"{len(bad)} mismatches: {bad[:8]}" if bad else f"{len(found)} SCFs",
        ))
    return out


# --- pessimistic -----------------------------------------------------------------


def _named(n: int) -> dict[str, SCF]:
    gap = SCF.from_accepted(3, ["110", "100"]) if n == 3 else None
    out = {
        "3-oligopoly": materialize(NamedSCF.oligarchy(range(3)), n),
        "consensus-duopoly(0,1)": materialize(NamedSCF.consensus_duopoly(0, 1), n),
        "oligopoly-with-veto(0;1,2)": materialize(NamedSCF.oligopoly_with_veto(0, 1, 2), n),
    }
    if gap is not None:
        out["gap example f(110)=f(100)=1"] = gap
    return out


def suite_pess(n: int = 3) -> list[Check]:
    _need_n3(n)
    out = []
    survivors = pessimistic_survivors(n, TieBreak.ARBITRARY, 1)
    out.append(Check("pess", "Arbitrary, budget 1: only constant 0 survives",
                     [f.table for f in survivors] == [0], f"survivors {[f.table for f in survivors]}"))
    bad_witness = 0
    for f in all_scfs(n):
        v = pessimistic_refute(f, TieBreak.ARBITRARY, 1)
        if not v.stable and not check_witness(f, v.witness.belief, TieBreak.ARBITRARY, v.witness):
            bad_witness += 1
    out.append(Check("pess", "every refutation witness re-verifies", bad_witness == 0,
                     f"{bad_witness} bad"))
    if n == 3:
        for name, f in _named(n).items():
            v = pessimistic_refute(f, TieBreak.STATUS_QUO_BIAS, 3)
            conds = necessary_conditions(f)
            ok = v.stable and all(conds.values())
            out.append(Check("pess", f"SQB positive: {name}", ok,
                             f"{v.label}; failed conditions {[k for k, x in conds.items() if not x]}"))
    sqb = pessimistic_survivors(n, TieBreak.STATUS_QUO_BIAS, 3)
    iid_sets = [{g.table for g in classify_iid(n, p, TieBreak.STATUS_QUO_BIAS)}
                for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))]
    stable = [f for f in sqb if f.table and all(f.table in s for s in iid_sets)]
    bad = [f.table for f in stable if not all(necessary_conditions(f).values())]
    out.append(Check("pess", "necessary conditions hold on every SQB survivor", not bad,
                     f"{len(stable)} nonzero survivors; violators {bad}"))
    return out


# --- i.i.d. ----------------------------------------------------------------------


def _special(n: int) -> set[int]:
    return {0} | {g.table for g in dictatorships(n) + anti_dictatorships(n)}


def suite_iid(n: int = 3) -> list[Check]:
    _need_n3(n)
    out = []
    arb = TieBreak.ARBITRARY
    sqb = TieBreak.STATUS_QUO_BIAS
    half = Fraction(1, 2)
    unbiased = {f.table for f in classify_iid(n, half, arb)}
    out.append(Check("iid", "unbiased, Arbitrary: stable = dictatorships, anti-dictatorships, 0",
                     unbiased == _special(n), f"{sorted(unbiased)}"))

    nested = True
    for p in (half, Fraction(1, 3)):
        a = {f.table for f in classify_iid(n, p, arb)}
        s = {f.table for f in classify_iid(n, p, sqb)}
        nested &= a <= s
    out.append(Check("iid", "stable under Arbitrary implies stable under SQB", nested))

    dict_f = dictatorships(n)[0]
    welfare_ok, lemma_ok, family_seen = True, True, []
    for p in P_GRID:
        if p == half:
            continue
        F = iid(p, n)
        sw_d, nw_d = welfare(dict_f, F), nash_welfare(dict_f, F)
        stable = classify_iid(n, p, arb)
        for f in stable:
            if f.table == 0:
                continue
            if welfare(f, F) > sw_d or nash_welfare(f, F) > nw_d:
                welfare_ok = False
            if f.table not in _special(n) and not check_main_structural_lemma(f, p):
                lemma_ok = False
        if n == 3 and _family_member(stable, p):
            family_seen.append(str(p))
    out.append(Check("iid", "biased p: no stable SCF beats dictatorship welfare (SW, NW)", welfare_ok))
    out.append(Check("iid", "structural lemma holds on every other stable SCF", lemma_ok))
    if n == 3:
        out.append(Check("iid", "utility family ((1-p)^2, (1-p)(p+p^2+(1-p)^2), (1-p)(1+p)) is stable",
                         bool(family_seen), f"at p in {family_seen}"))

        duo = materialize(NamedSCF.consensus_duopoly(0, 1), n)
        stable_all, dominates = True, True
        for p in P_GRID:
            stable_all &= is_self_maintaining(duo, iid(p, n), sqb).stable
            if p <= half:
                F = iid(p, n)
                dominates &= welfare(duo, F) >= welfare(dict_f, F) and nash_welfare(duo, F) >= nash_welfare(dict_f, F)
        out.append(Check("iid", "consensus-duopoly is SQB-stable for every grid p", stable_all))
        out.append(Check("iid", "consensus-duopoly welfare >= dictatorship for p <= 1/2", dominates))

    G = transition_graph(n, half, arb)
    sinks = {G.scfs[i].table for i in G.sinks()}
    reach = G.can_reach(dictatorship_nodes(G))
    stuck = [G.scfs[i].table for i in range(len(G)) if G.edges[i] and i not in reach]
    out.append(Check("iid", "transition graph: sinks are the 7 stable SCFs", sinks == _special(n)))
    out.append(Check("iid", "transition graph: every non-sink reaches a dictatorship", not stuck,
                     f"stuck {stuck[:8]}"))
    return out


def _family_member(stable, p: Fraction) -> bool:
    from constlab.stability import utilities

    q = 1 - p
    target = sorted([q * q, q * (p + p * p + q * q), q * (1 + p)])
    return any(sorted(utilities(f, iid(p, f.n))) == target for f in stable)


# --- anonymous monotone rules ----------------------------------------------------


def three_vector_refutation(n: int, literal: bool = False) -> tuple[SCF, "object"]:
    """Three-vector uniform belief against simple majority at odd n >= 5.

    Each vector has exactly k ones (k = (n+1)/2), voters 0..k-1 each vote 0
    in two of the three, and the challenger is the threshold k+1.  ``literal=True`` builds the variant whose third vector zeroes
    voters k..n-1 instead; there voters k-2 and k-1 vote 0 only once, so it
    does not refute.
    """
    k = (n + 1) // 2
    full = (1 << n) - 1
    low = lambda m: (1 << m) - 1
    v1 = full & ~low(k - 1)                       # zeros at voters < k-1
    v2 = full & ~(low(k - 2) | (1 << (k - 1)))    # zeros at voters < k-2 and k-1
    if literal:
        v3 = low(k)                               # zeros at voters >= k
    else:
        # zeros at voters k-2, k-1 and >= k+2: k-1 zeros, so threshold k+1 rejects it
        v3 = full & ~(0b11 << (k - 2)) & low(k + 2)
    challenger = materialize(NamedSCF.threshold(k + 1), n)
    return challenger, uniform_support([v1, v2, v3], n)


def suite_appendix(n: int = 3) -> list[Check]:
    out = []
    sqb = TieBreak.STATUS_QUO_BIAS
    grid = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
    ok, detail = True, []
    for m in (3, 5, 7):
        majority = (m + 1) // 2
        for p in grid:
            closed = anonymous_iid_stable(m, p, sqb)
            graph = transition_graph(m, iid(p, m), sqb, "thresholds")
            tabled = [int(graph.labels[i].split(":")[1]) for i in graph.sinks()]
            if closed != [majority] or tabled != [majority]:
                ok = False
                detail.append(f"n={m} p={p}: {closed} / {tabled}")
    out.append(Check("appendix", "thresholds, iid, SQB: simple majority is the unique stable rule",
                     ok, "; ".join(detail)))

    sm3 = materialize(NamedSCF.simple_majority(), 3)
    v3 = pessimistic_refute(sm3, sqb, 3, thresholds_universe(3))
    out.append(Check("appendix", "pessimistic SQB: simple majority survives at n=3", v3.stable, v3.label))
    for m in (5, 7):
        sm = materialize(NamedSCF.simple_majority(), m)
        v = pessimistic_refute(sm, sqb, 3, thresholds_universe(m))
        challenger, F = three_vector_refutation(m)
        direct = is_self_maintaining(sm, F, sqb, [challenger])
        literal = is_self_maintaining(sm, three_vector_refutation(m, literal=True)[1], sqb, [challenger])
        ok = (not v.stable and check_witness(sm, v.witness.belief, sqb, v.witness)
              and not direct.stable and len(F.support()) == 3)
        out.append(Check("appendix", f"pessimistic SQB: simple majority refuted at n={m}", ok,
                         f"search: {v.witness.belief.label if v.witness else 'none'}; "
                         f"three-vector belief: {direct.label}; literal variant: {literal.label}"))

    survivors = [k for k in range(1, 4)
                 if pessimistic_refute(materialize(NamedSCF.threshold(k), 3), TieBreak.ARBITRARY, 1,
                                       thresholds_universe(3)).stable]
    out.append(Check("appendix", "pessimistic Arbitrary: no threshold survives at n=3", not survivors,
                     f"survivors {survivors}"))

    anon = [f.table for f in all_scfs(3) if is_anonymous(f) and is_monotone(f)]
    out.append(Check("appendix", "anonymous monotone SCFs at n=3 are the thresholds k=0..4", len(anon) == 5,
                     f"{len(anon)} found"))
    return out


# --- equilibrium -----------------------------------------------------------------


def suite_equilibrium(n: int = 3) -> list[Check]:
    ok = True
    for i in range(n):
        d = materialize(NamedSCF.dictatorship(i), n)
        a = materialize(NamedSCF.anti_dictatorship(i), n)
        ok &= best_response_equilibrium(a) == d and best_response_equilibrium(d) == d
    return [Check("equilibrium", "anti-dictatorship and dictatorship both map to dictatorship", ok)]


# --- structural predicates -------------------------------------------------------


def suite_scf(n: int = 3) -> list[Check]:
    _need_n3(n)
    out = []
    named = [
        NamedSCF.unanimity(), NamedSCF.simple_majority(), NamedSCF.qualified_majority(Fraction(2, 3)),
        NamedSCF.constant_zero(),
        *[NamedSCF.dictatorship(i) for i in range(n)],
        *[NamedSCF.anti_dictatorship(i) for i in range(n)],
    ]
    if n >= 3:
        named += [NamedSCF.oligarchy(range(3)), NamedSCF.consensus_duopoly(0, 1),
                  NamedSCF.oligopoly_with_veto(0, 1, 2)]
    bad = [str(s) for s in named if not is_never_negation_agnostic(materialize(s, n))]
    out.append(Check("scf", "named rules are never negation-agnostic", not bad, f"{bad}"))
    odd = []
    for f in all_scfs(n):
        if entangled_pairs(f) and classify_entangled(f).kind not in ("three_oligopoly", "flower", "conservative_flower"):
            odd.append(f.table)
    out.append(Check("scf", "entangled SCFs are a 3-oligopoly or flower form", not odd, f"{odd[:8]}"))
    if n == 3:
        unique = True
        for center in range(3):
            others = [j for j in range(3) if j != center]
            for k in (1, 2):
                for partners in combinations(others, k):
                    pairs = frozenset(tuple(sorted((center, j))) for j in partners)
                    cons = [f for f in all_scfs(3)
                            if entangled_pairs(f) == pairs
                            and classify_entangled(f).kind == "conservative_flower"]
                    unique &= len(cons) == 1
        out.append(Check("scf", "one conservative SCF per flower pair-set", unique))
    return out


# --- oligarchy model -------------------------------------------------------------


def suite_jury(n: int = jury.DEFAULT_N) -> list[Check]:
    out = []
    for m in sorted({51, n}):
        one = jury.analyze(jury.JuryConfig(m, 1.0, 0.6)).stable_sizes
        zero = jury.analyze(jury.JuryConfig(m, 0.0, 0.6)).stable_sizes
        out.append(Check("jury", f"lambda=1 gives {{1, 2}} at n={m}", one == [1, 2], f"{one}"))
        out.append(Check("jury", f"lambda=0 gives {{n}} at n={m}", zero == [m], f"{zero}"))
    lambdas, ps = jury.paper_grid()
    cells = jury.stable_grid(lambdas, ps, n)
    by = {(c.lam, c.p): c for c in cells}
    big = lambda c: max([s for s in c.stable_sizes if s >= jury.LARGE_MIN], default=0)
    mono = all(big(by[(lambdas[a + 1], p)]) <= big(by[(lambdas[a], p)])
               for a in range(len(lambdas) - 1) for p in ps)
    mono &= all(big(by[(lam, ps[b + 1])]) <= big(by[(lam, ps[b])])
                for b in range(len(ps) - 1) for lam in lambdas)
    out.append(Check("jury", "largest committee weakly decreasing in lambda and p", mono))
    corner = by[(0.9, 0.6)]
    out.append(Check("jury", "no committee at lambda=0.9, p=0.6",
                     all(s < jury.LARGE_MIN for s in corner.stable_sizes), f"{list(corner.stable_sizes)}"))
    res = jury.analyze(jury.JuryConfig(max(n, 400), 0.6, 0.6))
    out.append(Check("jury", "committee point near 217 at lambda=p=0.6",
                     res.largest is not None and abs(res.largest - 217) <= 2, f"largest {res.largest}"))
    disc = sum(c.discrepancies for c in cells)
    out.append(Check("jury", "right-maximal and halving-safe <=> full check on the grid", disc == 0,
                     f"{disc} discrepancies"))
    lost = [(c.lam, c.p, c.filtered_out_stable) for c in cells if c.filtered_out_stable]
    out.append(Check("jury", "Hoeffding filter never discards a stable size", not lost, f"{lost[:4]}"))
    worst = 0.0
    for p in (Fraction(3, 5), Fraction(13, 20), Fraction(7, 10)):
        for i in range(1, 61):
            exact = exact_majority_probability(i, p)
            worst = max(worst, abs(jury.majority_correct_probability(i, float(p)) - float(exact)))
    out.append(Check("jury", "P(i) within 1e-13 of the exact value for i <= 60", worst <= 1e-13,
                     f"max error {worst:.2e}"))
    out.append(Check("jury", "Hoeffding bound <= P(i) for i <= 60", hoeffding_below_p(),))
    return out


def hoeffding_below_p(sizes=range(1, 61), ps=(0.6, 0.65, 0.7)) -> bool:
    for p in ps:
        for i in sizes:
            if 1 - math.exp(-2 * i * (p - 0.5) ** 2) > jury.majority_correct_probability(i, p):
                return False
    return True


def exact_majority_probability(i: int, p: Fraction) -> Fraction:
    """Exact Pr[Binomial(i, p) > i/2] with rational p."""
    a, b = p.numerator, p.denominator
    num = sum(math.comb(i, k) * a**k * (b - a) ** (i - k) for k in range(i // 2 + 1, i + 1))
    return Fraction(num, b**i)


_RUNNERS = {
    "opt": suite_opt,
    "pess": suite_pess,
    "iid": suite_iid,
    "appendix": suite_appendix,
    "equilibrium": suite_equilibrium,
    "scf": suite_scf,
    "jury": suite_jury,
}


def run_suite(name: str, n: int = 3, jury_n: int = jury.DEFAULT_N) -> list[Check]:
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, n, jury_n))
        return out
    if name not in _RUNNERS:
        raise KeyError(name)
    if name == "jury":
        return suite_jury(jury_n)
    return _RUNNERS[name](n)

