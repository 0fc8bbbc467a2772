"""Exhaustive classifications, searches, graphs and the equilibrium map at small n."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from constlab.beliefs import iid, lexicographic
from constlab.errors import CapacityError
from constlab.scf import (
    SCF,
    NamedSCF,
    all_scfs,
    anti_dictatorships,
    dictatorships,
    is_never_negation_agnostic,
    materialize,
    vector_from_string,
)
from constlab.stability import (
    TieBreak,
    anonymous_iid_stable,
    best_response_equilibrium,
    check_main_structural_lemma,
    check_witness,
    classify_iid,
    dictatorship_nodes,
    dominant_strategy_profile,
    is_self_maintaining,
    optimistic_classify,
    optimistic_search,
    partition_S123,
    pessimistic_refute,
    pessimistic_survivors,
    stability_report,
    threshold_utility,
    thresholds,
    thresholds_universe,
    transition_graph,
    utilities,
)
from constlab.stability.graph import nash_welfare_of

ARB, SQB = TieBreak.ARBITRARY, TieBreak.STATUS_QUO_BIAS
HALF = Fraction(1, 2)
SEVEN = {0, 15, 51, 85, 170, 204, 240}


def mat(text, n=3):
    return materialize(NamedSCF.parse(text), n)


def tables(scfs):
    return {f.table for f in scfs}


# --- i.i.d. beliefs -------------------------------------------------------------


def test_unbiased_classification():
    expect = {0} | tables(dictatorships(3)) | tables(anti_dictatorships(3))
    assert expect == SEVEN
    assert tables(classify_iid(3, HALF, ARB)) == SEVEN


def test_unbiased_sqb_adds_consensus_duopolies():
    stable = tables(classify_iid(3, HALF, SQB))
    duos = {mat(f"consensus_duopoly:{i},{j}").table for i, j in ((0, 1), (0, 2), (1, 2))}
    assert SEVEN | duos <= stable


def test_biased_family_present():
    # f(011) = f(001) = 1, f(010) = 0 and the rest as the lemma forces
    p = Fraction(1, 3)
    q = 1 - p
    fam = [f for f in classify_iid(3, p, ARB)
           if f(vector_from_string("011")) and f(vector_from_string("001")) and not f(vector_from_string("010"))]
    assert fam
    target = sorted([q * q, q * (p + p * p + q * q), q * (1 + p)])
    assert any(sorted(utilities(f, iid(p, 3))) == target for f in fam)


def test_classify_capacity():
    with pytest.raises(CapacityError):
        classify_iid(4, HALF, ARB)


def test_partition_examples():
    p = Fraction(1, 3)
    assert thresholds(p) == (Fraction(4, 9), Fraction(5, 9))
    assert partition_S123(mat("dictatorship:0"), p) == (frozenset(), frozenset(), frozenset({0, 1, 2}))
    assert partition_S123(mat("constant_zero"), p)[2] == frozenset({0, 1, 2})
    for t in range(0, 256, 9):
        assert partition_S123(SCF(3, t), HALF)[1] == frozenset()


def test_structural_lemma():
    for i in range(3):
        for p in (Fraction(1, 5), HALF, Fraction(7, 10)):
            assert check_main_structural_lemma(mat(f"dictatorship:{i}"), p)
    for k in range(1, 10):
        p = Fraction(k, 10)
        if p == HALF:
            continue
        for f in classify_iid(3, p, ARB):
            if f.table not in SEVEN:
                assert check_main_structural_lemma(f, p)


def test_structural_lemma_rejects_full_acceptance():
    # everyone lands in S3 at p = 1/2 under the constant 1; it accepts the all-zeros vector
    assert not check_main_structural_lemma(SCF(3, 255), HALF)


# --- optimistic ---------------------------------------------------------------


def test_optimistic_strict_ordering_characterization():
    found = optimistic_classify(3, ARB, strict=True)
    assert len(found) == 256
    for t, order in found.items():
        assert (order is not None) == is_never_negation_agnostic(SCF(3, t))


def test_optimistic_paper_weights_miss_tied_challengers():
    # with the last two weights equal, every voter ties between f and f with
    # the all-zeros and all-ones decisions flipped, so NNA rules with f(000)=f(111)=0 fall
    found = optimistic_classify(3, ARB)
    bad = sorted(t for t, order in found.items() if (order is not None) != is_never_negation_agnostic(SCF(3, t)))
    assert len(bad) == 28
    assert {105, 150} <= set(bad)
    for t in bad:
        f = SCF(3, t)
        assert is_never_negation_agnostic(f) and found[t] is None
        if t not in (105, 150):
            assert not f(0) and not f(7)


def test_optimistic_search_returns_witness_belief():
    f = mat("simple_majority")
    F = optimistic_search(f, ARB, strict=True)
    assert F is not None and F.label == "lexicographic-strict"
    assert is_self_maintaining(f, F, ARB).stable
    assert optimistic_search(SCF(3, 255), ARB, strict=True) is None


def test_optimistic_capacity():
    with pytest.raises(CapacityError):
        optimistic_classify(4, ARB)


# --- pessimistic ----------------------------------------------------------------

SQB_SURVIVORS = [0, 10, 12, 14, 34, 42, 48, 50, 68, 76, 80, 84, 112, 136, 138, 140, 142, 160,
                 162, 168, 170, 176, 178, 192, 196, 200, 204, 208, 212, 224, 232, 240]


def test_arbitrary_budget_one_collapse():
    assert [f.table for f in pessimistic_survivors(3, ARB, 1)] == [0]
    for f in all_scfs(2):
        if f.table:
            v = pessimistic_refute(f, ARB, 1)
            assert not v.stable and len(v.witness.belief.support()) == 1


def test_sqb_survivors_frozen():
    # frozen from an exhaustive run; every listed rule is also re-checked below
    assert [f.table for f in pessimistic_survivors(3, SQB, 3)] == SQB_SURVIVORS


@pytest.mark.parametrize("text", ["oligarchy:0,1,2", "consensus_duopoly:0,1", "oligopoly_with_veto:0,1,2"])
def test_entangled_rules_survive(text):
    v = pessimistic_refute(mat(text), SQB, 3)
    assert v.stable and not v.certified and v.label == "not refuted"


def test_refutation_witnesses_recheck():
    for t in range(1, 256, 5):
        f = SCF(3, t)
        for tb, budget in ((SQB, 3), (ARB, 1)):
            v = pessimistic_refute(f, tb, budget)
            if not v.stable:
                assert check_witness(f, v.witness.belief, tb, v.witness)


def test_simple_majority_pessimistic():
    assert pessimistic_refute(mat("simple_majority"), SQB, 3).stable
    for n in (5, 7):
        sm = materialize(NamedSCF.simple_majority(), n)
        for universe in (None, thresholds_universe(n)):
            v = pessimistic_refute(sm, SQB, 3, universe)
            assert not v.stable and len(v.witness.belief.support()) == 3
            assert check_witness(sm, v.witness.belief, SQB, v.witness)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_three_vector_construction(n):
    from constlab.verify import three_vector_refutation

    sm = materialize(NamedSCF.simple_majority(), n)
    g, F = three_vector_refutation(n)
    k = (n + 1) // 2
    assert all(v.bit_count() == k for v in F.support())
    assert not is_self_maintaining(sm, F, SQB, [g]).stable
    _, literal = three_vector_refutation(n, literal=True)
    assert is_self_maintaining(sm, literal, SQB, [g]).stable


# --- thresholds -----------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.fractions(0, 1, max_denominator=12))
def test_threshold_closed_form_matches_table(n, p):
    F = iid(p, n)
    for k in range(1, n + 1):
        us = utilities(materialize(NamedSCF.threshold(k), n), F)
        assert us == [threshold_utility(n, k, p)] * n


@pytest.mark.parametrize("n", [3, 5, 7])
@pytest.mark.parametrize("p", ["1/3", "1/2", "2/3"])
def test_simple_majority_unique_threshold(n, p):
    for tb in (SQB, ARB):
        assert anonymous_iid_stable(n, p, tb) == [(n + 1) // 2]


def test_threshold_routes_agree():
    closed = transition_graph(5, Fraction(1, 3), SQB, "thresholds")
    table = transition_graph(5, iid(Fraction(1, 3), 5), SQB, "thresholds")
    assert closed.labels == table.labels and closed.edges == table.edges


def test_large_threshold_graph():
    assert anonymous_iid_stable(25, HALF, SQB) == [13]
    with pytest.raises(CapacityError):
        transition_graph(26, HALF, SQB, "thresholds")


# --- transition graph ---------------------------------------------------------


@pytest.fixture(scope="module")
def unbiased_graph():
    return transition_graph(3, HALF, ARB)


def test_graph_sinks_and_paths(unbiased_graph):
    G = unbiased_graph
    assert {G.scfs[i].table for i in G.sinks()} == SEVEN
    reach = G.can_reach(dictatorship_nodes(G))
    for i in range(len(G)):
        if G.edges[i]:
            assert i in reach
            path = G.shortest_path(i, dictatorship_nodes(G))
            assert path[0] == i and G.scfs[path[-1]].table in tables(dictatorships(3))
            assert all(b in G.edges[a] for a, b in zip(path, path[1:]))


def test_out_degree_zero_iff_stable(unbiased_graph):
    G = unbiased_graph
    F = iid(HALF, 3)
    for i in range(0, 256, 11):
        assert (G.out_degree(i) == 0) == is_self_maintaining(G.scfs[i], F, ARB).stable


def test_graph_exports(unbiased_graph):
    G = unbiased_graph
    data = json.loads(G.dumps_json())
    assert data["config"] == {"n": 3, "tie_break": "arbitrary", "universe": "all", "belief": "iid:1/2"}
    assert len(data["nodes"]) == 256
    dot = G.to_dot()
    assert dot.startswith("digraph") and dot.count("doublecircle") == 7
    i = G.index("n=3;table=aa")  # dictatorship of voter 0
    assert G.welfare(i) == 2 and nash_welfare_of(G, i) == Fraction(1, 4)
    assert G.reachable_sinks(i) == {i}


def test_thresholds_graph_sink():
    G = transition_graph(5, iid(HALF, 5), SQB, "thresholds")
    assert [G.labels[i] for i in G.sinks()] == ["threshold:3"]


def test_full_graph_capacity():
    with pytest.raises(CapacityError):
        transition_graph(4, HALF, ARB)


# --- equilibrium ------------------------------------------------------------------


def test_equilibrium_dictatorships():
    for i in range(3):
        d = mat(f"dictatorship:{i}")
        assert best_response_equilibrium(mat(f"anti_dictatorship:{i}")) == d
        assert best_response_equilibrium(d) == d


def test_equilibrium_other_rules():
    sm = mat("simple_majority")
    assert best_response_equilibrium(sm) == sm
    assert dominant_strategy_profile(mat("anti_dictatorship:0"))[0] == (1, 0)
    undefined = [f for f in all_scfs(3) if best_response_equilibrium(f) is None]
    assert len(undefined) == 152


# --- report ---------------------------------------------------------------------


def test_report_shape():
    F = iid(HALF, 3)
    rep = stability_report(list(all_scfs(3)), F, ARB)
    assert len(rep["stable_set"]) == 7
    assert len(rep["witnesses"]) == 249
    assert set(rep) == {"config", "stable_set", "witnesses", "welfare_table"}
    row = rep["welfare_table"][0]
    assert row == {"scf": "n=3;table=0", "utilities": ["1/2"] * 3, "sw": "3/2", "nw": "1/8"}
    for name, w in rep["witnesses"].items():
        assert set(w) == {"f_prime", "c"}


def test_lexicographic_belief_in_report():
    order = [1, 2, 4, 3, 5, 6, 0, 7]
    F = lexicographic(order, 3, strict=True)
    rep = stability_report([mat("simple_majority")], F, ARB)
    assert rep["config"]["belief"] == "lexicographic-strict"
