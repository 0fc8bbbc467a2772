"""Utilities, choice vectors and single self-maintenance verdicts."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from constlab.beliefs import iid, point_mass, uniform_support
from constlab.errors import DimensionError, ParameterError
from constlab.scf import SCF, NamedSCF, all_scfs, materialize
from constlab.stability import (
    StabilityVerdict,
    TieBreak,
    Witness,
    check_witness,
    choice_profiles,
    explicit_universe,
    is_self_maintaining,
    nash_welfare,
    utilities,
    utility,
    welfare,
)

ps = st.fractions(min_value=0, max_value=1, max_denominator=30)
ARB, SQB = TieBreak.ARBITRARY, TieBreak.STATUS_QUO_BIAS


def mat(text, n=3):
    return materialize(NamedSCF.parse(text), n)


@settings(max_examples=40)
@given(ps)
def test_closed_form_utilities(p):
    F = iid(p, 3)
    q = 1 - p
    for i in range(3):
        d = mat(f"dictatorship:{i}")
        assert utility(d, F, i) == 1
        for j in range(3):
            if j != i:
                assert utility(d, F, j) == p * p + q * q
                assert utility(mat(f"anti_dictatorship:{i}"), F, j) == 2 * p * q
    duo = mat("consensus_duopoly:0,1")
    assert utility(duo, F, 0) == p * p + q
    assert utility(duo, F, 2) == q * 2 * p * q + p**3 + q**3


@settings(max_examples=40)
@given(ps)
def test_dictatorship_welfare(p):
    F = iid(p, 3)
    s = p * p + (1 - p) ** 2
    d = mat("dictatorship:1")
    assert welfare(d, F) == 1 + 2 * s
    assert nash_welfare(d, F) == s * s


def test_constant_zero_welfare():
    F = iid("1/2", 3)
    z = mat("constant_zero")
    assert utilities(z, F) == [Fraction(1, 2)] * 3
    assert welfare(z, F) == Fraction(3, 2) and nash_welfare(z, F) == Fraction(1, 8)


def test_kernel_utilities_equal_exact_sum():
    F = iid("2/7", 3)
    for t in range(0, 256, 7):
        f = SCF(3, t)
        assert utilities(f, F) == [utility(f, F, i) for i in range(3)]


def test_choice_profiles_examples():
    F = iid("1/2", 3)
    sm, d0 = mat("simple_majority"), mat("dictatorship:0")
    cp = choice_profiles(sm, d0, F, ARB)
    assert cp.fixed == {0: 1, 1: 0, 2: 0} and not cp.free
    # a dictator is forced to keep the dictatorship
    for t in range(0, 256, 5):
        g = SCF(3, t)
        if g != d0:
            assert choice_profiles(d0, g, iid("1/3", 3), ARB).fixed[0] == 0
    same = choice_profiles(sm, sm, F, SQB)
    assert list(same) == [0] and len(same) == 1
    assert len(choice_profiles(sm, sm, F, ARB)) == 8


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), ps, st.sampled_from([ARB, SQB]))
def test_choice_profile_set_partition(ft, gt, p, tb):
    cp = choice_profiles(SCF(3, ft), SCF(3, gt), iid(p, 3), tb)
    assert set(cp.fixed) | cp.free == {0, 1, 2}
    assert not set(cp.fixed) & cp.free
    if tb is SQB:
        assert not cp.free
    members = list(cp)
    assert len(members) == len(cp) == 2 ** len(cp.free)
    assert all(c in cp for c in members)
    assert sum(1 for c in range(8) if c in cp) == len(cp)


def test_verdict_examples():
    F = iid("1/2", 3)
    for tb in (ARB, SQB):
        assert is_self_maintaining(mat("constant_zero"), F, tb).stable
    for i in range(3):
        assert is_self_maintaining(mat(f"dictatorship:{i}"), iid("1/3", 3), ARB).stable
    v = is_self_maintaining(mat("simple_majority"), F, ARB)
    assert not v.stable and v.label == "unstable"
    assert check_witness(mat("simple_majority"), F, ARB, v.witness)


def test_witness_recheck_rejects_forgeries():
    F = iid("1/2", 3)
    sm = mat("simple_majority")
    w = is_self_maintaining(sm, F, ARB).witness
    assert not check_witness(sm, F, ARB, Witness(sm, w.c, F))           # challenger must differ
    assert not check_witness(sm, F, ARB, Witness(w.f_prime, 0, F))      # f(000) = 0
    d0 = mat("dictatorship:0")
    # voter 0 is forced against replacing the dictatorship, so c=111 is inadmissible
    assert not check_witness(d0, F, ARB, Witness(SCF(3, 255), 7, F))


def test_verdict_invariants():
    with pytest.raises(ParameterError):
        StabilityVerdict(True, Witness(SCF(3, 1), 0), "all")
    with pytest.raises(ParameterError):
        StabilityVerdict(False, None, "all")
    assert StabilityVerdict(True, None, "all", certified=False).label == "not refuted"


def test_explicit_universe_and_dimensions():
    F = iid("1/2", 3)
    v = is_self_maintaining(mat("simple_majority"), F, ARB, [mat("dictatorship:0")])
    assert v.stable  # voters 1 and 2 outvote voter 0
    assert v.universe == "explicit[1]"
    with pytest.raises(DimensionError):
        is_self_maintaining(mat("simple_majority"), iid("1/2", 4), ARB)
    with pytest.raises(DimensionError):
        explicit_universe([SCF(2, 1), SCF(3, 1)])


def test_arbitrary_stability_implies_sqb_stability():
    for p in ("1/2", "1/3"):
        F = iid(p, 3)
        for f in all_scfs(3):
            if is_self_maintaining(f, F, ARB).stable:
                assert is_self_maintaining(f, F, SQB).stable


def test_point_mass_unseats_everything_under_arbitrary():
    # belief on the accepted vector: every voter's utility ties against a copy
    # of f that differs off the support, so all voters are free
    f = mat("simple_majority")
    F = point_mass(3, 3)  # 110
    v = is_self_maintaining(f, F, ARB)
    assert not v.stable and check_witness(f, F, ARB, v.witness)


def test_uniform_support_example():
    f = mat("simple_majority", 5)
    F = uniform_support([0b00011, 0b00101, 0b00110], 5)
    g = materialize(NamedSCF.threshold(2), 5)
    v = is_self_maintaining(f, F, SQB, [g])
    assert not v.stable and v.witness.c == 0b00111
