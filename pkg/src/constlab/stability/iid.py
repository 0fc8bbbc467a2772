"""Exhaustive classification under i.i.d. beliefs."""

from __future__ import annotations

from fractions import Fraction

from constlab.beliefs import IIDParameter, iid, iid_weights
from constlab.errors import CapacityError
from constlab.scf import MAX_ENUMERATION_N, SCF
from constlab.stability.core import TieBreak, stable_tables, utilities


def classify_iid(n: int, p, tb, allow_large: bool = False) -> list[SCF]:
    """All SCFs at n that are self-maintaining against every SCF at n.

    n = 4 (65,536 incumbents and as many challengers) needs ``allow_large``.
    """
    if not isinstance(p, IIDParameter):
        p = IIDParameter(p)
    tb = TieBreak.parse(tb)
    limit = MAX_ENUMERATION_N if allow_large else 3
    if n > limit:
        raise CapacityError(f"classify_iid supports n <= {limit} (n=4 needs allow_large)")
    weights, _ = iid_weights(p.p, n)
    tables = range(1 << (1 << n))
    results = stable_tables(tables, tables, weights, n, tb)
    return [SCF(n, t) for t, (idx, _) in zip(tables, results) if idx < 0]


def thresholds(p) -> tuple[Fraction, Fraction]:
    """The anti-dictatorship and dictatorship utility levels 2p(1-p), p^2+(1-p)^2."""
    p = p.p if isinstance(p, IIDParameter) else IIDParameter(p).p
    return 2 * p * (1 - p), p * p + (1 - p) ** 2


def partition_S123(f: SCF, p) -> tuple[frozenset, frozenset, frozenset]:
    low, high = thresholds(p)
    us = utilities(f, iid(p, f.n))
    s1 = frozenset(i for i, u in enumerate(us) if u < low)
    s2 = frozenset(i for i, u in enumerate(us) if low <= u < high)
    s3 = frozenset(i for i, u in enumerate(us) if u >= high)
    return s1, s2, s3


def check_main_structural_lemma(f: SCF, p) -> bool:
    """Both rejection clauses of the structural property.

    f must reject every v with v_i = 1 for all i in S1 ∪ S2, and every v with
    v_i = 0 for all i in S2 ∪ S3.  A clause over an empty voter set is vacuous.
    """
    s1, s2, s3 = partition_S123(f, p)
    ones = sum(1 << i for i in s1 | s2)
    zeros = sum(1 << i for i in s2 | s3)
    for v in f.accepted():
        if ones and v & ones == ones:
            return False
        if zeros and not v & zeros:
            return False
    return True
