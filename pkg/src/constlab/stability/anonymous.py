"""Anonymous monotone rules (thresholds ``η >= k``) under i.i.d. beliefs.

Every voter has the same utility under a threshold rule and an i.i.d. belief,
so the utility has a closed form and no truth table is needed; this keeps odd
n up to 25 cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from constlab.beliefs import IIDParameter
from constlab.errors import CapacityError, ParameterError
from constlab.stability.core import TieBreak

MAX_ANONYMOUS_N = 25


def _p(p) -> Fraction:
    return p.p if isinstance(p, IIDParameter) else IIDParameter(p).p


def threshold_utility(n: int, k: int, p) -> Fraction:
    """Utility of any voter under ``η >= k`` when votes are i.i.d. Bernoulli(p).

    A voter voting 1 agrees when the other n-1 supply at least k-1 votes; a
    voter voting 0 agrees when the others supply at most k-1.
    """
    if not 0 <= k <= n + 1:
        raise ParameterError(f"k must lie in [0, {n + 1}]")
    p = _p(p)
    q = 1 - p
    pmf = [comb(n - 1, m) * p**m * q ** (n - 1 - m) for m in range(n)]
    at_least = sum(pmf[max(k - 1, 0):], Fraction(0))
    at_most = sum(pmf[: max(min(k, n), 0)], Fraction(0))
    return p * at_least + q * at_most


def threshold_utilities(n: int, p) -> dict[int, Fraction]:
    if n > MAX_ANONYMOUS_N:
        raise CapacityError(f"anonymous analysis supports n <= {MAX_ANONYMOUS_N}")
    return {k: threshold_utility(n, k, p) for k in range(1, n + 1)}


def threshold_edges(n: int, p, tb) -> dict[int, list[int]]:
    """Motions that pass between thresholds k = 1..n.

    With equal utilities across voters the whole electorate votes together:
    all for the challenger when it is strictly better, all against when it is
    worse, and on a tie either way (Arbitrary) or against (SQB).  Every
    threshold accepts the all-ones vector and rejects the all-zeros vector.
    """
    tb = TieBreak.parse(tb)
    us = threshold_utilities(n, p)
    edges = {}
    for k, u in us.items():
        edges[k] = [
            k2 for k2, u2 in us.items()
            if k2 != k and (u2 > u or (tb.arbitrary and u2 == u))
        ]
    return edges


def anonymous_iid_stable(n: int, p, tb) -> list[int]:
    """Thresholds k that no other threshold can replace."""
    return [k for k, out in threshold_edges(n, p, tb).items() if not out]
