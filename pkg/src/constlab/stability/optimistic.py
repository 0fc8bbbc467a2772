"""Optimistic approach: search for a lexicographic belief that keeps f in place."""

from __future__ import annotations

from typing import Iterable, Sequence

from constlab import backend
from constlab.beliefs import Belief, lexicographic, lexicographic_orders
from constlab.errors import CapacityError
from constlab.scf import SCF
from constlab.stability.core import TieBreak


def lexicographic_weights(order: Sequence[int], strict: bool = False) -> list[int]:
    """Integer weights of the lexicographic belief on ``order``."""
    size = len(order)
    weights = [0] * size
    if strict:
        for pos, v in enumerate(order, start=1):
            weights[v] = 1 << (size - pos)
        return weights
    for pos, v in enumerate(order[:-1], start=1):
        weights[v] = 1 << (size - 1 - pos)
    weights[order[-1]] = 1
    return weights


def _orders(n: int, orders):
    if orders is not None:
        return [list(o) for o in orders]
    if n > 3:
        raise CapacityError("exhaustive ordering search is limited to n <= 3; pass orders explicitly")
    return list(lexicographic_orders(n))


def optimistic_classify(
    n: int,
    tb=TieBreak.ARBITRARY,
    orders: Iterable[Sequence[int]] | None = None,
    strict: bool = False,
) -> dict[int, list[int] | None]:
    """For every SCF at n, the first ordering that makes it stable (or None).

    The challenger set is every SCF at n.  ``strict`` uses the tie-free
    variant of the lexicographic belief.
    """
    tb = TieBreak.parse(tb)
    orders = _orders(n, orders)
    rows = [lexicographic_weights(o, strict) for o in orders]
    tables = range(1 << (1 << n))
    k = backend.kernels(n, rows)
    res = k.belief_scan(tables, tables, rows, n, tb.arbitrary, stop_first=True,
                        threads=backend.threads())
    return {t: (orders[first] if first >= 0 else None) for t, (_, first, _) in zip(tables, res)}


def optimistic_search(f: SCF, tb=TieBreak.ARBITRARY, orders=None, strict: bool = False) -> Belief | None:
    """A lexicographic belief under which f is self-maintaining, if one exists."""
    tb = TieBreak.parse(tb)
    orders = _orders(f.n, orders)
    rows = [lexicographic_weights(o, strict) for o in orders]
    tables = range(1 << f.size)
    k = backend.kernels(f.n, rows)
    [(_, first, _)] = k.belief_scan([f.table], tables, rows, f.n, tb.arbitrary,
                                    stop_first=True, threads=backend.threads())
    return lexicographic(orders[first], f.n, strict) if first >= 0 else None
