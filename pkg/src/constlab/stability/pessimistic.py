"""Pessimistic approach: bounded search for a belief that unseats f.

The search covers every belief that is uniform on a support of at most
``support_budget`` vectors (point masses included).  Finding a belief and a
challenger proves instability; finding none proves nothing, so such verdicts
carry ``certified=False`` and read "not refuted".

Against the full SCF universe a challenger only matters through its values on
the support, so the search enumerates the 2^s value patterns on the support
instead of all 2^(2^n) tables.  A pattern equal to f on the support stands
for a challenger that differs from f elsewhere, which leaves every voter tied.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from constlab.beliefs import uniform_support
from constlab.errors import ParameterError
from constlab.scf import SCF, all_scfs
from constlab.stability.core import (
    StabilityVerdict,
    TieBreak,
    Universe,
    Witness,
    all_universe,
    explicit_universe,
)

_CHUNK = 1 << 14


def _bit_matrix(n: int) -> np.ndarray:
    vs = np.arange(1 << n, dtype=np.int64)
    return ((vs[:, None] >> np.arange(n)) & 1).astype(np.int8)


def _table_bits(table: int, size: int) -> np.ndarray:
    return np.array([(table >> v) & 1 for v in range(size)], dtype=np.int8)


def _first_hit(f_bits, accepted, X, Fv, A, valid, n, arbitrary):
    """Index (combo, alt) of the first damaging motion and its vote c, or None.

    X: (C, s, n) voter bits on each support; Fv: (C, s) f on the support;
    A: (C, K, s) challenger values; valid: (C, K) challenger is not f.
    """
    pow2 = (1 << np.arange(n)).astype(np.int64)
    agree_f = (X == Fv[:, :, None]).sum(axis=1)                      # (C, n)
    agree_a = (X[:, None, :, :] == A[:, :, :, None]).sum(axis=2)     # (C, K, n)
    diff = agree_a - agree_f[:, None, :]
    forced = ((diff > 0) * pow2).sum(axis=-1)
    allowed = forced | ((diff == 0) * pow2).sum(axis=-1)
    if not arbitrary:
        hit = valid & (f_bits[forced] == 1)
        idx = np.flatnonzero(hit.ravel())
        if idx.size == 0:
            return None
        c, k = divmod(int(idx[0]), hit.shape[1])
        return c, k, int(forced[c, k])
    if accepted.size == 0:
        return None
    outside = ~allowed
    ok = ((accepted[None, None, :] & forced[..., None]) == forced[..., None]) & (
        (accepted[None, None, :] & outside[..., None]) == 0
    )
    hit = valid & ok.any(axis=-1)
    idx = np.flatnonzero(hit.ravel())
    if idx.size == 0:
        return None
    c, k = divmod(int(idx[0]), hit.shape[1])
    first = int(np.argmax(ok[c, k]))
    return c, k, int(accepted[first])


def pessimistic_refute(
    f: SCF,
    tb,
    support_budget: int = 3,
    universe: Universe | Sequence[SCF] | None = None,
) -> StabilityVerdict:
    """Search small uniform beliefs for one under which f votes itself out."""
    tb = TieBreak.parse(tb)
    if support_budget < 1:
        raise ParameterError("support_budget must be at least 1")
    if universe is None:
        universe = all_universe(f.n)
    elif not isinstance(universe, Universe):
        universe = explicit_universe(universe)
    if universe.n != f.n:
        raise ParameterError("universe and f disagree on n")
    n, size = f.n, f.size
    bits = _bit_matrix(n)
    f_bits = _table_bits(f.table, size)
    accepted = np.array(f.accepted(), dtype=np.int64)

    patterns = alts = None
    if universe.kind == "all":
        patterns = {}
    else:
        alts = [g for g in universe.scfs() if g.table != f.table]
        if not alts:
            return StabilityVerdict(True, None, universe.label(), certified=False)
        alt_bits = np.stack([_table_bits(g.table, size) for g in alts])   # (K, size)

    for s in range(1, min(support_budget, size) + 1):
        combos_all = np.array(list(itertools.combinations(range(size), s)), dtype=np.int64)
        if patterns is not None:
            pat = ((np.arange(1 << s)[:, None] >> np.arange(s)) & 1).astype(np.int8)
        for start in range(0, len(combos_all), _CHUNK):
            combos = combos_all[start:start + _CHUNK]
            X = bits[combos]
            Fv = f_bits[combos]
            if patterns is not None:
                A = np.broadcast_to(pat, (len(combos),) + pat.shape)
                valid = np.ones(A.shape[:2], dtype=bool)
                if s == size:
                    # the pattern covers every vector, so equal means f itself
                    valid &= ~(A == Fv[:, None, :]).all(axis=-1)
            else:
                A = np.transpose(alt_bits[:, combos], (1, 0, 2))
                valid = np.ones(A.shape[:2], dtype=bool)
            found = _first_hit(f_bits, accepted, X, Fv, A, valid, n, tb.arbitrary)
            if found is None:
                continue
            ci, k, c = found
            support = [int(v) for v in combos[ci]]
            if patterns is not None:
                g = _pattern_scf(f, support, A[ci, k])
            else:
                g = alts[k]
            belief = uniform_support(support, n)
            return StabilityVerdict(False, Witness(g, c, belief), universe.label())
    return StabilityVerdict(True, None, universe.label(), certified=False)


def _pattern_scf(f: SCF, support: list[int], values) -> SCF:
    table = f.table
    for v, x in zip(support, values):
        if x:
            table |= 1 << v
        else:
            table &= ~(1 << v)
    if table == f.table:
        spare = next(v for v in range(f.size) if v not in support)
        table ^= 1 << spare
    return SCF(f.n, table)


def pessimistic_survivors(n: int, tb, support_budget: int = 3) -> list[SCF]:
    """Every SCF at n (n <= 3) that the bounded search cannot refute."""
    return [f for f in all_scfs(n) if pessimistic_refute(f, tb, support_budget).stable]
