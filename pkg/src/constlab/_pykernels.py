"""Pure-Python scanning kernels.

These define the reference semantics for the compiled ``_kernels`` module and
are used whenever it is unavailable or a problem does not fit 64-bit integers
(tables above n=6 or very large belief denominators).

Conventions shared by every kernel:

* ``tables`` are SCF truth tables packed into ints (bit ``v`` = decision on
  vector ``v``).
* ``weights`` are non-negative integers proportional to a belief's pmf, so
  utility comparisons are exact integer comparisons.
* A voter is *forced* to 1 when the alternative gives strictly higher
  utility and *free* when utilities tie.  With ``arbitrary`` set, free voters
  may vote either way; otherwise they vote 0 (status-quo bias).
"""

from __future__ import annotations

NAME = "python"


def utility_matrix(tables, weights, n):
    """Integer utility numerators ``U[t][i]`` for every table and voter."""
    size = 1 << n
    full = size - 1
    live = [(v, w) for v, w in enumerate(weights) if w]
    out = []
    for t in tables:
        row = [0] * n
        for v, w in live:
            agree = v if (t >> v) & 1 else full ^ v
            for i in range(n):
                if (agree >> i) & 1:
                    row[i] += w
        out.append(row)
    return out


def _damaging_choice(ft, uf, ua, n, arbitrary, accepted):
    """Smallest admissible choice vector ``c`` with ``f(c) == 1``, else -1."""
    forced = allowed = 0
    for i in range(n):
        if ua[i] > uf[i]:
            forced |= 1 << i
            allowed |= 1 << i
        elif ua[i] == uf[i]:
            allowed |= 1 << i
    if not arbitrary:
        return forced if (ft >> forced) & 1 else -1
    for c in accepted:
        if c & forced == forced and not c & ~allowed:
            return c
    return -1


def _accepted(t, size):
    return [v for v in range(size) if (t >> v) & 1]


def _first_witness(ft, uf, alt_tables, ua_rows, n, arbitrary):
    accepted = _accepted(ft, 1 << n)
    if not accepted:
        return -1, -1
    for k, at in enumerate(alt_tables):
        if at == ft:
            continue
        c = _damaging_choice(ft, uf, ua_rows[k], n, arbitrary, accepted)
        if c >= 0:
            return k, c
    return -1, -1


def witness_scan(f_tables, alt_tables, weights, n, arbitrary, threads=1):
    """For each incumbent, the first alternative (index, c) that unseats it.

    ``(-1, -1)`` means the incumbent is self-maintaining against every
    alternative in ``alt_tables``.
    """
    f_tables = list(f_tables)
    alt_tables = list(alt_tables)
    uf_rows = utility_matrix(f_tables, weights, n)
    ua_rows = utility_matrix(alt_tables, weights, n)
    return [
        _first_witness(ft, uf, alt_tables, ua_rows, n, arbitrary)
        for ft, uf in zip(f_tables, uf_rows)
    ]


def edge_lists(f_tables, alt_tables, weights, n, arbitrary, threads=1):
    """For each incumbent, the indices of all alternatives that can unseat it."""
    f_tables = list(f_tables)
    alt_tables = list(alt_tables)
    uf_rows = utility_matrix(f_tables, weights, n)
    ua_rows = utility_matrix(alt_tables, weights, n)
    size = 1 << n
    out = []
    for ft, uf in zip(f_tables, uf_rows):
        accepted = _accepted(ft, size)
        row = []
        if accepted:
            for k, at in enumerate(alt_tables):
                if at != ft and _damaging_choice(ft, uf, ua_rows[k], n, arbitrary, accepted) >= 0:
                    row.append(k)
        out.append(row)
    return out


def belief_scan(f_tables, alt_tables, weight_rows, n, arbitrary, stop_first=False, threads=1):
    """Stability of each incumbent under each of several beliefs.

    Returns, per incumbent, ``(stable_count, first_stable_row,
    first_unstable_row)`` with -1 for "none".  With ``stop_first`` the scan of
    an incumbent ends at its first stable row.
    """
    f_tables = list(f_tables)
    alt_tables = list(alt_tables)
    m = len(f_tables)
    count = [0] * m
    first_stable = [-1] * m
    first_unstable = [-1] * m
    for r, weights in enumerate(weight_rows):
        pending = [i for i in range(m) if not (stop_first and count[i])]
        if not pending:
            break
        uf_rows = utility_matrix([f_tables[i] for i in pending], weights, n)
        ua_rows = utility_matrix(alt_tables, weights, n)
        for i, uf in zip(pending, uf_rows):
            k, _ = _first_witness(f_tables[i], uf, alt_tables, ua_rows, n, arbitrary)
            if k < 0:
                count[i] += 1
                if first_stable[i] < 0:
                    first_stable[i] = r
            elif first_unstable[i] < 0:
                first_unstable[i] = r
    return list(zip(count, first_stable, first_unstable))
