# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled scanning kernels (n <= 6, weights summing below 2**62).

Same contract as ``constlab._pykernels``; the incumbent loop runs in parallel
with OpenMP and results do not depend on the thread count.
"""

import numpy as np

from cython.parallel cimport prange
from libc.stdint cimport int64_t, uint64_t

NAME = "cython"

DEF MAXV = 64


cdef void _utils(uint64_t t, const int64_t* w, int n, int size, int64_t* out) noexcept nogil:
    cdef int i, v
    cdef uint64_t agree
    for i in range(n):
        out[i] = 0
    for v in range(size):
        if w[v] == 0:
            continue
        if (t >> v) & 1:
            agree = <uint64_t>v
        else:
            agree = ~(<uint64_t>v)
        for i in range(n):
            if (agree >> i) & 1:
                out[i] += w[v]


cdef int64_t _damaging(uint64_t ft, const int64_t* uf, const int64_t* ua, int n,
                       bint arbitrary, const uint64_t* acc, int nacc) noexcept nogil:
    cdef uint64_t forced = 0
    cdef uint64_t allowed = 0
    cdef uint64_t c
    cdef int i, j
    for i in range(n):
        if ua[i] > uf[i]:
            forced |= (<uint64_t>1) << i
            allowed |= (<uint64_t>1) << i
        elif ua[i] == uf[i]:
            allowed |= (<uint64_t>1) << i
    if not arbitrary:
        if (ft >> forced) & 1:
            return <int64_t>forced
        return -1
    for j in range(nacc):
        c = acc[j]
        if (c & forced) == forced and (c & ~allowed) == 0:
            return <int64_t>c
    return -1


cdef int _accepted(uint64_t ft, int size, uint64_t* acc) noexcept nogil:
    cdef int v
    cdef int nacc = 0
    for v in range(size):
        if (ft >> v) & 1:
            acc[nacc] = <uint64_t>v
            nacc = nacc + 1
    return nacc


cdef int64_t _first_witness(uint64_t ft, const int64_t* uf, const uint64_t* alts,
                            const int64_t* ua, int k, int n, bint arbitrary,
                            int64_t* c_out) noexcept nogil:
    cdef uint64_t acc[MAXV]
    cdef int nacc = _accepted(ft, 1 << n, acc)
    cdef int a
    cdef int64_t c
    c_out[0] = -1
    if nacc == 0:
        return -1
    for a in range(k):
        if alts[a] == ft:
            continue
        c = _damaging(ft, uf, ua + a * n, n, arbitrary, acc, nacc)
        if c >= 0:
            c_out[0] = c
            return a
    return -1


def _prepare(tables, n):
    if n > 6:
        raise ValueError("compiled kernels support n <= 6")
    return np.ascontiguousarray(np.asarray(list(tables), dtype=np.uint64))


def _fill_utils(const uint64_t[::1] tables, const int64_t[::1] w, int n, int threads):
    cdef Py_ssize_t m = tables.shape[0]
    cdef int size = 1 << n
    out = np.zeros((m, n), dtype=np.int64)
    cdef int64_t[:, ::1] o = out
    cdef Py_ssize_t t
    if m == 0:
        return out
    for t in prange(m, nogil=True, num_threads=threads, schedule="static"):
        _utils(tables[t], &w[0], n, size, &o[t, 0])
    return out


def utility_matrix(tables, weights, int n):
    ft = _prepare(tables, n)
    w = np.ascontiguousarray(np.asarray(list(weights), dtype=np.int64))
    return _fill_utils(ft, w, n, 1).tolist()


def witness_scan(f_tables, alt_tables, weights, int n, bint arbitrary, int threads=1):
    ft_arr = _prepare(f_tables, n)
    at_arr = _prepare(alt_tables, n)
    w = np.ascontiguousarray(np.asarray(list(weights), dtype=np.int64))
    uf_arr = _fill_utils(ft_arr, w, n, threads)
    ua_arr = _fill_utils(at_arr, w, n, threads)
    cdef const uint64_t[::1] ft = ft_arr
    cdef const uint64_t[::1] at = at_arr
    cdef const int64_t[:, ::1] uf = uf_arr
    cdef const int64_t[:, ::1] ua = ua_arr
    cdef Py_ssize_t m = ft.shape[0]
    cdef int k = at.shape[0]
    alt_out = np.full(m, -1, dtype=np.int64)
    c_out = np.full(m, -1, dtype=np.int64)
    cdef int64_t[::1] ao = alt_out
    cdef int64_t[::1] co = c_out
    cdef Py_ssize_t i
    if m == 0 or k == 0:
        return list(zip(alt_out.tolist(), c_out.tolist()))
    for i in prange(m, nogil=True, num_threads=threads, schedule="dynamic"):
        ao[i] = _first_witness(ft[i], &uf[i, 0], &at[0], &ua[0, 0], k, n, arbitrary, &co[i])
    return list(zip(alt_out.tolist(), c_out.tolist()))


def edge_lists(f_tables, alt_tables, weights, int n, bint arbitrary, int threads=1):
    ft_arr = _prepare(f_tables, n)
    at_arr = _prepare(alt_tables, n)
    w = np.ascontiguousarray(np.asarray(list(weights), dtype=np.int64))
    uf_arr = _fill_utils(ft_arr, w, n, threads)
    ua_arr = _fill_utils(at_arr, w, n, threads)
    cdef const uint64_t[::1] ft = ft_arr
    cdef const uint64_t[::1] at = at_arr
    cdef const int64_t[:, ::1] uf = uf_arr
    cdef const int64_t[:, ::1] ua = ua_arr
    cdef Py_ssize_t m = ft.shape[0]
    cdef int k = at.shape[0]
    adj = np.zeros((m, max(k, 1)), dtype=np.uint8)
    cdef unsigned char[:, ::1] a = adj
    cdef Py_ssize_t i
    if m == 0 or k == 0:
        return [[] for _ in range(m)]
    for i in prange(m, nogil=True, num_threads=threads, schedule="dynamic"):
        _row_edges(ft[i], &uf[i, 0], &at[0], &ua[0, 0], k, n, arbitrary, &a[i, 0])
    return [np.flatnonzero(row).tolist() for row in adj[:, :k]]


cdef void _row_edges(uint64_t ft, const int64_t* uf, const uint64_t* alts,
                     const int64_t* ua, int k, int n, bint arbitrary,
                     unsigned char* out) noexcept nogil:
    cdef uint64_t acc[MAXV]
    cdef int nacc = _accepted(ft, 1 << n, acc)
    cdef int j
    if nacc == 0:
        return
    for j in range(k):
        if alts[j] != ft and _damaging(ft, uf, ua + j * n, n, arbitrary, acc, nacc) >= 0:
            out[j] = 1


def belief_scan(f_tables, alt_tables, weight_rows, int n, bint arbitrary,
                bint stop_first=False, int threads=1):
    ft_arr = _prepare(f_tables, n)
    at_arr = _prepare(alt_tables, n)
    cdef const uint64_t[::1] ft = ft_arr
    cdef const uint64_t[::1] at = at_arr
    cdef Py_ssize_t m = ft.shape[0]
    cdef int k = at.shape[0]
    count_arr = np.zeros(m, dtype=np.int64)
    first_stable_arr = np.full(m, -1, dtype=np.int64)
    first_unstable_arr = np.full(m, -1, dtype=np.int64)
    cdef int64_t[::1] count = count_arr
    cdef int64_t[::1] fs = first_stable_arr
    cdef int64_t[::1] fu = first_unstable_arr
    cdef const int64_t[:, ::1] uf
    cdef const int64_t[:, ::1] ua
    cdef Py_ssize_t i
    cdef int64_t r = 0
    weight_rows = list(weight_rows)
    if m == 0 or k == 0:
        # nothing to compare against: every incumbent is stable everywhere
        total = min(len(weight_rows), 1) if stop_first else len(weight_rows)
        return [(total, 0 if weight_rows else -1, -1)] * m
    for row in weight_rows:
        w = np.ascontiguousarray(np.asarray(list(row), dtype=np.int64))
        uf = _fill_utils(ft_arr, w, n, threads)
        ua = _fill_utils(at_arr, w, n, threads)
        for i in prange(m, nogil=True, num_threads=threads, schedule="dynamic"):
            _scan_one(ft[i], &uf[i, 0], &at[0], &ua[0, 0], k, n, arbitrary,
                      stop_first, r, &count[i], &fs[i], &fu[i])
        r += 1
    return list(zip(count_arr.tolist(), first_stable_arr.tolist(), first_unstable_arr.tolist()))


cdef void _scan_one(uint64_t ft, const int64_t* uf, const uint64_t* alts,
                    const int64_t* ua, int k, int n, bint arbitrary,
                    bint stop_first, int64_t r, int64_t* count,
                    int64_t* fs, int64_t* fu) noexcept nogil:
    cdef int64_t c
    if stop_first and count[0] > 0:
        return
    if _first_witness(ft, uf, alts, ua, k, n, arbitrary, &c) < 0:
        count[0] += 1
        if fs[0] < 0:
            fs[0] = r
    elif fu[0] < 0:
        fu[0] = r
