# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics match `pure.py` exactly."""

from libc.stdint cimport uint32_t, uint64_t

import numpy as np


cdef object _pack(masks, Py_ssize_t nw):
    buf = b"".join(int(x).to_bytes(nw * 8, "little") for x in masks)
    arr = np.frombuffer(buf, dtype="<u8").copy()
    return arr.reshape(len(masks), nw)


cdef inline bint _and_into(uint64_t[:, ::1] part, Py_ssize_t dst,
                           uint64_t[:, ::1] rows, Py_ssize_t row,
                           Py_ssize_t src, Py_ssize_t nw) nogil:
    cdef Py_ssize_t i
    cdef uint64_t acc = 0, v
    for i in range(nw):
        v = part[src, i] & rows[row, i]
        part[dst, i] = v
        acc |= v
    return acc != 0


def sweep_combos(base, masks, nbits, k_):
    cdef Py_ssize_t m = len(masks)
    cdef Py_ssize_t k = k_
    if k > m:
        return None
    if k == 0:
        return None if base else ()
    cdef Py_ssize_t nw = (nbits + 63) >> 6
    if nw < 1:
        nw = 1
    rows_np = _pack(masks, nw)
    part_np = np.zeros((k + 1, nw), dtype=np.uint64)
    part_np[0] = _pack([base], nw)[0]
    pos_np = np.zeros(k, dtype=np.int64)
    cdef uint64_t[:, ::1] rows = rows_np
    cdef uint64_t[:, ::1] part = part_np
    cdef long long[::1] pos = pos_np
    cdef Py_ssize_t level = 0
    cdef Py_ssize_t row
    cdef bint nonzero
    cdef bint failed = 0
    with nogil:
        pos[0] = 0
        while True:
            if pos[level] > m - (k - level):
                level -= 1
                if level < 0:
                    break
                pos[level] += 1
                continue
            row = pos[level]
            nonzero = _and_into(part, level + 1, rows, row, level, nw)
            if not nonzero:
                failed = 1
                break
            if level == k - 1:
                pos[level] += 1
            else:
                level += 1
                pos[level] = row + 1
    if not failed:
        return None
    out = [int(pos[i]) for i in range(level)] + [int(pos[level])]
    nxt = int(pos[level]) + 1
    while len(out) < k:
        out.append(nxt)
        nxt += 1
    return tuple(out)


def sweep_tuples(base, tables, nbits):
    cdef Py_ssize_t k1 = len(tables)
    if k1 == 0:
        return None if base else ()
    cdef Py_ssize_t n = len(tables[0])
    cdef Py_ssize_t nw = (nbits + 63) >> 6
    if nw < 1:
        nw = 1
    flat = []
    for t in tables:
        flat.extend(t)
    rows_np = _pack(flat, nw)
    part_np = np.zeros((k1 + 1, nw), dtype=np.uint64)
    part_np[0] = _pack([base], nw)[0]
    pos_np = np.zeros(k1, dtype=np.int64)
    cdef uint64_t[:, ::1] rows = rows_np
    cdef uint64_t[:, ::1] part = part_np
    cdef long long[::1] pos = pos_np
    cdef Py_ssize_t slot = 0
    cdef bint nonzero
    cdef bint failed = 0
    with nogil:
        pos[0] = 0
        while True:
            if pos[slot] >= n:
                slot -= 1
                if slot < 0:
                    break
                pos[slot] += 1
                continue
            nonzero = _and_into(part, slot + 1, rows, slot * n + pos[slot], slot, nw)
            if not nonzero:
                failed = 1
                break
            if slot == k1 - 1:
                pos[slot] += 1
            else:
                slot += 1
                pos[slot] = 0
    if not failed:
        return None
    out = [int(pos[i]) for i in range(slot + 1)]
    while len(out) < k1:
        out.append(0)
    return tuple(out)


def exp_table(int p, int m, modulus, long gen):
    cdef long q = 1
    cdef int i, j, t_small
    for i in range(m):
        q *= p
    cdef long red[64]
    for i in range(m):
        red[i] = int(modulus[i]) % p
    out_np = np.empty(q - 1, dtype=np.uint32)
    cdef uint32_t[::1] out = out_np
    cdef long cur[64]
    cdef long dgen[64]
    cdef long prod[128]
    cdef long v, t, c
    v = gen
    for i in range(m):
        dgen[i] = v % p
        v //= p
    for i in range(m):
        cur[i] = 0
    cur[0] = 1
    with nogil:
        for t in range(q - 1):
            v = 0
            for i in range(m - 1, -1, -1):
                v = v * p + cur[i]
            out[t] = <uint32_t> v
            for i in range(2 * m - 1):
                prod[i] = 0
            for i in range(m):
                if cur[i] != 0:
                    for j in range(m):
                        prod[i + j] = (prod[i + j] + cur[i] * dgen[j]) % p
            for i in range(2 * m - 2, m - 1, -1):
                c = prod[i]
                if c != 0:
                    prod[i] = 0
                    for j in range(m):
                        prod[i - m + j] = ((prod[i - m + j] - c * red[j]) % p + p) % p
            for i in range(m):
                cur[i] = prod[i]
    return out_np
