# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prefix-displacement tree.

Same contract as ``_kernels_py.displacement_tree``; see there.
"""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcmp, memcpy
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

import numpy as np

BACKEND = "cython"


cdef inline uint64_t _hash(const int8_t* w, int n) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef int i
    for i in range(n):
        h ^= <uint64_t><unsigned char>w[i]
        h *= 1099511628211ULL
    h ^= <uint64_t>n
    h *= 1099511628211ULL
    return h


cdef struct Buf:
    void* p
    int64_t cap
    int64_t size


cdef int _grow(Buf* b, int64_t need) except -1:
    cdef int64_t cap = b.cap
    cdef void* q
    if need <= cap:
        return 0
    while cap < need:
        cap = cap * 2 if cap else 1024
    q = realloc(b.p, cap)
    if q == NULL:
        raise MemoryError()
    b.p = q
    b.cap = cap
    return 0


def displacement_tree(pre_images, int rank, int depth, int cap):
    cdef int n_letters = 2 * rank
    cdef int li, k, j, m, tl, dl, x, last
    cdef int64_t i, level_start, level_end, n, node, slot, mask, s, n_states = 0, pruned = 0
    cdef uint64_t h
    cdef int8_t* tmp
    cdef int8_t* dp
    cdef int8_t* pre_buf
    cdef int* pre_off
    cdef int* pre_len
    cdef int* letters
    cdef Buf parent, letter, level, state, doff, dlen, hashes, dbuf, rep
    cdef int64_t* table
    cdef int64_t tcap
    cdef int64_t tbound, total, longest

    if len(pre_images) != n_letters:
        raise ValueError("need one pre-image per signed letter")
    total = sum(len(p) for p in pre_images)
    longest = max([len(p) for p in pre_images] + [0])
    # a stored displacement never exceeds depth * (longest + 1)
    tbound = min(cap, depth * (longest + 1)) + longest + 2
    pre_buf = <int8_t*>malloc(total + 1)
    pre_off = <int*>malloc(n_letters * sizeof(int))
    pre_len = <int*>malloc(n_letters * sizeof(int))
    letters = <int*>malloc(n_letters * sizeof(int))
    tmp = <int8_t*>malloc(tbound)
    j = 0
    for li in range(n_letters):
        pre_off[li] = j
        pre_len[li] = len(pre_images[li])
        for x in pre_images[li]:
            pre_buf[j] = x
            j += 1
        letters[li] = (li // 2 + 1) * (1 if li % 2 == 0 else -1)

    parent.p = letter.p = level.p = state.p = doff.p = dlen.p = hashes.p = dbuf.p = rep.p = NULL
    parent.cap = letter.cap = level.cap = state.cap = doff.cap = dlen.cap = hashes.cap = dbuf.cap = rep.cap = 0
    dbuf.size = 0
    _grow(&dbuf, 16)
    tcap = 1 << 12
    table = <int64_t*>malloc(tcap * sizeof(int64_t))
    for s in range(tcap):
        table[s] = -1

    try:
        n = 0
        # root
        _grow(&parent, 8 * (n + 1)); _grow(&letter, 4 * (n + 1)); _grow(&level, 4 * (n + 1))
        _grow(&state, 8 * (n + 1)); _grow(&doff, 8 * (n + 1)); _grow(&dlen, 4 * (n + 1))
        _grow(&hashes, 8 * (n + 1))
        (<int64_t*>parent.p)[0] = -1
        (<int32_t*>letter.p)[0] = 0
        (<int32_t*>level.p)[0] = 0
        (<int64_t*>doff.p)[0] = 0
        (<int32_t*>dlen.p)[0] = 0
        h = _hash(tmp, 0)
        (<uint64_t*>hashes.p)[0] = h
        (<int64_t*>state.p)[0] = 0
        table[h & (tcap - 1)] = 0
        _grow(&rep, 8)
        (<int64_t*>rep.p)[0] = 0
        n_states = 1
        n = 1
        level_start, level_end = 0, 1
        for k in range(1, depth + 1):
            for node in range(level_start, level_end):
                last = (<int32_t*>letter.p)[node]
                for li in range(n_letters):
                    x = letters[li]
                    if x == -last:
                        continue
                    # new d = pre(x) . d(node) . x, freely reduced
                    tl = 0
                    for j in range(pre_len[li]):
                        tmp[tl] = pre_buf[pre_off[li] + j]
                        tl += 1
                    dp = (<int8_t*>dbuf.p) + (<int64_t*>doff.p)[node]
                    dl = (<int32_t*>dlen.p)[node]
                    for j in range(dl):
                        if tl > 0 and tmp[tl - 1] == -dp[j]:
                            tl -= 1
                        else:
                            tmp[tl] = dp[j]
                            tl += 1
                    if tl > 0 and tmp[tl - 1] == -x:
                        tl -= 1
                    else:
                        tmp[tl] = x
                        tl += 1
                    if tl > cap:
                        pruned += 1
                        continue
                    _grow(&parent, 8 * (n + 1)); _grow(&letter, 4 * (n + 1)); _grow(&level, 4 * (n + 1))
                    _grow(&state, 8 * (n + 1)); _grow(&doff, 8 * (n + 1)); _grow(&dlen, 4 * (n + 1))
                    _grow(&hashes, 8 * (n + 1))
                    h = _hash(tmp, tl)
                    mask = tcap - 1
                    slot = h & mask
                    while True:
                        i = table[slot]
                        if i < 0:
                            break
                        if (<uint64_t*>hashes.p)[i] == h and (<int32_t*>dlen.p)[i] == tl and \
                                memcmp((<int8_t*>dbuf.p) + (<int64_t*>doff.p)[i], tmp, tl) == 0:
                            break
                        slot = (slot + 1) & mask
                    (<int64_t*>parent.p)[n] = node
                    (<int32_t*>letter.p)[n] = x
                    (<int32_t*>level.p)[n] = k
                    (<uint64_t*>hashes.p)[n] = h
                    if i >= 0:
                        # known displacement: share the stored word
                        (<int64_t*>state.p)[n] = (<int64_t*>state.p)[i]
                        (<int64_t*>doff.p)[n] = (<int64_t*>doff.p)[i]
                        (<int32_t*>dlen.p)[n] = tl
                    else:
                        _grow(&dbuf, dbuf.size + tl + 1)
                        memcpy((<int8_t*>dbuf.p) + dbuf.size, tmp, tl)
                        (<int64_t*>doff.p)[n] = dbuf.size
                        (<int32_t*>dlen.p)[n] = tl
                        dbuf.size += tl
                        (<int64_t*>state.p)[n] = n_states
                        n_states += 1
                        table[slot] = n
                        _grow(&rep, 8 * n_states)
                        (<int64_t*>rep.p)[n_states - 1] = n
                        if 2 * n_states > tcap:
                            free(table)
                            tcap *= 2
                            table = <int64_t*>malloc(tcap * sizeof(int64_t))
                            mask = tcap - 1
                            for s in range(tcap):
                                table[s] = -1
                            for s in range(n_states):
                                i = (<int64_t*>rep.p)[s]
                                slot = (<uint64_t*>hashes.p)[i] & mask
                                while table[slot] >= 0:
                                    slot = (slot + 1) & mask
                                table[slot] = i
                    n += 1
            level_start, level_end = level_end, n
        out_parent = np.empty(n, dtype=np.int64)
        out_letter = np.empty(n, dtype=np.int32)
        out_level = np.empty(n, dtype=np.int32)
        out_state = np.empty(n, dtype=np.int64)
        _copy64(out_parent, <int64_t*>parent.p, n)
        _copy32(out_letter, <int32_t*>letter.p, n)
        _copy32(out_level, <int32_t*>level.p, n)
        _copy64(out_state, <int64_t*>state.p, n)
        return out_parent, out_letter, out_level, out_state, int(n_states), int(pruned)
    finally:
        free(pre_buf); free(pre_off); free(pre_len); free(letters); free(tmp); free(table)
        free(parent.p); free(letter.p); free(level.p); free(state.p)
        free(doff.p); free(dlen.p); free(hashes.p); free(dbuf.p); free(rep.p)


cdef void _copy64(int64_t[::1] dst, int64_t* src, int64_t n):
    cdef int64_t i
    for i in range(n):
        dst[i] = src[i]


cdef void _copy32(int32_t[::1] dst, int32_t* src, int64_t n):
    cdef int64_t i
    for i in range(n):
        dst[i] = src[i]
