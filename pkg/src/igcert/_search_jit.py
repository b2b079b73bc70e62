"""Compiled kernel for the bidirectional search in :mod:`igcert.rewrite`.

It reproduces the pure-Python loop move for move: frontiers are expanded in
shortlex order, candidate words are produced in ``neighbors`` order, the first
candidate already owned by the other side is the meeting point, and the visited
counter is bumped for every other new word.  Words live as rows of a 2-D byte
array and are interned through an open-addressing hash table.
"""
from __future__ import annotations

import numpy as np
from numba import njit

FNV_OFFSET = np.uint64(14695981039346656037)
FNV_PRIME = np.uint64(1099511628211)


@njit(cache=True)
def _hash(buf, n):
    h = FNV_OFFSET
    for i in range(n):
        h = (h ^ np.uint64(buf[i] + 1)) * FNV_PRIME
    return (h ^ np.uint64(n + 0x1000)) * FNV_PRIME


@njit(cache=True)
def _less(words, lens, a, b):
    la = lens[a]
    lb = lens[b]
    if la != lb:
        return la < lb
    for i in range(la):
        x = words[a, i]
        y = words[b, i]
        if x != y:
            return x < y
    return False


@njit(cache=True)
def _sorted_layer(words, lens, lo, hi):
    n = hi - lo
    idx = np.arange(lo, hi)
    tmp = np.empty(n, np.int64)
    width = 1
    while width < n:
        for start in range(0, n, 2 * width):
            mid = min(start + width, n)
            end = min(start + 2 * width, n)
            i = start
            j = mid
            k = start
            while i < mid and j < end:
                if _less(words, lens, idx[j], idx[i]):
                    tmp[k] = idx[j]
                    j += 1
                else:
                    tmp[k] = idx[i]
                    i += 1
                k += 1
            while i < mid:
                tmp[k] = idx[i]
                i += 1
                k += 1
            while j < end:
                tmp[k] = idx[j]
                j += 1
                k += 1
        idx, tmp = tmp, idx
        width *= 2
    return idx


@njit(cache=True)
def _probe(table, mask, words, lens, buf, n):
    slot = np.int64(_hash(buf, n) & np.uint64(mask))
    while True:
        j = table[slot]
        if j < 0:
            return -1, slot
        if lens[j] == n:
            same = True
            for i in range(n):
                if words[j, i] != buf[i]:
                    same = False
                    break
            if same:
                return j, slot
        slot = (slot + 1) & mask


@njit(cache=True)
def bfs(w1, w2, max_len, limit, contract, pre_start, pre_pairs):
    """Returns (status, visited, meet_fwd, meet_bwd, words, lens, parent, mpos, mcode).

    status is 1 when the frontiers met, 0 when the budget or the frontier ran out.
    mcode is -1 for a contraction, else the index into the letter's preimage list.
    """
    cap = limit + 3
    words = np.zeros((cap, max_len), np.uint8)
    lens = np.zeros(cap, np.int32)
    parent = np.full(cap, -1, np.int64)
    mpos = np.zeros(cap, np.int32)
    mcode = np.zeros(cap, np.int32)
    side = np.zeros(cap, np.int8)
    tsize = 16
    while tsize < 2 * cap:
        tsize *= 2
    mask = tsize - 1
    table = np.full(tsize, -1, np.int64)
    buf = np.zeros(max_len + 1, np.uint8)

    for i in range(len(w1)):
        words[0, i] = w1[i]
    lens[0] = len(w1)
    for i in range(len(w2)):
        words[1, i] = w2[i]
    lens[1] = len(w2)
    side[1] = 1
    j, slot = _probe(table, mask, words, lens, w1, len(w1))
    table[slot] = 0
    j, slot = _probe(table, mask, words, lens, w2, len(w2))
    table[slot] = 1
    count = 2
    visited = 2
    f_lo, f_hi, b_lo, b_hi = 0, 1, 1, 2

    while f_hi > f_lo and b_hi > b_lo:
        forward = (f_hi - f_lo) <= (b_hi - b_lo)
        if forward:
            s = 0
            order = _sorted_layer(words, lens, f_lo, f_hi)
        else:
            s = 1
            order = _sorted_layer(words, lens, b_lo, b_hi)
        new_lo = count
        for src in order:
            n = lens[src]
            grow = n < max_len
            for p in range(n):
                for k in range(-1, pre_start[words[src, p] + 1] - pre_start[words[src, p]]):
                    if k < 0:
                        if p + 1 >= n:
                            continue
                        g = contract[words[src, p], words[src, p + 1]]
                        if g < 0:
                            continue
                        for i in range(p):
                            buf[i] = words[src, i]
                        buf[p] = g
                        for i in range(p + 2, n):
                            buf[i - 1] = words[src, i]
                        m = n - 1
                    else:
                        if not grow:
                            break
                        c = words[src, p]
                        for i in range(p):
                            buf[i] = words[src, i]
                        buf[p] = pre_pairs[pre_start[c] + k, 0]
                        buf[p + 1] = pre_pairs[pre_start[c] + k, 1]
                        for i in range(p + 1, n):
                            buf[i + 1] = words[src, i]
                        m = n + 1
                    j, slot = _probe(table, mask, words, lens, buf, m)
                    if j >= 0 and side[j] == s:
                        continue
                    for i in range(m):
                        words[count, i] = buf[i]
                    lens[count] = m
                    parent[count] = src
                    mpos[count] = p
                    mcode[count] = k
                    side[count] = s
                    if j >= 0:
                        if s == 0:
                            return 1, visited, count, j, words, lens, parent, mpos, mcode
                        return 1, visited, j, count, words, lens, parent, mpos, mcode
                    table[slot] = count
                    count += 1
                    visited += 1
                    if visited >= limit:
                        return 0, visited, -1, -1, words, lens, parent, mpos, mcode
        if forward:
            f_lo, f_hi = new_lo, count
        else:
            b_lo, b_hi = new_lo, count
    return 0, visited, -1, -1, words, lens, parent, mpos, mcode
