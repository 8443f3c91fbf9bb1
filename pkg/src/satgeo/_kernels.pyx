# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: balls-in-bins stripping and exhaustive enumeration.

Drop-in twin of satgeo._fallback; identical semantics and random-word
consumption, so runs are bit-identical across backends for a fixed seed.
"""

import numpy as np

BACKEND_NAME = "compiled"


cdef class _Words:
    cdef object src
    cdef unsigned long long[::1] buf
    cdef Py_ssize_t pos, size

    def __init__(self, src):
        self.src = src
        self._load()

    cdef void _load(self):
        arr = self.src.next_block()
        self.buf = arr
        self.pos = 0
        self.size = arr.shape[0]

    cdef inline unsigned long long take(self):
        if self.pos == self.size:
            self._load()
        cdef unsigned long long w = self.buf[self.pos]
        self.pos += 1
        return w


cdef extern from *:
    ctypedef unsigned long long _u128 "unsigned __int128"


cdef inline Py_ssize_t _bounded(unsigned long long w, Py_ssize_t bound):
    return <Py_ssize_t>((<_u128>w * <_u128>bound) >> 64)


cdef class _StripState:
    # blue balls: CSR by bin plus a global swap-pop array (removal only)
    cdef long long[::1] ball_bin, data, pos_in_bin, length, count, start
    cdef long long[::1] galive, gpos
    cdef long long[::1] red_cnt, ralive
    cdef Py_ssize_t total, red_total, n
    # blue-bin indexed set + lazy min-heap
    cdef long long[::1] members, pos, heap
    cdef Py_ssize_t nmembers, nheap

    def __init__(self, Py_ssize_t n, red_bins, blue_bins):
        cdef Py_ssize_t nb = len(blue_bins)
        cdef Py_ssize_t nr = len(red_bins)
        self.n = n
        bins = np.asarray(blue_bins, dtype=np.int64)
        self.ball_bin = bins
        count = np.bincount(bins, minlength=n).astype(np.int64)
        start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(count, out=start[1:])
        self.count = count
        self.start = start
        self.length = count.copy()
        self.data = np.empty(nb, dtype=np.int64)
        self.pos_in_bin = np.empty(nb, dtype=np.int64)
        fill = start[:n].copy()
        cdef long long[::1] fillv = fill
        cdef Py_ssize_t ball, v, p
        for ball in range(nb):
            v = self.ball_bin[ball]
            p = fillv[v]
            self.data[p] = ball
            self.pos_in_bin[ball] = p - self.start[v]
            fillv[v] = p + 1
        self.galive = np.arange(nb, dtype=np.int64)
        self.gpos = np.arange(nb, dtype=np.int64)
        self.total = nb
        self.red_cnt = np.bincount(np.asarray(red_bins, dtype=np.int64),
                                   minlength=n).astype(np.int64)
        self.ralive = np.asarray(red_bins, dtype=np.int64).copy()
        self.red_total = nr
        self.members = np.empty(n, dtype=np.int64)
        self.pos = np.full(n, -1, dtype=np.int64)
        self.heap = np.empty(n + 1, dtype=np.int64)
        self.nmembers = 0
        self.nheap = 0
        for v in range(n):
            if self.count[v] > 0 and self.red_cnt[v] == 0:
                self._bb_add(v)

    cdef void _heap_push(self, long long v):
        cdef Py_ssize_t i = self.nheap
        self.nheap += 1
        cdef Py_ssize_t parent
        self.heap[i] = v
        while i > 0:
            parent = (i - 1) >> 1
            if self.heap[parent] <= self.heap[i]:
                break
            self.heap[parent], self.heap[i] = self.heap[i], self.heap[parent]
            i = parent

    cdef long long _heap_pop(self):
        cdef long long top = self.heap[0]
        self.nheap -= 1
        self.heap[0] = self.heap[self.nheap]
        cdef Py_ssize_t i = 0, child
        while True:
            child = 2 * i + 1
            if child >= self.nheap:
                break
            if child + 1 < self.nheap and self.heap[child + 1] < self.heap[child]:
                child += 1
            if self.heap[i] <= self.heap[child]:
                break
            self.heap[i], self.heap[child] = self.heap[child], self.heap[i]
            i = child
        return top

    cdef void _bb_add(self, long long v):
        self.pos[v] = self.nmembers
        self.members[self.nmembers] = v
        self.nmembers += 1
        self._heap_push(v)

    cdef void _bb_discard(self, long long v):
        cdef long long p = self.pos[v]
        if p < 0:
            return
        cdef long long last = self.members[self.nmembers - 1]
        self.members[p] = last
        self.pos[last] = p
        self.nmembers -= 1
        self.pos[v] = -1

    cdef long long _bb_pick(self, int policy, _Words words):
        if policy == 0:
            return self.members[_bounded(words.take(), self.nmembers)]
        while self.pos[self.heap[0]] < 0:
            self._heap_pop()
        return self.heap[0]

    cdef void _remove_blue(self, long long ball):
        cdef long long v = self.ball_bin[ball]
        cdef long long base = self.start[v]
        cdef long long p = self.pos_in_bin[ball]
        cdef long long last = self.data[base + self.length[v] - 1]
        self.data[base + p] = last
        self.pos_in_bin[last] = p
        self.length[v] -= 1
        self.count[v] -= 1
        cdef long long g = self.gpos[ball]
        cdef long long moved = self.galive[self.total - 1]
        self.galive[g] = moved
        self.gpos[moved] = g
        self.total -= 1
        if self.count[v] == 0:
            self._bb_discard(v)

    cdef void _remove_random_red(self, _Words words):
        cdef Py_ssize_t idx = _bounded(words.take(), self.red_total)
        cdef long long v = self.ralive[idx]
        self.ralive[idx] = self.ralive[self.red_total - 1]
        self.red_total -= 1
        self.red_cnt[v] -= 1
        if self.red_cnt[v] == 0 and self.count[v] > 0:
            self._bb_add(v)

    cdef Py_ssize_t _empty_bins(self):
        cdef Py_ssize_t v, c = 0
        for v in range(self.n):
            if self.red_cnt[v] == 0 and self.count[v] == 0:
                c += 1
        return c


def strip_original(Py_ssize_t n, int k, red_bins, blue_bins, stream, int policy):
    """Run the full-clause removal process until no blue bin remains.

    Returns (steps_executed, empty_bins_at_exit).
    """
    cdef _Words words = _Words(stream)
    cdef _StripState st = _StripState(n, red_bins, blue_bins)
    cdef long long steps = 0
    cdef Py_ssize_t idx
    cdef int t
    cdef long long v
    while st.nmembers > 0:
        v = st._bb_pick(policy, words)
        st._remove_blue(st.data[st.start[v] + st.length[v] - 1])
        for t in range(k - 2):
            idx = _bounded(words.take(), st.total)
            st._remove_blue(st.galive[idx])
        st._remove_random_red(words)
        steps += 1
    return int(steps), int(st._empty_bins())


def strip_modified(Py_ssize_t n, int k, red_bins, blue_bins, stream, int policy,
                   long long i_steps):
    """Run the simplified process for i_steps steps.

    Returns (event_held, q_red_free_bins, initial_blue_in_red_free_bins,
    empty_bins).
    """
    cdef _Words words = _Words(stream)
    cdef _StripState st = _StripState(n, red_bins, blue_bins)
    blue0 = np.asarray(st.count).copy()
    cdef long long[::1] blue0v = blue0
    cdef bint event = True
    cdef long long step, v
    for step in range(i_steps):
        if st.nmembers == 0:
            event = False
        else:
            v = st._bb_pick(policy, words)
            st._remove_blue(st.data[st.start[v] + st.length[v] - 1])
        if st.red_total > 0:
            st._remove_random_red(words)
    cdef Py_ssize_t q = 0
    cdef long long b0 = 0
    cdef Py_ssize_t u
    for u in range(n):
        if st.red_cnt[u] == 0:
            q += 1
            b0 += blue0v[u]
    return bool(event), int(q), int(b0), int(st._empty_bins())


def mark_solutions(int n, clause_vars, clause_signs):
    """Exhaustively mark satisfying assignments; returns uint8 array of 2^n."""
    cdef unsigned long long size = 1ULL << n
    sat = np.ones(size, dtype=np.uint8)
    cdef unsigned char[::1] satv = sat
    cv = np.ascontiguousarray(np.asarray(clause_vars, dtype=np.int64))
    cs = np.ascontiguousarray(np.asarray(clause_signs, dtype=np.uint8))
    cdef long long[:, ::1] cvv = cv
    cdef unsigned char[:, ::1] csv = cs
    cdef Py_ssize_t m = cvv.shape[0]
    cdef int k = cvv.shape[1]
    cdef Py_ssize_t c
    cdef int j
    cdef unsigned long long base, fixed, free, s, bit
    cdef bint tautology
    cdef long long v
    for c in range(m):
        base = 0
        fixed = 0
        tautology = False
        for j in range(k):
            v = cvv[c, j]
            bit = 1ULL << v
            if fixed & bit:
                # repeated variable: opposite signs make the clause a tautology
                if ((base >> v) & 1ULL) == (<unsigned long long>csv[c, j]):
                    tautology = True
                    break
                continue
            fixed |= bit
            if not csv[c, j]:
                base |= bit
        if tautology:
            continue
        free = (size - 1) & ~fixed
        s = free
        while True:
            satv[base | s] = 0
            if s == 0:
                break
            s = (s - 1) & free
    return sat
