"""Pure-Python/numpy implementations of the hot kernels.

Selected automatically when the compiled extension is unavailable (see
satgeo._core).  Semantics and random-word consumption match the compiled
kernels exactly, so a fixed seed gives identical results on both backends.
"""

from __future__ import annotations

import heapq

import numpy as np

BACKEND_NAME = "fallback"


class _Words:
    """Sequential reader over a WordStream (one uint64 per draw)."""

    __slots__ = ("src", "buf", "pos")

    def __init__(self, src):
        self.src = src
        self.buf = src.next_block()
        self.pos = 0

    def take(self) -> int:
        if self.pos == len(self.buf):
            self.buf = self.src.next_block()
            self.pos = 0
        w = int(self.buf[self.pos])
        self.pos += 1
        return w


def _bounded(word: int, bound: int) -> int:
    # multiply-shift reduction; bias is O(bound / 2^64), negligible and
    # reproduced identically by the compiled backend
    return (word * bound) >> 64


class _BlueBalls:
    """Indexed multiset of blue balls grouped by bin.

    Balls are only ever removed, so per-bin storage is a CSR layout sized by
    the initial counts.  Supports O(1) removal of (a) a uniformly random ball
    and (b) an arbitrary ball of a given bin.
    """

    def __init__(self, bins: np.ndarray, n: int):
        bins = np.asarray(bins, dtype=np.int64)
        nb = len(bins)
        self.ball_bin = bins
        self.count = np.bincount(bins, minlength=n).astype(np.int64)
        start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.count, out=start[1:])
        self.start = start
        # group ball ids by bin, preserving input order within each bin
        fill = start[:n].copy()
        data = np.empty(nb, dtype=np.int64)
        pos_in_bin = np.empty(nb, dtype=np.int64)
        for ball in range(nb):
            v = bins[ball]
            p = fill[v]
            data[p] = ball
            pos_in_bin[ball] = p - start[v]
            fill[v] = p + 1
        self.data = data.tolist()
        self.pos_in_bin = pos_in_bin.tolist()
        self.length = self.count.tolist()
        self.galive = list(range(nb))
        self.gpos = list(range(nb))
        self.total = nb
        self.count = self.count.tolist()
        self.start = start.tolist()
        self.ball_bin = bins.tolist()

    def any_ball_of(self, v: int) -> int:
        return self.data[self.start[v] + self.length[v] - 1]

    def ball_at(self, idx: int) -> int:
        return self.galive[idx]

    def remove(self, ball: int) -> int:
        """Remove a specific ball; returns its bin."""
        v = self.ball_bin[ball]
        base = self.start[v]
        p = self.pos_in_bin[ball]
        last = self.data[base + self.length[v] - 1]
        self.data[base + p] = last
        self.pos_in_bin[last] = p
        self.length[v] -= 1
        self.count[v] -= 1
        g = self.gpos[ball]
        moved = self.galive[self.total - 1]
        self.galive[g] = moved
        self.gpos[moved] = g
        self.total -= 1
        return v


class _BlueBinSet:
    """Bins holding >= 1 blue and 0 red balls, with O(1) random choice and a
    lazy min-heap for the lowest-index policy."""

    def __init__(self, n: int):
        self.members: list[int] = []
        self.pos = [-1] * n
        self.heap: list[int] = []

    def add(self, v: int):
        self.pos[v] = len(self.members)
        self.members.append(v)
        heapq.heappush(self.heap, v)

    def discard(self, v: int):
        p = self.pos[v]
        if p < 0:
            return
        last = self.members[-1]
        self.members[p] = last
        self.pos[last] = p
        self.members.pop()
        self.pos[v] = -1

    def __len__(self) -> int:
        return len(self.members)

    def pick(self, policy: int, words: _Words) -> int:
        if policy == 0:
            return self.members[_bounded(words.take(), len(self.members))]
        while self.pos[self.heap[0]] < 0:
            heapq.heappop(self.heap)
        return self.heap[0]


class _StripState:
    def __init__(self, n, red_bins, blue_bins):
        self.n = n
        self.red_cnt = np.bincount(np.asarray(red_bins, dtype=np.int64),
                                   minlength=n).astype(np.int64).tolist()
        self.blue = _BlueBalls(blue_bins, n)
        self.ralive = [int(b) for b in red_bins]
        self.bb = _BlueBinSet(n)
        for v in range(n):
            if self.blue.count[v] > 0 and self.red_cnt[v] == 0:
                self.bb.add(v)

    def remove_blue(self, ball: int):
        v = self.blue.remove(ball)
        if self.blue.count[v] == 0:
            self.bb.discard(v)

    def remove_random_red(self, words: _Words):
        idx = _bounded(words.take(), len(self.ralive))
        v = self.ralive[idx]
        self.ralive[idx] = self.ralive[-1]
        self.ralive.pop()
        self.red_cnt[v] -= 1
        if self.red_cnt[v] == 0 and self.blue.count[v] > 0:
            self.bb.add(v)

    def empty_bins(self) -> int:
        return sum(1 for v in range(self.n)
                   if self.red_cnt[v] == 0 and self.blue.count[v] == 0)


def strip_original(n, k, red_bins, blue_bins, stream, policy):
    """Run the full-clause removal process until no blue bin remains.

    Each executed step removes one ball from a chosen blue bin, k-2 random
    blue balls, and one random red ball (one whole clause).  Returns
    (steps_executed, empty_bins_at_exit).
    """
    words = _Words(stream)
    st = _StripState(n, red_bins, blue_bins)
    steps = 0
    while len(st.bb) > 0:
        v = st.bb.pick(policy, words)
        st.remove_blue(st.blue.any_ball_of(v))
        for _ in range(k - 2):
            idx = _bounded(words.take(), st.blue.total)
            st.remove_blue(st.blue.ball_at(idx))
        st.remove_random_red(words)
        steps += 1
    return steps, st.empty_bins()


def strip_modified(n, k, red_bins, blue_bins, stream, policy, i_steps):
    """Run the simplified process for i_steps steps.

    Per step: remove one ball from a blue bin if one exists, then remove a
    random red ball if any remain.  Returns (event_held, q_red_free_bins,
    initial_blue_in_red_free_bins, empty_bins) where event_held records that
    a blue bin existed at the beginning of every step.
    """
    words = _Words(stream)
    st = _StripState(n, red_bins, blue_bins)
    blue0 = list(st.blue.count)
    event = True
    for _ in range(i_steps):
        if len(st.bb) == 0:
            event = False
        else:
            v = st.bb.pick(policy, words)
            st.remove_blue(st.blue.any_ball_of(v))
        if st.ralive:
            st.remove_random_red(words)
    q = 0
    b0 = 0
    for v in range(n):
        if st.red_cnt[v] == 0:
            q += 1
            b0 += blue0[v]
    return event, q, b0, st.empty_bins()


def mark_solutions(n, clause_vars, clause_signs):
    """Exhaustively mark satisfying assignments of a k-CNF over n variables.

    Returns a uint8 array of length 2^n with 1 at satisfying words.  For each
    clause the violating assignments form a subcube (every literal false);
    they are enumerated by spreading a counter over the clause's free bits.
    """
    size = 1 << n
    sat = np.ones(size, dtype=np.uint8)
    cv = np.asarray(clause_vars, dtype=np.int64)
    cs = np.asarray(clause_signs, dtype=bool)
    for c in range(cv.shape[0]):
        base = 0
        fixed = 0
        tautology = False
        seen: dict[int, bool] = {}
        for v, s in zip(cv[c], cs[c]):
            v = int(v)
            s = bool(s)
            if v in seen:
                if seen[v] != s:
                    tautology = True
                    break
                continue
            seen[v] = s
            fixed |= 1 << v
            if not s:
                base |= 1 << v
        if tautology:
            continue
        free_positions = [i for i in range(n) if not (fixed >> i) & 1]
        f = len(free_positions)
        idx = np.full(1 << f, base, dtype=np.uint64)
        counter = np.arange(1 << f, dtype=np.uint64)
        for j, p in enumerate(free_positions):
            idx |= ((counter >> np.uint64(j)) & np.uint64(1)) << np.uint64(p)
        sat[idx] = 0
    return sat
