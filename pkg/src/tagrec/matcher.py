"""Profile-to-profile similarity and the full pairwise matrix.

Two profiles are compared by greedy best-pair matching over their word
sets: fill an n x m grid with word similarities, repeatedly take the
global maximum, retire its row and column, and average the picked values
over min(n, m) rounds.  The grid scan is the hot loop of the O(N^2)
matrix build, so it lives in a compiled kernel with a numpy fallback
selected at import time (set ``TAGREC_PURE_KERNEL=1`` to force the
fallback).
"""

from __future__ import annotations

import logging
import os
from multiprocessing import get_context

import numpy as np

from tagrec.errors import InputError, UnknownIdError

logger = logging.getLogger(__name__)

if os.environ.get("TAGREC_PURE_KERNEL"):
    from tagrec._greedy_pure import greedy_match as _greedy_match

    KERNEL = "pure"
else:
    try:
        from tagrec._greedy import greedy_match as _greedy_match

        KERNEL = "native"
    except ImportError:  # extension not built
        from tagrec._greedy_pure import greedy_match as _greedy_match

        KERNEL = "pure"

PROGRESS_EVERY = 5000  # pairs between progress callbacks


def _word_tuple(profile_or_words) -> tuple[str, ...]:
    words = getattr(profile_or_words, "words", profile_or_words)
    return tuple(sorted(set(words)))


def _pair_score(rows: tuple[str, ...], cols: tuple[str, ...], word_sim) -> float:
    sim = np.empty((len(rows), len(cols)), dtype=np.float64)
    for i, u in enumerate(rows):
        for j, v in enumerate(cols):
            sim[i, j] = word_sim(u, v)
    total, counter = _greedy_match(sim)
    return total / counter


def profile_similarity(p1, p2, word_sim) -> float:
    """Greedy-matching similarity between two profiles, in [0, 1].

    ``word_sim`` must be symmetric with values in [0, 1].  Either profile
    being empty scores 0.  The word lists are sorted and oriented
    canonically before matching, so results are bit-exact symmetric and
    ties in the grid resolve the same way no matter the argument order.
    """
    wa = _word_tuple(p1)
    wb = _word_tuple(p2)
    if not wa or not wb:
        return 0.0
    if wb < wa:
        wa, wb = wb, wa
    return _pair_score(wa, wb, word_sim)


class _PairCache:
    """Memo for a symmetric word-similarity function; per-worker, not shared."""

    def __init__(self, word_sim):
        self._word_sim = word_sim
        self._cache: dict[tuple[str, str], float] = {}

    def __call__(self, w1: str, w2: str) -> float:
        key = (w1, w2) if w1 <= w2 else (w2, w1)
        value = self._cache.get(key)
        if value is None:
            value = self._word_sim(w1, w2)
            self._cache[key] = value
        return value


class SimilarityMatrix:
    """Symmetric profile similarities in condensed triangular float32 storage.

    Only the strict upper triangle is stored (N*(N-1)/2 entries); the
    diagonal is implicitly 1.
    """

    def __init__(self, ids, condensed: np.ndarray):
        self.ids = list(ids)
        n = len(self.ids)
        expected = n * (n - 1) // 2
        if condensed.shape != (expected,):
            raise InputError(f"condensed storage must have {expected} entries, got {condensed.shape}")
        self.condensed = np.asarray(condensed, dtype=np.float32)
        self._index = {pid: i for i, pid in enumerate(self.ids)}
        if len(self._index) != n:
            raise InputError("duplicate profile ids")

    @property
    def n(self) -> int:
        return len(self.ids)

    def index(self, profile_id: str) -> int:
        try:
            return self._index[profile_id]
        except KeyError:
            raise UnknownIdError(f"unknown profile id {profile_id!r}") from None

    def _k(self, i: int, j: int) -> int:
        # condensed index of pair (i, j) with i < j
        return self.n * i - i * (i + 1) // 2 + (j - i - 1)

    def sim(self, i: int, j: int) -> float:
        if i == j:
            return 1.0
        if i > j:
            i, j = j, i
        return float(self.condensed[self._k(i, j)])

    def sim_ids(self, a: str, b: str) -> float:
        return self.sim(self.index(a), self.index(b))

    def distances_to(self, j: int) -> np.ndarray:
        """1 - similarity from every profile to profile ``j`` (float64)."""
        n = self.n
        out = np.empty(n, dtype=np.float64)
        if j > 0:
            i = np.arange(j)
            out[:j] = self.condensed[n * i - i * (i + 1) // 2 + (j - i - 1)]
        out[j] = 1.0  # self-similarity
        if j < n - 1:
            base = n * j - j * (j + 1) // 2
            out[j + 1 :] = self.condensed[base : base + (n - j - 1)]
        return 1.0 - out

    def pairwise_distances(self, indices) -> np.ndarray:
        """Square 1 - similarity matrix over the given profile indices."""
        idx = np.asarray(indices, dtype=np.int64)
        if self.condensed.size == 0:
            return np.zeros((idx.size, idx.size), dtype=np.float64)
        a = idx[:, None]
        b = idx[None, :]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        # Diagonal cells get a bogus condensed index; they are overwritten below.
        k = self.n * lo - lo * (lo + 1) // 2 + (hi - lo - 1)
        dist = 1.0 - self.condensed[k].astype(np.float64)
        np.fill_diagonal(dist, 0.0)
        return dist

    def iter_pairs(self):
        """Yield ``(id_i, id_j, sim)`` for every i < j in storage order."""
        k = 0
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield self.ids[i], self.ids[j], float(self.condensed[k])
                k += 1

    def scaled(self, factor: float) -> "SimilarityMatrix":
        return SimilarityMatrix(self.ids, self.condensed * np.float32(factor))


# Worker state for the parallel matrix build; populated by the pool
# initializer after fork so tasks only carry row ranges.
_WORKER: dict = {}


def _init_worker(word_lists, word_sim):
    _WORKER["words"] = word_lists
    _WORKER["sw"] = _PairCache(word_sim)


def _score_rows(bounds):
    lo, hi = bounds
    word_lists = _WORKER["words"]
    sw = _WORKER["sw"]
    n = len(word_lists)
    out = np.empty(sum(n - 1 - i for i in range(lo, hi)), dtype=np.float32)
    pos = 0
    for i in range(lo, hi):
        wa = word_lists[i]
        for j in range(i + 1, n):
            wb = word_lists[j]
            if not wa or not wb:
                out[pos] = 0.0
            elif wb < wa:
                out[pos] = _pair_score(wb, wa, sw)
            else:
                out[pos] = _pair_score(wa, wb, sw)
            pos += 1
    return lo, out


def _row_chunks(n: int, n_chunks: int) -> list[tuple[int, int]]:
    """Split rows into contiguous chunks with roughly equal pair counts."""
    total = n * (n - 1) // 2
    target = max(1, total // n_chunks)
    chunks = []
    lo = 0
    acc = 0
    for i in range(n):
        acc += n - 1 - i
        if acc >= target and i + 1 < n:
            chunks.append((lo, i + 1))
            lo = i + 1
            acc = 0
    if lo < n:
        chunks.append((lo, n))
    return chunks


def build_similarity_matrix(profiles, word_sim, workers: int = 1, progress=None) -> SimilarityMatrix:
    """Compute all N*(N-1)/2 profile similarities.

    ``progress``, when given, is called with ``(done_pairs, total_pairs)``
    at intervals.  With ``workers > 1`` the pair set is partitioned into
    row blocks handled by forked processes; ``word_sim`` must then be
    picklable.
    """
    profiles = list(profiles)
    ids = [p.id for p in profiles]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate profile ids")
    n = len(ids)
    word_lists = [_word_tuple(p) for p in profiles]
    total_pairs = n * (n - 1) // 2
    condensed = np.zeros(total_pairs, dtype=np.float32)

    if workers <= 1 or n < 4:
        sw = _PairCache(word_sim)
        k = 0
        for i in range(n):
            wa = word_lists[i]
            for j in range(i + 1, n):
                wb = word_lists[j]
                if wa and wb:
                    condensed[k] = _pair_score(wb, wa, sw) if wb < wa else _pair_score(wa, wb, sw)
                k += 1
                if progress is not None and k % PROGRESS_EVERY == 0:
                    progress(k, total_pairs)
    else:
        chunks = _row_chunks(n, workers * 4)
        offsets = np.concatenate(([0], np.cumsum([n - 1 - i for i in range(n)]))).astype(np.int64)
        done = 0
        ctx = get_context("fork")
        with ctx.Pool(processes=workers, initializer=_init_worker, initargs=(word_lists, word_sim)) as pool:
            for lo, block in pool.imap_unordered(_score_rows, chunks):
                condensed[offsets[lo] : offsets[lo] + len(block)] = block
                done += len(block)
                if progress is not None:
                    progress(done, total_pairs)

    if progress is not None:
        progress(total_pairs, total_pairs)
    return SimilarityMatrix(ids, condensed)
