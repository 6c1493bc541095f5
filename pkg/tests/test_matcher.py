"""Greedy profile matching and similarity matrix construction."""

import random

import numpy as np
import pytest

from tagrec.errors import InputError, UnknownIdError
from tagrec.matcher import (
    SimilarityMatrix,
    build_similarity_matrix,
    profile_similarity,
)
from tagrec.profiles import Profile

from conftest import table_word_sim


def greedy_oracle(rows, cols, word_sim):
    """Independent re-implementation: materialize the grid, scan all cells
    every round, overwrite retired rows/columns with -1, stop when every
    row or every column is retired."""
    grid = [[word_sim(u, v) for v in cols] for u in rows]
    n, m = len(rows), len(cols)
    total, counter = 0.0, 0
    retired_rows: set[int] = set()
    retired_cols: set[int] = set()
    while len(retired_rows) < n and len(retired_cols) < m:
        best, br, bc = -2.0, -1, -1
        for i in range(n):
            for j in range(m):
                if grid[i][j] > best:
                    best, br, bc = grid[i][j], i, j
        total += best
        counter += 1
        retired_rows.add(br)
        retired_cols.add(bc)
        for j in range(m):
            grid[br][j] = -1.0
        for i in range(n):
            grid[i][bc] = -1.0
    return total / counter if counter else 0.0, counter


def random_word_sim(rng, words):
    table = {}
    words = sorted(words)
    for i, a in enumerate(words):
        for b in words[i + 1 :]:
            table[frozenset((a, b))] = rng.random()
    return table_word_sim(table)


class TestProfileSimilarity:
    def test_worked_example(self, worked_word_sim):
        p1 = {"information", "office"}
        p2 = {"salary", "work", "company"}
        value = profile_similarity(p1, p2, worked_word_sim)
        assert value == pytest.approx((0.781 + 0.388) / 2, rel=1e-12)
        assert value == pytest.approx(0.584, abs=1e-3)

    def test_identical_singletons(self, worked_word_sim):
        assert profile_similarity({"dog"}, {"dog"}, worked_word_sim) == 1.0

    def test_empty_profile_scores_zero(self, worked_word_sim):
        assert profile_similarity(set(), {"work"}, worked_word_sim) == 0.0
        assert profile_similarity(set(), set(), worked_word_sim) == 0.0

    def test_accepts_profile_objects(self, worked_word_sim):
        p1 = Profile(id="a", words=frozenset({"information", "office"}))
        p2 = Profile(id="b", words=frozenset({"salary", "work", "company"}))
        assert profile_similarity(p1, p2, worked_word_sim) == pytest.approx(0.5845, rel=1e-12)

    def test_matches_oracle_randomized(self):
        rng = random.Random(20240810)
        pool = [f"w{i}" for i in range(10)]
        for _ in range(1000):
            p1 = set(rng.sample(pool, rng.randint(1, 4)))
            p2 = set(rng.sample(pool, rng.randint(1, 4)))
            sw = random_word_sim(rng, set(p1) | set(p2))
            got = profile_similarity(p1, p2, sw)
            expected, counter = greedy_oracle(sorted(p1), sorted(p2), sw)
            assert got == expected
            assert counter == min(len(p1), len(p2))

    def test_bit_exact_symmetry_randomized(self):
        rng = random.Random(987)
        pool = [f"w{i}" for i in range(12)]
        for trial in range(1000):
            p1 = set(rng.sample(pool, rng.randint(0, 5)))
            p2 = set(rng.sample(pool, rng.randint(0, 5)))
            sw = random_word_sim(rng, set(p1) | set(p2))
            if trial % 2:
                # quantized values force ties through the grid
                base = sw

                def sw(a, b, _base=base):
                    return round(_base(a, b), 1)

            ab = profile_similarity(p1, p2, sw)
            ba = profile_similarity(p2, p1, sw)
            assert ab == ba
            assert 0.0 <= ab <= 1.0

    def test_upper_bound_is_max_cell(self):
        rng = random.Random(55)
        pool = [f"w{i}" for i in range(8)]
        for _ in range(200):
            p1 = set(rng.sample(pool, rng.randint(1, 4)))
            p2 = set(rng.sample(pool, rng.randint(1, 4)))
            sw = random_word_sim(rng, set(p1) | set(p2))
            max_cell = max(sw(a, b) for a in p1 for b in p2)
            assert profile_similarity(p1, p2, sw) <= max_cell + 1e-15

    def test_all_ones_iff_perfect_matches(self):
        sw = table_word_sim({})  # identity 1, everything else 0
        assert profile_similarity({"a", "b"}, {"a", "b"}, sw) == 1.0
        assert profile_similarity({"a", "b"}, {"a", "c"}, sw) < 1.0


class TestSimilarityMatrix:
    def test_basic_accessors(self, blob_matrix):
        assert blob_matrix.n == 6
        assert blob_matrix.sim(0, 0) == 1.0
        assert blob_matrix.sim(0, 1) == pytest.approx(0.9)
        assert blob_matrix.sim(1, 0) == pytest.approx(0.9)
        assert blob_matrix.sim_ids("u0", "u3") == pytest.approx(0.1)

    def test_unknown_id(self, blob_matrix):
        with pytest.raises(UnknownIdError):
            blob_matrix.index("ghost")

    def test_distances_match_sims(self, blob_matrix):
        for j in range(6):
            d = blob_matrix.distances_to(j)
            for i in range(6):
                assert d[i] == pytest.approx(1.0 - blob_matrix.sim(i, j))

    def test_pairwise_distances(self, blob_matrix):
        sub = blob_matrix.pairwise_distances([0, 3, 4])
        assert sub.shape == (3, 3)
        assert sub[0, 0] == 0.0
        assert sub[0, 1] == pytest.approx(0.9)
        assert sub[1, 2] == pytest.approx(1.0 - 0.9)

    def test_iter_pairs_round_trip(self, blob_matrix):
        pairs = list(blob_matrix.iter_pairs())
        assert len(pairs) == 15
        assert pairs[0] == ("u0", "u1", pytest.approx(0.9))

    def test_duplicate_ids_rejected(self):
        with pytest.raises(InputError):
            SimilarityMatrix(["a", "a"], np.zeros(1, dtype=np.float32))

    def test_scaled_preserves_order(self, blob_matrix):
        scaled = blob_matrix.scaled(0.5)
        assert scaled.sim(0, 1) == pytest.approx(0.45)


class TestBuildMatrix:
    def make_profiles(self):
        return [
            Profile(id="a", words=frozenset({"information", "office"})),
            Profile(id="b", words=frozenset({"salary", "work", "company"})),
        ]

    def test_worked_pair(self, worked_word_sim):
        matrix = build_similarity_matrix(self.make_profiles(), worked_word_sim)
        assert matrix.sim_ids("a", "b") == pytest.approx(0.5845, abs=1e-6)
        assert matrix.sim(0, 0) == 1.0

    def test_single_profile(self, worked_word_sim):
        matrix = build_similarity_matrix(self.make_profiles()[:1], worked_word_sim)
        assert matrix.n == 1
        assert matrix.sim(0, 0) == 1.0

    def test_mutually_oov_profiles(self):
        sw = table_word_sim({})
        profiles = [Profile(id=f"p{i}", words=frozenset({f"w{i}"})) for i in range(3)]
        matrix = build_similarity_matrix(profiles, sw)
        for i in range(3):
            for j in range(3):
                assert matrix.sim(i, j) == (1.0 if i == j else 0.0)

    def test_duplicate_ids_rejected(self, worked_word_sim):
        profiles = self.make_profiles() + [Profile(id="a", words=frozenset({"work"}))]
        with pytest.raises(InputError):
            build_similarity_matrix(profiles, worked_word_sim)

    def test_entries_equal_individual_calls(self):
        rng = random.Random(3)
        pool = [f"w{i}" for i in range(12)]
        profiles = [
            Profile(id=f"p{i}", words=frozenset(rng.sample(pool, rng.randint(0, 5))))
            for i in range(8)
        ]
        vocab = set().union(*(p.words for p in profiles)) or {"x"}
        sw = random_word_sim(rng, vocab)
        matrix = build_similarity_matrix(profiles, sw)
        for _ in range(20):
            i, j = rng.randrange(8), rng.randrange(8)
            expected = 1.0 if i == j else profile_similarity(profiles[i], profiles[j], sw)
            assert matrix.sim(i, j) == pytest.approx(expected, abs=1e-7)

    def test_progress_hook_called(self, worked_word_sim):
        calls = []
        profiles = self.make_profiles()
        build_similarity_matrix(profiles, worked_word_sim, progress=lambda d, t: calls.append((d, t)))
        assert calls[-1] == (1, 1)


class TestParallelBuild:
    def test_workers_do_not_change_results(self, toy_taxonomy_half):
        rng = random.Random(31)
        vocab = ["dog", "cat", "animal", "entity", "zqxv", "warbler"]
        profiles = [
            Profile(id=f"p{i}", words=frozenset(rng.sample(vocab, rng.randint(0, 4))))
            for i in range(12)
        ]
        serial = build_similarity_matrix(profiles, toy_taxonomy_half.word_similarity, workers=1)
        parallel = build_similarity_matrix(profiles, toy_taxonomy_half.word_similarity, workers=2)
        assert serial.ids == parallel.ids
        assert np.array_equal(serial.condensed, parallel.condensed)


class TestKernels:
    def test_native_and_pure_agree(self):
        from tagrec._greedy_pure import greedy_match as pure

        try:
            from tagrec._greedy import greedy_match as native
        except ImportError:
            pytest.skip("compiled kernel not available")
        rng = np.random.default_rng(42)
        for _ in range(300):
            n, m = rng.integers(1, 9, size=2)
            grid = rng.random((n, m))
            if rng.random() < 0.5:
                grid = np.round(grid, 1)  # provoke ties
            a_total, a_count = native(np.ascontiguousarray(grid))
            b_total, b_count = pure(grid)
            assert a_total == b_total
            assert a_count == b_count == min(n, m)

    def test_kernel_name_exported(self):
        from tagrec import matcher

        assert matcher.KERNEL in ("native", "pure")

    def test_pure_kernel_empty(self):
        from tagrec._greedy_pure import greedy_match as pure

        assert pure(np.zeros((0, 3))) == (0.0, 0)
