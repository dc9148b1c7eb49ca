from __future__ import annotations

import random
from itertools import combinations

import pytest

from divkit import (
    CandidatePool,
    DomainError,
    Solution,
    SolutionSet,
    build_sft_splits,
    divergence_global,
    greedy_update,
    select_extremal_subsets,
)
from oracles import double_sum_zeta


def correct(sid, text):
    return Solution(sid, text, True)


def pool_of(texts, k=4, question_id="q", ids=None):
    ids = ids or [chr(ord("a") + i) for i in range(len(texts))]
    return CandidatePool(question_id, tuple(correct(i, t) for i, t in zip(ids, texts)), k=k)


def oracle_extremes(texts, ids, k):
    """Exhaustive subset scoring via the independent double-sum oracle."""
    best_max = best_min = None
    for combo in combinations(range(len(texts)), k):
        zeta = double_sum_zeta([texts[i] for i in combo])
        key = tuple(sorted(ids[i] for i in combo))
        if best_max is None or zeta > best_max[0] or (zeta == best_max[0] and key < best_max[1]):
            best_max = (zeta, key)
        if best_min is None or zeta < best_min[0] or (zeta == best_min[0] and key < best_min[1]):
            best_min = (zeta, key)
    return best_max, best_min


class TestSelectExtremalSubsets:
    def test_four_identical_plus_one_distinct(self):
        texts = ["same", "same", "same", "same", "zzzz"]
        ids = ["a", "b", "c", "d", "e"]
        result = select_extremal_subsets(pool_of(texts, ids=ids))
        (max_zeta, max_key), (min_zeta, min_key) = oracle_extremes(texts, ids, 4)
        assert result.minus_ids == ("a", "b", "c", "d") == min_key
        assert result.minus_zeta == pytest.approx(0.0) == pytest.approx(min_zeta)
        # every subset containing e scores 1.5; the tie breaks to (a,b,c,e)
        assert result.plus_ids == ("a", "b", "c", "e") == max_key
        assert result.plus_zeta == pytest.approx(1.5) == pytest.approx(max_zeta)
        assert result.subsets_examined == 5

    def test_all_identical(self):
        result = select_extremal_subsets(pool_of(["s"] * 6))
        assert result.plus_zeta == result.minus_zeta == 0.0

    def test_k_equals_pool_size(self):
        result = select_extremal_subsets(pool_of(["aa", "bb", "ab"], k=3))
        assert result.plus_ids == result.minus_ids == ("a", "b", "c")
        assert result.subsets_examined == 1

    def test_matches_oracle_on_random_pools(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randrange(5, 9)
            texts = ["".join(rng.choice("abcd") for _ in range(rng.randrange(1, 6))) for _ in range(n)]
            ids = [f"id{i}" for i in range(n)]
            k = rng.randrange(2, 5)
            result = select_extremal_subsets(pool_of(texts, k=k, ids=ids))
            (max_zeta, max_key), (min_zeta, min_key) = oracle_extremes(texts, ids, k)
            assert result.plus_ids == max_key
            assert result.minus_ids == min_key
            assert result.plus_zeta == pytest.approx(max_zeta, abs=1e-12)
            assert result.minus_zeta == pytest.approx(min_zeta, abs=1e-12)

    def test_beats_random_subsets(self):
        rng = random.Random(23)
        texts = ["".join(rng.choice("wxyz") for _ in range(8)) for _ in range(10)]
        pool = pool_of(texts, ids=[f"c{i}" for i in range(10)])
        result = select_extremal_subsets(pool)
        for _ in range(300):
            picked = rng.sample(list(pool.candidates), 4)
            zeta = double_sum_zeta([s.text for s in picked])
            assert result.plus_zeta >= zeta - 1e-12
            assert result.minus_zeta <= zeta + 1e-12

    def test_candidate_order_invariance(self):
        rng = random.Random(29)
        texts = ["alpha", "beta", "beta", "gamma", "delta delta"]
        ids = ["i1", "i2", "i3", "i4", "i5"]
        base = select_extremal_subsets(pool_of(texts, ids=ids))
        for _ in range(8):
            paired = list(zip(ids, texts))
            rng.shuffle(paired)
            shuffled = pool_of([t for _, t in paired], ids=[i for i, _ in paired])
            result = select_extremal_subsets(shuffled)
            assert result.plus_ids == base.plus_ids
            assert result.minus_ids == base.minus_ids

    def test_combinatorial_guard(self):
        texts = [f"text {i}" for i in range(45)]
        pool = pool_of(texts, k=8, ids=[f"c{i}" for i in range(45)])
        with pytest.raises(DomainError, match="guard"):
            select_extremal_subsets(pool)

    def test_pool_invariants(self):
        with pytest.raises(DomainError, match="needs >= 4"):
            pool_of(["a", "b"])
        with pytest.raises(DomainError, match="not verified correct"):
            CandidatePool("q", (Solution("a", "x", False),) * 1 + (correct("b", "y"), correct("c", "z"), correct("d", "w")), k=4)


class TestGreedyUpdate:
    def two_set(self, d_texts=("x", "y")):
        return SolutionSet("q", (correct("a", d_texts[0]), correct("b", d_texts[1])))

    def test_accept_distinct_addition(self):
        # two identical solutions plus one fully distinct: 4 ordered unit
        # pairs over 3 members
        current = SolutionSet("q", (correct("a", "mm"), correct("b", "mm")))
        decision = greedy_update(current, add=correct("c", "zz"))
        assert decision.accepted
        assert decision.zeta_before == pytest.approx(0.0)
        assert decision.zeta_after == pytest.approx(4 / 3)
        assert double_sum_zeta(["mm", "mm", "zz"]) == pytest.approx(4 / 3)
        assert len(decision.result) == 3

    def test_duplicate_addition_to_divergent_pair(self):
        # closed-form recomputation: {x, y} at divergence 1 scores 1.0; with
        # a duplicate of x the ordered unit pairs number 4, giving 4/3, so
        # the set-size growth outweighs the redundancy and the edit lands
        current = self.two_set()
        assert divergence_global(current) == pytest.approx(1.0)
        decision = greedy_update(current, add=correct("c", "x"))
        assert decision.zeta_after == pytest.approx(double_sum_zeta(["x", "y", "x"]))
        assert decision.zeta_after == pytest.approx(4 / 3)
        assert decision.accepted

    def test_duplicate_addition_to_identical_set_rejected(self):
        current = SolutionSet("q", (correct("a", "mm"), correct("b", "mm")))
        decision = greedy_update(current, add=correct("c", "mm"))
        assert not decision.accepted
        assert decision.zeta_before == decision.zeta_after == 0.0
        assert decision.result == current

    def test_rejected_removal_leaves_set_untouched(self):
        # dropping a member of a spread-out set loses ordered pairs: reject,
        # and the set is byte-for-byte the original
        current = SolutionSet("q", (correct("a", "aa"), correct("b", "bb"), correct("c", "cc")))
        decision = greedy_update(current, remove="c")
        assert not decision.accepted
        assert decision.zeta_after < decision.zeta_before
        assert decision.result is current

    def test_accepted_edit_inverse_is_rejected(self):
        # no oscillation: after an accepted add, removing the same solution
        # would undo a strict gain and must be rejected
        current = SolutionSet("q", (correct("a", "mm"), correct("b", "mm")))
        added = greedy_update(current, add=correct("c", "zz"))
        assert added.accepted
        undo = greedy_update(added.result, remove="c")
        assert not undo.accepted
        assert undo.result == added.result

    def test_accepted_removal_of_redundant_member(self):
        # a tight duplicate cluster dilutes the mean: removing one copy of
        # the near-identical majority raises the closed form
        texts = {"a": "mm", "a2": "mm", "b": "qqqqqqqq", "c": "zzzzzzzz"}
        current = SolutionSet("q", tuple(correct(i, t) for i, t in texts.items()))
        before = divergence_global(current)
        after_texts = [t for i, t in texts.items() if i != "a2"]
        decision = greedy_update(current, remove="a2")
        assert decision.zeta_after == pytest.approx(double_sum_zeta(after_texts))
        if decision.zeta_after > before:
            assert decision.accepted

    def test_errors(self):
        current = self.two_set()
        with pytest.raises(DomainError, match="duplicate id"):
            greedy_update(current, add=correct("a", "whatever"))
        with pytest.raises(DomainError, match="unknown id"):
            greedy_update(current, remove="zz")
        with pytest.raises(DomainError, match="exactly one"):
            greedy_update(current)
        with pytest.raises(DomainError, match="exactly one"):
            greedy_update(current, add=correct("c", "t"), remove="a")
        single = SolutionSet("q", (correct("a", "x"),))
        with pytest.raises(DomainError, match="empty"):
            greedy_update(single, remove="a")

    def test_monotone_audit_trail(self):
        rng = random.Random(41)
        state = SolutionSet("q", (correct("seed0", "aaaa"), correct("seed1", "bbbb")))
        trail = [divergence_global(state)]
        for step in range(40):
            if rng.random() < 0.6 or len(state) <= 2:
                text = "".join(rng.choice("abcd") for _ in range(rng.randrange(1, 6)))
                decision = greedy_update(state, add=correct(f"n{step}", text))
            else:
                decision = greedy_update(state, remove=rng.choice([s.id for s in state.solutions]))
            state = decision.result
            trail.append(divergence_global(state))
        assert all(b >= a - 1e-12 for a, b in zip(trail, trail[1:]))


class TestBuildSftSplits:
    def test_single_pool_counts(self):
        plus, minus = build_sft_splits([pool_of(["aa", "ab", "ba", "bb", "cc"])])
        assert len(plus) == 4 and len(minus) == 4
        assert all(r["split"] == "plus" for r in plus)
        assert all(r["split"] == "minus" for r in minus)
        assert all(r["question_id"] == "q" for r in plus + minus)

    def test_identical_candidates_make_equal_splits(self):
        plus, minus = build_sft_splits([pool_of(["s"] * 5)])
        assert [r["solution_id"] for r in plus] == [r["solution_id"] for r in minus]
        assert [r["text"] for r in plus] == ["s"] * 4

    def test_many_pools_record_counts(self):
        pools = [
            pool_of([f"{q}-{i}" for i in range(6)], question_id=f"q{q}", ids=[f"q{q}c{i}" for i in range(6)])
            for q in range(25)
        ]
        plus, minus = build_sft_splits(pools)
        assert len(plus) == 100 and len(minus) == 100

    def test_failing_pool_names_question(self):
        bad = pool_of([f"t{i}" for i in range(45)], k=8, ids=[f"c{i}" for i in range(45)], question_id="q-bad")
        with pytest.raises(DomainError, match="q-bad"):
            build_sft_splits([bad])
