import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qcontext import (
    ContextHypergraph,
    enumerate_assignments,
    parity_obstruction,
    parse_hypergraph,
)
from qcontext.ks import MAX_ELEMENTS


def brute_force_count(h):
    """Independent oracle: walk every assignment tuple in python."""
    order = sorted(h.elements)
    count = 0
    witnesses = []
    for bits in itertools.product((0, 1), repeat=len(order)):
        value = dict(zip(order, bits))
        if all(sum(value[l] for l in context) == 1 for context in h.contexts):
            count += 1
            witnesses.append(value)
    return count, (witnesses[0] if witnesses else None)


class TestEnumerate:
    def test_nakamura_not_colorable(self, nakamura):
        h = ContextHypergraph.from_contexts(nakamura.contexts)
        verdict = enumerate_assignments(h)
        assert not verdict.colorable
        assert verdict.valid_count == 0
        assert verdict.total_assignments == 64
        assert verdict.witness is None
        assert verdict.obstruction is not None

    def test_nakamura_matches_brute_force(self, nakamura):
        h = ContextHypergraph.from_contexts(nakamura.contexts)
        count, _ = brute_force_count(h)
        assert count == 0

    def test_single_context_pair(self):
        h = ContextHypergraph.from_contexts([("a", "b")])
        verdict = enumerate_assignments(h)
        assert verdict.colorable
        assert verdict.valid_count == 2
        assert verdict.total_assignments == 4
        # Lexicographically smallest valid assignment over sorted labels.
        assert verdict.witness == {"a": 0, "b": 1}

    def test_witness_matches_oracle_order(self):
        h = ContextHypergraph.from_contexts([("a", "b", "c"), ("c", "d")])
        verdict = enumerate_assignments(h)
        count, first = brute_force_count(h)
        assert verdict.valid_count == count
        assert verdict.witness == first

    def test_random_hypergraphs_match_oracle(self):
        import random

        rng = random.Random(1234)
        labels = [f"e{i}" for i in range(8)]
        for _ in range(25):
            contexts = []
            for _ in range(rng.randint(1, 4)):
                size = rng.randint(1, 4)
                contexts.append(tuple(rng.sample(labels, size)))
            h = ContextHypergraph.from_contexts(contexts)
            verdict = enumerate_assignments(h)
            count, first = brute_force_count(h)
            assert verdict.valid_count == count
            assert verdict.witness == first
            # Soundness: a parity certificate always means zero colorings.
            if verdict.obstruction is not None:
                assert verdict.valid_count == 0

    def test_worker_count_does_not_change_verdict(self, cabello):
        h = ContextHypergraph.from_contexts(cabello.contexts)
        sequential = enumerate_assignments(h, workers=1)
        parallel = enumerate_assignments(h, workers=4)
        assert sequential == parallel

    def test_size_limit(self):
        labels = tuple(f"x{i}" for i in range(MAX_ELEMENTS + 1))
        h = ContextHypergraph(elements=labels, contexts=(labels[:2],))
        with pytest.raises(ValueError, match="size limit"):
            enumerate_assignments(h)

    @settings(max_examples=30, deadline=None)
    @given(st.permutations(list(range(6))), st.randoms(use_true_random=False))
    def test_relabeling_invariance(self, perm, rnd):
        base = ContextHypergraph.from_contexts(
            [("p", "q"), ("q", "r", "s"), ("s", "t", "u")]
        )
        names = ["p", "q", "r", "s", "t", "u"]
        mapping = {names[i]: f"n{perm[i]}" for i in range(6)}
        contexts = [tuple(mapping[l] for l in c) for c in base.contexts]
        rnd.shuffle(contexts)
        renamed = ContextHypergraph.from_contexts(contexts)
        assert (
            enumerate_assignments(renamed).valid_count
            == enumerate_assignments(base).valid_count
        )


class TestParityObstruction:
    def test_present_for_both_families(self, nakamura, cabello):
        for family, count in ((nakamura, 3), (cabello, 5)):
            h = ContextHypergraph.from_contexts(family.contexts)
            obstruction = parity_obstruction(h)
            assert obstruction is not None
            assert obstruction.context_count == count
            assert obstruction.incidence_multiplicity == 2

    def test_absent_for_even_context_count(self):
        # Two identical contexts: every element occurs twice but the count is
        # even, so the parity argument is silent and witnesses exist.
        h = ContextHypergraph.from_contexts([("a", "b"), ("a", "b")])
        assert parity_obstruction(h) is None
        assert enumerate_assignments(h).colorable

    def test_absent_when_incidence_is_not_two(self):
        h = ContextHypergraph.from_contexts([("a", "b"), ("b", "c"), ("c", "d")])
        assert parity_obstruction(h) is None

    def test_absent_without_contexts(self):
        h = ContextHypergraph(elements=("a",), contexts=())
        assert parity_obstruction(h) is None


class TestHypergraphParsing:
    def test_parse_with_comments_and_blanks(self):
        text = "# measurement rows\n\na, b\n b,c \n"
        h = parse_hypergraph(text)
        assert h.elements == ("a", "b", "c")
        assert h.contexts == (("a", "b"), ("b", "c"))

    def test_parse_rejects_empty_labels(self):
        with pytest.raises(ValueError, match="empty label"):
            parse_hypergraph("a,,b\n")

    def test_duplicate_label_in_context_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            parse_hypergraph("a,a\n")

    def test_unknown_labels_rejected_in_constructor(self):
        with pytest.raises(ValueError, match="unknown"):
            ContextHypergraph(elements=("a",), contexts=(("a", "b"),))
