import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefmine.corpus import NO, YES, labeled_pairs, link_pairs
from beliefmine.errors import ClassMissing, EmptyInput, EmptyText
from beliefmine.structure import (
    MedianPair,
    classify_by_median,
    evaluate_structure_classifier,
    levenshtein,
    median_string,
    parse_brackets,
    shallow_parse,
    split_by_majority_response,
    token_levenshtein,
)
from conftest import make_record
from oracles import brute_force_medoid, levenshtein_ref

TOY_LEXICON = {"the": "DT", "cat": "NN", "sat": "VBD"}


class TestShallowParse:
    def test_toy_lexicon_sentence(self):
        assert (
            shallow_parse("the cat sat", TOY_LEXICON)
            == "(S (NP (DT the) (NN cat)) (VP (VBD sat)))"
        )

    def test_unknown_word_defaults_to_nn(self):
        assert shallow_parse("virus") == "(S (NP (NN virus)))"

    def test_empty_text_rejected(self):
        with pytest.raises(EmptyText):
            shallow_parse("")
        with pytest.raises(EmptyText):
            shallow_parse("   ...   ")

    def test_pp_chunk(self):
        out = shallow_parse("sat on the mat", {"sat": "VBD", "on": "IN", "the": "DT", "mat": "NN"})
        assert out == "(S (VP (VBD sat)) (PP (IN on) (NP (DT the) (NN mat))))"

    def test_preposition_without_np_is_bare(self):
        out = shallow_parse("sat on", {"sat": "VBD", "on": "IN"})
        assert out == "(S (VP (VBD sat)) (IN on))"

    def test_modal_verb_chunk(self):
        out = shallow_parse("masks can work", {"can": "MD", "work": "VB"})
        assert out == "(S (NP (NNS masks)) (VP (MD can) (VB work)))"

    def test_adjective_noun_phrase(self):
        out = shallow_parse("the new guidelines", {"the": "DT", "new": "JJ"})
        assert out == "(S (NP (DT the) (JJ new) (NNS guidelines)))"

    def test_punctuation_stripped(self):
        assert shallow_parse("virus!", {}) == shallow_parse("virus", {})

    def test_parse_round_trips_through_bracket_parser(self):
        texts = [
            "the cat sat on the mat",
            "masks can work quickly",
            "Ethics is the essence of this",
            "we can defeat it",
            "this virus thrives when we are divided",
        ]
        for text in texts:
            parsed = shallow_parse(text)
            tree = parse_brackets(parsed)
            assert tree[0] == "S"
            assert parsed.count("(") == parsed.count(")")

    @given(st.lists(st.sampled_from(
        ["the", "cat", "sat", "on", "can", "work", "new", "virus", "quickly", "tested"]
    ), min_size=1, max_size=8))
    def test_balanced_parentheses_property(self, words):
        parsed = shallow_parse(" ".join(words))
        parse_brackets(parsed)  # raises on imbalance
        assert parsed.startswith("(S ") and parsed.endswith(")")

    def test_unbalanced_string_rejected_by_bracket_parser(self):
        with pytest.raises(ValueError):
            parse_brackets("(S (NP (NN virus))")


class TestLevenshtein:
    @pytest.mark.parametrize(
        "a,b,d",
        [
            ("", "", 0),
            ("", "abc", 3),
            ("abc", "", 3),
            ("same", "same", 0),
            ("kitten", "sitting", 3),
            ("aab", "bba", 3),
            ("flaw", "lawn", 2),
        ],
    )
    def test_known_distances(self, a, b, d):
        assert levenshtein(a, b) == d

    def test_agrees_with_reference_on_random_pairs(self):
        rng = random.Random(13)
        for _ in range(300):
            a = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 40)))
            b = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 40)))
            assert levenshtein(a, b) == levenshtein_ref(a, b)

    @given(st.text(alphabet="abcd", max_size=24), st.text(alphabet="abcd", max_size=24))
    def test_matches_reference_hypothesis(self, a, b):
        assert levenshtein(a, b) == levenshtein_ref(a, b)

    @given(st.text(alphabet="abc", max_size=16), st.text(alphabet="abc", max_size=16),
           st.text(alphabet="abc", max_size=16))
    @settings(max_examples=300)
    def test_metric_axioms(self, a, b, c):
        dab = levenshtein(a, b)
        assert dab >= 0
        assert (dab == 0) == (a == b)
        assert dab == levenshtein(b, a)
        assert dab <= levenshtein(a, c) + levenshtein(c, b)

    def test_token_level_mode(self):
        assert token_levenshtein("the cat sat", "the dog sat") == 1
        assert token_levenshtein("a b", "a b c") == 1
        assert levenshtein("the cat", "the car") == 1


class TestMedianString:
    def test_singleton(self):
        assert median_string(["x"]) == "x"

    def test_hand_computed_sums(self):
        # sums: aab=5, aba=3, bba=4
        assert median_string(["aab", "aba", "bba"]) == "aba"

    def test_identical_strings_return_first(self):
        assert median_string(["q", "q", "q"]) == "q"

    def test_tie_breaks_to_earliest_index(self):
        assert median_string(["ab", "ba"]) == "ab"

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            median_string([])

    def test_matches_brute_force_on_random_sets(self):
        rng = random.Random(99)
        for _ in range(150):
            strings = [
                "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
                for _ in range(rng.randint(1, 6))
            ]
            assert median_string(strings) == brute_force_medoid(strings)

    def test_medoid_is_always_a_member(self):
        strings = ["alpha", "beta", "gamma"]
        assert median_string(strings) in strings


class TestSplitByMajority:
    def _pairs(self, spec):
        # spec: source_id -> (text, [labels...])
        records = []
        for sid, (text, labels) in spec.items():
            records.append(make_record(sid, "cdcgov", text=text))
            for i, label in enumerate(labels):
                records.append(
                    make_record(f"{sid}_r{i}", "fan", reply=sid, votes=[label] * 3)
                )
        linked, _ = link_pairs(records, {"cdcgov"})
        return labeled_pairs(linked)

    def test_majority_yes_goes_to_yes_set(self):
        labeled = self._pairs({"s1": ("COVID update", ["yes", "yes", "no"])})
        yes_set, no_set = split_by_majority_response(labeled)
        assert [p.origin_id for p in yes_set] == ["s1"]
        assert no_set == []

    def test_even_split_goes_to_no_set(self):
        labeled = self._pairs({"s1": ("COVID update", ["yes", "no"])})
        yes_set, no_set = split_by_majority_response(labeled)
        assert yes_set == []
        assert [p.origin_id for p in no_set] == ["s1"]

    def test_non_covid_sources_excluded(self):
        labeled = self._pairs({"s1": ("flu season news", ["yes", "yes"])})
        yes_set, no_set = split_by_majority_response(labeled)
        assert yes_set == [] and no_set == []
        yes_set, _ = split_by_majority_response(labeled, covid_only=False)
        assert [p.origin_id for p in yes_set] == ["s1"]

    def test_precomputed_parse_respected(self):
        src = make_record("s1", "cdcgov", text="corona stuff", parse="(S (NN custom))")
        resp = make_record("r1", "fan", reply="s1", votes=["yes"])
        linked, _ = link_pairs([src, resp], {"cdcgov"})
        yes_set, _ = split_by_majority_response(labeled_pairs(linked))
        assert yes_set[0].parse == "(S (NN custom))"


class TestClassifyByMedian:
    MEDIANS = MedianPair(median_yes="ab", median_no="xyz")

    def test_exact_match_is_yes(self):
        assert classify_by_median("ab", self.MEDIANS) == YES

    def test_closer_to_yes(self):
        # d("abc","ab")=1 < d("abc","xyz")=3
        assert classify_by_median("abc", self.MEDIANS) == YES

    def test_tie_goes_to_no(self):
        medians = MedianPair(median_yes="aa", median_no="bb")
        assert classify_by_median("ab", medians) == NO

    def test_swap_invariance(self):
        rng = random.Random(3)
        for _ in range(50):
            p = "".join(rng.choice("abx") for _ in range(rng.randint(0, 8)))
            m = MedianPair(median_yes="abab", median_no="xxxx")
            swapped = MedianPair(median_yes="xxxx", median_no="abab")
            direct = classify_by_median(p, m)
            mirrored = classify_by_median(p, swapped)
            d_yes = levenshtein(p, "abab")
            d_no = levenshtein(p, "xxxx")
            if d_yes != d_no:  # ties break to NO under both orientations
                assert direct != mirrored


def _margin_corpus():
    """Two structurally distinct classes with a provable margin."""
    yes_base = "(S (NP (NN aaa)) (VP (VBD bbb)))"
    no_base = "(S (VP (VBZ xxxxx) (VBG yyyyy)) (VP (VBD zzzzz)) (PP (IN wwwww)))"
    yes_items = []
    no_items = []
    for i in range(10):
        tweak = chr(ord("a") + i)
        yes_items.append((yes_base.replace("aaa", f"aa{tweak}"), YES))
        no_items.append((no_base.replace("xxxxx", f"xxxx{tweak}"), NO))
    return yes_items + no_items


class TestEvaluateStructureClassifier:
    def test_margin_corpus_perfect_accuracy(self):
        items = _margin_corpus()
        # verify the margin premise before trusting the outcome
        yes_strings = [p for p, l in items if l == YES]
        no_strings = [p for p, l in items if l == NO]
        intra = max(
            max(levenshtein(a, b) for a in yes_strings for b in yes_strings),
            max(levenshtein(a, b) for a in no_strings for b in no_strings),
        )
        inter = min(levenshtein(a, b) for a in yes_strings for b in no_strings)
        assert 2 * intra < inter
        result = evaluate_structure_classifier(items, 0.7, seed=5)
        assert result.accuracy == 1.0
        assert result.train_size == 14 and result.test_size == 6

    def test_test_set_equal_to_medians(self):
        items = [("(S (NN a))", YES), ("(S (VP b))", NO)] * 3
        result = evaluate_structure_classifier(items, 0.7, seed=1)
        assert result.accuracy == 1.0

    def test_degenerate_identical_strings(self):
        items = [("(S (NN same))", YES)] * 5 + [("(S (NN same))", NO)] * 10
        result = evaluate_structure_classifier(items, 0.7, seed=2)
        # every distance ties, so everything is predicted NO
        test_no = sum(1 for r in result.items if r["label"] == NO)
        assert result.accuracy == pytest.approx(test_no / result.test_size)

    def test_class_missing(self):
        with pytest.raises(ClassMissing):
            evaluate_structure_classifier([("(S (NN x))", YES)] * 4, 0.7, seed=0)

    def test_split_is_seeded_and_stratified(self):
        items = _margin_corpus()
        r1 = evaluate_structure_classifier(items, 0.7, seed=9)
        r2 = evaluate_structure_classifier(items, 0.7, seed=9)
        assert [i["parse"] for i in r1.items] == [i["parse"] for i in r2.items]
        # 70% of each class of 10 -> 7 train / 3 test per class
        assert r1.train_size == 14 and r1.test_size == 6
        labels = [i["label"] for i in r1.items]
        assert labels.count(YES) == 3 and labels.count(NO) == 3

    def test_medians_come_from_train_members(self):
        items = _margin_corpus()
        result = evaluate_structure_classifier(items, 0.7, seed=4)
        all_strings = {p for p, _ in items}
        assert result.medians.median_yes in all_strings
        assert result.medians.median_no in all_strings
