import pytest
from hypothesis import given
from hypothesis import strategies as st

from smudge import (
    AnswerType,
    SimilarityConfig,
    anls_flattened,
    classify_answer_type,
    match_score,
    nls,
    numeric_match,
    split_hybrid,
)
from smudge.similarity import levenshtein

text = st.text(max_size=30)
nonblank = st.text(min_size=1, max_size=30).filter(lambda s: s.strip())


def brute_levenshtein(a, b):
    # Plain full-matrix DP, independent of the optimized implementation.
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        rows[i][0] = i
    for j in range(len(b) + 1):
        rows[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            rows[i][j] = min(
                rows[i - 1][j] + 1,
                rows[i][j - 1] + 1,
                rows[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return rows[-1][-1]


class TestLevenshtein:
    @given(text, text)
    def test_matches_reference_dp(self, a, b):
        assert levenshtein(a, b) == brute_levenshtein(a, b)


class TestNls:
    def test_single_substitution(self):
        assert nls("apple", "app1e") == 0.8

    def test_milligram_typo(self):
        # One substitution over max length 19.
        assert nls("up to 1z milligrams", "up to 12 milligrams") == pytest.approx(
            1 - 1 / 19
        )

    def test_identity_and_empty(self):
        assert nls("x", "x") == 1.0
        assert nls("", "abc") == 0.0
        assert nls("", "") == 1.0

    def test_case_and_whitespace_normalized(self):
        assert nls("Maple  Syrup", "maple syrup") == 1.0

    @given(text, text)
    def test_symmetric_and_bounded(self, a, b):
        score = nls(a, b)
        assert 0.0 <= score <= 1.0
        assert score == nls(b, a)

    @given(text, text)
    def test_one_iff_normalized_equal(self, a, b):
        from smudge.similarity import normalize_text

        assert (nls(a, b) == 1.0) == (normalize_text(a) == normalize_text(b))


class TestAnlsFlattened:
    def test_below_threshold_zeroed(self):
        # nls("ab", "xy") = 0.0 < 0.5; nls("abcde", "abxde") = 0.8.
        assert anls_flattened("ab", "xy", 0.5) == 0.0
        assert anls_flattened("abcde", "abxde", 0.5) == 0.8

    def test_boundary_kept(self):
        # Exactly at the threshold the raw similarity is kept.
        assert nls("ab", "ax") == 0.5
        assert anls_flattened("ab", "ax", 0.5) == 0.5

    def test_zero_threshold_is_nls(self):
        assert anls_flattened("abc", "abd", 0.0) == nls("abc", "abd")

    @given(text, text, st.floats(min_value=0, max_value=1))
    def test_monotone_in_nls(self, a, b, threshold):
        raw = nls(a, b)
        flattened = anls_flattened(a, b, threshold)
        assert flattened in (0.0, raw)
        assert flattened <= raw


class TestClassifyAnswerType:
    @pytest.mark.parametrize("s,expected", [
        ("1700", AnswerType.NUMERIC),
        ("milligrams", AnswerType.TEXTUAL),
        ("1,700", AnswerType.HYBRID),
        ("(8)", AnswerType.HYBRID),
        ("12 ", AnswerType.NUMERIC),       # whitespace ignored
        ("12 34", AnswerType.NUMERIC),
        ("8.5", AnswerType.HYBRID),
        ("up to 12 milligrams", AnswerType.HYBRID),
    ])
    def test_examples(self, s, expected):
        assert classify_answer_type(s) is expected

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty answer"):
            classify_answer_type("   ")

    @given(nonblank)
    def test_total_partition(self, s):
        result = classify_answer_type(s)
        chars = [c for c in s if not c.isspace()]
        all_digits = all(c in "0123456789" for c in chars)
        all_alpha = all(c.isalpha() for c in chars)
        if all_digits:
            assert result is AnswerType.NUMERIC
        elif all_alpha:
            assert result is AnswerType.TEXTUAL
        else:
            assert result is AnswerType.HYBRID


class TestNumericMatch:
    def test_exact(self):
        assert numeric_match("12", "12") == 1.0

    def test_mismatch(self):
        assert numeric_match("26", "12") == 0.0

    def test_thousand_scale(self):
        assert numeric_match("12000", "12") == 1.0
        assert numeric_match("12", "12000") == 1.0

    def test_all_default_scales(self):
        for k in (100, 1000, 10**6, 10**9):
            assert numeric_match(str(12 * k), "12") == 1.0

    def test_unlisted_scale_rejected(self):
        assert numeric_match("120", "12") == 0.0
        assert numeric_match("120000", "12") == 0.0  # 10^4 not allowed

    def test_leading_zeros(self):
        assert numeric_match("012", "12") == 1.0

    def test_non_digit_rejected(self):
        with pytest.raises(ValueError):
            numeric_match("1a", "12")

    @given(st.integers(0, 10**6), st.sampled_from([100, 1000, 10**6, 10**9]))
    def test_symmetric_under_scaling(self, n, k):
        a, t = str(n), str(n * k)
        assert numeric_match(a, t) == numeric_match(t, a) == 1.0


class TestSplitHybrid:
    def test_comma_number(self):
        assert split_hybrid("1,700") == ("1700", ",")

    def test_mixed_phrase(self):
        assert split_hybrid("up to 12 mgs") == ("12", "up to mgs")

    def test_percent(self):
        assert split_hybrid("12%") == ("12", "%")

    @given(nonblank)
    def test_digit_order_preserved(self, s):
        num, _ = split_hybrid(s)
        assert num == "".join(c for c in s if c in "0123456789")


class TestMatchScore:
    def test_hybrid_weighted_harmonic(self):
        # num = 1.0; str = nls("up to mgs", "up to milligrams") = 1 - 7/16.
        result = match_score("up to 12 mgs", "up to 12 milligrams")
        assert result.num_score == 1.0
        assert result.str_score == pytest.approx(0.5625)
        expected = 11 / (10 / 1.0 + 1 / 0.5625)
        assert result.value == pytest.approx(expected)
        assert 0.93 <= result.value <= 0.95

    def test_hybrid_zero_num_zeroes_everything(self):
        result = match_score("up to 1z milligrams", "up to 12 milligrams")
        assert result.num_score == 0.0  # digits "1" vs "12"
        assert result.value == 0.0

    def test_identity_all_types(self):
        for answer in ("12", "twelve", "1,700"):
            assert match_score(answer, answer).value == 1.0

    def test_numeric_gt_table_row(self):
        assert match_score("26", "12").value == 0.0

    def test_numeric_gt_reduces_to_binary(self):
        assert match_score("12 mgs", "12").value == 1.0  # digit content matches
        assert match_score("no digits", "12").value == 0.0

    def test_textual_gt_reduces_to_nls(self):
        assert match_score("app1e", "apple").value == nls("app1e", "apple")

    def test_empty_prediction_flagged(self):
        result = match_score("  ", "12")
        assert result.value == 0.0
        assert result.empty_prediction

    def test_empty_gt_rejected(self):
        with pytest.raises(ValueError):
            match_score("x", " ")

    def test_custom_weights(self):
        config = SimilarityConfig(num_weight=1.0, str_weight=1.0)
        result = match_score("up to 12 mgs", "up to 12 milligrams", config)
        # Unweighted harmonic mean of 1.0 and 0.5625.
        assert result.value == pytest.approx(2 / (1 + 1 / 0.5625))

    @given(text, nonblank)
    def test_bounded(self, pred, gt):
        assert 0.0 <= match_score(pred, gt).value <= 1.0
