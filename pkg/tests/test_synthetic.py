"""Tests for synthetic module."""

import pytest

from sacmt.corpus import Sentiment, relabel_by_emoji
from sacmt.synthetic import (
    ENGLISH_WORDS,
    MIXED_WORDS,
    VARIANT_FAMILIES,
    VARIANT_SKELETONS,
    emoji_corpus,
    emoji_map,
    separable_corpora,
    variant_corpus,
)
from sacmt.textprep import consonant_skeleton
from sacmt.variants import word_frequencies


def _vocabulary(corpus):
    return {w for s in corpus for w in s.text.split()}


class TestSeparableCorpora:
    """Tests for separable_corpora function."""

    def test_sizes_and_balance(self):
        """Test that every class gets n sentences in both languages."""
        mixed, english = separable_corpora(7, seed=0)

        for corpus in (mixed, english):
            assert len(corpus) == 21
            assert set(corpus.class_counts().values()) == {7}

    def test_names_and_ids(self):
        """Test corpus names and sentence ids."""
        mixed, english = separable_corpora(2, seed=0)

        assert (mixed.name, english.name) == ("mixed", "english")
        assert [s.id for s in mixed] == ["m1", "m2", "m3", "m4", "m5", "m6"]
        assert english[0].id == "e1"

    def test_languages_share_no_token(self):
        """Test that the two corpora have disjoint vocabularies."""
        mixed, english = separable_corpora(20, seed=1)
        assert not _vocabulary(mixed) & _vocabulary(english)

    def test_tokens_come_from_class_inventory(self):
        """Test that each sentence only uses its class's words."""
        mixed, english = separable_corpora(10, seed=2, length=4)

        for corpus, inventory in ((mixed, MIXED_WORDS), (english, ENGLISH_WORDS)):
            for s in corpus:
                tokens = s.text.split()
                assert len(tokens) == 4
                assert set(tokens) <= set(inventory[s.label])

    def test_deterministic(self):
        """Test that the same seed gives the same corpora."""
        assert separable_corpora(5, seed=3) == separable_corpora(5, seed=3)

    def test_seed_matters(self):
        """Test that a different seed changes the text."""
        first, _ = separable_corpora(5, seed=3)
        second, _ = separable_corpora(5, seed=4)
        assert [s.text for s in first] != [s.text for s in second]


class TestVariantCorpus:
    """Tests for variant_corpus function."""

    def test_family_skeletons(self):
        """Test that each family shares one consonant skeleton."""
        for family, skeleton in zip(VARIANT_FAMILIES, VARIANT_SKELETONS):
            assert {consonant_skeleton(w) for w in family} == {skeleton}

    def test_member_frequencies(self):
        """Test that member j of a family of size n occurs repeats * (n - j) times."""
        freqs = word_frequencies([variant_corpus(3, seed=0)])

        for family in VARIANT_FAMILIES:
            for j, word in enumerate(family):
                assert freqs[word] == 3 * (len(family) - j)

    def test_size(self):
        """Test the total sentence count."""
        per_repeat = sum(len(f) * (len(f) + 1) // 2 for f in VARIANT_FAMILIES)
        assert len(variant_corpus(2, seed=0)) == 2 * per_repeat

    def test_unique_ids(self):
        """Test that sentence ids are unique."""
        corpus = variant_corpus(2, seed=5)
        assert len({s.id for s in corpus}) == len(corpus)

    def test_deterministic(self):
        """Test that the same seed gives the same corpus."""
        assert variant_corpus(2, seed=1) == variant_corpus(2, seed=1)

    def test_invalid_repeats(self):
        """Test that repeats must be positive."""
        with pytest.raises(ValueError, match="repeats"):
            variant_corpus(0, seed=0)


class TestEmojiCorpus:
    """Tests for emoji_corpus and emoji_map."""

    def test_map(self):
        """Test four emojis per class."""
        emojis = emoji_map()

        assert len(emojis) == 12
        assert emojis.find("great 😄") == [Sentiment.POSITIVE]
        assert emojis.find("meh 😐") == [Sentiment.NEUTRAL]
        assert emojis.find("ugh 😡") == [Sentiment.NEGATIVE]

    def test_heart_with_variation_selector(self):
        """Test that the red heart matches with or without U+FE0F."""
        emojis = emoji_map()
        assert emojis.find("love ❤️") == emojis.find("love ❤") == [Sentiment.POSITIVE]

    def test_relabel_drops(self):
        """Test that one in ten sentences conflicts and one in ten has no emoji."""
        corpus, emojis = emoji_corpus(30, seed=0)
        result = relabel_by_emoji(corpus, emojis)

        assert result.dropped_conflict == 3
        assert result.dropped_unmapped == 3
        assert result.dropped_empty == 0
        assert len(result.corpus) == 24

    def test_emoji_agrees_with_tag(self):
        """Test that kept sentences keep their sentiment tag as emoji class."""
        corpus, emojis = emoji_corpus(40, seed=1)
        tags = {s.id: s.label for s in corpus}

        for s in relabel_by_emoji(corpus, emojis).corpus:
            assert s.label is tags[s.id]

    def test_deterministic(self):
        """Test that the same seed gives the same corpus."""
        assert emoji_corpus(10, seed=2)[0] == emoji_corpus(10, seed=2)[0]
