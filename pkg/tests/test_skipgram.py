"""Tests for skipgram module."""

import math

import numpy as np
import pytest

from sacmt.config import SkipGramConfig
from sacmt.corpus import Sentence
from sacmt.errors import SkipGramError
from sacmt.skipgram import WordEmbeddings, cosine, train_skipgram, vector


def _sentences(*texts):
    return [Sentence(str(i), t) for i, t in enumerate(texts, 1)]


def _context_corpus():
    texts = []
    for i in range(30):
        subject = ("ye", "vo", "sab")[i % 3]
        texts.append(f"{subject} bahut accha hai")
        texts.append(f"{subject} bohot accha hai")
        texts.append(f"kal train late thi {subject}")
    return _sentences(*texts)


class TestCosine:
    """Tests for cosine function."""

    def test_identical(self):
        """Test ([1,0], [1,0])."""
        assert cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 1.0

    def test_orthogonal(self):
        """Test ([1,0], [0,1])."""
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_diagonal(self):
        """Test ([1,1], [1,0]) = 1/sqrt(2)."""
        assert cosine(np.array([1.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(1 / math.sqrt(2))

    def test_symmetric(self):
        """Test exact symmetry on random vectors."""
        rng = np.random.default_rng(0)
        for _ in range(500):
            u, v = rng.normal(size=5), rng.normal(size=5)
            assert cosine(u, v) == cosine(v, u)

    def test_scale_invariant(self):
        """Test cosine(u, c*u) = 1 for c > 0."""
        rng = np.random.default_rng(1)
        for _ in range(500):
            u = rng.normal(size=5)
            assert abs(cosine(u, float(rng.uniform(0.01, 100.0)) * u) - 1.0) < 1e-9


class TestTrainSkipgram:
    """Tests for train_skipgram function."""

    def test_deterministic(self):
        """Test that two runs with the same seed give identical vectors."""
        cfg = SkipGramConfig(dim=8, epochs=3, seed=4)
        first = train_skipgram(_context_corpus(), cfg)
        second = train_skipgram(_context_corpus(), cfg)

        assert first.vectors.keys() == second.vectors.keys()
        for word in first.vectors:
            assert np.array_equal(first.vectors[word], second.vectors[word])

    def test_shared_contexts_rank_higher(self):
        """Test that words in identical context slots end up closer than unrelated words."""
        cfg = SkipGramConfig(dim=20, window=2, epochs=30, seed=2)
        emb = train_skipgram(_context_corpus(), cfg)

        same = cosine(emb.vector("bahut"), emb.vector("bohot"))
        assert same > cosine(emb.vector("bahut"), emb.vector("train"))
        assert same > cosine(emb.vector("bahut"), emb.vector("late"))

    def test_min_count(self):
        """Test that a singleton word is dropped at min_count=2."""
        corpus = _sentences("kya baat hai", "kya baat hai yaar")
        emb = train_skipgram(corpus, SkipGramConfig(dim=4, min_count=2, epochs=1))

        assert "yaar" not in emb
        assert "kya" in emb

    def test_nothing_reaches_min_count(self):
        """Test that an all-singleton corpus fails at a high min_count."""
        with pytest.raises(SkipGramError):
            train_skipgram(_sentences("ek do teen"), SkipGramConfig(min_count=2))

    def test_empty_corpus(self):
        """Test that there is nothing to train on."""
        with pytest.raises(SkipGramError):
            train_skipgram([], SkipGramConfig())

    def test_loss_non_increasing(self):
        """Test that the objective does not rise over epochs at a small lr."""
        texts = [f"{a} {b} {c} {d}" for a, b, c, d in zip(
            ("ye", "vo", "mera", "tera", "sab") * 4,
            ("accha", "bura", "theek", "mast", "bekaar") * 4,
            ("din", "raat", "kal", "aaj") * 5,
            ("hai", "tha", "hoga", "thi", "ho") * 4,
        )]
        cfg = SkipGramConfig(dim=8, window=2, epochs=15, lr=0.01, min_lr_ratio=1.0, seed=3)
        history = train_skipgram(_sentences(*texts), cfg).history

        assert len(history) == 15
        for before, after in zip(history, history[1:]):
            assert after <= before + 1e-6


class TestWordEmbeddings:
    """Tests for WordEmbeddings."""

    def setup_method(self):
        self.emb = WordEmbeddings(2, {"kya": np.array([0.5, -1.0])})

    def test_known_word(self):
        """Test lookup of a known word."""
        assert vector(self.emb, "kya").tolist() == [0.5, -1.0]

    def test_unknown_word(self):
        """Test that unknown words are absent."""
        assert vector(self.emb, "baat") is None

    def test_lookup_stable(self):
        """Test that repeated lookups agree."""
        assert np.array_equal(self.emb.vector("kya"), self.emb.vector("kya"))

    def test_wrong_dimension(self):
        """Test that vectors must have the declared dimension."""
        with pytest.raises(SkipGramError):
            WordEmbeddings(3, {"kya": np.zeros(2)})

    def test_save_load(self, tmp_path):
        """Test persisting vectors exactly."""
        emb = train_skipgram(_context_corpus(), SkipGramConfig(dim=4, epochs=1))
        path = tmp_path / "emb.json"
        emb.save(path)
        loaded = WordEmbeddings.load(path)

        assert loaded.dim == 4
        for word, vec in emb.vectors.items():
            assert np.array_equal(loaded.vectors[word], vec)
