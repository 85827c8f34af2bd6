"""Skip-gram word embeddings trained with negative sampling."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .artifacts import read_json, require_object, write_json
from .config import SkipGramConfig
from .errors import SkipGramError
from .numcore import cosine_sim, sigmoid
from .textprep import sentence_tokens

logger = logging.getLogger(__name__)

# Word vectors share the cosine used in the sentiment space.
cosine = cosine_sim


@dataclass
class WordEmbeddings:
    """Word -> k-dimensional vector."""

    dim: int
    vectors: Dict[str, np.ndarray]
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        for word, vec in self.vectors.items():
            if vec.shape != (self.dim,):
                raise SkipGramError(f"vector for {word!r} has shape {vec.shape}, expected ({self.dim},)")

    def vector(self, word: str) -> Optional[np.ndarray]:
        """Stored vector of word, or None when the word is unknown."""
        return self.vectors.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def to_dict(self) -> Dict[str, object]:
        return {"dim": self.dim, "vectors": {w: v.tolist() for w, v in sorted(self.vectors.items())}}

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "WordEmbeddings":
        data = require_object(read_json(path), path)
        try:
            dim = int(data["dim"])
            vectors = {str(w): np.asarray(v, dtype=np.float64) for w, v in data["vectors"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise SkipGramError(f"malformed embedding file {path}: {e}") from e
        return cls(dim, vectors)


def vector(emb: WordEmbeddings, word: str) -> Optional[np.ndarray]:
    """Skip-gram vector of a word, or None for unknown words."""
    return emb.vector(word)


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    return -np.logaddexp(0.0, -x)


class SkipGramTrainer:
    """
    Single-threaded SGNS trainer over tokenized sentences.

    Tables are mutated during train(); the trainer is not safe to share
    between threads.
    """

    def __init__(self, sentences: Sequence[Sequence[str]], cfg: SkipGramConfig):
        self.cfg = cfg
        counts = Counter(token for sentence in sentences for token in sentence)
        kept = sorted((w for w, c in counts.items() if c >= cfg.min_count), key=lambda w: (-counts[w], w))
        if not kept:
            raise SkipGramError(f"no token occurs at least {cfg.min_count} times")

        dropped = len(counts) - len(kept)
        if dropped:
            logger.debug("Skip-gram dropped %d words below min_count=%d", dropped, cfg.min_count)

        self.words = kept
        self.index = {w: i for i, w in enumerate(kept)}
        freqs = np.array([counts[w] for w in kept], dtype=np.float64) ** 0.75
        self.noise = freqs / freqs.sum()

        centers, contexts = [], []
        for sentence in sentences:
            ids = [self.index[t] for t in sentence if t in self.index]
            for i, center in enumerate(ids):
                lo, hi = max(0, i - cfg.window), min(len(ids), i + cfg.window + 1)
                for j in range(lo, hi):
                    if j != i:
                        centers.append(center)
                        contexts.append(ids[j])
        self.centers = np.array(centers, dtype=np.int64)
        self.contexts = np.array(contexts, dtype=np.int64)

        self.rng = np.random.default_rng(cfg.seed)
        self.W_in = self.rng.uniform(-0.5 / cfg.dim, 0.5 / cfg.dim, size=(len(kept), cfg.dim))
        self.W_out = np.zeros((len(kept), cfg.dim))
        self.negatives = self._draw_negatives()

    def _draw_negatives(self) -> np.ndarray:
        return self.rng.choice(len(self.words), size=(self.centers.size, self.cfg.negatives), p=self.noise)

    def objective(self) -> float:
        """Negative-sampling loss summed over every (center, context) pair."""
        if self.centers.size == 0:
            return 0.0
        v = self.W_in[self.centers]
        pos = np.einsum("pk,pk->p", v, self.W_out[self.contexts])
        neg = np.einsum("pnk,pk->pn", self.W_out[self.negatives], v)
        return float(-(_log_sigmoid(pos).sum() + _log_sigmoid(-neg).sum()))

    def train(self) -> List[float]:
        """Run all epochs; returns the objective measured after each one."""
        cfg = self.cfg
        total_steps = max(1, cfg.epochs * self.centers.size)
        labels = np.zeros(1 + cfg.negatives)
        labels[0] = 1.0
        step = 0
        history: List[float] = []

        for epoch in range(cfg.epochs):
            if cfg.resample_negatives and epoch > 0:
                self.negatives = self._draw_negatives()
            for p in self.rng.permutation(self.centers.size):
                lr = cfg.lr * max(cfg.min_lr_ratio, 1.0 - step / total_steps)
                step += 1
                center = self.centers[p]
                targets = np.concatenate(([self.contexts[p]], self.negatives[p]))
                v = self.W_in[center].copy()
                U = self.W_out[targets]
                g = (labels - sigmoid(U @ v)) * lr
                np.add.at(self.W_out, targets, np.outer(g, v))
                self.W_in[center] += g @ U
            history.append(self.objective())
            logger.debug("skip-gram epoch %d/%d loss %.6f", epoch + 1, cfg.epochs, history[-1])

        return history

    def embeddings(self, history: Optional[List[float]] = None) -> WordEmbeddings:
        return WordEmbeddings(
            self.cfg.dim,
            {w: self.W_in[i].copy() for w, i in self.index.items()},
            history=list(history or []),
        )


def train_skipgram_tokens(sentences: Sequence[Sequence[str]], cfg: SkipGramConfig) -> WordEmbeddings:
    """Train skip-gram vectors on already tokenized sentences."""
    trainer = SkipGramTrainer(sentences, cfg)
    history = trainer.train()
    logger.info(
        "Trained skip-gram vectors for %d words (%d context pairs)", len(trainer.words), trainer.centers.size
    )
    return trainer.embeddings(history)


def train_skipgram(corpus: Iterable, cfg: SkipGramConfig) -> WordEmbeddings:
    """
    Train skip-gram vectors on a corpus of sentences.

    Deterministic for a fixed cfg.seed.

    Raises:
        SkipGramError: If the corpus is empty or no word reaches min_count
    """
    sentences = [sentence_tokens(s.text) for s in corpus]
    if not sentences:
        raise SkipGramError("cannot train skip-gram vectors on an empty corpus")
    return train_skipgram_tokens(sentences, cfg)
