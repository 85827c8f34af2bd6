"""Averaged skip-gram vectors with L2-regularized logistic regression."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .artifacts import read_json, require_object, write_json
from .config import BaselineConfig
from .corpus import Sentence, Sentiment
from .errors import BaselineError
from .skipgram import WordEmbeddings
from .textprep import sentence_tokens

logger = logging.getLogger(__name__)

CLASSES = tuple(Sentiment)


def asv_vector(s: Sentence, emb: WordEmbeddings) -> np.ndarray:
    """
    Mean skip-gram vector over the sentence's distinct embedded words.

    Words without a vector are left out of both sum and count; a sentence
    with none gives the zero vector.
    """
    words = sorted(set(sentence_tokens(s.text)))
    vectors = [v for v in (emb.vector(w) for w in words) if v is not None]
    if not vectors:
        return np.zeros(emb.dim)
    return np.mean(np.stack(vectors), axis=0)


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


@dataclass
class LogRegModel:
    """Multinomial logistic regression; rows follow Negative, Neutral, Positive."""

    W: np.ndarray
    b: np.ndarray
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        if self.W.ndim != 2 or self.W.shape[0] != len(CLASSES) or self.b.shape != (len(CLASSES),):
            raise BaselineError(f"weights must be {len(CLASSES)} x k with {len(CLASSES)} biases")
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.b))):
            raise BaselineError("non-finite logistic regression weights")

    @property
    def dim(self) -> int:
        return self.W.shape[1]

    def scores(self, x: np.ndarray) -> np.ndarray:
        return self.W @ x + self.b

    def to_dict(self) -> dict:
        return {
            "classes": [c.label for c in CLASSES],
            "W": self.W.tolist(),
            "b": self.b.tolist(),
        }

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "LogRegModel":
        data = require_object(read_json(path), path)
        try:
            W = np.asarray(data["W"], dtype=np.float64)
            b = np.asarray(data["b"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as e:
            raise BaselineError(f"malformed baseline model {path}: {e}") from e
        return cls(W, b)


def logreg_objective(m: LogRegModel, X: np.ndarray, Y: np.ndarray, l2: float) -> float:
    """Mean cross-entropy plus l2 * ||W||^2 / 2."""
    scores = X @ m.W.T + m.b
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    ce = -float(np.mean(log_probs[np.arange(len(Y)), Y]))
    return ce + 0.5 * l2 * float(np.sum(m.W**2))


def train_logreg(
    xs: Sequence[np.ndarray], ys: Sequence[Sentiment], cfg: BaselineConfig
) -> LogRegModel:
    """
    Full-batch gradient descent on mean cross-entropy + l2 * ||W||^2 / 2.

    The L2 term is applied as a proximal step, W <- (W - lr * g) / (1 + lr * l2),
    which stays stable for any l2 >= 0. Biases are not regularized.

    Raises:
        BaselineError: On empty input, mismatched lengths or a single class
    """
    if len(xs) == 0:
        raise BaselineError("no training vectors")
    if len(xs) != len(ys):
        raise BaselineError("vectors and labels differ in length")
    Y = np.array([int(y) for y in ys], dtype=np.int64)
    if len(set(Y.tolist())) < 2:
        raise BaselineError("logistic regression needs at least two distinct classes")

    X = np.stack([np.asarray(x, dtype=np.float64) for x in xs])
    n, k = X.shape
    onehot = np.zeros((n, len(CLASSES)))
    onehot[np.arange(n), Y] = 1.0

    rng = np.random.default_rng(cfg.seed)
    W = rng.normal(0.0, 0.01, size=(len(CLASSES), k))
    b = np.zeros(len(CLASSES))
    history: List[float] = []

    for epoch in range(cfg.epochs):
        P = _softmax(X @ W.T + b)
        G = (P - onehot) / n
        W = (W - cfg.lr * (G.T @ X)) / (1.0 + cfg.lr * cfg.l2)
        b = b - cfg.lr * G.sum(axis=0)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise BaselineError(f"logistic regression diverged at epoch {epoch + 1}")
        history.append(logreg_objective(LogRegModel(W, b), X, Y, cfg.l2))

    logger.info(
        "Fitted logistic regression on %d vectors (k=%d), final objective %.6f",
        n,
        k,
        history[-1] if history else float("nan"),
    )
    return LogRegModel(W, b, history)


def predict_logreg(m: LogRegModel, x: np.ndarray) -> Sentiment:
    """
    Class with the highest score; ties go to the lower class.

    Raises:
        BaselineError: If x has the wrong dimension
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (m.dim,):
        raise BaselineError(f"input has shape {x.shape}, model expects ({m.dim},)")
    # argmax returns the first maximum, i.e. the lowest class.
    return CLASSES[int(np.argmax(m.scores(x)))]
