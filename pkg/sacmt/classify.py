"""Nearest-centroid classification in the sentiment space and evaluation metrics."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from .corpus import LabeledCorpus, Sentence, Sentiment
from .errors import ClassifyError
from .numcore import NORM_EPS, cosine_sim
from .siamese import SiameseParams, forward
from .tables import align_columns
from .textprep import TrigramVocab, encode

CLASSES = tuple(Sentiment)

Embedder = Callable[[Sentence], np.ndarray]


def _is_zero(s: np.ndarray) -> bool:
    return float(np.sqrt(s @ s)) < NORM_EPS


def embedder(p: SiameseParams, vocab: TrigramVocab) -> Embedder:
    """Sentence -> sentiment vector through the shared encoder."""
    return lambda sentence: forward(p, encode(sentence, vocab))


@dataclass
class Centroids:
    """Per-class mean sentiment vectors."""

    vectors: Dict[Sentiment, np.ndarray]
    fallback: Sentiment = Sentiment.NEUTRAL

    def to_dict(self) -> Dict[str, object]:
        return {
            "fallback": self.fallback.label,
            "vectors": {c.label: v.tolist() for c, v in sorted(self.vectors.items())},
        }


def resolve_fallback(name: str, anchors: LabeledCorpus) -> Sentiment:
    """'majority' -> anchor majority class, otherwise the named label."""
    if name == "majority":
        return anchors.majority_class()
    return Sentiment.parse(name)


def compute_centroids(
    embed: Embedder, anchors: LabeledCorpus, fallback: Sentiment = Sentiment.NEUTRAL
) -> Centroids:
    """
    Mean sentiment vector of each class over the anchor sentences.

    Raises:
        ClassifyError: If a class has no anchor sentence
    """
    groups = anchors.by_class()
    missing = [c.label for c in CLASSES if not groups[c]]
    if missing:
        raise ClassifyError(f"no anchor sentences for class(es): {', '.join(missing)}")
    vectors = {c: np.mean(np.stack([embed(s) for s in groups[c]]), axis=0) for c in CLASSES}
    return Centroids(vectors, fallback)


def predict_vector(centroids: Centroids, s: np.ndarray) -> Sentiment:
    """
    Class of the most cosine-similar centroid.

    Ties go to the lower class (Negative < Neutral < Positive); a zero
    vector gets the fallback class.
    """
    if _is_zero(s):
        return centroids.fallback
    best, best_sim = None, -np.inf
    for c in CLASSES:
        sim = cosine_sim(s, centroids.vectors[c])
        if sim > best_sim:
            best, best_sim = c, sim
    return best


def predict(p: SiameseParams, centroids: Centroids, s: Sentence, vocab: TrigramVocab) -> Sentiment:
    """Classify one sentence by its nearest centroid."""
    return predict_vector(centroids, forward(p, encode(s, vocab)))


@dataclass
class KnnIndex:
    """Anchor vectors for the k-nearest-neighbour rule."""

    vectors: np.ndarray
    labels: List[Sentiment]
    k: int
    fallback: Sentiment = Sentiment.NEUTRAL

    @classmethod
    def build(cls, embed: Embedder, anchors: LabeledCorpus, k: int, fallback: Sentiment) -> "KnnIndex":
        if len(anchors) == 0:
            raise ClassifyError("k-NN needs at least one anchor sentence")
        return cls(np.stack([embed(s) for s in anchors]), [s.label for s in anchors], k, fallback)

    def predict_vector(self, s: np.ndarray) -> Sentiment:
        """
        Majority class among the k most similar anchors.

        Vote ties go to the larger summed similarity, then the lower class.
        """
        if _is_zero(s):
            return self.fallback
        sims = np.array([cosine_sim(s, v) for v in self.vectors])
        # Stable sort keeps anchor order among equal similarities.
        top = np.argsort(-sims, kind="stable")[: self.k]
        votes: Dict[Sentiment, Tuple[int, float]] = {}
        for j in top:
            count, total = votes.get(self.labels[j], (0, 0.0))
            votes[self.labels[j]] = (count + 1, total + float(sims[j]))
        return max(votes, key=lambda c: (votes[c][0], votes[c][1], -int(c)))


@dataclass
class Metrics:
    """Accuracy, per-class and macro precision/recall/F, confusion counts."""

    accuracy: float
    precision: Dict[Sentiment, float]
    recall: Dict[Sentiment, float]
    f1: Dict[Sentiment, float]
    support: Dict[Sentiment, int]
    confusion: List[List[int]]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "accuracy": self.accuracy,
            "per_class": {
                c.label: {
                    "precision": self.precision[c],
                    "recall": self.recall[c],
                    "f1": self.f1[c],
                    "support": self.support[c],
                }
                for c in CLASSES
            },
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall, "f1": self.macro_f1},
            "confusion": self.confusion,
            "labels": [c.label for c in CLASSES],
            **self.extra,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "Metrics":
        per_class = data["per_class"]
        macro = data["macro"]
        return cls(
            accuracy=float(data["accuracy"]),
            precision={c: float(per_class[c.label]["precision"]) for c in CLASSES},
            recall={c: float(per_class[c.label]["recall"]) for c in CLASSES},
            f1={c: float(per_class[c.label]["f1"]) for c in CLASSES},
            support={c: int(per_class[c.label]["support"]) for c in CLASSES},
            confusion=[list(map(int, row)) for row in data["confusion"]],
            macro_precision=float(macro["precision"]),
            macro_recall=float(macro["recall"]),
            macro_f1=float(macro["f1"]),
        )


def compute_metrics(gold: Sequence[Sentiment], predicted: Sequence[Sentiment]) -> Metrics:
    """
    Metrics over three classes; F is 0 whenever P + R is 0.

    Confusion rows are gold classes, columns predictions, both in class order.
    """
    if len(gold) == 0:
        raise ClassifyError("cannot evaluate on an empty test set")
    if len(gold) != len(predicted):
        raise ClassifyError("gold and predicted labels differ in length")

    labels = [int(c) for c in CLASSES]
    y_true = [int(c) for c in gold]
    y_pred = [int(c) for c in predicted]
    cm = confusion_matrix(y_true, y_pred, labels=labels)
    p, r, f, support = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, average=None, zero_division=0
    )
    return Metrics(
        accuracy=float(np.trace(cm)) / float(cm.sum()),
        precision={c: float(p[i]) for i, c in enumerate(CLASSES)},
        recall={c: float(r[i]) for i, c in enumerate(CLASSES)},
        f1={c: float(f[i]) for i, c in enumerate(CLASSES)},
        support={c: int(support[i]) for i, c in enumerate(CLASSES)},
        confusion=cm.astype(int).tolist(),
        macro_precision=float(np.mean(p)),
        macro_recall=float(np.mean(r)),
        macro_f1=float(np.mean(f)),
    )


def evaluate_with(classify_vector: Callable[[np.ndarray], Sentiment], embed: Embedder, test: LabeledCorpus) -> Metrics:
    """Metrics of an arbitrary vector classifier on a labeled test corpus."""
    gold = [s.label for s in test]
    predicted = [classify_vector(embed(s)) for s in test]
    return compute_metrics(gold, predicted)


def evaluate(
    p: SiameseParams, centroids: Centroids, test: LabeledCorpus, vocab: TrigramVocab
) -> Metrics:
    """Nearest-centroid predictions against gold labels."""
    return evaluate_with(lambda v: predict_vector(centroids, v), embedder(p, vocab), test)


# Report tables -------------------------------------------------------------------------


def _row(name: str, m: Metrics, digits: int) -> List[str]:
    return [
        name,
        f"{100 * m.accuracy:.1f}%",
        f"{m.macro_precision:.{digits}f}",
        f"{m.macro_recall:.{digits}f}",
        f"{m.macro_f1:.{digits}f}",
    ]


def format_metrics_table(
    rows: Mapping[str, Metrics],
    baselines: Sequence[str] = (),
    digits: int = 3,
) -> str:
    """
    Aligned text table: Models, Accuracy, Precision, Recall, F-score.

    When baseline row names are given, an "Improvement" row reports the best
    non-baseline model minus the best baseline, metric by metric.
    """
    table = [["Models", "Accuracy", "Precision", "Recall", "F-score"]]
    for name, m in rows.items():
        table.append(_row(name, m, digits))

    models = [m for n, m in rows.items() if n not in baselines]
    bases = [m for n, m in rows.items() if n in baselines]
    if models and bases:
        def best(ms: Sequence[Metrics], attr: str) -> float:
            return max(getattr(m, attr) for m in ms)

        table.append(
            [
                "Improvement",
                f"{100 * (best(models, 'accuracy') - best(bases, 'accuracy')):.1f}%",
                f"{best(models, 'macro_precision') - best(bases, 'macro_precision'):.{digits}f}",
                f"{best(models, 'macro_recall') - best(bases, 'macro_recall'):.{digits}f}",
                f"{best(models, 'macro_f1') - best(bases, 'macro_f1'):.{digits}f}",
            ]
        )
    return align_columns(table)


def format_paired_table(
    rows: Mapping[str, Tuple[Metrics, Metrics]],
    left_title: str,
    right_title: str,
    digits: int = 3,
    compact: bool = False,
) -> str:
    """
    Two metric groups side by side per model.

    The full layout (with/without preprocessing) shows accuracy, precision,
    recall and F for each side; the compact layout (sentiment vs emoji
    alignment) shows accuracy and F1 only.
    """
    if compact:
        head = [["", left_title, "", right_title, ""], ["Dataset", "A(%)", "F1", "A(%)", "F1"]]
        body = [
            [name, f"{100 * a.accuracy:.1f}%", f"{a.macro_f1:.{digits}f}", f"{100 * b.accuracy:.1f}%", f"{b.macro_f1:.{digits}f}"]
            for name, (a, b) in rows.items()
        ]
    else:
        metrics = ["Accuracy", "Precision", "Recall", "F-score"]
        head = [
            ["", left_title, "", "", "", right_title, "", "", ""],
            ["Models"] + metrics + metrics,
        ]
        body = [_row(name, a, digits) + _row(name, b, digits)[1:] for name, (a, b) in rows.items()]
    return align_columns(head + body)
