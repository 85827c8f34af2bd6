"""Stage orchestration: preprocessing, SACMT training/evaluation and the ASV baseline."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .baseline import LogRegModel, asv_vector, predict_logreg, train_logreg
from .classify import (
    KnnIndex,
    Metrics,
    compute_centroids,
    compute_metrics,
    evaluate_with,
    predict_vector,
    resolve_fallback,
)
from .config import ClassifyConfig, ClusterConfig, RunConfig, SkipGramConfig
from .corpus import EmojiMap, LabeledCorpus, relabel_by_emoji
from .errors import CorpusError
from .siamese import SacmtModel, SiameseParams, make_pairs, train
from .skipgram import WordEmbeddings, train_skipgram
from .textprep import build_vocab, sentence_tokens
from .variants import ClusterMap, apply_clusters, cluster_variants, word_frequencies

logger = logging.getLogger(__name__)


@dataclass
class PreprocessResult:
    """Rewritten corpora and the cluster map that produced them."""

    corpora: List[LabeledCorpus]
    cluster_map: ClusterMap

    @property
    def corpus(self) -> LabeledCorpus:
        return self.corpora[0]


def distinct_tokens(corpora: Sequence[LabeledCorpus]) -> int:
    return len(word_frequencies(corpora))


def preprocess_pipeline(
    corpus: LabeledCorpus,
    embeddings: WordEmbeddings,
    tau: float,
    extra: Sequence[LabeledCorpus] = (),
    vocabulary: Sequence[LabeledCorpus] = (),
) -> PreprocessResult:
    """
    Cluster transliteration variants and rewrite every corpus with the map.

    Words are counted over ``corpus`` plus ``vocabulary`` (the clustering
    scope); the resulting map is applied to ``corpus`` and each of ``extra``.
    """
    freqs = word_frequencies([corpus, *vocabulary])
    cluster_map = cluster_variants(freqs, embeddings, tau)
    rewritten = [apply_clusters(c, cluster_map) for c in (corpus, *extra)]
    logger.info(
        "Preprocessing merged %d words; distinct tokens %d -> %d",
        len(cluster_map.merged()),
        distinct_tokens([corpus, *extra]),
        distinct_tokens(rewritten),
    )
    return PreprocessResult(rewritten, cluster_map)


def learn_clusters(
    corpus: LabeledCorpus,
    others: Sequence[LabeledCorpus],
    skipgram: SkipGramConfig,
    clusters: ClusterConfig,
) -> PreprocessResult:
    """
    Train skip-gram vectors on every corpus, then cluster and rewrite.

    With vocabulary "train" only ``corpus`` is clustered; "all" adds ``others``.
    """
    embeddings = train_skipgram([s for c in (corpus, *others) for s in c], skipgram)
    vocabulary = list(others) if clusters.vocabulary == "all" else []
    return preprocess_pipeline(corpus, embeddings, clusters.tau, extra=others, vocabulary=vocabulary)


@dataclass
class TrainOutcome:
    model: SacmtModel
    history: List[float]
    pairs: int
    dropped: Dict[str, int] = field(default_factory=dict)


def emoji_aligned(corpus: LabeledCorpus, emoji_map: EmojiMap, dropped: Dict[str, int]) -> LabeledCorpus:
    result = relabel_by_emoji(corpus, emoji_map)
    dropped[corpus.name or "corpus"] = result.dropped
    if len(result.corpus) == 0:
        raise CorpusError(f"no sentence of {corpus.name or 'the corpus'} survives emoji relabeling")
    return result.corpus


def train_sacmt(
    left: LabeledCorpus,
    partners: Sequence[LabeledCorpus],
    cfg: RunConfig,
    emoji_map: Optional[EmojiMap] = None,
) -> TrainOutcome:
    """
    Full training run: optional emoji relabeling, variant preprocessing,
    trigram vocabulary, pairing and siamese training.

    Left sentences are paired with partners drawn from the union of
    ``partners``; with no partners the left corpus pairs with itself.
    The config must already carry its seed.
    """
    dropped: Dict[str, int] = {}
    if cfg.mode == "emoji":
        if emoji_map is None:
            raise CorpusError("emoji mode needs an emoji map")
        left = emoji_aligned(left, emoji_map, dropped)
        partners = [emoji_aligned(c, emoji_map, dropped) for c in partners]

    cluster_map = ClusterMap()
    if not cfg.no_preprocess:
        pre = learn_clusters(left, partners, cfg.skipgram, cfg.clusters)
        left, partners, cluster_map = pre.corpora[0], pre.corpora[1:], pre.cluster_map

    if partners:
        right = LabeledCorpus([s for c in partners for s in c], name="+".join(c.name for c in partners))
    else:
        right = left
    vocab = build_vocab([s for c in (left, *partners) for s in c])

    tc = cfg.train
    pairs = make_pairs(left, right, vocab, tc.seed, tc.pairs_per_sentence)
    resample = None
    if tc.resample_pairs:
        def resample(epoch: int):
            return make_pairs(left, right, vocab, tc.seed + epoch, tc.pairs_per_sentence)

    params = SiameseParams.init(vocab.size, tc.d, tc.h, tc.e, tc.seed)
    logger.info(
        "Training on %d pairs (%d left sentences, %d partner sentences, %d trigrams)",
        len(pairs),
        len(left),
        len(right),
        vocab.size,
    )
    result = train(params, pairs, tc, resample=resample)
    model = SacmtModel(result.params, tc, vocab, cluster_map.merged())
    return TrainOutcome(model=model, history=result.history, pairs=len(pairs), dropped=dropped)


def rewrite_for_model(model: SacmtModel, corpus: LabeledCorpus) -> LabeledCorpus:
    """Apply the model's stored variant map (if any) to new data."""
    if not model.clusters:
        return corpus
    return apply_clusters(corpus, ClusterMap.from_mapping(model.clusters))


def evaluate_sacmt(
    model: SacmtModel, anchors: LabeledCorpus, test: LabeledCorpus, cfg: ClassifyConfig
) -> Metrics:
    """Classify the test corpus in the sentiment space learned by the model."""
    anchors = rewrite_for_model(model, anchors)
    test = rewrite_for_model(model, test)
    fallback = resolve_fallback(cfg.fallback, anchors)

    if cfg.rule == "knn":
        index = KnnIndex.build(model.embed, anchors, cfg.k, fallback)
        metrics = evaluate_with(index.predict_vector, model.embed, test)
    else:
        centroids = compute_centroids(model.embed, anchors, fallback)
        metrics = evaluate_with(lambda v: predict_vector(centroids, v), model.embed, test)
    metrics.extra["rule"] = cfg.rule
    return metrics


@dataclass
class BaselineOutcome:
    model: LogRegModel
    metrics: Metrics
    embeddings: WordEmbeddings


def run_asv_baseline(train_corpus: LabeledCorpus, test: LabeledCorpus, cfg: RunConfig) -> BaselineOutcome:
    """
    ASV baseline: skip-gram vectors, averaged per sentence, fed to logistic
    regression. Preprocessing follows cfg.no_preprocess like SACMT training.
    """
    if not cfg.no_preprocess:
        pre = learn_clusters(train_corpus, [], cfg.skipgram, cfg.clusters)
        train_corpus, test = pre.corpus, apply_clusters(test, pre.cluster_map)

    embeddings = train_skipgram(train_corpus, cfg.skipgram)
    xs = [asv_vector(s, embeddings) for s in train_corpus]
    model = train_logreg(xs, [s.label for s in train_corpus], cfg.baseline)

    uncovered = sum(1 for s in test if not any(w in embeddings for w in sentence_tokens(s.text)))
    if uncovered:
        logger.info("%d test sentences have no embedded word; they use the zero vector", uncovered)

    predicted = [predict_logreg(model, asv_vector(s, embeddings)) for s in test]
    metrics = compute_metrics([s.label for s in test], predicted)
    return BaselineOutcome(model=model, metrics=metrics, embeddings=embeddings)
