"""Clustering of transliteration variants into canonical spellings."""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Tuple

from .artifacts import atomic_write_text, read_json, require_object, write_json
from .corpus import LabeledCorpus
from .skipgram import WordEmbeddings, cosine
from .tables import align_columns
from .textprep import consonant_skeleton, sentence_tokens

logger = logging.getLogger(__name__)


@dataclass
class Cluster:
    """Variants sharing one skeleton, rewritten to their most frequent member."""

    skeleton: str
    canonical: str
    members: List[Tuple[str, int]]


@dataclass
class ClusterMap:
    """word -> canonical word, plus the multi-member clusters for reporting."""

    canonical: Dict[str, str] = field(default_factory=dict)
    clusters: List[Cluster] = field(default_factory=list)

    def rewrite(self, word: str) -> str:
        return self.canonical.get(word, word)

    def merged(self) -> Dict[str, str]:
        """Only the entries that change a word."""
        return {w: c for w, c in self.canonical.items() if w != c}

    def __len__(self) -> int:
        return len(self.canonical)

    def save(self, path: Path) -> None:
        write_json(path, dict(sorted(self.canonical.items())))

    @classmethod
    def load(cls, path: Path) -> "ClusterMap":
        data = require_object(read_json(path), path)
        return cls({str(w): str(c) for w, c in data.items()})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str]) -> "ClusterMap":
        return cls(dict(mapping))


def variation_similarity(v1: str, v2: str, emb: WordEmbeddings) -> float:
    """
    Cosine of the two skip-gram vectors when the words share a consonant
    skeleton; 0 when skeletons differ or a vector is missing.
    """
    if consonant_skeleton(v1) != consonant_skeleton(v2):
        return 0.0
    a, b = emb.vector(v1), emb.vector(v2)
    if a is None or b is None:
        logger.debug("No vector for %r or %r; similarity 0", v1, v2)
        return 0.0
    return cosine(a, b)


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Lexicographically smaller root keeps the result order-independent.
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _canonical_member(members: Iterable[str], freqs: Mapping[str, int]) -> str:
    return min(members, key=lambda w: (-freqs[w], w))


def cluster_variants(freqs: Mapping[str, int], emb: WordEmbeddings, tau: float) -> ClusterMap:
    """
    Group words into variant clusters.

    Within each consonant-skeleton group, words whose variation similarity
    reaches tau are joined; connected components are clusters, each
    rewritten to its most frequent member (ties: lexicographically first).
    Words with an empty skeleton are never clustered.

    Args:
        freqs: word -> frequency (>= 1)
        emb: Skip-gram vectors
        tau: Edge threshold (> 0)
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")

    groups: Dict[str, List[str]] = defaultdict(list)
    for word in sorted(freqs):
        if freqs[word] < 1:
            raise ValueError(f"frequency of {word!r} must be >= 1")
        groups[consonant_skeleton(word)].append(word)

    result = ClusterMap()
    for skeleton in sorted(groups):
        words = groups[skeleton]
        if not skeleton or len(words) == 1:
            for word in words:
                result.canonical[word] = word
            continue

        uf = _UnionFind(words)
        for i, a in enumerate(words):
            for b in words[i + 1 :]:
                if variation_similarity(a, b, emb) >= tau:
                    uf.union(a, b)

        components: Dict[str, List[str]] = defaultdict(list)
        for word in words:
            components[uf.find(word)].append(word)

        for members in components.values():
            canonical = _canonical_member(members, freqs)
            for word in members:
                result.canonical[word] = canonical
            if len(members) > 1:
                ranked = sorted(members, key=lambda w: (-freqs[w], w))
                result.clusters.append(Cluster(skeleton, canonical, [(w, freqs[w]) for w in ranked]))

    result.clusters.sort(key=lambda c: (c.skeleton, c.canonical))
    logger.info(
        "Clustered %d words into %d variant clusters (tau=%.3f)",
        len(freqs),
        len(result.clusters),
        tau,
    )
    return result


def word_frequencies(corpora: Iterable[LabeledCorpus]) -> Counter:
    """Normalized token counts over one or more corpora."""
    counts: Counter = Counter()
    for corpus in corpora:
        for sentence in corpus:
            counts.update(sentence_tokens(sentence.text))
    return counts


def apply_clusters(corpus: LabeledCorpus, cluster_map: ClusterMap) -> LabeledCorpus:
    """
    Rewrite every token to its canonical form.

    Text is stored in normalized form; ids, labels and sources are kept.
    """
    rewritten = [
        replace(s, text=" ".join(cluster_map.rewrite(t) for t in sentence_tokens(s.text)))
        for s in corpus
    ]
    return corpus.with_sentences(rewritten)


def format_cluster_report(cluster_map: ClusterMap) -> str:
    """One line per cluster: skeleton, canonical word, members with frequencies."""
    rows = [["Consonants", "Canonical", "Variations"]]
    for cluster in cluster_map.clusters:
        rows.append(
            [cluster.skeleton, cluster.canonical, " ".join(f"{w}:{f}" for w, f in cluster.members)]
        )
    return align_columns(rows)


def save_cluster_report(cluster_map: ClusterMap, path: Path) -> None:
    atomic_write_text(path, format_cluster_report(cluster_map) + "\n")
