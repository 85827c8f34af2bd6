"""Tests for variants module."""

import numpy as np
import pytest

from sacmt.config import SkipGramConfig
from sacmt.corpus import LabeledCorpus, Sentence, Sentiment
from sacmt.skipgram import WordEmbeddings, cosine, train_skipgram
from sacmt.synthetic import VARIANT_FAMILIES, VARIANT_SKELETONS, variant_corpus
from sacmt.textprep import consonant_skeleton
from sacmt.variants import (
    ClusterMap,
    apply_clusters,
    cluster_variants,
    format_cluster_report,
    save_cluster_report,
    variation_similarity,
    word_frequencies,
)


def _emb(**vectors):
    return WordEmbeddings(2, {w: np.array(v, dtype=float) for w, v in vectors.items()})


EMB = _emb(
    khoobsurat=[1.0, 0.1],
    khubsurat=[0.9, 0.2],
    khubsoorat=[1.0, 0.0],
    kyunki=[0.0, 1.0],
    ladki=[0.3, 0.3],
)


class TestVariationSimilarity:
    """Tests for variation_similarity function."""

    def test_same_skeleton(self):
        """Test that shared skeletons give the cosine of the vectors."""
        expected = cosine(EMB.vector("khoobsurat"), EMB.vector("khubsurat"))
        assert variation_similarity("khoobsurat", "khubsurat", EMB) == expected

    def test_different_skeleton(self):
        """Test that different skeletons give 0."""
        assert variation_similarity("khoobsurat", "kyunki", EMB) == 0.0

    def test_self_similarity(self):
        """Test that an embedded word is fully similar to itself."""
        assert variation_similarity("ladki", "ladki", EMB) == pytest.approx(1.0)

    def test_missing_vector(self):
        """Test that a word without a vector has similarity 0."""
        assert variation_similarity("khoobsurat", "khubsuurat", EMB) == 0.0

    def test_symmetric(self):
        """Test symmetry over every word pair."""
        words = list(EMB.vectors)
        for a in words:
            for b in words:
                assert variation_similarity(a, b, EMB) == variation_similarity(b, a, EMB)


class TestClusterVariants:
    """Tests for cluster_variants function."""

    def test_cluster_to_most_frequent(self):
        """Test that a pairwise-similar family maps to its most frequent member."""
        freqs = {"khoobsurat": 5, "khubsurat": 2, "khubsoorat": 1}

        result = cluster_variants(freqs, EMB, tau=0.9)

        assert {w: result.rewrite(w) for w in freqs} == dict.fromkeys(freqs, "khoobsurat")
        assert len(result.clusters) == 1
        assert result.clusters[0].skeleton == "khbsrt"
        assert result.clusters[0].members == [("khoobsurat", 5), ("khubsurat", 2), ("khubsoorat", 1)]

    def test_distinct_skeletons(self):
        """Test that words with different skeletons stay themselves."""
        freqs = {"khoobsurat": 3, "kyunki": 3, "ladki": 1}
        result = cluster_variants(freqs, EMB, tau=0.1)

        assert result.merged() == {}

    def test_below_threshold(self):
        """Test that a same-skeleton pair below tau is not merged."""
        emb = _emb(apka=[1.0, 0.0], aapka=[0.0, 1.0])
        result = cluster_variants({"apka": 4, "aapka": 2}, emb, tau=0.5)

        assert result.rewrite("apka") == "apka"
        assert result.rewrite("aapka") == "aapka"

    def test_frequency_tie_lexicographic(self):
        """Test that equal frequencies pick the lexicographically first word."""
        emb = _emb(apka=[1.0, 0.0], aapka=[1.0, 0.0])
        result = cluster_variants({"apka": 2, "aapka": 2}, emb, tau=0.5)

        assert result.rewrite("apka") == "aapka"

    def test_chain_forms_one_component(self):
        """Test that clusters are connected components, not cliques."""
        emb = _emb(apka=[1.0, 0.0], apkaa=[1.0, 1.0], aapka=[0.0, 1.0])
        result = cluster_variants({"apka": 1, "apkaa": 5, "aapka": 1}, emb, tau=0.7)

        assert {result.rewrite(w) for w in ("apka", "apkaa", "aapka")} == {"apkaa"}

    def test_unreachable_threshold(self):
        """Test that tau above any similarity leaves every word alone."""
        freqs = {"khoobsurat": 5, "khubsurat": 2, "khubsoorat": 1}
        result = cluster_variants(freqs, EMB, tau=1.0 + 1e-9)

        assert result.merged() == {}
        assert result.clusters == []

    def test_empty_skeleton_never_clusters(self):
        """Test that all-vowel words are kept as they are."""
        emb = _emb(aa=[1.0, 0.0], aaa=[1.0, 0.0])
        assert cluster_variants({"aa": 3, "aaa": 1}, emb, tau=0.5).merged() == {}

    def test_word_without_vector(self):
        """Test that words lacking embeddings never join a cluster."""
        result = cluster_variants({"khoobsurat": 5, "khubsuurat": 9}, EMB, tau=0.1)
        assert result.merged() == {}

    def test_invalid_tau(self):
        """Test that tau must be positive."""
        with pytest.raises(ValueError):
            cluster_variants({"a": 1}, EMB, tau=0.0)

    def test_rewriting_idempotent(self):
        """Test canonical(canonical(w)) == canonical(w)."""
        freqs = {"khoobsurat": 5, "khubsurat": 2, "khubsoorat": 1, "kyunki": 1}
        result = cluster_variants(freqs, EMB, tau=0.9)
        for word in freqs:
            canonical = result.rewrite(word)
            assert result.rewrite(canonical) == canonical
            assert consonant_skeleton(canonical) == consonant_skeleton(word)


class TestApplyClusters:
    """Tests for apply_clusters function."""

    def setup_method(self):
        self.map = ClusterMap.from_mapping({"khubsurat": "khoobsurat", "khoobsurat": "khoobsurat"})
        self.corpus = LabeledCorpus(
            [Sentence("7", "khubsurat ladki", Sentiment.POSITIVE, "hecm")], name="hecm"
        )

    def test_substitution(self):
        """Test direct token substitution."""
        result = apply_clusters(self.corpus, self.map)

        assert result[0] == Sentence("7", "khoobsurat ladki", Sentiment.POSITIVE, "hecm")
        assert result.name == "hecm"

    def test_idempotent(self):
        """Test applying twice equals applying once."""
        once = apply_clusters(self.corpus, self.map)
        assert apply_clusters(once, self.map).sentences == once.sentences

    def test_unknown_token_unchanged(self):
        """Test tokens absent from the map."""
        assert apply_clusters(self.corpus, ClusterMap())[0].text == "khubsurat ladki"


class TestClusterFiles:
    """Tests for the map file and the cluster report."""

    def test_map_roundtrip(self, tmp_path):
        """Test saving and loading a cluster map."""
        result = cluster_variants({"khoobsurat": 5, "khubsurat": 2}, EMB, tau=0.9)
        path = tmp_path / "clusters.json"
        result.save(path)

        assert ClusterMap.load(path).canonical == result.canonical

    def test_report(self, tmp_path):
        """Test the report lists skeleton, canonical word and members."""
        result = cluster_variants({"khoobsurat": 5, "khubsurat": 2}, EMB, tau=0.9)

        lines = format_cluster_report(result).splitlines()
        assert lines[0].split() == ["Consonants", "Canonical", "Variations"]
        assert lines[1].split() == ["khbsrt", "khoobsurat", "khoobsurat:5", "khubsurat:2"]

        path = tmp_path / "report.txt"
        save_cluster_report(result, path)
        assert path.read_text(encoding="utf-8").splitlines() == lines


def _brute_force(freqs, emb, tau):
    """Connected components over all word pairs, without skeleton grouping."""
    words = sorted(freqs)
    component = {w: {w} for w in words}
    for i, a in enumerate(words):
        for b in words[i + 1 :]:
            if consonant_skeleton(a) and variation_similarity(a, b, emb) >= tau and component[a] is not component[b]:
                merged = component[a] | component[b]
                for w in merged:
                    component[w] = merged
    return {w: min(component[w], key=lambda x: (-freqs[x], x)) for w in words}


@pytest.mark.slow
class TestVariantCorpus:
    """Clustering trained skip-gram vectors of the synthetic variant families."""

    @classmethod
    def setup_class(cls):
        cls.corpus = variant_corpus(repeats=25, seed=3)
        cls.freqs = word_frequencies([cls.corpus])
        cls.emb = train_skipgram(cls.corpus, SkipGramConfig(dim=32, window=2, epochs=15, seed=3))

    def test_skeletons_of_families(self):
        """Test every family shares its expected skeleton."""
        for family, skeleton in zip(VARIANT_FAMILIES, VARIANT_SKELETONS):
            assert {consonant_skeleton(w) for w in family} == {skeleton}

    def test_frequencies_decrease_within_family(self):
        """Test the first family member is the most frequent."""
        for family in VARIANT_FAMILIES:
            counts = [self.freqs[w] for w in family]
            assert counts == sorted(counts, reverse=True)
            assert len(set(counts)) == len(counts)

    def test_agrees_with_brute_force(self):
        """Test skeleton-grouped clustering equals brute-force components."""
        result = cluster_variants(self.freqs, self.emb, tau=0.3)

        assert {w: result.rewrite(w) for w in self.freqs} == _brute_force(self.freqs, self.emb, 0.3)

    def test_clusters_stay_in_family(self):
        """Test every cluster member shares its canonical word's skeleton."""
        result = cluster_variants(self.freqs, self.emb, tau=0.3)
        for cluster in result.clusters:
            assert all(consonant_skeleton(w) == cluster.skeleton for w, _ in cluster.members)
            assert cluster.canonical == cluster.members[0][0]

    def test_families_merge_to_most_frequent(self):
        """Test that each family collapses onto its most frequent spelling."""
        result = cluster_variants(self.freqs, self.emb, tau=0.3)
        for family in VARIANT_FAMILIES:
            assert {result.rewrite(w) for w in family} == {family[0]}
