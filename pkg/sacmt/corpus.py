"""Dataset loading, labeling, splitting and statistics."""

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .artifacts import atomic_write_text, read_json
from .errors import CorpusError, TextPrepError
from .tables import align_columns
from .textprep import char_trigrams, normalize, tokenize

logger = logging.getLogger(__name__)

VARIATION_SELECTOR = "\ufe0f"


class Sentiment(IntEnum):
    """Sentiment classes, ordered Negative < Neutral < Positive for tie-breaking."""

    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, token: str) -> "Sentiment":
        """
        Parse a label case-insensitively.

        Raises:
            CorpusError: If the token is not a known label
        """
        try:
            return cls[token.strip().upper()]
        except KeyError:
            raise CorpusError(f"unknown label: {token.strip()}") from None


@dataclass(frozen=True)
class Sentence:
    """One labeled sentence."""

    id: str
    text: str
    label: Optional[Sentiment] = None
    source: str = ""

    @property
    def key(self) -> Tuple[str, str]:
        """Identity across corpora: (source, id)."""
        return (self.source, self.id)


@dataclass
class LabeledCorpus:
    """Ordered sentences, every one labeled, ids unique."""

    sentences: List[Sentence] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        seen = set()
        for sentence in self.sentences:
            if sentence.label is None:
                raise CorpusError(f"sentence {sentence.id} has no label")
            if sentence.key in seen:
                raise CorpusError(f"duplicate sentence id: {sentence.id}")
            seen.add(sentence.key)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, index: int) -> Sentence:
        return self.sentences[index]

    def class_counts(self) -> Dict[Sentiment, int]:
        counts = Counter(s.label for s in self.sentences)
        return {c: counts.get(c, 0) for c in Sentiment}

    def by_class(self) -> Dict[Sentiment, List[Sentence]]:
        groups: Dict[Sentiment, List[Sentence]] = {c: [] for c in Sentiment}
        for sentence in self.sentences:
            groups[sentence.label].append(sentence)
        return groups

    def majority_class(self) -> Sentiment:
        """Most frequent class; ties go to the lower class."""
        counts = self.class_counts()
        return max(Sentiment, key=lambda c: (counts[c], -int(c)))

    def with_sentences(self, sentences: Sequence[Sentence]) -> "LabeledCorpus":
        return LabeledCorpus(list(sentences), name=self.name)

    def concat(self, other: "LabeledCorpus") -> "LabeledCorpus":
        """Union of two corpora; sentence identity is (source, id)."""
        return LabeledCorpus(self.sentences + other.sentences, name=f"{self.name}+{other.name}")


def load_dataset(path: Path, source: Optional[str] = None) -> LabeledCorpus:
    """
    Load a header-less UTF-8 TSV dataset: ``id<TAB>label<TAB>text``.

    Blank lines are skipped; the text field may itself contain tabs.

    Args:
        path: Dataset file
        source: Dataset tag stored on every sentence (default: file stem)

    Returns:
        Corpus in file order

    Raises:
        FileNotFoundError: If the file doesn't exist
        CorpusError: On a malformed line or unknown label (with line number)
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset not found: {path}")

    source = path.stem if source is None else source
    sentences: List[Sentence] = []
    seen_ids = set()

    with open(path, "r", encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue

            fields = line.split("\t", 2)
            if len(fields) < 3:
                raise CorpusError("expected id<TAB>label<TAB>text", line_number)

            sentence_id, label_token, text = fields
            sentence_id = sentence_id.strip()
            if not sentence_id:
                raise CorpusError("empty sentence id", line_number)
            if sentence_id in seen_ids:
                raise CorpusError(f"duplicate sentence id: {sentence_id}", line_number)

            try:
                label = Sentiment.parse(label_token)
            except CorpusError as e:
                raise CorpusError(str(e), line_number) from None

            try:
                normalize(text)
            except TextPrepError as e:
                raise CorpusError(str(e), line_number) from e

            seen_ids.add(sentence_id)
            sentences.append(Sentence(sentence_id, text, label, source))

    logger.debug("Loaded %d sentences from %s", len(sentences), path)
    return LabeledCorpus(sentences, name=source)


def dumps_dataset(corpus: LabeledCorpus) -> str:
    """Render a corpus in the canonical TSV form."""
    lines = []
    for sentence in corpus:
        if "\n" in sentence.text or "\r" in sentence.text:
            raise CorpusError(f"sentence {sentence.id} contains a line break")
        lines.append(f"{sentence.id}\t{sentence.label.label}\t{sentence.text}\n")
    return "".join(lines)


def save_dataset(corpus: LabeledCorpus, path: Path) -> None:
    """Atomically write a corpus as canonical TSV (lowercase labels)."""
    atomic_write_text(path, dumps_dataset(corpus))


# Emoji alignment ---------------------------------------------------------------------


class EmojiMap:
    """Emoji string -> sentiment class."""

    def __init__(self, mapping: Mapping[str, Sentiment]):
        if not mapping:
            raise CorpusError("emoji map must not be empty")
        self._classes: Dict[str, Sentiment] = {}
        for emoji, sentiment in mapping.items():
            key = emoji.replace(VARIATION_SELECTOR, "").strip()
            if not key:
                raise CorpusError(f"invalid emoji key: {emoji!r}")
            previous = self._classes.get(key)
            if previous is not None and previous != sentiment:
                raise CorpusError(f"emoji {emoji} maps to two classes")
            self._classes[key] = sentiment
        # Longest keys first so multi-codepoint emojis win over their prefixes.
        alternatives = sorted(self._classes, key=lambda k: (-len(k), k))
        self._pattern = re.compile("|".join(re.escape(k) for k in alternatives))

    def __len__(self) -> int:
        return len(self._classes)

    def items(self) -> List[Tuple[str, Sentiment]]:
        return sorted(self._classes.items(), key=lambda item: (int(item[1]), item[0]))

    def find(self, text: str) -> List[Sentiment]:
        """Classes of every mapped emoji occurrence in text."""
        stripped = text.replace(VARIATION_SELECTOR, "")
        return [self._classes[m.group(0)] for m in self._pattern.finditer(stripped)]

    def strip(self, text: str) -> str:
        """Remove mapped emojis and collapse the leftover whitespace."""
        stripped = self._pattern.sub(" ", text.replace(VARIATION_SELECTOR, ""))
        return " ".join(stripped.split())

    @classmethod
    def load(cls, path: Path) -> "EmojiMap":
        """
        Load a JSON object {emoji: label}.

        Raises:
            CorpusError: On a non-object file or unknown label
        """
        data = read_json(path)
        if not isinstance(data, dict):
            raise CorpusError(f"emoji map must be a JSON object: {path}")
        return cls({str(k): Sentiment.parse(str(v)) for k, v in data.items()})

    def to_dict(self) -> Dict[str, str]:
        return {emoji: sentiment.label for emoji, sentiment in self.items()}


@dataclass
class RelabelResult:
    """Outcome of emoji relabeling with drop counts."""

    corpus: LabeledCorpus
    dropped_conflict: int = 0
    dropped_unmapped: int = 0
    dropped_empty: int = 0

    @property
    def dropped(self) -> int:
        return self.dropped_conflict + self.dropped_unmapped + self.dropped_empty


def relabel_by_emoji(corpus: LabeledCorpus, emoji_map: EmojiMap) -> RelabelResult:
    """
    Replace sentiment tags with emoji-derived classes.

    Sentences whose emojis disagree, or that carry no mapped emoji, are
    dropped. Mapped emojis are removed from retained text; a sentence left
    with no text is dropped as well.
    """
    kept: List[Sentence] = []
    result = RelabelResult(corpus=LabeledCorpus(name=corpus.name))

    for sentence in corpus:
        classes = set(emoji_map.find(sentence.text))
        if not classes:
            result.dropped_unmapped += 1
            continue
        if len(classes) > 1:
            result.dropped_conflict += 1
            continue

        text = emoji_map.strip(sentence.text)
        try:
            normalize(text)
        except TextPrepError:
            result.dropped_empty += 1
            continue
        kept.append(replace(sentence, text=text, label=classes.pop()))

    result.corpus = corpus.with_sentences(kept)
    logger.info(
        "Emoji relabeling kept %d of %d sentences (%d conflicting, %d without emoji, %d empty)",
        len(kept),
        len(corpus),
        result.dropped_conflict,
        result.dropped_unmapped,
        result.dropped_empty,
    )
    return result


# Splitting -----------------------------------------------------------------------------


def _largest_remainder(total: int, ratios: Sequence[float]) -> List[int]:
    raw = [total * r for r in ratios]
    sizes = [math.floor(x) for x in raw]
    order = sorted(range(len(ratios)), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in order[: total - sum(sizes)]:
        sizes[i] += 1
    return sizes


def split(
    corpus: LabeledCorpus, ratios: Tuple[float, float, float], seed: int
) -> Tuple[LabeledCorpus, LabeledCorpus, LabeledCorpus]:
    """
    Stratified, seeded train/dev/test split.

    Each class is shuffled independently, then the classes are interleaved
    by relative rank, so every contiguous slice keeps the class proportions.
    Slice sizes follow the ratios by largest remainder; each output keeps the
    corpus order.

    Raises:
        CorpusError: On invalid ratios or a class too small to split
    """
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise CorpusError("split ratios must be three positive fractions")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise CorpusError("split ratios must sum to 1")

    rng = np.random.default_rng(seed)
    ranked: List[Tuple[float, int, int]] = []
    for sentiment, members in corpus.by_class().items():
        if not members:
            continue
        if len(members) < len(ratios):
            raise CorpusError(
                f"class {sentiment.label} has {len(members)} sentences, fewer than {len(ratios)} splits"
            )
        positions = [i for i, s in enumerate(corpus.sentences) if s.label == sentiment]
        shuffled = rng.permutation(len(positions))
        for rank, j in enumerate(shuffled):
            ranked.append(((rank + 0.5) / len(positions), int(sentiment), positions[int(j)]))

    ranked.sort()
    sizes = _largest_remainder(len(ranked), ratios)

    parts = []
    start = 0
    for size in sizes:
        indices = sorted(position for _, _, position in ranked[start : start + size])
        parts.append(corpus.with_sentences([corpus.sentences[i] for i in indices]))
        start += size
    return parts[0], parts[1], parts[2]


# Statistics ----------------------------------------------------------------------------


@dataclass
class CorpusStats:
    """Size and class-balance summary of a corpus."""

    name: str
    sentences: int
    words: int
    char_trigrams: int
    percentages: Dict[Sentiment, int]

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "sentences": self.sentences,
            "words": self.words,
            "char_trigrams": self.char_trigrams,
            "percentages": {c.label: p for c, p in self.percentages.items()},
        }


def percent(count: int, total: int) -> int:
    """Round half up to an integer percentage."""
    return math.floor(100.0 * count / total + 0.5)


def corpus_stats(corpus: LabeledCorpus) -> CorpusStats:
    """
    Distinct word and trigram counts plus class percentages.

    "Words" counts distinct normalized tokens.

    Raises:
        CorpusError: If the corpus is empty
    """
    if len(corpus) == 0:
        raise CorpusError("cannot compute statistics of an empty corpus")

    words = set()
    trigrams = set()
    for sentence in corpus:
        for token in tokenize(normalize(sentence.text)):
            words.add(token)
            trigrams.update(char_trigrams(token))

    counts = corpus.class_counts()
    return CorpusStats(
        name=corpus.name,
        sentences=len(corpus),
        words=len(words),
        char_trigrams=len(trigrams),
        percentages={c: percent(counts[c], len(corpus)) for c in (Sentiment.POSITIVE, Sentiment.NEUTRAL, Sentiment.NEGATIVE)},
    )


def class_distribution(corpus: LabeledCorpus) -> Dict[Sentiment, int]:
    """Integer class percentages."""
    if len(corpus) == 0:
        raise CorpusError("cannot compute a distribution of an empty corpus")
    counts = corpus.class_counts()
    return {c: percent(counts[c], len(corpus)) for c in (Sentiment.POSITIVE, Sentiment.NEUTRAL, Sentiment.NEGATIVE)}


def format_stats_table(stats: Sequence[CorpusStats]) -> str:
    """Aligned text table: Datasets, Words, Char-trigrams, class shares."""
    header = ["Datasets", "Words", "Char-trigrams", "Positive", "Neutral", "Negative"]
    rows = [
        [
            s.name,
            str(s.words),
            str(s.char_trigrams),
            f"{s.percentages[Sentiment.POSITIVE]}%",
            f"{s.percentages[Sentiment.NEUTRAL]}%",
            f"{s.percentages[Sentiment.NEGATIVE]}%",
        ]
        for s in stats
    ]
    return align_columns([header] + rows)


def format_distribution_table(
    emoji_map: EmojiMap, distributions: Mapping[str, Mapping[Sentiment, int]]
) -> str:
    """Aligned text table of emojis per class and per-dataset shares."""
    names = list(distributions)
    header = ["Emojis", "Class"] + names
    by_class: Dict[Sentiment, List[str]] = {c: [] for c in Sentiment}
    for emoji, sentiment in emoji_map.items():
        by_class[sentiment].append(emoji)
    rows = []
    for sentiment in (Sentiment.POSITIVE, Sentiment.NEUTRAL, Sentiment.NEGATIVE):
        rows.append(
            ["".join(by_class[sentiment]), sentiment.name.capitalize()]
            + [f"{distributions[n][sentiment]}%" for n in names]
        )
    return align_columns([header] + rows)

