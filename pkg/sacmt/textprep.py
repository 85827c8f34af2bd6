"""Text normalization, tokenization and character-trigram encoding."""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Iterable, List, Tuple, Union

from .artifacts import read_json, require_object, write_json
from .errors import ArtifactError, TextPrepError

if TYPE_CHECKING:
    from .corpus import LabeledCorpus, Sentence

VOWELS = frozenset("aeiou")
PAD = "#"
UNK_ID = 0
VOCAB_VERSION = 1

URL_PATTERN = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
MENTION_PATTERN = re.compile(r"@\w+")
WHITESPACE_PATTERN = re.compile(r"\s+")


def normalize(text: str) -> str:
    """
    Normalize raw social media text.

    Lowercases, removes URLs and @-mentions, collapses whitespace runs and
    strips the ends.

    Raises:
        TextPrepError: If nothing is left

    Examples:
        >>> normalize("Heeey @bob http://x.y")
        'heeey'
        >>> normalize("India  Match")
        'india match'
    """
    text = text.lower()
    text = URL_PATTERN.sub(" ", text)
    text = MENTION_PATTERN.sub(" ", text)
    text = WHITESPACE_PATTERN.sub(" ", text).strip()
    if not text:
        raise TextPrepError("empty after normalization")
    return text


def tokenize(text: str) -> List[str]:
    """
    Split normalized text on whitespace.

    Punctuation stays attached to its word ("wow!!!" is one token), since
    repeated punctuation carries sentiment.
    """
    return text.split()


def sentence_tokens(text: str) -> List[str]:
    """Normalize then tokenize."""
    return tokenize(normalize(text))


def consonant_skeleton(token: str) -> str:
    """
    Strip vowels from a romanized token.

    Only ASCII letters are kept; 'y' counts as a consonant.

    Examples:
        >>> consonant_skeleton("khoobsurat")
        'khbsrt'
        >>> consonant_skeleton("kyunki")
        'kynk'
    """
    return "".join(
        ch for ch in token.lower() if ch.isascii() and ch.isalpha() and ch not in VOWELS
    )


def char_trigrams(token: str) -> List[str]:
    """
    Sliding width-3 windows over a token.

    Tokens shorter than 3 are right-padded with '#', so every token yields
    max(1, len(token) - 2) trigrams.

    Examples:
        >>> char_trigrams("heey")
        ['hee', 'eey']
        >>> char_trigrams("hi")
        ['hi#']
    """
    if len(token) < 3:
        token = token + PAD * (3 - len(token))
    return [token[i : i + 3] for i in range(len(token) - 2)]


@dataclass(frozen=True)
class TrigramSeq:
    """A sentence encoded as trigram ids (0 = UNK)."""

    ids: Tuple[int, ...]

    def __post_init__(self):
        if len(self.ids) < 1:
            raise TextPrepError("trigram sequence must not be empty")

    def __len__(self) -> int:
        return len(self.ids)

    def reversed(self) -> "TrigramSeq":
        return TrigramSeq(tuple(reversed(self.ids)))


class TrigramVocab:
    """Bijection between trigram strings and ids 1..n; id 0 is UNK."""

    def __init__(self, ids: Dict[str, int]):
        expected = set(range(1, len(ids) + 1))
        if set(ids.values()) != expected:
            raise TextPrepError("trigram ids must be exactly 1..n")
        self._ids = dict(ids)

    @property
    def size(self) -> int:
        """Number of known trigrams n (UNK excluded)."""
        return len(self._ids)

    def id_of(self, trigram: str) -> int:
        return self._ids.get(trigram, UNK_ID)

    def __contains__(self, trigram: str) -> bool:
        return trigram in self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TrigramVocab) and self._ids == other._ids

    def items(self) -> List[Tuple[str, int]]:
        """(trigram, id) pairs in id order."""
        return sorted(self._ids.items(), key=lambda item: item[1])

    def to_dict(self) -> Dict[str, object]:
        return {"version": VOCAB_VERSION, "trigrams": dict(self.items())}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "TrigramVocab":
        if data.get("version") != VOCAB_VERSION:
            raise TextPrepError(f"unsupported vocab version: {data.get('version')}")
        trigrams = data.get("trigrams")
        if not isinstance(trigrams, dict):
            raise TextPrepError("vocab file has no 'trigrams' object")
        return cls({str(k): int(v) for k, v in trigrams.items()})

    def save(self, path: Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: Path) -> "TrigramVocab":
        try:
            return cls.from_dict(require_object(read_json(path), path))
        except ArtifactError as e:
            raise TextPrepError(str(e)) from e


def build_vocab(corpus: Union["LabeledCorpus", Iterable["Sentence"]]) -> TrigramVocab:
    """
    Assign trigram ids in first-occurrence order over a corpus.

    Raises:
        TextPrepError: If the corpus is empty
    """
    ids: Dict[str, int] = {}
    seen_any = False
    for sentence in corpus:
        seen_any = True
        for token in sentence_tokens(sentence.text):
            for trigram in char_trigrams(token):
                if trigram not in ids:
                    ids[trigram] = len(ids) + 1
    if not seen_any:
        raise TextPrepError("cannot build a vocab from an empty corpus")
    return TrigramVocab(ids)


def encode_text(text: str, vocab: TrigramVocab) -> TrigramSeq:
    """
    Encode text as the concatenation of its tokens' trigram ids.

    Raises:
        TextPrepError: If the text has no tokens
    """
    tokens = sentence_tokens(text)
    if not tokens:
        raise TextPrepError("sentence has no tokens")
    return TrigramSeq(tuple(vocab.id_of(t) for token in tokens for t in char_trigrams(token)))


def encode(sentence: "Sentence", vocab: TrigramVocab) -> TrigramSeq:
    """Encode a sentence; unseen trigrams map to UNK (0)."""
    try:
        return encode_text(sentence.text, vocab)
    except TextPrepError as e:
        raise TextPrepError(f"sentence {sentence.id}: {e}") from e
