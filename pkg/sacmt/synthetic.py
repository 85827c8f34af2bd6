"""Deterministic synthetic corpora for smoke runs and protocol checks."""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from .corpus import EmojiMap, LabeledCorpus, Sentence, Sentiment

# Two disjoint "languages" per class. No token is shared between any two
# inventories.
MIXED_WORDS: Dict[Sentiment, Sequence[str]] = {
    Sentiment.POSITIVE: ("khush", "accha", "pyaar", "mast", "badhiya", "shandaar"),
    Sentiment.NEUTRAL: ("kal", "ghar", "khana", "raasta", "kitaab", "samay"),
    Sentiment.NEGATIVE: ("bura", "dukhi", "gussa", "bekaar", "nafrat", "rona"),
}
ENGLISH_WORDS: Dict[Sentiment, Sequence[str]] = {
    Sentiment.POSITIVE: ("happy", "great", "love", "awesome", "joy", "superb"),
    Sentiment.NEUTRAL: ("table", "monday", "report", "station", "paper", "window"),
    Sentiment.NEGATIVE: ("sad", "angry", "awful", "hate", "terrible", "worst"),
}

# Transliteration families: the first member is the most frequent.
VARIANT_FAMILIES: Tuple[Tuple[str, ...], ...] = (
    ("khoobsurat", "khubsurat", "khubsoorat", "khbsurt"),
    ("kyunki", "kiyunki", "kiyunkee", "kyunkee"),
    ("meherbani", "meharbaani", "meharbani", "meherbanee"),
    ("aapka", "apkaa", "apka"),
)
VARIANT_SKELETONS = ("khbsrt", "kynk", "mhrbn", "pk")

# Context and sentiment words; every one has its own consonant skeleton.
FAMILY_CONTEXTS: Tuple[Tuple[str, ...], ...] = (
    ("ladki", "ghar", "dost"),
    ("mera", "tum", "bolo"),
    ("dekho", "sach", "yaar"),
    ("din", "raat", "sab"),
)
SENTIMENT_CUES: Dict[Sentiment, Sequence[str]] = {
    Sentiment.POSITIVE: ("accha", "pyaar"),
    Sentiment.NEUTRAL: ("theek", "kal"),
    Sentiment.NEGATIVE: ("bura", "gussa"),
}

EMOJIS: Dict[Sentiment, Sequence[str]] = {
    Sentiment.POSITIVE: ("\u2764\ufe0f", "😄", "😁", "😂"),
    Sentiment.NEUTRAL: ("😐", "😏", "😌", "😇"),
    Sentiment.NEGATIVE: ("😞", "😓", "😔", "😡"),
}


def _pick(rng: np.random.Generator, words: Sequence[str], n: int) -> List[str]:
    return [words[int(i)] for i in rng.integers(len(words), size=n)]


def separable_corpora(
    n_per_class: int, seed: int, length: int = 3
) -> Tuple[LabeledCorpus, LabeledCorpus]:
    """
    A code-mixed and an English corpus with n_per_class sentences per class.

    Each class draws its tokens from its own inventory in each language, so
    the classes are separable and the two languages share no token.
    """
    rng = np.random.default_rng(seed)
    corpora = []
    for name, inventory in (("mixed", MIXED_WORDS), ("english", ENGLISH_WORDS)):
        sentences = []
        for i in range(n_per_class):
            for sentiment in (Sentiment.NEGATIVE, Sentiment.NEUTRAL, Sentiment.POSITIVE):
                text = " ".join(_pick(rng, inventory[sentiment], length))
                sentences.append(Sentence(f"{name[0]}{len(sentences) + 1}", text, sentiment, name))
        corpora.append(LabeledCorpus(sentences, name=name))
    return corpora[0], corpora[1]


def variant_corpus(repeats: int, seed: int, name: str = "variants") -> LabeledCorpus:
    """
    Sentences carrying the transliteration families in shared contexts.

    Member j of a family of size n occurs repeats * (n - j) times, so member
    frequencies strictly decrease. Each sentence is "<context> <variant>
    <context> <cue>" where the cue word decides the sentiment label.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rng = np.random.default_rng(seed)
    sentences: List[Sentence] = []
    for family, contexts in zip(VARIANT_FAMILIES, FAMILY_CONTEXTS):
        for j, variant in enumerate(family):
            for _ in range(repeats * (len(family) - j)):
                sentiment = Sentiment(int(rng.integers(3)))
                left, right = _pick(rng, contexts, 2)
                cue = _pick(rng, SENTIMENT_CUES[sentiment], 1)[0]
                sentences.append(
                    Sentence(f"v{len(sentences) + 1}", f"{left} {variant} {right} {cue}", sentiment, name)
                )
    order = rng.permutation(len(sentences))
    return LabeledCorpus([sentences[int(i)] for i in order], name=name)


def emoji_map() -> EmojiMap:
    """The twelve emojis of the positive/neutral/negative grouping."""
    return EmojiMap({emoji: sentiment for sentiment, emojis in EMOJIS.items() for emoji in emojis})


def emoji_corpus(n: int, seed: int, name: str = "emoji") -> Tuple[LabeledCorpus, EmojiMap]:
    """
    n English sentences tagged with emojis.

    Every 10th sentence carries two emojis from different classes and every
    10th (offset by 5) carries none; the rest carry one emoji of their
    sentiment tag's class.
    """
    rng = np.random.default_rng(seed)
    sentences: List[Sentence] = []
    for i in range(n):
        sentiment = Sentiment(int(rng.integers(3)))
        words = _pick(rng, ENGLISH_WORDS[sentiment], 3)
        if i % 10 == 9:
            other = Sentiment((int(sentiment) + 1 + int(rng.integers(2))) % 3)
            words += [_pick(rng, EMOJIS[sentiment], 1)[0], _pick(rng, EMOJIS[other], 1)[0]]
        elif i % 10 != 4:
            words.append(_pick(rng, EMOJIS[sentiment], 1)[0])
        sentences.append(Sentence(f"e{i + 1}", " ".join(words), sentiment, name))
    return LabeledCorpus(sentences, name=name), emoji_map()
