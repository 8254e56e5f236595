"""Text cleaning, vocabulary fitting and fixed-length integer encoding.

The cleaning stage normalizes raw chat/post text down to lowercase ASCII
words, the vocabulary ranks words by corpus frequency, and the encoder
turns cleaned text into zero-post-padded index sequences ready for the
embedding layer.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
import re
import unicodedata

import numpy as np

__all__ = [
    "CleanRules",
    "Vocabulary",
    "EmptyCorpusError",
    "load_stopwords",
    "default_rules",
    "clean_text",
    "fit_vocabulary",
    "encode",
    "encode_corpus",
]

# Documented bit-exactly: an email is any non-space run containing "@"
# followed by a dot-separated suffix.
EMAIL_RE = re.compile(r"[^\s]+@[^\s]+\.[^\s]+")
TAG_RE = re.compile(r"<[^>]+>")
NON_ALNUM_RE = re.compile(r"[^a-z0-9 ]")
WS_RE = re.compile(r"\s+")


class EmptyCorpusError(ValueError):
    """Every document in the corpus cleaned down to the empty string."""


@dataclass(frozen=True)
class CleanRules:
    """Cleaning configuration; the defaults reproduce the shipped pipeline."""

    stopwords: frozenset = field(default_factory=frozenset)
    strip_html: bool = True
    strip_emails: bool = True
    strip_punctuation: bool = True
    fold_accents: bool = True


def _fold_accents(text: str) -> str:
    # NFKD decomposition followed by dropping combining marks turns
    # accented letters into their ASCII base letter (cafe -> cafe).
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _stopword_tokens(entry: str) -> list[str]:
    """Normalize one stopword file entry into matchable cleaned tokens."""
    folded = _fold_accents(entry).lower()
    stripped = NON_ALNUM_RE.sub(" ", folded)
    return [tok for tok in stripped.split() if tok]


def load_stopwords(path: str | Path | None = None) -> frozenset:
    """Load the stopword file (one word per line, UTF-8, LF).

    Entries are normalized through the non-stopword cleaning rules so that
    contracted forms like "don't" match their cleaned tokens.
    """
    if path is None:
        text = resources.files("chatscreen.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words: set[str] = set()
    for line in text.splitlines():
        words.update(_stopword_tokens(line.strip()))
    return frozenset(words)


def default_rules() -> CleanRules:
    return CleanRules(stopwords=load_stopwords())


def clean_text(raw: str, rules: CleanRules) -> str:
    """Clean one document to lowercase ASCII words separated by single spaces.

    Rule order: HTML strip, email strip, accent fold, lowercase,
    punctuation/special-character strip, whitespace collapse, stopword
    filter. The result is idempotent under re-cleaning.
    """
    text = raw
    if rules.strip_html:
        text = TAG_RE.sub(" ", text)
    if rules.strip_emails:
        text = EMAIL_RE.sub(" ", text)
    if rules.fold_accents:
        text = _fold_accents(text)
    text = text.lower()
    if rules.strip_punctuation:
        text = NON_ALNUM_RE.sub(" ", text)
    else:
        text = text.replace("\t", " ").replace("\n", " ").replace("\r", " ")
    text = WS_RE.sub(" ", text).strip()
    if rules.stopwords:
        text = " ".join(tok for tok in text.split(" ") if tok and tok not in rules.stopwords)
    return text


@dataclass(frozen=True)
class Vocabulary:
    """Frequency-ranked word-to-index map.

    Index 0 is reserved for padding; word indices are dense starting at 1,
    ranked by descending corpus frequency with ties broken by earlier first
    occurrence in corpus order.
    """

    word_to_index: dict
    max_words: int

    def __len__(self) -> int:
        return len(self.word_to_index)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_index

    def __getitem__(self, word: str) -> int:
        return self.word_to_index[word]

    def save(self, path: str | Path) -> None:
        lines = sorted(self.word_to_index.items(), key=lambda kv: kv[1])
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word, index in lines:
                fh.write(f"{word}\t{index}\n")

    @classmethod
    def load(cls, path: str | Path, max_words: int | None = None) -> "Vocabulary":
        mapping: dict = {}
        for line in Path(path).read_text("utf-8").splitlines():
            if not line:
                continue
            word, index = line.split("\t")
            mapping[word] = int(index)
        if max_words is None:
            max_words = len(mapping) + 1
        return cls(word_to_index=mapping, max_words=max_words)

    def to_text(self) -> str:
        lines = sorted(self.word_to_index.items(), key=lambda kv: kv[1])
        return "".join(f"{word}\t{index}\n" for word, index in lines)

    @classmethod
    def from_text(cls, text: str, max_words: int | None = None) -> "Vocabulary":
        mapping: dict = {}
        for line in text.splitlines():
            if not line:
                continue
            word, index = line.split("\t")
            mapping[word] = int(index)
        if max_words is None:
            max_words = len(mapping) + 1
        return cls(word_to_index=mapping, max_words=max_words)


def fit_vocabulary(corpus, max_words: int) -> Vocabulary:
    """Fit a Vocabulary over cleaned texts, keeping the max_words-1 top words.

    One index slot is reserved for padding, so a cap of max_words admits at
    most max_words-1 distinct words.
    """
    if not corpus:
        raise ValueError("corpus must be non-empty")
    if max_words < 2:
        raise ValueError(f"max_words must be >= 2, got {max_words}")
    counts: dict = {}
    first_seen: dict = {}
    position = 0
    for doc in corpus:
        for token in doc.split(" "):
            if not token:
                continue
            counts[token] = counts.get(token, 0) + 1
            if token not in first_seen:
                first_seen[token] = position
            position += 1
    if not counts:
        raise EmptyCorpusError("all documents cleaned to empty strings")
    ranked = sorted(counts, key=lambda w: (-counts[w], first_seen[w]))
    kept = ranked[: max_words - 1]
    return Vocabulary(
        word_to_index={word: rank for rank, word in enumerate(kept, start=1)},
        max_words=max_words,
    )


def encode(text: str, vocab: Vocabulary, seq_len: int) -> np.ndarray:
    """Encode cleaned text to exactly seq_len indices with post padding.

    Out-of-vocabulary words are dropped; over-length sequences keep the
    first seq_len indices.
    """
    if seq_len < 1:
        raise ValueError(f"seq_len must be >= 1, got {seq_len}")
    mapping = vocab.word_to_index
    indices = [mapping[tok] for tok in text.split(" ") if tok in mapping]
    del indices[seq_len:]
    out = np.zeros(seq_len, dtype=np.int32)
    out[: len(indices)] = indices
    return out


def encode_corpus(texts, vocab: Vocabulary, seq_len: int) -> np.ndarray:
    """Encode a list of cleaned texts into an [n, seq_len] int32 matrix."""
    out = np.zeros((len(texts), seq_len), dtype=np.int32)
    for row, text in enumerate(texts):
        out[row] = encode(text, vocab, seq_len)
    return out
