"""Desk-scale synthetic corpus: two disjoint 30-word lexicons, one per
class, so the task is linearly separable and sanity runs finish in seconds.
None of the words appear in the shipped stopword list, and documents are
long enough to fill the classifier's 50-token window (short documents
leave the untrained recurrent stack dominated by trailing padding)."""

import csv
from pathlib import Path

import numpy as np

__all__ = ["LEXICON_CLASS0", "LEXICON_CLASS1", "generate_corpus", "write_corpus_csv"]

LEXICON_CLASS0 = (
    "granite", "harbor", "lantern", "meadow", "orchid", "pebble", "quarry",
    "russet", "saddle", "timber", "velvet", "walnut", "yarrow", "zephyr",
    "basil", "cedar", "dahlia", "elder", "fennel", "ginger", "hazel",
    "indigo", "juniper", "kelp", "laurel", "maple", "nettle", "willow",
    "poppy", "reed",
)

LEXICON_CLASS1 = (
    "anchor", "breeze", "copper", "drift", "ember", "flint", "glacier",
    "hollow", "isle", "jetty", "knoll", "ledge", "mesa", "nook", "outcrop",
    "plateau", "ridge", "summit", "tide", "upland", "vale", "wharf",
    "quartz", "yonder", "zinc", "basin", "cliff", "delta", "estuary",
    "fjord",
)


def generate_corpus(n: int, seed: int, min_words: int = 50, max_words: int = 60):
    """Generate n documents with balanced labels (0 then 1, shuffled).

    Returns (texts, labels) where each text draws its words uniformly from
    its class lexicon.
    """
    if n < 2:
        raise ValueError("need at least 2 documents")
    rng = np.random.default_rng(seed)
    labels = np.zeros(n, dtype=np.int64)
    labels[n // 2:] = 1
    rng.shuffle(labels)
    texts = []
    for label in labels:
        lexicon = LEXICON_CLASS0 if label == 0 else LEXICON_CLASS1
        length = int(rng.integers(min_words, max_words + 1))
        words = rng.choice(len(lexicon), size=length)
        texts.append(" ".join(lexicon[w] for w in words))
    return texts, labels.tolist()


def write_corpus_csv(path: str | Path, texts, labels) -> None:
    from .trainer import CLASS_NAMES

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "class"])
        for text, label in zip(texts, labels):
            writer.writerow([text, CLASS_NAMES[label]])
