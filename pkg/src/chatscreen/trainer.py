"""Dataset ingestion, 50/20/30 splitting, mini-batch training with early
stopping, history export and evaluation."""

import csv
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .nn.losses import categorical_cross_entropy
from .nn.optim import AdamState

__all__ = [
    "SplitSpec", "TrainConfig", "EpochRecord", "TrainingHistory",
    "BadFractionsError", "EmptyDatasetError", "EarlyStopping",
    "CLASS_NAMES", "LABEL_CODES", "one_hot", "load_corpus_csv",
    "split_dataset", "train", "evaluate", "export_history", "load_history",
]

# Label coding: class 0 for suicide, class 1 for non-suicide.
CLASS_NAMES = ("suicide", "non-suicide")
LABEL_CODES = {"suicide": 0, "non-suicide": 1}


class BadFractionsError(ValueError):
    """Split fractions are not positive or do not sum to 1."""


class EmptyDatasetError(ValueError):
    """Training or validation set is empty."""


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.50
    val_frac: float = 0.20
    test_frac: float = 0.30
    shuffle_seed: int = 0

    def __post_init__(self):
        fracs = (self.train_frac, self.val_frac, self.test_frac)
        if any(f <= 0 for f in fracs):
            raise BadFractionsError(f"fractions must be positive: {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise BadFractionsError(f"fractions must sum to 1: {fracs}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SplitSpec":
        return cls(**data)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 25
    batch_size: int = 128
    early_stop_metric: str = "val_loss"
    early_stop_patience: int = 3
    min_delta: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")
        if self.early_stop_metric != "val_loss":
            raise ValueError("only val_loss early stopping is supported")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        return cls(**data)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float


@dataclass
class TrainingHistory:
    records: list = field(default_factory=list)
    stopped_epoch: int = 0
    best_epoch: int = 0


class EarlyStopping:
    """Stop when the monitored loss fails to improve by more than min_delta
    for `patience` consecutive epochs.

    Best-weight tracking uses the raw minimum (so the returned model is
    never worse than the best recorded epoch), while the plateau counter
    requires an improvement larger than min_delta.
    """

    def __init__(self, patience: int, min_delta: float = 1e-4):
        self.patience = patience
        self.min_delta = min_delta
        self.threshold = math.inf
        self.best = math.inf
        self.best_epoch = 0
        self.wait = 0
        self.epoch = 0

    def update(self, val_loss: float) -> tuple[bool, bool]:
        """Record one epoch's value; returns (new_best, should_stop)."""
        self.epoch += 1
        new_best = val_loss < self.best
        if new_best:
            self.best = val_loss
            self.best_epoch = self.epoch
        if val_loss < self.threshold - self.min_delta:
            self.threshold = val_loss
            self.wait = 0
            return new_best, False
        self.wait += 1
        return new_best, self.wait >= self.patience


def one_hot(labels, num_classes: int = 2) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((len(labels), num_classes), dtype=np.float32)
    out[np.arange(len(labels)), labels] = 1.0
    return out


def load_corpus_csv(path: str | Path):
    """Read the corpus CSV (header with `text` and `class` columns).

    Returns (texts, labels) with labels coded 0=suicide, 1=non-suicide.
    """
    texts, labels = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"text", "class"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected header with `text` and `class` columns")
        for row in reader:
            cls = row["class"]
            if cls not in LABEL_CODES:
                raise ValueError(f"{path}: unknown class {cls!r}")
            texts.append(row["text"])
            labels.append(LABEL_CODES[cls])
    return texts, labels


def _take(seq, idx):
    if isinstance(seq, np.ndarray):
        return seq[idx]
    return [seq[i] for i in idx]


def split_dataset(samples, labels, spec: SplitSpec):
    """Seeded uniform shuffle, then 50/20/30 (by spec) floor-sized splits.

    Returns ((train_x, train_y), (val_x, val_y), (test_x, test_y)); the
    three parts partition the input exactly.
    """
    n = len(samples)
    if n != len(labels):
        raise ValueError(f"{n} samples vs {len(labels)} labels")
    if n < 10:
        raise ValueError("need at least 10 samples to split")
    perm = np.random.default_rng(spec.shuffle_seed).permutation(n)
    n_train = math.floor(spec.train_frac * n + 1e-9)
    n_val = math.floor(spec.val_frac * n + 1e-9)
    tr, va, te = perm[:n_train], perm[n_train:n_train + n_val], perm[n_train + n_val:]
    return (
        (_take(samples, tr), _take(labels, tr)),
        (_take(samples, va), _take(labels, va)),
        (_take(samples, te), _take(labels, te)),
    )


def evaluate(model, encoded: np.ndarray, onehot: np.ndarray, batch_size: int = 512):
    """Loss and accuracy in inference mode."""
    if len(encoded) == 0:
        raise EmptyDatasetError("cannot evaluate an empty dataset")
    probs = model.predict_probs(encoded, batch_size=batch_size)
    loss = categorical_cross_entropy(probs, onehot)
    accuracy = float((probs.argmax(axis=1) == onehot.argmax(axis=1)).mean())
    return loss, accuracy


def train(model, train_set, val_set, cfg: TrainConfig,
          adam_state: AdamState | None = None, on_epoch=None):
    """Train with per-epoch shuffled batches and early stopping on val loss.

    train_set/val_set are (encoded, onehot) pairs. The last partial batch is
    trained on. Weights of the best validation-loss epoch are restored
    before returning. on_epoch, when given, is called with each EpochRecord.
    Returns (model, TrainingHistory).
    """
    X, Y = train_set
    if len(X) == 0 or len(val_set[0]) == 0:
        raise EmptyDatasetError("training and validation sets must be non-empty")
    adam = adam_state if adam_state is not None else AdamState()
    stopper = EarlyStopping(cfg.early_stop_patience, cfg.min_delta)
    best_weights = None
    records = []
    for epoch in range(1, cfg.epochs + 1):
        order = np.random.default_rng([cfg.seed, epoch]).permutation(len(X))
        seen = 0
        loss_sum = 0.0
        correct = 0
        for b, start in enumerate(range(0, len(X), cfg.batch_size)):
            idx = order[start:start + cfg.batch_size]
            xb, yb = X[idx], Y[idx]
            probs, cache = model.forward(xb, mode="train", dropout_seed=[cfg.seed, epoch, b])
            loss_sum += categorical_cross_entropy(probs, yb) * len(xb)
            correct += int((probs.argmax(axis=1) == yb.argmax(axis=1)).sum())
            seen += len(xb)
            grads = model.backward(cache, yb)
            model.apply_gradients(grads, adam)
        val_loss, val_acc = evaluate(model, *val_set)
        records.append(EpochRecord(
            epoch=epoch,
            train_loss=loss_sum / seen,
            train_accuracy=correct / seen,
            val_loss=val_loss,
            val_accuracy=val_acc,
        ))
        if on_epoch is not None:
            on_epoch(records[-1])
        improved, should_stop = stopper.update(val_loss)
        if improved:
            best_weights = model.get_weights()
        if should_stop:
            break
    if best_weights is not None:
        model.set_weights(best_weights)
    history = TrainingHistory(records=records, stopped_epoch=len(records),
                              best_epoch=stopper.best_epoch)
    return model, history


def export_history(history: TrainingHistory, path: str | Path) -> None:
    """Write the per-epoch history CSV (6-decimal fixed format)."""
    if not history.records:
        raise ValueError("history is empty")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,train_loss,train_acc,val_loss,val_acc\n")
        for r in history.records:
            fh.write(f"{r.epoch},{r.train_loss:.6f},{r.train_accuracy:.6f},"
                     f"{r.val_loss:.6f},{r.val_accuracy:.6f}\n")


def load_history(path: str | Path) -> TrainingHistory:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            records.append(EpochRecord(
                epoch=int(row["epoch"]),
                train_loss=float(row["train_loss"]),
                train_accuracy=float(row["train_acc"]),
                val_loss=float(row["val_loss"]),
                val_accuracy=float(row["val_acc"]),
            ))
    return TrainingHistory(records=records, stopped_epoch=len(records))
