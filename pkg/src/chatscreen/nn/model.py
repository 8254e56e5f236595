"""The suicidal-ideation classifier: frozen embedding, three stacked GRUs
(the first two returning full sequences, the third its final state) and a
softmax dense head, with inverted dropout after the embedding and after
each of the first two GRU layers.
"""

from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .gru import (GruLayerParams, ShapeMismatchError, gru_layer_forward,
                  gru_layer_backward)
from .initializers import glorot_uniform_init, orthogonal_init, uniform_init
from .losses import softmax

__all__ = [
    "ModelConfig",
    "ParamCounts",
    "GruStackModel",
    "ForwardCache",
    "IndexOutOfVocabError",
    "StaleCacheError",
    "param_count",
    "build_model",
    "load_embedding_text",
]

TENSOR_ORDER = (
    "embedding",
    "gru1.W_in", "gru1.W_rec", "gru1.b_in", "gru1.b_rec",
    "gru2.W_in", "gru2.W_rec", "gru2.b_in", "gru2.b_rec",
    "gru3.W_in", "gru3.W_rec", "gru3.b_in", "gru3.b_rec",
    "dense_W", "dense_b",
)


class IndexOutOfVocabError(ValueError):
    """An input index is outside the embedding table."""


class StaleCacheError(RuntimeError):
    """The forward cache was built against different parameter values."""


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int = 10_000
    embed_dim: int = 100
    seq_len: int = 50
    gru_units: int = 50
    num_classes: int = 2
    dropout_rate: float = 0.20
    embedding_trainable: bool = False

    def __post_init__(self):
        for name in ("vocab_size", "embed_dim", "seq_len", "gru_units", "num_classes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if self.embedding_trainable:
            raise ValueError("trainable embeddings are not supported")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data)


@dataclass(frozen=True)
class ParamCounts:
    embedding: int
    gru1: int
    gru2: int
    gru3: int
    dense: int
    total: int
    trainable: int
    non_trainable: int


def _gru_count(input_dim: int, units: int) -> int:
    return 3 * (input_dim * units + units * units + 2 * units)


def param_count(config: ModelConfig) -> ParamCounts:
    """Per-layer and total parameter counts for a configuration."""
    embedding = config.vocab_size * config.embed_dim
    gru1 = _gru_count(config.embed_dim, config.gru_units)
    gru23 = _gru_count(config.gru_units, config.gru_units)
    dense = config.gru_units * config.num_classes + config.num_classes
    trainable = gru1 + 2 * gru23 + dense
    return ParamCounts(
        embedding=embedding,
        gru1=gru1,
        gru2=gru23,
        gru3=gru23,
        dense=dense,
        total=embedding + trainable,
        trainable=trainable,
        non_trainable=embedding,
    )


@dataclass
class ForwardCache:
    """Everything backward() needs, plus a parameter-version stamp."""

    indices: np.ndarray
    embedded: np.ndarray          # post-dropout embedding output
    masks: tuple                  # dropout masks (or None each) in stack order
    gru_caches: tuple             # per-layer GruLayerCache
    h_final: np.ndarray           # gru3 final state [B, units]
    probs: np.ndarray
    param_version: int


@dataclass
class GruStackModel:
    config: ModelConfig
    embedding: np.ndarray
    gru1: GruLayerParams
    gru2: GruLayerParams
    gru3: GruLayerParams
    dense_W: np.ndarray
    dense_b: np.ndarray
    param_version: int = 0

    @property
    def dtype(self):
        return self.dense_W.dtype

    def trainable_tensors(self) -> dict:
        """Ordered name -> array view of every trainable parameter.

        The frozen embedding is deliberately absent.
        """
        out = {}
        for i, layer in enumerate((self.gru1, self.gru2, self.gru3), start=1):
            out[f"gru{i}.W_in"] = layer.W_in
            out[f"gru{i}.W_rec"] = layer.W_rec
            out[f"gru{i}.b_in"] = layer.b_in
            out[f"gru{i}.b_rec"] = layer.b_rec
        out["dense_W"] = self.dense_W
        out["dense_b"] = self.dense_b
        return out

    def all_tensors(self) -> dict:
        return {"embedding": self.embedding, **self.trainable_tensors()}

    def get_weights(self) -> dict:
        return {k: v.copy() for k, v in self.trainable_tensors().items()}

    def set_weights(self, weights: dict) -> None:
        tensors = self.trainable_tensors()
        for name, tensor in tensors.items():
            src = weights[name]
            if src.shape != tensor.shape:
                raise ShapeMismatchError(f"{name}: {src.shape} vs {tensor.shape}")
            tensor[...] = src
        self.param_version += 1

    def _dropout_mask(self, shape, rng) -> np.ndarray:
        keep = 1.0 - self.config.dropout_rate
        mask = (rng.random(shape) < keep).astype(self.dtype)
        mask /= keep
        return mask

    def forward(self, batch: np.ndarray, mode: str = "infer", dropout_seed=None):
        """Run the stack over [B, seq_len] index rows.

        Returns probabilities [B, num_classes] in infer mode, or
        (probabilities, cache) in train mode. Dropout is identity at
        inference and inverted (mask / keep-rate) during training.
        """
        if mode not in ("infer", "train"):
            raise ValueError(f"unknown mode {mode!r}")
        cfg = self.config
        batch = np.asarray(batch)
        if batch.ndim == 1:
            batch = batch[None, :]
        if batch.ndim != 2 or batch.shape[1] != cfg.seq_len:
            raise ShapeMismatchError(
                f"expected [B, {cfg.seq_len}] indices, got {batch.shape}")
        if batch.min() < 0 or batch.max() >= cfg.vocab_size:
            raise IndexOutOfVocabError(
                f"indices must be in [0, {cfg.vocab_size}); got "
                f"[{batch.min()}, {batch.max()}]")

        train = mode == "train"
        use_dropout = train and cfg.dropout_rate > 0.0
        rng = np.random.default_rng(dropout_seed) if use_dropout else None

        X = self.embedding[batch]
        masks = [None, None, None]
        if use_dropout:
            masks[0] = self._dropout_mask(X.shape, rng)
            X = X * masks[0]
        H1, c1 = gru_layer_forward(self.gru1, X, want_cache=train)
        if use_dropout:
            masks[1] = self._dropout_mask(H1.shape, rng)
            H1 = H1 * masks[1]
        H2, c2 = gru_layer_forward(self.gru2, H1, want_cache=train)
        if use_dropout:
            masks[2] = self._dropout_mask(H2.shape, rng)
            H2 = H2 * masks[2]
        H3, c3 = gru_layer_forward(self.gru3, H2, want_cache=train)
        h_final = H3[:, -1]
        logits = h_final @ self.dense_W + self.dense_b
        probs = softmax(logits)
        if not train:
            return probs
        cache = ForwardCache(
            indices=batch,
            embedded=X,
            masks=tuple(masks),
            gru_caches=(c1, c2, c3),
            h_final=h_final,
            probs=probs,
            param_version=self.param_version,
        )
        return probs, cache

    def backward(self, cache: ForwardCache, onehot_labels: np.ndarray) -> dict:
        """Backpropagation through time over the whole stack.

        Gradient shapes mirror trainable_tensors(); the frozen embedding
        receives no gradient.
        """
        if cache.param_version != self.param_version:
            raise StaleCacheError(
                "forward cache predates the latest parameter update")
        onehot = np.asarray(onehot_labels, dtype=self.dtype)
        if onehot.shape != cache.probs.shape:
            raise ShapeMismatchError(
                f"labels {onehot.shape} vs probs {cache.probs.shape}")
        B = cache.probs.shape[0]
        c1, c2, c3 = cache.gru_caches
        m0, m1, m2 = cache.masks

        # softmax + cross-entropy: d(mean loss)/dlogits = (p - y) / B
        dlogits = (cache.probs - onehot) / B
        grads = {
            "dense_W": cache.h_final.T @ dlogits,
            "dense_b": dlogits.sum(axis=0),
        }
        dh_final = dlogits @ self.dense_W.T

        dH3 = np.zeros((B, self.config.seq_len, self.config.gru_units), dtype=self.dtype)
        dH3[:, -1] = dh_final
        g3, dX3 = gru_layer_backward(self.gru3, c3, dH3)
        if m2 is not None:
            dX3 = dX3 * m2
        g2, dX2 = gru_layer_backward(self.gru2, c2, dX3)
        if m1 is not None:
            dX2 = dX2 * m1
        g1, _ = gru_layer_backward(self.gru1, c1, dX2)

        for i, layer_grads in ((1, g1), (2, g2), (3, g3)):
            for key, val in layer_grads.items():
                grads[f"gru{i}.{key}"] = val
        return grads

    def apply_gradients(self, grads: dict, adam_state) -> None:
        """One optimizer step over the trainable parameters."""
        from .optim import adam_step

        adam_step(self.trainable_tensors(), grads, adam_state)
        self.param_version += 1

    def predict_probs(self, encoded: np.ndarray, batch_size: int = 512) -> np.ndarray:
        """Inference over an [N, seq_len] matrix in memory-bounded chunks."""
        chunks = [
            self.forward(encoded[i:i + batch_size], mode="infer")
            for i in range(0, len(encoded), batch_size)
        ]
        return np.concatenate(chunks, axis=0)


def build_model(config: ModelConfig, seed: int, dtype=np.float32) -> GruStackModel:
    """Construct a model with glorot kernels, orthogonal recurrent kernels,
    zero biases and a seeded uniform [-0.05, 0.05] frozen embedding."""
    children = np.random.SeedSequence(seed).spawn(8)
    u = config.gru_units

    def gru_layer(input_dim, kernel_seed, rec_seed):
        return GruLayerParams(
            W_in=glorot_uniform_init(input_dim, 3 * u, kernel_seed, dtype=dtype),
            W_rec=orthogonal_init(u, 3 * u, rec_seed, dtype=dtype),
            b_in=np.zeros(3 * u, dtype=dtype),
            b_rec=np.zeros(3 * u, dtype=dtype),
        )

    return GruStackModel(
        config=config,
        embedding=uniform_init(config.vocab_size, config.embed_dim, children[0], dtype=dtype),
        gru1=gru_layer(config.embed_dim, children[1], children[2]),
        gru2=gru_layer(u, children[3], children[4]),
        gru3=gru_layer(u, children[5], children[6]),
        dense_W=glorot_uniform_init(u, config.num_classes, children[7], dtype=dtype),
        dense_b=np.zeros(config.num_classes, dtype=dtype),
    )


def load_embedding_text(path: str | Path, vocab, config: ModelConfig,
                        base: np.ndarray | None = None, seed: int = 0) -> np.ndarray:
    """Load pretrained word vectors (lines of `word v1 ... v<embed_dim>`).

    Rows for words missing from the file keep their seeded uniform values.
    """
    table = base.copy() if base is not None else uniform_init(
        config.vocab_size, config.embed_dim, seed)
    found = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            if len(parts) != config.embed_dim + 1:
                continue
            word = parts[0]
            if word in vocab:
                idx = vocab[word]
                if idx < config.vocab_size:
                    table[idx] = np.asarray(parts[1:], dtype=table.dtype)
                    found += 1
    if found == 0:
        raise ValueError(f"no vocabulary words found in {path}")
    return table
