"""Softmax activation and categorical cross-entropy loss."""

import numpy as np

from .gru import ShapeMismatchError

__all__ = ["softmax", "categorical_cross_entropy", "PROB_CLIP"]

PROB_CLIP = 1e-7


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def categorical_cross_entropy(probs: np.ndarray, onehot_labels: np.ndarray) -> float:
    """Mean of -ln p(true class), with p clipped to [1e-7, 1 - 1e-7]."""
    probs = np.asarray(probs)
    onehot_labels = np.asarray(onehot_labels)
    if probs.shape != onehot_labels.shape:
        raise ShapeMismatchError(
            f"probs {probs.shape} vs labels {onehot_labels.shape}")
    clipped = np.clip(probs, PROB_CLIP, 1.0 - PROB_CLIP)
    p_true = (clipped * onehot_labels).sum(axis=-1)
    return float(-np.mean(np.log(p_true)))
