import numpy as np
import pytest

from chatscreen.nn import ModelConfig, build_model

TINY = ModelConfig(vocab_size=20, embed_dim=4, seq_len=5, gru_units=3,
                   num_classes=2, dropout_rate=0.2)


@pytest.fixture
def tiny_config():
    return TINY


@pytest.fixture
def tiny_model():
    return build_model(TINY, seed=123)


@pytest.fixture
def tiny_model_f64():
    return build_model(TINY, seed=123, dtype=np.float64)


@pytest.fixture
def tiny_batch():
    rng = np.random.default_rng(0)
    return rng.integers(0, TINY.vocab_size, size=(4, TINY.seq_len))
