from .gru import (GruLayerParams, ShapeMismatchError, gru_cell_forward,
                  gru_layer_forward, gru_layer_backward)
from .initializers import glorot_uniform_init, orthogonal_init, uniform_init
from .losses import softmax, categorical_cross_entropy
from .model import (ModelConfig, ParamCounts, GruStackModel, ForwardCache,
                    IndexOutOfVocabError, StaleCacheError, param_count,
                    build_model, load_embedding_text, TENSOR_ORDER)
from .optim import AdamState, adam_step

__all__ = [
    "GruLayerParams", "ShapeMismatchError", "gru_cell_forward",
    "gru_layer_forward", "gru_layer_backward",
    "glorot_uniform_init", "orthogonal_init", "uniform_init",
    "softmax", "categorical_cross_entropy",
    "ModelConfig", "ParamCounts", "GruStackModel", "ForwardCache",
    "IndexOutOfVocabError", "StaleCacheError", "param_count", "build_model",
    "load_embedding_text", "TENSOR_ORDER",
    "AdamState", "adam_step",
]
