"""Reset-after GRU layer: parameters, cell math, sequence forward/backward.

Gate layout in the fused kernels is [update z | reset r | candidate h] and
each gate group carries separate input and recurrent biases. The candidate
applies the reset gate after the recurrent matrix product:

    z = sigmoid(x W_z + b_z_in + h U_z + b_z_rec)
    r = sigmoid(x W_r + b_r_in + h U_r + b_r_rec)
    c = tanh(x W_h + b_h_in + r * (h U_h + b_h_rec))
    h_t = z * h_prev + (1 - z) * c

This is the only parameterization whose per-layer counts are
3 * (input_dim * units + units^2 + 2 * units).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["GruLayerParams", "ShapeMismatchError", "gru_cell_forward",
           "gru_layer_forward", "gru_layer_backward", "sigmoid"]


class ShapeMismatchError(ValueError):
    """Tensor shapes are inconsistent with the layer parameters."""


def sigmoid(x: np.ndarray) -> np.ndarray:
    # clip keeps exp() in range for float32 without changing saturated values
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


@dataclass
class GruLayerParams:
    """Fused parameters of one GRU layer."""

    W_in: np.ndarray   # [input_dim, 3*units]
    W_rec: np.ndarray  # [units, 3*units]
    b_in: np.ndarray   # [3*units]
    b_rec: np.ndarray  # [3*units]

    def __post_init__(self):
        units = self.W_rec.shape[0]
        if self.W_rec.shape != (units, 3 * units):
            raise ShapeMismatchError(f"recurrent kernel shape {self.W_rec.shape}")
        if self.W_in.ndim != 2 or self.W_in.shape[1] != 3 * units:
            raise ShapeMismatchError(f"input kernel shape {self.W_in.shape}")
        if self.b_in.shape != (3 * units,) or self.b_rec.shape != (3 * units,):
            raise ShapeMismatchError("bias shapes must be (3*units,)")

    @property
    def input_dim(self) -> int:
        return self.W_in.shape[0]

    @property
    def units(self) -> int:
        return self.W_rec.shape[0]

    def param_count(self) -> int:
        return self.W_in.size + self.W_rec.size + self.b_in.size + self.b_rec.size


def _split_gates(fused: np.ndarray, units: int):
    return fused[..., :units], fused[..., units:2 * units], fused[..., 2 * units:]


def gru_cell_forward(x_t: np.ndarray, h_prev: np.ndarray, p: GruLayerParams) -> np.ndarray:
    """One GRU time step; accepts a single vector or a [batch, dim] matrix."""
    x_t = np.asarray(x_t)
    h_prev = np.asarray(h_prev)
    if x_t.shape[-1] != p.input_dim:
        raise ShapeMismatchError(f"input dim {x_t.shape[-1]} != {p.input_dim}")
    if h_prev.shape[-1] != p.units:
        raise ShapeMismatchError(f"state dim {h_prev.shape[-1]} != {p.units}")
    a_in = x_t @ p.W_in + p.b_in
    a_rec = h_prev @ p.W_rec + p.b_rec
    az, ar, ah = _split_gates(a_in, p.units)
    gz, gr, gh = _split_gates(a_rec, p.units)
    z = sigmoid(az + gz)
    r = sigmoid(ar + gr)
    c = np.tanh(ah + r * gh)
    return z * h_prev + (1.0 - z) * c


@dataclass
class GruLayerCache:
    """Activations recorded during a cached forward pass."""

    X: np.ndarray   # layer input [B, T, input_dim]
    H: np.ndarray   # hidden states [B, T+1, units], H[:, 0] = 0
    Z: np.ndarray   # update gates [B, T, units]
    R: np.ndarray   # reset gates [B, T, units]
    C: np.ndarray   # candidates [B, T, units]
    GH: np.ndarray  # recurrent candidate pre-activation h U_h + b_h_rec


def gru_layer_forward(p: GruLayerParams, X: np.ndarray, want_cache: bool = False):
    """Run the layer over a [B, T, input_dim] batch.

    Returns the full hidden sequence [B, T, units] and, when requested, the
    cache needed by gru_layer_backward.
    """
    if X.ndim != 3 or X.shape[2] != p.input_dim:
        raise ShapeMismatchError(f"expected [B, T, {p.input_dim}], got {X.shape}")
    B, T, _ = X.shape
    units = p.units
    dtype = X.dtype
    # one fused matmul for the input projections of every time step
    A_in = (X.reshape(B * T, p.input_dim) @ p.W_in).reshape(B, T, 3 * units) + p.b_in
    H = np.zeros((B, T + 1, units), dtype=dtype)
    Z = np.empty((B, T, units), dtype=dtype)
    R = np.empty((B, T, units), dtype=dtype)
    C = np.empty((B, T, units), dtype=dtype)
    GH = np.empty((B, T, units), dtype=dtype)
    h = H[:, 0]
    for t in range(T):
        a_rec = h @ p.W_rec + p.b_rec
        az, ar, ah = _split_gates(A_in[:, t], units)
        gz, gr, gh = _split_gates(a_rec, units)
        z = sigmoid(az + gz)
        r = sigmoid(ar + gr)
        c = np.tanh(ah + r * gh)
        h = z * h + (1.0 - z) * c
        H[:, t + 1] = h
        Z[:, t], R[:, t], C[:, t], GH[:, t] = z, r, c, gh
    out = H[:, 1:]
    if not want_cache:
        return out, None
    return out, GruLayerCache(X=X, H=H, Z=Z, R=R, C=C, GH=GH)


def gru_layer_backward(p: GruLayerParams, cache: GruLayerCache, dH: np.ndarray):
    """Backpropagate through time given dH, the gradient on every output step.

    For a final-state-only layer the caller zero-fills all but the last step.
    Returns (grads, dX) with grads keyed W_in/W_rec/b_in/b_rec.
    """
    X, H = cache.X, cache.H
    B, T, units = dH.shape
    if (B, T) != X.shape[:2] or units != p.units:
        raise ShapeMismatchError(f"dH shape {dH.shape} inconsistent with cache")
    dtype = X.dtype
    d_a_in = np.empty((B, T, 3 * units), dtype=dtype)
    dW_rec = np.zeros_like(p.W_rec)
    db_rec = np.zeros_like(p.b_rec)
    dh_carry = np.zeros((B, units), dtype=dtype)
    for t in range(T - 1, -1, -1):
        dh = dH[:, t] + dh_carry
        z, r, c, gh = cache.Z[:, t], cache.R[:, t], cache.C[:, t], cache.GH[:, t]
        h_prev = H[:, t]
        dz_pre = dh * (h_prev - c) * z * (1.0 - z)
        dc_pre = dh * (1.0 - z) * (1.0 - c * c)
        dr_pre = dc_pre * gh * r * (1.0 - r)
        dgh = dc_pre * r
        d_a_in[:, t, :units] = dz_pre
        d_a_in[:, t, units:2 * units] = dr_pre
        d_a_in[:, t, 2 * units:] = dc_pre
        d_a_rec = np.concatenate([dz_pre, dr_pre, dgh], axis=1)
        dW_rec += h_prev.T @ d_a_rec
        db_rec += d_a_rec.sum(axis=0)
        dh_carry = dh * z + d_a_rec @ p.W_rec.T
    Xf = X.reshape(B * T, p.input_dim)
    dAf = d_a_in.reshape(B * T, 3 * units)
    grads = {
        "W_in": Xf.T @ dAf,
        "W_rec": dW_rec,
        "b_in": dAf.sum(axis=0),
        "b_rec": db_rec,
    }
    dX = (dAf @ p.W_in.T).reshape(B, T, p.input_dim)
    return grads, dX
