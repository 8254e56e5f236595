"""Seeded weight initializers for the classifier stack."""

import numpy as np

__all__ = ["glorot_uniform_init", "orthogonal_init", "uniform_init"]


def glorot_uniform_init(rows: int, cols: int, seed, dtype=np.float32) -> np.ndarray:
    """Uniform on [-L, L] with L = sqrt(6 / (rows + cols))."""
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid shape ({rows}, {cols})")
    limit = np.sqrt(6.0 / (rows + cols))
    rng = np.random.default_rng(seed)
    return rng.uniform(-limit, limit, size=(rows, cols)).astype(dtype)


def orthogonal_init(rows: int, cols: int, seed, dtype=np.float32) -> np.ndarray:
    """Orthogonal matrix from the QR decomposition of a seeded Gaussian.

    For rows >= cols the columns are orthonormal, otherwise the rows are.
    Signs are fixed from the diagonal of R so the result is unique per seed.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid shape ({rows}, {cols})")
    rng = np.random.default_rng(seed)
    tall = (rows, cols) if rows >= cols else (cols, rows)
    gaussian = rng.standard_normal(tall)
    q, r = np.linalg.qr(gaussian)
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return np.ascontiguousarray(q, dtype=dtype)


def uniform_init(rows: int, cols: int, seed, limit: float = 0.05, dtype=np.float32) -> np.ndarray:
    """Uniform on [-limit, limit]; used for the frozen embedding table."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-limit, limit, size=(rows, cols)).astype(dtype)
