"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import PositionOutOfRangeError, ShapeMismatchError


def check_epochs_array(X, n_samples: int | None = None, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite float64 array of shape ``(n_epochs, channels, samples)``.

    A 2-D input is read as single-channel epochs.
    """
    X = check_array(X, allow_nd=True, dtype=np.float64, ensure_2d=True, input_name=name)
    if X.ndim == 2:
        X = X[:, np.newaxis, :]
    if X.ndim != 3:
        raise ShapeMismatchError(f"{name} must be (n_epochs, channels, samples), got {X.shape}")
    if n_samples is not None and X.shape[-1] != n_samples:
        raise ShapeMismatchError(f"{name} has {X.shape[-1]} samples per epoch, expected {n_samples}")
    return X


def check_positions(y, num_chars: int, n_epochs: int | None = None) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or not np.issubdtype(y.dtype, np.integer):
        raise ValueError("positions must be a 1-D integer array")
    if n_epochs is not None and y.shape[0] != n_epochs:
        raise ShapeMismatchError(f"{y.shape[0]} positions for {n_epochs} epochs")
    if y.size and (y.min() < 0 or y.max() >= num_chars):
        raise PositionOutOfRangeError(f"positions must lie in 0..{num_chars - 1}")
    return y.astype(np.int64)
