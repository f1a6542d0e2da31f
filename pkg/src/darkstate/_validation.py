"""Small input-checking helpers shared by the public constructors and estimators."""

import math
import numbers

import numpy as np


def check_scalar(value, name, *, positive=False, nonnegative=False, finite=True):
    """Return ``value`` as a float after range checks, raising ``ValueError``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if finite and not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if positive and not value > 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    if nonnegative and not value >= 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


def check_real_profile(values, n=None, name="intensity", nonnegative=True):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} has {arr.shape[0]} samples, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    if nonnegative and np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative everywhere")
    return arr


def check_field_matrix(X, n_features=None):
    """Coerce probe fields to a complex 2-D array of shape (n_fields, n_samples).

    sklearn's ``check_array`` rejects complex input, hence this helper.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array of fields, got shape {arr.shape}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("fields contain NaN or infinite samples")
    if n_features is not None and arr.shape[1] != n_features:
        raise ValueError(
            f"X has {arr.shape[1]} samples per field, but the estimator was "
            f"fitted on a grid of {n_features}"
        )
    return arr
