"""Input coercion helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .statistics import DataSeries, as_series


def as_points(x) -> np.ndarray:
    """One variable as an (N, k) float array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or min(arr.shape) < 1:
        raise ValueError(f"expected a (samples, dim) array, got shape {arr.shape}")
    return arr


def as_series_list(X) -> list[DataSeries]:
    """A collection of series: a 4-d array or an iterable of (N, n, k) items."""
    if isinstance(X, DataSeries):
        return [X]
    if isinstance(X, np.ndarray) and X.ndim == 4:
        return [DataSeries(X[i]) for i in range(X.shape[0])]
    if isinstance(X, np.ndarray) and X.ndim == 3:
        raise ValueError(
            "got a single (samples, variables, dim) array; wrap it in a list "
            "to pass one series"
        )
    out = [as_series(item) for item in X]
    if not out:
        raise ValueError("empty series collection")
    return out


def common_shape(series_list) -> tuple[int, int]:
    """(variables, dim) shared by every series; raises when they disagree."""
    shapes = {(s.length, s.dim) for s in series_list}
    if len(shapes) != 1:
        raise ValueError(f"series disagree on (variables, dim): {sorted(shapes)}")
    return shapes.pop()


def budget_bytes_from_mib(budget_mib) -> int:
    mib = int(budget_mib)
    if mib < 1:
        raise ValueError(f"budget must be at least 1 MiB, got {budget_mib!r}")
    return mib << 20
