"""Matched data series and their sample covariance tensors.

A series holds N matched samples of n variables, each an observation in
R^k: values[j, i, :] is sample j of variable i.  The covariance tensor of
a series is the k^n-vector

    T[a_1 .. a_n] = sum_j  prod_i (v[j, i, a_i] - offset[i, a_i])

with offsets taken from the per-variable sample means unless reference
points are supplied.  The sum over samples is left unnormalized by default;
``normalize=True`` divides by N (never by N - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import partitions as pt
from .exceptions import DataError

# cap on the rows-by-k^n workspace used when expanding sample products
_PRODUCT_CHUNK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class DataSeries:
    """N matched samples of n variables with values in R^k."""

    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 3:
            raise DataError(
                f"series values must have shape (samples, variables, dim), got {arr.shape}"
            )
        if min(arr.shape) < 1:
            raise DataError(f"series axes must all be nonempty, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.labels is not None:
            labels = tuple(str(l) for l in self.labels)
            if len(labels) != arr.shape[1]:
                raise DataError(
                    f"{len(labels)} labels supplied for {arr.shape[1]} variables"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def sample_count(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        """Number of variables (tensor factors a full transform would use)."""
        return self.values.shape[1]

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    def label_of(self, i) -> str:
        if self.labels is not None:
            return self.labels[i]
        return f"v{i + 1}"

    def select(self, indices) -> "DataSeries":
        """Sub-series of the given variables, in the given order."""
        idx = [int(i) for i in indices]
        for i in idx:
            if not 0 <= i < self.length:
                raise ValueError(f"variable index {i} out of range 0..{self.length - 1}")
        labels = tuple(self.label_of(i) for i in idx) if self.labels is not None else None
        return DataSeries(self.values[:, idx, :], labels)


def as_series(data, labels=None) -> DataSeries:
    """Coerce an (N, n, k) array or DataSeries into a DataSeries."""
    if isinstance(data, DataSeries):
        return data
    return DataSeries(np.asarray(data), labels)


def _check_references(references, length, dim) -> np.ndarray:
    refs = np.asarray(references, dtype=np.float64)
    if refs.shape != (length, dim):
        raise ValueError(
            f"reference points must have shape ({length}, {dim}), got {refs.shape}"
        )
    if not np.isfinite(refs).all():
        raise DataError("reference points contain non-finite values")
    return refs


def center(series, references=None):
    """Subtract per-variable offsets; returns (centered series, offsets).

    Offsets are the sample means of each variable, or the supplied
    reference points, as an (n, k) array.
    """
    series = as_series(series)
    if references is None:
        offsets = series.values.mean(axis=0)
    else:
        offsets = _check_references(references, series.length, series.dim)
    centered = DataSeries(series.values - offsets[None, :, :], series.labels)
    return centered, offsets


@dataclass(frozen=True)
class CovarianceTensor:
    """Coefficient vector of a covariance tensor in the lexicographic basis."""

    values: np.ndarray
    order: int
    dim: int
    offsets: np.ndarray
    normalized: bool
    sample_count: int
    centered_on_means: bool = True

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.shape != (self.dim**self.order,):
            raise ValueError(
                f"tensor of order {self.order} over R^{self.dim} needs "
                f"{self.dim ** self.order} coefficients, got shape {arr.shape}"
            )
        object.__setattr__(self, "values", arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def reshaped(self) -> np.ndarray:
        """The same coefficients as a k x k x ... x k array."""
        return self.values.reshape((self.dim,) * self.order)


def sample_covariance_tensor(series, references=None, normalize=False) -> CovarianceTensor:
    """Covariance tensor of a full series, one factor per variable."""
    series = as_series(series)
    if not np.isfinite(series.values).all():
        raise DataError("series contains non-finite values")
    centered, offsets = center(series, references)
    big_n, n, k = centered.values.shape
    dim = k**n
    total = np.zeros(dim)
    step = max(1, _PRODUCT_CHUNK_ENTRIES // dim)
    for start in range(0, big_n, step):
        block = centered.values[start : start + step]
        prod = block[:, 0, :]
        for i in range(1, n):
            prod = (prod[:, :, None] * block[:, i, None, :]).reshape(block.shape[0], -1)
        total += prod.sum(axis=0)
    if normalize:
        total /= big_n
    return CovarianceTensor(
        values=total,
        order=n,
        dim=k,
        offsets=offsets,
        normalized=bool(normalize),
        sample_count=big_n,
        centered_on_means=references is None,
    )


def typed_covariance_tensor(
    series, orders, references=None, normalize=False, *, limit: int | None = pt.DEFAULT_N_MAX
) -> CovarianceTensor:
    """Covariance tensor with variable i repeated orders[i] times.

    Equivalent to expanding the series so each variable appears orders[i]
    times consecutively and taking the plain covariance tensor of the
    expansion.  The tensor order is sum(orders).
    """
    series = as_series(series)
    reps = tuple(int(l) for l in orders)
    if len(reps) != series.length:
        raise ValueError(
            f"got {len(reps)} repetition counts for {series.length} variables"
        )
    if any(l < 1 for l in reps):
        raise ValueError(f"repetition counts must be positive, got {reps}")
    total_order = sum(reps)
    if limit is not None and total_order > limit:
        raise ValueError(
            f"total tensor order {total_order} exceeds the configured limit {limit}"
        )
    expanded_values = np.repeat(series.values, reps, axis=1)
    labels = None
    if series.labels is not None:
        labels = tuple(np.repeat(series.labels, reps))
    expanded = DataSeries(expanded_values, labels)
    expanded_refs = None
    if references is not None:
        refs = _check_references(references, series.length, series.dim)
        expanded_refs = np.repeat(refs, reps, axis=0)
    return sample_covariance_tensor(expanded, expanded_refs, normalize)
