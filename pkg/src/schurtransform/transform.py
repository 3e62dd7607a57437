"""The Schur transform of covariance tensors, and statistics built on it.

``schur_transform`` splits a covariance tensor into its isotypic components
T(lam) = Num(lam) T / n! and reports the amplitude |T(lam)| of each.  The
components must reassemble the input; the residual |T - sum T(lam)| is
checked against RESIDUAL_RTOL * max(1, |T|) on every call and a violation
raises (it would mean broken projectors, not bad data).

``schur_content`` applies the transform to every n-factor subset of a wider
series (all subsets, or sequential windows) giving per-partition amplitude
distributions.  ``classify`` implements the content-matching rule: a
candidate variable joins the class whose content changes least when the
candidate is substituted into its subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import action
from . import partitions as pt
from .exceptions import InvariantViolationError
from .statistics import DataSeries, as_series, sample_covariance_tensor

RESIDUAL_RTOL = 1e-10

_MODE_ALIASES = {
    "all": "all",
    "seq": "sequential",
    "sequential": "sequential",
}


@dataclass(frozen=True)
class SchurResult:
    """Schur transform of a single covariance tensor."""

    order: int
    dim: int
    partitions: tuple[tuple[int, ...], ...]
    components: dict
    amplitudes: dict
    residual: float
    tensor_norm: float
    sample_count: int
    normalized: bool

    def amplitude_vector(self) -> np.ndarray:
        """Amplitudes in canonical partition order."""
        return np.array([self.amplitudes[lam] for lam in self.partitions])


def schur_transform(tensor, bundle=None, **bundle_options) -> SchurResult:
    """Decompose a covariance tensor into isotypic components.

    ``bundle`` may carry a prebuilt projector set for (tensor.order,
    tensor.dim); otherwise one is built (or fetched from cache) using
    ``bundle_options`` (budget_bytes, cache_dir, skip_vanishing, ...).
    """
    if bundle is None:
        bundle = action.load_or_build_projectors(tensor.order, tensor.dim, **bundle_options)
    if (bundle.n, bundle.k) != (tensor.order, tensor.dim):
        raise ValueError(
            f"projector set is for (n={bundle.n}, k={bundle.k}) but the tensor "
            f"has order {tensor.order} over R^{tensor.dim}"
        )
    values = tensor.values
    components = {}
    amplitudes = {}
    reassembled = np.zeros_like(values)
    for lam in bundle.partitions:
        comp = bundle.component(lam, values)
        components[lam] = comp
        amplitudes[lam] = float(np.linalg.norm(comp))
        reassembled += comp
    tensor_norm = float(np.linalg.norm(values))
    residual = float(np.linalg.norm(values - reassembled))
    if residual > RESIDUAL_RTOL * max(1.0, tensor_norm):
        raise InvariantViolationError(
            f"Schur components do not reassemble the input tensor: residual "
            f"{residual:.3e} exceeds {RESIDUAL_RTOL:.0e} * max(1, {tensor_norm:.3e})"
        )
    return SchurResult(
        order=tensor.order,
        dim=tensor.dim,
        partitions=bundle.partitions,
        components=components,
        amplitudes=amplitudes,
        residual=residual,
        tensor_norm=tensor_norm,
        sample_count=tensor.sample_count,
        normalized=tensor.normalized,
    )


def subset_indices(variable_count, factor_count, mode="all") -> list[tuple[int, ...]]:
    """Index tuples of the subsets a content computation runs over.

    ``all`` is every size-n subset in lexicographic order; ``sequential``
    is the m - n + 1 contiguous windows.
    """
    canonical = _MODE_ALIASES.get(str(mode))
    if canonical is None:
        raise ValueError(f"mode must be one of {sorted(set(_MODE_ALIASES))}, got {mode!r}")
    if factor_count < 1:
        raise ValueError(f"factor count must be positive, got {factor_count}")
    if factor_count > variable_count:
        raise ValueError(
            f"cannot draw {factor_count}-variable subsets from {variable_count} variables"
        )
    if canonical == "all":
        return list(combinations(range(variable_count), factor_count))
    return [tuple(range(s, s + factor_count)) for s in range(variable_count - factor_count + 1)]


@dataclass(frozen=True)
class SchurContent:
    """Per-partition amplitude distributions over variable subsets.

    ``amplitudes[s, p]`` is the amplitude of partition ``partitions[p]`` on
    subset ``subsets[s]``; ``member_labels`` records which variables each
    row came from.
    """

    factor_count: int
    variable_count: int
    dim: int
    mode: str
    partitions: tuple[tuple[int, ...], ...]
    subsets: tuple[tuple[int, ...], ...]
    member_labels: tuple[tuple[str, ...], ...]
    amplitudes: np.ndarray
    sample_count: int
    normalized: bool

    def amplitudes_for(self, partition) -> np.ndarray:
        lam = pt.check_partition(partition, self.factor_count)
        return self.amplitudes[:, self.partitions.index(lam)]

    def mean_amplitudes(self) -> np.ndarray:
        """Per-partition means over all subsets, in canonical order."""
        return self.amplitudes.mean(axis=0)


def schur_content(
    series,
    factor_count,
    mode="all",
    references=None,
    normalize=False,
    bundle=None,
    **bundle_options,
) -> SchurContent:
    """Amplitude distributions of all n-factor sub-tensors of a series.

    ``references``, when given, supplies one reference point per variable
    of the full series; each subset uses its own rows.
    """
    series = as_series(series)
    subsets = subset_indices(series.length, factor_count, mode)
    refs = None
    if references is not None:
        refs = np.asarray(references, dtype=np.float64)
        if refs.shape != (series.length, series.dim):
            raise ValueError(
                f"reference points must have shape ({series.length}, {series.dim}), "
                f"got {refs.shape}"
            )
    if bundle is None:
        bundle = action.load_or_build_projectors(factor_count, series.dim, **bundle_options)
    rows = []
    for subset in subsets:
        sub = series.select(subset)
        sub_refs = refs[list(subset)] if refs is not None else None
        tensor = sample_covariance_tensor(sub, references=sub_refs, normalize=normalize)
        result = schur_transform(tensor, bundle=bundle)
        rows.append(result.amplitude_vector())
    return SchurContent(
        factor_count=factor_count,
        variable_count=series.length,
        dim=series.dim,
        mode=_MODE_ALIASES[str(mode)],
        partitions=bundle.partitions,
        subsets=tuple(subsets),
        member_labels=tuple(tuple(series.label_of(i) for i in s) for s in subsets),
        amplitudes=np.vstack(rows),
        sample_count=series.sample_count,
        normalized=bool(normalize),
    )


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of the content-matching rule for one candidate."""

    label: str
    metric: str
    tie: bool
    class_labels: tuple[str, ...]
    partitions: tuple[tuple[int, ...], ...]
    scores: dict
    reference_means: dict
    candidate_means: dict

    def score(self, label, metric=None) -> float:
        return self.scores[label][metric or self.metric]


def classify(classes, candidate, factor_count, metric="l2", normalize=False, bundle=None, **bundle_options) -> ClassificationResult:
    """Assign a candidate variable to the best-matching class.

    ``classes`` maps labels to series (the variables of each class, matched
    across samples); ``candidate`` is one (N, k) variable.  For each class
    the per-partition mean amplitudes of its n-factor subsets are compared
    with the means obtained when the candidate replaces the last factor of
    every (n-1)-factor subset.  Smaller distance wins; both the L1 and L2
    tables are always computed and reported.  Ties go to the earliest class
    in input order and are flagged.
    """
    metric = str(metric).lower()
    if metric not in ("l1", "l2"):
        raise ValueError(f"metric must be 'l1' or 'l2', got {metric!r}")
    items = list(classes.items()) if hasattr(classes, "items") else list(classes)
    if not items:
        raise ValueError("at least one class is required")
    labels = [str(label) for label, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate class labels in {labels}")
    series_by_label = {str(label): as_series(data) for label, data in items}

    cand = np.asarray(candidate, dtype=np.float64)
    if cand.ndim != 2:
        raise ValueError(f"candidate must be a single (samples, dim) variable, got shape {cand.shape}")

    dims = {s.dim for s in series_by_label.values()}
    if len(dims) != 1 or cand.shape[1] not in dims:
        raise ValueError("classes and candidate must share one point dimension")
    k = dims.pop()
    for label, s in series_by_label.items():
        if s.length < factor_count:
            raise ValueError(
                f"class {label!r} has {s.length} variables, fewer than the "
                f"{factor_count} factors requested"
            )
        if s.sample_count != cand.shape[0]:
            raise ValueError(
                f"class {label!r} has {s.sample_count} samples but the candidate has "
                f"{cand.shape[0]}"
            )

    if bundle is None:
        bundle = action.load_or_build_projectors(factor_count, k, **bundle_options)
    partitions = bundle.partitions

    scores = {}
    reference_means = {}
    candidate_means = {}
    for label in labels:
        s = series_by_label[label]
        reference = schur_content(
            s, factor_count, mode="all", normalize=normalize, bundle=bundle
        ).mean_amplitudes()
        rows = []
        for subset in combinations(range(s.length), factor_count - 1):
            stacked = np.concatenate(
                [s.values[:, list(subset), :], cand[:, None, :]], axis=1
            )
            tensor = sample_covariance_tensor(DataSeries(stacked), normalize=normalize)
            rows.append(schur_transform(tensor, bundle=bundle).amplitude_vector())
        substituted = np.vstack(rows).mean(axis=0)
        diff = reference - substituted
        scores[label] = {
            "l1": float(np.abs(diff).sum()),
            "l2": float(np.linalg.norm(diff)),
        }
        reference_means[label] = reference
        candidate_means[label] = substituted

    best = min(labels, key=lambda l: scores[l][metric])
    tie = sum(1 for l in labels if scores[l][metric] == scores[best][metric]) > 1
    return ClassificationResult(
        label=best,
        metric=metric,
        tie=tie,
        class_labels=tuple(labels),
        partitions=partitions,
        scores=scores,
        reference_means=reference_means,
        candidate_means=candidate_means,
    )
