"""Scikit-learn style estimators wrapping the functional pipeline.

These make the transform compose with ordinary ML tooling: amplitude and
content features feed any downstream estimator, and the content classifier
follows the fit/predict contract with variables as samples.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import action, validation
from .statistics import DataSeries, sample_covariance_tensor
from .transform import classify, schur_content, schur_transform


def _check_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; "
            "call 'fit' first"
        )


class SchurAmplitudes(TransformerMixin, BaseEstimator):
    """Per-series Schur amplitude features.

    Each sample is a whole data series: X is an array of shape
    (n_series, N, n, k) or a list of (N, n, k) arrays (N may vary between
    series).  The transform output has one column per partition of n,
    holding the amplitude of that isotypic component.

    Parameters
    ----------
    normalize : bool, default False
        Divide each covariance tensor by its sample count.
    budget_mib : int, default 4096
        Memory budget for the projector set, in MiB.

    Attributes
    ----------
    n_factors_ : int
        Number of variables per series seen during fit.
    point_dim_ : int
        Dimension k of the observations.
    partitions_ : tuple of tuples
        Feature order: the partitions of ``n_factors_``.
    """

    def __init__(self, normalize=False, budget_mib=4096):
        self.normalize = normalize
        self.budget_mib = budget_mib

    def fit(self, X, y=None):
        series = validation.as_series_list(X)
        self.n_factors_, self.point_dim_ = validation.common_shape(series)
        bundle = action.load_or_build_projectors(
            self.n_factors_,
            self.point_dim_,
            budget_bytes=validation.budget_bytes_from_mib(self.budget_mib),
        )
        self.partitions_ = bundle.partitions
        self._bundle = bundle
        return self

    def transform(self, X):
        _check_fitted(self, "partitions_")
        series = validation.as_series_list(X)
        shape = validation.common_shape(series)
        if shape != (self.n_factors_, self.point_dim_):
            raise ValueError(
                f"series have (variables, dim) = {shape}, fitted for "
                f"({self.n_factors_}, {self.point_dim_})"
            )
        rows = []
        for s in series:
            tensor = sample_covariance_tensor(s, normalize=self.normalize)
            rows.append(schur_transform(tensor, bundle=self._bundle).amplitude_vector())
        return np.vstack(rows)

    def get_feature_names_out(self, input_features=None):
        _check_fitted(self, "partitions_")
        return np.array(
            ["(" + ",".join(str(p) for p in lam) + ")" for lam in self.partitions_],
            dtype=object,
        )


class SchurContentFeatures(TransformerMixin, BaseEstimator):
    """Per-series mean content features.

    For every series, the Schur content over its ``n_factors``-variable
    subsets is reduced to the per-partition mean amplitude.  Series may have
    any number of variables >= n_factors, so the feature width is fixed.

    Parameters
    ----------
    n_factors : int, default 3
        Tensor order of the sub-transforms.
    mode : {'all', 'seq'}, default 'all'
        Subset family: every subset, or sequential windows.
    normalize : bool, default False
        Divide each covariance tensor by its sample count.
    budget_mib : int, default 4096
        Memory budget for the projector set, in MiB.
    """

    def __init__(self, n_factors=3, mode="all", normalize=False, budget_mib=4096):
        self.n_factors = n_factors
        self.mode = mode
        self.normalize = normalize
        self.budget_mib = budget_mib

    def fit(self, X, y=None):
        series = validation.as_series_list(X)
        dims = {s.dim for s in series}
        if len(dims) != 1:
            raise ValueError(f"series disagree on the point dimension: {sorted(dims)}")
        self.point_dim_ = dims.pop()
        for s in series:
            if s.length < self.n_factors:
                raise ValueError(
                    f"a series has {s.length} variables, fewer than n_factors={self.n_factors}"
                )
        bundle = action.load_or_build_projectors(
            self.n_factors,
            self.point_dim_,
            budget_bytes=validation.budget_bytes_from_mib(self.budget_mib),
        )
        self.partitions_ = bundle.partitions
        self._bundle = bundle
        return self

    def transform(self, X):
        _check_fitted(self, "partitions_")
        series = validation.as_series_list(X)
        rows = []
        for s in series:
            if s.dim != self.point_dim_:
                raise ValueError(
                    f"series has dim {s.dim}, fitted for {self.point_dim_}"
                )
            content = schur_content(
                s,
                self.n_factors,
                mode=self.mode,
                normalize=self.normalize,
                bundle=self._bundle,
            )
            rows.append(content.mean_amplitudes())
        return np.vstack(rows)

    def get_feature_names_out(self, input_features=None):
        _check_fitted(self, "partitions_")
        return np.array(
            ["(" + ",".join(str(p) for p in lam) + ")" for lam in self.partitions_],
            dtype=object,
        )


class SchurContentClassifier(ClassifierMixin, BaseEstimator):
    """Content-matching classifier over matched variables.

    Samples are variables: X has shape (m, N, k), one matched (N, k) point
    set per variable, and y labels each variable's class.  ``predict``
    assigns new variables to the class whose content means move least when
    the candidate replaces the last factor of the class's subsets.

    Parameters
    ----------
    n_factors : int, default 3
        Tensor order of the content sub-transforms.
    metric : {'l2', 'l1'}, default 'l2'
        Distance between per-partition mean amplitude vectors.
    normalize : bool, default False
        Divide each covariance tensor by its sample count.
    budget_mib : int, default 4096
        Memory budget for the projector set, in MiB.
    """

    def __init__(self, n_factors=3, metric="l2", normalize=False, budget_mib=4096):
        self.n_factors = n_factors
        self.metric = metric
        self.normalize = normalize
        self.budget_mib = budget_mib

    def fit(self, X, y):
        variables = [validation.as_points(x) for x in X]
        y = np.asarray(y)
        if len(variables) != y.shape[0]:
            raise ValueError(f"{len(variables)} variables but {y.shape[0]} labels")
        shapes = {v.shape for v in variables}
        if len(shapes) != 1:
            raise ValueError(f"variables disagree on (samples, dim): {sorted(shapes)}")
        labels_in_order = []
        for label in y:
            if label not in labels_in_order:
                labels_in_order.append(label)
        self.classes_ = np.array(labels_in_order)
        grouped = {}
        for label in labels_in_order:
            members = [v for v, l in zip(variables, y) if l == label]
            if len(members) < self.n_factors:
                raise ValueError(
                    f"class {label!r} has {len(members)} variables, fewer than "
                    f"n_factors={self.n_factors}"
                )
            grouped[label] = DataSeries(np.stack(members, axis=1))
        self._class_series = grouped
        self.point_dim_ = variables[0].shape[1]
        self._bundle = action.load_or_build_projectors(
            self.n_factors,
            self.point_dim_,
            budget_bytes=validation.budget_bytes_from_mib(self.budget_mib),
        )
        return self

    def _as_candidates(self, X):
        arr = np.asarray(X, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(
                f"expected candidates of shape (count, samples, dim), got {arr.shape}"
            )
        return arr

    def score_table(self, candidate):
        """Full classification detail (both metrics) for one (N, k) candidate."""
        _check_fitted(self, "classes_")
        return classify(
            {label: self._class_series[label] for label in self.classes_},
            validation.as_points(candidate),
            self.n_factors,
            metric=self.metric,
            normalize=self.normalize,
            bundle=self._bundle,
        )

    def predict(self, X):
        _check_fitted(self, "classes_")
        return np.array([self.score_table(c).label for c in self._as_candidates(X)])

    def decision_function(self, X):
        """Negated distances, one column per class (greater is better)."""
        _check_fitted(self, "classes_")
        rows = []
        for c in self._as_candidates(X):
            result = self.score_table(c)
            rows.append([-result.scores[l][self.metric] for l in self.classes_])
        return np.asarray(rows)
