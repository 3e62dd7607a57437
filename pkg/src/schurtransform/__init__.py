"""Isotypic decomposition of sample covariance tensors.

A joint covariance tensor of n variables over R^k lives in the n-fold
tensor power of R^k, which splits under the commuting symmetric-group
and general-linear actions into one component per partition of n.  This
package builds the projectors onto those components with exact integer
arithmetic, applies them to sample covariance tensors, and aggregates
the resulting amplitudes over variable subsets into content features
and a nearest-class rule.

Light combinatorial modules import eagerly; everything touching numpy
loads on first attribute access so ``schur table`` stays quick.
"""

from . import characters, exceptions, partitions
from .characters import CharacterTable, character_table, character_value
from .exceptions import (
    DataError,
    InvariantViolationError,
    ResourceBudgetError,
    SchurTransformError,
)
from .partitions import (
    enumerate_partitions,
    hook_length_dimension,
    schur_functor_dimension,
)

__version__ = "0.1.0"

# attribute -> defining module, resolved on first use
_LAZY = {
    "action": None,
    "statistics": None,
    "transform": None,
    "estimators": None,
    "io": None,
    "validation": None,
    "build_projectors": "action",
    "load_or_build_projectors": "action",
    "projector": "action",
    "verify_projectors": "action",
    "ProjectorBundle": "action",
    "DataSeries": "statistics",
    "as_series": "statistics",
    "center": "statistics",
    "sample_covariance_tensor": "statistics",
    "typed_covariance_tensor": "statistics",
    "CovarianceTensor": "statistics",
    "schur_transform": "transform",
    "schur_content": "transform",
    "classify": "transform",
    "subset_indices": "transform",
    "SchurResult": "transform",
    "SchurContent": "transform",
    "ClassificationResult": "transform",
    "SchurAmplitudes": "estimators",
    "SchurContentFeatures": "estimators",
    "SchurContentClassifier": "estimators",
}


def __getattr__(name):
    try:
        module_name = _LAZY[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    import importlib

    module = importlib.import_module(f".{module_name or name}", __name__)
    attr = module if module_name is None else getattr(module, name)
    globals()[name] = attr
    return attr


def __dir__():
    return sorted(set(globals()) | set(_LAZY))


__all__ = [
    "CharacterTable",
    "character_table",
    "character_value",
    "enumerate_partitions",
    "hook_length_dimension",
    "schur_functor_dimension",
    "SchurTransformError",
    "DataError",
    "ResourceBudgetError",
    "InvariantViolationError",
    "build_projectors",
    "load_or_build_projectors",
    "projector",
    "verify_projectors",
    "ProjectorBundle",
    "DataSeries",
    "as_series",
    "center",
    "sample_covariance_tensor",
    "typed_covariance_tensor",
    "CovarianceTensor",
    "schur_transform",
    "schur_content",
    "classify",
    "subset_indices",
    "SchurResult",
    "SchurContent",
    "ClassificationResult",
    "SchurAmplitudes",
    "SchurContentFeatures",
    "SchurContentClassifier",
]
