import math

import numpy as np
import pytest
from scipy import sparse

from schurtransform import action, partitions as pt
from schurtransform.exceptions import InvariantViolationError, ResourceBudgetError

import oracles


def test_transposition_matrix_pinned_layout():
    # the row of e_{a1} x e_{a2} has its 1 in the column of e_{a2} x e_{a1}
    mat = action.permutation_matrix((1, 0), 2).toarray()
    expected = np.zeros((4, 4), dtype=np.int64)
    expected[0, 0] = expected[3, 3] = 1
    expected[1, 2] = expected[2, 1] = 1
    assert np.array_equal(mat, expected)


def test_identity_matrix():
    mat = action.permutation_matrix((0, 1, 2), 3)
    assert (mat - sparse.identity(27, dtype=np.int64)).count_nonzero() == 0


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_permutation_matrix_matches_dense_oracle(n, k):
    for sigma in oracles.all_permutations(n):
        ours = action.permutation_matrix(sigma, k).toarray()
        assert np.array_equal(ours, oracles.dense_permutation_matrix(sigma, k))


def test_composition_order():
    # the layout convention forces P(sigma) P(tau) = P(tau o sigma)
    rng = np.random.default_rng(7)
    perms = oracles.all_permutations(4)
    for _ in range(20):
        sigma = perms[rng.integers(len(perms))]
        tau = perms[rng.integers(len(perms))]
        left = (action.permutation_matrix(sigma, 2) @ action.permutation_matrix(tau, 2)).toarray()
        right = action.permutation_matrix(action.compose(tau, sigma), 2).toarray()
        assert np.array_equal(left, right)


def test_apply_permutation_agrees_with_matrix():
    rng = np.random.default_rng(3)
    vec = rng.normal(size=27)
    for sigma in oracles.all_permutations(3):
        direct = action.apply_permutation(sigma, 3, vec)
        assert np.array_equal(direct, action.permutation_matrix(sigma, 3) @ vec)


def test_linear_index_round_trip():
    for r in range(27):
        assert action.linear_index(action.index_tuple(r, 3, 3), 3) == r


@pytest.mark.parametrize("n", range(1, 6))
def test_cycle_type_enumeration_counts(n):
    for ct in pt.enumerate_partitions(n):
        perms = list(action.permutations_of_cycle_type(ct))
        assert len(perms) == pt.class_size(ct)
        assert len(set(perms)) == len(perms)
        assert all(pt.cycle_type_of(p) == ct for p in perms)


def test_cycle_type_enumeration_total_n6():
    total = sum(len(list(action.permutations_of_cycle_type(ct))) for ct in pt.enumerate_partitions(6))
    assert total == math.factorial(6)


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (4, 2), (3, 3), (5, 2)])
def test_class_sum_matches_filter_oracle(n, k):
    for ct in pt.enumerate_partitions(n):
        ours = action.class_sum(ct, k).toarray()
        assert np.array_equal(ours, oracles.dense_class_sum(ct, k))


def test_class_sum_row_sums():
    for ct in pt.enumerate_partitions(4):
        mat = action.class_sum(ct, 3)
        sums = np.asarray(mat.sum(axis=1)).ravel()
        assert (sums == pt.class_size(ct)).all()


def test_class_sum_chunked_path_matches_dense():
    # force the sparse accumulation branch and compare against the dense one
    import schurtransform.action as mod

    ct, k = (2, 1), 2  # n=3, dim=8
    expected = action.class_sum(ct, k).toarray()
    old = mod._DENSE_ACCUM_DIM
    mod._DENSE_ACCUM_DIM = 1
    try:
        chunked = action.class_sum(ct, k).toarray()
    finally:
        mod._DENSE_ACCUM_DIM = old
    assert np.array_equal(chunked, expected)


def test_symmetrizer_antisymmetrizer_n2():
    bundle = action.build_projectors(2, 2)
    sym = bundle.numerator((2,)).toarray() / 2.0
    anti = bundle.numerator((1, 1)).toarray() / 2.0
    expected_sym = np.array(
        [[1, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 1]]
    )
    assert np.allclose(sym, expected_sym)
    assert np.allclose(anti, np.eye(4) - expected_sym)


def test_vanishing_projector_is_zero_matrix():
    bundle = action.build_projectors(4, 3)
    num = bundle.numerator((1, 1, 1, 1))
    assert num.count_nonzero() == 0


def test_skip_vanishing_bundle():
    bundle = action.build_projectors(4, 3, skip_vanishing=True)
    assert (1, 1, 1, 1) in bundle.skipped
    assert bundle.numerator((1, 1, 1, 1)).count_nonzero() == 0
    assert np.array_equal(bundle.component((1, 1, 1, 1), np.ones(81)), np.zeros(81))
    report = action.verify_projectors(bundle)
    assert report.passed


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_verify_projectors_passes(n, k):
    report = action.verify_projectors(action.build_projectors(n, k))
    assert report.passed
    names = [c.name for c in report.checks]
    assert names == ["resolution-of-identity", "idempotence", "orthogonality", "trace-dimensions"]


def test_verify_detects_corruption():
    bundle = action.build_projectors(3, 2)
    bad = dict(bundle.numerators)
    first = bundle.partitions[0]
    corrupted = bad[first].copy()
    corrupted[0, 0] += 1
    bad[first] = corrupted
    broken = action.ProjectorBundle(
        n=3, k=2, partitions=bundle.partitions, numerators=bad,
        denominator=bundle.denominator, skipped=bundle.skipped,
    )
    with pytest.raises(InvariantViolationError):
        action.verify_projectors(broken)
    report = action.verify_projectors(broken, raise_on_failure=False)
    assert not report.passed


def test_numerators_are_symmetric():
    bundle = action.build_projectors(4, 2)
    for lam in bundle.partitions:
        num = bundle.numerator(lam)
        assert (num - num.T).count_nonzero() == 0


def test_projectors_commute_with_class_elements():
    bundle = action.build_projectors(3, 2)
    for sigma in oracles.all_permutations(3):
        p = action.permutation_matrix(sigma, 2)
        for lam in bundle.partitions:
            num = bundle.numerator(lam)
            assert ((num @ p) - (p @ num)).count_nonzero() == 0


def test_single_projector_access():
    proj = action.projector((2, 1), 2)
    assert proj.partition == (2, 1)
    assert proj.denominator == 6
    assert proj.dimension == pt.hook_length_dimension((2, 1)) * pt.schur_functor_dimension((2, 1), 2)


def test_component_dimensions_3_3():
    bundle = action.build_projectors(3, 3)
    dims = bundle.component_dimensions()
    assert dims == {(3,): 10, (2, 1): 16, (1, 1, 1): 1}
    assert sum(dims.values()) == 27


def test_budget_refuses_infeasible_job():
    with pytest.raises(ResourceBudgetError) as err:
        action.check_budget(10, 3, budget_bytes=4 << 30)
    assert err.value.required_bytes > err.value.budget_bytes
    assert "budget" in str(err.value)


def test_budget_allows_small_job():
    needed = action.check_budget(6, 3, budget_bytes=4 << 30)
    assert 0 < needed < (4 << 30)


def test_build_projectors_budget_precedes_range_check():
    # an oversize request reports resources even though n exceeds the n limit
    with pytest.raises(ResourceBudgetError):
        action.build_projectors(10, 3)


def test_build_projectors_range_checks():
    with pytest.raises(ValueError):
        action.build_projectors(9, 1)  # within budget, beyond the n limit
    with pytest.raises(ValueError):
        action.build_projectors(2, 5)  # k above the k limit
    assert action.build_projectors(2, 5, k_limit=None).dim == 25


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv(action.BUDGET_ENV_VAR, "1")
    with pytest.raises(ResourceBudgetError):
        action.check_budget(6, 3)
    monkeypatch.setenv(action.BUDGET_ENV_VAR, "zzz")
    with pytest.raises(ValueError):
        action.default_budget_bytes()


def test_k1_projectors():
    bundle = action.build_projectors(4, 1)
    assert bundle.dim == 1
    assert bundle.numerator((4,)).toarray() == [[24]]
    assert bundle.numerator((2, 2)).count_nonzero() == 0


def test_disk_cache_round_trip(tmp_path):
    cache = str(tmp_path / "cache")
    a = action.build_projectors(3, 2)
    action.write_cache(a, cache)
    b = action._read_cache(3, 2, cache)
    assert b is not None
    for lam in a.partitions:
        assert (a.numerator(lam) - b.numerator(lam)).count_nonzero() == 0


def test_disk_cache_detects_tampering(tmp_path):
    cache = str(tmp_path / "cache")
    bundle = action.build_projectors(3, 2)
    action.write_cache(bundle, cache)
    victim = action._cache_path(cache, 3, 2, (2, 1))
    lines = open(victim).read().splitlines()
    head, first = lines[0], lines[1].split()
    first[2] = str(int(first[2]) + 1)
    with open(victim, "w") as fh:
        fh.write("\n".join([head, " ".join(first)] + lines[2:]) + "\n")
    with pytest.raises(InvariantViolationError):
        action._read_cache(3, 2, cache)


def test_load_or_build_uses_memory_cache():
    a = action.load_or_build_projectors(3, 2)
    b = action.load_or_build_projectors(3, 2)
    assert a is b
