"""The symmetric group acting on tensor factors, and isotypic projectors.

Basis convention
----------------
V = R^k with basis e_1 .. e_k.  V^(x)n is spanned by e_{a_1} x ... x e_{a_n}
ordered lexicographically by the tuple (a_1, ..., a_n), so the linear index
of a tuple is its base-k value with a_1 most significant.

A permutation sigma moves the i-th tensor factor into slot sigma(i).  The
matrix P(sigma) is laid out with rows indexed by the input basis element and
columns by the output: the row of e_{a_1} x e_{a_2} x ... has its single 1
in the column of the tuple b with b[sigma[i]] = a[i].  With this layout
P(sigma) P(tau) = P(tau o sigma); the order is asserted once at first use.
Class sums are unaffected by the distinction because every conjugacy class
is closed under inversion.

Projector numerators
--------------------
For a partition lam of n,

    Num(lam) = dim(lam) * sum_c  chi_lam(c) * S(c)

over cycle types c, where S(c) sums P(sigma) over the class.  Num(lam) is an
integer matrix and Num(lam) / n! is the projector onto the isotypic
component.  All identity checks on numerators are exact integer statements
and are never skipped.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _lex_permutations

import numpy as np
from scipy import sparse

from . import partitions as pt
from .characters import character_table
from .exceptions import InvariantViolationError, ResourceBudgetError

DEFAULT_BUDGET_BYTES = 4 << 30  # 4 GiB
DEFAULT_K_MAX = 4
BUDGET_ENV_VAR = "SCHURTRANSFORM_BUDGET_MIB"

# accumulate class sums densely below this dimension, in chunked sparse
# batches above it
_DENSE_ACCUM_DIM = 2048
_CHUNK_ENTRIES = 1 << 22

# storage estimates per nonzero, indices included
_CSR_ENTRY_BYTES = 12
_COO_ENTRY_BYTES = 16

# past this n the budget estimator stops enumerating partitions and falls
# back to a dense lower bound (which is always over any sane budget for k>1)
_ESTIMATE_N_CAP = 64


def default_budget_bytes() -> int:
    """Configured budget: the environment override in MiB, else 4 GiB."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET_BYTES
    try:
        mib = int(raw)
        if mib < 1:
            raise ValueError
    except ValueError:
        raise ValueError(
            f"{BUDGET_ENV_VAR} must be a positive integer number of MiB, got {raw!r}"
        ) from None
    return mib << 20


def _check_nk(n, k) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


@lru_cache(maxsize=32)
def _digit_table(n, k) -> np.ndarray:
    """(k^n, n) array: row r holds the base-k digits of r, most significant first."""
    dim = k**n
    idx = np.arange(dim, dtype=np.int64)
    table = np.empty((dim, n), dtype=np.int64)
    for i in range(n):
        table[:, i] = (idx // k ** (n - 1 - i)) % k
    table.setflags(write=False)
    return table


def linear_index(tup, k) -> int:
    """Lexicographic position of a factor tuple (0-based entries)."""
    r = 0
    for d in tup:
        if not 0 <= d < k:
            raise ValueError(f"tuple entry {d} out of range for k={k}")
        r = r * k + d
    return r


def index_tuple(r, n, k) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(r % k)
        r //= k
    return tuple(reversed(out))


def check_permutation(sigma) -> tuple[int, ...]:
    images = tuple(sigma)
    if sorted(images) != list(range(len(images))):
        raise ValueError(f"not a permutation of 0..{len(images) - 1}: {sigma!r}")
    return images


def compose(a, b) -> tuple[int, ...]:
    """(a o b)(i) = a(b(i)): apply b first."""
    return tuple(a[b[i]] for i in range(len(b)))


def inverse(sigma) -> tuple[int, ...]:
    out = [0] * len(sigma)
    for i, s in enumerate(sigma):
        out[s] = i
    return tuple(out)


def permutation_columns(sigma, k) -> np.ndarray:
    """Column index of the single 1 in each row of P(sigma)."""
    sigma = check_permutation(sigma)
    n = len(sigma)
    digits = _digit_table(n, k)
    weights = np.array([k ** (n - 1 - sigma[i]) for i in range(n)], dtype=np.int64)
    return digits @ weights


def permutation_matrix(sigma, k) -> sparse.csr_matrix:
    """P(sigma) as a sparse 0/1 integer matrix of shape (k^n, k^n)."""
    _check_nk(len(tuple(sigma)), k)
    cols = permutation_columns(sigma, k)
    dim = cols.shape[0]
    data = np.ones(dim, dtype=np.int64)
    return sparse.csr_matrix((data, (np.arange(dim), cols)), shape=(dim, dim))


def apply_permutation(sigma, k, vec) -> np.ndarray:
    """P(sigma) @ vec without materializing the matrix."""
    vec = np.asarray(vec)
    cols = permutation_columns(sigma, k)
    if vec.shape[0] != cols.shape[0]:
        raise ValueError(f"vector length {vec.shape[0]} does not match k^n = {cols.shape[0]}")
    return vec[cols]


def permutations_of_cycle_type(cycle_type):
    """Yield every permutation with the given cycle type, each exactly once.

    Enumeration is direct: the cycle through the smallest unplaced point is
    chosen first, which makes each permutation appear once without filtering
    all n!.  Order is deterministic.
    """
    ct = pt.check_partition(cycle_type)
    n = sum(ct)
    perm = [0] * n
    remaining = {}
    for length in ct:
        remaining[length] = remaining.get(length, 0) + 1
    lengths = sorted(remaining)

    def rec(unused):
        if not unused:
            yield tuple(perm)
            return
        leader, rest = unused[0], unused[1:]
        for length in lengths:
            if remaining[length] == 0:
                continue
            remaining[length] -= 1
            if length == 1:
                perm[leader] = leader
                yield from rec(rest)
            else:
                for members in _lex_permutations(rest, length - 1):
                    prev = leader
                    for m in members:
                        perm[prev] = m
                        prev = m
                    perm[prev] = leader
                    taken = set(members)
                    yield from rec([u for u in rest if u not in taken])
            remaining[length] += 1

    yield from rec(list(range(n)))


def class_sum(cycle_type, k) -> sparse.csr_matrix:
    """S(c): the sum of P(sigma) over the conjugacy class, exact int64.

    Every row sum equals the class size; that is checked before returning.
    """
    ct = pt.check_partition(cycle_type)
    n = sum(ct)
    _check_nk(n, k)
    dim = k**n
    digits = _digit_table(n, k)
    rows = np.arange(dim)

    def columns(sigma):
        weights = np.array([k ** (n - 1 - sigma[i]) for i in range(n)], dtype=np.int64)
        return digits @ weights

    if dim <= _DENSE_ACCUM_DIM:
        acc = np.zeros((dim, dim), dtype=np.int64)
        for sigma in permutations_of_cycle_type(ct):
            acc[rows, columns(sigma)] += 1
        mat = sparse.csr_matrix(acc)
    else:
        mat = sparse.csr_matrix((dim, dim), dtype=np.int64)
        pending = []

        def flush():
            nonlocal mat, pending
            if pending:
                r = np.tile(rows, len(pending))
                c = np.concatenate(pending)
                ones = np.ones(r.shape[0], dtype=np.int64)
                mat = mat + sparse.coo_matrix((ones, (r, c)), shape=(dim, dim)).tocsr()
                pending = []

        for sigma in permutations_of_cycle_type(ct):
            pending.append(columns(sigma))
            if len(pending) * dim >= _CHUNK_ENTRIES:
                flush()
        flush()

    size = pt.class_size(ct)
    row_sums = np.asarray(mat.sum(axis=1)).ravel()
    if not (row_sums == size).all():
        raise InvariantViolationError(
            f"class sum for {ct}, k={k}: row sums do not all equal the class size {size}"
        )
    return mat


# --- budget -----------------------------------------------------------------

def estimate_projector_bytes(n, k, *, skip_vanishing=False) -> int:
    """Upper-bound estimate of peak bytes needed to build all numerators.

    Counts the retained numerator matrices (dense-equivalent nonzeros capped
    at min(n!, k^n) per row), the largest single class sum, and the dense
    accumulator when one is used.  Costs nothing to evaluate: no k^n-sized
    object is touched.
    """
    _check_nk(n, k)
    dim = k**n  # exact Python int, safe for any n
    if n > _ESTIMATE_N_CAP:
        return dim * dim * 8 if k > 1 else 1 << 10
    fact = math.factorial(n)
    parts = pt.enumerate_partitions(n, limit=None)
    kept = [
        lam
        for lam in parts
        if not (skip_vanishing and pt.schur_functor_dimension(lam, k) == 0)
    ]
    per_numerator = min(dim, fact) * dim * _CSR_ENTRY_BYTES + (dim + 1) * 8
    numerators = len(kept) * per_numerator
    largest_class = max(pt.class_size(c) for c in parts)
    class_stage = min(largest_class, dim) * dim * _COO_ENTRY_BYTES
    if dim <= _DENSE_ACCUM_DIM:
        class_stage = max(class_stage, dim * dim * 8)
    return numerators + class_stage


def check_budget(n, k, *, budget_bytes=None, skip_vanishing=False) -> int:
    """Raise ResourceBudgetError when the estimate exceeds the budget."""
    budget = default_budget_bytes() if budget_bytes is None else int(budget_bytes)
    required = estimate_projector_bytes(n, k, skip_vanishing=skip_vanishing)
    if required > budget:
        raise ResourceBudgetError(
            f"projector set for n={n}, k={k} needs an estimated "
            f"{_format_bytes(required)} but the budget is {_format_bytes(budget)}; "
            f"raise the budget (--budget / {BUDGET_ENV_VAR}) or reduce n or k",
            required_bytes=required,
            budget_bytes=budget,
        )
    return required


def _format_bytes(num) -> str:
    value = float(num)
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if value < 1024 or unit == "TiB":
            return f"{value:.1f} {unit}" if unit != "B" else f"{int(value)} B"
        value /= 1024.0
    return f"{value:.1f} TiB"


# --- projectors ---------------------------------------------------------------

@dataclass(frozen=True)
class IsotypicProjector:
    """One isotypic projector, stored as integer numerator over n!."""

    partition: tuple[int, ...]
    numerator: sparse.csr_matrix
    denominator: int

    @property
    def matrix(self) -> sparse.csr_matrix:
        return self.numerator.astype(np.float64) / self.denominator

    @property
    def dimension(self) -> int:
        """Trace of the projector: the dimension of the component."""
        return int(self.numerator.diagonal().sum()) // self.denominator


@dataclass(frozen=True)
class ProjectorBundle:
    """The complete projector set for one (n, k).

    ``numerators`` maps each partition of n to its integer numerator matrix;
    partitions whose Schur functor vanishes on R^k may be listed in
    ``skipped`` instead, in which case their component is exactly zero.
    """

    n: int
    k: int
    partitions: tuple[tuple[int, ...], ...]
    numerators: dict
    denominator: int
    skipped: frozenset

    @property
    def dim(self) -> int:
        return self.k**self.n

    def numerator(self, partition) -> sparse.csr_matrix:
        lam = pt.check_partition(partition, self.n)
        if lam in self.skipped:
            return sparse.csr_matrix((self.dim, self.dim), dtype=np.int64)
        return self.numerators[lam]

    def projector(self, partition) -> IsotypicProjector:
        lam = pt.check_partition(partition, self.n)
        return IsotypicProjector(lam, self.numerator(lam), self.denominator)

    def component(self, partition, vec) -> np.ndarray:
        """Num(lam) @ vec / n!, the isotypic component of a coefficient vector."""
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got {vec.shape}")
        lam = pt.check_partition(partition, self.n)
        if lam in self.skipped:
            return np.zeros(self.dim)
        return (self.numerators[lam] @ vec) / self.denominator

    def component_dimensions(self) -> dict:
        out = {}
        for lam in self.partitions:
            if lam in self.skipped:
                out[lam] = 0
            else:
                out[lam] = int(self.numerators[lam].diagonal().sum()) // self.denominator
        return out


_CONVENTION_CHECKED = False


def _assert_composition_convention() -> None:
    """One-time startup check that P(sigma) P(tau) = P(tau o sigma)."""
    global _CONVENTION_CHECKED
    if _CONVENTION_CHECKED:
        return
    sigma, tau, k = (1, 0, 2), (0, 2, 1), 2
    left = (permutation_matrix(sigma, k) @ permutation_matrix(tau, k)).toarray()
    right = permutation_matrix(compose(tau, sigma), k).toarray()
    if not np.array_equal(left, right):
        raise InvariantViolationError(
            "composition convention violated: P(sigma) P(tau) != P(tau o sigma)"
        )
    # and the pinned single-transposition example: the row of e_{a1} x e_{a2}
    # has its 1 in the column of e_{a2} x e_{a1}
    swap = permutation_matrix((1, 0), 2).toarray()
    expected = np.zeros((4, 4), dtype=np.int64)
    for a1 in range(2):
        for a2 in range(2):
            expected[a1 * 2 + a2, a2 * 2 + a1] = 1
    if not np.array_equal(swap, expected):
        raise InvariantViolationError("transposition action does not match the basis layout")
    _CONVENTION_CHECKED = True


def build_projectors(
    n,
    k,
    *,
    budget_bytes=None,
    n_limit: int | None = pt.DEFAULT_N_MAX,
    k_limit: int | None = DEFAULT_K_MAX,
    skip_vanishing=False,
) -> ProjectorBundle:
    """Build all isotypic projector numerators for (n, k).

    The memory estimate is checked against the budget before anything is
    allocated; infeasible jobs fail with a resource report even when n also
    exceeds the combinatorial limit.  The resolution of identity
    sum_lam Num(lam) = n! * I is verified exactly on every build.
    """
    _check_nk(n, k)
    check_budget(n, k, budget_bytes=budget_bytes, skip_vanishing=skip_vanishing)
    if n_limit is not None and n > n_limit:
        raise ValueError(f"n={n} exceeds the configured limit {n_limit}")
    if k_limit is not None and k > k_limit:
        raise ValueError(f"k={k} exceeds the configured limit {k_limit}")
    _assert_composition_convention()

    table = character_table(n, limit=n_limit)
    dim = k**n
    fact = math.factorial(n)
    kept = []
    skipped = []
    for lam in table.partitions:
        if skip_vanishing and pt.schur_functor_dimension(lam, k) == 0:
            skipped.append(lam)
        else:
            kept.append(lam)

    acc = {lam: sparse.csr_matrix((dim, dim), dtype=np.int64) for lam in kept}
    ident = table.identity_index
    for j, ct in enumerate(table.cycle_types):
        s = class_sum(ct, k)
        for lam in kept:
            i = table.partitions.index(lam)
            coeff = table.values[i][ident] * table.values[i][j]
            if coeff:
                acc[lam] = acc[lam] + coeff * s
    numerators = {}
    for lam in kept:
        mat = acc[lam]
        mat.eliminate_zeros()
        mat.sort_indices()
        numerators[lam] = mat

    bundle = ProjectorBundle(
        n=n,
        k=k,
        partitions=table.partitions,
        numerators=numerators,
        denominator=fact,
        skipped=frozenset(skipped),
    )
    _check_resolution_of_identity(bundle)
    return bundle


def _check_resolution_of_identity(bundle) -> None:
    dim = bundle.dim
    total = sparse.csr_matrix((dim, dim), dtype=np.int64)
    for mat in bundle.numerators.values():
        total = total + mat
    expected = bundle.denominator * sparse.identity(dim, dtype=np.int64, format="csr")
    if (total - expected).count_nonzero() != 0:
        raise InvariantViolationError(
            f"resolution of identity failed for n={bundle.n}, k={bundle.k}: "
            f"sum of numerators is not {bundle.denominator} * I"
        )


def projector(partition, k, **kwargs) -> IsotypicProjector:
    """Single isotypic projector; builds (and caches) the full set for its n."""
    lam = pt.check_partition(partition)
    bundle = load_or_build_projectors(sum(lam), k, **kwargs)
    return bundle.projector(lam)


# --- verification -------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    n: int
    k: int
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        for c in self.checks:
            yield f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}"


def _product_overflow_guard(a, b) -> None:
    # bound every intermediate of the integer product; int64 must hold it
    max_a = int(np.abs(a.data).max()) if a.nnz else 0
    col_l1 = abs(b).sum(axis=0)
    max_col = int(np.asarray(col_l1).max()) if b.nnz else 0
    if max_a * max_col >= 2**63:
        raise ValueError(
            "exact product check would overflow 64-bit integers; "
            "reduce n (the identity checks are only supported up to n=9)"
        )


def verify_projectors(bundle, *, raise_on_failure=True) -> VerificationReport:
    """Exact self-checks of a projector set.

    Verifies the resolution of identity, idempotence and mutual
    orthogonality of every pair, and the trace identity
    trace(Num(lam)) = n! * dim_M(lam) * dim_S(lam, k).  All checks run on
    integers; any failure is an invariant violation carrying the offending
    partition(s) unless ``raise_on_failure`` is false.
    """
    checks = []
    dim = bundle.dim
    fact = bundle.denominator
    nums = {lam: bundle.numerator(lam) for lam in bundle.partitions}

    total = sparse.csr_matrix((dim, dim), dtype=np.int64)
    for mat in nums.values():
        total = total + mat
    ident_ok = (total - fact * sparse.identity(dim, dtype=np.int64, format="csr")).count_nonzero() == 0
    checks.append(
        CheckResult(
            "resolution-of-identity",
            ident_ok,
            f"sum of numerators {'==' if ident_ok else '!='} {bundle.n}! * identity",
        )
    )

    idem_bad = []
    orth_bad = []
    for i, lam in enumerate(bundle.partitions):
        a = nums[lam]
        _product_overflow_guard(a, a)
        if ((a @ a) - fact * a).count_nonzero() != 0:
            idem_bad.append(lam)
        for mu in bundle.partitions[i + 1 :]:
            b = nums[mu]
            _product_overflow_guard(a, b)
            if (a @ b).count_nonzero() != 0:
                orth_bad.append((lam, mu))
    checks.append(
        CheckResult(
            "idempotence",
            not idem_bad,
            "Num(lam)^2 == n! * Num(lam) for every lam"
            if not idem_bad
            else f"failed for {idem_bad}",
        )
    )
    checks.append(
        CheckResult(
            "orthogonality",
            not orth_bad,
            "Num(lam) @ Num(mu) == 0 for every pair"
            if not orth_bad
            else f"failed for {orth_bad}",
        )
    )

    trace_bad = []
    for lam in bundle.partitions:
        expected = fact * pt.hook_length_dimension(lam) * pt.schur_functor_dimension(lam, bundle.k)
        if int(nums[lam].diagonal().sum()) != expected:
            trace_bad.append(lam)
    checks.append(
        CheckResult(
            "trace-dimensions",
            not trace_bad,
            "trace(Num(lam)) == n! * dim_M * dim_S for every lam"
            if not trace_bad
            else f"failed for {trace_bad}",
        )
    )

    report = VerificationReport(n=bundle.n, k=bundle.k, checks=tuple(checks))
    if raise_on_failure and not report.passed:
        failed = [c.name for c in checks if not c.passed]
        raise InvariantViolationError(
            f"projector verification failed for n={bundle.n}, k={bundle.k}: "
            + "; ".join(
                c.detail for c in checks if not c.passed
            )
            + f" ({', '.join(failed)})"
        )
    return report


# --- caching ------------------------------------------------------------------

_BUNDLES: dict = {}
_BUNDLE_LOCK = threading.Lock()


def load_or_build_projectors(n, k, *, cache_dir=None, **kwargs) -> ProjectorBundle:
    """Fetch a projector set, preferring memory, then disk, then a build.

    Disk caches are re-verified on load (resolution of identity, exact); a
    cache that fails verification raises instead of being silently used.
    """
    skip = bool(kwargs.get("skip_vanishing", False))
    key = (n, k, skip)
    bundle = _BUNDLES.get(key)
    if bundle is not None:
        if cache_dir is not None:
            _ensure_cached(bundle, cache_dir)
        return bundle
    with _BUNDLE_LOCK:
        bundle = _BUNDLES.get(key)
        if bundle is None:
            if cache_dir is not None:
                bundle = _read_cache(n, k, cache_dir, skip_vanishing=skip)
            if bundle is None:
                bundle = build_projectors(n, k, **kwargs)
            _BUNDLES[key] = bundle
    if cache_dir is not None:
        _ensure_cached(bundle, cache_dir)
    return bundle


def _ensure_cached(bundle, cache_dir) -> None:
    # a memory hit must still leave a disk copy when one was asked for
    missing = any(
        not os.path.exists(_cache_path(cache_dir, bundle.n, bundle.k, lam))
        for lam in bundle.partitions
    )
    if missing:
        write_cache(bundle, cache_dir)


def _cache_path(cache_dir, n, k, lam) -> str:
    name = f"num_n{n}_k{k}_" + "-".join(str(p) for p in lam) + ".txt"
    return os.path.join(cache_dir, name)


def write_cache(bundle, cache_dir) -> None:
    """Write each numerator as a sparse triplet file.

    Format: one header line ``n k partition nnz`` (partition parts joined
    with commas), then one ``row col value`` line per stored entry.
    """
    os.makedirs(cache_dir, exist_ok=True)
    for lam in bundle.partitions:
        mat = bundle.numerator(lam).tocoo()
        path = _cache_path(cache_dir, bundle.n, bundle.k, lam)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            head = ",".join(str(p) for p in lam)
            fh.write(f"{bundle.n} {bundle.k} {head} {mat.nnz}\n")
            for r, c, v in zip(mat.row, mat.col, mat.data):
                fh.write(f"{r} {c} {v}\n")
        os.replace(tmp, path)


def _read_cache(n, k, cache_dir, *, skip_vanishing=False):
    parts = pt.enumerate_partitions(n, limit=None)
    dim = k**n
    numerators = {}
    for lam in parts:
        path = _cache_path(cache_dir, n, k, lam)
        if not os.path.exists(path):
            return None  # incomplete cache: rebuild
        with open(path, encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 4 or int(header[0]) != n or int(header[1]) != k:
                raise InvariantViolationError(f"projector cache header mismatch in {path}")
            if tuple(int(p) for p in header[2].split(",")) != lam:
                raise InvariantViolationError(f"projector cache partition mismatch in {path}")
            nnz = int(header[3])
            rows = np.empty(nnz, dtype=np.int64)
            cols = np.empty(nnz, dtype=np.int64)
            data = np.empty(nnz, dtype=np.int64)
            for idx in range(nnz):
                line = fh.readline().split()
                if len(line) != 3:
                    raise InvariantViolationError(f"truncated projector cache file {path}")
                rows[idx], cols[idx], data[idx] = int(line[0]), int(line[1]), int(line[2])
        numerators[lam] = sparse.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    skipped = []
    if skip_vanishing:
        for lam in parts:
            if pt.schur_functor_dimension(lam, k) == 0:
                numerators.pop(lam)
                skipped.append(lam)
    bundle = ProjectorBundle(
        n=n,
        k=k,
        partitions=tuple(parts),
        numerators=numerators,
        denominator=math.factorial(n),
        skipped=frozenset(skipped),
    )
    try:
        _check_resolution_of_identity(bundle)
    except InvariantViolationError as err:
        raise InvariantViolationError(
            f"projector cache in {cache_dir} failed its integrity check "
            f"(n={n}, k={k}); delete the cached files and rebuild"
        ) from err
    return bundle
