"""Integer partitions and the two classical dimension formulas.

Partitions are plain tuples of non-increasing positive integers.  The same
tuples double as cycle types: the multiset of cycle lengths of a permutation
of n points, fixed points included as parts equal to 1.

Every function here works in exact integer arithmetic.  The canonical
enumeration order used throughout the package is decreasing lexicographic,
so (n) comes first and (1, ..., 1) last.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import cache

# Combinatorial guard: enumeration and the n!-sized loops downstream stay
# comfortable up to here.  Callers may pass a larger limit explicitly.
DEFAULT_N_MAX = 8


def check_partition(parts, n=None) -> tuple[int, ...]:
    """Validate and normalize a partition, returning a tuple of ints.

    Raises ValueError if any part is < 1, if parts increase, or if the sum
    differs from ``n`` when ``n`` is given.
    """
    try:
        t = tuple(int(p) for p in parts)
    except (TypeError, ValueError):
        raise ValueError(f"not a partition: {parts!r}") from None
    if any(p < 1 for p in t):
        raise ValueError(f"partition parts must be positive: {parts!r}")
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"partition parts must be non-increasing: {parts!r}")
    if n is not None and sum(t) != n:
        raise ValueError(f"expected a partition of {n}, got {parts!r}")
    return t


def enumerate_partitions(n, *, limit: int | None = DEFAULT_N_MAX) -> list[tuple[int, ...]]:
    """All partitions of n in decreasing lexicographic order."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if limit is not None and n > limit:
        raise ValueError(f"n={n} exceeds the configured limit {limit}")
    return list(_partitions(n, n))


@cache
def _partitions(n, max_part) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        out.extend((first, *rest) for rest in _partitions(n - first, first))
    return tuple(out)


def conjugate(partition) -> tuple[int, ...]:
    """Transpose of the Young diagram."""
    lam = check_partition(partition)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def cycle_type_of(perm) -> tuple[int, ...]:
    """Cycle type of a permutation given as a tuple of 0-based images."""
    images = tuple(perm)
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm!r}")
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def centralizer_order(cycle_type) -> int:
    """Order of the centralizer of the class:  prod_l l^{m_l} * m_l!."""
    c = check_partition(cycle_type)
    z = 1
    for length, mult in Counter(c).items():
        z *= length**mult * math.factorial(mult)
    return z


def class_size(cycle_type) -> int:
    """Number of permutations with the given cycle type."""
    c = check_partition(cycle_type)
    return math.factorial(sum(c)) // centralizer_order(c)


def hook_lengths(partition) -> list[list[int]]:
    lam = check_partition(partition)
    conj = conjugate(lam)
    return [
        [lam[i] - j + conj[j] - i - 1 for j in range(lam[i])]
        for i in range(len(lam))
    ]


def hook_length_dimension(partition) -> int:
    """Number of standard Young tableaux of the shape.

    This is the dimension of the symmetric-group irreducible attached to
    the partition:  n! divided by the product of all hook lengths.
    """
    lam = check_partition(partition)
    n = sum(lam)
    denom = math.prod(h for row in hook_lengths(lam) for h in row)
    num = math.factorial(n)
    if num % denom:
        raise ArithmeticError(f"hook product does not divide {n}! for {lam}")
    return num // denom


def schur_functor_dimension(partition, k) -> int:
    """Dimension of the Schur functor applied to a k-dimensional space.

    Hook content formula: the product over cells (i, j) of
    (k + j - i) / hook(i, j).  Zero exactly when the diagram has more than
    k rows.
    """
    lam = check_partition(partition)
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if len(lam) > k:
        return 0
    hooks = hook_lengths(lam)
    num = 1
    den = 1
    for i, row in enumerate(hooks):
        for j, h in enumerate(row):
            num *= k + j - i
            den *= h
    if num % den:
        raise ArithmeticError(f"content product does not divide hooks for {lam}, k={k}")
    return num // den
