"""Exact symmetric-group characters via the border-strip recursion.

Character values are integers and are computed without any floating point.
Tables are built once per n, validated against the orthogonality relations
at construction time, and cached behind a lock so concurrent readers share
a single immutable object.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import cache

from . import partitions as pt
from .exceptions import InvariantViolationError


def character_value(partition, cycle_type) -> int:
    """Character of the irreducible labelled by ``partition`` on a class.

    Both arguments are partitions of the same n.  Values for a permutation
    and its inverse coincide (the class of the inverse has the same cycle
    type), so no inversion argument is needed anywhere.
    """
    lam = pt.check_partition(partition)
    cyc = pt.check_partition(cycle_type)
    if sum(lam) != sum(cyc):
        raise ValueError(
            f"partition {lam} and cycle type {cyc} belong to different symmetric groups"
        )
    return _strip_recursion(lam, tuple(sorted(cyc, reverse=True)))


@cache
def _strip_recursion(lam, cyc) -> int:
    # Remove a border strip of the first cycle length from lam in every
    # legal way; signs alternate with the strip height.
    if not cyc:
        return 1
    size, rest = cyc[0], cyc[1:]
    total = 0
    for reduced, sign in _border_strip_removals(lam, size):
        total += sign * _strip_recursion(reduced, rest)
    return total


def _border_strip_removals(lam, size):
    """All shapes obtained by removing one border strip of the given size.

    Works on the set of first-column hook lengths (beta numbers): removing
    a strip of length t is moving one beta number down by t into a free
    slot, and the sign is (-1)^(number of beta numbers jumped over).
    """
    m = len(lam)
    beta = [lam[i] + (m - 1 - i) for i in range(m)]
    beta_set = set(beta)
    out = []
    for b in beta:
        nb = b - size
        if nb < 0 or nb in beta_set:
            continue
        leg = sum(1 for x in beta if nb < x < b)
        new_beta = sorted((x for x in beta if x != b), reverse=True)
        new_beta.append(nb)
        new_beta.sort(reverse=True)
        parts = tuple(new_beta[i] - (m - 1 - i) for i in range(m))
        out.append((tuple(p for p in parts if p > 0), -1 if leg % 2 else 1))
    return out


@dataclass(frozen=True)
class CharacterTable:
    """Full integer character table of the symmetric group on n points.

    Rows are indexed by partitions, columns by cycle types, both in the
    canonical decreasing lexicographic order.  ``values[i][j]`` is the
    character of the irreducible ``partitions[i]`` on the class
    ``cycle_types[j]``.
    """

    n: int
    partitions: tuple[tuple[int, ...], ...]
    cycle_types: tuple[tuple[int, ...], ...]
    class_sizes: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]

    def value(self, partition, cycle_type) -> int:
        i = self.partitions.index(pt.check_partition(partition, self.n))
        j = self.cycle_types.index(pt.check_partition(cycle_type, self.n))
        return self.values[i][j]

    def row(self, partition) -> tuple[int, ...]:
        return self.values[self.partitions.index(pt.check_partition(partition, self.n))]

    @property
    def identity_index(self) -> int:
        return self.cycle_types.index((1,) * self.n)


_TABLES: dict[int, CharacterTable] = {}
_TABLE_LOCK = threading.Lock()


def character_table(n, *, limit: int | None = pt.DEFAULT_N_MAX) -> CharacterTable:
    """Build (or fetch the cached) character table of S_n, validated exactly."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if limit is not None and n > limit:
        raise ValueError(f"n={n} exceeds the configured limit {limit}")
    table = _TABLES.get(n)
    if table is None:
        with _TABLE_LOCK:
            table = _TABLES.get(n)
            if table is None:
                table = _build_table(n)
                _TABLES[n] = table
    return table


def _build_table(n) -> CharacterTable:
    parts = tuple(pt.enumerate_partitions(n, limit=None))
    sizes = tuple(pt.class_size(c) for c in parts)
    values = tuple(
        tuple(character_value(lam, cyc) for cyc in parts) for lam in parts
    )
    table = CharacterTable(
        n=n, partitions=parts, cycle_types=parts, class_sizes=sizes, values=values
    )
    _validate_table(table)
    return table


def _validate_table(table) -> None:
    n = table.n
    fact = math.factorial(n)
    ident = table.identity_index
    for lam, row in zip(table.partitions, table.values):
        if row[ident] != pt.hook_length_dimension(lam):
            raise InvariantViolationError(
                f"character table S_{n}: identity value of {lam} is {row[ident]}, "
                f"expected the hook length dimension {pt.hook_length_dimension(lam)}"
            )
    # first orthogonality: rows are orthogonal with weight |class|/n!
    for i, ri in enumerate(table.values):
        for j in range(i, len(table.values)):
            rj = table.values[j]
            dot = sum(s * a * b for s, a, b in zip(table.class_sizes, ri, rj))
            expected = fact if i == j else 0
            if dot != expected:
                raise InvariantViolationError(
                    f"character table S_{n}: row orthogonality fails for "
                    f"{table.partitions[i]}, {table.partitions[j]}"
                )
    # second orthogonality: columns are orthogonal with the centralizer order
    for a, ca in enumerate(table.cycle_types):
        for b in range(a, len(table.cycle_types)):
            dot = sum(row[a] * row[b] for row in table.values)
            expected = pt.centralizer_order(ca) if a == b else 0
            if dot != expected:
                raise InvariantViolationError(
                    f"character table S_{n}: column orthogonality fails for "
                    f"{ca}, {table.cycle_types[b]}"
                )
