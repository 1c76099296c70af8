"""Fixed-size multisets as concrete quotients of tuple powers.

``M[K](X)`` is materialised as a carrier of count vectors over the base
set, enumerated in ascending order of their canonical representative
words (equivalently: count vectors in descending lexicographic order,
so multisets concentrated on earlier base elements come first).

The accumulation map ``acc`` sends a tuple to its count vector; every
map *out of* the quotient is built by sending each multiset through its
canonical representative tuple, and the fact that this is well defined
is checked by the law suite rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterator, Sequence

from .core import (
    Dist,
    FinSet,
    Kernel,
    Label,
    ZERO,
    _guard_size,
    kernel_compose_all,
    kernel_from_function,
    kernel_from_rows,
    kernel_power,
    power_finset,
    tuple_of,
    untuple,
)


@dataclass(frozen=True)
class Multiset:
    """A size-K multiset over a base FinSet, stored as a count vector."""

    base: FinSet
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != len(self.base):
            raise ValueError("need one count per base element")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @property
    def size(self) -> int:
        return sum(self.counts)

    def count(self, x: Label) -> int:
        return self.counts[self.base.index[x]]

    def items(self) -> Iterator[tuple[Label, int]]:
        """Nonzero (label, count) pairs in base order."""
        for x, c in zip(self.base, self.counts):
            if c:
                yield x, c

    def minus(self, x: Label) -> "Multiset":
        """Remove one occurrence of x; requires count(x) > 0."""
        i = self.base.index[x]
        if self.counts[i] == 0:
            raise ValueError(f"cannot remove {x!r}: count is zero")
        return Multiset(self.base, self.counts[:i] + (self.counts[i] - 1,) + self.counts[i + 1 :])

    def word(self) -> tuple[Label, ...]:
        """The canonical representative: each label repeated, in base order."""
        out: list[Label] = []
        for x, c in zip(self.base, self.counts):
            out.extend([x] * c)
        return tuple(out)

    def __repr__(self) -> str:
        body = "+".join(f"{c}|{x}|" for x, c in self.items())
        return body or "0"


def acc_of_seq(X: FinSet, seq: Sequence[Label]) -> Multiset:
    """Count the occurrences of each base element in the sequence."""
    counts = [0] * len(X)
    for x in seq:
        counts[X.index[x]] += 1
    return Multiset(X, tuple(counts))


def _count_vectors(n: int, K: int) -> Iterator[tuple[int, ...]]:
    # First coordinate descending, so representative words come out in
    # ascending lexicographic order over the base.
    if n == 0:
        if K == 0:
            yield ()
        return
    for c in range(K, -1, -1):
        for rest in _count_vectors(n - 1, K - c):
            yield (c,) + rest


@dataclass(frozen=True)
class MultisetSpace:
    """The enumerated carrier of all size-K multisets over a base."""

    base: FinSet
    size: int
    finset: FinSet

    def index(self, m: Multiset) -> int:
        return self.finset.index[m]

    def __len__(self) -> int:
        return len(self.finset)

    def __iter__(self) -> Iterator[Multiset]:
        return iter(self.finset)  # type: ignore[arg-type]


@cache
def _multiset_space_cached(X: FinSet, K: int) -> MultisetSpace:
    elems = tuple(Multiset(X, v) for v in _count_vectors(len(X), K))
    return MultisetSpace(X, K, FinSet(elems))


def multiset_space(X: FinSet, K: int) -> MultisetSpace:
    """All size-K multisets over X; M[0](X) is a singleton, M[K](0) empty for K > 0."""
    if K < 0:
        raise ValueError("multiset size must be nonnegative")
    if len(X) > 0:
        _guard_size(math.comb(len(X) + K - 1, K))
    return _multiset_space_cached(X, K)


def mspace(X: FinSet, K: int) -> FinSet:
    """Shorthand for the carrier FinSet of M[K](X)."""
    return multiset_space(X, K).finset


@cache
def acc_kernel(X: FinSet, K: int) -> Kernel:
    """The accumulation quotient map X^K -> M[K](X)."""
    M = mspace(X, K)
    return kernel_from_function(power_finset(X, K), M, lambda t: acc_of_seq(X, tuple_of(K, t)))


@cache
def section_kernel(X: FinSet, K: int) -> Kernel:
    """The canonical section M[K](X) -> X^K picking the representative word."""
    return kernel_from_function(mspace(X, K), power_finset(X, K), lambda m: untuple(K, m.word()))


def _arrangements(m: Multiset) -> Iterator[tuple[Label, ...]]:
    # Distinct rearrangements of the representative word, generated
    # recursively so no dedup pass is needed.
    def go(counts: list[int], remaining: int) -> Iterator[tuple[Label, ...]]:
        if remaining == 0:
            yield ()
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                for rest in go(counts, remaining - 1):
                    yield (m.base.elements[i],) + rest
                counts[i] += 1

    yield from go(list(m.counts), m.size)


@cache
def arr_kernel(X: FinSet, K: int) -> Kernel:
    """Arrangement: each multiset goes uniformly to its distinct orderings."""
    P = power_finset(X, K)
    rows = []
    for m in multiset_space(X, K):
        w = Fraction(math.prod(math.factorial(c) for c in m.counts), math.factorial(K))
        rows.append(Dist(P, tuple((untuple(K, t), w) for t in _arrangements(m))))
    return kernel_from_rows(mspace(X, K), P, rows)


@cache
def perm_kernel(X: FinSet, K: int) -> Kernel:
    """Uniform rearrangement of a tuple: the mixture of all K! permutation maps.

    Computed by tallying (each tuple goes uniformly to the distinct
    rearrangements of itself); agreement with the literal convex sum
    over the symmetric group is one of the registered laws.
    """
    P = power_finset(X, K)
    arr = arr_kernel(X, K)
    space = multiset_space(X, K)
    rows = [arr.rows[space.index(acc_of_seq(X, tuple_of(K, t)))] for t in P]
    return kernel_from_rows(P, P, rows)


@cache
def epsilon_kernel(X: FinSet, K: int) -> Kernel:
    """Pick one coordinate uniformly; defined for K >= 1."""
    if K < 1:
        raise ValueError("coordinate sampling needs K >= 1")
    P = power_finset(X, K)
    w = Fraction(1, K)
    rows = []
    for t in P:
        out: dict[Label, Fraction] = {}
        for c in tuple_of(K, t):
            out[c] = out.get(c, ZERO) + w
        rows.append(Dist(X, tuple(out.items())))
    return kernel_from_rows(P, X, rows)


@cache
def flrn_kernel(X: FinSet, K: int) -> Kernel:
    """Frequentist learning: normalise a multiset to its relative frequencies."""
    if K < 1:
        raise ValueError("frequency normalisation needs K >= 1")
    rows = []
    for m in multiset_space(X, K):
        rows.append(Dist(X, tuple((x, Fraction(c, K)) for x, c in m.items())))
    return kernel_from_rows(mspace(X, K), X, rows)


def drop_kernel(X: FinSet, K: int, i: int) -> Kernel:
    """Delete the i-th coordinate (1-indexed) of X^{K+1}."""
    if not 1 <= i <= K + 1:
        raise ValueError(f"drop index {i} out of range 1..{K + 1}")

    def drop(t: Label) -> Label:
        coords = tuple_of(K + 1, t)
        return untuple(K, coords[: i - 1] + coords[i:])

    return kernel_from_function(power_finset(X, K + 1), power_finset(X, K), drop)


@cache
def del_kernel(X: FinSet, K: int) -> Kernel:
    """Delete one uniformly chosen coordinate: X^{K+1} -> X^K."""
    Pin = power_finset(X, K + 1)
    Pout = power_finset(X, K)
    w = Fraction(1, K + 1)
    rows = []
    for t in Pin:
        coords = tuple_of(K + 1, t)
        out: dict[Label, Fraction] = {}
        for i in range(K + 1):
            y = untuple(K, coords[:i] + coords[i + 1 :])
            out[y] = out.get(y, ZERO) + w
        rows.append(Dist(Pout, tuple(out.items())))
    return kernel_from_rows(Pin, Pout, rows)


@cache
def dd_kernel(X: FinSet, K: int) -> Kernel:
    """Draw-and-delete: remove one uniformly drawn element from a size-K+1 urn."""
    Min = mspace(X, K + 1)
    Mout = mspace(X, K)
    rows = []
    for m in multiset_space(X, K + 1):
        items = tuple((m.minus(x), Fraction(c, K + 1)) for x, c in m.items())
        rows.append(Dist(Mout, items))
    return kernel_from_rows(Min, Mout, rows)


@cache
def mset_map(f: Kernel, K: int) -> Kernel:
    """The functorial action M[K](f): push a multiset through K copies of f.

    Built as the mediating map of the quotient: take the canonical
    representative, run f on every position independently, accumulate.
    """
    return kernel_compose_all(
        acc_kernel(f.codomain, K), kernel_power(f, K), section_kernel(f.domain, K)
    )
