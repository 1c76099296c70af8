"""Splitting sequences and multisets over a two-part alphabet.

A sequence over ``X + Y`` is equivalent to: how many entries came from
``X``, which positions they sat in (the interleaving pattern), and the
two subsequences.  Patterns are indexed in ascending lexicographic
order of their bit strings (entry 1 marking an ``X`` position, leftmost
position most significant), which pins the copower blocks down to a
concrete bijection.  Collapsing the pattern information accumulates the
two halves and yields the multiset split isomorphism

    M[K](X + Y)  ~=  (+)_i  M[i](X) (x) M[K-i](Y).
"""

from __future__ import annotations

import itertools
import math
from functools import cache

from .core import (
    FinSet,
    Kernel,
    Label,
    Tagged,
    coproduct_finset,
    kernel_from_function,
    power_finset,
    tensor_finset,
    tuple_of,
    untuple,
)
from .multisets import Multiset, acc_of_seq, mspace


def multichoose(n: int, K: int) -> int:
    """The number of size-K multisets over an n-element set: C(n+K-1, K)."""
    if n < 0 or K < 0:
        raise ValueError("multichoose takes naturals")
    if n == 0:
        return 1 if K == 0 else 0
    return math.comb(n + K - 1, K)


@cache
def patterns(K: int, i: int) -> tuple[tuple[int, ...], ...]:
    """All K-bit patterns with i ones, ascending as bit strings."""
    return tuple(bits for bits in itertools.product((0, 1), repeat=K) if sum(bits) == i)


@cache
def lsplit_space(X: FinSet, Y: FinSet, K: int) -> FinSet:
    """The codomain of the list split: per part size i, C(K,i) copies of X^i (x) Y^{K-i}."""
    blocks = []
    for i in range(K + 1):
        copies = coproduct_finset(
            tuple(tensor_finset(power_finset(X, i), power_finset(Y, K - i)) for _ in patterns(K, i))
        )
        blocks.append(copies)
    return coproduct_finset(tuple(blocks))


@cache
def lsplit_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Classify a sequence over X + Y by part size, pattern, and subsequences."""
    XY = coproduct_finset((X, Y))
    dom = power_finset(XY, K)
    cod = lsplit_space(X, Y, K)

    def split(t: Label) -> Label:
        coords = tuple_of(K, t)
        bits = tuple(1 if c.tag == 0 else 0 for c in coords)
        i = sum(bits)
        j = patterns(K, i).index(bits)
        xs = tuple(c.value for c in coords if c.tag == 0)
        ys = tuple(c.value for c in coords if c.tag == 1)
        return Tagged(i, Tagged(j, (untuple(i, xs), untuple(K - i, ys))))

    return kernel_from_function(dom, cod, split)


@cache
def lsplit_inv_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Reconstitute the interleaved sequence from part size, pattern, and halves."""
    XY = coproduct_finset((X, Y))
    dom = lsplit_space(X, Y, K)
    cod = power_finset(XY, K)

    def weave(z: Label) -> Label:
        i, inner = z.tag, z.value
        bits = patterns(K, i)[inner.tag]
        xs = list(tuple_of(i, inner.value[0]))
        ys = list(tuple_of(K - i, inner.value[1]))
        coords = tuple(Tagged(0, xs.pop(0)) if b else Tagged(1, ys.pop(0)) for b in bits)
        return untuple(K, coords)

    return kernel_from_function(dom, cod, weave)


@cache
def msplit_space(X: FinSet, Y: FinSet, K: int) -> FinSet:
    """The split-multiset carrier: per part size i, M[i](X) (x) M[K-i](Y)."""
    return coproduct_finset(
        tuple(tensor_finset(mspace(X, i), mspace(Y, K - i)) for i in range(K + 1))
    )


@cache
def accs_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Accumulate both halves of every split block, forgetting the pattern."""
    dom = lsplit_space(X, Y, K)
    cod = msplit_space(X, Y, K)

    def accumulate(z: Label) -> Label:
        i, inner = z.tag, z.value
        xs, ys = inner.value
        return Tagged(i, (acc_of_seq(X, tuple_of(i, xs)), acc_of_seq(Y, tuple_of(K - i, ys))))

    return kernel_from_function(dom, cod, accumulate)


@cache
def msplit_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Split a multiset over X + Y into its X part and Y part."""
    dom = mspace(coproduct_finset((X, Y)), K)
    cod = msplit_space(X, Y, K)

    def split(m: Label) -> Label:
        xcounts = [0] * len(X)
        ycounts = [0] * len(Y)
        for lab, c in m.items():
            if lab.tag == 0:
                xcounts[X.index[lab.value]] += c
            else:
                ycounts[Y.index[lab.value]] += c
        i = sum(xcounts)
        return Tagged(i, (Multiset(X, tuple(xcounts)), Multiset(Y, tuple(ycounts))))

    return kernel_from_function(dom, cod, split)


@cache
def msplit_inv_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Merge an (X part, Y part) pair back into one multiset over X + Y."""
    XY = coproduct_finset((X, Y))
    dom = msplit_space(X, Y, K)
    cod = mspace(XY, K)

    def merge(z: Label) -> Label:
        mx, my = z.value
        counts = {Tagged(0, x): c for x, c in zip(X, mx.counts)}
        counts.update({Tagged(1, y): c for y, c in zip(Y, my.counts)})
        return Multiset(XY, tuple(counts[lab] for lab in XY))

    return kernel_from_function(dom, cod, merge)
