"""Sums and zips of multisets, and the graded multiplication.

The binary operations all follow the same recipe: arrange the multisets
into tuples, perform the corresponding list operation (concatenation or
positionwise zip), and accumulate back.  The pointwise count arithmetic
gives the same kernels in closed form; agreement between the two is
part of the law suite.
"""

from __future__ import annotations

from functools import cache

from .core import (
    FinSet,
    Kernel,
    Label,
    kernel_compose_all,
    kernel_from_function,
    kernel_tensor,
    power_finset,
    tensor_finset,
    tuple_of,
    untuple,
)
from .multisets import Multiset, acc_kernel, arr_kernel, mspace


@cache
def concat_iso(X: FinSet, K: int, L: int) -> Kernel:
    """The concatenation bijection X^K (x) X^L -> X^{K+L}."""
    dom = tensor_finset(power_finset(X, K), power_finset(X, L))

    def cat(p: Label) -> Label:
        a, b = p
        return untuple(K + L, tuple_of(K, a) + tuple_of(L, b))

    return kernel_from_function(dom, power_finset(X, K + L), cat)


@cache
def stack_iso(X: FinSet, K: int, L: int) -> Kernel:
    """The K-fold concatenation bijection (X^L)^K -> X^{K*L}."""
    dom = power_finset(power_finset(X, L), K)

    def flatten(t: Label) -> Label:
        coords = tuple_of(K, t)
        flat: tuple[Label, ...] = ()
        for c in coords:
            flat += tuple_of(L, c)
        return untuple(K * L, flat)

    return kernel_from_function(dom, power_finset(X, K * L), flatten)


@cache
def zip_iso(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """The positionwise pairing bijection X^K (x) Y^K -> (X (x) Y)^K."""
    dom = tensor_finset(power_finset(X, K), power_finset(Y, K))
    cod = power_finset(tensor_finset(X, Y), K)

    def zipped(p: Label) -> Label:
        a, b = p
        return untuple(K, tuple(zip(tuple_of(K, a), tuple_of(K, b))))

    return kernel_from_function(dom, cod, zipped)


def msum(phi: Multiset, psi: Multiset) -> Multiset:
    """Pointwise sum of two multisets over the same base."""
    if phi.base != psi.base:
        raise ValueError("multiset sum needs a common base")
    return Multiset(phi.base, tuple(a + b for a, b in zip(phi.counts, psi.counts)))


@cache
def msum_kernel(X: FinSet, K: int, L: int) -> Kernel:
    """Multiset addition as a deterministic kernel M[K](X) (x) M[L](X) -> M[K+L](X)."""
    dom = tensor_finset(mspace(X, K), mspace(X, L))
    return kernel_from_function(dom, mspace(X, K + L), lambda p: msum(p[0], p[1]))


@cache
def mzip_kernel(X: FinSet, Y: FinSet, K: int) -> Kernel:
    """Multizip: couple two equal-size multisets by a uniformly arranged pairing.

    Computed as the composite accumulate . zip . (arrange (x) arrange);
    no closed form is used.
    """
    return kernel_compose_all(
        acc_kernel(tensor_finset(X, Y), K),
        zip_iso(X, Y, K),
        kernel_tensor(arr_kernel(X, K), arr_kernel(Y, K)),
    )


@cache
def ksum_kernel(X: FinSet, K: int, L: int) -> Kernel:
    """The K-fold iterated sum (M[L](X))^K -> M[K*L](X)."""
    dom = power_finset(mspace(X, L), K)
    cod = mspace(X, K * L)
    empty = Multiset(X, (0,) * len(X))

    def total(t: Label) -> Label:
        out = empty
        for m in tuple_of(K, t):
            out = msum(out, m)
        return out

    return kernel_from_function(dom, cod, total)


@cache
def mu_kernel(X: FinSet, K: int, L: int) -> Kernel:
    """Graded multiplication M[K](M[L](X)) -> M[K*L](X).

    An outer multiset of inner multisets flattens to the
    multiplicity-weighted pointwise sum of its inner multisets.
    """
    dom = mspace(mspace(X, L), K)
    cod = mspace(X, K * L)

    def flatten(outer: Label) -> Label:
        counts = [0] * len(X)
        for inner, c in outer.items():  # type: ignore[union-attr]
            for i, v in enumerate(inner.counts):
                counts[i] += c * v
        return Multiset(X, tuple(counts))

    return kernel_from_function(dom, cod, flatten)
