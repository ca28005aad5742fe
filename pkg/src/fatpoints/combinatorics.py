"""Monomials, derivative multi-indices, subsets and binomials."""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations
from typing import Iterator

ExponentVector = tuple[int, ...]


def binomial(a: int, b: int) -> int:
    """C(a, b), zero whenever a < b (negative a included)."""
    if b < 0:
        raise ValueError("b must be nonnegative")
    if a < b:
        return 0
    return math.comb(a, b)


def _compositions(total: int, parts: int) -> Iterator[ExponentVector]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def monomials(n: int, d: int) -> tuple[ExponentVector, ...]:
    """Exponent vectors of degree-d monomials in x_0..x_n.

    Order: lexicographically decreasing exponent vectors, i.e.
    x_0^d, x_0^(d-1) x_1, ..., x_n^d.  Every vector has the same degree, so
    this is graded-lex with x_0 > x_1 > ... > x_n.  The order indexes matrix
    columns and must not change.
    """
    if n < 0 or d < 0:
        raise ValueError("need n >= 0 and d >= 0")
    return tuple(_compositions(d, n + 1))


def derivative_multiindices(n: int, k: int) -> tuple[ExponentVector, ...]:
    """Multi-indices of total order k in n+1 variables (same order as monomials)."""
    return monomials(n, k)


def subsets(s: int, kmin: int, kmax: int) -> Iterator[tuple[int, ...]]:
    """Index subsets of {1..s} with size in [kmin, kmax], by size then lex."""
    if not 0 <= kmin <= kmax <= s:
        raise ValueError("need 0 <= kmin <= kmax <= s")
    for k in range(kmin, kmax + 1):
        yield from combinations(range(1, s + 1), k)


def falling_factorial(e: int, a: int) -> int:
    """e (e-1) ... (e-a+1); zero when a > e."""
    if a > e:
        return 0
    out = 1
    for i in range(a):
        out *= e - i
    return out
