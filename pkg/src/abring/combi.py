"""Stirling numbers and closed forms for the Epi<=d hom-set matrix."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .ratmat import RatMatrix

DEFAULT_BOUND = 12


@dataclass(frozen=True)
class StirlingTables:
    """``s1[i][j]`` signed first kind, ``s2[i][j]`` second kind, ``0 <= j <= i <= bound``."""

    bound: int
    s1: tuple[tuple[int, ...], ...]
    s2: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def stirling_tables(bound: int = DEFAULT_BOUND) -> StirlingTables:
    if bound < 0:
        raise ValueError("bound must be >= 0")
    s1 = [[1]]
    s2 = [[1]]
    for i in range(1, bound + 1):
        p1, p2 = s1[-1] + [0], s2[-1] + [0]
        # s(i,j) = s(i-1,j-1) - (i-1) s(i-1,j);  S(i,j) = S(i-1,j-1) + j S(i-1,j)
        s1.append([(p1[j - 1] if j else 0) - (i - 1) * p1[j] for j in range(i + 1)])
        s2.append([(p2[j - 1] if j else 0) + j * p2[j] for j in range(i + 1)])
    return StirlingTables(bound, tuple(map(tuple, s1)), tuple(map(tuple, s2)))


def _tables_for(n: int) -> StirlingTables:
    return stirling_tables(max(DEFAULT_BOUND, n))


def stirling1(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("negative argument")
    if k > n:
        return 0
    return _tables_for(n).s1[n][k]


def stirling2(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("negative argument")
    if k > n:
        return 0
    return _tables_for(n).s2[n][k]


def surj_count(i: int, j: int) -> int:
    """Number of surjections from an ``i``-set onto a ``j``-set."""
    if i < 0 or j < 0:
        raise ValueError("negative argument")
    return factorial(j) * stirling2(i, j)


def epi_hom_closed_form(d: int) -> RatMatrix:
    if d < 1:
        raise ValueError("d must be >= 1")
    return RatMatrix.from_rows([[surj_count(i, j) for j in range(1, d + 1)]
                                for i in range(1, d + 1)])


def epi_inverse_last_row(d: int) -> list[Fraction]:
    if d < 1:
        raise ValueError("d must be >= 1")
    return [Fraction(stirling1(d, k), factorial(d)) for k in range(1, d + 1)]
