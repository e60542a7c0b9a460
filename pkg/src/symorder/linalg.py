"""Exact rank of small rational matrices.

Rows are cleared to integers (multiplying a row by its denominator lcm does
not change the rank) and eliminated with the fraction-free Bareiss scheme,
so every intermediate value is an integer minor of the cleared matrix and
the arithmetic stays exact with no rational blowup.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .weyl import Rational


def _cleared_rows(rows: Sequence[Sequence[Rational | int]]) -> list[list[int]]:
    out = []
    for row in rows:
        fracs = [Fraction(v) for v in row]
        scale = lcm(*(f.denominator for f in fracs)) if fracs else 1
        out.append([int(f * scale) for f in fracs])
    return out


def exact_rank(rows: Sequence[Sequence[Rational | int]]) -> int:
    """Rank of the matrix with the given rows, computed exactly."""
    m = _cleared_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    if any(len(r) != ncols for r in m):
        raise ValueError("rows have unequal lengths")
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                # Exact by Sylvester's identity: the quotient is an integer
                # minor of the cleared matrix.
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank
