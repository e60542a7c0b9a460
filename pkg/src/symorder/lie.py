"""Lie structure constants and their realization inside the Weyl algebra.

A bracket table C[k][i][j] (the coefficient of the k-th basis element in the
bracket of elements i and j) is valid when it is antisymmetric in (i, j) and
satisfies the quadratic Jacobi constraint.  From a valid table this module
builds:

  * the n x n matrix of linear derivative forms  M[i][j] = sum_k C[i][j,k] d^k,
  * the Bernoulli-weighted embedding  embed(i) = sum_l x_l sum_N c_N (M^N)[l][i]
    with c_N = (-1)^N B_N / N!,  truncated at a chosen d-degree,
  * the commutator residual that measures how far the truncated embedding is
    from sending brackets to commutators (exactly zero for valid tables), and
  * the coefficient family whose generators reproduce the embedding term for
    term (see `symorder.generators`).

Everything is exact; the only cache is the Bernoulli table, filled once under
a lock and safe for concurrent reads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Mapping

from .generators import CoefficientFamily
from .rng import SplitMix64
from .weyl import (
    Rational,
    WeylElement,
    mul,
    truncate,
    weyl_scalar,
    weyl_x,
)

CMatrix = tuple[tuple[WeylElement, ...], ...]


@dataclass(frozen=True)
class Violation:
    """One failed validity check: which identity, at which indices, residual."""

    kind: str  # "antisymmetry" or "jacobi"
    indices: tuple[int, ...]
    residual: Fraction

    def __str__(self) -> str:
        return f"{self.kind} violation at {self.indices}: residual {self.residual}"


class InvalidStructureConstantsError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = ", ".join(str(v) for v in violations[:5])
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        super().__init__(f"invalid structure constants: {lines}{more}")


class StructureConstants:
    """Sparse table C[k][i][j] over exact rationals, 1-based indices."""

    __slots__ = ("n", "_table", "_violations")

    def __init__(self, n: int, entries: Mapping[tuple[int, int, int], Rational | int] | None = None):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        table: dict[tuple[int, int, int], Fraction] = {}
        if entries:
            for (k, i, j), value in entries.items():
                for idx in (k, i, j):
                    if not 1 <= idx <= n:
                        raise IndexError(f"index {(k, i, j)} out of range 1..{n}")
                v = Fraction(value)
                if v:
                    table[(k, i, j)] = v
        self.n = n
        self._table = table
        self._violations: list[Violation] | None = None

    def get(self, k: int, i: int, j: int) -> Fraction:
        return self._table.get((k, i, j), Fraction(0))

    def items(self) -> Iterator[tuple[tuple[int, int, int], Fraction]]:
        return iter(self._table.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return self.n == other.n and self._table == other._table

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StructureConstants(n={self.n}, {len(self._table)} nonzero entries)"

    def validate(self) -> list[Violation]:
        """All antisymmetry and Jacobi violations (empty iff the table is valid).

        Violations are data, not errors; each names the offending index tuple
        and the nonzero residual.  Results are cached (the table is immutable).
        """
        if self._violations is not None:
            return self._violations
        n = self.n
        out: list[Violation] = []
        for k in range(1, n + 1):
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    r = self.get(k, i, j) + self.get(k, j, i)
                    if r:
                        out.append(Violation("antisymmetry", (k, i, j), r))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for l in range(1, n + 1):
                    for m in range(1, n + 1):
                        r = Fraction(0)
                        for s in range(1, n + 1):
                            r += (
                                self.get(s, i, j) * self.get(m, s, l)
                                + self.get(s, j, l) * self.get(m, s, i)
                                + self.get(s, l, i) * self.get(m, s, j)
                            )
                        if r:
                            out.append(Violation("jacobi", (i, j, l, m), r))
        self._violations = out
        return out

    def is_valid(self) -> bool:
        return not self.validate()

    def require_valid(self) -> None:
        violations = self.validate()
        if violations:
            raise InvalidStructureConstantsError(violations)


def validate(sc: StructureConstants) -> list[Violation]:
    return sc.validate()


# -- the matrix of linear derivative forms -----------------------------------


def cmatrix(sc: StructureConstants) -> CMatrix:
    """Matrix M with M[i][j] = sum_k C[i][j,k] d^k (1-based math indices).

    Entries are pure derivative forms (no x part, every term of d-degree 1),
    so they commute with one another and matrix powers behave as over a
    commutative ring.
    """
    n = sc.n
    zero = (0,) * n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            terms = {}
            for k in range(1, n + 1):
                c = sc.get(i, j, k)
                if c:
                    terms[(zero, tuple(1 if t == k - 1 else 0 for t in range(n)))] = c
            entry = WeylElement(n, terms)
            assert entry.x_degree() <= 0
            row.append(entry)
        rows.append(tuple(row))
    return tuple(rows)


def identity_cmatrix(n: int) -> CMatrix:
    one = weyl_scalar(n, 1)
    zero = weyl_scalar(n, 0)
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def _mat_mul(a: CMatrix, b: CMatrix, n: int) -> CMatrix:
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = weyl_scalar(n, 0)
            for s in range(n):
                if a[r][s] and b[s][c]:
                    acc = acc + mul(a[r][s], b[s][c])
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def _is_zero_matrix(m: CMatrix) -> bool:
    return all(e.is_zero() for row in m for e in row)


def cmatrix_power(m: CMatrix, power: int) -> CMatrix:
    """m**power by repeated multiplication; power 0 gives the identity."""
    if power < 0:
        raise ValueError(f"power must be >= 0, got {power}")
    n = len(m)
    out = identity_cmatrix(n)
    for _ in range(power):
        out = _mat_mul(out, m, n)
    return out


# -- Bernoulli numbers --------------------------------------------------------

_bernoulli_lock = threading.Lock()
_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli(index: int) -> Fraction:
    """Bernoulli number B_index in the convention with B_1 = -1/2.

    Defined by the recurrence sum_{k=0..m} C(m+1, k) B_k = 0 seeded with
    B_0 = 1.  Values are memoized; the fill is idempotent and locked so the
    cache behaves as if computed once.
    """
    if index < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {index}")
    if index >= len(_bernoulli_cache):
        with _bernoulli_lock:
            while len(_bernoulli_cache) <= index:
                m = len(_bernoulli_cache)
                acc = Fraction(0)
                binom = 1  # C(m+1, 0)
                for k in range(m):
                    acc += binom * _bernoulli_cache[k]
                    binom = binom * (m + 1 - k) // (k + 1)
                _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[index]


def _series_coefficient(order: int) -> Fraction:
    """The weight (-1)^N B_N / N! multiplying the N-th matrix power."""
    sign = -1 if order % 2 else 1
    return sign * bernoulli(order) / factorial(order)


# -- the universal embedding ---------------------------------------------------


def _embedding_images(sc: StructureConstants, max_d_degree: int) -> list[WeylElement]:
    """All n embedding images at once, sharing the matrix-power ladder."""
    sc.require_valid()
    n = sc.n
    m = cmatrix(sc)
    images = [weyl_x(n, i) for i in range(1, n + 1)]
    power = identity_cmatrix(n)
    for order in range(1, max_d_degree + 1):
        power = _mat_mul(power, m, n)
        if _is_zero_matrix(power):
            break
        coeff = _series_coefficient(order)
        if not coeff:
            continue
        for i in range(n):
            acc = images[i]
            for l in range(n):
                entry = power[l][i]
                if entry:
                    acc = acc + mul(weyl_x(n, l + 1), entry).scale(coeff)
            images[i] = acc
    return images


def iota(sc: StructureConstants, i: int, max_d_degree: int) -> WeylElement:
    """Embedding image of basis element i, keeping terms of d-degree <= bound.

    The N-th summand contributes x_l times the (l, i) entry of the N-th
    matrix power, weighted by (-1)^N B_N / N!; terms with N > max_d_degree
    are dropped (each summand is d-homogeneous of degree N).
    """
    if not 1 <= i <= sc.n:
        raise IndexError(f"basis index {i} out of range 1..{sc.n}")
    if max_d_degree < 0:
        raise ValueError(f"truncation order must be >= 0, got {max_d_degree}")
    return _embedding_images(sc, max_d_degree)[i - 1]


def homomorphism_defect(sc: StructureConstants, i: int, j: int, max_d_degree: int) -> WeylElement:
    """[embed(i), embed(j)] - sum_k C[k][i,j] embed(k), exact to the bound.

    Operands are expanded one order past the bound before commutating: a
    single x-d contraction lowers d-degree by exactly one, so degree-(D+1)
    series terms feed degree-D commutator terms and nothing deeper does.
    The result is truncated back to the bound and is zero for valid tables.
    """
    if max_d_degree < 0:
        raise ValueError(f"truncation order must be >= 0, got {max_d_degree}")
    n = sc.n
    for idx in (i, j):
        if not 1 <= idx <= n:
            raise IndexError(f"basis index {idx} out of range 1..{n}")
    images = _embedding_images(sc, max_d_degree + 1)
    a, b = images[i - 1], images[j - 1]
    residual = mul(a, b) - mul(b, a)
    for k in range(1, n + 1):
        c = sc.get(k, i, j)
        if c:
            residual = residual - images[k - 1].scale(c)
    return truncate(residual, max_d_degree)


def derived_family(sc: StructureConstants, n_max: int) -> CoefficientFamily:
    """Coefficient family reproducing the embedding: at order N the (l, i, j)
    polynomial is (-1)^N B_N / N! * sum_s (M^(N-1))[l][s] * C[s][i,j].

    Generators built from the result coincide term for term with `iota` at
    the same truncation.  Antisymmetry in (i, j) is inherited from the table
    and re-checked by the family constructor.
    """
    sc.require_valid()
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    n = sc.n
    m = cmatrix(sc)
    entries: dict[tuple[int, int, int, int, tuple[int, ...]], Fraction] = {}
    power = identity_cmatrix(n)  # M^(N-1), starting at N = 1
    for order in range(1, n_max + 1):
        coeff = _series_coefficient(order)
        if coeff and not _is_zero_matrix(power):
            for l in range(1, n + 1):
                for i in range(1, n + 1):
                    for j in range(1, n + 1):
                        if i == j:
                            continue
                        acc = weyl_scalar(n, 0)
                        for s in range(1, n + 1):
                            c = sc.get(s, i, j)
                            if c and power[l - 1][s - 1]:
                                acc = acc + power[l - 1][s - 1].scale(c)
                        if acc:
                            for (_x, dexp), value in acc.items():
                                entries[(order, l, i, j, dexp)] = coeff * value
        power = _mat_mul(power, m, n)
    return CoefficientFamily(n, n_max, entries)


# -- ready-made and structured random tables ----------------------------------


def heisenberg_table() -> StructureConstants:
    """The 3-dimensional table with [X1, X2] = X3 and X3 central."""
    return StructureConstants(3, {(3, 1, 2): 1, (3, 2, 1): -1})


def sl2_table() -> StructureConstants:
    """sl2 in the rescaled basis [X1, X2] = 2 X3, [X3, X1] = X1, [X3, X2] = -X2."""
    return StructureConstants(
        3,
        {
            (3, 1, 2): 2,
            (3, 2, 1): -2,
            (1, 3, 1): 1,
            (1, 1, 3): -1,
            (2, 3, 2): -1,
            (2, 2, 3): 1,
        },
    )


def abelian_table(n: int) -> StructureConstants:
    return StructureConstants(n, {})


def direct_sum(a: StructureConstants, b: StructureConstants) -> StructureConstants:
    """Block-diagonal join: b's indices are shifted past a's."""
    entries: dict[tuple[int, int, int], Fraction] = dict(a.items())
    shift = a.n
    for (k, i, j), v in b.items():
        entries[(k + shift, i + shift, j + shift)] = v
    return StructureConstants(a.n + b.n, entries)


def random_two_step_table(n: int, n_central: int, seed: int) -> StructureConstants:
    """Random table with brackets of the first n - n_central generators landing
    in the central tail span and everything else zero.

    Any coefficient choice is Jacobi-valid: every bracket value is central,
    so each double bracket vanishes identically.
    """
    if not 1 <= n_central < n:
        raise ValueError(f"need 1 <= n_central < n, got {n_central}, {n}")
    rng = SplitMix64(seed)
    r = n - n_central
    entries: dict[tuple[int, int, int], Fraction] = {}
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for k in range(r + 1, n + 1):
                if rng.bernoulli(Fraction(1, 2)):
                    v = rng.rational()
                    entries[(k, i, j)] = v
                    entries[(k, j, i)] = -v
    return StructureConstants(n, entries)


def random_almost_abelian_table(n: int, seed: int) -> StructureConstants:
    """Random table where only the last generator acts: [X_n, X_i] lies in the
    span of X_1..X_{n-1} for i < n, and the first n - 1 generators commute.

    Jacobi-valid for any action matrix: every double bracket falls into the
    commuting span.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = SplitMix64(seed)
    entries: dict[tuple[int, int, int], Fraction] = {}
    for i in range(1, n):
        for k in range(1, n):
            if rng.bernoulli(Fraction(1, 2)):
                v = rng.rational()
                entries[(k, n, i)] = v
                entries[(k, i, n)] = -v
    return StructureConstants(n, entries)
