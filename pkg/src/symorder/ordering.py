"""Symmetrized products of generators and the ordering identity they satisfy.

For a word alpha = (a_1, ..., a_k) over 1..n, the permutation sum is

    e_tilde(alpha) = sum over all k! orderings of  X_{a_sigma(1)} ... X_{a_sigma(k)},

and the identity under test says that for generators built from an
antisymmetric coefficient family the vacuum action recovers the bare word
monomial:

    e_tilde(alpha) |> 1  =  k! * x_{a_1} ... x_{a_k}.

The checker works on vacuum actions directly: grouping permutations by their
first letter turns the k!-term sum into a recursion over sub-multisets of
the word, at most 2^k polynomial states.  The operator-level permutation sum
is kept as an independent route (``method="operator"`` builds the product
via the same multiset recursion, ``method="naive"`` literally multiplies out
all k! orderings) so the fast path can be cross-checked.

Truncation: the vacuum action of a k-letter word only ever differentiates
polynomials of degree < k, so generators truncated at d-degree D behave
exactly like untruncated ones whenever D >= k - 1.  Below that the checker
still runs but flags the result and emits a `TruncationWarning`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

from .generators import CoefficientFamily, GeneratorSet, monomials_of_degree
from .linalg import exact_rank
from .weyl import (
    MultiIndex,
    Polynomial,
    WeylElement,
    fock_apply,
    mul,
    poly_one,
    truncate,
    weyl_scalar,
)

Word = tuple[int, ...]


class TruncationWarning(UserWarning):
    """The truncation order is too small for the requested check to be exact."""


def word_counts(n: int, word: Word) -> MultiIndex:
    """Letter multiplicities of a word over 1..n as an exponent tuple."""
    counts = [0] * n
    for a in word:
        if not 1 <= a <= n:
            raise IndexError(f"word letter {a} out of range 1..{n}")
        counts[a - 1] += 1
    return tuple(counts)


def word_monomial(n: int, word: Word) -> Polynomial:
    """The commutative monomial x_{a_1} ... x_{a_k} of a word."""
    zero = (0,) * n
    return WeylElement(n, {(word_counts(n, word), zero): 1})


def _vacuum_action(gens: GeneratorSet, counts: MultiIndex) -> Polynomial:
    """Permutation-summed vacuum action of the word with these multiplicities.

    Recursion over sub-multisets: permutations grouped by first letter give
    V(M) = sum_c m_c * (X_c |> V(M - c)) with V(empty) = 1.
    """
    cache = gens._word_cache
    key = ("vacuum", counts)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not any(counts):
        result = poly_one(gens.n)
    else:
        result = weyl_scalar(gens.n, 0)
        for c, mult in enumerate(counts):
            if mult:
                sub = counts[:c] + (mult - 1,) + counts[c + 1 :]
                part = fock_apply(gens.generators[c], _vacuum_action(gens, sub))
                result = result + part.scale(mult)
    cache[key] = result
    return result


def _operator_sum(gens: GeneratorSet, counts: MultiIndex) -> WeylElement:
    """Permutation-summed operator product, by the same multiset recursion."""
    cache = gens._word_cache
    key = ("operator", counts)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not any(counts):
        result = weyl_scalar(gens.n, 1)
    else:
        result = weyl_scalar(gens.n, 0)
        for c, mult in enumerate(counts):
            if mult:
                sub = counts[:c] + (mult - 1,) + counts[c + 1 :]
                part = mul(gens.generators[c], _operator_sum(gens, sub))
                result = result + part.scale(mult)
    cache[key] = result
    return result


def _naive_operator_sum(gens: GeneratorSet, word: Word) -> WeylElement:
    result = weyl_scalar(gens.n, 0)
    for ordering in permutations(word):
        prod = weyl_scalar(gens.n, 1)
        for a in reversed(ordering):
            prod = mul(gens.generators[a - 1], prod)
        result = result + prod
    return result


def _warn_if_insufficient(gens: GeneratorSet, k: int) -> bool:
    sufficient = gens.max_d_degree >= k - 1
    if not sufficient:
        warnings.warn(
            f"truncation order {gens.max_d_degree} is below k - 1 = {k - 1}; "
            "vacuum actions of this word are not exact at this cutoff",
            TruncationWarning,
            stacklevel=3,
        )
    return sufficient


def symmetrized_product(gens: GeneratorSet, word: Word, method: str = "multiset") -> WeylElement:
    """The permutation sum e_tilde(word) as an operator.

    ``method="multiset"`` uses the sub-multiset recursion; ``"naive"``
    multiplies out all k! orderings.  Both give the same element.
    """
    counts = word_counts(gens.n, word)
    _warn_if_insufficient(gens, len(word))
    if method == "multiset":
        return _operator_sum(gens, counts)
    if method == "naive":
        return _naive_operator_sum(gens, word)
    raise ValueError(f"unknown method {method!r}")


def symmetrized_vacuum_action(gens: GeneratorSet, word: Word, method: str = "multiset") -> Polynomial:
    """e_tilde(word) applied to the constant polynomial 1."""
    counts = word_counts(gens.n, word)
    _warn_if_insufficient(gens, len(word))
    if method == "multiset":
        return _vacuum_action(gens, counts)
    if method == "naive":
        return fock_apply(_naive_operator_sum(gens, word), poly_one(gens.n))
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one ordering-identity check.

    ``residual`` is e_tilde(word) |> 1 minus k! times the word monomial;
    ``passed`` iff it is zero.  ``truncation_sufficient`` records whether the
    generator cutoff was large enough for the check to be exact (D >= k - 1);
    when it is False a failure may be a truncation artifact.
    """

    word: Word
    passed: bool
    residual: Polynomial
    truncation_sufficient: bool


def theorem_check(gens: GeneratorSet, word: Word, method: str = "vacuum") -> CheckResult:
    """Check e_tilde(word) |> 1 == k! * word monomial for one word.

    ``method="vacuum"`` (default) runs the polynomial recursion;
    ``"operator"`` builds the full permutation-summed operator first;
    ``"naive"`` multiplies out all k! orderings.  All three agree.
    """
    word = tuple(word)
    if not word:
        raise ValueError("word must have at least one letter")
    k = len(word)
    sufficient = gens.max_d_degree >= k - 1
    if method == "vacuum":
        acted = symmetrized_vacuum_action(gens, word, "multiset")
    elif method == "operator":
        acted = fock_apply(symmetrized_product(gens, word, "multiset"), poly_one(gens.n))
    elif method == "naive":
        acted = symmetrized_vacuum_action(gens, word, "naive")
    else:
        raise ValueError(f"unknown method {method!r}")
    residual = acted - word_monomial(gens.n, word).scale(factorial(k))
    return CheckResult(word, residual.is_zero(), residual, sufficient)


# -- the pairwise cancellation behind the identity ----------------------------


def cancellation_terms(
    family: CoefficientFamily, word: Word, l: int, order: int
) -> list[WeylElement]:
    """Per-position contributions whose total telescopes to zero.

    Position idx contributes, for every other position p, the pair
    polynomial of (word[idx], word[p]) at the given (order, l) paired with
    the word monomial with both positions deleted:

        term_idx = sum_s  mult_s(word minus idx) *
                   x^(word minus idx minus s) * p[order, l][word[idx], s](d).

    Summing over idx visits every ordered pair (idx, p) once, so for
    antisymmetric families the contributions cancel pairwise; symmetric
    families leave a nonzero total.
    """
    word = tuple(word)
    n = family.n
    if not 1 <= l <= n:
        raise IndexError(f"index l={l} out of range 1..{n}")
    if not 1 <= order <= family.n_max:
        raise ValueError(f"order {order} out of range 1..{family.n_max}")
    word_counts(n, word)  # validates letters
    out = []
    for idx in range(len(word)):
        rest = word[:idx] + word[idx + 1 :]
        rest_counts = word_counts(n, rest)
        acc = weyl_scalar(n, 0)
        for s in range(1, n + 1):
            mult = rest_counts[s - 1]
            if not mult:
                continue
            pair = family.polynomial(order, l, word[idx], s)
            if pair.is_zero():
                continue
            deleted = rest_counts[: s - 1] + (mult - 1,) + rest_counts[s:]
            monomial = WeylElement(n, {(deleted, (0,) * n): 1})
            acc = acc + mul(monomial, pair).scale(mult)
        out.append(acc)
    return out


def cancellation_check(
    family: CoefficientFamily, word: Word, l: int, order: int
) -> WeylElement:
    """Sum of the per-position contributions; zero iff they cancel."""
    total = weyl_scalar(family.n, 0)
    for term in cancellation_terms(family, word, l, order):
        total = total + term
    return total


# -- section and projection ----------------------------------------------------


def e_tilde(p: Polynomial, gens: GeneratorSet) -> WeylElement:
    """Linear extension of the permutation sum to a polynomial argument.

    A monomial maps to the permutation sum of the word with its letter
    multiplicities (i.e. the word is taken in sorted order; any other
    ordering gives the same sum, which is what makes the map well defined).
    The constant monomial maps to the identity operator.
    """
    if not p.is_polynomial():
        raise ValueError("e_tilde argument must be a polynomial (dexp == 0)")
    if not p.is_zero():
        _warn_if_insufficient(gens, p.x_degree())
    acc = weyl_scalar(gens.n, 0)
    for (xexp, _d), coeff in p.items():
        acc = acc + _operator_sum(gens, xexp).scale(coeff)
    return acc


def e_map(p: Polynomial, gens: GeneratorSet) -> WeylElement:
    """The normalized symmetrization e = e_tilde / k! per degree-k monomial."""
    if not p.is_polynomial():
        raise ValueError("e_map argument must be a polynomial (dexp == 0)")
    if not p.is_zero():
        _warn_if_insufficient(gens, p.x_degree())
    acc = weyl_scalar(gens.n, 0)
    for (xexp, _d), coeff in p.items():
        k = sum(xexp)
        acc = acc + _operator_sum(gens, xexp).scale(coeff / factorial(k))
    return acc


def pi_project(a: WeylElement) -> Polynomial:
    """The d-free part of an element; equal to its vacuum action a |> 1.

    Both descriptions are computed and compared, then one is returned.
    """
    direct = WeylElement(a.n, {key: c for key, c in a.items() if not any(key[1])})
    acted = fock_apply(a, poly_one(a.n))
    assert direct == acted
    return direct


def span_dimension(gens: GeneratorSet, k: int, max_d_degree: int | None = None) -> tuple[int, int]:
    """Rank of the length-k word products next to the symmetric dimension.

    All n^k ordered products X_{w_1} ... X_{w_k} are formed and restricted
    to the d-degree window where products of truncated generators agree with
    untruncated ones (d-degree <= D - (k - 1): a single multiplication can
    lower a term's d-degree by at most one, its x-degree-1 cofactor admits
    one contraction, so dropped tail terms never reach the window).  Returns
    the exact rank of their coefficient matrix and C(n + k - 1, k), the
    number of degree-k monomials.  The word products generically span more
    than the symmetrized images, so rank >= C(n + k - 1, k) is the expected
    shape; the builder default D = 2k gives a window of width k + 1.
    """
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    if max_d_degree is None:
        max_d_degree = gens.max_d_degree
    if max_d_degree > gens.max_d_degree:
        raise ValueError(
            f"window order {max_d_degree} exceeds the generator cutoff "
            f"{gens.max_d_degree}"
        )
    window = max_d_degree - (k - 1)
    if window < 0:
        raise ValueError(
            f"truncation order {max_d_degree} leaves no exact window for "
            f"degree {k}; need at least {k - 1}"
        )
    n = gens.n
    ops: list[WeylElement] = []

    def extend(prefix: WeylElement, depth: int) -> None:
        if depth == k:
            ops.append(truncate(prefix, window))
            return
        # Terms deeper than window + remaining factors can never contract
        # down into the window, so they can be dropped as we go.
        cap = window + (k - depth - 1)
        for g in gens.generators:
            extend(truncate(mul(prefix, g), cap), depth + 1)

    extend(weyl_scalar(n, 1), 0)
    keys = sorted({key for op in ops for key, _c in op.items()})
    index = {key: pos for pos, key in enumerate(keys)}
    rows = []
    for op in ops:
        row = [Fraction(0)] * len(keys)
        for key, c in op.items():
            row[index[key]] = c
        rows.append(row)
    return exact_rank(rows), comb(n + k - 1, k)
