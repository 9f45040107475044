"""Exact binomials, revolving-door combination ranking and the factoradic codec.

All integers here are Python ints, so ranks of any size are exact. Combinations
are 1-based, strictly increasing tuples; permutations are 1-based tuples where
``perm[k - 1]`` is the image of label ``k``.
"""

from __future__ import annotations

import math
from typing import Sequence

from .exceptions import DomainError, ValidationError

__all__ = [
    "TABLE_LIMIT",
    "binomial",
    "rank_revdoor",
    "unrank_revdoor",
    "factoradic_to_permutation",
    "permutation_to_factoradic",
    "factoradic_to_integer",
    "integer_to_factoradic",
]

TABLE_LIMIT = 200


def _pascal(limit: int) -> tuple[tuple[int, ...], ...]:
    rows = [(1,)]
    for a in range(1, limit + 1):
        prev = rows[-1]
        rows.append((1,) + tuple(prev[b - 1] + prev[b] for b in range(1, a)) + (1,))
    return tuple(rows)


# rows[a][b] == C(a, b) for 0 <= b <= a <= TABLE_LIMIT; immutable once built.
_ROWS = _pascal(TABLE_LIMIT)


def binomial(a: int, b: int) -> int:
    """Return C(a, b) exactly; 0 when ``b > a``."""
    if a < 0 or b < 0:
        raise DomainError(f"binomial requires non-negative arguments, got ({a}, {b})")
    if b > a:
        return 0
    if a <= TABLE_LIMIT:
        return _ROWS[a][b]
    return math.comb(a, b)


def _check_combination(elements: Sequence[int], n_universe: int) -> None:
    if n_universe < 0:
        raise ValidationError(f"universe size must be non-negative, got {n_universe}")
    prev = 0
    for e in elements:
        if e <= prev:
            raise ValidationError(
                f"combination must be strictly increasing with elements >= 1: {tuple(elements)}"
            )
        prev = e
    if prev > n_universe:
        raise ValidationError(f"element {prev} exceeds universe size {n_universe}")


def rank_revdoor(elements: Sequence[int], n_universe: int) -> int:
    """Rank an m-subset of ``[1, n_universe]`` in revolving-door order.

    The rank is the alternating sum ``sum_c (-1)**(m - c) * (C(i_c, c) - 1)``
    over the sorted elements ``i_1 < ... < i_m``; it lies in
    ``[0, C(n_universe, m) - 1]``. The empty combination ranks 0.
    """
    _check_combination(elements, n_universe)
    m = len(elements)
    total = 0
    for c, i_c in enumerate(elements, start=1):
        term = binomial(i_c, c) - 1
        total += term if (m - c) % 2 == 0 else -term
    return total


def unrank_revdoor(rank: int, n_universe: int, m: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_revdoor`."""
    if m < 0 or n_universe < 0:
        raise DomainError(f"need n_universe >= 0 and m >= 0, got ({n_universe}, {m})")
    count = binomial(n_universe, m)
    if not 0 <= rank < count:
        raise DomainError(f"rank {rank} outside [0, {count - 1}] for C({n_universe}, {m})")
    out = [0] * m
    x = n_universe
    r = rank
    # Greedy descent: the largest element is the smallest x + 1 with C(x, c) <= r,
    # then the residual is reflected for the next (sign-flipped) position.
    for c in range(m, 0, -1):
        while binomial(x, c) > r:
            x -= 1
        out[c - 1] = x + 1
        r = binomial(x + 1, c) - r - 1
    return tuple(out)


def _check_digits(digits: Sequence[int], n: int) -> None:
    if len(digits) != n - 1:
        raise ValidationError(f"expected {n - 1} factoradic digits for n={n}, got {len(digits)}")
    for k, d in enumerate(digits, start=1):
        if not 0 <= d <= n - k:
            raise ValidationError(f"digit {k} = {d} outside [0, {n - k}]")


def factoradic_to_permutation(digits: Sequence[int], n: int | None = None) -> tuple[int, ...]:
    """Lehmer-decode ``digits`` into a permutation of ``1..n``.

    ``pi(k)`` is the ``d_k``-th (0-based) smallest label still unused; the last
    label is whatever remains. ``n`` defaults to ``len(digits) + 1``.
    """
    if n is None:
        n = len(digits) + 1
    _check_digits(digits, n)
    pool = list(range(1, n + 1))
    perm = [pool.pop(d) for d in digits]
    perm.extend(pool)
    return tuple(perm)


def permutation_to_factoradic(perm: Sequence[int]) -> tuple[int, ...]:
    """Lehmer code of ``perm``: digit k counts later entries smaller than ``perm[k]``."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValidationError(f"not a permutation of 1..{n}: {tuple(perm)}")
    return tuple(sum(1 for q in perm[k + 1:] if q < perm[k]) for k in range(n - 1))


def factoradic_to_integer(digits: Sequence[int], n: int | None = None) -> int:
    """Mixed-radix value ``sum_k d_k * (n - k)!`` in ``[0, n! - 1]``."""
    if n is None:
        n = len(digits) + 1
    _check_digits(digits, n)
    value = 0
    # Horner form; the implicit last digit is always 0 with radix 1.
    for k, d in enumerate(digits, start=1):
        value = value * (n - k + 1) + d
    return value


def integer_to_factoradic(value: int, n: int) -> tuple[int, ...]:
    """Inverse of :func:`factoradic_to_integer` for permutations of length ``n``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= value < math.factorial(n):
        raise DomainError(f"value {value} outside [0, {n}! - 1]")
    digits = []
    for radix in range(1, n + 1):
        value, d = divmod(value, radix)
        digits.append(d)
    # digits[0] is the always-zero units digit; drop it and restore most-significant-first.
    return tuple(reversed(digits[1:]))
