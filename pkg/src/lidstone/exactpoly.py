"""Exact rational-arithmetic polynomial sequences.

This module builds the two classical polynomial families used for two-point
derivative interpolation, entirely over ``fractions.Fraction``:

* Lidstone polynomials ``Lambda_n``: odd, degree ``2n+1``, defined by
  ``Lambda_0(z) = z``, ``Lambda_n'' = Lambda_{n-1}``,
  ``Lambda_n(0) = Lambda_n(1) = 0``.  They satisfy the delta property
  ``Lambda_n^(2k)(0) = 0`` and ``Lambda_n^(2k)(1) = delta_{kn}``.

* Whittaker polynomials ``M_n``: even, degree ``2n``, defined by
  ``M_0 = 1``, ``M_n'' = M_{n-1}``, ``M_n(1) = M_n'(0) = 0``, with
  ``M_n^(2k+1)(0) = 0`` and ``M_n^(2k)(1) = delta_{kn}``.

Both sequences are generated by triangular recurrences,

    Lambda_n(z) = z^(2n+1)/(2n+1)! - sum_{h<n} Lambda_h(z)/(2n-2h+1)!
    M_n(z)      = z^(2n)/(2n)!     - sum_{h<n} M_h(z)/(2n-2h)!

and memoized, so warm calls are a single list lookup.  No floating point
appears anywhere in this module.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "RationalPoly",
    "factorial",
    "lidstone_poly",
    "whittaker_poly",
    "poly_derivative",
    "eval_exact",
    "lidstone_basis_matrix",
    "format_rational",
    "parse_rational",
]


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    """Exact integer factorial, cached (shared by both recurrences)."""
    return math.factorial(n)


def format_rational(q: Rational) -> str:
    """Serialize a rational as ``"p/q"``, omitting the denominator when 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Rational:
    """Inverse of :func:`format_rational`."""
    return Fraction(text)


class RationalPoly:
    """Univariate polynomial with exact rational coefficients.

    Coefficients are stored ascending by degree with no trailing zeros; the
    zero polynomial is the empty coefficient sequence and has degree ``-1``.
    Instances are immutable and safe to share across threads.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Iterable[RationalLike] = ()):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(coeffs)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree of the polynomial; ``-1`` for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of ``z^k`` (zero beyond the degree)."""
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly([{', '.join(format_rational(c) for c in self._coeffs)}])"

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(out)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly([-c for c in self._coeffs])

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def scale(self, factor: RationalLike) -> "RationalPoly":
        f = Fraction(factor)
        return RationalPoly([c * f for c in self._coeffs])

    def derivative(self, order: int = 1) -> "RationalPoly":
        """Exact ``order``-th derivative (the zero polynomial maps to itself)."""
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        coeffs = self._coeffs
        for _ in range(order):
            if len(coeffs) <= 1:
                return RationalPoly()
            coeffs = tuple(j * coeffs[j] for j in range(1, len(coeffs)))
        return RationalPoly(coeffs)

    def __call__(self, x: RationalLike) -> Fraction:
        """Exact Horner evaluation."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def compose_affine(self, a: RationalLike, b: RationalLike) -> "RationalPoly":
        """Exact substitution ``p(a*z + b)``, by Horner over polynomials."""
        a = Fraction(a)
        b = Fraction(b)
        acc_coeffs: list[Fraction] = []
        for c in reversed(self._coeffs):
            new = [Fraction(0)] * (len(acc_coeffs) + 1)
            for j, q in enumerate(acc_coeffs):
                new[j] += b * q
                new[j + 1] += a * q
            new[0] += c
            acc_coeffs = new
            while acc_coeffs and acc_coeffs[-1] == 0:
                acc_coeffs.pop()
        return RationalPoly(acc_coeffs)

    def to_json_array(self) -> list[str]:
        """JSON form: array of ``"p/q"`` strings, index = degree."""
        return [format_rational(c) for c in self._coeffs]

    @classmethod
    def from_json_array(cls, data: Sequence[str]) -> "RationalPoly":
        return cls([parse_rational(s) for s in data])


def poly_derivative(p: RationalPoly, k: int) -> RationalPoly:
    """Exact k-th derivative of ``p``."""
    return p.derivative(k)


def eval_exact(p: RationalPoly, x: RationalLike) -> Fraction:
    """Exact evaluation of ``p`` at the rational point ``x``."""
    return p(x)


# Memoized sequences.  Lists are append-only and grown under a lock, so a
# reader either sees a fully constructed entry or takes the lock to build it.
_SEQ_LOCK = threading.Lock()
_LIDSTONE: list[RationalPoly] = []
_WHITTAKER: list[RationalPoly] = []


def _extend_lidstone(n: int) -> None:
    while len(_LIDSTONE) <= n:
        k = len(_LIDSTONE)
        coeffs = [Fraction(0)] * (2 * k + 2)
        coeffs[2 * k + 1] = Fraction(1, factorial(2 * k + 1))
        for h in range(k):
            f = Fraction(1, factorial(2 * k - 2 * h + 1))
            for j, c in enumerate(_LIDSTONE[h].coefficients):
                coeffs[j] -= c * f
        _LIDSTONE.append(RationalPoly(coeffs))


def _extend_whittaker(n: int) -> None:
    while len(_WHITTAKER) <= n:
        k = len(_WHITTAKER)
        coeffs = [Fraction(0)] * (2 * k + 1)
        coeffs[2 * k] = Fraction(1, factorial(2 * k))
        for h in range(k):
            f = Fraction(1, factorial(2 * k - 2 * h))
            for j, c in enumerate(_WHITTAKER[h].coefficients):
                coeffs[j] -= c * f
        _WHITTAKER.append(RationalPoly(coeffs))


def lidstone_poly(n: int) -> RationalPoly:
    """Exact Lidstone polynomial ``Lambda_n``.

    ``Lambda_0(z) = z``, ``Lambda_1(z) = (z^3 - z)/6``, and in general
    ``Lambda_n(z) = z^(2n+1)/(2n+1)! - sum_{h<n} Lambda_h(z)/(2n-2h+1)!``.
    Results are memoized; after warm-up a call is one list lookup.
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n < len(_LIDSTONE):
        return _LIDSTONE[n]
    with _SEQ_LOCK:
        _extend_lidstone(n)
    return _LIDSTONE[n]


def whittaker_poly(n: int) -> RationalPoly:
    """Exact Whittaker polynomial ``M_n``.

    ``M_0 = 1``, ``M_1(z) = (z^2 - 1)/2``, and in general
    ``M_n(z) = z^(2n)/(2n)! - sum_{h<n} M_h(z)/(2n-2h)!``.  Memoized.
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n < len(_WHITTAKER):
        return _WHITTAKER[n]
    with _SEQ_LOCK:
        _extend_whittaker(n)
    return _WHITTAKER[n]


def _det_gauss(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination with pivoting."""
    n = len(rows)
    rows = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] == 0:
                continue
            f = rows[r][col] * inv
            for c in range(col, n):
                rows[r][c] -= f * rows[col][c]
    return det


def lidstone_basis_matrix(n: int) -> tuple[tuple[tuple[Fraction, ...], ...], Fraction]:
    """Change-of-basis matrix from the Lidstone basis to monomials.

    The basis of the space of polynomials of degree <= 2n+1 is
    ``Lambda_0(z), ..., Lambda_n(z), Lambda_0(1-z), ..., Lambda_n(1-z)``.
    Returns the ``(2n+2) x (2n+2)`` matrix whose column ``j`` holds the
    monomial coefficients of the ``j``-th basis polynomial, together with its
    exact determinant (nonzero exactly when the family is a basis).
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    size = 2 * n + 2
    cols: list[list[Fraction]] = []
    for h in range(n + 1):
        p = lidstone_poly(h)
        cols.append([p.coefficient(i) for i in range(size)])
    for h in range(n + 1):
        p = lidstone_poly(h).compose_affine(-1, 1)
        cols.append([p.coefficient(i) for i in range(size)])
    rows = [[cols[j][i] for j in range(size)] for i in range(size)]
    det = _det_gauss(rows)
    return tuple(tuple(r) for r in rows), det
