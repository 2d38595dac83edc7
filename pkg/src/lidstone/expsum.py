"""Finite exponential sums ``f(z) = sum_k c_k exp(lambda_k z)``.

These are the closed-form entire functions used throughout the package:
solutions of ``f'' = f`` with prescribed two-point jets, the periodic
interpolation basis, and null solutions of the node determinant.  Every
derivative is available in closed form (``c_k lambda_k^n exp(lambda_k z)``),
so no numerical differentiation is ever needed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from mpmath import exp, mp, mpc, mpf

__all__ = ["ExponentialSum"]


def _num_to_json(v: mpc) -> dict:
    v = mpc(v)
    return {"re": mp.nstr(v.real, 30), "im": mp.nstr(v.imag, 30)}


def _num_from_json(d: dict) -> mpc:
    return mpc(mpf(d["re"]), mpf(d["im"]))


class ExponentialSum:
    """Immutable finite sum of exponentials with pairwise distinct exponents.

    Terms with equal exponents are combined and terms with zero coefficient
    dropped at construction time.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple]):
        combined: dict[tuple, mpc] = {}
        order: list[tuple] = []
        for c, lam in terms:
            c = mpc(c)
            lam = mpc(lam)
            key = (lam.real, lam.imag)
            if key in combined:
                combined[key] += c
            else:
                combined[key] = c
                order.append(key)
        self._terms = tuple(
            (combined[k], mpc(*k)) for k in order if combined[k] != 0
        )

    @property
    def terms(self) -> tuple[tuple[mpc, mpc], ...]:
        return self._terms

    def __call__(self, z) -> mpc:
        acc = mpc(0)
        for c, lam in self._terms:
            acc += c * exp(lam * z)
        return acc

    def derivative(self, order: int = 1) -> "ExponentialSum":
        """Closed-form derivative: each coefficient picks up ``lambda^order``."""
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return ExponentialSum((c * lam**order, lam) for c, lam in self._terms)

    def nth_derivative_at(self, z, n: int) -> mpc:
        """``f^(n)(z)`` without building intermediate objects."""
        acc = mpc(0)
        for c, lam in self._terms:
            acc += c * lam**n * exp(lam * z)
        return acc

    def scale(self, a) -> "ExponentialSum":
        a = mpc(a)
        return ExponentialSum((c * a, lam) for c, lam in self._terms)

    def __add__(self, other: "ExponentialSum") -> "ExponentialSum":
        return ExponentialSum(tuple(self._terms) + tuple(other._terms))

    def __repr__(self) -> str:
        return f"ExponentialSum({len(self._terms)} terms)"

    def to_json(self) -> list[dict]:
        return [
            {"c": _num_to_json(c), "lambda": _num_to_json(lam)}
            for c, lam in self._terms
        ]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "ExponentialSum":
        return cls(
            (_num_from_json(item["c"]), _num_from_json(item["lambda"]))
            for item in data
        )
