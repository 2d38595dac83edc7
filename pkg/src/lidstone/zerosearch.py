"""Smallest-modulus zero search for entire functions.

The search walks outward through annuli ``[rho0 * 2^k, rho0 * 2^(k+1)]``,
counting enclosed zeros with the argument principle (trapezoidal quadrature
of ``f'/f`` on circles, with node doubling until the winding number is
integer-stable).  The first annulus containing a zero is then swept with
Newton iterations started from a grid of seed points, and minimality of the
returned modulus is certified by a final zero count on a slightly smaller
circle.
"""

from __future__ import annotations

from typing import Callable, Optional

from mpmath import exp, fabs, mp, mpc, mpf, pi

__all__ = ["ZeroSearchError", "winding_number", "count_zeros_in_disc",
           "newton_refine", "smallest_modulus_zero"]

ComplexFun = Callable[[mpc], mpc]


class ZeroSearchError(RuntimeError):
    """No zero found, or the zero count could not be stabilized."""


class _ContourNearZero(Exception):
    pass


def _winding_once(f: ComplexFun, df: ComplexFun, radius, nodes: int) -> mpf:
    # (1/2 pi i) * contour integral of f'/f = (1/N) sum_j t_j f'(t_j)/f(t_j)
    acc = mpc(0)
    max_mag = None
    guard = -(mp.prec // 2)
    step = exp(mpc(0, 2 * pi / nodes))
    t = mpc(radius)
    for _ in range(nodes):
        ft = f(t)
        m = mp.mag(ft)
        max_mag = m if max_mag is None else max(max_mag, m)
        if ft == 0 or m < max_mag + guard:
            raise _ContourNearZero()
        acc += t * df(t) / ft
        t *= step
    return (acc / nodes).real


def winding_number(f: ComplexFun, df: ComplexFun, radius, precision: int = 113,
                   initial_nodes: int = 64, max_nodes: int = 1 << 14) -> int:
    """Number of zeros of ``f`` inside ``|t| < radius`` (counting multiplicity).

    Raises :class:`ZeroSearchError` when the estimate does not stabilize to an
    integer, and propagates a contour-near-zero condition as the same error so
    that callers can retry on a perturbed radius.
    """
    with mp.workprec(precision + 16):
        nodes = initial_nodes
        prev: Optional[int] = None
        while nodes <= max_nodes:
            try:
                val = _winding_once(f, df, mpf(radius), nodes)
            except _ContourNearZero:
                raise ZeroSearchError("contour passes too close to a zero")
            nearest = int(mp.nint(val))
            if fabs(val - nearest) < mpf("0.25"):
                if prev is not None and prev == nearest:
                    return nearest
                prev = nearest
            else:
                prev = None
            nodes *= 2
    raise ZeroSearchError("winding number did not stabilize")


def count_zeros_in_disc(f: ComplexFun, df: ComplexFun, radius,
                        precision: int = 113) -> int:
    """Winding number with automatic radius perturbation near zeros."""
    last_error: Optional[Exception] = None
    for k in range(6):
        r = mpf(radius) * (1 + mpf(k) * mpf(2) ** -7)
        try:
            return winding_number(f, df, r, precision)
        except ZeroSearchError as err:
            last_error = err
    raise ZeroSearchError(f"zero count failed near radius {radius}: {last_error}")


def newton_refine(f: ComplexFun, df: ComplexFun, z0, precision: int,
                  max_iter: int = 96) -> Optional[mpc]:
    """Newton iteration from ``z0``; returns None unless it converges."""
    with mp.workprec(precision + 32):
        z = mpc(z0)
        tol = mpf(2) ** (-precision - 8)
        for _ in range(max_iter):
            if fabs(z) > mpf(10) ** 12:
                return None
            d = df(z)
            if d == 0:
                return None
            step = f(z) / d
            z = z - step
            if fabs(step) <= tol * (1 + fabs(z)):
                return z
    return None


def _newton_sweep(f: ComplexFun, df: ComplexFun, r_lo, r_hi, precision: int,
                  seeds_per_ring: int, rings: int) -> list[mpc]:
    roots: list[mpc] = []
    slack = mpf("1.05")
    for i in range(rings):
        r = r_lo + (r_hi - r_lo) * (i + mpf(1)) / (rings + 1)
        for j in range(seeds_per_ring):
            angle = 2 * pi * (j + mpf("0.31")) / seeds_per_ring
            z = newton_refine(f, df, r * exp(mpc(0, angle)), precision)
            if z is None or fabs(z) > r_hi * slack:
                continue
            if all(fabs(z - w) > mpf(2) ** (-precision // 2) * (1 + fabs(z))
                   for w in roots):
                roots.append(z)
    return roots


def smallest_modulus_zero(f: ComplexFun, df: ComplexFun, precision: int = 113,
                          rho0="0.25", max_octaves: int = 26,
                          seeds_per_ring: int = 32) -> mpc:
    """Zero of smallest modulus of an entire function with ``f(0) != 0``.

    Annulus-by-annulus argument-principle scan followed by Newton polishing;
    the returned zero is certified smallest by a final count on the circle
    of radius ``(1 - 2^-12) |z*|``.
    """
    with mp.workprec(precision + 32):
        if fabs(f(mpc(0))) < mpf(2) ** (-precision // 2):
            return mpc(0)
        rho = mpf(rho0)
        inner_empty = mpf(0)  # largest radius known to contain no zero
        for k in range(max_octaves):
            r_out = rho * 2 ** (k + 1)
            count = count_zeros_in_disc(f, df, r_out, precision)
            if count == 0:
                inner_empty = r_out
                continue
            r_lo = inner_empty
            seeds = seeds_per_ring
            for _attempt in range(4):
                roots = _newton_sweep(f, df, r_lo, r_out, precision, seeds, 3 + _attempt)
                candidates = [z for z in roots if fabs(z) > r_lo * mpf("0.999")]
                if candidates:
                    best = min(candidates, key=fabs)
                    below = count_zeros_in_disc(
                        f, df, fabs(best) * (1 - mpf(2) ** -12), precision)
                    if below == 0:
                        return newton_refine(f, df, best, precision + 64) or best
                    # A smaller zero exists but Newton missed it: shrink the
                    # search annulus to the certified-empty inner disc.
                    r_out = fabs(best) * (1 - mpf(2) ** -12)
                seeds *= 2
            raise ZeroSearchError(
                "Newton failed to locate the enclosed zero of smallest modulus")
    raise ZeroSearchError(f"no zero found with modulus below {rho * 2**max_octaves}")
