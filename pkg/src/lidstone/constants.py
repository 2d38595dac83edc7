"""Critical constants and growth-bound functions.

Contents:

* ``nu``: the gap threshold for the even-derivative construction, the unique
  positive root of ``exp(x) - exp(-x) = 4x`` (value ``2.1773...``).  This is
  exactly the point where ``4d - exp(d) + exp(-d)`` changes sign, i.e. where
  ``gamma2`` below stops being positive.
* ``log_2_plus_sqrt3``: the odd/even gap threshold ``1.3169578...``, the
  positive solution of ``exp(x) + exp(-x) = 4``.
* ``tau_m``: smallest modulus of a zero of ``sum_n t^(nm)/(nm)!``, located by
  an argument-principle annulus scan plus Newton polishing (``tau_2 = pi/2``).
* ``gamma_family``: the explicit constants attached to a two-point frame,

      gamma1  = 2 / (4 - e + 1/e)                 gamma1' = 2 / (4 - e - 1/e)
      gamma2  = 2 / (4d - e^d + e^-d)   (d < nu)  gamma2' = 2 / (4 - e^d - e^-d)
      gamma4  > 3 pi / (4 d log(pi/d))            gamma4' > pi / (2 d log(pi/(2d)))
      gamma   = e^|s0| gamma2 / sqrt(2 pi)        gamma'  = e^|s0| gamma2' / sqrt(2 pi)

  where ``d = |s1 - s0|``; ``gamma4``/``gamma4'`` are returned as 1.01 times
  their strict lower bounds.
* Stirling machinery: the two-sided factorial bounds, the inequality
  ``(r/t)(1 + log t) + log(t)/2 < r + 1/(4r)`` with its empirically located
  threshold ``r0``, and the derived bound ``r^N/N! <= e^(r+1/(4r))/sqrt(2 pi r)``.
* Sup-norm bounds (i)/(ii)/(iii) for the scaled polynomial families and the
  geometric tail bounds built from bound (iii).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import ceil as mpceil
from mpmath import cos, exp, fabs, log, mp, mpc, mpf, pi, sin, sqrt

from .exactpoly import factorial, lidstone_poly, whittaker_poly
from .zerosearch import newton_refine, smallest_modulus_zero

__all__ = [
    "RealConstant",
    "GammaFamily",
    "nu",
    "log_2_plus_sqrt3",
    "tau_m",
    "tau_m_series_value",
    "gamma_family",
    "gamma3_surrogate",
    "gamma3_prime_surrogate",
    "stirling_check",
    "stirling_corollary_check",
    "stirling_lemma_inequality",
    "stirling_lemma_r0",
    "lidstone_sup_bound",
    "whittaker_sup_bound",
    "lidstone_tail_bound",
    "whittaker_tail_bound",
]


@dataclass(frozen=True)
class RealConstant:
    """A computed real constant together with its machine-checkable contract.

    ``residual`` is the absolute value of the defining relation evaluated at
    ``value``; the construction guarantees ``residual < 2^(-precision+8)``.
    """

    name: str
    value: mpf
    precision: int
    relation: str
    residual: mpf
    witness: Optional[mpc] = None  # e.g. the located complex zero for tau_m

    def check(self) -> bool:
        return self.residual < mpf(2) ** (-self.precision + 8)


_CACHE: dict[tuple, RealConstant] = {}
_CACHE_LOCK = threading.Lock()


def _cached(key: tuple, builder: Callable[[], RealConstant]) -> RealConstant:
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    value = builder()
    with _CACHE_LOCK:
        return _CACHE.setdefault(key, value)


def nu(precision: int = 256) -> RealConstant:
    """Gap threshold for the even-derivative regime: root of ``e^x - e^-x = 4x``.

    Bisection on ``[2, 3]`` followed by Newton.  The numerical value is
    ``2.17731898...``; equivalently it is where ``4x - e^x + e^-x`` vanishes,
    so ``gamma2`` is defined exactly for gaps below ``nu``.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")

    def build() -> RealConstant:
        with mp.workprec(precision + 32):
            g = lambda x: exp(x) - exp(-x) - 4 * x
            lo, hi = mpf(2), mpf(3)
            for _ in range(40):
                mid = (lo + hi) / 2
                if g(lo) * g(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            x = (lo + hi) / 2
            dg = lambda x: exp(x) + exp(-x) - 4
            for _ in range(precision):
                step = g(x) / dg(x)
                x -= step
                if fabs(step) < mpf(2) ** (-precision - 16):
                    break
            value = mpf(x)
        with mp.workprec(precision + 32):
            residual = fabs(exp(value) - exp(-value) - 4 * value)
        return RealConstant("nu", value, precision,
                            "exp(x) - exp(-x) - 4*x = 0", residual)

    return _cached(("nu", precision), build)


def log_2_plus_sqrt3(precision: int = 256) -> RealConstant:
    """Gap threshold for the odd/even regime: ``log(2 + sqrt(3)) = 1.3169578...``.

    Equivalently the positive solution of ``e^x + e^-x = 4``.
    """
    def build() -> RealConstant:
        with mp.workprec(precision + 32):
            value = mpf(log(2 + sqrt(3)))
            residual = fabs(exp(value) + exp(-value) - 4)
        return RealConstant("log_2_plus_sqrt3", value, precision,
                            "exp(x) + exp(-x) - 4 = 0", residual)

    return _cached(("log_2_plus_sqrt3", precision), build)


def tau_m_series_value(m: int, t, precision: int = 256) -> mpc:
    """Evaluate ``sum_{n>=0} t^(nm)/(nm)!`` with rigorous truncation.

    Terms are added until the next term falls below ``2^(-precision-16)``
    relative to the running magnitude (ratio test; the factorial denominator
    eventually dominates any fixed ``|t|``).
    """
    with mp.workprec(precision + 32):
        t = mpc(t)
        acc = mpc(1)
        term = mpc(1)
        threshold = mpf(2) ** (-precision - 16)
        tm = t**m
        n = 0
        while n < 100000:
            n += 1
            ratio = tm
            for i in range(m * (n - 1) + 1, m * n + 1):
                ratio /= i
            term = term * ratio
            acc += term
            if fabs(term) < threshold * max(mpf(1), fabs(acc)):
                # one confirming extra term guards against accidental dips
                nxt = term * tm
                for i in range(m * n + 1, m * n + m + 1):
                    nxt /= i
                if fabs(nxt) < threshold * max(mpf(1), fabs(acc)):
                    return acc + nxt
        raise ArithmeticError("series truncation failed to converge")


def _tau_m_series_derivative(m: int, t, precision: int) -> mpc:
    with mp.workprec(precision + 32):
        t = mpc(t)
        acc = mpc(0)
        threshold = mpf(2) ** (-precision - 16)
        term = t ** (m - 1) / factorial(m - 1)
        tm = t**m
        n = 1
        while n < 100000:
            acc += term
            ratio = tm
            for i in range(m * n, m * n + m):
                ratio /= i
            term = term * ratio
            n += 1
            if fabs(term) < threshold * max(mpf(1), fabs(acc)):
                return acc + term
        raise ArithmeticError("series truncation failed to converge")


def tau_m(m: int, precision: int = 256) -> RealConstant:
    """Smallest modulus of a zero of ``1 + t^m/m! + t^(2m)/(2m)! + ...``.

    Located by the annulus argument-principle scan with Newton polish;
    ``tau_2 = pi/2``.  The located zero is exposed as ``witness``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")

    def build() -> RealConstant:
        f = lambda t: tau_m_series_value(m, t, precision)
        df = lambda t: _tau_m_series_derivative(m, t, precision)
        zero = smallest_modulus_zero(f, df, precision, rho0=mpf(1) / 2)
        with mp.workprec(precision + 32):
            residual = fabs(f(zero))
            value = fabs(zero)
        return RealConstant(f"tau_{m}", value, precision,
                            f"smallest |t| with sum t^({m}n)/({m}n)! = 0",
                            residual, witness=zero)

    return _cached(("tau_m", m, precision), build)


def _min_modulus_on_circle(g: Callable[[mpc], mpc], radius, precision: int,
                           samples: int = 4096) -> mpf:
    """min |g| over ``|t| = radius`` by dense sampling plus golden-section polish."""
    with mp.workprec(precision + 16):
        radius = mpf(radius)
        best_j, best = 0, None
        vals = []
        for j in range(samples):
            v = fabs(g(radius * exp(mpc(0, 2 * pi * j / samples))))
            vals.append(v)
            if best is None or v < best:
                best, best_j = v, j
        # golden-section on the bracketing arc
        lo = 2 * pi * (best_j - 1) / samples
        hi = 2 * pi * (best_j + 1) / samples
        gr = (sqrt(5) - 1) / 2
        a, b = mpf(lo), mpf(hi)
        c = b - gr * (b - a)
        d = a + gr * (b - a)
        fc = fabs(g(radius * exp(mpc(0, c))))
        fd = fabs(g(radius * exp(mpc(0, d))))
        for _ in range(precision):
            if b - a < mpf(2) ** (-precision // 2):
                break
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - gr * (b - a)
                fc = fabs(g(radius * exp(mpc(0, c))))
            else:
                a, c, fc = c, d, fd
                d = a + gr * (b - a)
                fd = fabs(g(radius * exp(mpc(0, d))))
        return min(best, fc, fd)


def gamma3_surrogate(precision: int = 256) -> RealConstant:
    """Concrete constant for sup-norm bound (iii) of the odd family.

    From the contour representation on ``|t| = 3 pi/2`` one gets, for all
    ``r >= 0`` and ``n >= 0``,

        |Lambda_n|_r <= e^(3 pi r / 2) pi^(-2n)
                        (2/pi e^(-pi r/2) + 2 (2/3)^(2n) S),
        S = sup_{|t| = 3 pi/2} 1/|e^t - e^-t|,

    so ``gamma3 = 2/pi + 2 S`` works uniformly (the r- and n-dependent factors
    are bounded by their values at r = 0, n = 0).
    """
    def build() -> RealConstant:
        g = lambda t: exp(t) - exp(-t)
        m = _min_modulus_on_circle(g, 3 * pi / 2, precision)
        value = 2 / pi + 2 / m
        return RealConstant("gamma3", mpf(value), precision,
                            "2/pi + 2 sup_{|t|=3pi/2} 1/|e^t - e^-t|", mpf(0))

    return _cached(("gamma3", precision), build)


def gamma3_prime_surrogate(precision: int = 256) -> RealConstant:
    """Analogous constant for the even family, from the contour ``|t| = pi``:

        |M_n|_r <= (2/pi)^(2n) e^(pi r)
                   (4/pi e^(-pi r/2) + 2^(-2n+1) S'),
        S' = sup_{|t| = pi} 1/|e^t + e^-t|,

    giving ``gamma3' = 4/pi + 2 S'``.
    """
    def build() -> RealConstant:
        g = lambda t: exp(t) + exp(-t)
        m = _min_modulus_on_circle(g, pi, precision)
        value = 4 / pi + 2 / m
        return RealConstant("gamma3_prime", mpf(value), precision,
                            "4/pi + 2 sup_{|t|=pi} 1/|e^t + e^-t|", mpf(0))

    return _cached(("gamma3_prime", precision), build)


@dataclass(frozen=True)
class GammaFamily:
    """The frame-dependent constants; entries are None outside their regime."""

    gamma1: mpf
    gamma1_prime: mpf
    gamma2: Optional[mpf]
    gamma2_prime: Optional[mpf]
    gamma4: Optional[mpf]
    gamma4_prime: Optional[mpf]
    gamma: Optional[mpf]
    gamma_prime: Optional[mpf]

    def as_dict(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "gamma1_prime": self.gamma1_prime,
            "gamma2": self.gamma2,
            "gamma2_prime": self.gamma2_prime,
            "gamma4": self.gamma4,
            "gamma4_prime": self.gamma4_prime,
            "gamma": self.gamma,
            "gamma_prime": self.gamma_prime,
        }


GAMMA4_SAFETY = mpf("1.01")  # strict lower bounds are scaled by this factor


def gamma_family(frame, precision: int = 256) -> GammaFamily:
    """Evaluate the closed-form constants for a two-point frame.

    ``frame`` needs ``gap_modulus(precision)`` and ``s0_modulus(precision)``.
    Regime-violating entries (gap too large) are returned as None.
    """
    with mp.workprec(precision + 16):
        d = frame.gap_modulus(precision)
        s0m = frame.s0_modulus(precision)
        e1 = exp(mpf(1))
        gamma1 = 2 / (4 - e1 + 1 / e1)
        gamma1p = 2 / (4 - e1 - 1 / e1)
        gamma2 = gamma2p = gamma4 = gamma4p = g = gp = None
        if d < nu(precision).value:
            gamma2 = 2 / (4 * d - exp(d) + exp(-d))
            g = exp(s0m) / sqrt(2 * pi) * gamma2
        if d < log_2_plus_sqrt3(precision).value:
            gamma2p = 2 / (4 - exp(d) - exp(-d))
            gp = exp(s0m) / sqrt(2 * pi) * gamma2p
        if d < pi:
            gamma4 = GAMMA4_SAFETY * 3 * pi / (4 * d * (log(pi) - log(d)))
        if d < pi / 2:
            gamma4p = GAMMA4_SAFETY * pi / (2 * d * (log(pi) - log(2 * d)))
        return GammaFamily(mpf(gamma1), mpf(gamma1p),
                           None if gamma2 is None else mpf(gamma2),
                           None if gamma2p is None else mpf(gamma2p),
                           None if gamma4 is None else mpf(gamma4),
                           None if gamma4p is None else mpf(gamma4p),
                           None if g is None else mpf(g),
                           None if gp is None else mpf(gp))


# ---------------------------------------------------------------------------
# Stirling machinery


def stirling_check(n: int, precision: int = 256) -> tuple[bool, bool]:
    """Two-sided Stirling bounds with exact ``n!``:

        n^n e^-n sqrt(2 pi n) < n! < n^n e^-n sqrt(2 pi n) e^(1/(12n)).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    with mp.workprec(precision):
        log_fact = log(mpf(factorial(n)))
        left = n * log(mpf(n)) - n + log(2 * pi * n) / 2
        right = left + mpf(1) / (12 * n)
        return bool(left < log_fact), bool(log_fact < right)


def stirling_lemma_inequality(r, t) -> bool:
    """Truth of ``(r/t)(1 + log t) + log(t)/2 < r + 1/(4r)`` at one point."""
    r = mpf(r)
    t = mpf(t)
    return (r / t) * (1 + log(t)) + log(t) / 2 < r + 1 / (4 * r)


_R0_CACHE: dict[tuple, mpf] = {}


def stirling_lemma_r0(precision: int = 64, step="0.25", t_points: int = 512,
                      run_length: int = 64) -> mpf:
    """Empirical threshold ``r0`` for the inequality above.

    Scans ``r`` upward in fixed steps until the inequality holds on a fine
    log-spaced ``t`` grid in ``(0, r]`` for ``run_length`` consecutive steps,
    and returns the first ``r`` of that run.  The existence of some threshold
    is a theorem; its value is pinned here rather than assumed.
    """
    key = (precision, str(step), t_points, run_length)
    hit = _R0_CACHE.get(key)
    if hit is not None:
        return hit
    with mp.workprec(precision):
        step = mpf(step)
        r = step
        run_start = None
        run = 0
        while run < run_length:
            lo = log(r * mpf(2) ** -40)
            hi = log(r)
            ok = all(
                stirling_lemma_inequality(r, exp(lo + (hi - lo) * j / (t_points - 1)))
                for j in range(t_points)
            )
            if ok:
                if run == 0:
                    run_start = r
                run += 1
            else:
                run = 0
                run_start = None
            r += step
        _R0_CACHE[key] = run_start
        return run_start


def stirling_corollary_check(r, n: int, precision: int = 256) -> bool:
    """Truth of ``r^n/n! <= e^(r + 1/(4r)) / sqrt(2 pi r)`` in the log domain.

    Requires ``r >= r0`` (the empirically determined threshold).
    """
    r = mpf(r)
    if r < stirling_lemma_r0():
        raise ValueError(f"requires r >= r0 = {stirling_lemma_r0()}")
    if n < 1:
        raise ValueError("n must be at least 1")
    with mp.workprec(precision):
        lhs = n * log(r) - log(mpf(factorial(n)))
        rhs = r + 1 / (4 * r) - log(2 * pi * r) / 2
        return bool(lhs <= rhs)


# ---------------------------------------------------------------------------
# Sup-norm bounds for the scaled families (log-domain values)


def _bound_common(frame, precision: int):
    d = frame.gap_modulus(precision)
    return d


def lidstone_sup_bound(frame, n: int, r, which: str, precision: int = 256,
                       r_threshold=None) -> mpf:
    """Log of the named upper bound for ``|scaled Lambda_n|_r``.

    ``which`` is one of:

    * ``"i"``   : ``gamma1 d^(2n)/(2n+1)! max(r/d, 2n+1)^(2n+1)`` (all r, n),
    * ``"ii"``  : ``gamma2 e^(r + 1/(4r)) / sqrt(2 pi r)`` (gap < nu, r large),
    * ``"iii"`` : ``gamma3 (d/pi)^(2n) e^(3 pi r/(2d))`` (all r, n).
    """
    with mp.workprec(precision + 16):
        d = _bound_common(frame, precision)
        r = mpf(r)
        fam = gamma_family(frame, precision)
        if which == "i":
            return (log(fam.gamma1) + 2 * n * log(d)
                    - log(mpf(factorial(2 * n + 1)))
                    + (2 * n + 1) * log(max(r / d, mpf(2 * n + 1))))
        if which == "ii":
            if fam.gamma2 is None:
                raise ValueError("bound (ii) requires gap modulus below nu")
            threshold = mpf(r_threshold) if r_threshold is not None \
                else stirling_lemma_r0()
            if r < threshold:
                raise ValueError(f"bound (ii) requires r >= {threshold}")
            return log(fam.gamma2) + r + 1 / (4 * r) - log(2 * pi * r) / 2
        if which == "iii":
            g3 = gamma3_surrogate(precision).value
            return log(g3) + 2 * n * (log(d) - log(pi)) + 3 * pi * r / (2 * d)
        raise ValueError(f"unknown bound name: {which!r}")


def whittaker_sup_bound(frame, n: int, r, which: str, precision: int = 256,
                        r_threshold=None) -> mpf:
    """Log of the named upper bound for ``|scaled M_n|_r``.

    * ``"i"``   : ``gamma1' d^(2n)/(2n)! max(r/d, 2n)^(2n)``,
    * ``"ii"``  : ``gamma2' e^(r + 1/(4r)) / sqrt(2 pi r)`` (gap < log(2+sqrt 3)),
    * ``"iii"`` : ``gamma3' (2d/pi)^(2n) e^(pi r/d)``.
    """
    with mp.workprec(precision + 16):
        d = _bound_common(frame, precision)
        r = mpf(r)
        fam = gamma_family(frame, precision)
        if which == "i":
            if n == 0:
                return log(fam.gamma1_prime)  # max(r/d, 0)^0 degenerates
            return (log(fam.gamma1_prime) + 2 * n * log(d)
                    - log(mpf(factorial(2 * n)))
                    + 2 * n * log(max(r / d, mpf(2 * n))))
        if which == "ii":
            if fam.gamma2_prime is None:
                raise ValueError(
                    "bound (ii) requires gap modulus below log(2 + sqrt 3)")
            threshold = mpf(r_threshold) if r_threshold is not None \
                else stirling_lemma_r0()
            if r < threshold:
                raise ValueError(f"bound (ii) requires r >= {threshold}")
            return log(fam.gamma2_prime) + r + 1 / (4 * r) - log(2 * pi * r) / 2
        if which == "iii":
            g3p = gamma3_prime_surrogate(precision).value
            return log(g3p) + 2 * n * (log(2 * d) - log(pi)) + pi * r / d
        raise ValueError(f"unknown bound name: {which!r}")


# ---------------------------------------------------------------------------
# Geometric tail bounds (the "< 1 beyond gamma4 r" corollaries)


def _coefficient_norm_scaled(poly, d, r, precision: int) -> mpf:
    """``sum_j |c_j| d^(2n-j) r^j``: an upper bound for the circle sup norm."""
    with mp.workprec(precision):
        coeffs = poly.coefficients
        deg = len(coeffs) - 1
        acc = mpf(0)
        p = mpf(1)
        for j, c in enumerate(coeffs):
            if c:
                acc += fabs(mpf(c.numerator) / c.denominator) * p * d ** (deg - j)
            p *= r
        return acc


def _tail_bound(frame, r, precision: int, family: str, head_budget: int) -> mpf:
    with mp.workprec(precision + 16):
        d = frame.gap_modulus(precision)
        r = mpf(r)
        fam = gamma_family(frame, precision)
        if family == "lidstone":
            if fam.gamma4 is None:
                raise ValueError("tail bound requires gap modulus below pi")
            ratio = (d / pi) ** 2
            prefac = gamma3_surrogate(precision).value * pi**2 / (pi**2 - d**2)
            growth = 3 * pi * r / (2 * d)
            start = int(mpceil(fam.gamma4 * r))
            poly = lidstone_poly
        else:
            if fam.gamma4_prime is None:
                raise ValueError("tail bound requires gap modulus below pi/2")
            ratio = (2 * d / pi) ** 2
            prefac = (gamma3_prime_surrogate(precision).value * pi**2
                      / (pi**2 - 4 * d**2))
            growth = pi * r / d
            start = int(mpceil(fam.gamma4_prime * r))
            poly = whittaker_poly

        def remainder(n_cut: int) -> mpf:
            return prefac * exp(growth) * ratio**n_cut

        # Closed-form geometric remainder, tightened with exact-coefficient
        # head terms only while the running estimate is not already small.
        n_cut = max(start, 1)
        head = mpf(0)
        while head + remainder(n_cut) >= mpf("0.97") and n_cut < start + head_budget:
            head += _coefficient_norm_scaled(poly(n_cut), d, r, precision)
            n_cut += 1
        return head + remainder(n_cut)


def lidstone_tail_bound(frame, r, precision: int = 256,
                        head_budget: int = 48) -> mpf:
    """Upper bound for ``sum_{n >= ceil(gamma4 r)} |scaled Lambda_n|_r``.

    Exact coefficient norms for the first few indices plus the closed-form
    geometric remainder implied by sup bound (iii).  The defining corollary
    asserts this is eventually below 1.
    """
    return _tail_bound(frame, r, precision, "lidstone", head_budget)


def whittaker_tail_bound(frame, r, precision: int = 256,
                         head_budget: int = 48) -> mpf:
    """Whittaker analog of :func:`lidstone_tail_bound` (start ``gamma4' r``)."""
    return _tail_bound(frame, r, precision, "whittaker", head_budget)
