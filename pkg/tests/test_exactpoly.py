"""Exact checks for the Lidstone/Whittaker polynomial sequences."""

from fractions import Fraction

import pytest

from lidstone.exactpoly import (
    RationalPoly,
    eval_exact,
    factorial,
    format_rational,
    lidstone_basis_matrix,
    lidstone_poly,
    parse_rational,
    poly_derivative,
    whittaker_poly,
)

N_TEST = 20

F = Fraction


def frac_poly(*coeffs):
    return RationalPoly([F(c) for c in coeffs])


# ---------------------------------------------------------------------------
# Printed tables


def test_lidstone_table_matches_known_values():
    assert lidstone_poly(0) == frac_poly(0, 1)
    assert lidstone_poly(1) == frac_poly(0, F(-1, 6), 0, F(1, 6))
    assert lidstone_poly(2) == frac_poly(0, F(7, 360), 0, F(-1, 36), 0, F(1, 120))


def test_whittaker_table_matches_known_values():
    assert whittaker_poly(0) == frac_poly(1)
    assert whittaker_poly(1) == frac_poly(F(-1, 2), 0, F(1, 2))
    assert whittaker_poly(2) == frac_poly(F(5, 24), 0, F(-6, 24), 0, F(1, 24))
    assert whittaker_poly(3) == frac_poly(
        F(-61, 720), 0, F(75, 720), 0, F(-15, 720), 0, F(1, 720)
    )


def test_lidstone_3_against_ode_boundary_oracle():
    # Independent oracle: solve p'' = Lambda_2, p(0) = p(1) = 0 by linear
    # algebra on monomial coefficients, without using the recurrence.
    lam2 = lidstone_poly(2)
    coeffs = [F(0)] * 8
    for j in range(6):
        coeffs[j + 2] = lam2.coefficient(j) / ((j + 2) * (j + 1))
    coeffs[0] = F(0)
    coeffs[1] = -sum(coeffs)
    assert lidstone_poly(3) == RationalPoly(coeffs)


# ---------------------------------------------------------------------------
# Derivatives and evaluation


def test_derivative_defining_relations():
    assert poly_derivative(lidstone_poly(1), 2) == lidstone_poly(0)
    assert poly_derivative(whittaker_poly(2), 2) == whittaker_poly(1)
    assert poly_derivative(frac_poly(1), 1) == RationalPoly()


def test_derivative_of_zero_is_zero():
    assert poly_derivative(RationalPoly(), 3) == RationalPoly()
    assert RationalPoly().degree == -1


def test_eval_exact_boundary_values():
    assert eval_exact(lidstone_poly(1), 1) == 0
    assert eval_exact(whittaker_poly(2), 1) == 0


def test_eval_exact_against_substitution_oracle():
    # Direct powers-of-x substitution, no Horner.
    p = lidstone_poly(2)
    x = F(1, 2)
    expected = sum(c * x**j for j, c in enumerate(p.coefficients))
    assert eval_exact(p, x) == expected == F(5, 768)


# ---------------------------------------------------------------------------
# Delta properties and structural invariants


@pytest.mark.parametrize("n", range(1, N_TEST + 1))
def test_lidstone_recurrence_and_boundary(n):
    lam = lidstone_poly(n)
    assert poly_derivative(lam, 2) == lidstone_poly(n - 1)
    assert eval_exact(lam, 0) == 0
    assert eval_exact(lam, 1) == 0
    assert lam.degree == 2 * n + 1
    assert lam.coefficient(2 * n + 1) == F(1, factorial(2 * n + 1))


@pytest.mark.parametrize("n", range(1, N_TEST + 1))
def test_whittaker_recurrence_and_boundary(n):
    m = whittaker_poly(n)
    assert poly_derivative(m, 2) == whittaker_poly(n - 1)
    assert eval_exact(m, 1) == 0
    assert eval_exact(poly_derivative(m, 1), 0) == 0
    assert m.degree == 2 * n
    assert m.coefficient(2 * n) == F(1, factorial(2 * n))


def test_delta_property_exact():
    for n in range(N_TEST + 1):
        lam = lidstone_poly(n)
        mn = whittaker_poly(n)
        for k in range(N_TEST + 1):
            lam2k = poly_derivative(lam, 2 * k)
            assert eval_exact(lam2k, 1) == (1 if k == n else 0)
            assert eval_exact(lam2k, 0) == 0
            m2k = poly_derivative(mn, 2 * k)
            assert eval_exact(m2k, 1) == (1 if k == n else 0)
            assert eval_exact(poly_derivative(mn, 2 * k + 1), 0) == 0


def test_parity():
    for n in range(N_TEST + 1):
        assert all(
            c == 0 for j, c in enumerate(lidstone_poly(n).coefficients) if j % 2 == 0
        )
        assert all(
            c == 0 for j, c in enumerate(whittaker_poly(n).coefficients) if j % 2 == 1
        )


def test_even_power_expansion_identity():
    # z^(2n)/(2n)! = Lambda_n(1-z) + sum_{h<=n} Lambda_h(z)/(2n-2h)!
    for n in range(N_TEST + 1):
        lhs = [F(0)] * (2 * n + 1)
        lhs[2 * n] = F(1, factorial(2 * n))
        rhs = lidstone_poly(n).compose_affine(-1, 1)
        for h in range(n + 1):
            rhs = rhs + lidstone_poly(h).scale(F(1, factorial(2 * n - 2 * h)))
        assert rhs == RationalPoly(lhs)


# ---------------------------------------------------------------------------
# Basis matrix


def _det_bareiss(rows):
    # Fraction-free Bareiss determinant over the integers after clearing
    # denominators; independent of the library's Gaussian elimination.
    import math as _math

    n = len(rows)
    scale = F(1)
    int_rows = []
    for r in rows:
        lcm = 1
        for c in r:
            lcm = lcm * c.denominator // _math.gcd(lcm, c.denominator)
        scale /= lcm
        int_rows.append([int(c * lcm) for c in r])
    a = [list(r) for r in int_rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return F(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1] * scale


@pytest.mark.parametrize("n", [0, 1, 5])
def test_basis_matrix_nonsingular_small(n):
    matrix, det = lidstone_basis_matrix(n)
    assert det != 0
    assert _det_bareiss([list(r) for r in matrix]) == det
    if n == 0:
        # basis {z, 1-z}: columns (0,1) and (1,-1), determinant -1.
        assert matrix == ((F(0), F(1)), (F(1), F(-1)))
        assert det == -1


def test_basis_matrix_nonsingular_up_to_10():
    for n in range(11):
        _, det = lidstone_basis_matrix(n)
        assert det != 0


# ---------------------------------------------------------------------------
# Serialization and plumbing


def test_rational_serialization():
    assert format_rational(F(3, 4)) == "3/4"
    assert format_rational(F(5)) == "5"
    assert format_rational(F(-7, 2)) == "-7/2"
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("5") == F(5)


def test_poly_json_round_trip():
    p = lidstone_poly(2)
    data = p.to_json_array()
    assert data == ["0", "7/360", "0", "-1/36", "0", "1/120"]
    assert RationalPoly.from_json_array(data) == p


def test_trailing_zero_normalization():
    assert RationalPoly([1, 2, 0, 0]) == RationalPoly([1, 2])
    assert RationalPoly([0, 0]).is_zero


def test_compose_affine_oracle():
    p = frac_poly(1, 2, 3)  # 1 + 2z + 3z^2
    q = p.compose_affine(-1, 1)  # p(1 - z) = 6 - 8z + 3z^2
    assert q == frac_poly(6, -8, 3)


def test_sequence_cache_thread_safety():
    import concurrent.futures

    from lidstone import exactpoly as ep

    with ep._SEQ_LOCK:
        pass  # lock exists and is usable

    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lidstone_poly, [25] * 16))
    assert all(r == results[0] for r in results)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        lidstone_poly(-1)
    with pytest.raises(ValueError):
        whittaker_poly(-2)
