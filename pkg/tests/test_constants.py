import math

import numpy as np
import pytest

from coprime_lab.constants import (
    ConstantValue,
    catalan,
    delta_determinant_constant,
    euler_product_inv_zeta2,
    gaussian_coprime_constant,
    inv_zeta,
    pairwise_triple_constant,
    reference_constant,
    zeta,
)
from coprime_lab.errors import PrecisionError
from coprime_lab.exact import pairwise_coprime_triple_count
from coprime_lab.sieve import primes_up_to

# Printed reference digits below are truncations of the true decimal
# expansions, so each carries one unit of slack in its last printed place.
PRINT6 = 1e-6


def assert_certified(cv: ConstantValue, true_value: float, slack: float = 0.0):
    assert abs(cv.value - true_value) <= cv.abs_error_bound + slack


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------


def test_zeta2_closed_form():
    cv = zeta(2, 1e-12)
    assert cv.abs_error_bound <= 1e-12
    assert abs(cv.value - math.pi**2 / 6) <= 1e-12


def test_zeta3_against_direct_summation():
    # independent oracle: direct sum to 1e7 plus the integral tail bracket
    n = np.arange(1, 10**7 + 1, dtype=np.float64)
    s = float(np.sum(1.0 / (n * n * n)))
    lo, hi = 1 / (2 * (10**7 + 1) ** 2), 1 / (2 * 10**14)
    oracle = s + (lo + hi) / 2
    cv = zeta(3, 1e-12)
    assert abs(cv.value - oracle) <= 1e-12 + (hi - lo)
    assert abs(cv.value - 1.2020569031595943) <= 2e-12


def test_zeta_decreasing_toward_one():
    vals = [zeta(k, 1e-12).value for k in range(2, 21)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > 1 for v in vals)
    assert zeta(64, 1e-12).value == pytest.approx(1.0, abs=1e-14)


def test_zeta_certificate_holds():
    exact = {2: math.pi**2 / 6, 4: math.pi**4 / 90, 6: math.pi**6 / 945}
    for k, true in exact.items():
        for eps in (1e-6, 1e-9, 1e-12, 1e-14):
            cv = zeta(k, eps)
            assert cv.abs_error_bound <= eps
            assert_certified(cv, true)


def test_zeta_errors():
    with pytest.raises(ValueError):
        zeta(1)
    with pytest.raises(ValueError):
        zeta(65)
    with pytest.raises(PrecisionError):
        zeta(2, 1e-15)


def test_inv_zeta():
    cv = inv_zeta(2, 1e-12)
    assert abs(cv.value - 6 / math.pi**2) <= 1e-12


# ---------------------------------------------------------------------------
# Euler product for 1/zeta(2)
# ---------------------------------------------------------------------------


def test_euler_identity_product_times_series():
    for eps in (1e-6, 1e-9):
        prod = euler_product_inv_zeta2(eps)
        series = zeta(2, eps)
        assert abs(prod.value * series.value - 1.0) <= 4 * eps
        assert prod.abs_error_bound <= eps


def test_euler_product_first_factor_bracket():
    # partial products are nested brackets shrinking onto the limit
    pr = primes_up_to(1000).astype(np.float64)
    partials = np.cumprod(1.0 - 1.0 / (pr * pr))
    assert partials[0] == 0.75
    assert np.all(np.diff(partials) < 0)
    true = 6 / math.pi**2
    assert np.all(partials > true)
    assert 0.6 < true < 0.75


def test_euler_product_closed_form_agreement():
    cv = euler_product_inv_zeta2(1e-9)
    assert abs(cv.value - 6 / math.pi**2) <= 1e-9


def test_euler_product_larger_p_decreases_value():
    vals = [euler_product_inv_zeta2(eps).value for eps in (1e-3, 1e-5, 1e-7)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# Catalan and the Gaussian coprimality constant
# ---------------------------------------------------------------------------


def test_catalan_alternating_bracket():
    # first two partial sums bracket the constant
    cv = catalan(1e-9)
    assert 1 - 1 / 9 <= cv.value <= 1.0


def test_catalan_published_digits():
    cv = catalan(1e-9)
    assert abs(cv.value - 0.915965594) < 1e-9
    assert cv.abs_error_bound <= 1e-9
    assert_certified(cv, 0.915965, slack=PRINT6)


def test_gaussian_constant():
    cv = gaussian_coprime_constant(1e-9)
    assert_certified(cv, 0.663700, slack=PRINT6)
    g = catalan(1e-12).value
    assert cv.value == pytest.approx(6 / (math.pi**2 * g), abs=1e-9)


def test_catalan_errors():
    with pytest.raises(PrecisionError):
        catalan(1e-13)


# ---------------------------------------------------------------------------
# Q and Delta
# ---------------------------------------------------------------------------


def test_q_published_digits():
    cv = pairwise_triple_constant(1e-6)
    assert abs(cv.value - 0.286747) < 1e-6
    assert cv.abs_error_bound <= 1e-6
    assert_certified(cv, 0.286747, slack=PRINT6)


def test_q_partial_product_upper_bracket():
    # the p = 2 factor alone gives 32/pi^4, an upper bracket
    cv = pairwise_triple_constant(1e-6)
    first = 36 / math.pi**4 * (1 - 1 / 9)
    assert cv.value < first == pytest.approx(0.3285, abs=2e-4)


def test_q_matches_exact_triple_count():
    cv = pairwise_triple_constant(1e-6)
    r = pairwise_coprime_triple_count(1000)
    assert abs(cv.value - r.value) < 0.01


def test_delta_one_is_inverse_zeta2_exactly():
    cv = delta_determinant_constant(1, 1e-6)
    assert abs(cv.value - 6 / math.pi**2) <= 1e-12
    assert cv.method == "closed_form"


def test_delta_limit_published_digits():
    cv = delta_determinant_constant(None, 1e-6)
    assert abs(cv.value - 0.353236) < 5e-6
    assert_certified(cv, 0.353236, slack=PRINT6)


def test_delta_decreasing_in_dimension():
    limit = delta_determinant_constant(None, 1e-8).value
    vals = [delta_determinant_constant(n, 1e-8).value for n in range(1, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v > limit for v in vals)
    # convergence is ~0.2 * 2^-n; dimension 9 is the first within 1e-3
    assert vals[8] - limit < 1e-3
    assert vals[7] - limit > 1e-3


def test_delta_errors():
    with pytest.raises(ValueError):
        delta_determinant_constant(0)
    with pytest.raises(ValueError):
        delta_determinant_constant(501)
    with pytest.raises(PrecisionError):
        delta_determinant_constant(None, 1e-9)


# ---------------------------------------------------------------------------
# reference routing
# ---------------------------------------------------------------------------


def test_reference_routing():
    assert reference_constant("odd_pair").value == pytest.approx(0.810569, abs=1e-6)
    assert reference_constant("prime_density").value == 0.0
    assert reference_constant("pair").value == pytest.approx(0.607927, abs=1e-6)
    assert reference_constant("gaussian").value == pytest.approx(0.663700, abs=1e-6)
    assert reference_constant("triple3").value == pytest.approx(0.286747, abs=1e-6)
    assert reference_constant("det").value == pytest.approx(0.353236, abs=1e-5)
    assert reference_constant("det", dim=1).value == pytest.approx(6 / math.pi**2, abs=1e-12)
    assert reference_constant("ktuple", k=4).value == pytest.approx(90 / math.pi**4, abs=1e-9)
    assert reference_constant("kfree", j=2).value == pytest.approx(6 / math.pi**2, abs=1e-9)
    assert reference_constant("gcd_eq", t=3).value == pytest.approx(6 / (9 * math.pi**2), abs=1e-12)


def test_reference_errors():
    with pytest.raises(ValueError):
        reference_constant("mystery")
    with pytest.raises(ValueError):
        reference_constant("ktuple")
    with pytest.raises(ValueError):
        reference_constant("gcd_eq")


def test_published_digit_brackets():
    """The five headline constants bracket their printed decimals."""
    cases = [
        (euler_product_inv_zeta2(1e-6), 0.607927),
        (catalan(1e-6), 0.915965),
        (gaussian_coprime_constant(1e-6), 0.663700),
        (pairwise_triple_constant(1e-6), 0.286747),
        (delta_determinant_constant(None, 1e-6), 0.353236),
    ]
    for cv, printed in cases:
        assert_certified(cv, printed, slack=PRINT6)
        assert cv.abs_error_bound <= 1e-6
