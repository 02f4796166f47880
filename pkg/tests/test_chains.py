"""Chain evaluation tests: term values, orderings, degenerations, J, bounds."""

import math

import numpy as np
import pytest

from hhcert.certify import NotPositiveError, estimate_modulus
from hhcert.chains import (
    NotLogConvexError,
    classical_hh_terms,
    closed_form_J,
    dragomir_mond_chain,
    max_feasible_c,
    theorem1_chain,
    theorem2_bound,
)
from hhcert.expr import parse
from hhcert.quadrature import integrate

EXP_X2 = parse("exp(x^2)")
EXP_X = parse("exp(x)")
ONE = parse("1")

EXP_X2_MEAN = 1.4626517459071816  # sum_n 1/(n!(2n+1)), 25 terms


def values(report):
    return [v for _, v in report.terms]


# --------------------------------------------------------------------------
# classical chain
# --------------------------------------------------------------------------

def test_classical_square():
    rep = classical_hh_terms(parse("x^2"), 0.0, 1.0)
    assert values(rep) == pytest.approx([0.25, 1.0 / 3.0, 0.5], rel=1e-12)
    assert rep.holds and rep.min_margin > 0


def test_classical_affine_collapses():
    rep = classical_hh_terms(parse("x"), 0.0, 2.0)
    assert values(rep) == pytest.approx([1.0, 1.0, 1.0], rel=1e-14)
    assert max(abs(m) for m in rep.margins) <= 1e-12
    assert rep.holds


def test_classical_running_example():
    rep = classical_hh_terms(EXP_X2, 0.0, 1.0)
    assert values(rep) == pytest.approx(
        [1.2840254166877414, EXP_X2_MEAN, 1.8591409142295225], rel=1e-9
    )
    assert rep.holds


def test_classical_allows_sign_changing_functions():
    # plain convexity does not need positivity
    rep = classical_hh_terms(parse("x^2 - 1"), -2.0, 2.0)
    assert rep.holds


# --------------------------------------------------------------------------
# six-term chain
# --------------------------------------------------------------------------

def test_dm_constant_collapses_entirely():
    rep = dragomir_mond_chain(parse("3.25"), -1.0, 2.0)
    assert values(rep) == pytest.approx([3.25] * 6, rel=1e-12)
    assert max(abs(m) for m in rep.margins) <= 1e-12 * 3.25
    assert rep.holds


def test_dm_log_affine_collapses_first_three_terms():
    rep = dragomir_mond_chain(EXP_X, 0.0, 1.0)
    expected = [
        math.sqrt(math.e),
        math.sqrt(math.e),
        math.sqrt(math.e),
        math.e - 1.0,
        math.e - 1.0,
        (1.0 + math.e) / 2.0,
    ]
    assert values(rep) == pytest.approx(expected, rel=1e-9)
    assert rep.holds
    names = [n for n, _ in rep.terms]
    assert names == [
        "midpoint_value",
        "exp_mean_log",
        "mean_geometric_reflected",
        "mean_integral",
        "log_mean_endpoints",
        "endpoint_average",
    ]


def test_dm_running_example_strictly_increases():
    rep = dragomir_mond_chain(EXP_X2, 0.0, 1.0)
    assert rep.holds
    assert all(m > 0 for m in rep.margins)
    assert values(rep)[3] == pytest.approx(EXP_X2_MEAN, abs=1e-9)


def test_dm_rejects_non_positive_function():
    with pytest.raises(NotPositiveError):
        dragomir_mond_chain(parse("x"), -1.0, 1.0)


# --------------------------------------------------------------------------
# strengthened chain
# --------------------------------------------------------------------------

def test_theorem1_constant_with_unit_modulus():
    rep = theorem1_chain(ONE, 0.0, 1.0, 1.0)
    assert values(rep) == pytest.approx(
        [1.0 + 1.0 / 12.0, 1.0, 1.0, 1.0 - 1.0 / 6.0, 1.0 - 1.0 / 6.0], rel=1e-12
    )
    assert not rep.holds
    assert rep.margins[0] == pytest.approx(-1.0 / 12.0, abs=1e-12)
    assert rep.min_margin == pytest.approx(-1.0 / 6.0, abs=1e-12)


def test_theorem1_holds_at_certified_modulus():
    cert = estimate_modulus(EXP_X2, 0.0, 1.0, grid_n=32, refine_rounds=2)
    rep = theorem1_chain(EXP_X2, 0.0, 1.0, cert.c_star)
    assert rep.holds and rep.min_margin > 0


def test_theorem1_degenerates_bitwise_at_zero_modulus():
    corpus = [
        (EXP_X2, 0.0, 1.0),
        (EXP_X, 0.0, 1.0),
        (parse("2.5"), -1.0, 2.0),
        (parse("exp(1.3*x^2 - 0.7*x + 0.2)"), -0.8, 1.1),
        (parse("(x + 2.5)^-1.25"), -1.0, 1.0),
    ]
    for f, a, b in corpus:
        t1 = theorem1_chain(f, a, b, 0.0)
        dm = dragomir_mond_chain(f, a, b)
        vt, vd = values(t1), values(dm)
        assert vt[0] == vd[0]
        assert vt[1] == vd[2]
        assert vt[2] == vd[3]
        assert vt[3] == vd[4]
        assert vt[4] == vd[5]


def test_theorem1_min_margin_nonincreasing_in_c():
    cert = estimate_modulus(EXP_X2, 0.0, 1.0, grid_n=16, refine_rounds=1)
    c = cert.c_star / 2.0
    m1 = theorem1_chain(EXP_X2, 0.0, 1.0, c).min_margin
    m2 = theorem1_chain(EXP_X2, 0.0, 1.0, 2.0 * c).min_margin
    assert m2 <= m1 + 1e-15


def test_theorem1_rejects_negative_modulus():
    with pytest.raises(ValueError):
        theorem1_chain(EXP_X2, 0.0, 1.0, -0.5)


# --------------------------------------------------------------------------
# closed-form J
# --------------------------------------------------------------------------

def test_J_at_one_is_exactly_one_sixth():
    assert closed_form_J(1.0) == 1.0 / 6.0


def test_J_at_e():
    # (e(1-2) + 1 + 2)/1 = 3 - e
    assert closed_form_J(math.e) == pytest.approx(3.0 - math.e, rel=1e-13)


@pytest.mark.parametrize("u", [5.0, 0.2, 37.5, 1.0001, 0.75])
def test_J_reflection_identity(u):
    # substitution t -> 1-t gives u*J(1/u) = J(u)
    assert u * closed_form_J(1.0 / u) == pytest.approx(closed_form_J(u), rel=1e-12)


def test_J_matches_quadrature_across_scales():
    for u in np.logspace(-3, 3, 40):
        u = float(u)
        oracle = integrate(lambda ts: ts * (1 - ts) * np.power(u, ts), 0.0, 1.0, 1e-12)
        assert closed_form_J(u) == pytest.approx(oracle.value, abs=1e-10)


def test_J_accurate_through_the_branch_switch():
    # both sides of |ln u| = 0.25 agree with quadrature to 1e-12 relative
    for k in [-0.2501, -0.2499, -0.01, 1e-5, 0.01, 0.2499, 0.2501]:
        u = math.exp(k)
        oracle = integrate(lambda ts: ts * (1 - ts) * np.power(u, ts), 0.0, 1.0, 1e-13)
        assert closed_form_J(u) == pytest.approx(oracle.value, rel=1e-12)


def test_J_rejects_bad_input():
    for bad in [0.0, -1.0, float("inf"), float("nan")]:
        with pytest.raises(ValueError):
            closed_form_J(bad)


# --------------------------------------------------------------------------
# product-integral bound
# --------------------------------------------------------------------------

def test_theorem2_zero_modulus_reduces_to_endpoint_product():
    rep = theorem2_bound(EXP_X2, 0.0, 1.0, 0.0)
    assert rep.rhs_corrected == EXP_X2(0.0) * EXP_X2(1.0)
    assert rep.rhs_as_printed is None
    # e^{x^2} e^{(1-x)^2} integrates to something below f(0) f(1) = e
    assert rep.holds_corrected


def test_theorem2_equal_endpoints_bracket():
    # f(a) = f(b) = p makes k = 0 and bracket = 2 p J(1) = p/3
    rep = theorem2_bound(parse("2.5"), 0.0, 1.0, 0.5, form="both")
    assert rep.k == 0.0
    assert rep.bracket_value == pytest.approx(2.5 / 3.0, rel=1e-14)
    assert not rep.printed_applicable and rep.rhs_as_printed is None
    expected_rhs = 2.5 * 2.5 + 0.5**2 / 30.0 - 0.5 * 2.5 / 3.0
    assert rep.rhs_corrected == pytest.approx(expected_rhs, rel=1e-14)


def test_theorem2_holds_at_certified_modulus():
    cert = estimate_modulus(EXP_X2, 0.0, 1.0, grid_n=32, refine_rounds=2)
    rep = theorem2_bound(EXP_X2, 0.0, 1.0, cert.c_star, form="both")
    assert rep.holds_corrected
    assert rep.printed_applicable  # f(1) - f(0) = e - 1 > 0 and != 1
    assert rep.holds_as_printed is not None


def test_theorem2_manual_recomputation():
    f = parse("exp(0.8*x^2 + 0.1*x)")
    a, b, c = -0.5, 1.25, 0.37
    rep = theorem2_bound(f, a, b, c)
    fa, fb = f(a), f(b)
    bracket = fb * closed_form_J(fa / fb) + fa * closed_form_J(fb / fa)
    q2 = c * (b - a) ** 2
    assert rep.bracket_value == bracket
    assert rep.rhs_corrected == pytest.approx(fa * fb + q2 * q2 / 30.0 - q2 * bracket, rel=1e-14)
    assert rep.k == pytest.approx(math.log(fa / fb), rel=1e-14)


def test_theorem2_bracket_matches_mean_identity():
    # f(b) J(f(a)/f(b)) + f(a) J(f(b)/f(a)) = 4 (A - L)/k^2
    rng = np.random.default_rng(21)
    from hhcert.means import arithmetic_mean, logarithmic_mean

    for _ in range(300):
        fa = float(10.0 ** rng.uniform(-3, 3))
        fb = float(10.0 ** rng.uniform(-3, 3))
        k = math.log(fa / fb)
        if abs(k) <= 1e-3:
            continue
        bracket = fb * closed_form_J(fa / fb) + fa * closed_form_J(fb / fa)
        identity = 4.0 * (arithmetic_mean(fa, fb) - logarithmic_mean(fa, fb)) / k**2
        assert bracket == pytest.approx(identity, rel=1e-10)
        assert bracket >= 0.0


def test_theorem2_printed_form_applicability():
    # f decreasing: f(b) - f(a) < 0, the printed logarithm does not exist
    rep = theorem2_bound(parse("exp(-x)"), 0.0, 1.0, 0.1, form="both")
    assert not rep.printed_applicable
    assert rep.rhs_as_printed is None and rep.holds_as_printed is None
    # f(b) - f(a) = 1 exactly: the printed denominator ln(1)^2 vanishes
    rep = theorem2_bound(parse("x + 1"), 0.0, 1.0, 0.1, form="both")
    assert not rep.printed_applicable
    assert rep.rhs_as_printed is None


def test_theorem2_lhs_reflection_invariant():
    # replacing f(x) by f(a+b-x) leaves the product integrand unchanged
    tol = 1e-10
    lhs1 = theorem2_bound(EXP_X2, 0.0, 1.0, 0.0, tol=tol).lhs
    lhs2 = theorem2_bound(parse("exp((1-x)^2)"), 0.0, 1.0, 0.0, tol=tol).lhs
    assert abs(lhs1 - lhs2) <= 2 * tol * max(1.0, abs(lhs1))


def test_theorem2_form_validation():
    with pytest.raises(ValueError):
        theorem2_bound(EXP_X2, 0.0, 1.0, 0.0, form="fancy")


# --------------------------------------------------------------------------
# max feasible modulus
# --------------------------------------------------------------------------

def test_maxc_constant_is_zero():
    assert abs(max_feasible_c(ONE, 0.0, 1.0)) <= 1e-9


def test_maxc_log_affine_nonnegative():
    assert max_feasible_c(EXP_X, 0.0, 1.0) >= 0.0


def test_maxc_dominates_certificate():
    cert = estimate_modulus(EXP_X2, 0.0, 1.0, grid_n=32, refine_rounds=2)
    value = max_feasible_c(EXP_X2, 0.0, 1.0)
    assert value >= cert.c_star
    # the boundary is where the chain stops holding
    assert theorem1_chain(EXP_X2, 0.0, 1.0, value).holds
    assert not theorem1_chain(EXP_X2, 0.0, 1.0, value + 1e-6).holds


def test_maxc_raises_for_non_log_convex():
    with pytest.raises(NotLogConvexError) as err:
        max_feasible_c(parse("exp(-x^2)"), 0.0, 1.0)
    assert err.value.report.min_margin < 0


def test_chains_hold_at_the_exact_modulus_of_exp_quadratic():
    # for f = exp(alpha x^2 + beta x + gamma) the maximal modulus is exactly
    # alpha * min f (the exponent is quadratic), so both bounds must hold at
    # that value -- no grid estimate involved
    rng = np.random.default_rng(99)
    checked = 0
    while checked < 15:
        alpha = float(rng.uniform(0.05, 3.0))
        beta = float(rng.uniform(-2.0, 2.0))
        gamma = float(rng.uniform(-1.0, 1.0))
        a, b = sorted(rng.uniform(-2.0, 2.0, size=2))
        if b - a < 0.15:
            continue
        checked += 1
        f = parse(f"exp({alpha!r}*x^2 + {beta!r}*x + {gamma!r})")
        vertex = -beta / (2.0 * alpha)
        candidates = [a, b] + ([vertex] if a < vertex < b else [])
        c_true = alpha * min(
            math.exp(alpha * x * x + beta * x + gamma) for x in candidates
        )
        assert theorem1_chain(f, a, b, c_true).holds
        assert theorem2_bound(f, a, b, c_true).holds_corrected
