import math
from fractions import Fraction

import pytest

from degseq import HypothesisViolation, xi_bounds_suite, xi_general, xi_theorem1, xi_theorem3, xi_theorem4
from degseq.errbounds import default_split_index, split_bound_terms, theorem4_beta_bound
from degseq.moments import moments, split
from degseq.oracle import sequences_upto

from literal import xi_literal

# xi_general / xi_theta for 3-regular sequences tends to 9/2 from below; frozen with headroom.
THETA_C = 5.0
# Bi-valued case (b) closed form against the split bound at n=1e5 measured 0.695.
CASE_B_RATIO = (0.5, 1.0)


@pytest.mark.parametrize("d", [(3, 2, 2, 1), (4, 4, 2), (5, 3, 3, 1, 1, 1), (2, 2), (6, 1, 1, 1, 1, 1, 1)])
def test_master_xi_matches_literal(d):
    xt = xi_general(d, exact=True)
    assert xt.exact == xi_literal(d)
    assert math.fsum(xt.terms.values()) == pytest.approx(xt.value, rel=1e-12)


def test_master_xi_exhaustive_small():
    for d in sequences_upto(12, 5):
        assert xi_general(d, exact=True).exact == xi_literal(d)


def test_all_ones_is_zero():
    assert xi_general([1] * 10).value == 0


def test_regular_scaling_stable():
    a = xi_general([3] * 1000).value * 1000
    b = xi_general([3] * 10_000).value * 10_000
    assert abs(a / b - 1) < 0.01


@pytest.mark.parametrize("n", [100, 1000])
def test_theta_dominates_regular(n):
    r = xi_bounds_suite([3] * n)
    assert r.xi_general.value <= THETA_C * r.xi_theta.value


def test_components_nonnegative_and_finite():
    for d in ([3, 2, 2, 1], [9, 4, 4, 2, 1, 1, 1], [2] * 30, [1, 1]):
        r = xi_bounds_suite(d)
        for k, v in r.to_json().items():
            if isinstance(v, dict) and "value" in v:
                assert v["value"] >= 0 and math.isfinite(v["value"]), k


def test_h_zero_split_is_direct_substitution():
    d = [7, 5, 3, 3, 2, 1]
    r = xi_bounds_suite(d, h=0, exact=True)
    M = (None,) + tuple(Fraction(x) for x in moments(d, 4).M)
    zero = (None, 0, 0, 0, 0)
    want = sum(split_bound_terms(M, zero, M).values())
    assert r.xi_split.exact == want
    assert r.xi_split.exact == (M[2] + M[3]) / M[1] ** 2 + M[2] * M[3] / M[1] ** 3 \
        + (M[2] ** 3 + M[2] ** 2 * M[3]) / M[1] ** 4 + (M[2] ** 4 + M[2] * M[3] * M[4]) / M[1] ** 5


def test_default_split_index():
    d = [10, 9, 3, 2, 2, 2]  # M1 = 28, sqrt ~ 5.29
    assert default_split_index(d) == 2
    r = xi_bounds_suite(d)
    assert r.h == 2 and r.preconditions["d_h>=sqrt(M1)"] and r.preconditions["d_{h+1}<=sqrt(M1)"]


def test_split_uses_chosen_h():
    d = [10, 9, 3, 2, 2, 2]
    H, L = split(d, 1, 4)
    assert xi_bounds_suite(d, h=1).h == 1
    assert H[0] == 10 and L[0] == 18


def test_theorem1_hand_formula():
    n = 50
    t = xi_theorem1([2] * n)
    M1 = M2 = 2 * n
    assert t.value == pytest.approx(M2**4 / M1**4.5 + M2**1.5 / M1**2 + 1 / M1)
    assert t.hypotheses_ok


def test_theorem3_regular_case_a():
    d, n = 4, 10_000
    t = xi_theorem3(n, d, d, n, case="a")
    assert t.value == pytest.approx(1.5 * d**3 / n)
    assert t.variant == "a"


def test_theorem3_case_selection():
    n = 10**5
    Delta, ell = math.floor(n**0.55), math.floor(n**0.1)
    t = xi_theorem3(n, 3, Delta, ell)
    assert t.variant == "b" and t.checks["Delta>=sqrt(delta*n)"]
    want = (Delta**5 * ell**3 / (27 * n**3) + Delta**5 * ell**2 / (9 * n**3) + 27 / n + Delta**3 * ell / n**2)
    assert t.value == pytest.approx(want)
    split_xi = xi_bounds_suite([Delta] * ell + [3] * (n - ell)).xi_split.value
    lo, hi = CASE_B_RATIO
    assert lo <= t.value / split_xi <= hi
    assert xi_theorem3(10_000, 3, 63, 6).variant == "a"


def test_theorem3_rejects_small_delta():
    with pytest.raises(HypothesisViolation):
        xi_theorem3(100, 2, 5, 3)


def test_theorem4():
    with pytest.raises(HypothesisViolation) as e:
        xi_theorem4(1000, 0.5, 0.1, 2.5)
    assert "alpha>1/2" in e.value.failed
    with pytest.raises(HypothesisViolation):
        xi_theorem4(1000, 0.51, 0.1, 2.0)
    b = theorem4_beta_bound(0.51, 2.5)
    t = xi_theorem4(10**6, 0.51, b / 2, 2.5)
    assert t.value == pytest.approx((10**6) ** (5 * 0.51 + b / 2 + 6 * b / 2 / 2.5 - 3))
    assert t.value < 1
