import math
from fractions import Fraction

import pytest

from degseq import (
    A_ij, B_i, F_of_M, HypothesisViolation, OddTotalDegree, SIMPLE, SignatureMatrix, log_g, log_phi,
    log_S_closed, log_S_direct, sum_log1p_lambda,
)
from degseq.estimator import (
    double_factorial_odd, log_g_all, offdiag_weight, loop_weight, sum_log1p_lambda_naive,
    sum_log_factorials,
)
from degseq.moments import moments
from degseq.oracle import enumerate_pairings
from degseq.seqgen import FamilySpec, generate
from degseq.suites import all_signatures

# 3-regular n=4: |log(formula) - log(exact)| / sqrt(xi) measured 0.714.
SMALL_REGULAR_C = 1.0


def test_log_phi():
    assert log_phi(4) == (pytest.approx(math.log(3)), 3)
    assert log_phi(8)[1] == 105
    assert log_phi(0) == (0.0, 1)
    assert double_factorial_odd(10) == 945
    big, exact = log_phi(10**6)
    assert exact is None
    assert big == pytest.approx(math.lgamma(10**6 + 1) - (5 * 10**5) * math.log(2) - math.lgamma(5 * 10**5 + 1))


def test_sum_log1p_lambda():
    assert sum_log1p_lambda([2, 2]) == pytest.approx(math.log(2))
    assert sum_log1p_lambda([1, 1, 1, 1]) == pytest.approx(6 * math.log(1.25))
    d = generate(FamilySpec("powerlaw", 1000, gamma=2.6))
    assert sum_log1p_lambda(d) == pytest.approx(sum_log1p_lambda_naive(d), rel=1e-9)


def test_series():
    assert A_ij(2, 2, 4) == pytest.approx(1.0625)
    assert B_i(2, 4) == pytest.approx(1.25)
    assert B_i(1, 10) == 1.0
    # multiplicity 1 belongs to the star entry, so a 1-1 pair carries no extra mass
    assert A_ij(1, 1, 10) == pytest.approx(1.0)


def test_series_terms():
    assert offdiag_weight(2, 2, 2, 4) == pytest.approx(0.125 / 2)
    assert loop_weight(2, 1, 4) == pytest.approx(2 / (2 * 4))


def test_F_at_simple_is_one():
    assert F_of_M(SIMPLE, [3, 3, 2]) == 1.0


def test_F_sum_equals_S():
    for d in ([2, 2], [3, 3], [3, 2, 1], [2, 2, 2], [3, 1, 1, 1]):
        tot = math.fsum(F_of_M(M, d) for M in all_signatures(d))
        assert tot == pytest.approx(math.exp(log_S_direct(d)), rel=1e-12)


def test_S_direct_hand_value():
    assert math.exp(log_S_direct([2, 2])) == pytest.approx(1.66015625, rel=1e-14)


def test_S_closed_near_direct():
    from degseq import xi_general

    d = [3] * 2000
    assert abs(log_S_direct(d) - log_S_closed(d)) <= 10 * (xi_general(d).value + 1 / 6000)


def test_one_regular_exact():
    d = [1] * 100
    exact = math.log(math.prod(range(99, 0, -2)))
    assert abs(log_g(d).log_value - exact) <= 0.05


def test_small_regular_against_oracle():
    d = [3, 3, 3, 3]
    assert enumerate_pairings(d).g == 1
    est = log_g(d, force=True)
    assert not est.hypotheses_ok
    assert abs(est.log_value - 0.0) <= SMALL_REGULAR_C * est.sqrt_xi
    with pytest.raises(HypothesisViolation):
        log_g(d)


def test_degenerate_22_flagged():
    est = log_g([2, 2], force=True)
    assert est.hypotheses == {"xi<=xi_max": False}
    with pytest.raises(HypothesisViolation) as e:
        log_g([2, 2])
    assert e.value.exit_code == 2


def test_breakdown_sums_and_p_simple():
    d = [3] * 500
    est = log_g(d)
    assert math.fsum(est.breakdown.values()) == est.log_value
    M1, M2, M3 = (float(x) for x in moments(d, 3).M[:3])
    want = -M1 / 2 + M2 / (2 * M1) - M3 / (3 * M1**2) + 0.75 + sum_log1p_lambda(d)
    assert est.log_p_simple() == pytest.approx(want, abs=1e-9)
    assert est.log10_value == pytest.approx(est.log_value / math.log(10))
    assert est.to_json()["sqrt_xi"] == pytest.approx(math.sqrt(est.xi))


def test_odd_rejected():
    with pytest.raises(OddTotalDegree):
        log_g([3, 1, 1])


def test_unknown_method():
    with pytest.raises(ValueError):
        log_g([2, 2, 2], "nope")


def test_bivalued_regular_differs_by_M3_term():
    d = [3] * 1000
    bv = log_g(d, "bivalued")
    gen = log_g(d, "general")
    M1, M3 = 3000, 6000
    assert bv.log_value - gen.log_value == pytest.approx(M3 / (3 * M1**2), rel=1e-6)
    assert abs(bv.log_value - gen.log_value) <= bv.sqrt_xi


def test_bivalued_needs_two_values():
    with pytest.raises(HypothesisViolation):
        log_g([4, 3, 3, 2], "bivalued")


def test_m2_method_reports_ratio():
    est = log_g([2] * 400, "m2")
    assert est.extra["M2/M1^(9/8)"] == pytest.approx(800 / 800**1.125)


def test_powerlaw_short_and_long():
    d = generate(FamilySpec("powerlaw", 10_000, gamma=2.6))
    est = log_g(d, "powerlaw", gamma=2.6)
    assert est.hypotheses_ok
    assert abs(est.extra["log_value_short"] - est.log_value) < 1.0
    assert log_g(d, "powerlaw", gamma=2.4, force=True).hypotheses["gamma>5/2"] is False


def test_longtail_parameters():
    with pytest.raises(HypothesisViolation):
        log_g([3] * 100, "longtail", alpha=0.4, beta=0.1, gamma=2.5)
    with pytest.raises(ValueError):
        log_g([3] * 100, "longtail")


def test_log_g_all_keys():
    out = log_g_all([3] * 100)
    assert set(out) == {"general", "m2", "powerlaw", "bivalued"}


def test_sum_log_factorials():
    assert sum_log_factorials([3, 2]) == pytest.approx(math.log(12))
