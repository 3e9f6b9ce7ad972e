from fractions import Fraction

from degseq import enumerate_pairings, u_functionals
from degseq.oracle import sequences_upto, stat_Z
from degseq.suites import EZ_OVER_U2_C, SUITES, suite_moments


def test_ez_over_u2_only_22_exceeds_three():
    above = []
    for d in sequences_upto(12):
        u2 = u_functionals(d, exact=True).U2
        if u2 == 0:
            continue
        ratio = enumerate_pairings(d, statistics={"Z": stat_Z}).expectations["Z"] / u2
        assert ratio <= EZ_OVER_U2_C
        if ratio > 3:
            above.append((d, ratio))
    assert above == [((2, 2), Fraction(16, 3))]


def test_moments_suite():
    res = suite_moments()
    assert res.ok, res.failures


def test_suite_registry():
    assert set(SUITES) == {"moments", "switching", "s-formula", "omega-star", "oracle-identities", "inequalities"}
