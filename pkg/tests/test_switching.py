from fractions import Fraction

import pytest

from degseq import SIMPLE, Pairing, SignatureMatrix, SwitchMismatch, is_simple, signature_of, validate_sequence
from degseq.switching import (
    InverseLoopSpec, InverseMultiSpec, LoopSwitch, MultiEdgeSwitch, census_ratio, forward_loop,
    forward_multi, forward_multi_choices, induced_inverse, induced_inverse_loop, inverse_loop,
    inverse_multi, leading_ratio, star_split, switching_suite,
)
from degseq.core import to_multigraph

D6 = validate_sequence([2, 2, 1, 1, 1, 1])  # v0: 0,1  v1: 2,3  leaves: 4..7


def _double_edge():
    return Pairing.from_pairs(D6, [(0, 2), (1, 3), (4, 5), (6, 7)])


def test_forward_multi_good_example():
    p = _double_edge()
    s = MultiEdgeSwitch(0, 1, ((0, 2), (1, 3)), ((4, 5), (6, 7)))
    r = forward_multi(p, s)
    assert r.good
    assert to_multigraph(r.pairing).edges == {(0, 2): 1, (1, 3): 1, (0, 4): 1, (1, 5): 1}
    assert is_simple(r.pairing)
    back = inverse_multi(r.pairing, induced_inverse(s))
    assert back.good and back.pairing == p


def test_forward_multi_repeated_aux_rejected():
    with pytest.raises(SwitchMismatch):
        MultiEdgeSwitch(0, 1, ((0, 2), (1, 3)), ((4, 5), (4, 5)))
    with pytest.raises(SwitchMismatch):
        MultiEdgeSwitch(0, 0, ((0, 1),), ((4, 5),))


def test_forward_multi_condition_v():
    d = validate_sequence([3, 2, 1, 1, 1, 1, 1])  # v0: 0,1,2  v1: 3,4  leaves 5..9
    p = Pairing.from_pairs(d, [(0, 3), (1, 4), (2, 5), (6, 7), (8, 9)])
    r = forward_multi(p, MultiEdgeSwitch(0, 1, ((0, 3), (1, 4)), ((2, 5), (6, 7))))
    assert "v" in r.violations and not r.good


def test_forward_multi_wrong_count():
    p = _double_edge()
    with pytest.raises(SwitchMismatch):
        forward_multi(p, MultiEdgeSwitch(0, 1, ((0, 2),), ((4, 5),)))


def test_inverse_condition_vi():
    d = validate_sequence([3, 2, 2, 1])  # v0: 0,1,2  v1: 3,4  v2: 5,6  v3: 7
    p = Pairing.from_pairs(d, [(0, 5), (1, 6), (2, 3), (4, 7)])
    r = inverse_multi(p, InverseMultiSpec(0, 3, (0,), (7,)))
    assert "vi" in r.violations


def test_inverse_condition_ix():
    d = validate_sequence([2, 1, 1])
    p = Pairing.from_pairs(d, [(0, 2), (1, 3)])
    r = inverse_multi(p, InverseMultiSpec(1, 2, (2,), (3,)))
    assert "ix" in r.violations


def test_inverse_literally_clean_but_not_reversible():
    p = Pairing.from_pairs(D6, [(0, 7), (1, 3), (2, 6), (4, 5)])
    r = inverse_multi(p, InverseMultiSpec(1, 5, (2,), (7,)))
    assert r.violations == {"reverse"}


def test_inverse_needs_no_ij_pairs():
    with pytest.raises(SwitchMismatch):
        inverse_multi(_double_edge(), InverseMultiSpec(0, 1, (0,), (2,)))


def test_forward_choices_enumerate_all():
    p = _double_edge()
    choices = list(forward_multi_choices(p, 0, 1))
    # ordered pairs of distinct remaining pairs, each in two orientations
    assert len(choices) == 2 * 1 * 4
    assert sum(forward_multi(p, s).good for s in choices) == 8


D7 = validate_sequence([2, 1, 1, 1, 1, 1, 1])


def test_forward_loop_good_example():
    p = Pairing.from_pairs(D7, [(0, 1), (2, 3), (4, 5), (6, 7)])
    s = LoopSwitch(0, ((0, 1),), ((2, 3),), ((4, 5),))
    r = forward_loop(p, s)
    assert r.good and is_simple(r.pairing)
    assert sorted(r.pairing.pairs()) == [(0, 2), (1, 5), (3, 4), (6, 7)]
    back = inverse_loop(r.pairing, induced_inverse_loop(s))
    assert back.good and back.pairing == p


def test_forward_loop_condition_a():
    d = validate_sequence([3, 1, 1, 1, 1, 1])  # v0: 0,1,2
    p = Pairing.from_pairs(d, [(0, 1), (2, 3), (4, 5), (6, 7)])
    r = forward_loop(p, LoopSwitch(0, ((0, 1),), ((2, 3),), ((4, 5),)))
    assert "a" in r.violations


def test_forward_loop_needs_no_multi_edges():
    d = validate_sequence([4, 2, 1, 1])  # v0: 0..3  v1: 4,5
    p = Pairing.from_pairs(d, [(0, 1), (2, 4), (3, 5), (6, 7)])
    with pytest.raises(SwitchMismatch):
        forward_loop(p, LoopSwitch(0, ((0, 1),), ((6, 7),), ((2, 4),)))


def test_loop_switch_validation():
    with pytest.raises(SwitchMismatch):
        LoopSwitch(0, ((0, 1),), ((2, 3),), ((2, 3),))
    with pytest.raises(SwitchMismatch):
        LoopSwitch(0, (), (), ())


def test_inverse_loop_spec_checks():
    p = Pairing.from_pairs(D7, [(0, 2), (1, 3), (4, 5), (6, 7)])
    with pytest.raises(SwitchMismatch):
        inverse_loop(p, InverseLoopSpec(0, (0, 0), ((4, 5),)))
    r = inverse_loop(p, InverseLoopSpec(0, (0, 1), ((4, 5),)))
    assert r.good
    assert signature_of(r.pairing) == SignatureMatrix(loops={0: 1})


@pytest.mark.parametrize("k", [2, 3])
def test_rho2_closed_form(k):
    cr = census_ratio([2, 2] + [1] * (2 * k), 0, 1, 2)
    assert cr.exact == Fraction(1, 2 * k * (k - 1))
    assert cr.prediction == Fraction(2, (2 * k + 4) ** 2)


def test_rho2_approaches_prediction():
    dev = [abs(census_ratio([2, 2] + [1] * (2 * k), 0, 1, 2).relative - 1) for k in range(2, 6)]
    assert all(a > b for a, b in zip(dev, dev[1:]))


def test_leading_ratio():
    assert leading_ratio(3, 4, 0, 10) == 1
    assert leading_ratio(3, 4, 2, 10) == Fraction(6 * 12, 2 * 100)


def test_star_split():
    star, c0, c1 = star_split([2, 2, 1, 1, 1, 1], 0, 1)
    assert star == c0 + c1 and c0 > 0 and c1 > 0


def test_exhaustive_small_suite():
    rep = switching_suite(8)
    assert rep.ok, rep.failures[:3]
    assert rep.forward_good == rep.inverse_good > 0
