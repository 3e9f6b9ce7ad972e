import pytest

from degseq import (
    SIMPLE, EmptySequence, InvalidSignature, NonPositiveDegree, OddTotalDegree, Pairing, SignatureMatrix,
    is_simple, read_sequence_file, signature_of, to_multigraph, validate_sequence, write_sequence_file,
)
from degseq.core import falling


def test_validate_sorts_and_keeps_order():
    d = validate_sequence([1, 3, 2])
    assert d.degrees == (3, 2, 1)
    assert d.m1 == 6 and d.even
    assert d.order == (1, 2, 0)


@pytest.mark.parametrize("raw,exc", [([], EmptySequence), ([2, 0], NonPositiveDegree), ([1, -4], NonPositiveDegree)])
def test_validate_rejects(raw, exc):
    with pytest.raises(exc):
        validate_sequence(raw)


def test_odd_total_is_flagged_not_rejected():
    d = validate_sequence([3, 1, 1])
    assert d.m1 == 5 and not d.even
    with pytest.raises(OddTotalDegree):
        d.require_even()
    with pytest.raises(OddTotalDegree):
        Pairing(d, [])


def test_histogram_and_points():
    d = validate_sequence([3, 2, 2, 1])
    assert d.histogram == ((3, 1), (2, 2), (1, 1))
    assert list(d.points(1)) == [3, 4]
    assert d.point_vertex == (0, 0, 0, 1, 1, 2, 2, 3)


def test_falling():
    assert falling(5, 2) == 20
    assert falling(1, 2) == 0
    assert falling(-1, 2) == 0
    assert falling(3, 0) == 1


def test_double_edge_and_loops_on_22():
    d = validate_sequence([2, 2])
    p = Pairing.from_pairs(d, [(0, 2), (1, 3)])
    assert to_multigraph(p).edges == {(0, 1): 2}
    assert signature_of(p) == SignatureMatrix(multis={(0, 1): 2})
    q = Pairing.from_pairs(d, [(0, 1), (2, 3)])
    assert signature_of(q) == SignatureMatrix(loops={0: 1, 1: 1})
    assert not is_simple(p) and not is_simple(q)


def test_simple_examples():
    assert is_simple(Pairing.from_pairs(validate_sequence([1, 1]), [(0, 1)]))
    d = validate_sequence([2, 1, 1])
    p = Pairing.from_pairs(d, [(0, 2), (1, 3)])
    assert signature_of(p) == SIMPLE and is_simple(p)


def test_pairing_rejects_bad_mates():
    d = validate_sequence([1, 1])
    with pytest.raises(ValueError):
        Pairing(d, [0, 1])
    with pytest.raises(ValueError):
        Pairing.from_pairs(validate_sequence([2, 2]), [(0, 1), (1, 2)])


def test_replace_checks_pairs():
    d = validate_sequence([2, 2])
    p = Pairing.from_pairs(d, [(0, 2), (1, 3)])
    q = p.replace([(0, 2), (1, 3)], [(0, 1), (2, 3)])
    assert q.pairs() == [(0, 1), (2, 3)]
    with pytest.raises(ValueError):
        p.replace([(0, 1)], [])


def test_signature_validation():
    with pytest.raises(InvalidSignature):
        SignatureMatrix(multis={(0, 1): 1})
    with pytest.raises(InvalidSignature):
        SignatureMatrix(multis={(2, 2): 3})
    with pytest.raises(InvalidSignature):
        SignatureMatrix(loops={0: -1})
    d = validate_sequence([3, 3])
    with pytest.raises(InvalidSignature):
        SignatureMatrix(loops={0: 2}).check_for(d)
    SignatureMatrix(loops={0: 1}, multis={(0, 1): 2}).check_for(d)
    with pytest.raises(InvalidSignature):
        SignatureMatrix(loops={0: 1}, multis={(0, 1): 2}).check_for(d, joint=True)


def test_signature_is_symmetric_and_hashable():
    a = SignatureMatrix(multis={(1, 0): 2})
    b = SignatureMatrix(multis={(0, 1): 2})
    assert a == b and hash(a) == hash(b)
    assert a.multi(1, 0) == 2 and a.multi(0, 2) == 0
    assert a.without_pair(0, 1) == SIMPLE
    assert SIMPLE.with_pair(0, 1, 1) == SIMPLE
    assert a.to_json() == {"loops": {}, "multis": [[1, 2, 2]]}


def test_sequence_file_round_trip(tmp_path):
    f = tmp_path / "d.txt"
    write_sequence_file(f, [3, 1, 2], header="note")
    assert f.read_text().startswith("# note\n")
    assert read_sequence_file(f).degrees == (3, 2, 1)
    f.write_text("2\n\n# comment\n2 # trailing\n")
    assert read_sequence_file(f).degrees == (2, 2)
