import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetalocus.charalg import (
    EVEN,
    ODD,
    Characteristic,
    CharacteristicError,
    count_by_parity,
    direct_sum,
    enumerate_characteristics,
    parity,
    split,
    split_grouping,
)


def chars(genus=None):
    g = st.integers(1, 5) if genus is None else st.just(genus)
    return g.flatmap(lambda n: st.tuples(
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
    )).map(lambda tb: Characteristic(*tb))


def brute_parity(top, bottom):
    return ODD if sum(a * b for a, b in zip(top, bottom)) % 2 else EVEN


@pytest.mark.parametrize("g, even, odd", [(1, 3, 1), (2, 10, 6), (3, 36, 28), (4, 136, 120)])
def test_counts(g, even, odd):
    assert len(enumerate_characteristics(g, EVEN)) == even
    assert len(enumerate_characteristics(g, ODD)) == odd
    assert count_by_parity(g) == {EVEN: even, ODD: odd}
    assert len(enumerate_characteristics(g)) == 4**g


def test_genus1_table():
    assert [d.compact() for d in enumerate_characteristics(1)] == ["[0|0]", "[0|1]", "[1|0]", "[1|1]"]
    assert [parity(d) for d in enumerate_characteristics(1)] == [EVEN, EVEN, EVEN, ODD]


def test_lexicographic_order_top_more_significant():
    seq = enumerate_characteristics(2)
    assert seq[1] == Characteristic("00", "01")
    assert seq[4] == Characteristic("01", "00")
    assert seq == sorted(seq)


def test_genus2_even_odd_split_of_genus3():
    """Odd genus-2 factors times genus-1 factors: 6 odd in genus 2."""
    odd2 = enumerate_characteristics(2, ODD)
    assert len(odd2) == 6
    assert {d.compact() for d in odd2} == {"[01|01]", "[01|11]", "[10|10]", "[10|11]", "[11|01]", "[11|10]"}


def test_parse_and_format():
    d = Characteristic.parse("[110|100]")
    assert d.top == (1, 1, 0) and d.bottom == (1, 0, 0)
    assert str(d) == "g=3:[110|100]"
    assert Characteristic.parse("g=3:[110|100]") == d
    assert d.parity == ODD and not d.is_even


@pytest.mark.parametrize("text", ["[11|1]", "110|100", "[|]", "g=2:[110|100]", "[120|100]"])
def test_parse_rejects(text):
    with pytest.raises(CharacteristicError):
        Characteristic.parse(text)


def test_json_roundtrip_and_errors():
    d = Characteristic("110", "100")
    assert d.to_json() == {"genus": 3, "top": "110", "bottom": "100"}
    assert Characteristic.from_json(d.to_json()) == d
    with pytest.raises(CharacteristicError, match="bottom"):
        Characteristic.from_json({"genus": 3, "top": "110"})
    with pytest.raises(CharacteristicError, match="genus"):
        Characteristic.from_json({"genus": 2, "top": "110", "bottom": "100"})


def test_shifts():
    a, b = Characteristic("10", "01").shifts()
    assert a.tolist() == [0.5, 0.0] and b.tolist() == [0.0, 0.5]


def test_split_errors():
    with pytest.raises(CharacteristicError):
        split(Characteristic("110", "100"), [2, 2])
    with pytest.raises(CharacteristicError):
        split_grouping(Characteristic("110", "100"), [[0], [0, 1]])
    with pytest.raises(CharacteristicError):
        direct_sum([])


@given(chars())
def test_parity_matches_dot_product(d):
    assert parity(d) == brute_parity(d.top, d.bottom)


@given(st.lists(chars(), min_size=1, max_size=4))
def test_parity_of_direct_sum_adds(parts):
    total = direct_sum(parts)
    n_odd = sum(parity(p) == ODD for p in parts)
    assert parity(total) == (ODD if n_odd % 2 else EVEN)
    assert split(total, [p.genus for p in parts]) == parts


@given(chars(3), st.permutations([0, 1, 2]))
def test_split_grouping_restricts(d, perm):
    grouping = [perm[:1], perm[1:]]
    a, b = split_grouping(d, grouping)
    assert a.top == (d.top[perm[0]],) and b.bottom == tuple(d.bottom[i] for i in perm[1:])


def test_enumeration_is_exhaustive_and_unique():
    g = 3
    got = set(enumerate_characteristics(g))
    expected = {Characteristic(bits[:g], bits[g:]) for bits in itertools.product((0, 1), repeat=2 * g)}
    assert got == expected
