import pytest
from hypothesis import given
from hypothesis import strategies as st

from expray.address import AddressSyntaxError, ExternalAddress, check_admissible, entry, negate, shift, sup_norm

ints = st.integers(min_value=-20, max_value=20)
addresses = st.builds(
    ExternalAddress,
    st.lists(ints, max_size=6).map(tuple),
    st.lists(ints, max_size=4).map(tuple),
)


def test_entries():
    s = ExternalAddress((3, -1))
    assert entry(s, 2) == -1
    assert entry(s, 7) == 0
    assert entry(ExternalAddress((), (1, 2)), 4) == 2
    with pytest.raises(IndexError):
        entry(s, 0)


def test_shift_examples():
    assert shift(ExternalAddress((5, 7))) == ExternalAddress((7,))
    assert shift(ExternalAddress.zeros()) == ExternalAddress.zeros()
    p = shift(ExternalAddress((), (1, 2)))
    assert [p[j] for j in range(1, 7)] == [2, 1, 2, 1, 2, 1]


def test_negate_and_sup_norm():
    assert negate(ExternalAddress((3, -1))) == ExternalAddress((-3, 1))
    assert negate(ExternalAddress.zeros()) == ExternalAddress.zeros()
    assert negate(ExternalAddress((), (1,))) == ExternalAddress((), (-1,))
    assert sup_norm(ExternalAddress((3, -1))) == 3
    assert sup_norm(ExternalAddress.zeros()) == 0
    assert sup_norm(ExternalAddress((), (-4, 2))) == 4


@pytest.mark.parametrize(
    "text, prefix, period",
    [("3,-1", (3, -1), ()), ("1,2|3,4", (1, 2), (3, 4)), (" 0 ", (), ()), ("|5", (), (5,))],
)
def test_parse(text, prefix, period):
    s = ExternalAddress.parse(text)
    assert s.prefix == prefix and s.period == period
    assert ExternalAddress.parse(str(s)) == s


@pytest.mark.parametrize("text", ["1,,2", "", "a", "1|", "1,2|x"])
def test_parse_rejects(text):
    with pytest.raises(AddressSyntaxError):
        ExternalAddress.parse(text)


def test_admissibility_gate():
    check_admissible(ExternalAddress((64,)))
    with pytest.raises(ValueError):
        check_admissible(ExternalAddress((65,)))


@given(addresses)
def test_shift_law(s):
    sh = s.shift()
    for j in range(1, 1001):
        assert sh.entry(j) == s.entry(j + 1)


@given(addresses)
def test_negate_involution_and_commutes_with_shift(s):
    assert s.negate().negate() == s
    n1, n2 = s.shift().negate(), s.negate().shift()
    assert all(n1.entry(j) == n2.entry(j) for j in range(1, 50))
    assert all(s.negate().entry(j) == -s.entry(j) for j in range(1, 50))
