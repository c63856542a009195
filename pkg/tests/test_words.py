from hypothesis import given
from hypothesis import strategies as st

from qtcensus.words import BitWord, all_words


def test_lsb_first_value():
    assert BitWord.parse("01").value == 2
    assert BitWord.parse("101").value == 5
    assert BitWord.parse("001").value == 4
    assert BitWord().value == 0
    assert str(BitWord()) == "eps"


def test_from_int_minimal_and_padded():
    assert BitWord.from_int(0) == BitWord()
    assert BitWord.from_int(6).bits == (0, 1, 1)
    assert BitWord.from_int(6, 5).bits == (0, 1, 1, 0, 0)


@given(st.integers(0, 12), st.data())
def test_length_value_bijection(length, data):
    v = data.draw(st.integers(0, (1 << length) - 1))
    w = BitWord.from_int(v, length)
    assert len(w) == length and w.value == v
    assert BitWord.parse(str(w) if length else "") == w


@given(st.integers(0, 2**20), st.integers(0, 8), st.integers(0, 2**20))
def test_concatenation_semantics(u, extra, w):
    bu = BitWord.from_int(u, u.bit_length() + extra)
    bw = BitWord.from_int(w)
    assert (bu + bw).value == u + (w << len(bu))


def test_all_words_count():
    assert sum(1 for _ in all_words(4)) == 31
