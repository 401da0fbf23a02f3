import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from autoseries.codec import (RADIX, WordError, affine_transducer, canonical, decode_frac,
                              decode_int, encode_frac, encode_int, format_word, parse_word,
                              reverse, value)


def w(text, p=None):
    return parse_word(text, p)


def test_spec_examples():
    assert encode_int(0, 2) == ()
    assert format_word(encode_int(5, 2)) == "101"
    assert decode_int(w("120"), 3) == 15
    # 1.01 is 1 + 1/4; the value 2 + 1/4 is written 10.01
    assert decode_frac(w("1.01"), 2) == Fraction(5, 4)
    assert decode_frac(w("10.01"), 2) == Fraction(9, 4)
    assert format_word(encode_frac(3, 2)) == "11."
    assert format_word(encode_frac(Fraction(1, 3), 3)) == ".1"
    assert format_word(reverse(w("101"))) == "101"
    assert format_word(reverse(w("1.01"))) == "10.1"
    assert reverse(()) == ()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_integer_round_trip(p):
    for m in range(10 ** 4):
        assert decode_int(encode_int(m, p), p) == m


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fraction_round_trip(p):
    for n in range(512):
        for k in range(6):
            r = Fraction(n, p ** k)
            assert decode_frac(encode_frac(r, p), p) == r


@pytest.mark.parametrize("p", [2, 3])
def test_encode_int_is_shortlex_monotone(p):
    prev = encode_int(0, p)
    for m in range(1, 3000):
        cur = encode_int(m, p)
        assert (len(prev), prev) < (len(cur), cur)
        prev = cur


def test_rejections():
    with pytest.raises(WordError) as e:
        decode_int(w("012"), 3)
    assert e.value.position == 0
    with pytest.raises(WordError):
        decode_int(w("1.2"), 3)
    with pytest.raises(WordError) as e:
        decode_frac(w("1.10"), 2)
    assert e.value.position == 3
    with pytest.raises(WordError):
        decode_frac(w("12"), 3)  # no mark
    with pytest.raises(WordError):
        parse_word("1.0.1")
    with pytest.raises(WordError):
        parse_word("13", 3)
    with pytest.raises(WordError):
        encode_frac(Fraction(1, 3), 2)


def test_bracketed_digits():
    word = (11, RADIX, 3)
    assert format_word(word) == "[11].3"
    assert parse_word("[11].3", 13) == word


@given(st.lists(st.sampled_from([0, 1, 2, RADIX]), max_size=12))
def test_reverse_involution(word):
    word = tuple(word)
    assert reverse(reverse(word)) == word


@given(st.integers(0, 10 ** 5), st.integers(0, 4))
def test_canonical_keeps_value(n, pad):
    r = Fraction(n, 2 ** 3)
    word = (0,) * pad + encode_frac(r, 2) + (0,) * pad
    assert value(word, 2) == r
    assert canonical(word, 2) == encode_frac(r, 2)


def test_transducer_examples():
    T = affine_transducer(3, 1, 2)
    assert reverse(T.transduce(reverse(encode_frac(2, 2)))) == encode_frac(7, 2)
    five_quarters = reverse(encode_frac(Fraction(5, 4), 2))
    assert reverse(T.transduce(five_quarters)) == encode_frac(Fraction(19, 4), 2)
    ident = affine_transducer(1, 0, 3)
    for m in range(50):
        assert reverse(ident.transduce(reverse(encode_frac(m, 3)))) == encode_frac(m, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_transducer_matches_arithmetic(p):
    rng = random.Random(p)
    for _ in range(1000):
        a, b = rng.randint(1, 5), rng.randint(0, 5)
        r = Fraction(rng.randrange(2000), p ** rng.randint(0, 4))
        T = affine_transducer(a, b, p)
        out = reverse(T.transduce(reverse(encode_frac(r, p))))
        assert decode_frac(out, p) == a * r + b
        # integer words without a mark also work
        m = rng.randrange(2000)
        out = reverse(T.transduce(reverse(encode_int(m, p))))
        assert value(out, p) == a * m + b
