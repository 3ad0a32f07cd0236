import pytest
from hypothesis import given, settings, strategies as st

from oracles import T
from scalescope.model import Message, TilingError
from scalescope.tokenizers import (
    DelimiterPolicy,
    parse_scale,
    tokenize,
    tokenize_bits,
    tokenize_chars,
    tokenize_ngram,
    tokenize_words,
)

SP = " "


def test_words_on_t():
    seg = tokenize_words(T)
    assert seg.segments == [" a", " ab", " abc", " abcd", " abcde", " abcdef", " abcdefg"]


def test_double_space_leading():
    assert tokenize_words("  a").segments == [" ", " a"]


def test_attachment_modes():
    s = "ab  cd"
    assert tokenize_words(s, DelimiterPolicy(attachment="leading")).segments == ["ab", " ", " cd"]
    assert tokenize_words(s, DelimiterPolicy(attachment="trailing")).segments == ["ab ", " ", "cd"]
    assert tokenize_words(s, DelimiterPolicy(attachment="standalone")).segments == ["ab", " ", " ", "cd"]


def test_custom_delimiters():
    pol = DelimiterPolicy(frozenset({",", " "}))
    assert tokenize_words("a,b c", pol).segments == ["a", ",b", " c"]


def test_byte_mode_words():
    seg = tokenize_words(Message(b"ab cd", "bytes"))
    assert seg.segments == [b"ab", b" cd"]


def test_ngrams():
    assert tokenize_ngram("abcdefg", 3).segments == ["abc", "def", "g"]
    assert tokenize_ngram("abc", 5).segments == ["abc"]
    with pytest.raises(ValueError):
        tokenize_ngram("abc", 0)


def test_bits():
    seg = tokenize_bits("A")
    assert seg.message.units == "01000001"
    assert seg.message.mode == "bits"
    assert len(tokenize_bits(Message(b"\xff\x00", "bytes"))) == 16


def test_empty_message_rejected():
    for sel in ("chars", "words", "bits", "ngram:2"):
        with pytest.raises(TilingError):
            tokenize("", sel)


def test_parse_scale():
    assert parse_scale("ngram:4") == ("ngram", 4)
    assert parse_scale("words") == ("words", None)
    for bad in ("ngram:0", "ngram:x", "lines"):
        with pytest.raises(ValueError):
            parse_scale(bad)
    with pytest.raises(ValueError):
        tokenize("abc", "fundamental")


def test_bad_policy():
    with pytest.raises(ValueError):
        DelimiterPolicy(attachment="sideways")
    with pytest.raises(ValueError):
        DelimiterPolicy(frozenset())


text_st = st.text(alphabet=st.sampled_from("ab \n,é"), min_size=1, max_size=60)


@given(text_st, st.sampled_from(["leading", "trailing", "standalone"]), st.integers(1, 7))
@settings(max_examples=300, deadline=None)
def test_every_tokenizer_tiles_the_message(s, attach, n):
    pol = DelimiterPolicy(frozenset({SP, ","}), attach)
    for seg in (tokenize_chars(s), tokenize_words(s, pol), tokenize_ngram(s, n)):
        assert "".join(seg.segments) == s
        assert all(seg.segments)
        assert seg.boundaries[0] == 0 and seg.boundaries[-1] == len(s)


@given(text_st)
@settings(max_examples=100, deadline=None)
def test_ngram_one_is_chars(s):
    assert tokenize_ngram(s, 1) == tokenize_chars(s)


@given(st.binary(min_size=1, max_size=40))
@settings(max_examples=100, deadline=None)
def test_bits_tile_and_round_trip(raw):
    seg = tokenize_bits(Message(raw, "bytes"))
    bits = "".join(seg.segments)
    assert len(bits) == 8 * len(raw)
    assert int(bits, 2).to_bytes(len(raw), "big") == raw
