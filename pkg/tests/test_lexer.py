import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import FIXTURES, fixture_text
from newton.diagnostics import LexError
from newton.frontend.lexer import TokenKind, tokenize

K = TokenKind


def kinds_and_lexemes(src):
    return [(t.kind, t.lexeme) for t in tokenize(src)]


def test_constant_with_negative_exponent():
    assert kinds_and_lexemes("g : constant = 9.8*m*s**-2;") == [
        (K.IDENTIFIER, "g"),
        (K.PUNCTUATION, ":"),
        (K.KEYWORD, "constant"),
        (K.PUNCTUATION, "="),
        (K.REAL, "9.8"),
        (K.OPERATOR, "*"),
        (K.IDENTIFIER, "m"),
        (K.OPERATOR, "*"),
        (K.IDENTIFIER, "s"),
        (K.OPERATOR, "**"),
        (K.OPERATOR, "-"),
        (K.INTEGER, "2"),
        (K.PUNCTUATION, ";"),
    ]


def test_empty_source():
    assert tokenize("") == []


def test_indexing():
    assert kinds_and_lexemes("distance@i / time") == [
        (K.IDENTIFIER, "distance"),
        (K.OPERATOR, "@"),
        (K.IDENTIFIER, "i"),
        (K.OPERATOR, "/"),
        (K.IDENTIFIER, "time"),
    ]


def test_double_star_is_one_token():
    lexemes = [t.lexeme for t in tokenize("a***b")]
    assert lexemes == ["a", "**", "*", "b"]


@pytest.mark.parametrize("op", ["~", "<", "<=", ">", ">=", "=="])
def test_relational_operators(op):
    toks = tokenize(f"a {op} b")
    assert toks[1].kind is K.OPERATOR and toks[1].lexeme == op


def test_comments_and_strings():
    toks = tokenize('name = "meter" English; # trailing comment\n')
    assert [t.lexeme for t in toks] == ["name", "=", '"meter"', "English", ";"]
    assert toks[2].string_value == "meter"


def test_escaped_quote_in_string():
    (tok,) = tokenize(r'"a \"b\" c"')
    assert tok.string_value == 'a "b" c'


def test_real_literal_forms():
    assert [t.kind for t in tokenize("3.1415926535897932384626433832795 1e3 6.674e-11 42")] == [
        K.REAL,
        K.REAL,
        K.REAL,
        K.INTEGER,
    ]


def test_spans_are_one_based():
    toks = tokenize("a\n  bb", "f.newton")
    assert (toks[1].span.line_start, toks[1].span.col_start) == (2, 3)
    assert (toks[1].span.line_end, toks[1].span.col_end) == (2, 4)
    assert toks[1].span.file == "f.newton"


def test_illegal_character():
    with pytest.raises(LexError) as exc:
        tokenize("a = $;", "x.newton")
    assert exc.value.span.col_start == 5
    assert "illegal character" in str(exc.value)


def test_unterminated_string():
    with pytest.raises(LexError) as exc:
        tokenize('name = "meter\nsymbol = m;')
    assert "unterminated" in str(exc.value)
    assert exc.value.span.line_start == 1


def _offset(src, line, col):
    lines = src.split("\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + col - 1


def assert_reconstructs(src):
    """Lexemes sit exactly at their spans and the gaps are only whitespace/comments."""
    pos = 0
    for tok in tokenize(src):
        start = _offset(src, tok.span.line_start, tok.span.col_start)
        end = _offset(src, tok.span.line_end, tok.span.col_end) + 1
        assert src[start:end] == tok.lexeme
        assert re.fullmatch(r"(\s|#[^\n]*)*", src[pos:start])
        pos = end
    assert re.fullmatch(r"(\s|#[^\n]*)*", src[pos:])


@pytest.mark.parametrize("name", sorted(p.name for p in FIXTURES.glob("*.newton")))
def test_fixtures_reconstruct(name):
    assert_reconstructs(fixture_text(name))


_piece = st.sampled_from(
    ["a", "bc", "9.8", "12", '"s t"', "**", "*", "-", "@", "~", "<=", "==", ";", "{", "}", "(", ")",
     " ", "\n", "\t", "# note\n", "signal", "none", ":"]
)


@given(st.lists(_piece, max_size=30))
def test_random_sources_reconstruct(pieces):
    assert_reconstructs(" ".join(pieces))
