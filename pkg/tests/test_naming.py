"""Name extraction, embedding token streams, vocabulary, coverage curve."""

import pytest

from namebugs.errors import EmptyCorpus, InputContractError
from namebugs.frontend import parse, tokenize
from namebugs.naming import (
    NONE,
    UNK,
    build_vocabulary,
    coverage_curve,
    embedding_token_stream,
    extract_name,
    literal_type_tag,
    render_number,
)


def expression_of(source):
    """Sole expression of a single-statement program."""
    return parse(source).children[0].children[0]


# ---------------------------------------------------------------------------
# extract_name
# ---------------------------------------------------------------------------

EXTRACTION_TABLE = [
    ("list;", "ID:list"),
    ("23;", "LIT:23"),
    ("this;", "LIT:this"),
    ("i++;", "ID:i"),
    ("myObject.prop;", "ID:prop"),
    ("myArray[5];", "ID:myArray"),
    ("nextElement();", "ID:nextElement"),
    ("db.allNames()[3];", "ID:allNames"),
]


@pytest.mark.parametrize("source,expected", EXTRACTION_TABLE)
def test_extract_name_table(source, expected):
    assert extract_name(expression_of(source)) == expected


def test_extract_name_recursion():
    assert extract_name(expression_of("--obj.count;")) == "ID:count"
    assert extract_name(expression_of("rows[i][j];")) == "ID:rows"
    assert extract_name(expression_of("get().field;")) == "ID:field"


def test_extract_name_unsupported_forms():
    for source in ("a + b;", "!flag;", "[1, 2];", "cond ? a : b;"):
        assert extract_name(expression_of(source)) is None
    fn = parse("var f = function () {};").children[0].children[0]
    assert fn.kind == "FunctionExpr"
    assert extract_name(fn) is None


def test_extract_name_literals():
    assert extract_name(expression_of("'msg';")) == "LIT:msg"
    assert extract_name(expression_of("true;")) == "LIT:true"
    assert extract_name(expression_of("null;")) == "LIT:null"
    assert extract_name(expression_of("0x10;")) == "LIT:16"
    # the empty string has no readable text to use as a name
    assert extract_name(expression_of("'';")) is None


def test_render_number_collapses_spellings():
    assert render_number(23) == "23"
    assert render_number(23.0) == "23"
    assert render_number(0.5) == "0.5"
    assert render_number(150.0) == "150"


def test_literal_type_tag():
    assert literal_type_tag(expression_of("23;")) == "number"
    assert literal_type_tag(expression_of("'x';")) == "string"
    assert literal_type_tag(expression_of("false;")) == "boolean"
    assert literal_type_tag(expression_of("null;")) == "null"
    assert literal_type_tag(expression_of("name;")) == NONE


# ---------------------------------------------------------------------------
# embedding token stream
# ---------------------------------------------------------------------------

def test_stream_declaration():
    stream = embedding_token_stream(tokenize("var x = 23;"))
    assert stream == ["var", "ID:x", "=", "LIT:23", ";"]


def test_stream_empty():
    assert embedding_token_stream([]) == []


def test_stream_this_keyword():
    stream = embedding_token_stream(tokenize("this.msg"))
    assert stream == ["LIT:this", ".", "ID:msg"]


def test_stream_literpar_rendering():
    stream = embedding_token_stream(tokenize("f('hi', 0x10, true, null);"))
    assert stream == ["ID:f", "(", "LIT:hi", ",", "LIT:16", ",",
                      "LIT:true", ",", "LIT:null", ")", ";"]


def test_stream_keywords_stay_raw():
    stream = embedding_token_stream(tokenize("for (var i = 0; i < n; i++) {}"))
    assert stream[0] == "for"
    assert "ID:for" not in stream
    assert "ID:i" in stream and "ID:n" in stream


def test_stream_prefixes_round_trip():
    source = "function area(w, h) { return w * h + this.pad; }"
    tokens = tokenize(source)
    stream = embedding_token_stream(tokens)
    assert len(stream) == len(tokens)
    for rendered, tok in zip(stream, tokens):
        if rendered.startswith("ID:"):
            assert tok.kind == "Identifier"
            assert rendered[3:] == tok.text
        elif rendered.startswith("LIT:"):
            assert tok.kind in ("NumberLiteral", "StringLiteral",
                                "BooleanLiteral", "NullLiteral", "Keyword")
        else:
            assert rendered == tok.text


# ---------------------------------------------------------------------------
# vocabulary
# ---------------------------------------------------------------------------

def test_vocabulary_cap_discards_least_frequent():
    vocab = build_vocabulary([["a", "a", "b"]], 3)
    assert vocab.entries == ((UNK, 0), (NONE, 0), ("a", 2))
    assert vocab.index_of("a") == 2
    assert vocab.index_of("b") == 0  # out of vocabulary maps to UNK
    assert "b" not in vocab
    assert len(vocab) == 3


def test_vocabulary_tie_break_is_lexicographic():
    vocab = build_vocabulary([["b", "a"]], 4)
    assert vocab.entries[2:] == (("a", 1), ("b", 1))


def test_vocabulary_reserved_rows():
    vocab = build_vocabulary([["x"]], 10)
    assert vocab.token_at(0) == UNK
    assert vocab.token_at(1) == NONE
    assert vocab.index_of(UNK) == 0
    assert vocab.index_of(NONE) == 1
    assert vocab.tokens[:2] == (UNK, NONE)


def test_vocabulary_counts_span_streams():
    vocab = build_vocabulary([["a", "b"], ["a"], ["c", "a"]], 10)
    assert dict(vocab.entries)["a"] == 3


def test_vocabulary_from_parsed_expressions():
    sources = [s for s, _ in [("list;", 0), ("23;", 0), ("db.allNames()[3];", 0)]]
    streams = [embedding_token_stream(tokenize(s)) for s in sources]
    vocab = build_vocabulary(streams, 100)
    for token in ("ID:list", "LIT:23", "ID:allNames", "ID:db"):
        assert token in vocab


def test_vocabulary_checksum_tracks_content():
    a = build_vocabulary([["x", "y"]], 10)
    b = build_vocabulary([["x", "y"]], 10)
    c = build_vocabulary([["x", "y", "y"]], 10)
    assert a.checksum == b.checksum
    assert a.checksum != c.checksum


def test_vocabulary_input_contract():
    with pytest.raises(InputContractError):
        build_vocabulary([["a"]], 1)
    with pytest.raises(EmptyCorpus):
        build_vocabulary([[], []], 5)


# ---------------------------------------------------------------------------
# coverage curve
# ---------------------------------------------------------------------------

def test_coverage_single_token():
    assert coverage_curve([["a"]], [3]) == [(3, 1.0)]


def test_coverage_counts_capped_slots():
    # cap 3 leaves one non-reserved slot: "a" covers 2 of 4 occurrences
    assert coverage_curve([["a", "a", "b", "c"]], [3]) == [(3, 0.5)]


def test_coverage_monotone_in_cap():
    streams = [[f"t{i % 7}" for i in range(50)], ["t0", "t9", "t9"]]
    curve = coverage_curve(streams, [2, 3, 4, 6, 9, 12, 40])
    fractions = [f for _, f in curve]
    assert fractions == sorted(fractions)
    assert fractions[0] == 0.0  # cap 2 keeps reserved rows only
    assert fractions[-1] == 1.0


def test_coverage_input_contract():
    with pytest.raises(InputContractError):
        coverage_curve([["a"]], [])
    with pytest.raises(EmptyCorpus):
        coverage_curve([[]], [3])
