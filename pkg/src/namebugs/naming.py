"""Name extraction, the prefixed token stream, and the capped vocabulary.

A name is the string a human would read at an expression: identifiers and
literals carry "ID:"/"LIT:" prefixes so `this` (a literal-like keyword) and
an identifier named "this" can never collide. Extraction is a total
function: unsupported expression forms yield None.
"""

from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyCorpus, InputContractError
from .frontend.lexer import number_value, string_value
from .textutil import sha256_text

UNK = "UNK"
NONE = "NONE"
UNK_INDEX = 0
NONE_INDEX = 1
RESERVED = (UNK, NONE)


def render_number(value):
    """Canonical decimal rendering: one spelling per numeric value."""
    if isinstance(value, int):
        return str(value)
    if value == int(value) and abs(value) < 1e21:
        return str(int(value))
    return repr(value)


def render_literal(litKind, value):
    """Unprefixed text of a literal; None when it has no usable text."""
    if litKind == "number":
        return render_number(value)
    if litKind == "string":
        return value if value else None
    if litKind == "boolean":
        return "true" if value else "false"
    return "null"


def extract_name(node):
    """The name of an expression node, prefixed, or None.

    Rules: identifier -> its name; literal -> its value text; this -> the
    literal "this"; update -> name of its operand; non-computed member ->
    name of the accessed property; computed member -> name of the base;
    call -> name of the callee; anything else -> None.
    """
    kind = node.kind
    if kind == "Identifier":
        return "ID:" + node.attrs["name"]
    if kind == "Literal":
        text = render_literal(node.attrs["litKind"], node.attrs["value"])
        return None if text is None else "LIT:" + text
    if kind == "This":
        return "LIT:this"
    if kind == "Update":
        return extract_name(node.children[0])
    if kind == "Member":
        if node.attrs["computed"]:
            return extract_name(node.children[0])
        return "ID:" + node.attrs["property"]
    if kind == "Call":
        return extract_name(node.children[0])
    return None


def literal_type_tag(node):
    """Literal-type tag of an expression, or NONE for non-literals."""
    if node.kind == "Literal":
        return node.attrs["litKind"]
    return NONE


def embedding_token_stream(tokens):
    """Render lexer output as the training stream: names prefixed, the rest raw."""
    out = []
    for tok in tokens:
        kind = tok.kind
        if kind == "Identifier":
            out.append("ID:" + tok.text)
        elif kind == "NumberLiteral":
            out.append("LIT:" + render_number(number_value(tok.text)))
        elif kind == "StringLiteral":
            value = string_value(tok.text)
            out.append("LIT:" + value if value else tok.text)
        elif kind == "BooleanLiteral" or kind == "NullLiteral":
            out.append("LIT:" + tok.text)
        elif kind == "Keyword" and tok.text == "this":
            out.append("LIT:this")
        else:
            out.append(tok.text)
    return out


@dataclass
class Vocabulary:
    """Frequency-ranked token table with UNK at index 0 and NONE at index 1."""
    entries: tuple  # of (token, count); reserved rows carry count 0
    cap: int
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {tok: i for i, (tok, _) in enumerate(self.entries)}

    def __len__(self):
        return len(self.entries)

    def index_of(self, token):
        return self._index.get(token, UNK_INDEX)

    def __contains__(self, token):
        return token in self._index

    def token_at(self, index):
        return self.entries[index][0]

    @property
    def tokens(self):
        return tuple(tok for tok, _ in self.entries)

    def entry_lines(self):
        return [f"{i}\t{tok}\t{count}"
                for i, (tok, count) in enumerate(self.entries)]

    @property
    def checksum(self):
        return sha256_text("\n".join(self.entry_lines()) + "\n")


def build_vocabulary(streams, cap):
    """Count tokens across streams and keep the cap-2 most frequent.

    Ties break lexicographically so a rebuilt vocabulary is always
    byte-identical. UNK and NONE occupy the two reserved slots.
    """
    if cap < 2:
        raise InputContractError("vocabulary cap must be at least 2")
    counts = Counter()
    for stream in streams:
        counts.update(stream)
    if not counts:
        raise EmptyCorpus("no tokens in corpus")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = ranked[:max(0, cap - 2)]
    entries = ((UNK, 0), (NONE, 0), *kept)
    return Vocabulary(entries=tuple(entries), cap=cap)


def coverage_curve(streams, caps):
    """Fraction of occurrences covered by each cap's cap-2 frequency slots."""
    if not caps:
        raise InputContractError("caps must be non-empty")
    counts = Counter()
    for stream in streams:
        counts.update(stream)
    total = sum(counts.values())
    if total == 0:
        raise EmptyCorpus("no tokens in corpus")
    ranked = sorted(counts.values(), reverse=True)
    out = []
    for cap in caps:
        slots = max(0, cap - 2)
        out.append((cap, sum(ranked[:slots]) / total))
    return out
