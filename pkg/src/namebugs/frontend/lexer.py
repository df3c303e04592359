"""Maximal-munch tokenizer for the JavaScript-like subset.

Comments and whitespace are dropped; everything else becomes a Token with a
1-based line and 0-based column. Semicolons are never inserted, so the token
stream is a pure function of the input bytes.
"""

import re
from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({
    "break", "case", "catch", "const", "continue", "default", "delete",
    "do", "else", "finally", "for", "function", "if", "in", "instanceof",
    "let", "new", "return", "switch", "this", "throw", "try", "typeof",
    "var", "void", "while",
})

# longest first so scanning in order gives maximal munch
OPERATORS = (
    ">>>=",
    "===", "!==", ">>>", "<<=", ">>=",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "<<", ">>", "=>",
    "+", "-", "*", "/", "%", "<", ">", "&", "|", "^", "!", "~", "=",
)

PUNCTUATION = frozenset("(){}[];,.?:")

_IDENT_START = re.compile(r"[A-Za-z_$]")
_IDENT = re.compile(r"[A-Za-z0-9_$]*")
_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F]+"
    r"|\d+\.?\d*(?:[eE][+-]?\d+)?"
    r"|\.\d+(?:[eE][+-]?\d+)?"
)

_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v",
    "0": "\0", "\\": "\\", "'": "'", '"': '"',
}


@dataclass(frozen=True)
class Token:
    kind: str  # Identifier | NumberLiteral | StringLiteral | BooleanLiteral | NullLiteral | Keyword | Operator | Punctuation
    text: str
    line: int
    column: int


def number_value(text):
    """Numeric value of a number-literal lexeme."""
    if text[:2] in ("0x", "0X"):
        return int(text, 16)
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return int(text)


def string_value(lexeme):
    """Cooked value of a string-literal lexeme (quotes included)."""
    body = lexeme[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        i += 1
        e = body[i]
        if e == "u":
            out.append(chr(int(body[i + 1:i + 5], 16)))
            i += 5
        elif e == "x":
            out.append(chr(int(body[i + 1:i + 3], 16)))
            i += 3
        else:
            out.append(_ESCAPES.get(e, e))
            i += 1
    return "".join(out)


def tokenize(source, fileId="<memory>"):
    """Tokenize subset source text into an ordered Token list."""
    tokens = []
    i = 0
    n = len(source)
    line = 1
    line_start = 0

    def err(message, at):
        raise LexError(f"{fileId}: {message}", line, at - line_start)

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if c == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if c == "/" and source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                err("unterminated block comment", i)
            for k in range(i, j):
                if source[k] == "\n":
                    line += 1
                    line_start = k + 1
            i = j + 2
            continue

        col = i - line_start
        if _IDENT_START.match(c):
            m = _IDENT.match(source, i + 1)
            word = source[i:m.end()]
            if word in ("true", "false"):
                kind = "BooleanLiteral"
            elif word == "null":
                kind = "NullLiteral"
            elif word in KEYWORDS:
                kind = "Keyword"
            else:
                kind = "Identifier"
            tokens.append(Token(kind, word, line, col))
            i = m.end()
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER.match(source, i)
            tokens.append(Token("NumberLiteral", m.group(), line, col))
            i = m.end()
            continue
        if c in "'\"":
            j = i + 1
            while j < n:
                d = source[j]
                if d == "\\":
                    j += 2
                    continue
                if d == "\n":
                    break
                if d == c:
                    break
                j += 1
            if j >= n or source[j] != c:
                err("unterminated string literal", i)
            lexeme = source[i:j + 1]
            try:
                string_value(lexeme)
            except (ValueError, IndexError):
                err("malformed string escape", i)
            tokens.append(Token("StringLiteral", lexeme, line, col))
            i = j + 1
            continue

        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("Operator", op, line, col))
                i += len(op)
                break
        else:
            if c in PUNCTUATION:
                tokens.append(Token("Punctuation", c, line, col))
                i += 1
            else:
                err(f"unexpected character {c!r}", i)

    return tokens
