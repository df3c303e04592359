"""Tokenizer, parser, and external-tree ingestion for the analysis subset.

All downstream stages consume the AstNode trees produced here, either from
`parse` (subset source text) or from `ingest_ast` (schema documents emitted
by an external parser).
"""

from .lexer import Token, tokenize
from .ast import (
    AstNode,
    OperatorAlphabet,
    SourceFile,
    default_alphabet,
    walk,
    walk_with_context,
)
from .parser import parse
from .estree import export_ast, ingest_ast, to_document

__all__ = [
    "Token",
    "tokenize",
    "AstNode",
    "OperatorAlphabet",
    "SourceFile",
    "default_alphabet",
    "walk",
    "walk_with_context",
    "parse",
    "export_ast",
    "ingest_ast",
    "to_document",
]
