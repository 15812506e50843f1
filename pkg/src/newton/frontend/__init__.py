"""Lexing, parsing and pretty-printing of Newton source text."""

from newton.frontend.lexer import Token, TokenKind, tokenize
from newton.frontend.nodes import (
    BinOp,
    ConstantDecl,
    Decl,
    Expr,
    Index,
    IndexRange,
    InvariantDecl,
    Name,
    Neg,
    Number,
    Param,
    Relation,
    SignalDecl,
    UnitName,
)
from newton.frontend.parser import parse, parse_expression, parse_source
from newton.frontend.printer import format_decl, format_expr, format_spec

__all__ = [
    "BinOp",
    "ConstantDecl",
    "Decl",
    "Expr",
    "Index",
    "IndexRange",
    "InvariantDecl",
    "Name",
    "Neg",
    "Number",
    "Param",
    "Relation",
    "SignalDecl",
    "Token",
    "TokenKind",
    "UnitName",
    "format_decl",
    "format_expr",
    "format_spec",
    "parse",
    "parse_expression",
    "parse_source",
    "tokenize",
]
