"""Render AST nodes back to Newton source with minimal parentheses."""

from __future__ import annotations

from newton.frontend.nodes import (
    BinOp,
    ConstantDecl,
    Decl,
    Expr,
    Index,
    InvariantDecl,
    Name,
    Neg,
    Number,
    Relation,
    SignalDecl,
)

_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5
_BINARY_PREC = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "**": _POW}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _BINARY_PREC[e.op]
    if isinstance(e, Neg):
        return _NEG
    return _ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text = format_expr(e)
    return f"({text})" if _prec(e) < minimum else text


def format_expr(e: Expr) -> str:
    if isinstance(e, Number):
        return e.text
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Index):
        return f"{e.base.id}@{format_expr(e.index)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _NEG)
    if isinstance(e, BinOp):
        prec = _BINARY_PREC[e.op]
        if e.op == "**":
            return f"{_wrap(e.left, _ATOM)}**{_wrap(e.right, _NEG)}"
        return f"{_wrap(e.left, prec)} {e.op} {_wrap(e.right, prec + 1)}"
    raise TypeError(f"not an expression node: {e!r}")


def format_relation(r: Relation) -> str:
    return f"{format_expr(r.lhs)} {r.op} {format_expr(r.rhs)}"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_decl(d: Decl) -> str:
    if isinstance(d, SignalDecl):
        head = f"{d.name} : signal"
        if d.index_range is not None:
            r = d.index_range
            head += f"({r.var}: {r.lo} to {r.hi})"
        lines = [head + " = {"]
        if d.name_field is not None:
            lang = f" {d.name_field.language}" if d.name_field.language else ""
            lines.append(f"    name = {_quote(d.name_field.text)}{lang};")
        if d.symbol_field is not None:
            lines.append(f"    symbol = {d.symbol_field};")
        derivation = "none" if d.derivation is None else format_expr(d.derivation)
        lines.append(f"    derivation = {derivation};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, ConstantDecl):
        return f"{d.name} : constant = {format_expr(d.value)};"
    if isinstance(d, InvariantDecl):
        params = ", ".join(f"{p.name}: {p.type_name}" for p in d.params)
        body = ",\n".join("    " + format_relation(r) for r in d.body)
        return f"{d.name} : invariant({params}) = {{\n{body}\n}}"
    raise TypeError(f"not a declaration: {d!r}")


def format_spec(decls: list[Decl]) -> str:
    return "\n\n".join(format_decl(d) for d in decls) + ("\n" if decls else "")
