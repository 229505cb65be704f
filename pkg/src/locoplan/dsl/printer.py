"""Canonical pretty-printer. parse(print(ast)) is the identity on ASTs."""
from __future__ import annotations

import json

from .ast import (
    Binary,
    BoolLit,
    BoolOp,
    Builtin,
    Compare,
    ExprT,
    Fail,
    Field,
    If,
    Let,
    Not,
    Num,
    Perception,
    Program,
    SkillCall,
    StmtT,
    Str,
    Var,
    Vec3Lit,
)

# precedence levels, loosest first
_PREC = {
    "or": 1,
    "and": 2,
    "not": 3,
    "cmp": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "atom": 9,
}


def _num(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def format_expr(e: ExprT, parent_prec: int = 0) -> str:
    if isinstance(e, Num):
        text, prec = _num(e.value), _PREC["atom"]
        if e.value < 0:
            prec = _PREC["*"]  # negative literal binds like a product
    elif isinstance(e, Str):
        text, prec = json.dumps(e.value), _PREC["atom"]
    elif isinstance(e, BoolLit):
        text, prec = ("true" if e.value else "false"), _PREC["atom"]
    elif isinstance(e, Var):
        text, prec = e.name, _PREC["atom"]
    elif isinstance(e, Vec3Lit):
        text = f"vec({format_expr(e.x)}, {format_expr(e.y)}, {format_expr(e.z)})"
        prec = _PREC["atom"]
    elif isinstance(e, Binary):
        prec = _PREC[e.op]
        left = format_expr(e.left, prec)
        right = format_expr(e.right, prec + 1)  # left-associative
        text = f"{left} {e.op} {right}"
    elif isinstance(e, Compare):
        prec = _PREC["cmp"]
        text = f"{format_expr(e.left, prec + 1)} {e.op} {format_expr(e.right, prec + 1)}"
    elif isinstance(e, BoolOp):
        prec = _PREC[e.op]
        text = f"{format_expr(e.left, prec)} {e.op} {format_expr(e.right, prec + 1)}"
    elif isinstance(e, Not):
        prec = _PREC["not"]
        text = f"not {format_expr(e.operand, prec)}"
    elif isinstance(e, Builtin):
        text = f"{e.func}({', '.join(format_expr(a) for a in e.args)})"
        prec = _PREC["atom"]
    elif isinstance(e, Perception):
        text = f"{e.func}({format_expr(e.object_id)})"
        prec = _PREC["atom"]
    elif isinstance(e, Field):
        text = f"{format_expr(e.base, _PREC['atom'])}.{e.name}"
        prec = _PREC["atom"]
    else:
        raise TypeError(f"unknown expression node {e!r}")
    if prec < parent_prec:
        return f"({text})"
    return text


def _format_stmt(s: StmtT, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(s, Let):
        out.append(f"{pad}let {s.name} = {format_expr(s.value)}")
    elif isinstance(s, SkillCall):
        out.append(f"{pad}{s.name}({', '.join(format_expr(a) for a in s.args)})")
    elif isinstance(s, Fail):
        out.append(f"{pad}fail({json.dumps(s.message)})")
    elif isinstance(s, If):
        for k, (cond, body) in enumerate(s.branches):
            head = f"if {format_expr(cond)} {{" if k == 0 else f"}} elif {format_expr(cond)} {{"
            out.append(pad + head)
            for inner in body:
                _format_stmt(inner, indent + 1, out)
        if s.orelse:
            out.append(f"{pad}}} else {{")
            for inner in s.orelse:
                _format_stmt(inner, indent + 1, out)
        out.append(f"{pad}}}")
    else:
        raise TypeError(f"unknown statement node {s!r}")


def format_program(program: Program) -> str:
    out: list[str] = []
    for s in program.statements:
        _format_stmt(s, 0, out)
    return "\n".join(out) + "\n"
