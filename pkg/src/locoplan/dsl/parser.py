"""Tokenizer and recursive-descent parser for plan files.

Plans are UTF-8 text, `#` starts a line comment, blocks use braces.
Errors carry 1-based line and column.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .ast import (
    BUILTIN_FUNCS,
    FIELD_NAMES,
    PERCEPTION_FUNCS,
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
    Pos,
    Program,
    SkillCall,
    StmtT,
    Str,
    Var,
    Vec3Lit,
)

KEYWORDS = {"let", "if", "elif", "else", "fail", "and", "or", "not", "true", "false", "vec"}

TWO_CHAR = ("<=", ">=", "==", "!=")
ONE_CHAR = "+-*/(){},.<>="


class PlanSyntaxError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "number" | "string" | "op" | "eof"
    text: str
    line: int
    col: int

    @property
    def pos(self) -> Pos:
        return Pos(self.line, self.col)


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(Token("name", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                if src[j] == ".":
                    # a dot not followed by a digit is a field access
                    if j + 1 >= n or not src[j + 1].isdigit():
                        break
                    seen_dot = True
                j += 1
            tokens.append(Token("number", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            buf = []
            while j < n and src[j] != '"':
                if src[j] == "\\" and j + 1 < n:
                    esc = src[j + 1]
                    buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                    j += 2
                elif src[j] == "\n":
                    raise PlanSyntaxError(line, start_col, "unterminated string")
                else:
                    buf.append(src[j])
                    j += 1
            if j >= n:
                raise PlanSyntaxError(line, start_col, "unterminated string")
            tokens.append(Token("string", "".join(buf), line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        two = src[i : i + 2]
        if two in TWO_CHAR:
            tokens.append(Token("op", two, line, start_col))
            i += 2
            col += 2
            continue
        if c in ONE_CHAR:
            tokens.append(Token("op", c, line, start_col))
            i += 1
            col += 1
            continue
        raise PlanSyntaxError(line, start_col, f"unexpected character {c!r}")
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.text else tok.kind
            raise PlanSyntaxError(tok.line, tok.col, f"expected {want!r}, found {got!r}")
        return self.advance()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.cur
        return tok.kind == kind and (text is None or tok.text == text)

    # statements ---------------------------------------------------------

    def parse_program(self) -> Program:
        stmts = []
        while not self.at("eof"):
            stmts.append(self.parse_stmt())
        return Program(tuple(stmts))

    def parse_stmt(self) -> StmtT:
        tok = self.cur
        if self.at("name", "let"):
            return self.parse_let()
        if self.at("name", "if"):
            return self.parse_if()
        if self.at("name", "fail"):
            return self.parse_fail()
        if tok.kind == "name" and tok.text not in KEYWORDS:
            return self.parse_skill_call()
        raise PlanSyntaxError(tok.line, tok.col, f"expected a statement, found {tok.text or tok.kind!r}")

    def parse_let(self) -> Let:
        start = self.expect("name", "let")
        name_tok = self.expect("name")
        if name_tok.text in KEYWORDS:
            raise PlanSyntaxError(name_tok.line, name_tok.col, f"{name_tok.text!r} is reserved")
        self.expect("op", "=")
        value = self.parse_expr()
        return Let(pos=start.pos, name=name_tok.text, value=value)

    def parse_if(self) -> If:
        start = self.expect("name", "if")
        branches = [(self.parse_expr(), self.parse_block())]
        orelse: tuple[StmtT, ...] = ()
        while self.at("name", "elif"):
            self.advance()
            branches.append((self.parse_expr(), self.parse_block()))
        if self.at("name", "else"):
            self.advance()
            orelse = self.parse_block()
        return If(pos=start.pos, branches=tuple(branches), orelse=orelse)

    def parse_block(self) -> tuple[StmtT, ...]:
        self.expect("op", "{")
        stmts = []
        while not self.at("op", "}"):
            if self.at("eof"):
                tok = self.cur
                raise PlanSyntaxError(tok.line, tok.col, "expected '}' before end of input")
            stmts.append(self.parse_stmt())
        self.expect("op", "}")
        return tuple(stmts)

    def parse_fail(self) -> Fail:
        start = self.expect("name", "fail")
        self.expect("op", "(")
        msg = self.expect("string")
        self.expect("op", ")")
        return Fail(pos=start.pos, message=msg.text)

    def parse_skill_call(self) -> SkillCall:
        name_tok = self.expect("name")
        self.expect("op", "(")
        args = self.parse_args()
        return SkillCall(pos=name_tok.pos, name=name_tok.text, args=tuple(args))

    def parse_args(self) -> list[ExprT]:
        args: list[ExprT] = []
        if not self.at("op", ")"):
            args.append(self.parse_expr())
            while self.at("op", ","):
                self.advance()
                args.append(self.parse_expr())
        self.expect("op", ")")
        return args

    # expressions --------------------------------------------------------

    def parse_expr(self) -> ExprT:
        return self.parse_or()

    def parse_or(self) -> ExprT:
        left = self.parse_and()
        while self.at("name", "or"):
            tok = self.advance()
            left = BoolOp(pos=tok.pos, op="or", left=left, right=self.parse_and())
        return left

    def parse_and(self) -> ExprT:
        left = self.parse_not()
        while self.at("name", "and"):
            tok = self.advance()
            left = BoolOp(pos=tok.pos, op="and", left=left, right=self.parse_not())
        return left

    def parse_not(self) -> ExprT:
        if self.at("name", "not"):
            tok = self.advance()
            return Not(pos=tok.pos, operand=self.parse_not())
        return self.parse_comparison()

    def parse_comparison(self) -> ExprT:
        left = self.parse_additive()
        if self.cur.kind == "op" and self.cur.text in ("<", "<=", ">", ">=", "==", "!="):
            tok = self.advance()
            right = self.parse_additive()
            return Compare(pos=tok.pos, op=tok.text, left=left, right=right)
        return left

    def parse_additive(self) -> ExprT:
        left = self.parse_term()
        while self.cur.kind == "op" and self.cur.text in ("+", "-"):
            tok = self.advance()
            left = Binary(pos=tok.pos, op=tok.text, left=left, right=self.parse_term())
        return left

    def parse_term(self) -> ExprT:
        left = self.parse_unary()
        while self.cur.kind == "op" and self.cur.text in ("*", "/"):
            tok = self.advance()
            right = self.parse_unary()
            if tok.text == "/" and isinstance(right, Num) and right.value == 0.0:
                raise PlanSyntaxError(tok.line, tok.col, "division by a literal zero")
            left = Binary(pos=tok.pos, op=tok.text, left=left, right=right)
        return left

    def parse_unary(self) -> ExprT:
        if self.at("op", "-"):
            tok = self.advance()
            operand = self.parse_unary()
            if isinstance(operand, Num):
                return Num(pos=tok.pos, value=-operand.value)
            return Binary(pos=tok.pos, op="*", left=Num(pos=tok.pos, value=-1.0), right=operand)
        return self.parse_postfix()

    def parse_postfix(self) -> ExprT:
        node = self.parse_primary()
        while self.at("op", "."):
            dot = self.advance()
            name_tok = self.expect("name")
            if name_tok.text not in FIELD_NAMES:
                raise PlanSyntaxError(
                    name_tok.line, name_tok.col, f"expected one of x, y, z after '.'"
                )
            node = Field(pos=dot.pos, base=node, name=name_tok.text)
        return node

    def parse_primary(self) -> ExprT:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return Num(pos=tok.pos, value=float(tok.text))
        if tok.kind == "string":
            self.advance()
            return Str(pos=tok.pos, value=tok.text)
        if self.at("op", "("):
            self.advance()
            inner = self.parse_expr()
            self.expect("op", ")")
            return inner
        if tok.kind == "name":
            if tok.text in ("true", "false"):
                self.advance()
                return BoolLit(pos=tok.pos, value=tok.text == "true")
            if tok.text == "vec":
                self.advance()
                self.expect("op", "(")
                args = self.parse_args()
                if len(args) != 3:
                    raise PlanSyntaxError(tok.line, tok.col, "vec takes exactly 3 arguments")
                return Vec3Lit(pos=tok.pos, x=args[0], y=args[1], z=args[2])
            if tok.text in BUILTIN_FUNCS:
                self.advance()
                self.expect("op", "(")
                args = self.parse_args()
                lo, hi = (1, 1) if tok.text == "abs" else (2, 2)
                if not (lo <= len(args) <= hi):
                    raise PlanSyntaxError(
                        tok.line, tok.col, f"{tok.text} takes {hi} argument(s), got {len(args)}"
                    )
                return Builtin(pos=tok.pos, func=tok.text, args=tuple(args))
            if tok.text in PERCEPTION_FUNCS:
                self.advance()
                self.expect("op", "(")
                args = self.parse_args()
                if len(args) != 1:
                    raise PlanSyntaxError(tok.line, tok.col, f"{tok.text} takes 1 argument")
                return Perception(pos=tok.pos, func=tok.text, object_id=args[0])
            if tok.text in KEYWORDS:
                raise PlanSyntaxError(tok.line, tok.col, f"unexpected keyword {tok.text!r}")
            self.advance()
            return Var(pos=tok.pos, name=tok.text)
        raise PlanSyntaxError(tok.line, tok.col, f"expected an expression, found {tok.text or tok.kind!r}")


def parse(src: str) -> Program:
    return Parser(src).parse_program()
