"""AST for the branching plan language.

The language is deliberately loop-free: a program is a list of
statements where the only control flow is if/elif/else, so every
program terminates in at most one dispatch per statement. Source
positions and statement numbering are carried on the nodes but do not
participate in equality, which lets parse/print round-trips compare
structurally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..geometry import Vec3  # noqa: F401  (re-exported for interpreter values)

COMPARE_OPS = ("<", "<=", ">", ">=", "==", "!=")
ARITH_OPS = ("+", "-", "*", "/")
BUILTIN_FUNCS = ("min", "max", "abs")
PERCEPTION_FUNCS = ("get_position", "get_size")
FIELD_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


@dataclass(frozen=True)
class Expr:
    pos: Pos = field(compare=False, repr=False)


@dataclass(frozen=True)
class Num(Expr):
    value: float = 0.0


@dataclass(frozen=True)
class Str(Expr):
    value: str = ""


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool = False


@dataclass(frozen=True)
class Var(Expr):
    name: str = ""


@dataclass(frozen=True)
class Vec3Lit(Expr):
    x: "ExprT" = None  # type: ignore[assignment]
    y: "ExprT" = None  # type: ignore[assignment]
    z: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Binary(Expr):
    op: str = "+"
    left: "ExprT" = None  # type: ignore[assignment]
    right: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Compare(Expr):
    op: str = "=="
    left: "ExprT" = None  # type: ignore[assignment]
    right: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str = "and"  # "and" | "or"
    left: "ExprT" = None  # type: ignore[assignment]
    right: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Not(Expr):
    operand: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Builtin(Expr):
    func: str = "min"
    args: tuple["ExprT", ...] = ()


@dataclass(frozen=True)
class Perception(Expr):
    func: str = "get_position"
    object_id: "ExprT" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Field(Expr):
    base: "ExprT" = None  # type: ignore[assignment]
    name: str = "x"


ExprT = Union[
    Num, Str, BoolLit, Var, Vec3Lit, Binary, Compare, BoolOp, Not, Builtin, Perception, Field
]


@dataclass
class Stmt:
    pos: Pos = field(compare=False, repr=False)
    index: int = field(default=-1, compare=False, repr=False)


@dataclass
class Let(Stmt):
    name: str = ""
    value: ExprT = None  # type: ignore[assignment]


@dataclass
class SkillCall(Stmt):
    name: str = ""
    args: tuple[ExprT, ...] = ()


@dataclass
class Fail(Stmt):
    message: str = ""


@dataclass
class If(Stmt):
    # (condition, body) per if/elif arm, in source order
    branches: tuple[tuple[ExprT, tuple["StmtT", ...]], ...] = ()
    orelse: tuple["StmtT", ...] = ()


StmtT = Union[Let, SkillCall, Fail, If]


@dataclass
class Program:
    statements: tuple[StmtT, ...] = ()

    def __post_init__(self) -> None:
        self._number()

    def _number(self) -> None:
        counter = 0

        def visit(stmts: tuple[StmtT, ...]) -> None:
            nonlocal counter
            for s in stmts:
                s.index = counter
                counter += 1
                if isinstance(s, If):
                    for _, body in s.branches:
                        visit(body)
                    visit(s.orelse)

        visit(self.statements)
        self.statement_count = counter

    def walk(self):
        def visit(stmts):
            for s in stmts:
                yield s
                if isinstance(s, If):
                    for _, body in s.branches:
                        yield from visit(body)
                    yield from visit(s.orelse)

        yield from visit(self.statements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Program) and self.statements == other.statements
