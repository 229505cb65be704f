"""Deterministic evaluator for parsed plans.

The interpreter owns no simulation state: skill dispatch and perception
go through a runtime object supplied by the caller (the executor in
production, a stub in tests). Evaluation is total because the grammar
has no loops.
"""
from __future__ import annotations

from typing import Any, Protocol, Union

from ..geometry import Vec3
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
    Pos,
    Program,
    SkillCall,
    Str,
    Var,
    Vec3Lit,
)

Value = Union[float, bool, str, Vec3]


class PlanRuntimeError(Exception):
    def __init__(self, pos: Pos, message: str):
        super().__init__(f"line {pos.line}, col {pos.col}: {message}")
        self.pos = pos
        self.reason = message


class RuntimeTypeError(PlanRuntimeError):
    pass


class UnknownIdentifier(PlanRuntimeError):
    pass


class UnsolvableDeclared(Exception):
    """Raised when a plan takes a fail(...) path."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SkillRuntime(Protocol):
    def call_skill(self, stmt: SkillCall, args: list[Value]) -> None: ...

    def get_position(self, object_id: str) -> Vec3: ...

    def get_size(self, object_id: str) -> Vec3: ...


def _number(v: Value, pos: Pos, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise RuntimeTypeError(pos, f"{what} must be a number, got {type(v).__name__}")
    return float(v)


def eval_expr(e: ExprT, env: dict[str, Value], runtime: SkillRuntime) -> Value:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Str):
        return e.value
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Var):
        if e.name not in env:
            raise UnknownIdentifier(e.pos, f"unknown identifier {e.name!r}")
        return env[e.name]
    if isinstance(e, Vec3Lit):
        return Vec3(
            _number(eval_expr(e.x, env, runtime), e.pos, "vec x"),
            _number(eval_expr(e.y, env, runtime), e.pos, "vec y"),
            _number(eval_expr(e.z, env, runtime), e.pos, "vec z"),
        )
    if isinstance(e, Binary):
        left = eval_expr(e.left, env, runtime)
        right = eval_expr(e.right, env, runtime)
        if isinstance(left, Vec3) or isinstance(right, Vec3):
            return _vec_arith(e, left, right)
        lv = _number(left, e.pos, "operand")
        rv = _number(right, e.pos, "operand")
        if e.op == "+":
            return lv + rv
        if e.op == "-":
            return lv - rv
        if e.op == "*":
            return lv * rv
        if rv == 0.0:
            raise RuntimeTypeError(e.pos, "division by zero")
        return lv / rv
    if isinstance(e, Compare):
        lv = _number(eval_expr(e.left, env, runtime), e.pos, "comparison operand")
        rv = _number(eval_expr(e.right, env, runtime), e.pos, "comparison operand")
        return {
            "<": lv < rv,
            "<=": lv <= rv,
            ">": lv > rv,
            ">=": lv >= rv,
            "==": lv == rv,
            "!=": lv != rv,
        }[e.op]
    if isinstance(e, BoolOp):
        lv = eval_expr(e.left, env, runtime)
        if not isinstance(lv, bool):
            raise RuntimeTypeError(e.pos, f"{e.op} needs boolean operands")
        if e.op == "and" and not lv:
            return False
        if e.op == "or" and lv:
            return True
        rv = eval_expr(e.right, env, runtime)
        if not isinstance(rv, bool):
            raise RuntimeTypeError(e.pos, f"{e.op} needs boolean operands")
        return rv
    if isinstance(e, Not):
        v = eval_expr(e.operand, env, runtime)
        if not isinstance(v, bool):
            raise RuntimeTypeError(e.pos, "not needs a boolean operand")
        return not v
    if isinstance(e, Builtin):
        vals = [_number(eval_expr(a, env, runtime), e.pos, e.func) for a in e.args]
        if e.func == "min":
            return min(vals)
        if e.func == "max":
            return max(vals)
        return abs(vals[0])
    if isinstance(e, Perception):
        oid = eval_expr(e.object_id, env, runtime)
        if not isinstance(oid, str):
            raise RuntimeTypeError(e.pos, "perception functions take an object id string")
        try:
            if e.func == "get_position":
                return runtime.get_position(oid)
            return runtime.get_size(oid)
        except KeyError:
            raise UnknownIdentifier(e.pos, f"no object {oid!r} in the scene") from None
    if isinstance(e, Field):
        base = eval_expr(e.base, env, runtime)
        if not isinstance(base, Vec3):
            raise RuntimeTypeError(e.pos, f".{e.name} needs a vec3")
        return getattr(base, e.name)
    raise RuntimeTypeError(e.pos, f"cannot evaluate {type(e).__name__}")


def _vec_arith(e: Binary, left: Value, right: Value) -> Value:
    if isinstance(left, Vec3) and isinstance(right, Vec3):
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        raise RuntimeTypeError(e.pos, f"vec3 {e.op} vec3 is not defined")
    if isinstance(left, Vec3) and isinstance(right, (int, float)) and not isinstance(right, bool):
        if e.op == "*":
            return left.scaled(float(right))
        if e.op == "/":
            if right == 0.0:
                raise RuntimeTypeError(e.pos, "division by zero")
            return left.scaled(1.0 / float(right))
    if isinstance(right, Vec3) and isinstance(left, (int, float)) and not isinstance(left, bool):
        if e.op == "*":
            return right.scaled(float(left))
    raise RuntimeTypeError(e.pos, f"unsupported vec3 arithmetic {e.op}")


def interpret(program: Program, globals_map: dict[str, Value], runtime: SkillRuntime) -> None:
    """Run the plan to completion. Skill dispatch effects (including aborts)
    are raised out of the runtime hooks, not returned."""
    env = dict(globals_map)
    _run_block(program.statements, env, runtime)


def _run_block(stmts, env: dict[str, Value], runtime: SkillRuntime) -> None:
    for s in stmts:
        if isinstance(s, Let):
            env[s.name] = eval_expr(s.value, env, runtime)
        elif isinstance(s, SkillCall):
            args = [eval_expr(a, env, runtime) for a in s.args]
            runtime.call_skill(s, args)
        elif isinstance(s, Fail):
            raise UnsolvableDeclared(s.message)
        elif isinstance(s, If):
            taken = False
            for cond, body in s.branches:
                v = eval_expr(cond, env, runtime)
                if not isinstance(v, bool):
                    raise RuntimeTypeError(cond.pos, "condition must be boolean")
                if v:
                    _run_block(body, env, runtime)
                    taken = True
                    break
            if not taken:
                _run_block(s.orelse, env, runtime)
        else:
            raise RuntimeTypeError(s.pos, f"cannot execute {type(s).__name__}")
