"""Printing: programs back to surface syntax, and run-time values.

`print_program` emits source that re-parses to a structurally equal
program (desugared forms print as their expansions, which parse back to
the same tree). `print_value` renders run-time values for the CLI,
dereferencing boxes through the store's registry.
"""

from __future__ import annotations

from .syntax import (
    Apply, Bang, Box, BoxVal, Expr, IntLit, Inl, Inr, KeyOf, LetBang, LetPair,
    MCase, MFun, MFunVal, Pair, PrimOp, Program, Res, Return, Roll, Term,
    TermCase, TermSplit, UnitLit, Unbox, Unroll, Var, format_type,
)

# precedence levels: 0 term, 1 cmp, 2 add, 3 mul, 4 unary, 5 app, 6 atom
_OP_LEVEL = {"<": 1, "<=": 1, "==": 1, "+": 2, "-": 2, "*": 3, "div": 3}


def print_term(t: Term, level: int = 0) -> str:
    tp = type(t)
    if tp is Var or tp is Res:
        return t.name
    if tp is IntLit:
        return str(t.value) if t.value >= 0 else f"(-{-t.value})"
    if tp is UnitLit:
        return "()"
    if tp is Pair:
        return f"({print_term(t.left)}, {print_term(t.right)})"
    if tp is PrimOp:
        if t.op == "int2sum":
            s = f"int2sum {print_term(t.args[0], 5)}"
            return f"({s})" if level > 4 else s
        mine = _OP_LEVEL[t.op]
        # comparisons do not chain; their operands sit one level down
        left = print_term(t.args[0], mine + 1 if mine == 1 else mine)
        right = print_term(t.args[1], mine + 1)
        s = f"{left} {t.op} {right}"
        return f"({s})" if level > mine else s
    if tp is Apply:
        s = f"{print_term(t.fn, 5)} {print_term(t.arg, 6)}"
        return f"({s})" if level > 5 else s
    if tp is Bang:
        s = f"!{print_term(t.body, 6)}"
        return f"({s})" if level > 4 else s
    if tp in (Box, Unbox, KeyOf, Unroll):
        kw = {Box: "box", Unbox: "unbox", KeyOf: "keyof", Unroll: "unroll"}[tp]
        s = f"{kw} {print_term(t.body, 5)}"
        return f"({s})" if level > 4 else s
    if tp is Roll:
        s = f"roll [{format_type(t.rec_type)}] {print_term(t.body, 5)}"
        return f"({s})" if level > 4 else s
    if tp is Inl or tp is Inr:
        kw = "inl" if tp is Inl else "inr"
        ann = f"{format_type(t.left_type, 2)} + {format_type(t.right_type, 1)}"
        s = f"{kw} [{ann}] {print_term(t.body, 5)}"
        return f"({s})" if level > 4 else s
    if tp is TermCase:
        s = (f"case {print_term(t.scrut)} of inl {t.left_name} => {print_term(t.left_arm)}"
             f" | inr {t.right_name} => {print_term(t.right_arm)} end")
        return f"({s})" if level > 0 else s
    if tp is TermSplit:
        s = (f"split {print_term(t.scrut)} as ({t.left_name}, {t.right_name}) "
             f"in {print_term(t.body)} end")
        return f"({s})" if level > 0 else s
    if tp is MFun:
        s = (f"mfun {t.fname} ({t.arg} : {format_type(t.arg_type)}) : "
             f"{format_type(t.res_type)} is {print_expr(t.body)} end")
        return s if level <= 6 else f"({s})"
    if tp is MFunVal:
        raise ValueError("function values with locations have no surface syntax")
    if tp is BoxVal:
        raise ValueError("boxed values have no surface syntax")
    raise TypeError(f"not a term: {t!r}")


def _ann(ty) -> str:
    return f" : {format_type(ty)}" if ty is not None else ""


def print_expr(e: Expr) -> str:
    tp = type(e)
    if tp is Return:
        return f"return {print_term(e.body)}"
    if tp is LetBang:
        return (f"let !{e.name}{_ann(e.ann)} = {print_term(e.scrut)} in "
                f"{print_expr(e.body)} end")
    if tp is LetPair:
        return (f"let* ({e.left_name}{_ann(e.left_ann)}, {e.right_name}{_ann(e.right_ann)}) "
                f"= {print_term(e.scrut)} in {print_expr(e.body)} end")
    if tp is MCase:
        return (f"mcase {print_term(e.scrut)} of "
                f"inl {e.left_name}{_ann(e.left_ann)} => {print_expr(e.left_arm)}"
                f" | inr {e.right_name}{_ann(e.right_ann)} => {print_expr(e.right_arm)} end")
    raise TypeError(f"not an expression: {e!r}")


def print_program(p: Program) -> str:
    parts = [f"val {name} = {print_term(term)}" for name, term in p.decls]
    parts.append(f"main {print_term(p.main)}")
    return "\n\n".join(parts) + "\n"


def print_value(v: Term, boxes: "dict[int, Term] | None" = None) -> str:
    """Human-readable rendering of a run-time value. Boxes print their
    tag and, when a registry is supplied, their contents."""
    tp = type(v)
    if tp is IntLit:
        return str(v.value)
    if tp is UnitLit:
        return "()"
    if tp is Bang:
        return f"!{print_value(v.body, boxes)}"
    if tp is Pair:
        return f"({print_value(v.left, boxes)}, {print_value(v.right, boxes)})"
    if tp is Inl:
        return f"inl {print_value(v.body, boxes)}"
    if tp is Inr:
        return f"inr {print_value(v.body, boxes)}"
    if tp is Roll:
        return f"roll {print_value(v.body, boxes)}"
    if tp is MFunVal:
        return f"<fun {v.fname}#{v.loc}>"
    if tp is MFun:
        return f"<fun {v.fname}>"
    if tp is BoxVal:
        if boxes is not None and v.tag in boxes:
            return f"box#{v.tag}({print_value(boxes[v.tag], boxes)})"
        return f"box#{v.tag}"
    return print_term(v)
