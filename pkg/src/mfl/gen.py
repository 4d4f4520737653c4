"""Random well-typed program generation for the differential harness.

Programs are built top-down from the typing rules under a node budget,
so they are well-typed by construction (and re-checked, as a guard on
the generator itself). Termination is guaranteed: randomly generated
functions never refer to themselves, and the only recursion comes from
a fuel-counting template whose argument strictly decreases to a base
case. `keyof` is never generated: box keys are allocation-order values,
so letting them flow into arithmetic would make outcomes incomparable
across the two semantics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    Apply, Bang, Box, BOOL_SUM, INT, IntLit, Inl, Inr, LetBang, LetPair,
    MCase, MFun, Pair, PrimOp, Program, Res, Return, Roll, TArrow, TBang,
    TBox, TInt, TProd, TRec, TSum, TUnit, TVar, Term, TermCase, TermSplit,
    Type, UNIT, UnitLit, Unbox, Var, type_eq, unroll_type,
)
from .typecheck import check_program

REC_LIST = TRec("u", TSum(UNIT, TProd(INT, TVar("u"))))


@dataclass(slots=True)
class GenLimits:
    max_nodes: int = 60
    int_min: int = -8
    int_max: int = 8


class GeneratorError(Exception):
    pass


class _Gen:
    def __init__(self, rng: random.Random, limits: GenLimits):
        self.rng = rng
        self.limits = limits
        self.budget = limits.max_nodes
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def lit(self) -> IntLit:
        return IntLit(self.rng.randint(self.limits.int_min, self.limits.int_max))

    # ---- types

    def pick_type(self, depth: int = 0) -> Type:
        if depth >= 2 or self.budget < 8:
            return self.rng.choice((INT, INT, UNIT, TBang(INT)))
        r = self.rng.random()
        if r < 0.30:
            return INT
        if r < 0.38:
            return UNIT
        if r < 0.52:
            return TBang(self.rng.choice((INT, UNIT, TBox(INT))))
        if r < 0.66:
            return TProd(self.pick_type(depth + 1), self.pick_type(depth + 1))
        if r < 0.80:
            return TSum(self.pick_type(depth + 1), self.pick_type(depth + 1))
        if r < 0.88:
            return TBox(self.pick_type(depth + 1))
        if r < 0.95:
            return TArrow(self.pick_arg_type(), self.pick_type(depth + 1))
        return REC_LIST

    def pick_arg_type(self) -> Type:
        """Argument types for generated functions, biased toward shapes
        the exploration constructs can take apart."""
        r = self.rng.random()
        if r < 0.35:
            return TBang(INT)
        if r < 0.55:
            return TProd(TBang(INT), TBang(INT))
        if r < 0.7:
            return TSum(TBang(INT), TBang(UNIT))
        if r < 0.85:
            return TProd(INT, TBang(INT))
        return TBang(TBox(INT))

    # ---- terms

    def minimal(self, ty: Type) -> Term:
        t = type(ty)
        if t is TInt:
            return IntLit(0)
        if t is TUnit:
            return UnitLit()
        if t is TBang:
            return Bang(self.minimal(ty.item))
        if t is TProd:
            return Pair(self.minimal(ty.left), self.minimal(ty.right))
        if t is TSum:
            return Inl(self.minimal(ty.left), ty.left, ty.right)
        if t is TBox:
            return Box(self.minimal(ty.item))
        if t is TArrow:
            f, a = self.fresh("f"), self.fresh("a")
            return MFun(f, a, ty.arg, ty.res, Return(self.minimal(ty.res)))
        if t is TRec:
            return Roll(self.minimal(unroll_type(ty)), ty)
        raise GeneratorError(f"no minimal term for {ty!r}")

    def _names_of(self, env: "dict[str, Type]", ty: Type) -> "list[str]":
        return [n for n, t in env.items() if type_eq(t, ty)]

    def term(self, gamma: "dict[str, Type]", delta: "dict[str, Type]",
             ty: Type, depth: int) -> Term:
        self.budget -= 1
        if self.budget <= 0 or depth > 5:
            names = self._names_of(gamma, ty)
            if names:
                return Var(self.rng.choice(names))
            return self.minimal(ty)
        options: "list" = []
        gnames = self._names_of(gamma, ty)
        if gnames:
            options += ["var"] * 3
        rnames = self._names_of(delta, ty)
        if rnames:
            options += ["res"] * 3
        tt = type(ty)
        if tt is TInt:
            options += ["lit", "lit", "binop", "binop"]
        elif tt is TUnit:
            options += ["unit", "unit"]
        elif tt is TBang:
            options += ["bang", "bang"]
        elif tt is TProd:
            options += ["pair", "pair"]
        elif tt is TSum:
            options += ["inj", "inj"]
        elif tt is TBox:
            options += ["boxit", "boxit"]
        elif tt is TArrow:
            options += ["mfun", "mfun"]
        elif tt is TRec:
            options += ["roll", "roll"]
        if self.budget > 10 and depth < 4:
            options += ["apply", "case", "split"]
            if self.budget > 14:
                options += ["unbox"]
        choice = self.rng.choice(options)
        if choice == "var":
            return Var(self.rng.choice(gnames))
        if choice == "res":
            return Res(self.rng.choice(rnames))
        if choice == "lit":
            return self.lit()
        if choice == "unit":
            return UnitLit()
        if choice == "binop":
            op = self.rng.choice(("+", "-", "*", "<", "<=", "=="))
            return PrimOp(op, (self.term(gamma, delta, INT, depth + 1),
                               self.term(gamma, delta, INT, depth + 1)))
        if choice == "bang":
            # the bang body may not mention resources
            return Bang(self.term(gamma, {}, ty.item, depth + 1))
        if choice == "pair":
            return Pair(self.term(gamma, delta, ty.left, depth + 1),
                        self.term(gamma, delta, ty.right, depth + 1))
        if choice == "inj":
            if self.rng.random() < 0.5:
                return Inl(self.term(gamma, delta, ty.left, depth + 1),
                           ty.left, ty.right)
            return Inr(self.term(gamma, delta, ty.right, depth + 1),
                       ty.left, ty.right)
        if choice == "boxit":
            return Box(self.term(gamma, delta, ty.item, depth + 1))
        if choice == "mfun":
            return self.mfun(gamma, delta, ty.arg, ty.res, depth)
        if choice == "roll":
            return Roll(self.term(gamma, delta, unroll_type(ty), depth + 1), ty)
        if choice == "apply":
            arg_ty = self.pick_arg_type()
            fn = self.mfun(gamma, delta, arg_ty, ty, depth)
            arg = self.term(gamma, delta, arg_ty, depth + 1)
            return Apply(fn, arg)
        if choice == "case":
            scrut, sum_ty = self.scrutinee_sum(
                gamma, delta, TSum(self.pick_type(2), self.pick_type(2)), depth)
            ln, rn = self.fresh("c"), self.fresh("c")
            left = self.term(gamma, {**delta, ln: sum_ty.left}, ty, depth + 1)
            right = self.term(gamma, {**delta, rn: sum_ty.right}, ty, depth + 1)
            return TermCase(scrut, ln, left, rn, right)
        if choice == "split":
            prod_ty = TProd(self.pick_type(2), self.pick_type(2))
            scrut = self.term(gamma, delta, prod_ty, depth + 1)
            ln, rn = self.fresh("s"), self.fresh("s")
            body = self.term(gamma, {**delta, ln: prod_ty.left, rn: prod_ty.right},
                             ty, depth + 1)
            return TermSplit(scrut, ln, rn, body)
        if choice == "unbox":
            return Unbox(self.term(gamma, delta, TBox(ty), depth + 1))
        raise GeneratorError(choice)

    def scrutinee_sum(self, gamma, delta, default_ty: TSum, depth) -> "tuple[Term, TSum]":
        """A term of some sum type, preferring an existing resource or a
        numeric test (int2sum) so case analysis records real control."""
        sums = [(n, t) for n, t in delta.items() if type(t) is TSum]
        r = self.rng.random()
        if sums and r < 0.4:
            name, ty = self.rng.choice(sums)
            return Res(name), ty
        if r < 0.75:
            return (PrimOp("int2sum", (self.term(gamma, delta, INT, depth + 1),)),
                    BOOL_SUM)
        return self.term(gamma, delta, default_ty, depth + 1), default_ty

    def mfun(self, gamma, delta, arg_ty: Type, res_ty: Type, depth: int) -> MFun:
        # the self-name is bound but never used: generated functions do
        # not recurse (the fuel template below is the one exception)
        f, a = self.fresh("f"), self.fresh("a")
        body = self.expr(gamma, {**delta, a: arg_ty}, res_ty, depth + 1)
        return MFun(f, a, arg_ty, res_ty, body)

    # ---- expressions

    def expr(self, gamma: "dict[str, Type]", delta: "dict[str, Type]",
             ty: Type, depth: int):
        self.budget -= 1
        if self.budget <= 0 or depth > 6:
            return Return(self.term(gamma, {}, ty, depth))
        options = ["return", "return"]
        bangs = [(n, t) for n, t in delta.items() if type(t) is TBang]
        if bangs:
            options += ["letbang", "letbang", "letbang"]
        prods = [(n, t) for n, t in delta.items() if type(t) is TProd]
        if prods:
            options += ["letpair", "letpair", "letpair"]
        if self.budget > 6:
            options += ["letbang_new", "mcase"]
        choice = self.rng.choice(options)
        if choice == "return":
            return Return(self.term(gamma, {}, ty, depth))
        if choice == "letbang":
            name, bty = self.rng.choice(bangs)
            x = self.fresh("x")
            body = self.expr({**gamma, x: bty.item}, delta, ty, depth + 1)
            return LetBang(x, None, Res(name), body)
        if choice == "letbang_new":
            under = self.rng.choice((INT, UNIT))
            scrut = Bang(self.term(gamma, {}, under, depth + 1))
            x = self.fresh("x")
            body = self.expr({**gamma, x: under}, delta, ty, depth + 1)
            return LetBang(x, None, scrut, body)
        if choice == "letpair":
            name, pty = self.rng.choice(prods)
            ln, rn = self.fresh("p"), self.fresh("p")
            body = self.expr(gamma, {**delta, ln: pty.left, rn: pty.right},
                             ty, depth + 1)
            return LetPair(ln, None, rn, None, Res(name), body)
        if choice == "mcase":
            scrut, sum_ty = self.scrutinee_sum(
                gamma, delta, TSum(self.pick_type(2), self.pick_type(2)), depth)
            ln, rn = self.fresh("m"), self.fresh("m")
            left = self.expr(gamma, {**delta, ln: sum_ty.left}, ty, depth + 1)
            right = self.expr(gamma, {**delta, rn: sum_ty.right}, ty, depth + 1)
            return MCase(scrut, ln, None, left, rn, None, right)
        raise GeneratorError(choice)

    # ---- whole programs

    def fuel_program(self) -> Program:
        """A genuinely recursive function whose argument counts down to a
        base case, applied twice so later calls hit the warm table."""
        f = self.fresh("f")
        n = self.fresh("n")
        op = self.rng.choice(("+", "-"))
        step = PrimOp(op, (Apply(Var(f), Bang(PrimOp("-", (Var(n), IntLit(1))))),
                           self.rng.choice((self.lit(), Var(n)))))
        body = LetBang(n, None, Res("arg"),
                       Return(TermCase(PrimOp("int2sum", (PrimOp("<", (Var(n), IntLit(1))),)),
                                       "_", step, "_", self.lit())))
        fun = MFun(f, "arg", TBang(INT), INT, body)
        name = self.fresh("g")
        k = self.rng.randint(1, 8)
        k2 = self.rng.randint(0, k)
        main = PrimOp("+", (Apply(Var(name), Bang(IntLit(k))),
                            Apply(Var(name), Bang(IntLit(k2)))))
        return Program([(name, fun)], main)

    def decl_program(self) -> Program:
        arg_ty = self.pick_arg_type()
        res_ty = self.pick_type(1)
        fun = self.mfun({}, {}, arg_ty, res_ty, 0)
        name = self.fresh("g")
        arg = self.term({}, {}, arg_ty, 1)
        first = Apply(Var(name), arg)
        second = Apply(Var(name), arg)  # same argument: a hit when stable
        if type_eq(res_ty, INT):
            main = PrimOp("+", (first, second))
        else:
            main = Pair(first, second)
        return Program([(name, fun)], main)

    def bare_program(self) -> Program:
        return Program([], self.term({}, {}, self.pick_type(0), 0))


def gen_program(seed, limits: "GenLimits | None" = None) -> Program:
    """Generate one closed, well-typed, terminating program."""
    limits = limits or GenLimits()
    rng = seed if isinstance(seed, random.Random) else random.Random(f"mfl-gen:{seed}")
    g = _Gen(rng, limits)
    r = rng.random()
    if r < 0.3:
        program = g.fuel_program()
    elif r < 0.6:
        program = g.decl_program()
    else:
        program = g.bare_program()
    try:
        check_program(program)
    except Exception as exc:  # a generator bug, not a user error
        raise GeneratorError(f"generated an ill-typed program: {exc}") from exc
    return program
