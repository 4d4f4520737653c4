"""The memoizing big-step evaluator.

Terms evaluate against a store; evaluating a function term allocates a
fresh, empty memo table and stamps its location on the resulting value.
Applying a function evaluates its body as an *expression* relative to
the callee's own table, starting from the empty branch. Expression
evaluation explores the argument (`let !`, `let*`, `mcase`), appending
one event per exploration step, until a `return` completes the body:
the accumulated branch keys the memo table, either yielding the stored
result or binding the freshly computed one.

Binding is by substitution of (closed) values, so the evaluator carries
no environments and erased results compare directly against the pure
reference semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (DepthExceeded, DivisionByZero, InternalInvariantError,
                     PrefixViolation, Stuck)
from .memostore import INL_EVENT, INR_EVENT, KIND_BANG, Store, index_of, mt_insert, mt_lookup
from .stats import EvalStats
from .syntax import (
    Apply, Bang, Box, BoxVal, Expr, IntLit, Inl, Inr, KeyOf, LetBang,
    LetPair, MCase, MFun, MFunVal, Pair, PrimOp, Program, Res, Return,
    Roll, Term, TermCase, TermSplit, UNIT, UnitLit, Unbox, Unroll, Var,
    free_resources, subst,
)

_SUM_UNIT_FALSE = Inl(UnitLit(), UNIT, UNIT)
_SUM_UNIT_TRUE = Inr(UnitLit(), UNIT, UNIT)


@dataclass(slots=True)
class EvalConfig:
    """Evaluation mode and instrumentation.

    `cold` mode pays every memo-table cost but never returns a stored
    result, modelling the worst case where nothing is reusable.
    `checked` turns on the run-time invariant assertions (duplicate
    branch detection and resource-freeness of return bodies). `fault`
    optionally mutilates the insert path for the differential harness:
    "skip_insert" drops inserts, "wrong_branch" inserts at a perturbed
    key.
    """

    mode: str = "normal"  # "normal" | "cold"
    checked: bool = False
    depth_limit: int = 10 ** 6
    trace: bool = False
    fault: "str | None" = None
    stats: EvalStats = field(default_factory=EvalStats)
    depth: int = 0

    def __post_init__(self):
        if self.trace and self.stats.events is None:
            self.stats.events = []


def _op_int(v: Term, op: str) -> int:
    if type(v) is not IntLit:
        raise Stuck(f"operator '{op}' applied to a non-integer")
    return v.value


def _apply_primop(op: str, args: "list[Term]") -> Term:
    if op == "int2sum":
        return _SUM_UNIT_TRUE if _op_int(args[0], op) != 0 else _SUM_UNIT_FALSE
    a = _op_int(args[0], op)
    b = _op_int(args[1], op)
    if op == "+":
        return IntLit(a + b)
    if op == "-":
        return IntLit(a - b)
    if op == "*":
        return IntLit(a * b)
    if op == "div":
        if b == 0:
            raise DivisionByZero("div by zero")
        return IntLit(a // b)
    if op == "<":
        return IntLit(1 if a < b else 0)
    if op == "<=":
        return IntLit(1 if a <= b else 0)
    if op == "==":
        return IntLit(1 if a == b else 0)
    raise Stuck(f"unknown operator '{op}'")


def _perturb(branch: "list[tuple[int, int]]") -> "tuple[tuple[int, int], ...]":
    """A deliberately wrong key near `branch`, for fault injection: the
    last event is toggled so the bad entry can shadow a real branch."""
    if not branch:
        return (INL_EVENT,)
    kind, payload = branch[-1]
    last = (KIND_BANG, payload + 1) if kind == KIND_BANG else (kind, 1 - payload)
    return tuple(branch[:-1]) + (last,)


def _eval_term(store: Store, t: Term, cfg: EvalConfig) -> Term:
    stats = cfg.stats
    stats.steps += 1
    tp = type(t)
    if tp is IntLit or tp is UnitLit or tp is BoxVal:
        return t
    if tp is Apply:
        fn = _eval_term(store, t.fn, cfg)
        if type(fn) is not MFunVal:
            raise Stuck("application of a non-function value")
        arg = _eval_term(store, t.arg, cfg)
        cfg.depth += 1
        if cfg.depth > cfg.depth_limit:
            raise DepthExceeded(f"application depth exceeded {cfg.depth_limit}")
        try:
            return _eval_expr(store, fn.loc, [], fn.body,
                              {fn.fname: fn}, {fn.arg: arg}, cfg)
        finally:
            cfg.depth -= 1
    if tp is PrimOp:
        args = [_eval_term(store, a, cfg) for a in t.args]
        return _apply_primop(t.op, args)
    if tp is Pair:
        left = _eval_term(store, t.left, cfg)
        right = _eval_term(store, t.right, cfg)
        return t if left is t.left and right is t.right else Pair(left, right)
    if tp is Bang:
        body = _eval_term(store, t.body, cfg)
        return t if body is t.body else Bang(body)
    if tp is MFun:
        loc = store.alloc_table()
        return MFunVal(loc, t.fname, t.arg, t.arg_type, t.res_type, t.body)
    if tp is MFunVal:
        if cfg.checked and t.loc not in store.tables:
            raise InternalInvariantError(
                f"function value refers to unallocated location {t.loc}")
        return t
    if tp is Inl:
        body = _eval_term(store, t.body, cfg)
        return t if body is t.body else Inl(body, t.left_type, t.right_type)
    if tp is Inr:
        body = _eval_term(store, t.body, cfg)
        return t if body is t.body else Inr(body, t.left_type, t.right_type)
    if tp is Roll:
        body = _eval_term(store, t.body, cfg)
        return t if body is t.body else Roll(body, t.rec_type)
    if tp is Unroll:
        v = _eval_term(store, t.body, cfg)
        if type(v) is not Roll:
            raise Stuck("unroll of a non-rolled value")
        return v.body
    if tp is Box:
        v = _eval_term(store, t.body, cfg)
        cfg.stats.boxes_allocated += 1
        return store.alloc_box(v)
    if tp is Unbox:
        v = _eval_term(store, t.body, cfg)
        if type(v) is not BoxVal:
            raise Stuck("unbox of a non-box value")
        return store.boxes[v.tag]
    if tp is KeyOf:
        v = _eval_term(store, t.body, cfg)
        if type(v) is not BoxVal:
            raise Stuck("keyof of a non-box value")
        return IntLit(v.tag)
    if tp is TermCase:
        v = _eval_term(store, t.scrut, cfg)
        vtp = type(v)
        if vtp is Inl:
            return _eval_term(store, subst(t.left_arm, {}, {t.left_name: v.body}), cfg)
        if vtp is Inr:
            return _eval_term(store, subst(t.right_arm, {}, {t.right_name: v.body}), cfg)
        raise Stuck("case of a non-sum value")
    if tp is TermSplit:
        v = _eval_term(store, t.scrut, cfg)
        if type(v) is not Pair:
            raise Stuck("split of a non-pair value")
        body = subst(t.body, {}, {t.left_name: v.left, t.right_name: v.right})
        return _eval_term(store, body, cfg)
    if tp is Var:
        raise Stuck(f"free variable '{t.name}' at run time")
    if tp is Res:
        raise Stuck(f"free resource '{t.name}' at run time")
    raise Stuck(f"no rule for term {t!r}")


def _eval_expr(store: Store, loc: int, branch: list, e: Expr,
               vmap: dict, rmap: dict, cfg: EvalConfig) -> Term:
    # Bindings accumulate in vmap/rmap and are substituted into each
    # scrutinee (and the final return body) exactly once, which is
    # observationally the rules' eager substitution with less copying.
    stats = cfg.stats
    while True:
        stats.steps += 1
        tp = type(e)
        if tp is Return:
            table = store.tables[loc]
            found, cached = mt_lookup(table, branch, stats)
            if found and cfg.mode == "normal":
                stats.memo_hits += 1
                stats.returns += 1
                cell = stats.per_table.get(loc)
                if cell is None:
                    stats.per_table[loc] = [1, 0]
                else:
                    cell[0] += 1
                if cfg.trace:
                    stats.events.append(("hit", loc, tuple(branch)))
                return cached
            stats.memo_misses += 1
            cell = stats.per_table.get(loc)
            if cell is None:
                stats.per_table[loc] = [0, 1]
            else:
                cell[1] += 1
            if cfg.trace:
                stats.events.append(("miss", loc, tuple(branch)))
            body = subst(e.body, vmap, rmap)
            if cfg.checked:
                free = free_resources(body)
                if free:
                    raise InternalInvariantError(
                        f"return body has free resources {sorted(free)}")
            v = _eval_term(store, body, cfg)
            # the table object may have grown while the body ran; bind the
            # branch in the *post-evaluation* table
            table = store.tables[loc]
            if cfg.fault == "skip_insert":
                pass
            elif cfg.fault == "wrong_branch":
                try:
                    mt_insert(table, _perturb(branch), v, stats, on_dup="keep")
                except PrefixViolation:
                    pass  # the mutant only poisons values, not the tree shape
            elif cfg.mode == "cold":
                mt_insert(table, branch, v, stats, on_dup="keep")
            else:
                mt_insert(table, branch, v, stats,
                          on_dup="error" if cfg.checked else "keep")
            stats.returns += 1
            return v
        if tp is LetBang:
            v = _eval_term(store, subst(e.scrut, vmap, rmap), cfg)
            if type(v) is not Bang:
                raise Stuck("let ! of a non-bang value")
            inner = v.body
            branch.append((KIND_BANG, index_of(inner)))
            stats.branch_events += 1
            if len(branch) > stats.max_branch_len:
                stats.max_branch_len = len(branch)
            if cfg.trace:
                stats.events.append(("event", loc, branch[-1]))
            vmap = {**vmap, e.name: inner}
            e = e.body
            continue
        if tp is LetPair:
            v = _eval_term(store, subst(e.scrut, vmap, rmap), cfg)
            if type(v) is not Pair:
                raise Stuck("let* of a non-pair value")
            rmap = {**rmap, e.left_name: v.left, e.right_name: v.right}
            e = e.body
            continue
        if tp is MCase:
            v = _eval_term(store, subst(e.scrut, vmap, rmap), cfg)
            vtp = type(v)
            if vtp is Inl:
                branch.append(INL_EVENT)
                arm, name = e.left_arm, e.left_name
            elif vtp is Inr:
                branch.append(INR_EVENT)
                arm, name = e.right_arm, e.right_name
            else:
                raise Stuck("mcase of a non-sum value")
            stats.branch_events += 1
            if len(branch) > stats.max_branch_len:
                stats.max_branch_len = len(branch)
            if cfg.trace:
                stats.events.append(("event", loc, branch[-1]))
            rmap = {**rmap, name: v.body}
            e = arm
            continue
        raise Stuck(f"no rule for expression {e!r}")


def eval_term(store: Store, t: Term, cfg: "EvalConfig | None" = None):
    """Evaluate a closed term. Returns (value, store); the store passed
    in is extended in place and returned for convenience."""
    if cfg is None:
        cfg = EvalConfig()
    return _eval_term(store, t, cfg), store


def eval_expr(store: Store, loc: int, branch, e: Expr, cfg: "EvalConfig | None" = None):
    """Evaluate an expression against the memo table at `loc`, starting
    from `branch` (a sequence of encoded events)."""
    if cfg is None:
        cfg = EvalConfig()
    return _eval_expr(store, loc, list(branch), e, {}, {}, cfg), store


@dataclass(slots=True)
class RunResult:
    value: Term
    store: Store
    decl_values: "dict[str, Term]"
    stats: EvalStats


def run_program(program: Program, cfg: "EvalConfig | None" = None,
                store: "Store | None" = None) -> RunResult:
    """Evaluate the declarations in order, threading one store, then the
    main term with every declared name replaced by its value. Reuse
    across top-level calls happens precisely because the store persists
    between declarations and main."""
    if cfg is None:
        cfg = EvalConfig()
    if store is None:
        store = Store()
    values: "dict[str, Term]" = {}
    for name, term in program.decls:
        values[name] = _eval_term(store, subst(term, values, {}), cfg)
    main = subst(program.main, values, {})
    value = _eval_term(store, main, cfg)
    return RunResult(value, store, values, cfg.stats)
