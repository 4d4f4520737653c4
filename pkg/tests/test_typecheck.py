import pytest
from hypothesis import given, settings, strategies as st

from mfl.corpus import CORPUS_NAMES, load
from mfl.errors import MflTypeError
from mfl.gen import gen_program
from mfl.parser import parse
from mfl.syntax import (
    Bang, INT, IntLit, LetBang, LetPair, MFun, Pair, PrimOp, Res, Return,
    TArrow, TBang, TProd, TypeContext, UNIT, Var, type_eq,
)
from mfl.typecheck import check_expr, check_program, check_term

EMPTY = TypeContext.empty()


def kind_of(src: str) -> str:
    with pytest.raises(MflTypeError) as exc:
        check_program(parse(src))
    return exc.value.kind


# ---- positive examples


def test_mfib_header_shape():
    t = MFun("f", "a", TBang(INT), INT,
             LetBang("x", INT, Res("a"), Return(Var("x"))))
    assert type_eq(check_term(EMPTY, t), TArrow(TBang(INT), INT))


def test_return_of_variable():
    ctx = TypeContext({"x": INT}, {})
    assert type_eq(check_expr(ctx, Return(Var("x"))), INT)


def test_letpair_rule():
    ctx = TypeContext({}, {"p": TProd(INT, INT)})
    e = LetPair("a1", INT, "a2", INT, Res("p"), Return(IntLit(0)))
    assert type_eq(check_expr(ctx, e), INT)


def test_mf_type_is_nested_pairs_to_int():
    program = load("partial")
    decls = dict(program.decls)
    arrow = TArrow(TBang(INT), INT)
    ctx = TypeContext({"fy": arrow, "fz": arrow}, {})
    mf_ty = check_term(ctx, decls["mf"])
    assert type_eq(mf_ty, TArrow(TProd(INT, TProd(TBang(INT), TBang(INT))), INT))


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_accepted(name):
    check_program(load(name))


def test_corpus_main_types():
    assert type_eq(check_program(load("fib")), INT)
    assert type_eq(check_program(load("knapsack")), INT)


def test_determinism():
    program = load("quicksort")
    assert type_eq(check_program(program), check_program(program))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_weakening(seed):
    # a closed judgment survives any extension of the variable context
    program = gen_program(seed)
    base = check_program(program)
    term = program.main
    for name, decl in program.decls:
        term = None  # decl programs substitute; check the decl instead
    if program.decls:
        term = program.decls[0][1]
    junk = TypeContext({"zzz_fresh": UNIT, "zzz_more": TArrow(INT, INT)}, {})
    ty1 = check_term(EMPTY, term if term is not None else program.main)
    ty2 = check_term(junk, term if term is not None else program.main)
    assert type_eq(ty1, ty2)
    assert base is not None


# ---- the negative gate: every rejection carries its advertised kind

NEGATIVE_PROGRAMS = [
    # modal discipline
    ("main mfun f (a : int) : int is return a end", "ResourceInReturn"),
    ("main mfun f (p : int * int) : int is "
     "let* (a, b) = p in return a + b end end", "ResourceInReturn"),
    ("main mfun f (a : int) : int is let !x = !a in return x end end",
     "ResourceInBang"),
    ("main mfun f (s : int + int) : int is "
     "mcase s of inl a => let !x = !a in return x end "
     "| inr b => return 0 end end", "ResourceInBang"),
    # indexability of bang
    ("main !((1, 2))", "NotIndexable"),
    ("main !(mfun f (a : !int) : int is return 1 end)", "NotIndexable"),
    # unbound names
    ("main nope", "UnboundVar"),
    ("val a = b val b = 1 main a", "UnboundVar"),
    ("val selfish = selfish main 0", "UnboundVar"),
    # shape mismatches
    ("main mfun f (s : int + unit) : int is "
     "mcase s of inl a => return 1 | inr b => return () end end", "Mismatch"),
    ("main 1 2", "Mismatch"),
    ("main (mfun f (a : !int) : int is return 1 end) ()", "Mismatch"),
    ("main 1 + ()", "Mismatch"),
    ("main mfun f (a : int) : int is let !x = a in return x end end", "Mismatch"),
    ("main mfun f (a : !int) : int is let* (x, y) = a in return 0 end end",
     "Mismatch"),
    ("main mfun f (a : !int) : int is "
     "mcase a of inl x => return 0 | inr y => return 1 end end", "Mismatch"),
    ("main unroll 3", "Mismatch"),
    ("type t = rec u . unit + u main roll [t] 5", "Mismatch"),
    ("main unbox 3", "Mismatch"),
    ("main keyof ()", "Mismatch"),
    ("main inl [int + unit] ()", "Mismatch"),
    ("main mfun f (a : !int) : int is return () end", "Mismatch"),
    ("main case int2sum 1 of inl a => 1 | inr b => () end", "Mismatch"),
]


@pytest.mark.parametrize("src,kind", NEGATIVE_PROGRAMS)
def test_negative_gate(src, kind):
    assert kind_of(src) == kind


def test_negative_gate_has_at_least_twenty_cases():
    assert len(NEGATIVE_PROGRAMS) >= 20


def test_resource_in_return_example():
    ctx = TypeContext({}, {"a": TBang(INT)})
    with pytest.raises(MflTypeError) as exc:
        check_expr(ctx, Return(Res("a")))
    assert exc.value.kind == "ResourceInReturn"
    assert exc.value.name == "a"


def test_bang_of_product_example():
    with pytest.raises(MflTypeError) as exc:
        check_term(EMPTY, Bang(Pair(IntLit(1), IntLit(2))))
    assert exc.value.kind == "NotIndexable"


def test_unbound_resource_direct():
    with pytest.raises(MflTypeError) as exc:
        check_term(EMPTY, Res("ghost"))
    assert exc.value.kind == "UnboundResource"


def test_primop_arity_direct():
    with pytest.raises(MflTypeError) as exc:
        check_term(EMPTY, PrimOp("+", (IntLit(1),)))
    assert exc.value.kind == "ArityOrOp"
    with pytest.raises(MflTypeError) as exc:
        check_term(EMPTY, PrimOp("xor", (IntLit(1), IntLit(2))))
    assert exc.value.kind == "ArityOrOp"


def test_rebinding_a_banned_resource_is_fine():
    # an inner function may reuse an outer resource's name inside a
    # return body; the new binder shadows the banned one
    src = ("main mfun f (a : int) : int -> int is "
           "return (mfun g (a : int) : int is "
           "mcase int2sum a of inl u => return 0 | inr w => return 1 end end) end")
    check_program(parse(src))


def test_error_positions_present():
    with pytest.raises(MflTypeError) as exc:
        check_program(parse("val one = 1\nmain one ()"))
    assert exc.value.pos is not None
    assert exc.value.pos[0] == 2


def test_return_bodies_of_accepted_programs_are_resource_free():
    # any resource a return body mentions is bound within the body itself
    from mfl.syntax import Return, free_resources
    from test_gen import program_nodes

    for name in CORPUS_NAMES:
        program = load(name)
        check_program(program)
        for node in program_nodes(program):
            if type(node) is Return:
                assert free_resources(node.body) == set(), name
    for seed in range(40):
        program = gen_program(seed)
        for node in program_nodes(program):
            if type(node) is Return:
                assert free_resources(node.body) == set(), seed
