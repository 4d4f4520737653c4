import pytest

from mfl.deepcall import call_with_deep_stack
from mfl.eval_memo import EvalConfig, run_program
from mfl.parser import parse
from mfl.syntax import IntLit, term_eq


def test_results_and_exceptions_propagate():
    assert call_with_deep_stack(lambda a, b: a + b, 2, 3) == 5
    with pytest.raises(ZeroDivisionError):
        call_with_deep_stack(lambda: 1 // 0)


def test_recursion_beyond_the_default_limit():
    n = 20_000
    src = ("val f = mfun f (p : !int) : int is let !n = p in "
           "return (if n < 1 then 0 else 1 + f (!(n - 1))) end end "
           f"main f (!{n})")
    result = call_with_deep_stack(run_program, parse(src), EvalConfig())
    assert term_eq(result.value, IntLit(n))
