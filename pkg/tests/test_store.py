import pytest
from hypothesis import given, settings, strategies as st

from mfl.errors import DuplicateBranch, NonIndexableValue, PrefixViolation
from mfl.memostore import (
    BangEv, InlEv, InrEv, MemoTable, Store, decode_event, encode_event,
    index_of, mt_insert, mt_lookup,
)
from mfl.stats import EvalStats
from mfl.syntax import BoxVal, IntLit, Pair, UnitLit


def test_index_of_int_is_identity():
    assert index_of(IntLit(42)) == 42
    assert index_of(IntLit(-7)) == -7


def test_index_of_unit_is_constant_zero():
    assert index_of(UnitLit()) == 0


def test_index_of_box_is_its_tag():
    assert index_of(BoxVal(17)) == 17


def test_index_of_rejects_non_indexable():
    with pytest.raises(NonIndexableValue):
        index_of(Pair(IntLit(1), IntLit(2)))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10 ** 9, 10 ** 9), min_size=2, max_size=1000, unique=True))
def test_index_of_injective_on_ints(values):
    indices = {index_of(IntLit(v)) for v in values}
    assert len(indices) == len(values)


def test_index_of_injective_at_scale():
    import random
    rng = random.Random("index-injectivity")
    ints = rng.sample(range(-10 ** 9, 10 ** 9), 10 ** 5)
    assert len({index_of(IntLit(v)) for v in ints}) == len(ints)
    # box tags are unique by allocation
    store = Store()
    tags = {index_of(store.alloc_box(UnitLit())) for _ in range(10 ** 5)}
    assert len(tags) == 10 ** 5


def test_encode_event():
    assert encode_event(BangEv(7)) == (0, 7)
    assert encode_event(InlEv()) == (1, 0)
    assert encode_event(InrEv()) == (1, 1)
    for ev in (BangEv(-3), InlEv(), InrEv()):
        assert decode_event(encode_event(ev)) == ev


def test_bang_and_sum_events_never_collide():
    # a bang of value 0 or 1 is distinct from an arm event
    assert encode_event(BangEv(0)) != encode_event(InlEv())
    assert encode_event(BangEv(1)) != encode_event(InrEv())


def branch(*events):
    return [encode_event(e) for e in events]


def test_lookup_empty_table():
    table = MemoTable()
    assert mt_lookup(table, branch(BangEv(5))) == (False, None)
    assert mt_lookup(table, []) == (False, None)


def test_read_your_write():
    table = MemoTable()
    mt_insert(table, branch(BangEv(5)), "v")
    assert mt_lookup(table, branch(BangEv(5))) == (True, "v")


def test_distinct_branches_do_not_alias():
    table = MemoTable()
    mt_insert(table, branch(BangEv(5)), "v")
    assert mt_lookup(table, branch(BangEv(5), InlEv()))[0] is False
    assert mt_lookup(table, branch(BangEv(6)))[0] is False


def test_double_insert_same_branch_raises():
    table = MemoTable()
    mt_insert(table, branch(BangEv(5)), "v")
    with pytest.raises(DuplicateBranch):
        mt_insert(table, branch(BangEv(5)), "w")
    # extension-only: the original binding survives
    assert mt_lookup(table, branch(BangEv(5))) == (True, "v")


def test_keep_mode_preserves_first_binding():
    table = MemoTable()
    mt_insert(table, branch(InlEv()), "first")
    mt_insert(table, branch(InlEv()), "second", on_dup="keep")
    assert mt_lookup(table, branch(InlEv())) == (True, "first")


def test_two_distinct_branches_both_retrievable():
    table = MemoTable()
    mt_insert(table, branch(BangEv(1)), "a")
    mt_insert(table, branch(BangEv(2), InrEv()), "b")
    assert mt_lookup(table, branch(BangEv(1))) == (True, "a")
    assert mt_lookup(table, branch(BangEv(2), InrEv())) == (True, "b")
    assert len(table) == 2


def test_prefix_freedom_enforced():
    table = MemoTable()
    mt_insert(table, branch(BangEv(1), InlEv()), "deep")
    with pytest.raises(PrefixViolation):
        mt_insert(table, branch(BangEv(1)), "shallow")
    table2 = MemoTable()
    mt_insert(table2, branch(BangEv(1)), "shallow")
    with pytest.raises(PrefixViolation):
        mt_insert(table2, branch(BangEv(1), InlEv()), "deep")


def test_empty_branch_entry():
    table = MemoTable()
    mt_insert(table, [], "root")
    assert mt_lookup(table, []) == (True, "root")
    with pytest.raises(PrefixViolation):
        mt_insert(table, branch(InlEv()), "below-root")


def test_lookup_probe_count_is_branch_length_plus_one():
    for n in (0, 1, 3, 8):
        table = MemoTable()
        key = branch(*[BangEv(i) for i in range(n)])
        stats = EvalStats()
        mt_insert(table, key, "v", stats)
        assert stats.probes == n + 1
        stats = EvalStats()
        found, _ = mt_lookup(table, key, stats)
        assert found and stats.probes == n + 1


def test_items_enumerates_all_bindings():
    table = MemoTable()
    keys = [branch(BangEv(1)), branch(BangEv(2), InlEv()), branch(BangEv(2), InrEv())]
    for i, k in enumerate(keys):
        mt_insert(table, k, i)
    got = {k: v for k, v in table.items()}
    assert got == {tuple(k): i for i, k in enumerate(keys)}


def test_alloc_table_fresh_and_empty():
    store = Store()
    l1 = store.alloc_table()
    l2 = store.alloc_table()
    assert l1 != l2
    assert len(store.tables) == 2
    assert mt_lookup(store.tables[l2], branch(BangEv(0)))[0] is False


def test_alloc_box_registry():
    store = Store()
    b1 = store.alloc_box(IntLit(1))
    b2 = store.alloc_box(IntLit(1))
    assert b1.tag != b2.tag
    assert store.unbox(b1).value == 1
    assert index_of(b1) == b1.tag
