"""Branches, memo tables and the store.

A branch is the sequence of choice-point events recorded while a function
body runs: the index of each value whose bang was eliminated, and which
arm each memoized case took. Memo tables are nested hash tables keyed one
event per level, so a lookup or insert of a branch with m events costs
m (+1) hash probes. The store maps a location to the memo table of the
function value allocated there, and doubles as the box registry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import DuplicateBranch, NonIndexableValue, PrefixViolation
from .syntax import BoxVal, IntLit, Term, UnitLit

# An encoded event is a (kind, payload) pair. The kind tag keeps bang
# events and case-arm events in separate key spaces even when the raw
# indices collide.
KIND_BANG = 0
KIND_SUM = 1
INL_EVENT = (KIND_SUM, 0)
INR_EVENT = (KIND_SUM, 1)

EventCode = "tuple[int, int]"
Branch = "tuple[EventCode, ...]"


@dataclass(slots=True, eq=True, frozen=True)
class BangEv:
    index: int


@dataclass(slots=True, eq=True, frozen=True)
class InlEv:
    pass


@dataclass(slots=True, eq=True, frozen=True)
class InrEv:
    pass


def encode_event(ev) -> "tuple[int, int]":
    t = type(ev)
    if t is BangEv:
        return (KIND_BANG, ev.index)
    if t is InlEv:
        return INL_EVENT
    if t is InrEv:
        return INR_EVENT
    raise TypeError(f"not an event: {ev!r}")


def decode_event(code: "tuple[int, int]"):
    kind, payload = code
    if kind == KIND_BANG:
        return BangEv(payload)
    if kind == KIND_SUM:
        return InlEv() if payload == 0 else InrEv()
    raise ValueError(f"bad event code: {code!r}")


def index_of(v: Term) -> int:
    """The injective index of a value of indexable type: an int is its
    own index, unit maps to the constant 0, a box maps to its tag."""
    t = type(v)
    if t is IntLit:
        return v.value
    if t is UnitLit:
        return 0
    if t is BoxVal:
        return v.tag
    raise NonIndexableValue(f"no index function for value {v!r}")


class _Node:
    __slots__ = ("children", "value", "has_value")

    def __init__(self):
        self.children: "dict[tuple[int, int], _Node] | None" = None
        self.value = None
        self.has_value = False


class MemoTable:
    """A tree of hash tables: each level keys on one encoded event.

    Bindings are extension-only. Because every recorded branch ends at a
    completed function body, no stored branch may be a strict prefix of
    another; inserts check this.
    """

    __slots__ = ("root", "entries")

    def __init__(self):
        self.root = _Node()
        self.entries = 0

    def __len__(self) -> int:
        return self.entries

    def items(self) -> "Iterator[tuple[tuple, object]]":
        """All (branch, value) bindings, in key order per level."""
        stack = [((), self.root)]
        while stack:
            prefix, node = stack.pop()
            if node.has_value:
                yield prefix, node.value
            if node.children:
                for code in sorted(node.children, reverse=True):
                    stack.append((prefix + (code,), node.children[code]))


def mt_lookup(table: MemoTable, branch, stats=None) -> "tuple[bool, object]":
    """Probe the nested tables along `branch`. Returns (found, value).
    Costs one probe per event walked plus one for the final entry check.
    """
    node = table.root
    probes = 0
    for code in branch:
        probes += 1
        children = node.children
        if children is None:
            node = None
            break
        node = children.get(code)
        if node is None:
            break
    probes += 1  # final entry check
    if stats is not None:
        stats.probes += probes
    if node is not None and node.has_value:
        return True, node.value
    return False, None


def mt_insert(table: MemoTable, branch, value, stats=None, on_dup: str = "error") -> None:
    """Bind `branch` to `value`, extending the table.

    A duplicate branch signals that a completed body re-inserted its own
    key, which the evaluation discipline rules out: raise, unless the
    caller runs in cold mode (`on_dup="keep"`), where re-insertion is the
    expected cost model and the first binding is kept.
    """
    node = table.root
    probes = 0
    depth = 0
    n = len(branch)
    for code in branch:
        if node.has_value:
            raise PrefixViolation(
                f"stored branch {branch[:depth]!r} is a strict prefix of {tuple(branch)!r}")
        probes += 1
        depth += 1
        if node.children is None:
            node.children = {}
        nxt = node.children.get(code)
        if nxt is None:
            nxt = _Node()
            node.children[code] = nxt
        node = nxt
    probes += 1
    if stats is not None:
        stats.probes += probes
    if node.has_value:
        if on_dup == "keep":
            return
        raise DuplicateBranch(f"branch {tuple(branch)!r} already bound")
    if node.children:
        raise PrefixViolation(
            f"branch {tuple(branch)!r} is a strict prefix of a stored branch")
    node.value = value
    node.has_value = True
    table.entries += 1


@dataclass(slots=True)
class Store:
    """Maps locations to memo tables; also registers boxed values.

    A store is confined to one evaluation. Independent evaluations get
    independent stores and may run concurrently.
    """

    tables: "dict[int, MemoTable]" = field(default_factory=dict)
    boxes: "dict[int, Term]" = field(default_factory=dict)
    next_loc: int = 0
    next_tag: int = 0

    def alloc_table(self) -> int:
        loc = self.next_loc
        self.next_loc = loc + 1
        self.tables[loc] = MemoTable()
        return loc

    def alloc_box(self, v: Term) -> BoxVal:
        tag = self.next_tag
        self.next_tag = tag + 1
        self.boxes[tag] = v
        return BoxVal(tag)

    def unbox(self, b: BoxVal) -> Term:
        return self.boxes[b.tag]
