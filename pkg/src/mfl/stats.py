"""Evaluation counters.

`steps` counts big-step rule applications (every premise evaluation in
its own right), which both evaluators count identically; the memoizing
evaluator additionally pays `probes` hash operations for memo-table
lookups and inserts. Hit/miss counters are kept globally and per memo
table, and `returns` counts completed return expressions so tests can
assert hits + misses == returns.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(slots=True)
class EvalStats:
    steps: int = 0
    memo_hits: int = 0
    memo_misses: int = 0
    probes: int = 0
    branch_events: int = 0
    boxes_allocated: int = 0
    max_branch_len: int = 0
    returns: int = 0
    # per-location [hits, misses]; lets benchmarks read one function's table
    per_table: "dict[int, list[int]]" = field(default_factory=dict)
    # optional trace of ("hit"|"miss"|"event", location, detail) tuples
    events: "list[tuple] | None" = None

    def total_work(self) -> int:
        """Rule applications plus hash probes: the memoizing semantics'
        cost, comparable against a pure run's `steps`."""
        return self.steps + self.probes

    def as_dict(self) -> "dict[str, int]":
        return {
            "steps": self.steps,
            "memo_hits": self.memo_hits,
            "memo_misses": self.memo_misses,
            "probes": self.probes,
            "branch_events": self.branch_events,
            "boxes_allocated": self.boxes_allocated,
            "max_branch_len": self.max_branch_len,
            "returns": self.returns,
        }
