"""Independent oracles the interpreter tests check against.

Everything here is deliberately dumb and self-contained: plain
arithmetic, an explicit call-tree simulation with a dict cache, and
exhaustive subset search. None of it touches the package under test.
"""

from itertools import combinations


def fib(n: int) -> int:
    return n if n < 2 else fib(n - 1) + fib(n - 2)


def fib_call_tree(n: int) -> "tuple[int, int, int]":
    """Simulate a memoized fibonacci call tree with a dict cache.

    Returns (misses, hits, calls). Every argument value misses exactly
    once, arguments 2..n recurse twice, so for n >= 2:
    misses = n + 1, hits = n - 2, calls = 2n - 1.
    """
    cache: "dict[int, int]" = {}
    misses = hits = calls = 0

    def call(k: int) -> int:
        nonlocal misses, hits, calls
        calls += 1
        if k in cache:
            hits += 1
            return cache[k]
        misses += 1
        value = k if k < 2 else call(k - 1) + call(k - 2)
        cache[k] = value
        return value

    call(n)
    return misses, hits, calls


def pure_fib_calls(n: int) -> int:
    """Number of calls an unmemoized fibonacci makes (2*fib(n+1) - 1)."""
    calls = 0

    def go(k: int) -> int:
        nonlocal calls
        calls += 1
        return k if k < 2 else go(k - 1) + go(k - 2)

    go(n)
    return calls


def knapsack_best(capacity: int, items: "list[tuple[int, int]]") -> int:
    """Best total value over all subsets fitting in the capacity."""
    best = 0
    for r in range(len(items) + 1):
        for subset in combinations(items, r):
            weight = sum(w for w, _ in subset)
            if weight <= capacity:
                best = max(best, sum(v for _, v in subset))
    return best
