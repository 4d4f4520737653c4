"""Run a callable on a thread with a large stack.

The evaluators recurse with the object program (one Python frame chain
per nested application), so list-shaped inputs of a few thousand
elements exceed both the default recursion limit and the main thread's
C stack. Benchmarks and the CLI funnel evaluation through here.
"""

from __future__ import annotations

import sys
import threading

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 2_000_000


def call_with_deep_stack(fn, *args, **kwargs):
    result: list = []
    failure: list = []

    def worker():
        limit = sys.getrecursionlimit()
        if limit < RECURSION_LIMIT:
            sys.setrecursionlimit(RECURSION_LIMIT)
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as exc:  # re-raised on the calling thread
            failure.append(exc)

    old_size = threading.stack_size(STACK_BYTES)
    try:
        thread = threading.Thread(target=worker, name="mfl-eval")
        thread.start()
    finally:
        threading.stack_size(old_size)
    thread.join()
    if failure:
        raise failure[0]
    return result[0]
