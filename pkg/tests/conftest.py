import sys

# Object-program recursion nests Python frames; give the suite headroom
# so capped evaluator depth guards trip before the host limit does.
sys.setrecursionlimit(200_000)
