"""Best-balanced bipartitions of subsystem dimension lists.

The maximum Schmidt number attainable by any pure state on subsystems
with dimensions d_1..d_n, maximized over bipartitions, is
max over subsets of min(prod(left), prod(right)).  Finding it is a
product-balancing problem (subset sum in the exponents), so the solver
is exact and combinatorial: exhaustive enumeration up to 20 subsystems
and meet-in-the-middle up to 30.  All products use exact integer
arithmetic; nothing is compared through floating logs.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from math import isqrt, prod

from .errors import (
    DimensionMismatch,
    InvalidArgs,
    OverflowRisk,
    ProductOverflow,
    TooFewSubsystems,
    TooManySubsystems,
)
from .state import Bipartition

__all__ = [
    "PartitionInstance",
    "PartitionSolution",
    "SubsetSumReduction",
    "max_schmidt_number",
    "decide",
    "subset_sum_to_partition",
    "qubit_bound",
]

BRUTE_FORCE_LIMIT = 20
SUBSYSTEM_LIMIT = 30
PRODUCT_BIT_LIMIT = 4096


@dataclass(frozen=True)
class PartitionInstance:
    """A dimension list with an optional feasibility target."""

    dims: tuple[int, ...]
    target: int | None = None


@dataclass(frozen=True)
class PartitionSolution:
    """A bipartition achieving min-side product k."""

    bipartition: Bipartition
    left_product: int
    right_product: int
    k: int


@dataclass(frozen=True)
class SubsetSumReduction:
    """Subset-sum instance rephrased as partition problems.

    plain asks decide() whether some side reaches at least 2**target in
    log terms; padded adds two balancing dimensions sized so that the
    only way to meet its target is a perfectly balanced split, which
    forces an exact subset sum.  Query the padded instance when the
    question is exact-target feasibility.
    """

    values: tuple[int, ...]
    target: int
    plain: PartitionInstance
    padded: PartitionInstance


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise TooFewSubsystems("a bipartition needs at least 2 subsystems")
    if len(dims) > SUBSYSTEM_LIMIT:
        raise TooManySubsystems(
            f"{len(dims)} subsystems exceed the supported limit {SUBSYSTEM_LIMIT}")
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"dimensions must be positive, got {dims}")
    if prod(dims).bit_length() > PRODUCT_BIT_LIMIT:
        raise ProductOverflow(
            f"total dimension exceeds 2**{PRODUCT_BIT_LIMIT}")
    return dims


def qubit_bound(n: int) -> int:
    """Largest Schmidt number over bipartitions of n qubits: 2**(n//2)."""
    if n < 2:
        raise TooFewSubsystems("need at least 2 qubits")
    return 2 ** (n // 2)


def max_schmidt_number(dims) -> PartitionSolution:
    """Best achievable min-side product over all bipartitions.

    Deterministic tie-break: among optimal bipartitions the returned
    left side is the lexicographically smallest index set containing
    subsystem 1.
    """
    dims = _check_dims(dims)
    if len(dims) <= BRUTE_FORCE_LIMIT:
        best = _value_bruteforce(dims)
    else:
        best = _value_mitm(dims)
    left = _lex_min_left(dims, best)
    total = prod(dims)
    left_prod = prod(dims[i - 1] for i in left)
    return PartitionSolution(
        Bipartition.from_left(left, len(dims)),
        left_prod, total // left_prod, best)


def decide(dims, target: int) -> PartitionSolution | None:
    """A bipartition with min-side product >= target, or None.

    Feasible exactly when target <= max_schmidt_number(dims).k; the
    returned solution is the maximizer itself so the tie-break matches.
    """
    if int(target) < 1:
        raise InvalidArgs(f"target must be a positive integer, got {target}")
    solution = max_schmidt_number(dims)
    return solution if solution.k >= int(target) else None


def _value_bruteforce(dims: tuple[int, ...]) -> int:
    # enumerate subsets of indices 2..n joined to index 1; incremental
    # products via the lowest-set-bit recurrence
    rest = dims[1:]
    n1 = len(rest)
    total = prod(dims)
    table = [1] * (1 << n1)
    for mask in range(1, 1 << n1):
        low = (mask & -mask).bit_length() - 1
        table[mask] = table[mask ^ (1 << low)] * rest[low]
    best = 1
    for mask in range(1 << n1):
        left = dims[0] * table[mask]
        if left == total:
            continue
        k = min(left, total // left)
        if k > best:
            best = k
    return best


def _value_mitm(dims: tuple[int, ...]) -> int:
    half = len(dims) // 2
    first = _subset_products(dims[:half])
    second = sorted(_subset_products(dims[half:]))
    total = prod(dims)
    root = isqrt(total)
    best = 1
    for p1 in first:
        # best p2 is adjacent to sqrt(total)/p1 from below or above
        pos = bisect_right(second, root // p1)
        for idx in (pos - 1, pos):
            if 0 <= idx < len(second):
                p = p1 * second[idx]
                if 1 < p < total:
                    k = min(p, total // p)
                    if k > best:
                        best = k
    return best


def _subset_products(values) -> list[int]:
    products = [1]
    for v in values:
        products += [p * v for p in products]
    return products


def _lex_min_left(dims: tuple[int, ...], k: int) -> tuple[int, ...]:
    """Lexicographically smallest achieving left set containing index 1.

    Greedy over indices in order: stop as soon as the chosen prefix
    achieves (a shorter tuple beats any extension), otherwise include
    the next index whenever an achieving completion still exists.
    A left product P achieves exactly when P in {k, total // k}.
    """
    n = len(dims)
    total = prod(dims)
    targets = {k, total // k}
    chosen = [0]
    prefix = dims[0]
    for i in range(1, n):
        if prefix in targets:
            break
        free = list(dims[i + 1:])
        if _can_reach(prefix * dims[i], free, targets):
            chosen.append(i)
            prefix *= dims[i]
    assert prefix in targets, "achieving set construction failed"
    return tuple(i + 1 for i in chosen)


def _can_reach(prefix: int, free: list[int], targets: set[int]) -> bool:
    goals = [t // prefix for t in targets if t % prefix == 0]
    if not goals:
        return False
    half = len(free) // 2
    first = _subset_products(free[:half])
    second = set(_subset_products(free[half:]))
    for goal in goals:
        for p1 in first:
            if goal % p1 == 0 and goal // p1 in second:
                return True
    return False


def subset_sum_to_partition(values, target: int) -> SubsetSumReduction:
    """Rephrase exact subset sum over positive integers as partitioning.

    Each value x becomes a subsystem of dimension 2**x.  The plain
    instance keeps just those dimensions with threshold 2**target.  The
    padded instance appends dimensions 2**(S+target) and
    2**(2S-target), S = sum(values), with threshold 2**(2S): its total
    is 2**(4S), the two pads cannot share a side, and a side containing
    the second pad meets the threshold exactly when its plain values
    sum to target.  decide() on the padded instance is therefore
    equivalent to exact subset-sum feasibility.
    """
    values = tuple(int(v) for v in values)
    target = int(target)
    if not values or any(v < 1 for v in values):
        raise InvalidArgs(f"values must be positive integers, got {values}")
    s = sum(values)
    if target < 1 or target > 2 * s:
        raise InvalidArgs(
            f"target {target} outside the representable range 1..{2 * s}")
    if 2 * s > PRODUCT_BIT_LIMIT:
        raise OverflowRisk(
            f"exponent sum {s} too large for safe padded dimensions")
    plain = PartitionInstance(tuple(2 ** v for v in values), 2 ** target)
    padded = PartitionInstance(
        plain.dims + (2 ** (s + target), 2 ** (2 * s - target)),
        2 ** (2 * s))
    return SubsetSumReduction(values, target, plain, padded)
