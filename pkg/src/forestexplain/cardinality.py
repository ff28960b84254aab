"""Cardinality gadgets emitted as CNF clauses.

All gadgets here are one-directional: an output literal being true forces the
corresponding count over the inputs, and any assignment meeting the count can
be extended to satisfy the gadget. The reverse implication is deliberately
not encoded; every call site only ever asserts outputs positively.

Two interchangeable families are provided. ``network`` builds Batcher's
odd-even sorting network with constant folding on the padding, ``sequential``
builds a row-by-row counter. Both expose the same contract so they can be
swapped for differential testing.
"""

from __future__ import annotations

from typing import Callable, Optional

Wire = Optional[int]  # None encodes constant false


class VarPool:
    """Monotone variable allocator shared by encoder and gadgets."""

    def __init__(self, start: int = 0):
        self.count = start

    def new(self) -> int:
        self.count += 1
        return self.count


def _compare(pool: VarPool, clauses: list[list[int]], a: Wire, b: Wire) -> tuple[Wire, Wire]:
    """One comparator: returns (lo, hi) = (min, max) with false folded away."""
    if a is None:
        return None, b
    if b is None:
        return None, a
    lo = pool.new()
    hi = pool.new()
    clauses.append([-hi, a, b])
    clauses.append([-lo, a])
    clauses.append([-lo, b])
    return lo, hi


def sorted_network_outputs(pool: VarPool, clauses: list[list[int]], lits: list[int]) -> list[Wire]:
    """Outputs of an odd-even mergesort over the input literals, largest
    first: outs[j] true in a model implies at least j+1 inputs are true."""
    n = len(lits)
    if n == 0:
        return []
    size = 1
    while size < n:
        size *= 2
    wires: list[Wire] = list(lits) + [None] * (size - n)

    def compare(i: int, j: int) -> None:
        wires[i], wires[j] = _compare(pool, clauses, wires[i], wires[j])

    def merge(lo: int, length: int, r: int) -> None:
        step = r * 2
        if step < length:
            merge(lo, length, step)
            merge(lo + r, length, step)
            for i in range(lo + r, lo + length - r, step):
                compare(i, i + r)
        else:
            compare(lo, lo + r)

    def sort(lo: int, length: int) -> None:
        if length > 1:
            half = length // 2
            sort(lo, half)
            sort(lo + half, half)
            merge(lo, length, 1)

    sort(0, size)
    # ascending in wire order; report the top n, largest first
    return list(reversed(wires))[:n]


def counter_outputs(pool: VarPool, clauses: list[list[int]], lits: list[int], k: int) -> list[int]:
    """Counter rows up to level k: outs[j-1] true implies >= j inputs true.
    Requires 1 <= k <= len(lits)."""
    n = len(lits)
    assert 1 <= k <= n
    prev: dict[int, int] = {}
    for i in range(1, n + 1):
        x = lits[i - 1]
        row: dict[int, int] = {}
        for j in range(1, min(i, k) + 1):
            s = pool.new()
            row[j] = s
            same = prev.get(j)  # s_{i-1,j}; absent when j > i-1 (constant false)
            c1 = [-s, x] if same is None else [-s, same, x]
            clauses.append(c1)
            if j > 1:
                below = prev[j - 1]
                c2 = [-s, below] if same is None else [-s, same, below]
                clauses.append(c2)
        prev = row
    return [prev[j] for j in range(1, k + 1)]


def at_least_output(pool: VarPool, clauses: list[list[int]], lits: list[int], k: int, family: str = "network") -> int:
    """A literal that, when true, forces at least k of lits to be true.
    Requires 1 <= k <= len(lits)."""
    assert 1 <= k <= len(lits)
    if family == "sequential":
        return counter_outputs(pool, clauses, lits, k)[k - 1]
    if family != "network":
        raise ValueError(f"unknown cardinality family: {family!r}")
    out = sorted_network_outputs(pool, clauses, lits)[k - 1]
    assert out is not None  # top-n outputs never fold to constants
    return out


def at_least(pool: VarPool, clauses: list[list[int]], lits: list[int], k: int, family: str = "network") -> None:
    """Assert that at least k of the literals hold."""
    if k <= 0:
        return
    if k > len(lits):
        clauses.append([])
        return
    if k == len(lits):
        for l in lits:
            clauses.append([l])
        return
    if k == 1:
        clauses.append(list(lits))
        return
    clauses.append([at_least_output(pool, clauses, lits, k, family)])


_PAIRWISE_LIMIT = 8


def at_most_one(pool: VarPool, clauses: list[list[int]], lits: list[int]) -> None:
    n = len(lits)
    if n <= 1:
        return
    if n <= _PAIRWISE_LIMIT:
        for i in range(n):
            for j in range(i + 1, n):
                clauses.append([-lits[i], -lits[j]])
        return
    # sequential: s_i records "one of the first i literals is set"
    s = [pool.new() for _ in range(n - 1)]
    clauses.append([-lits[0], s[0]])
    for i in range(1, n - 1):
        clauses.append([-lits[i], s[i]])
        clauses.append([-s[i - 1], s[i]])
        clauses.append([-lits[i], -s[i - 1]])
    clauses.append([-lits[n - 1], -s[n - 2]])


def exactly_one(pool: VarPool, clauses: list[list[int]], lits: list[int]) -> None:
    clauses.append(list(lits))
    at_most_one(pool, clauses, lits)
