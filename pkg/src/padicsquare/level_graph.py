"""Functional graph of x -> x**2 on Z/p^nZ, brute-force cycle census,
and the level-1 structure theorem for the unit graph."""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .numtheory import (
    DomainError,
    divisors,
    euler_phi,
    factor_p_minus_one,
    is_prime,
    mul_order,
)

DEFAULT_MAX_NODES = 10**8


class ResourceError(RuntimeError):
    """A computation would exceed a configured resource bound."""


def max_nodes_default() -> int:
    return int(os.environ.get("PADICSQUARE_MAX_NODES", DEFAULT_MAX_NODES))


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")


@dataclass(frozen=True, eq=False)
class FunctionalGraph:
    p: int
    level: int
    successor: np.ndarray = field(repr=False)

    @property
    def modulus(self) -> int:
        return self.p**self.level

    def __len__(self):
        return len(self.successor)


@dataclass(frozen=True)
class CycleCensus:
    """Aggregated cycle lengths: ``{length: count}``."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, mapping) -> CycleCensus:
        return cls(tuple(sorted((int(k), int(v)) for k, v in dict(mapping).items() if v)))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> CycleCensus:
        return cls.from_mapping(Counter(lengths))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def cyclic_nodes(self) -> int:
        return sum(length * count for length, count in self.counts)

    @property
    def num_cycles(self) -> int:
        return sum(count for _, count in self.counts)

    def __add__(self, other: CycleCensus) -> CycleCensus:
        total = Counter(self.as_dict())
        total.update(other.as_dict())
        return CycleCensus.from_mapping(total)

    def to_json(self) -> list[dict]:
        return [{"length": length, "count": count} for length, count in self.counts]

    def __str__(self):
        return "{" + ", ".join(f"({l},{c})" for l, c in self.counts) + "}"


def build_graph(p: int, n: int, max_nodes: int | None = None) -> FunctionalGraph:
    check_prime(p)
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    bound = max_nodes_default() if max_nodes is None else max_nodes
    size = p**n
    if size > bound:
        raise ResourceError(f"{p}^{n} = {size} nodes exceeds max_nodes={bound}")
    x = np.arange(size, dtype=np.int64)
    succ = x * x % size
    dtype = np.int32 if size < 2**31 else np.int64
    return FunctionalGraph(p, n, succ.astype(dtype))


def _cyclic_nodes(succ: np.ndarray) -> np.ndarray:
    """Indices of nodes lying on cycles: shrink S <- f(S) until |f(S)| = |S|."""
    alive = np.ones(len(succ), dtype=bool)
    count = len(succ)
    while True:
        image = np.zeros(len(succ), dtype=bool)
        image[succ[alive]] = True
        new_count = int(image.sum())
        if new_count == count:
            return np.flatnonzero(alive)
        alive, count = image, new_count


def _cycle_labels(succ: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(cyclic nodes, smallest node of each one's cycle) by pointer doubling."""
    nodes = _cyclic_nodes(succ)
    pos = np.full(len(succ), -1, dtype=succ.dtype)
    pos[nodes] = np.arange(len(nodes), dtype=succ.dtype)
    jump = pos[succ[nodes]]
    label = nodes.astype(succ.dtype)
    while True:
        new_label = np.minimum(label, label[jump])
        if np.array_equal(new_label, label):
            return nodes, label
        label = new_label
        jump = jump[jump]


def cycle_census(g: FunctionalGraph) -> CycleCensus:
    """Exact multiset of cycle lengths of the graph."""
    _, label = _cycle_labels(g.successor)
    _, lengths = np.unique(label, return_counts=True)
    ls, cs = np.unique(lengths, return_counts=True)
    return CycleCensus.from_mapping(zip(ls.tolist(), cs.tolist()))


def cycle_representatives(g: FunctionalGraph) -> list[tuple[int, int]]:
    """``(smallest residue, length)`` for every cycle, ascending by residue."""
    _, label = _cycle_labels(g.successor)
    reps, lengths = np.unique(label, return_counts=True)
    return list(zip(reps.tolist(), lengths.tolist()))


def cycles_of(nodes: Iterable[int], f: Callable[[int], int]) -> list[list[int]]:
    """Cycles of ``f`` on a finite forward-invariant set (path marking).

    Each cycle is returned starting at its smallest element and following
    ``f``; the list is sorted by that element.
    """
    state: dict[int, int] = {}  # 1 = on current path, 2 = finished
    found = []
    for start in nodes:
        if start in state:
            continue
        path = []
        x = start
        while x not in state:
            state[x] = 1
            path.append(x)
            x = f(x)
        if state[x] == 1:
            cyc = path[path.index(x):]
            i = cyc.index(min(cyc))
            found.append(cyc[i:] + cyc[:i])
        for y in path:
            state[y] = 2
    found.sort(key=lambda c: c[0])
    return found


def unit_cycles(p: int) -> list[list[int]]:
    """Cycles of squaring on (Z/pZ)*."""
    return cycles_of(range(1, p), lambda x: x * x % p)


@dataclass(frozen=True)
class RogersComponent:
    d: int
    cycle_length: int
    copies: int
    tree_height: int


@dataclass(frozen=True)
class RogersStructure:
    p: int
    k: int
    m: int
    components: tuple[RogersComponent, ...]

    def unit_census(self) -> CycleCensus:
        counts: Counter = Counter()
        for comp in self.components:
            counts[comp.cycle_length] += comp.copies
        return CycleCensus.from_mapping(counts)

    @property
    def num_unit_cycles(self) -> int:
        return sum(c.copies for c in self.components)


def rogers_structure(p: int) -> RogersStructure:
    """Predicted unit graph at level 1: for each d | m, phi(d)/ord_d(2)
    cycles of length ord_d(2), each vertex carrying a binary tree of height k."""
    dec = factor_p_minus_one(p)
    comps = []
    for d in divisors(dec.m):
        ell = mul_order(2, d)
        comps.append(RogersComponent(d, ell, euler_phi(d) // ell, dec.k))
    return RogersStructure(p, dec.k, dec.m, tuple(comps))


@dataclass
class RogersCheck:
    p: int
    ok: bool
    problems: list[str]

    def __bool__(self):
        return self.ok


def verify_rogers(p: int) -> RogersCheck:
    """Compare the brute-force unit graph mod p with ``rogers_structure``."""
    check_odd_prime(p)
    predicted = rogers_structure(p)
    problems = []

    cycles = unit_cycles(p)
    observed = CycleCensus.from_lengths(len(c) for c in cycles)
    if observed != predicted.unit_census():
        problems.append(f"cycle census {observed} != predicted {predicted.unit_census()}")

    on_cycle = {x for c in cycles for x in c}
    preimages: dict[int, list[int]] = {x: [] for x in range(1, p)}
    for x in range(1, p):
        preimages[x * x % p].append(x)

    k = predicted.k
    for root in sorted(on_cycle):
        children = [y for y in preimages[root] if y not in on_cycle]
        if len(children) != 1:
            problems.append(f"cycle vertex {root} has {len(children)} tree children")
            continue
        frontier, depth, size = children, 1, 1
        while frontier:
            nxt = []
            for y in frontier:
                kids = preimages[y]
                if depth < k and len(kids) != 2:
                    problems.append(f"tree node {y} at depth {depth} has {len(kids)} children")
                if depth == k and kids:
                    problems.append(f"leaf {y} at depth {k} has children")
                nxt += kids
            if nxt:
                depth += 1
                size += len(nxt)
            frontier = nxt
        if depth != k:
            problems.append(f"tree at {root} has height {depth}, expected {k}")
        if size != 2**k - 1:
            problems.append(f"tree at {root} has {size} non-root nodes, expected {2**k - 1}")
    return RogersCheck(p, not problems, problems)


def export_dot(g: FunctionalGraph, restrict_to_units: bool = False) -> str:
    """Graphviz digraph of the graph, nodes in ascending order."""
    nodes = range(len(g))
    if restrict_to_units:
        nodes = [x for x in nodes if x % g.p]
    name = f"square_mod_{g.p}_{g.level}" + ("_units" if restrict_to_units else "")
    succ = g.successor
    lines = [f"digraph {name} {{"]
    lines += [f'  "{x}";' for x in nodes]
    lines += [f'  "{x}" -> "{int(succ[x])}";' for x in nodes]
    lines.append("}")
    return "\n".join(lines) + "\n"
