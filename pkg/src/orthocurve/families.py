"""Generators for the standard example posets.

Boolean lattices, partition and noncrossing-partition lattices, subspace
lattices over prime fields, and the extraction of a boolean subposet (an
apartment) through a maximal chain of noncrossing partitions.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .errors import InvalidInput, NotMaximalChain, TooLarge
from .poset import GradedPoset, build_poset, check_chain

__all__ = [
    "Apartment",
    "SetPartition",
    "SubspaceCode",
    "boolean_lattice",
    "chain_poset",
    "chain_to_boolean",
    "is_noncrossing",
    "noncrossing_partition_lattice",
    "parse_partition",
    "partition_lattice",
    "set_partitions",
    "subspace_poset",
]


def chain_poset(n: int) -> GradedPoset:
    """The chain ``0 < 1 < ... < n``."""
    return build_poset(range(n + 1), [(i, i + 1) for i in range(n)], name=f"C{n}")


def boolean_lattice(n: int) -> GradedPoset:
    """Subsets of ``[n]`` under inclusion; element ``m`` is the subset with bitmask ``m``."""
    if not 0 <= n <= 16:
        raise TooLarge(f"boolean lattice needs 0 <= n <= 16, got {n}")
    size = 1 << n
    covers = [(m, m | 1 << i) for m in range(size) for i in range(n) if not m >> i & 1]
    labels = ["{" + ",".join(str(i + 1) for i in range(n) if m >> i & 1) + "}" for m in range(size)]
    data = [frozenset(i + 1 for i in range(n) if m >> i & 1) for m in range(size)]
    return build_poset(range(size), covers, labels=labels, name=f"B{n}", data=data)


@dataclass(frozen=True, order=True)
class SetPartition:
    """A set partition of ``[n]`` kept as sorted tuples of sorted blocks."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]]) -> SetPartition:
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks if b)))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def refines(self, other: SetPartition) -> bool:
        where = other.block_of()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def merge(self, i: int, j: int) -> SetPartition:
        rest = [b for k, b in enumerate(self.blocks) if k not in (i, j)]
        return SetPartition.of(rest + [self.blocks[i] + self.blocks[j]])

    def __str__(self) -> str:
        return " | ".join(" ".join(map(str, b)) for b in self.blocks)


def parse_partition(text: str) -> SetPartition:
    """Inverse of ``str(SetPartition)``: ``"1 4 5 | 2 3"``."""
    try:
        return SetPartition.of([[int(t) for t in part.split()] for part in text.split("|")])
    except ValueError:
        raise InvalidInput(f"not a partition label: {text!r}") from None


def set_partitions(n: int) -> Iterator[SetPartition]:
    """All partitions of ``[n]`` via restricted growth strings."""
    def rgs(prefix: list[int], top: int) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for v in range(top + 2):
            yield from rgs(prefix + [v], max(top, v))

    if n == 0:
        yield SetPartition(())
        return
    for s in rgs([0], 0):
        blocks: dict[int, list[int]] = {}
        for x, b in enumerate(s, start=1):
            blocks.setdefault(b, []).append(x)
        yield SetPartition.of(list(blocks.values()))


def _crosses(a: Sequence[int], b: Sequence[int], n: int) -> bool:
    # walk the n-gon; two blocks cross iff their labels alternate at least
    # four times around the circle
    owner = [0] * (n + 1)
    for x in a:
        owner[x] = 1
    for x in b:
        owner[x] = 2
    seq = [owner[x] for x in range(1, n + 1) if owner[x]]
    changes = sum(seq[i] != seq[i - 1] for i in range(len(seq)))
    return changes >= 4


def is_noncrossing(p: SetPartition) -> bool:
    n = p.n
    return not any(_crosses(a, b, n) for a, b in combinations(p.blocks, 2))


def _partition_poset(n: int, parts: list[SetPartition], name: str) -> GradedPoset:
    index = {p: i for i, p in enumerate(parts)}
    covers = []
    for p in parts:
        for i, j in combinations(range(len(p.blocks)), 2):
            q = p.merge(i, j)
            if q in index:
                covers.append((index[p], index[q]))
    return build_poset(range(len(parts)), covers, labels=[str(p) for p in parts], name=name, data=parts)


def _partition_order(parts: list[SetPartition]) -> list[SetPartition]:
    # by rank (fewest merges first), then lexicographically
    return sorted(parts, key=lambda p: (-len(p.blocks), p.blocks))


def partition_lattice(n: int) -> GradedPoset:
    if not 2 <= n <= 8:
        raise TooLarge(f"partition lattice needs 2 <= n <= 8, got {n}")
    return _partition_poset(n, _partition_order(list(set_partitions(n))), f"Pi{n}")


def noncrossing_partition_lattice(n: int) -> GradedPoset:
    if not 2 <= n <= 10:
        raise TooLarge(f"noncrossing partition lattice needs 2 <= n <= 10, got {n}")
    parts = [p for p in set_partitions(n) if is_noncrossing(p)]
    return _partition_poset(n, _partition_order(parts), f"NC{n}")


@dataclass(frozen=True, order=True)
class SubspaceCode:
    """A subspace of ``F_q^n`` as its reduced row-echelon basis."""

    rows: tuple[tuple[int, ...], ...]
    q: int

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __str__(self) -> str:
        if not self.rows:
            return "0"
        return ",".join("".join(map(str, r)) for r in self.rows)


def _rref(rows: Sequence[Sequence[int]], q: int) -> tuple[tuple[int, ...], ...]:
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out: list[list[int]] = []
    col = 0
    while m and col < ncols:
        pivot = next((r for r in m if r[col] % q), None)
        if pivot is None:
            col += 1
            continue
        m.remove(pivot)
        inv = pow(pivot[col], q - 2, q)
        pivot = [(v * inv) % q for v in pivot]
        m = [[(a - r[col] * b) % q for a, b in zip(r, pivot)] for r in m]
        out = [[(a - r[col] * b) % q for a, b in zip(r, pivot)] for r in out]
        out.append(pivot)
        col += 1
    return tuple(tuple(r) for r in out if any(r))


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def _echelon_forms(n: int, k: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for pivots in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for values in product(range(q), repeat=len(free)):
            m = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                m[r][p] = 1
            for (r, c), v in zip(free, values):
                m[r][c] = v
            yield tuple(tuple(r) for r in m)


def subspace_poset(n: int, q: int) -> GradedPoset:
    """All subspaces of ``F_q^n`` ordered by inclusion, graded by dimension."""
    if not _is_prime(q):
        raise InvalidInput(f"q must be prime, got {q}")
    if q not in (2, 3) or not 1 <= n <= 4:
        raise TooLarge(f"subspace poset supports n <= 4 and q in {{2, 3}}, got n={n}, q={q}")
    codes = [SubspaceCode(rows, q) for k in range(n + 1) for rows in _echelon_forms(n, k, q)]
    by_dim: dict[int, list[int]] = {}
    for i, c in enumerate(codes):
        by_dim.setdefault(c.dimension, []).append(i)
    covers = []
    for k in range(n):
        for i in by_dim[k]:
            for j in by_dim[k + 1]:
                big = codes[j].rows
                if _rref(big + codes[i].rows, q) == big:
                    covers.append((i, j))
    return build_poset(
        range(len(codes)), covers, labels=[str(c) for c in codes], name=f"L{n}(F{q})", data=codes
    )


@dataclass(frozen=True)
class Apartment:
    """A planar spanning tree read off a maximal chain of ``NC_n``.

    ``edges[i]`` is the chord merged at rank step ``i + 1``; ``elements`` maps
    each bitmask of edges to the element of ``NC_n`` given by the connected
    components of those edges.
    """

    edges: tuple[tuple[int, int], ...]
    elements: dict[int, int]


def _partition_data(P: GradedPoset) -> list[SetPartition]:
    if P.data is not None and all(isinstance(d, SetPartition) for d in P.data):
        return list(P.data)
    return [parse_partition(s) for s in P.labels]


def _chords_cross(e: tuple[int, int], f: tuple[int, int]) -> bool:
    (a, b), (c, d) = sorted(e), sorted(f)
    return a < c < b < d or c < a < d < b


def _components(n: int, edges: Sequence[tuple[int, int]]) -> SetPartition:
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    return SetPartition.of(list(groups.values()))


def _boundary_pairs(b1: Sequence[int], b2: Sequence[int]) -> list[tuple[int, int]]:
    # pairs (a, b), a in b1 and b in b2, adjacent in the cyclic order of b1 ∪ b2
    merged = sorted(set(b1) | set(b2))
    side = set(b1)
    out = []
    for i, x in enumerate(merged):
        y = merged[(i + 1) % len(merged)]
        if (x in side) != (y in side):
            out.append((min(x, y), max(x, y)))
    return sorted(set(out))


def chain_to_boolean(ncp: GradedPoset, chain: Sequence[int]) -> Apartment:
    """Extract the boolean subposet of ``NC_n`` spanned by a maximal chain.

    At each step the two merged blocks are joined by a chord between
    cyclically adjacent vertices of their union that crosses no earlier chord;
    ties go to the lexicographically smallest chord.
    """
    chain = list(chain)
    check_chain(ncp, chain)
    if (
        len(chain) != ncp.rank + 1
        or chain[0] != ncp.bottom
        or chain[-1] != ncp.top
        or any(ncp.ranks[y] != ncp.ranks[x] + 1 for x, y in zip(chain, chain[1:]))
    ):
        raise NotMaximalChain("chain is not a maximal chain")
    parts = _partition_data(ncp)
    n = parts[ncp.bottom].n
    edges: list[tuple[int, int]] = []
    for x, y in zip(chain, chain[1:]):
        before, after = parts[x], parts[y]
        merged = [b for b in before.blocks if b not in after.blocks]
        if len(merged) != 2:
            raise NotMaximalChain(f"step {before} -> {after} does not merge two blocks")
        options = [e for e in _boundary_pairs(*merged) if not any(_chords_cross(e, f) for f in edges)]
        if not options:
            raise NotMaximalChain(f"no planar chord realizes {before} -> {after}")
        edges.append(options[0])
    index = {p: i for i, p in enumerate(parts)}
    elements = {}
    for mask in range(1 << len(edges)):
        comp = _components(n, [e for i, e in enumerate(edges) if mask >> i & 1])
        if comp not in index:
            raise NotMaximalChain(f"edge subset gives {comp}, which is not in the poset")
        elements[mask] = index[comp]
    return Apartment(tuple(edges), elements)
