"""Finite bounded graded posets.

Elements are dense integers ``0..size-1``; the order relation is stored as
one down-set and one up-set bitmask (a Python ``int``) per element, so
comparisons, bound computations and interval membership are bit operations.
"""
from __future__ import annotations

import json
import sys
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import (
    CycleDetected,
    InvalidInput,
    NotALattice,
    NotAChain,
    NotBounded,
    NotComparable,
    NotGraded,
    ParseError,
)

__all__ = [
    "Bowtie",
    "GradedPoset",
    "IntervalHandle",
    "are_complements",
    "bits",
    "build_poset",
    "complements_in",
    "find_antiautomorphism",
    "find_bowtie",
    "find_isomorphism",
    "is_lattice",
    "is_modular",
    "load_poset",
    "maximal_chains",
    "poset_from_dict",
    "save_poset",
]


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _minimal(mask: int, down: Sequence[int]) -> int:
    out = 0
    for u in bits(mask):
        if down[u] & mask == 1 << u:
            out |= 1 << u
    return out


def _maximal(mask: int, up: Sequence[int]) -> int:
    out = 0
    for u in bits(mask):
        if up[u] & mask == 1 << u:
            out |= 1 << u
    return out


class GradedPoset:
    """An immutable, validated, bounded graded poset.

    Build instances with :func:`build_poset`; the constructor trusts its
    arguments.
    """

    __slots__ = (
        "name",
        "labels",
        "covers",
        "ranks",
        "up",
        "down",
        "bottom",
        "top",
        "data",
        "_upper",
        "_lower",
        "_levels",
        "_cache",
    )

    def __init__(
        self,
        *,
        name: str,
        labels: tuple[str, ...],
        covers: frozenset[tuple[int, int]],
        ranks: tuple[int, ...],
        up: tuple[int, ...],
        down: tuple[int, ...],
        bottom: int,
        top: int,
        data: tuple[Any, ...] | None = None,
    ) -> None:
        self.name = name
        self.labels = labels
        self.covers = covers
        self.ranks = ranks
        self.up = up
        self.down = down
        self.bottom = bottom
        self.top = top
        self.data = data
        upper: list[list[int]] = [[] for _ in labels]
        lower: list[list[int]] = [[] for _ in labels]
        for x, y in sorted(covers):
            upper[x].append(y)
            lower[y].append(x)
        self._upper = tuple(map(tuple, upper))
        self._lower = tuple(map(tuple, lower))
        levels: list[list[int]] = [[] for _ in range(ranks[top] + 1)]
        for x, r in enumerate(ranks):
            levels[r].append(x)
        self._levels = tuple(map(tuple, levels))
        self._cache: dict[str, Any] = {}

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"GradedPoset({self.name!r}, size={len(self)}, rank={self.rank})"

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.ranks[self.top]

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    def label(self, x: int) -> str:
        return self.labels[x]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def corank(self, x: int) -> int:
        return self.rank - self.ranks[x]

    def upper_covers(self, x: int) -> tuple[int, ...]:
        return self._upper[x]

    def lower_covers(self, x: int) -> tuple[int, ...]:
        return self._lower[x]

    def level(self, r: int) -> tuple[int, ...]:
        """Elements of rank ``r`` in index order."""
        if 0 <= r < len(self._levels):
            return self._levels[r]
        return ()

    def interval(self, lo: int, hi: int) -> IntervalHandle:
        self._check(lo, hi)
        if not self.leq(lo, hi):
            raise NotComparable(f"{self.labels[lo]!r} is not below {self.labels[hi]!r}")
        return IntervalHandle(self, lo, hi)

    def bounds(self, x: int, y: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Return (minimal upper bounds, maximal lower bounds) of ``{x, y}``."""
        self._check(x, y)
        ub = _minimal(self.up[x] & self.up[y], self.down)
        lb = _maximal(self.down[x] & self.down[y], self.up)
        return tuple(bits(ub)), tuple(bits(lb))

    def join(self, x: int, y: int) -> int | None:
        ub = _minimal(self.up[x] & self.up[y], self.down)
        return ub.bit_length() - 1 if ub and ub & (ub - 1) == 0 else None

    def meet(self, x: int, y: int) -> int | None:
        lb = _maximal(self.down[x] & self.down[y], self.up)
        return lb.bit_length() - 1 if lb and lb & (lb - 1) == 0 else None

    def dual(self) -> GradedPoset:
        """Order-reversed poset on the same element indices and labels."""
        n = self.rank
        return GradedPoset(
            name=f"dual({self.name})",
            labels=self.labels,
            covers=frozenset((y, x) for x, y in self.covers),
            ranks=tuple(n - r for r in self.ranks),
            up=self.down,
            down=self.up,
            bottom=self.top,
            top=self.bottom,
            data=self.data,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "elements": [{"id": i, "label": s} for i, s in enumerate(self.labels)],
            "covers": [list(c) for c in sorted(self.covers)],
        }

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < len(self.labels):
                raise InvalidInput(f"unknown element {x!r}")


@dataclass(frozen=True, eq=False)
class IntervalHandle:
    """The closed interval ``[lo, hi]`` of a parent poset."""

    parent: GradedPoset
    lo: int
    hi: int

    @cached_property
    def mask(self) -> int:
        return self.parent.up[self.lo] & self.parent.down[self.hi]

    @cached_property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def rank(self) -> int:
        return self.parent.ranks[self.hi] - self.parent.ranks[self.lo]

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __len__(self) -> int:
        return len(self.members)

    def local_rank(self, x: int) -> int:
        if x not in self:
            raise InvalidInput(f"element {x} is outside the interval")
        return self.parent.ranks[x] - self.parent.ranks[self.lo]

    @cached_property
    def to_local(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.members)}

    @cached_property
    def poset(self) -> GradedPoset:
        """The interval as a standalone poset; element ``i`` is ``members[i]``."""
        P = self.parent
        mask = self.mask
        loc = self.to_local
        covers = [(loc[x], loc[y]) for x in self.members for y in P.upper_covers(x) if mask >> y & 1]
        data = tuple(P.data[x] for x in self.members) if P.data is not None else None
        return build_poset(
            range(len(self.members)),
            covers,
            labels=[P.labels[x] for x in self.members],
            name=f"{P.name}[{P.labels[self.lo]}, {P.labels[self.hi]}]",
            data=data,
        )


def build_poset(
    elements: Iterable[Hashable],
    covers: Iterable[tuple[Hashable, Hashable]],
    *,
    labels: Sequence[str] | None = None,
    name: str = "",
    data: Sequence[Any] | None = None,
) -> GradedPoset:
    """Validate a cover relation and return the bounded graded poset it generates.

    ``covers`` holds pairs ``(x, y)`` meaning ``y`` covers ``x``. Raises
    :class:`CycleDetected`, :class:`NotBounded` or :class:`NotGraded` naming the
    first violated axiom, or :class:`InvalidInput` for malformed input.
    """
    ids = list(elements)
    index: dict[Hashable, int] = {}
    for i, e in enumerate(ids):
        if e in index:
            raise InvalidInput(f"duplicate element identifier {e!r}")
        index[e] = i
    size = len(ids)
    if labels is None:
        labels = [str(e) for e in ids]
    elif len(labels) != size:
        raise InvalidInput("labels must match elements one-to-one")
    if data is not None and len(data) != size:
        raise InvalidInput("data must match elements one-to-one")

    pairs: set[tuple[int, int]] = set()
    for c in covers:
        try:
            a, b = c
            pair = (index[a], index[b])
        except (KeyError, TypeError, ValueError):
            raise InvalidInput(f"cover {c!r} does not reference two known elements") from None
        if pair[0] == pair[1]:
            raise CycleDetected(f"element {a!r} covers itself")
        pairs.add(pair)

    upper: list[list[int]] = [[] for _ in range(size)]
    indeg = [0] * size
    for x, y in pairs:
        upper[x].append(y)
        indeg[y] += 1

    # Kahn's algorithm; leftovers lie on or above a directed cycle.
    remaining = indeg[:]
    queue = deque(i for i in range(size) if remaining[i] == 0)
    order: list[int] = []
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in upper[x]:
            remaining[y] -= 1
            if remaining[y] == 0:
                queue.append(y)
    if len(order) != size:
        stuck = next(i for i in range(size) if remaining[i])
        raise CycleDetected(f"cover relation has a directed cycle through {ids[stuck]!r}")

    minimal = [i for i in range(size) if indeg[i] == 0]
    maximal = [i for i in range(size) if not upper[i]]
    if len(minimal) != 1:
        raise NotBounded(f"expected one minimal element, found {len(minimal)}")
    if len(maximal) != 1:
        raise NotBounded(f"expected one maximal element, found {len(maximal)}")
    bottom, top = minimal[0], maximal[0]

    # Longest-path ranks; a cover that skips a level means two chains of
    # different lengths reach the same element.
    ranks = [0] * size
    for x in order:
        for y in upper[x]:
            ranks[y] = max(ranks[y], ranks[x] + 1)
    for x, y in sorted(pairs):
        if ranks[y] != ranks[x] + 1:
            raise NotGraded(
                f"cover ({ids[x]!r}, {ids[y]!r}) spans ranks {ranks[x]} -> {ranks[y]}"
            )

    down = [1 << i for i in range(size)]
    for x in order:
        for y in upper[x]:
            down[y] |= down[x]
    up = [1 << i for i in range(size)]
    for x in reversed(order):
        for y in upper[x]:
            up[x] |= up[y]

    return GradedPoset(
        name=name,
        labels=tuple(str(s) for s in labels),
        covers=frozenset(pairs),
        ranks=tuple(ranks),
        up=tuple(up),
        down=tuple(down),
        bottom=bottom,
        top=top,
        data=tuple(data) if data is not None else None,
    )


@dataclass(frozen=True)
class Bowtie:
    """``a, c`` minimal upper bounds of ``{b, d}``; ``b, d`` maximal lower bounds of ``{a, c}``."""

    a: int
    b: int
    c: int
    d: int

    def validate(self, P: GradedPoset) -> bool:
        a, b, c, d = self.a, self.b, self.c, self.d
        if len({a, b, c, d}) != 4:
            return False
        ub, _ = P.bounds(b, d)
        _, lb = P.bounds(a, c)
        return a in ub and c in ub and b in lb and d in lb

    def to_dict(self, P: GradedPoset | None = None) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": "bowtie", "a": self.a, "b": self.b, "c": self.c, "d": self.d}
        if P is not None:
            out["labels"] = [P.labels[x] for x in (self.a, self.b, self.c, self.d)]
        return out


def find_bowtie(P: GradedPoset) -> Bowtie | None:
    """Return the first bowtie found scanning pairs in index order, else ``None``."""
    if "bowtie" in P._cache:
        return P._cache["bowtie"]
    up, down = P.up, P.down
    result = None
    n = len(P)
    for x in range(n):
        for y in range(x + 1, n):
            if up[x] >> y & 1 or down[x] >> y & 1:
                continue
            ub = _minimal(up[x] & up[y], down)
            if ub & (ub - 1):
                a, c = list(bits(ub))[:2]
                common = down[a] & down[c]
                b = next(bits(_maximal(common & up[x], up)))
                d = next(bits(_maximal(common & up[y], up)))
                result = Bowtie(a, b, c, d)
                break
            lb = _maximal(down[x] & down[y], up)
            if lb & (lb - 1):
                b, d = list(bits(lb))[:2]
                common = up[b] & up[d]
                a = next(bits(_minimal(common & down[x], down)))
                c = next(bits(_minimal(common & down[y], down)))
                result = Bowtie(a, b, c, d)
                break
        if result is not None:
            break
    P._cache["bowtie"] = result
    return result


def is_lattice(P: GradedPoset) -> bool:
    return find_bowtie(P) is None


def are_complements(P: GradedPoset, x: int, y: int, lo: int | None = None, hi: int | None = None) -> bool:
    """Whether ``x`` and ``y`` are complements in the interval ``[lo, hi]``.

    Complements here means ``hi`` is the only upper bound and ``lo`` the only
    lower bound of ``{x, y}`` inside the interval, which also makes sense in
    posets that are not lattices.
    """
    lo = P.bottom if lo is None else lo
    hi = P.top if hi is None else hi
    up, down = P.up, P.down
    span = up[lo] & down[hi]
    if not (span >> x & 1 and span >> y & 1):
        return False
    return up[x] & up[y] & down[hi] == 1 << hi and down[x] & down[y] & up[lo] == 1 << lo


def complements_in(P: GradedPoset, x: int) -> frozenset[int]:
    P._check(x)
    up, down = P.up, P.down
    top, bot = 1 << P.top, 1 << P.bottom
    return frozenset(y for y in P.elements if up[x] & up[y] == top and down[x] & down[y] == bot)


def is_modular(P: GradedPoset) -> tuple[bool, tuple[int, int, int, int] | None]:
    """Check the complement rank-swap condition on every interval.

    Returns ``(True, None)`` or ``(False, (z, w, x, y))`` where ``x, y`` are
    complements in ``[z, w]`` whose local ranks are not swapped. In a lattice
    the complementary pairs of intervals are exactly the pairs ``x, y`` taken in
    ``[x ∧ y, x ∨ y]``, so one pass over element pairs covers every interval.
    """
    if find_bowtie(P) is not None:
        raise NotALattice(f"{P.name or 'poset'} is not a lattice")
    r = P.ranks
    n = len(P)
    for x in range(n):
        for y in range(x, n):
            w = P.join(x, y)
            z = P.meet(x, y)
            assert w is not None and z is not None
            if r[x] - r[z] != r[w] - r[y]:
                return False, (z, w, x, y)
    return True, None


def maximal_chains(P: GradedPoset) -> Iterator[tuple[int, ...]]:
    """All maximal chains, bottom to top, in lexicographic order of indices."""
    path = [P.bottom]

    def walk() -> Iterator[tuple[int, ...]]:
        x = path[-1]
        if x == P.top:
            yield tuple(path)
            return
        for y in P.upper_covers(x):
            path.append(y)
            yield from walk()
            path.pop()

    yield from walk()


def check_chain(P: GradedPoset, chain: Sequence[int]) -> None:
    if not chain:
        raise NotAChain("chain is empty")
    P._check(*chain)
    for x, y in zip(chain, chain[1:]):
        if not P.lt(x, y):
            raise NotAChain(f"{P.labels[x]!r} < {P.labels[y]!r} fails")


def _signature(P: GradedPoset, x: int) -> tuple[int, ...]:
    return (
        P.ranks[x],
        len(P.lower_covers(x)),
        len(P.upper_covers(x)),
        P.down[x].bit_count(),
        P.up[x].bit_count(),
    )


def find_isomorphism(P: GradedPoset, Q: GradedPoset) -> dict[int, int] | None:
    """Backtracking search for an order isomorphism ``P -> Q``.

    Elements are assigned in rank order; a candidate image must carry the same
    local invariants and receive the images of all lower covers as its lower
    covers, which makes the finished map cover-preserving in both directions.
    """
    if len(P) != len(Q) or len(P.covers) != len(Q.covers) or P.rank != Q.rank:
        return None
    sig_p = [_signature(P, x) for x in P.elements]
    sig_q = [_signature(Q, y) for y in Q.elements]
    if sorted(sig_p) != sorted(sig_q):
        return None
    by_sig: dict[tuple[int, ...], list[int]] = {}
    for y in Q.elements:
        by_sig.setdefault(sig_q[y], []).append(y)
    order = sorted(P.elements, key=lambda x: (P.ranks[x], x))
    image: dict[int, int] = {}
    used: set[int] = set()

    def candidates(x: int) -> Iterable[int]:
        lows = P.lower_covers(x)
        if lows:
            # images must be upper covers of the first lower cover's image
            pool = Q.upper_covers(image[lows[0]])
            return [y for y in pool if sig_q[y] == sig_p[x]]
        return by_sig[sig_p[x]]

    def extend(pos: int) -> bool:
        if pos == len(order):
            return True
        x = order[pos]
        need = {image[u] for u in P.lower_covers(x)}
        for y in candidates(x):
            if y in used or set(Q.lower_covers(y)) != need:
                continue
            image[x] = y
            used.add(y)
            if extend(pos + 1):
                return True
            del image[x]
            used.discard(y)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(order) + 100))
    try:
        return dict(image) if extend(0) else None
    finally:
        sys.setrecursionlimit(limit)


def find_antiautomorphism(P: GradedPoset) -> dict[int, int] | None:
    """An order-reversing bijection of ``P`` onto itself, if one exists."""
    return find_isomorphism(P, P.dual())


def poset_from_dict(obj: Any) -> GradedPoset:
    """Load the JSON interchange format; ranks are always recomputed."""
    try:
        elements = obj["elements"]
        ids = [int(e["id"]) for e in elements]
        labels = [str(e.get("label", e["id"])) for e in elements]
        covers = [(int(a), int(b)) for a, b in obj["covers"]]
        name = str(obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed poset document: {exc}") from None
    return build_poset(ids, covers, labels=labels, name=name)


def load_poset(path: str | Path) -> GradedPoset:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return poset_from_dict(obj)


def save_poset(P: GradedPoset, path: str | Path) -> None:
    Path(path).write_text(json.dumps(P.to_dict(), indent=1) + "\n")
