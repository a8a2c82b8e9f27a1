"""Spindle enumeration, spindle lengths and the rank ≤ 4 curvature verdict.

A spindle of girth ``2k`` in an interval ``[z, w]`` is a cycle that alternates
between *lower* elements (valleys, whose two neighbours are complements in
``[x, w]``) and *upper* elements (peaks, whose two neighbours are complements
in ``[z, x]``). Its length is the length of the corresponding edge loop in the
diagonal link of ``[z, w]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator, Sequence

from .errors import DuplicateElements, NotASpindle, OddLength, SpindleError
from .metric import EdgeLengthSpec, edge_length, min_edge_length
from .poset import Bowtie, GradedPoset, IntervalHandle, are_complements, bits, find_bowtie

__all__ = [
    "CurvatureVerdict",
    "SHORT_EPS",
    "Spindle",
    "Status",
    "cat0_verdict_rank_le4",
    "enumerate_global_spindles",
    "find_short_spindle",
    "girth_cutoff",
    "is_global_spindle",
    "iter_intervals",
    "spindle_from_bowtie",
    "spindle_length",
    "witness_from_dict",
]

TWO_PI = 2 * math.pi
SHORT_EPS = 1e-9

LOWER = "lower"
UPPER = "upper"


def girth_cutoff(n: int) -> int:
    """Largest girth a short spindle can have in a rank-``n`` interval.

    Every diagonal-link edge is at least :func:`min_edge_length` long, so a
    spindle of girth ``g`` has length at least ``g·θ_min``. Returns 0 when no
    spindle fits (rank below 3).
    """
    if n < 3:
        return 0
    theta = min_edge_length(n)
    g = 4
    while (g + 2) * theta < TWO_PI - SHORT_EPS:
        g += 2
    return g


def _endpoints(P: GradedPoset | IntervalHandle) -> tuple[GradedPoset, int, int]:
    if isinstance(P, IntervalHandle):
        return P.parent, P.lo, P.hi
    return P, P.bottom, P.top


@dataclass(frozen=True)
class Spindle:
    """A spindle in canonical form.

    ``cycle[0]`` is the least lower element and ``cycle[1] < cycle[-1]``;
    ``edges[i]`` joins ``cycle[i]`` and ``cycle[i+1]`` (cyclically).
    """

    interval: tuple[int, int]
    cycle: tuple[int, ...]
    parity: tuple[str, ...]
    edges: tuple[EdgeLengthSpec, ...]
    length: float

    @property
    def girth(self) -> int:
        return len(self.cycle)

    @property
    def short(self) -> bool:
        return self.length < TWO_PI - SHORT_EPS

    @property
    def boundary(self) -> bool:
        """Length equals ``2π`` up to the shortness tolerance."""
        return abs(self.length - TWO_PI) <= SHORT_EPS

    @property
    def lower(self) -> tuple[int, ...]:
        return tuple(x for x, p in zip(self.cycle, self.parity) if p == LOWER)

    @property
    def upper(self) -> tuple[int, ...]:
        return tuple(x for x, p in zip(self.cycle, self.parity) if p == UPPER)

    def validate(self, P: GradedPoset) -> bool:
        z, w = self.interval
        try:
            ok, lower_parity = is_global_spindle(P.interval(z, w), self.cycle)
        except SpindleError:
            return False
        return ok and self.parity == _parity_tuple(len(self.cycle), lower_parity)

    def to_dict(self, P: GradedPoset) -> dict[str, Any]:
        z, w = self.interval
        g = self.girth
        return {
            "kind": "spindle",
            "interval": {"bottom": z, "top": w, "labels": [P.labels[z], P.labels[w]]},
            "cycle": list(self.cycle),
            "labels": [P.labels[x] for x in self.cycle],
            "parity": list(self.parity),
            "girth": g,
            "edges": [
                {"pair": [self.cycle[i], self.cycle[(i + 1) % g]], **e.to_dict()}
                for i, e in enumerate(self.edges)
            ],
            "length": self.length,
            "length_over_pi": self.length / math.pi,
            "short": self.short,
            "boundary": self.boundary,
        }


def _parity_tuple(g: int, lower_parity: int | None) -> tuple[str, ...]:
    return tuple(LOWER if i % 2 == lower_parity else UPPER for i in range(g))


def _check_shape(cycle: Sequence[int]) -> None:
    if len(cycle) % 2:
        raise OddLength(f"spindle cycles have even length, got {len(cycle)}")
    if len(cycle) < 4:
        raise SpindleError(f"spindle girth must be at least 4, got {len(cycle)}")
    if len(set(cycle)) != len(cycle):
        raise DuplicateElements("spindle elements must be distinct")


def _spindle_parity(P: GradedPoset, z: int, w: int, cycle: Sequence[int]) -> int | None:
    g = len(cycle)
    span = P.up[z] & P.down[w]
    if any(not span >> x & 1 for x in cycle):
        return None
    for lower_parity in (0, 1):
        ok = True
        for i, x in enumerate(cycle):
            a, b = cycle[i - 1], cycle[(i + 1) % g]
            if i % 2 == lower_parity:
                ok = are_complements(P, a, b, x, w)
            else:
                ok = are_complements(P, a, b, z, x)
            if not ok:
                break
        if ok:
            return lower_parity
    return None


def is_global_spindle(P: GradedPoset | IntervalHandle, cycle: Sequence[int]) -> tuple[bool, int | None]:
    """Check the alternating complement conditions with endpoints bottom/top of ``P``.

    Returns ``(True, p)`` where ``p`` is the parity (0 or 1) of the positions
    holding lower elements, or ``(False, None)``.
    """
    cycle = tuple(cycle)
    _check_shape(cycle)
    base, z, w = _endpoints(P)
    base._check(*cycle)
    p = _spindle_parity(base, z, w, cycle)
    return (p is not None), p


def _canonical(cycle: Sequence[int], lower_parity: int) -> tuple[int, ...]:
    g = len(cycle)
    rotated = [tuple(cycle[(s + i) % g] for i in range(g)) for s in range(lower_parity, g, 2)]
    reflected = [(c[0],) + tuple(reversed(c[1:])) for c in rotated]
    return min(rotated + reflected)


def _edge_specs(P: GradedPoset, z: int, w: int, cycle: Sequence[int], lower_parity: int) -> tuple[EdgeLengthSpec, ...]:
    r = P.ranks
    rz, rw = r[z], r[w]
    g = len(cycle)
    specs = []
    for i in range(g):
        a, b = cycle[i], cycle[(i + 1) % g]
        lo, hi = (a, b) if i % 2 == lower_parity else (b, a)
        specs.append(edge_length(r[lo] - rz, r[hi] - r[lo], rw - r[hi]))
    return tuple(specs)


def _make_spindle(P: GradedPoset, z: int, w: int, cycle: Sequence[int], lower_parity: int) -> Spindle:
    canon = _canonical(cycle, lower_parity)
    edges = _edge_specs(P, z, w, canon, 0)
    return Spindle((z, w), canon, _parity_tuple(len(canon), 0), edges, math.fsum(e.theta for e in edges))


def spindle_length(P: GradedPoset | IntervalHandle, cycle: Sequence[int]) -> tuple[float, bool]:
    """Length of a spindle's loop in the diagonal link and whether it is short.

    Lengths within ``SHORT_EPS`` of ``2π`` count as boundary, not short.
    """
    cycle = tuple(cycle)
    _check_shape(cycle)
    base, z, w = _endpoints(P)
    base._check(*cycle)
    p = _spindle_parity(base, z, w, cycle)
    if p is None:
        raise NotASpindle("cycle fails the spindle complement conditions")
    length = math.fsum(e.theta for e in _edge_specs(base, z, w, cycle, p))
    return length, length < TWO_PI - SHORT_EPS


class _Search:
    """Depth-first search for canonical spindles inside one interval.

    ``budget`` (when set) prunes any partial cycle whose length plus the
    shortest possible closing edge already reaches it, which turns the search
    into a search for spindles shorter than ``budget``.
    """

    def __init__(
        self,
        P: GradedPoset,
        z: int,
        w: int,
        max_girth: int,
        *,
        min_girth: int = 4,
        budget: float | None = None,
        lower_mask: int | None = None,
        upper_mask: int | None = None,
    ) -> None:
        self.P = P
        self.z, self.w = z, w
        self.max_girth = max_girth
        self.min_girth = min_girth
        self.budget = budget
        r = P.ranks
        self.n = r[w] - r[z]
        interior = P.up[z] & P.down[w] & ~(1 << z) & ~(1 << w)
        self.lower_mask = interior if lower_mask is None else interior & lower_mask
        self.upper_mask = interior if upper_mask is None else interior & upper_mask
        self.theta_min = min_edge_length(self.n) if self.n >= 3 else math.inf
        rz, n = r[z], self.n
        self.local = {x: r[x] - rz for x in bits(interior)}
        self.table = {
            (i, j): edge_length(i, j, n - i - j).theta
            for i in range(1, n) for j in range(1, n - i)
        }

    def _len(self, lo: int, hi: int) -> float:
        i = self.local[lo]
        return self.table[(i, self.local[hi] - i)]

    def _ok(self, length: float, closing_edges: int) -> bool:
        return self.budget is None or length + closing_edges * self.theta_min < self.budget

    def run(self) -> Iterator[tuple[int, ...]]:
        if self.n < 3 or self.max_girth < 4:
            return
        P, z, w = self.P, self.z, self.w
        up, down = P.up, P.down
        zbit, wbit = 1 << z, 1 << w
        upz, downw = up[z], down[w]
        path: list[int] = []

        def lower_comp(a: int, b: int, peak: int) -> bool:
            return down[a] & down[b] & upz == zbit and up[a] & up[b] & down[peak] == 1 << peak

        def upper_comp(a: int, b: int, valley: int) -> bool:
            return up[a] & up[b] & downw == wbit and down[a] & down[b] & up[valley] == 1 << valley

        def grow(length: float, used: int) -> Iterator[tuple[int, ...]]:
            # path ends at a peak; path = [v1, p1, ..., vm, pm]
            m = len(path) // 2
            v1, p1 = path[0], path[1]
            vm, pm = path[-2], path[-1]
            if m >= 2 and 2 * m >= self.min_girth and p1 < pm:
                if lower_comp(vm, v1, pm) and upper_comp(pm, p1, v1):
                    if self.budget is None or length + self._len(v1, pm) < self.budget:
                        yield tuple(path)
            if 2 * (m + 1) > self.max_girth:
                return
            for v in bits(down[pm] & self.lower_mask & ~used):
                if v <= v1 or not lower_comp(vm, v, pm):
                    continue
                l1 = length + self._len(v, pm)
                if not self._ok(l1, 2):
                    continue
                path.append(v)
                for p in bits(up[v] & self.upper_mask & ~used & ~(1 << v)):
                    if not upper_comp(pm, p, v):
                        continue
                    l2 = l1 + self._len(v, p)
                    if not self._ok(l2, 1):
                        continue
                    path.append(p)
                    yield from grow(l2, used | 1 << v | 1 << p)
                    path.pop()
                path.pop()

        for v1 in bits(self.lower_mask):
            for p1 in bits(up[v1] & self.upper_mask & ~(1 << v1)):
                l0 = self._len(v1, p1)
                if not self._ok(l0, 3):
                    continue
                path[:] = [v1, p1]
                yield from grow(l0, 1 << v1 | 1 << p1)


def enumerate_global_spindles(P: GradedPoset | IntervalHandle, max_girth: int) -> list[Spindle]:
    """All global spindles of girth ≤ ``max_girth``, one per rotation/reflection class.

    Sorted by girth, then by canonical cycle.
    """
    if max_girth < 4:
        raise SpindleError(f"max_girth must be at least 4, got {max_girth}")
    base, z, w = _endpoints(P)
    found = [_make_spindle(base, z, w, c, 0) for c in _Search(base, z, w, max_girth).run()]
    found.sort(key=lambda s: (s.girth, s.cycle))
    return found


def iter_intervals(P: GradedPoset, min_rank: int = 3) -> Iterator[tuple[int, int]]:
    """Pairs ``z ≤ w`` with ``rank(w) - rank(z) ≥ min_rank`` in index order."""
    r = P.ranks
    for z in P.elements:
        for w in bits(P.up[z]):
            if r[w] - r[z] >= min_rank:
                yield z, w


def spindle_from_bowtie(P: GradedPoset, bt: Bowtie) -> Spindle:
    """The girth-4 spindle ``(b, a, d, c)`` a bowtie spans between one of its
    maximal lower bounds and one of its minimal upper bounds."""
    _, lows = P.bounds(bt.b, bt.d)
    highs, _ = P.bounds(bt.a, bt.c)
    z, w = lows[0], highs[0]
    cycle = (bt.b, bt.a, bt.d, bt.c)
    p = _spindle_parity(P, z, w, cycle)
    assert p == 0, "bowtie did not yield a spindle"
    return _make_spindle(P, z, w, cycle, 0)


def find_short_spindle(P: GradedPoset) -> Spindle | None:
    """First short spindle of ``P`` in any interval, or ``None``.

    Girth 4 comes from :func:`find_bowtie`. Otherwise every interval of rank
    ≥ 3 is searched up to :func:`girth_cutoff`, so ``None`` is a proof that no
    short spindle exists.
    """
    bt = find_bowtie(P)
    if bt is not None:
        return spindle_from_bowtie(P, bt)
    for z, w in iter_intervals(P):
        g = girth_cutoff(P.ranks[w] - P.ranks[z])
        if g < 6:
            continue
        search = _Search(P, z, w, g, min_girth=6, budget=TWO_PI - SHORT_EPS)
        for cycle in search.run():
            return _make_spindle(P, z, w, cycle, 0)
    return None


class Status(str, Enum):
    CAT0 = "CAT0"
    NOT_CAT0 = "NotCAT0"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class CurvatureVerdict:
    status: Status
    rank: int
    witness: Spindle | Bowtie | None = None
    notes: str = ""

    def to_dict(self, P: GradedPoset) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "rank": self.rank,
            "witness": None if self.witness is None else self.witness.to_dict(P),
            "notes": self.notes,
        }


def _adjacent_rank_spindle(P: GradedPoset) -> Spindle | None:
    lower = sum(1 << x for x in P.level(1))
    upper = sum(1 << x for x in P.level(2))
    search = _Search(P, P.bottom, P.top, 6, min_girth=6, lower_mask=lower, upper_mask=upper)
    for cycle in search.run():
        return _make_spindle(P, P.bottom, P.top, cycle, 0)
    return None


def cat0_verdict_rank_le4(P: GradedPoset) -> CurvatureVerdict:
    """Decide whether the orthoscheme complex of ``P`` (rank ≤ 4) is CAT(0).

    A non-lattice fails with a bowtie. A lattice of rank ≤ 3 passes. A rank-4
    lattice fails exactly when it holds a girth-6 spindle alternating between
    ranks 1 and 2 or between ranks 2 and 3; the second pattern is searched as
    the first pattern of the dual poset.
    """
    n = P.rank
    if n > 4:
        return CurvatureVerdict(Status.OUT_OF_SCOPE, n, notes="rank above 4 is not decided")
    bt = find_bowtie(P)
    if bt is not None:
        return CurvatureVerdict(Status.NOT_CAT0, n, bt, "not a lattice: bowtie found")
    if n < 4:
        return CurvatureVerdict(Status.CAT0, n, notes="lattice of rank at most 3")
    found = _adjacent_rank_spindle(P)
    if found is not None:
        return CurvatureVerdict(Status.NOT_CAT0, n, found, "short girth-6 spindle on ranks 1-2")
    found = _adjacent_rank_spindle(P.dual())
    if found is not None:
        # lower elements of the dual are upper elements of P
        spindle = _make_spindle(P, P.bottom, P.top, found.cycle, 1)
        return CurvatureVerdict(Status.NOT_CAT0, n, spindle, "short girth-6 spindle on ranks 2-3")
    return CurvatureVerdict(Status.CAT0, n, notes="rank-4 lattice without adjacent-rank girth-6 spindles")


def witness_from_dict(P: GradedPoset, obj: dict[str, Any]) -> Spindle | Bowtie:
    """Rebuild a serialized witness against ``P``, re-validating it."""
    if obj.get("kind") == "bowtie":
        bt = Bowtie(obj["a"], obj["b"], obj["c"], obj["d"])
        if not bt.validate(P):
            raise NotASpindle("bowtie witness does not validate")
        return bt
    z, w = obj["interval"]["bottom"], obj["interval"]["top"]
    cycle = tuple(obj["cycle"])
    ok, p = is_global_spindle(P.interval(z, w), cycle)
    if not ok:
        raise NotASpindle("spindle witness does not validate")
    return _make_spindle(P, z, w, cycle, p)
