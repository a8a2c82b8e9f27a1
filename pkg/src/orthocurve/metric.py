"""Orthoscheme metric: diagonal-link edge lengths, link shapes, triangle angles.

Every length is carried twice: the exact rational ``cos²`` for identity
checks and the floating angle for summation.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, NamedTuple, Sequence

from .errors import RankTooSmall, ZeroPart
from .poset import GradedPoset, IntervalHandle, bits, check_chain

__all__ = [
    "DiagonalLinkGraph",
    "EdgeLengthSpec",
    "ShapeFactor",
    "TriangleAngles",
    "diagonal_link",
    "edge_length",
    "link_decomposition",
    "min_edge_length",
    "triangle_check",
]


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class EdgeLengthSpec:
    """Edge from a vertex of rank ``i`` to one of corank ``k``, rank gap ``j``."""

    i: int
    j: int
    k: int
    cos_sq: Fraction = field(compare=False)
    theta: float = field(compare=False)

    @property
    def n(self) -> int:
        return self.i + self.j + self.k

    def to_dict(self) -> dict[str, Any]:
        return {"ijk": [self.i, self.j, self.k], "cos_sq": _frac(self.cos_sq), "length": self.theta}


@lru_cache(maxsize=None)
def edge_length(i: int, j: int, k: int) -> EdgeLengthSpec:
    """Length of a diagonal-link edge in a standard ``(i+j+k)``-orthoscheme.

    ``cos²θ = i·k / ((i+j)(j+k))``.
    """
    if min(i, j, k) <= 0:
        raise ZeroPart(f"rank parts must be positive, got ({i}, {j}, {k})")
    cos_sq = Fraction(i * k, (i + j) * (j + k))
    return EdgeLengthSpec(i, j, k, cos_sq, math.acos(math.sqrt(cos_sq)))


@lru_cache(maxsize=None)
def min_edge_length(n: int) -> float:
    """Shortest possible diagonal-link edge in a rank-``n`` interval (``inf`` below rank 3)."""
    best = math.inf
    for i in range(1, n - 1):
        for j in range(1, n - i):
            best = min(best, edge_length(i, j, n - i - j).theta)
    return best


@dataclass(frozen=True)
class ShapeFactor:
    family: str  # "alpha" or "beta"
    index: int

    def __post_init__(self) -> None:
        if self.family not in ("alpha", "beta") or self.index < 0:
            raise ValueError(f"bad shape factor {self.family}{self.index}")

    def __str__(self) -> str:
        return ("α" if self.family == "alpha" else "β") + str(self.index)


def alpha(m: int) -> ShapeFactor:
    return ShapeFactor("alpha", m)


def beta(m: int) -> ShapeFactor:
    return ShapeFactor("beta", m)


def link_decomposition(P: GradedPoset, chain: Sequence[int]) -> list[ShapeFactor]:
    """Spherical-join factors of the link of the simplex spanned by ``chain``.

    Factors run bottom to top: the lower endpoint link, one diagonal-link
    factor per consecutive pair, then the upper endpoint link. Empty factors
    (index 0) are dropped.
    """
    check_chain(P, chain)
    r = [P.ranks[x] for x in chain]
    factors = [beta(r[0])]
    factors += [alpha(b - a - 1) for a, b in zip(r, r[1:])]
    factors.append(beta(P.rank - r[-1]))
    return [f for f in factors if f.index > 0]


@dataclass(frozen=True)
class DiagonalLinkGraph:
    """1-skeleton of the diagonal link: interior elements and comparable pairs."""

    vertices: tuple[int, ...]
    ranks: dict[int, int]
    edges: tuple[tuple[int, int, EdgeLengthSpec], ...]
    labels: dict[int, str]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for x, y, _ in self.edges:
            adj[x].append(y)
            adj[y].append(x)
        return adj

    def girth(self) -> float:
        """Combinatorial girth (``inf`` for a forest)."""
        adj = self.adjacency()
        best = math.inf
        for s in self.vertices:
            dist = {s: 0}
            parent = {s: -1}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        queue.append(v)
                    elif parent[u] != v:
                        best = min(best, dist[u] + dist[v] + 1)
        return best

    def is_bipartite(self) -> bool:
        adj = self.adjacency()
        colour: dict[int, int] = {}
        for s in self.vertices:
            if s in colour:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in adj[u]:
                    if v not in colour:
                        colour[v] = 1 - colour[u]
                        queue.append(v)
                    elif colour[v] == colour[u]:
                        return False
        return True

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": [{"id": v, "rank": self.ranks[v], "label": self.labels[v]} for v in self.vertices],
            "edges": [
                {
                    "pair": [x, y],
                    "cos_sq": {"numerator": s.cos_sq.numerator, "denominator": s.cos_sq.denominator},
                    "length": s.theta,
                }
                for x, y, s in self.edges
            ],
        }


def diagonal_link(P: GradedPoset | IntervalHandle) -> DiagonalLinkGraph:
    """Build the diagonal-link graph of a poset or of one of its intervals.

    Vertex ids are element ids of the underlying poset; ranks are local to the
    interval.
    """
    if isinstance(P, IntervalHandle):
        base, lo, hi = P.parent, P.lo, P.hi
    else:
        base, lo, hi = P, P.bottom, P.top
    r0 = base.ranks[lo]
    n = base.ranks[hi] - r0
    if n < 2:
        raise RankTooSmall(f"diagonal link needs rank >= 2, got {n}")
    inner = base.up[lo] & base.down[hi] & ~(1 << lo) & ~(1 << hi)
    verts = tuple(bits(inner))
    ranks = {v: base.ranks[v] - r0 for v in verts}
    edges = []
    for x in verts:
        for y in bits(base.up[x] & inner & ~(1 << x)):
            i = ranks[x]
            j = ranks[y] - i
            edges.append((x, y, edge_length(i, j, n - ranks[y])))
    return DiagonalLinkGraph(verts, ranks, tuple(edges), {v: base.labels[v] for v in verts})


class TriangleAngles(NamedTuple):
    angle_x: float
    angle_y: float
    angle_z: float
    sides: tuple[EdgeLengthSpec, EdgeLengthSpec, EdgeLengthSpec]  # (xy, yz, xz)

    @property
    def product_identity(self) -> bool:
        """``cos(xy)·cos(yz) = cos(xz)``, checked exactly on squares."""
        xy, yz, xz = self.sides
        return xy.cos_sq * yz.cos_sq == xz.cos_sq


def _angle(opposite: float, s1: float, s2: float) -> float:
    c = (math.cos(opposite) - math.cos(s1) * math.cos(s2)) / (math.sin(s1) * math.sin(s2))
    return math.acos(max(-1.0, min(1.0, c)))


def triangle_check(i: int, j: int, k: int, l: int) -> TriangleAngles:
    """Angles of the diagonal-link triangle on vertices of ranks ``i``, ``i+j``, ``i+j+k``.

    The ambient rank is ``i+j+k+l``; angles come from the spherical law of
    cosines applied to the three edge lengths.
    """
    if min(i, j, k, l) <= 0:
        raise ZeroPart(f"rank parts must be positive, got ({i}, {j}, {k}, {l})")
    xy = edge_length(i, j, k + l)
    yz = edge_length(i + j, k, l)
    xz = edge_length(i, j + k, l)
    a, b, c = xy.theta, yz.theta, xz.theta
    return TriangleAngles(
        angle_x=_angle(b, a, c),
        angle_y=_angle(c, a, b),
        angle_z=_angle(a, b, c),
        sides=(xy, yz, xz),
    )
