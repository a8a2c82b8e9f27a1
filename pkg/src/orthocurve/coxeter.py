"""Finite Coxeter groups as permutations of their root systems.

Roots are built exactly (rationals, or Q(√5) for H4) in simple-root
coordinates from a Cartan matrix. Each group element is stored as the
permutation it induces on the roots; since the simple roots form a basis, an
element is identified by the images of the simple roots, which gives a compact
integer key for hashing and vectorised lookup.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NotInGroup, UnsupportedType
from .poset import GradedPoset, build_poset
from .quadext import PHI, QuadExt

__all__ = [
    "CoxeterSystem",
    "SUPPORTED_TYPES",
    "build_coxeter",
    "build_ncw",
    "cartan_matrix",
    "fixed_space_codimension",
    "reflection_length",
]

SUPPORTED_TYPES = (
    "A1", "A2", "A3", "A4", "A5",
    "B2", "B3", "B4", "B5",
    "D4", "D5",
    "F4", "H4",
)

Root = tuple[QuadExt, ...]


def cartan_matrix(type_label: str) -> list[list[QuadExt]]:
    """Cartan matrix ``a[i][j] = <α_i^∨, α_j>`` in Bourbaki node order."""
    m = re.fullmatch(r"([ABDFH])(\d)", type_label)
    if not m or type_label not in SUPPORTED_TYPES:
        raise UnsupportedType(f"unsupported Coxeter type {type_label!r}")
    family, n = m.group(1), int(m.group(2))
    a = [[QuadExt(2 if i == j else 0) for j in range(n)] for i in range(n)]

    def bond(i: int, j: int, aij: QuadExt | int, aji: QuadExt | int) -> None:
        a[i][j] = QuadExt._coerce(aij)
        a[j][i] = QuadExt._coerce(aji)

    if family == "D":
        for i in range(n - 2):
            bond(i, i + 1, -1, -1)
        bond(n - 3, n - 1, -1, -1)
        return a
    for i in range(n - 1):
        bond(i, i + 1, -1, -1)
    if family == "B":
        bond(n - 2, n - 1, -2, -1)
    elif family == "F":
        bond(1, 2, -2, -1)
    elif family == "H":
        bond(0, 1, -PHI, -PHI)
    return a


def _reflect(i: int, v: Root, cartan: list[list[QuadExt]]) -> Root:
    c = sum((cartan[i][j] * v[j] for j in range(len(v))), QuadExt(0))
    out = list(v)
    out[i] = out[i] - c
    return tuple(out)


def _root_system(cartan: list[list[QuadExt]]) -> list[Root]:
    n = len(cartan)
    simple = [tuple(QuadExt(1 if j == i else 0) for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        v = queue.popleft()
        for i in range(n):
            u = _reflect(i, v, cartan)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    positive = [v for v in seen if all(c >= 0 for c in v)]
    assert len(positive) * 2 == len(seen), "roots must split into positive and negative"
    positive.sort(key=lambda v: (sum(v, QuadExt(0)), v[::-1]))
    return positive + [tuple(-c for c in v) for v in positive]


@dataclass(eq=False)
class CoxeterSystem:
    """A finite Coxeter group, fully enumerated.

    Element ``0`` is the identity. ``perms[w, r]`` is the index of the image of
    root ``r`` under ``w``; products act as composition, ``(u·v)(r) = u(v(r))``.
    """

    type_label: str
    cartan: list[list[QuadExt]]
    roots: list[Root]
    perms: np.ndarray
    simples: tuple[int, ...]
    reflections: tuple[int, ...]
    delta: int
    abs_length: np.ndarray
    inverse: np.ndarray
    words: list[tuple[int, ...]] = field(repr=False)
    _keys: np.ndarray = field(repr=False)
    _sorted: np.ndarray = field(repr=False)
    _tnbr: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.simples)

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def n_positive(self) -> int:
        return len(self.roots) // 2

    @property
    def simple_root_indices(self) -> tuple[int, ...]:
        return tuple(self.roots.index(tuple(QuadExt(1 if j == i else 0) for j in range(self.rank))) for i in range(self.rank))

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self._keys[self._sorted], keys)
        pos = np.minimum(pos, len(self._sorted) - 1)
        idx = self._sorted[pos]
        if not np.array_equal(self._keys[idx], keys):
            raise NotInGroup("permutation is not an element of this group")
        return idx

    def key_of(self, images: np.ndarray) -> np.ndarray:
        return _keys_of(images, len(self.roots))

    def multiply(self, u: int | np.ndarray, v: int | np.ndarray) -> int | np.ndarray:
        """Indices of the products ``u·v`` (broadcast over index arrays)."""
        su = np.asarray(u)
        sv = np.asarray(v)
        simple = np.array(self.simple_root_indices)
        images = self.perms[su[..., None], self.perms[sv][..., simple]]
        out = self.lookup(self.key_of(images))
        return int(out) if out.ndim == 0 else out

    def index_of(self, perm: Sequence[int]) -> int:
        arr = np.asarray(perm)
        if arr.shape != (len(self.roots),):
            raise NotInGroup("wrong permutation length")
        idx = int(self.lookup(self.key_of(arr[np.array(self.simple_root_indices)])))
        if not np.array_equal(self.perms[idx], arr):
            raise NotInGroup("permutation is not an element of this group")
        return idx

    def coxeter_element(self, order: Sequence[int] | None = None) -> int:
        """Product of the simple reflections in the given node order."""
        order = range(self.rank) if order is None else order
        if sorted(order) != list(range(self.rank)):
            raise ValueError("order must list every simple reflection once")
        w = 0
        for i in order:
            w = self.multiply(w, self.simples[i])
        return int(w)

    def reflection_root(self, t: int) -> int:
        """Index of the positive root negated by reflection ``t``."""
        npos = self.n_positive
        perm = self.perms[t]
        hits = [r for r in range(npos) if perm[r] == r + npos]
        if len(hits) != 1:
            raise ValueError(f"element {t} is not a reflection")
        return hits[0]

    def word_label(self, w: int) -> str:
        word = self.words[w]
        if not word:
            return "e"
        return " ".join(f"t{self.reflection_root(self.reflections[t]) + 1}" for t in word)

    def matrix(self, w: int) -> list[list[QuadExt]]:
        """Matrix of ``w`` in the simple-root basis (columns are images of simple roots)."""
        cols = [self.roots[self.perms[w, s]] for s in self.simple_root_indices]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]


def _keys_of(images: np.ndarray, base: int) -> np.ndarray:
    images = np.asarray(images, dtype=np.int64)
    powers = base ** np.arange(images.shape[-1], dtype=np.int64)
    return images @ powers


def build_coxeter(type_label: str) -> CoxeterSystem:
    """Construct and fully enumerate the Coxeter group of the given type."""
    cartan = cartan_matrix(type_label)
    n = len(cartan)
    roots = _root_system(cartan)
    index = {v: i for i, v in enumerate(roots)}
    R = len(roots)
    simple_idx = np.array([index[tuple(QuadExt(1 if j == i else 0) for j in range(n))] for i in range(n)])
    gen_perms = np.array([[index[_reflect(i, v, cartan)] for v in roots] for i in range(n)], dtype=np.int32)

    identity = np.arange(R, dtype=np.int32)
    perms = [identity]
    words: list[tuple[int, ...]] = [()]
    seen = {int(_keys_of(identity[simple_idx], R)): 0}
    frontier = [0]
    while frontier:
        block = np.array([perms[i] for i in frontier])
        nxt = []
        for g in range(n):
            cand = block[:, gen_perms[g]]
            keys = _keys_of(cand[:, simple_idx], R)
            for row, key in zip(cand, keys.tolist()):
                if key not in seen:
                    seen[key] = len(perms)
                    nxt.append(len(perms))
                    perms.append(row)
        frontier = nxt
    perm_arr = np.array(perms, dtype=np.int32)
    keys = _keys_of(perm_arr[:, simple_idx], R)
    order = np.argsort(keys, kind="stable")

    def lookup(k: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(keys[order], k)
        return order[pos]

    def mul(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return lookup(_keys_of(perm_arr[u[:, None], perm_arr[v][:, simple_idx]], R))

    simples = tuple(int(seen[int(_keys_of(gen_perms[g][simple_idx], R))]) for g in range(n))

    # reflections: close the simple reflections under conjugation
    refl = set(simples)
    queue = deque(simples)
    s_arr = np.array(simples)
    while queue:
        t = queue.popleft()
        conj = mul(mul(s_arr, np.full(n, t)), s_arr)
        for c in conj.tolist():
            if c not in refl:
                refl.add(c)
                queue.append(c)
    npos = R // 2

    def root_of(t: int) -> int:
        return next(r for r in range(npos) if perm_arr[t, r] == r + npos)

    reflections = tuple(sorted(refl, key=root_of))

    N = len(perm_arr)
    everyone = np.arange(N)
    tnbr = np.stack([mul(everyone, np.full(N, t)) for t in reflections], axis=1)

    # breadth-first layering of the Cayley graph on reflections
    dist = np.full(N, -1, dtype=np.int64)
    twords: list[tuple[int, ...]] = [()] * N
    dist[0] = 0
    layer = np.array([0])
    d = 0
    while layer.size:
        d += 1
        nb = tnbr[layer]
        fresh = []
        for u, row in zip(layer.tolist(), nb.tolist()):
            for ti, v in enumerate(row):
                if dist[v] < 0:
                    dist[v] = d
                    twords[v] = twords[u] + (ti,)
                    fresh.append(v)
        layer = np.array(fresh, dtype=np.int64)

    inv_perm = np.argsort(perm_arr, axis=1).astype(np.int32)
    inverse = lookup(_keys_of(inv_perm[:, simple_idx], R))

    W = CoxeterSystem(
        type_label=type_label,
        cartan=cartan,
        roots=roots,
        perms=perm_arr,
        simples=simples,
        reflections=reflections,
        delta=0,
        abs_length=dist,
        inverse=inverse,
        words=twords,
        _keys=keys,
        _sorted=order,
        _tnbr=tnbr,
    )
    W.delta = W.coxeter_element()
    return W


def reflection_length(W: CoxeterSystem, w: int | Sequence[int]) -> int:
    """Minimal number of reflections whose product is ``w`` (index or root permutation)."""
    if isinstance(w, (int, np.integer)):
        if not 0 <= int(w) < W.order:
            raise NotInGroup(f"no element with index {w}")
        return int(W.abs_length[int(w)])
    return int(W.abs_length[W.index_of(w)])


def build_ncw(W: CoxeterSystem, delta: int | None = None) -> GradedPoset:
    """The interval ``[e, δ]`` of the absolute order, as a graded poset.

    Element data are group-element indices; labels are reduced reflection
    words.
    """
    d = W.delta if delta is None else int(delta)
    ell = W.abs_length
    target = int(ell[d])
    everyone = np.arange(W.order)
    rest = W.multiply(W.inverse, np.full(W.order, d))
    members = everyone[ell + ell[rest] == target]
    members = sorted(members.tolist(), key=lambda w: (int(ell[w]), w))
    local = {w: i for i, w in enumerate(members)}
    covers = []
    for u in members:
        for v in W._tnbr[u].tolist():
            if v in local and ell[v] == ell[u] + 1:
                covers.append((local[u], local[v]))
    return build_poset(
        range(len(members)),
        covers,
        labels=[W.word_label(w) for w in members],
        name=f"NC({W.type_label})",
        data=members,
    )


def fixed_space_codimension(W: CoxeterSystem, w: int) -> int:
    """Rank of ``w - 1`` on the reflection representation, by exact elimination."""
    M = W.matrix(w)
    n = len(M)
    A = [[M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(n):
            if r != rank and A[r][col]:
                f = A[r][col] / A[rank][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank
