from __future__ import annotations

import math
import random
from itertools import permutations

import numpy as np
import pytest

from oracles import catalan

from orthocurve.coxeter import (
    SUPPORTED_TYPES,
    build_coxeter,
    build_ncw,
    fixed_space_codimension,
    reflection_length,
)
from orthocurve.errors import NotInGroup, UnsupportedType
from orthocurve.families import noncrossing_partition_lattice
from orthocurve.poset import find_bowtie, find_isomorphism
from orthocurve.spindles import Status, cat0_verdict_rank_le4

# Coxeter diagrams written out independently of the package: (edges with labels)
DIAGRAMS = {
    "A1": (1, []),
    "A4": (4, [(0, 1, 3), (1, 2, 3), (2, 3, 3)]),
    "B4": (4, [(0, 1, 3), (1, 2, 3), (2, 3, 4)]),
    "D4": (4, [(0, 1, 3), (1, 2, 3), (1, 3, 3)]),
    "F4": (4, [(0, 1, 3), (1, 2, 4), (2, 3, 3)]),
    "H4": (4, [(0, 1, 5), (1, 2, 3), (2, 3, 3)]),
    "B5": (5, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 4)]),
}
DEGREES = {
    "A1": (2,),
    "A4": (2, 3, 4, 5),
    "B4": (2, 4, 6, 8),
    "D4": (2, 4, 4, 6),
    "F4": (2, 6, 8, 12),
    "H4": (2, 12, 20, 30),
    "B5": (2, 4, 6, 8, 10),
}
RANK4 = ("A4", "B4", "D4", "F4", "H4")


def coxeter_matrix(label):
    n, edges = DIAGRAMS[label]
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i, j, k in edges:
        m[i][j] = m[j][i] = k
    return m


def float_orbits(label):
    """(|W|, number of roots) from the geometric representation, in floats."""
    m = np.array(coxeter_matrix(label), dtype=float)
    n = len(m)
    B = -np.cos(np.pi / m)
    gens = []
    for i in range(n):
        S = np.eye(n)
        S[i] -= 2 * B[i]
        gens.append(S)

    def orbit(v):
        key = lambda u: tuple(np.round(u, 7))  # noqa: E731
        seen = {key(v)}
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for S in gens:
                    w = S @ u
                    k = key(w)
                    if k not in seen:
                        seen.add(k)
                        nxt.append(w)
            frontier = nxt
        return seen

    # a generic vector has trivial stabilizer, so its orbit has |W| points
    generic = np.linalg.solve(B, np.array([1.0, math.sqrt(2), math.pi, math.e, math.sqrt(7)][:n]))
    roots = set()
    for i in range(n):
        roots |= orbit(np.eye(n)[i])
    return len(orbit(generic)), len(roots)


@pytest.fixture(scope="module")
def groups():
    return {t: build_coxeter(t) for t in DIAGRAMS}


@pytest.mark.parametrize("label", list(DIAGRAMS))
def test_group_and_root_counts(groups, label):
    W = groups[label]
    order, nroots = float_orbits(label)
    assert W.order == order == math.prod(DEGREES[label])
    assert len(W.reflections) == nroots // 2 == W.n_positive == sum(d - 1 for d in DEGREES[label])


def test_a4_against_symmetric_group(groups):
    # oracle: S5 generated by adjacent transpositions, and its transpositions
    gens = [tuple(list(range(i)) + [i + 1, i] + list(range(i + 2, 5))) for i in range(4)]
    seen = {tuple(range(5))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(5))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    transpositions = [p for p in seen if sum(p[i] != i for i in range(5)) == 2]
    W = groups["A4"]
    assert W.order == len(seen) == 120 and len(W.reflections) == len(transpositions) == 10
    # class sizes by reflection length match cycle counts: l(w) = 5 - #cycles
    def cycles(p):
        todo, c = set(range(5)), 0
        while todo:
            c += 1
            x = todo.pop()
            while p[x] in todo:
                x = p[x]
                todo.discard(x)
        return c
    from collections import Counter
    assert Counter(5 - cycles(p) for p in seen) == Counter(W.abs_length.tolist())


def test_a1(groups):
    W = groups["A1"]
    assert W.order == 2 and len(W.reflections) == 1
    P = build_ncw(W)
    assert len(P) == 2 and P.rank == 1


@pytest.mark.parametrize("label", ["E6", "A6", "H3", "B1", "D3", "X4", ""])
def test_unsupported(label):
    with pytest.raises(UnsupportedType):
        build_coxeter(label)


def test_supported_types_build():
    for t in SUPPORTED_TYPES:
        W = build_coxeter(t)
        assert W.perms.shape[0] == W.order


@pytest.mark.parametrize("label", list(DIAGRAMS))
def test_coxeter_relations(groups, label):
    W = groups[label]
    m = coxeter_matrix(label)
    S = W.simples
    for i in range(W.rank):
        for j in range(W.rank):
            x = W.multiply(S[i], S[j])
            w, k = x, 1
            while w != 0:
                w = W.multiply(w, x)
                k += 1
            assert k == m[i][j]


@pytest.mark.parametrize("label", list(DIAGRAMS))
def test_reflections(groups, label):
    W = groups[label]
    T = np.array(W.reflections)
    assert np.all(W.multiply(T, T) == 0)
    assert np.all(W.abs_length[T] == 1)
    assert reflection_length(W, 0) == 0
    # T is closed under conjugation by the generators
    for s in W.simples:
        conj = W.multiply(W.multiply(s, T), s)
        assert set(conj.tolist()) == set(T.tolist())


def test_delta_is_product_of_simples(groups):
    W = groups["A4"]
    w = 0
    for s in W.simples:
        w = W.multiply(w, s)
    assert w == W.delta
    assert reflection_length(W, W.delta) == 4
    # explicit factorization into four reflections, and no shorter one exists
    assert all(int(W.abs_length[W.multiply(t, W.delta)]) == 3 for t in W.reflections)


def test_reflection_length_inputs(groups):
    W = groups["B4"]
    assert reflection_length(W, W.perms[W.delta]) == 4
    with pytest.raises(NotInGroup):
        reflection_length(W, W.order)
    with pytest.raises(NotInGroup):
        reflection_length(W, -1)
    bad = W.perms[0].copy()
    bad[[0, 1]] = bad[[1, 0]]
    with pytest.raises(NotInGroup):
        reflection_length(W, bad)


@pytest.mark.parametrize("label", RANK4)
def test_length_invariants(groups, label):
    W = groups[label]
    ell = W.abs_length
    assert np.array_equal(ell, ell[W.inverse])
    everyone = np.arange(W.order)
    assert np.all(W.multiply(everyone, W.inverse) == 0)
    for s in W.simples:
        conj = W.multiply(W.multiply(s, everyone), s)
        assert np.array_equal(ell[conj], ell)


@pytest.mark.parametrize("label", ["A4", "B4", "D4", "F4"])
def test_length_equals_codimension(groups, label):
    W = groups[label]
    assert all(fixed_space_codimension(W, w) == W.abs_length[w] for w in range(W.order))


def test_length_equals_codimension_h4(groups):
    W = groups["H4"]
    rng = random.Random(5)
    sample = rng.sample(range(W.order), 600) + [W.delta]
    assert all(fixed_space_codimension(W, w) == W.abs_length[w] for w in sample)


def test_words_are_reduced_factorizations(groups):
    W = groups["F4"]
    for w in random.Random(2).sample(range(W.order), 200):
        word = W.words[w]
        assert len(word) == W.abs_length[w]
        x = 0
        for t in word:
            x = W.multiply(x, W.reflections[t])
        assert x == w


# noncrossing posets


@pytest.mark.parametrize("label", RANK4)
def test_ncw_size_catalan(ncw, label):
    degrees = DEGREES[label]
    h = max(degrees)
    expected = math.prod(h + d for d in degrees) // math.prod(degrees)
    P = ncw[label]
    assert len(P) == expected and P.rank == 4
    assert find_bowtie(P) is None
    assert P.labels[P.bottom] == "e"


def test_ncw_a4_catalan_and_iso(ncw):
    assert len(ncw["A4"]) == catalan(5) == 42
    assert find_isomorphism(ncw["A4"], noncrossing_partition_lattice(5)) is not None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ncw_type_a_iso(n):
    P = build_ncw(build_coxeter(f"A{n - 1}"))
    assert find_isomorphism(P, noncrossing_partition_lattice(n)) is not None


@pytest.mark.parametrize("label", RANK4)
def test_ncw_self_duality(groups, ncw, label):
    W, P = groups[label], ncw[label]
    where = {w: i for i, w in enumerate(P.data)}
    kappa = {}
    for i, w in enumerate(P.data):
        image = int(W.multiply(W.inverse[w], W.delta))
        kappa[i] = where[image]
    assert sorted(kappa.values()) == list(P.elements)
    flipped = {(kappa[y], kappa[x]) for x, y in P.covers}
    assert flipped == set(P.covers)


@pytest.mark.parametrize("label", RANK4)
def test_ncw_order_is_absolute_order(groups, ncw, label):
    W, P = groups[label], ncw[label]
    g = np.array(P.data)
    ell = W.abs_length
    rng = random.Random(9)
    for x in rng.sample(range(len(P)), min(len(P), 40)):
        u = g[x]
        diffs = W.multiply(np.full(len(g), W.inverse[u]), g)
        expected = ell[u] + ell[diffs] == ell[g]
        assert [P.leq(x, y) for y in P.elements] == expected.tolist()


def test_d4_verdict_independent_of_coxeter_element(groups):
    W = groups["D4"]
    seen = set()
    for order in permutations(range(4)):
        delta = W.coxeter_element(order)
        if delta in seen:
            continue
        seen.add(delta)
        P = build_ncw(W, delta)
        assert len(P) == 50
        v = cat0_verdict_rank_le4(P)
        assert v.status is Status.NOT_CAT0 and v.witness.validate(P)
    assert len(seen) > 1


def test_coxeter_element_order_validated(groups):
    with pytest.raises(ValueError):
        groups["A4"].coxeter_element([0, 0, 1, 2])
