from __future__ import annotations

import random
from collections import defaultdict
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from trisys.fingroup import (CapExceeded, GFq, GroupError, commutative_test, count_bound, exceptional_test,
                             find_irreducible, kappa, order_class_traces, pgl_to_psl, psl2,
                             solve_trace_triple, subgroup_closure)

QS = [5, 7, 9, 11, 13]


def field(q):
    for p in (3, 5, 7, 11, 13):
        f = 1
        while p ** f < q:
            f += 1
        if p ** f == q:
            return GFq(p, find_irreducible(p, f) if f > 1 else None)
    raise ValueError(q)


@pytest.mark.parametrize("q", QS + [25])
def test_psl2_order(q):
    G = psl2(field(q))
    assert len(G.elements()) == q * (q * q - 1) // 2 == G.size


def test_gf_basics():
    F = GFq(7)
    assert F.sqrt(4) == 2
    assert F.sqrt(3) is None
    with pytest.raises(GroupError):
        GFq(2)
    F9 = field(9)
    for a in range(1, 9):
        assert F9.mul(a, F9.inv(a)) == 1


@given(st.integers(1, 24), st.integers(1, 24), st.integers(1, 24))
def test_field_axioms_gf25(a, b, c):
    F = field(25)
    assert F.mul(F.add(a, b), c) == F.add(F.mul(a, c), F.mul(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.div(F.mul(a, b), b) == a


def _brute_classes(G):
    """(order -> number of conjugacy classes), by orbit enumeration."""
    elems = G.elements()
    seen = set()
    counts = defaultdict(int)
    gens = [G.make((1, 1, 0, 1)), G.make((0, 1, G.F.neg(1), 0))]
    prim = [x for x in range(1, G.F.q) if G.F.subfield_of(x) == G.F.f]
    gens.append(G.make((1, prim[0], 0, 1)))
    for m in elems:
        if m in seen:
            continue
        orbit = {m}
        frontier = [m]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.mul(G.mul(g, x), G.inv(g))
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orbit
        counts[G.order(m)] += 1
    return counts


@pytest.mark.parametrize("q", QS)
def test_kappa_matches_brute_force(q):
    F = field(q)
    G = psl2(F)
    counts = _brute_classes(G)
    half = q * (q * q - 1) // 2
    for n in range(1, half + 1):
        if half % n or n % F.p == 0:
            continue
        assert kappa(n, q) == counts.get(n, 0), n


@pytest.mark.parametrize("q", QS)
def test_order_class_traces_brute_force(q):
    F = field(q)
    G = psl2(F)
    by_order = defaultdict(set)
    for m in G.elements():
        by_order[G.order(m)].add(G.trace(m))
    for n in by_order:
        if n % F.p:
            assert order_class_traces(n, F) == by_order[n]


def test_kappa_examples():
    assert kappa(2, 13) == 1
    assert kappa(7, 13) == 3
    assert kappa(7, 11) == 0
    with pytest.raises(GroupError):
        kappa(7, 7)


def _sl2(p):
    return [m for m in product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]


@pytest.mark.parametrize("p", [5, 7])
def test_commutative_test_exhaustive(p):
    F = GFq(p)

    def mul(m, n):
        return ((m[0] * n[0] + m[1] * n[2]) % p, (m[0] * n[1] + m[1] * n[3]) % p,
                (m[2] * n[0] + m[3] * n[2]) % p, (m[2] * n[1] + m[3] * n[3]) % p)

    commuting = set()
    sl = _sl2(p)
    for g1 in sl:
        for g2 in sl:
            g = mul(g1, g2)
            if g == mul(g2, g1):
                commuting.add(((g1[0] + g1[3]) % p, (g2[0] + g2[3]) % p, (g[0] + g[3]) % p))
    for t in product(range(p), repeat=3):
        assert commutative_test(F, t) == (t in commuting), t


def test_commutative_examples():
    assert commutative_test(GFq(11), (2, 2, 2))
    assert not commutative_test(GFq(11), (0, 1, 3))


def test_exceptional():
    assert exceptional_test((2, 2, 5))
    assert not exceptional_test((2, 3, 7))
    assert exceptional_test((3, 5, 5))


@pytest.mark.parametrize("tau,p,expected", [((2, 3, 7), 13, 3), ((2, 3, 7), 29, 3),
                                            ((2, 7, 7), 13, 9), ((2, 7, 7), 29, 9)]
                         + [((2, 3, 12), p, 2) for p in (11, 13, 23, 37, 47, 59)])
def test_count_bound(tau, p, expected):
    assert count_bound(tau, p) == expected


def test_count_bound_unavailable():
    assert count_bound((2, 3, 7), 7) == "unavailable"
    assert count_bound((2, 3, 7), 2) == "unavailable"


def test_closure_examples():
    G = psl2(GFq(7))
    assert len(subgroup_closure(G, [G.identity])) == 1
    assert len(subgroup_closure(G, [G.make((1, 1, 0, 1)), G.make((1, 0, 1, 1))])) == 168
    with pytest.raises(CapExceeded):
        subgroup_closure(G, [G.make((1, 1, 0, 1)), G.make((1, 0, 1, 1))], cap=100)


def test_orders():
    G = psl2(GFq(7))
    assert G.order(G.identity) == 1
    assert G.order(G.make((1, 1, 0, 1))) == 7
    for m in G.elements():
        if G.trace(m) == 0:
            assert G.order(m) == 2


@pytest.mark.parametrize("p", [5, 7])
def test_pgl_embedding(p):
    base = GFq(p)
    rng = random.Random(p)
    mats = [m for m in product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p]

    def mul(m, n):
        return ((m[0] * n[0] + m[1] * n[2]) % p, (m[0] * n[1] + m[1] * n[3]) % p,
                (m[2] * n[0] + m[3] * n[2]) % p, (m[2] * n[1] + m[3] * n[3]) % p)

    for _ in range(500):
        g, h = rng.choice(mats), rng.choice(mats)
        G, ig = pgl_to_psl(base, g)
        _, ih = pgl_to_psl(base, h)
        _, igh = pgl_to_psl(base, mul(g, h))
        assert G.mul(ig, ih) == igh
    images = {pgl_to_psl(base, m)[1] for m in mats}
    assert len(images) == p * (p * p - 1)
    G, d = pgl_to_psl(base, (3 % p, 0, 0, 1))
    assert G.det(d) == 1


def test_solve_trace_triple_nonempty_f5():
    F = GFq(5)
    for t in product(range(5), repeat=3):
        sols = solve_trace_triple(F, t)
        assert sols
        for g1, g2, g3 in sols[:5]:
            assert F.add(g1[0], g1[3]) == t[0] and F.add(g3[0], g3[3]) == t[2]


def test_hurwitz_triples_generate():
    F = GFq(13)
    G = psl2(F)
    t7 = sorted(order_class_traces(7, F))
    for t3 in t7:
        for t2 in (1, F.neg(1)):
            for g1, g2, _ in solve_trace_triple(F, (0, t2, t3), limit=3):
                assert len(subgroup_closure(G, [G.canon(g1), G.canon(g2)])) == G.size
