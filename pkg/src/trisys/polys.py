"""Dense univariate polynomials as coefficient lists, lowest degree first.

Three coefficient domains are used: integers, rationals (``Fraction``) and
residues modulo a prime ``p`` (integers in ``0..p-1``).  The zero polynomial
is the empty list.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd

Poly = list


def trim(f: list) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: list) -> int:
    return len(f) - 1 if f else -1


def add(f: list, g: list) -> list:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def sub(f: list, g: list) -> list:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)])


def scale(f: list, c) -> list:
    return trim([c * a for a in f])


def mul(f: list, g: list) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def divmod_q(f: list, g: list) -> tuple[list, list]:
    """Division with remainder over the rationals."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(a) for a in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lead = Fraction(g[-1])
    while len(r) >= len(g) and r:
        c = r[-1] / lead
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[k + i] -= c * b
        r = trim(r)
    return trim(q), r


def evaluate(f: list, x):
    acc = 0
    for a in reversed(f):
        acc = acc * x + a
    return acc


def derivative(f: list) -> list:
    return trim([i * a for i, a in enumerate(f)][1:])


def compose(f: list, g: list) -> list:
    """f(g(x))."""
    acc: list = []
    for a in reversed(f):
        acc = add(mul(acc, g), [a] if a else [])
    return acc


@lru_cache(maxsize=None)
def _dickson(m: int) -> tuple[int, ...]:
    if m == 0:
        return (2,)
    if m == 1:
        return (0, 1)
    prev, cur = [2], [0, 1]
    for _ in range(m - 1):
        prev, cur = cur, sub(mul([0, 1], cur), prev)
    return tuple(cur)


def dickson(m: int) -> list[int]:
    """Monic polynomial with 2cos(m t) = D_m(2cos t); D_0 = 2 by convention."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return list(_dickson(m))


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, r = divmod_q(num, list(_cyclotomic(d)))
            assert not r
    return tuple(int(c) for c in num)


def cyclotomic(m: int) -> list[int]:
    return list(_cyclotomic(m))


@lru_cache(maxsize=None)
def _min_poly_2cos(n: int) -> tuple[int, ...]:
    phi = _cyclotomic(2 * n)
    half = (len(phi) - 1) // 2
    out = [phi[half]]
    for k in range(1, half + 1):
        out = add(out, scale(dickson(k), phi[half + k]))
    return tuple(out)


def min_poly_2cos(n: int) -> list[int]:
    """Minimal polynomial of 2cos(pi/n) over Q."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return list(_min_poly_2cos(n))


def content_primitive(f: list) -> list[int]:
    """Scale a rational polynomial to a primitive integer polynomial."""
    fs = [Fraction(a) for a in f]
    den = 1
    for a in fs:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in fs]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return []
    if ints[-1] < 0:
        g = -g
    return [a // g for a in ints]


def gcd_q(f: list, g: list) -> list:
    """Monic gcd over the rationals."""
    a, b = trim([Fraction(x) for x in f]), trim([Fraction(x) for x in g])
    while b:
        _, r = divmod_q(a, b)
        a, b = b, r
    if not a:
        return []
    return [c / a[-1] for c in a]


def resultant_disc(f: list[int]) -> int:
    """Discriminant of an integer polynomial (via the Sylvester resultant)."""
    n = degree(f)
    res = _resultant([Fraction(c) for c in f], [Fraction(c) for c in derivative(f)])
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    val = sign * res / f[-1]
    assert val.denominator == 1
    return int(val)


def _resultant(f: list, g: list):
    # Euclidean resultant over a field
    if not f or not g:
        return Fraction(0)
    df, dg = degree(f), degree(g)
    if dg == 0:
        return g[0] ** df
    _, r = divmod_q(f, g)
    if not r:
        return Fraction(0)
    dr = degree(r)
    s = -1 if (df * dg) % 2 else 1
    return s * g[-1] ** (df - dr) * _resultant(g, r)


# ---------------------------------------------------------------- roots

def sturm_sequence(f: list) -> list[list]:
    seq = [[Fraction(a) for a in f], [Fraction(a) for a in derivative(f)]]
    while seq[-1] and degree(seq[-1]) > 0:
        _, r = divmod_q(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def _sign_changes(seq: list[list], x: Fraction) -> int:
    signs = []
    for p in seq:
        v = evaluate(p, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(f: list) -> Fraction:
    lead = abs(Fraction(f[-1]))
    return 1 + max(abs(Fraction(a)) for a in f[:-1]) / lead if len(f) > 1 else Fraction(1)


def isolate_real_roots(f: list) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open intervals (lo, hi] each holding exactly one real root.

    ``f`` must be squarefree.  Intervals are returned in increasing order.
    """
    seq = sturm_sequence(f)
    bound = cauchy_bound(f)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def refine_root(f: list, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval (lo, hi] of a squarefree f down to ``width``."""
    flo = evaluate(f, lo)
    if evaluate(f, hi) == 0:
        return hi, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = evaluate(f, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0) and flo != 0:
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------- F_p[x]

def mod_p(f: list, p: int) -> list[int]:
    out = []
    for a in f:
        a = Fraction(a)
        if a.denominator % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        out.append(a.numerator * pow(a.denominator, -1, p) % p)
    return trim(out)


def p_add(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def p_sub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def p_mul(f: list[int], g: list[int], p: int) -> list[int]:
    return trim([c % p for c in mul(f, g)])


def p_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(r) >= len(g) and r:
        c = r[-1] * inv % p
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[k + i] = (r[k + i] - c * b) % p
        r = trim(r)
    return trim(q), r


def p_rem(f: list[int], g: list[int], p: int) -> list[int]:
    return p_divmod(f, g, p)[1]


def p_monic(f: list[int], p: int) -> list[int]:
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [a * inv % p for a in f]


def p_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    a, b = trim(f), trim(g)
    while b:
        a, b = b, p_rem(a, b, p)
    return p_monic(a, p)


def p_powmod(f: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = p_rem(f, m, p)
    while e:
        if e & 1:
            result = p_rem(p_mul(result, base, p), m, p)
        base = p_rem(p_mul(base, base, p), m, p)
        e >>= 1
    return result


def p_derivative(f: list[int], p: int) -> list[int]:
    return trim([(i * a) % p for i, a in enumerate(f)][1:])


def _squarefree_decomposition(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Pairs (g, e) with f = prod g^e, g squarefree and pairwise coprime."""
    f = p_monic(f, p)
    if degree(f) <= 0:
        return []
    out: list[tuple[list[int], int]] = []
    df = p_derivative(f, p)
    if not df:
        # f = g(x^p)
        g = p_monic([f[i] for i in range(0, len(f), p)], p)
        return [(h, e * p) for h, e in _squarefree_decomposition(g, p)]
    c = p_gcd(f, df, p)
    w = p_divmod(f, c, p)[0]
    i = 1
    while degree(w) > 0:
        y = p_gcd(w, c, p)
        z = p_divmod(w, y, p)[0]
        if degree(z) > 0:
            out.append((p_monic(z, p), i))
        i += 1
        w = y
        c = p_divmod(c, y, p)[0]
    if degree(c) > 0:
        g = p_monic([c[k] for k in range(0, len(c), p)], p)
        out.extend((h, e * p) for h, e in _squarefree_decomposition(g, p))
    return out


def _distinct_degree(f: list[int], p: int) -> list[tuple[list[int], int]]:
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = p_powmod(h, p, f, p)
        g = p_gcd(f, p_sub(h, [0, 1], p), p)
        if degree(g) > 0:
            out.append((g, d))
            f = p_divmod(f, g, p)[0]
            h = p_rem(h, f, p)
    if degree(f) > 0:
        out.append((p_monic(f, p), degree(f)))
    return out


def _equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    n = degree(f)
    if n == d:
        return [p_monic(f, p)]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if degree(a) <= 0:
            continue
        g = p_gcd(a, f, p)
        if 0 < degree(g) < n:
            break
        if p == 2:
            t, acc = a, a
            for _ in range(d - 1):
                t = p_rem(p_mul(t, t, p), f, p)
                acc = p_add(acc, t, p)
            b = acc
        else:
            b = p_sub(p_powmod(a, (p ** d - 1) // 2, f, p), [1], p)
        g = p_gcd(b, f, p)
        if 0 < degree(g) < n:
            break
    return _equal_degree(g, d, p, rng) + _equal_degree(p_divmod(f, g, p)[0], d, p, rng)


def factor_mod_p(f: list, p: int, seed: int = 0) -> list[tuple[list[int], int]]:
    """Factor into monic irreducibles over F_p: sorted list of (factor, multiplicity)."""
    rng = random.Random(seed)
    fp = mod_p(f, p)
    if degree(fp) <= 0:
        return []
    out = []
    for g, e in _squarefree_decomposition(fp, p):
        for h, d in _distinct_degree(g, p):
            for irr in _equal_degree(h, d, p, rng):
                out.append((irr, e))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def is_irreducible_mod_p(f: list[int], p: int) -> bool:
    fac = factor_mod_p(f, p)
    return len(fac) == 1 and fac[0][1] == 1


def dedekind_p_maximal(f: list[int], p: int) -> bool:
    """Dedekind's criterion: is Z[x]/(f) maximal at p?  ``f`` monic integral."""
    fac = factor_mod_p(f, p)
    g: list[int] = [1]
    h: list[int] = [1]
    for irr, e in fac:
        g = mul(g, irr)
        for _ in range(e - 1):
            h = mul(h, irr)
    # g = prod of the irreducibles, h = prod irr^(e-1); f = g*h mod p
    big = sub(mul(g, h), list(f))
    assert all(c % p == 0 for c in big)
    F = mod_p([c // p for c in big], p)
    common = p_gcd(p_gcd(F, mod_p(g, p), p), mod_p(h, p), p)
    return degree(common) <= 0
