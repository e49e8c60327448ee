"""Finite fields, PSL2 over them, and Macbeath's trace-triple machinery."""

from __future__ import annotations

import random
from array import array
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from . import polys


class GroupError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    r = n
    for pr in factorize(n):
        r = r // pr * (pr - 1)
    return r


def _prime_power(q: int) -> tuple[int, int]:
    fs = factorize(q)
    if len(fs) != 1:
        raise GroupError(f"{q} is not a prime power")
    (p, f), = fs.items()
    return p, f


def find_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree f over F_p, in the integer-encoding order."""
    if f == 1:
        return (0, 1)
    for code in range(p ** f):
        low = [(code // p ** i) % p for i in range(f)]
        cand = low + [1]
        if cand[0] and polys.is_irreducible_mod_p(cand, p):
            return tuple(cand)
    raise GroupError("no irreducible polynomial found")


class GFq:
    """F_q = F_p[t]/(defining).  Elements are ints: sum of c_i p^i for coefficients c_i."""

    _ADD_TABLE_MAX = 1500

    def __init__(self, p: int, defining: Sequence[int] | None = None, f: int | None = None):
        if p == 2:
            raise GroupError("characteristic 2 is not supported")
        if defining is None:
            defining = find_irreducible(p, f or 1)
        defining = tuple(int(c) % p for c in defining)
        if defining[-1] != 1:
            raise GroupError("defining polynomial must be monic")
        self.p = p
        self.defining = defining
        self.f = len(defining) - 1
        self.q = p ** self.f
        if self.f > 1 and not polys.is_irreducible_mod_p(list(defining), p):
            raise GroupError("defining polynomial is reducible")
        self._build_tables()

    def __repr__(self) -> str:
        return f"GFq({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GFq) and (self.p, self.defining) == (other.p, other.defining)

    def __hash__(self) -> int:
        return hash((self.p, self.defining))

    # encoding
    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        cs = list(coeffs)
        if len(cs) > self.f:
            cs = polys.p_rem(polys.mod_p(cs, self.p), list(self.defining), self.p)
        v = 0
        for c in reversed(cs):
            v = v * self.p + int(c) % self.p
        return v

    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.f):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def _poly_mul(self, x: int, y: int) -> int:
        r = polys.p_rem(polys.p_mul(self.coeffs(x), self.coeffs(y), self.p), list(self.defining), self.p)
        return self.from_coeffs(r)

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        n = q - 1
        fs = list(factorize(n)) if n > 1 else []
        gen = None
        for cand in range(1, q):
            # order test by repeated multiplication-free exponentiation
            if all(self._slow_pow(cand, n // r) != 1 for r in fs):
                gen = cand
                break
        assert gen is not None
        exp = array("l", [0]) * (2 * n)
        log = array("l", [0]) * q
        x = 1
        for k in range(n):
            exp[k] = x
            exp[k + n] = x
            log[x] = k
            x = self._poly_mul(x, gen)
        self.primitive = gen
        self._exp = exp
        self._log = log
        if self.f == 1:
            self._neg = array("l", [(-x) % p for x in range(q)])
            self._addt = None
        else:
            self._neg = array("l", [self.from_coeffs([-c for c in self.coeffs(x)]) for x in range(q)])
            if q <= self._ADD_TABLE_MAX:
                digits = [self.coeffs(x) for x in range(q)]
                t = array("l", [0]) * (q * q)
                for a in range(q):
                    da = digits[a]
                    base = a * q
                    for b in range(q):
                        db = digits[b]
                        v = 0
                        for i in range(self.f - 1, -1, -1):
                            v = v * p + (da[i] + db[i]) % p
                        t[base + b] = v
                self._addt = t
            else:
                self._addt = None

    def _slow_pow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._poly_mul(r, x)
            x = self._poly_mul(x, x)
            e >>= 1
        return r

    # arithmetic on encoded ints
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        if self._addt is not None:
            return self._addt[a * self.q + b]
        p = self.p
        v, m = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            v += ((ra + rb) % p) * m
            m *= p
        return v

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_square(self, a: int) -> bool:
        return a == 0 or self._log[a] % 2 == 0

    def sqrt(self, a: int) -> int | None:
        """Square root, the smaller encoding of {s, -s}; None for non-squares."""
        if a == 0:
            return 0
        k = self._log[a]
        if k % 2:
            return None
        s = self._exp[k // 2]
        return min(s, self._neg[s])

    def canon_sign(self, a: int) -> int:
        return min(a, self._neg[a])

    def elements(self) -> range:
        return range(self.q)

    def subfield_of(self, x: int) -> int:
        """Degree over F_p of the subfield generated by x."""
        if x == 0:
            return 1
        y, d = self.pow(x, self.p), 1
        while y != x:
            y, d = self.pow(y, self.p), d + 1
        return d

    def roots(self, f: Sequence[int]) -> list[int]:
        """Roots in F_q of an integer polynomial (lowest degree first)."""
        fp = polys.mod_p(list(f), self.p)
        out = []
        for x in range(self.q):
            acc = 0
            for c in reversed(fp):
                acc = self.add(self.mul(acc, x), c)
            if acc == 0:
                out.append(x)
        return out


def gf_arith(F: GFq, a: int, b: int, op: str) -> int:
    return {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div}[op](a, b)


def gf_sqrt(F: GFq, a: int) -> int | None:
    return F.sqrt(a)


@lru_cache(maxsize=None)
def gfq(p: int, defining: tuple[int, ...]) -> GFq:
    return GFq(p, defining)


# ---------------------------------------------------------------- PSL2

Mat = tuple[int, int, int, int]


class PSL2:
    """PSL2(F_q) on canonical 4-tuples: first nonzero entry is the smaller of {v, -v}."""

    def __init__(self, F: GFq):
        self.F = F
        self.identity: Mat = (1, 0, 0, 1)
        self._order_n = F.q * (F.q * F.q - 1) // 2
        self._order_primes = sorted(factorize(self._order_n))

    def __repr__(self) -> str:
        return f"PSL2({self.F.q})"

    @property
    def size(self) -> int:
        return self._order_n

    def canon(self, m: Sequence[int]) -> Mat:
        neg = self.F._neg
        a, b, c, d = m
        lead = a or b or c
        if lead == 0:
            lead = d
        if neg[lead] < lead:
            return (neg[a], neg[b], neg[c], neg[d])
        return (a, b, c, d)

    def raw_mul(self, m: Sequence[int], n: Sequence[int]) -> Mat:
        F = self.F
        mul, add = F.mul, F.add
        a, b, c, d = m
        e, f, g, h = n
        return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
                add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))

    def mul(self, m: Mat, n: Mat) -> Mat:
        return self.canon(self.raw_mul(m, n))

    def inv(self, m: Mat) -> Mat:
        neg = self.F._neg
        a, b, c, d = m
        return self.canon((d, neg[b], neg[c], a))

    def det(self, m: Sequence[int]) -> int:
        F = self.F
        return F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2]))

    def make(self, m: Sequence[int]) -> Mat:
        m = tuple(x % self.F.q for x in m)
        if self.det(m) != 1:
            raise GroupError("matrix does not have determinant 1")
        return self.canon(m)

    def pow(self, m: Mat, e: int) -> Mat:
        if e < 0:
            m, e = self.inv(m), -e
        r = self.identity
        while e:
            if e & 1:
                r = self.mul(r, m)
            m = self.mul(m, m)
            e >>= 1
        return r

    def order(self, m: Mat) -> int:
        n = self._order_n
        for r in self._order_primes:
            while n % r == 0 and self.pow(m, n // r) == self.identity:
                n //= r
        return n

    def trace(self, m: Mat) -> int:
        """Trace up to sign, as the canonical representative of {t, -t}."""
        return self.F.canon_sign(self.F.add(m[0], m[3]))

    def elements(self) -> list[Mat]:
        """All of PSL2(F_q), enumerated (small q only)."""
        F = self.F
        out = set()
        for a, b, c in product(range(1, F.q), range(F.q), range(F.q)):
            d = F.div(F.add(1, F.mul(b, c)), a)
            out.add(self.canon((a, b, c, d)))
        for b, d in product(range(1, F.q), range(F.q)):
            out.add(self.canon((0, b, F.neg(F.inv(b)), d)))
        return sorted(out)


def projmat_ops(G: PSL2, m: Mat, n: Mat | None, op: str):
    if op == "mul":
        return G.mul(m, n)
    if op == "inv":
        return G.inv(m)
    if op == "order":
        return G.order(m)
    if op == "trace_up_to_sign":
        return G.trace(m)
    raise ValueError(op)


def subgroup_closure(G: PSL2, gens: Sequence[Mat], cap: int = 10 ** 6) -> set[Mat]:
    seen = {G.identity}
    frontier = [G.identity]
    gens = [G.canon(g) for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = G.mul(h, g)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeds cap {cap}")
                    nxt.append(k)
        frontier = nxt
    return seen


# ---------------------------------------------------------------- classes and traces

def kappa(n: int, q: int) -> int:
    """Number of conjugacy classes of PSL2(F_q) of element order n."""
    p, _ = _prime_power(q)
    if p == 2:
        raise GroupError("characteristic 2 is not supported")
    if n % p == 0:
        raise GroupError(f"order {n} is divisible by the characteristic {p}")
    if n in (1, 2):
        return 1
    # eigenvalues must lie in the split or the non-split torus
    if (q - 1) % (2 * n) and (q + 1) % (2 * n):
        return 0
    if n % 2:
        return totient(n) // 2
    return totient(2 * n) // 4


def order_class_traces(n: int, F: GFq) -> set[int]:
    """Traces (up to sign) of the elements of order n in PSL2(F_q)."""
    if kappa(n, F.q) == 0:
        return set()
    if n == 1:
        return {F.canon_sign(2 % F.p)}
    return {F.canon_sign(r) for r in F.roots(polys.min_poly_2cos(n))}


def commutative_test(F: GFq, t: Sequence[int]) -> bool:
    t1, t2, t3 = t
    s = F.add(F.add(F.mul(t1, t1), F.mul(t2, t2)), F.mul(t3, t3))
    s = F.sub(s, F.mul(F.mul(t1, t2), t3))
    return F.sub(s, 4 % F.p) == 0


_EXCEPTIONAL = {(2, 3, 3), (2, 3, 4), (2, 3, 5), (2, 5, 5), (3, 3, 3), (3, 3, 5), (3, 4, 4), (3, 5, 5), (5, 5, 5)}


def exceptional_test(orders: Sequence[int]) -> bool:
    o = tuple(sorted(orders))
    return (o[0] == 2 and o[1] == 2) or o in _EXCEPTIONAL


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _is_hyperbolic(o: Sequence[int]) -> bool:
    return sum(1 / x for x in o) < 1 - 1e-12


def omega(tau: Sequence[int], q: int) -> list[tuple[int, int, int]]:
    """Over-approximation of the realizable order triples (unsorted, positions of tau)."""
    a, b, c = tau
    out = []
    for t in product(_divisors(a), _divisors(b), _divisors(c)):
        if min(t) < 2 or not _is_hyperbolic(t):
            continue
        if all(kappa(n, q) > 0 for n in t):
            out.append(t)
    return out


def _lifts(F: GFq, t: Sequence[int]):
    for signs in product((1, -1), repeat=3):
        yield tuple(x if s == 1 else F.neg(x) for x, s in zip(t, signs))


def count_bound(tau: Sequence[int], p: int, F: GFq | None = None) -> int | str:
    """Upper bound on the number of normal subgroups with quotient K(tau; p).

    F is the residue field of a prime of the trace field above p (the group
    K(tau; p) sits in PSL2 of it).  Returns "unavailable" when the hypotheses
    cannot be verified.
    """
    if p == 2 or any(s % p == 0 for s in tau):
        return "unavailable"
    if F is None:
        from .exactfield import field_build, prime_decompose
        Fd, _ = field_build(tau)
        P = prime_decompose(Fd, p)[0]
        F = GFq(p, P.factor)
    q = F.q
    total = 0
    for t in omega(tau, q):
        tr_sets = [sorted(order_class_traces(n, F)) for n in t]
        for tt in product(*tr_sets):
            if any(commutative_test(F, lift) for lift in _lifts(F, tt)):
                return "unavailable"
            if exceptional_test(t):
                return "unavailable"
            gen_deg = 1
            for x in tt:
                d = F.subfield_of(x)
                gen_deg = gen_deg * d // gcd(gen_deg, d)
            if gen_deg != F.f:
                return "unavailable"
        mult = 1 if min(t) == 2 else 2
        total += mult * kappa(t[0], q) * kappa(t[1], q) * kappa(t[2], q)
    return total


# ---------------------------------------------------------------- PGL2 -> PSL2

@dataclass
class QuadraticExtension:
    base: GFq
    ext: GFq
    embed_table: list[int]

    def embed(self, x: int) -> int:
        return self.embed_table[x]


@lru_cache(maxsize=None)
def quadratic_extension(base: GFq) -> QuadraticExtension:
    ext = GFq(base.p, find_irreducible(base.p, 2 * base.f))
    if base.f == 1:
        table = list(range(base.p))
    else:
        roots = ext.roots(list(base.defining))
        t = min(roots)
        table = []
        for x in range(base.q):
            acc = 0
            for c in reversed(base.coeffs(x)):
                acc = ext.add(ext.mul(acc, t), c)
            table.append(acc)
    return QuadraticExtension(base, ext, table)


def pgl_to_psl(base: GFq, g: Sequence[int]) -> tuple[PSL2, Mat]:
    """g -> g / sqrt(det g) in PSL2 over the quadratic extension."""
    qe = quadratic_extension(base)
    E = qe.ext
    m = [qe.embed(x) for x in g]
    det = E.sub(E.mul(m[0], m[3]), E.mul(m[1], m[2]))
    if det == 0:
        raise GroupError("singular matrix")
    s = E.sqrt(det)
    si = E.inv(s)
    G = psl2(E)
    return G, G.canon(tuple(E.mul(x, si) for x in m))


@lru_cache(maxsize=None)
def psl2(F: GFq) -> PSL2:
    return PSL2(F)


# ---------------------------------------------------------------- trace triples

def sl2_with_trace(F: GFq, t: int) -> list[Mat]:
    """All matrices of SL2(F_q) with trace t (small q)."""
    out = []
    for a in range(F.q):
        d = F.sub(t, a)
        ad1 = F.sub(F.mul(a, d), 1)  # = bc
        for b in range(F.q):
            if b:
                out.append((a, b, F.div(ad1, b), d))
            elif ad1 == 0:
                for c in range(F.q):
                    out.append((a, 0, c, d))
    return out


def _sl_mul(F: GFq, m, n) -> Mat:
    mul, add = F.mul, F.add
    a, b, c, d = m
    e, f, g, h = n
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def _sl_inv(F: GFq, m) -> Mat:
    a, b, c, d = m
    return (d, F.neg(b), F.neg(c), a)


def solve_trace_triple(F: GFq, t: Sequence[int], seed: int = 0, limit: int | None = None,
                       exhaustive: bool | None = None) -> list[tuple[Mat, Mat, Mat]]:
    """Triples (g1, g2, g3) in SL2(F_q) with g1 g2 g3 = 1 and tr g_i = t_i."""
    t1, t2, t3 = t
    if exhaustive is None:
        exhaustive = F.q <= 13
    out = []
    if exhaustive:
        c1 = sl2_with_trace(F, t1)
        c2 = sl2_with_trace(F, t2)
        for g1 in c1:
            for g2 in c2:
                g12 = _sl_mul(F, g1, g2)
                if F.add(g12[0], g12[3]) == t3:
                    out.append((g1, g2, _sl_inv(F, g12)))
                    if limit and len(out) >= limit:
                        return out
        return out
    rng = random.Random(seed)
    want = limit or 1
    attempts = 0
    while len(out) < want:
        attempts += 1
        if attempts > 200 * F.q * F.q:
            raise GroupError("trace triple search failed")
        g1 = _random_with_trace(F, t1, rng)
        g2 = _random_with_trace(F, t2, rng)
        g12 = _sl_mul(F, g1, g2)
        if F.add(g12[0], g12[3]) == t3:
            out.append((g1, g2, _sl_inv(F, g12)))
    return out


def _random_with_trace(F: GFq, t: int, rng: random.Random) -> Mat:
    while True:
        a = rng.randrange(F.q)
        b = rng.randrange(1, F.q)
        d = F.sub(t, a)
        c = F.div(F.sub(F.mul(a, d), 1), b)
        return (a, b, c, d)
