"""Quaternion algebras and the explicit orders attached to a triangle group."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

import mpmath

from .exactfield import (FieldDesc, FieldElem, PrimeIdeal, SubfieldDesc, check_triple,
                         field_build, embed_real, sign_at)
from .fingroup import GFq, PSL2, gfq, psl2
from .words import Word


class QuatError(ValueError):
    pass


class BadPrime(QuatError):
    pass


@dataclass(frozen=True, eq=False)
class QuatAlg:
    """<x, y | base>: i^2 = x, j^2 = y, ij = -ji."""

    base: FieldDesc
    x_param: FieldElem
    y_param: FieldElem

    def __post_init__(self):
        if self.x_param.is_zero() or self.y_param.is_zero():
            raise QuatError("algebra parameters must be nonzero")

    def quat(self, c0=0, c1=0, c2=0, c3=0) -> Quat:
        F = self.base
        cs = tuple(c if isinstance(c, FieldElem) else F.const(c) for c in (c0, c1, c2, c3))
        return Quat(self, cs)

    @cached_property
    def one(self) -> Quat:
        return self.quat(1)

    @cached_property
    def xy(self) -> FieldElem:
        return self.x_param * self.y_param


class Quat:
    __slots__ = ("alg", "c")

    def __init__(self, alg: QuatAlg, c: tuple[FieldElem, FieldElem, FieldElem, FieldElem]):
        self.alg = alg
        self.c = c

    def _check(self, other: Quat) -> None:
        if other.alg is not self.alg:
            raise QuatError("algebra mismatch")

    def __add__(self, other: Quat) -> Quat:
        self._check(other)
        return Quat(self.alg, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: Quat) -> Quat:
        self._check(other)
        return Quat(self.alg, tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> Quat:
        return Quat(self.alg, tuple(-a for a in self.c))

    def scale(self, s) -> Quat:
        return Quat(self.alg, tuple(a * s for a in self.c))

    def __mul__(self, other):
        if not isinstance(other, Quat):
            return self.scale(other)
        self._check(other)
        x, y, xy = self.alg.x_param, self.alg.y_param, self.alg.xy
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        c0 = a0 * b0 + x * (a1 * b1) + y * (a2 * b2) - xy * (a3 * b3)
        c1 = a0 * b1 + a1 * b0 + y * (a3 * b2 - a2 * b3)
        c2 = a0 * b2 + a2 * b0 + x * (a1 * b3 - a3 * b1)
        c3 = a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1
        return Quat(self.alg, (c0, c1, c2, c3))

    __rmul__ = scale

    def conj(self) -> Quat:
        a0, a1, a2, a3 = self.c
        return Quat(self.alg, (a0, -a1, -a2, -a3))

    def trd(self) -> FieldElem:
        return self.c[0] * 2

    def nrd(self) -> FieldElem:
        x, y, xy = self.alg.x_param, self.alg.y_param, self.alg.xy
        a0, a1, a2, a3 = self.c
        return a0 * a0 - x * (a1 * a1) - y * (a2 * a2) + xy * (a3 * a3)

    def inverse(self) -> Quat:
        n = self.nrd()
        if n.is_zero():
            raise QuatError("quaternion is not invertible")
        return self.conj().scale(n.inverse())

    def __pow__(self, e: int) -> Quat:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = self.alg.one
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Quat) and other.alg is self.alg and other.c == self.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return "Quat(" + ", ".join(c.pretty() for c in self.c) + ")"

    def to_json(self) -> dict:
        return {"basis": "1,i,j,ij", "coords": [c.to_json() for c in self.c]}


def quat_arith(u: Quat, v: Quat | None, op: str):
    if op == "mul":
        return u * v
    if op == "conj":
        return u.conj()
    if op == "trd":
        return u.trd()
    if op == "nrd":
        return u.nrd()
    if op == "inv":
        return u.inverse()
    raise ValueError(op)


# ---------------------------------------------------------------- the order O_tau

def _cosines(F: FieldDesc, tau) -> dict[int, FieldElem]:
    return {s: F.named[f"2cos(pi/{s})"] / 2 for s in tau}


def delta_of(tau: Sequence[int]) -> FieldElem:
    a, b, c = check_triple(tau)
    F, _ = field_build((a, b, c))
    cs = _cosines(F, (a, b, c))
    ca, cb, cc = cs[a], cs[b], cs[c]
    return (ca * ca + cb * cb + cc * cc + ca * cb * cc * 2 - 1) * 4


def _mat_inverse(m: list[list[FieldElem]]) -> list[list[FieldElem]]:
    n = len(m)
    F = m[0][0].field
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if not aug[r][col].is_zero())
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _det(m: list[list[FieldElem]]) -> FieldElem:
    n = len(m)
    F = m[0][0].field
    a = [list(r) for r in m]
    det = F.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            return F.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if not a[r][col].is_zero():
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


class TriangleOrder:
    """O_tau with O_F-basis (1, alpha, beta, alpha*beta) inside B_tau = <4cos^2(pi/a) - 4, delta>."""

    def __init__(self, tau: Sequence[int]):
        a, b, c = check_triple(tau)
        self.tau = (a, b, c)
        F, E = field_build(self.tau)
        self.F, self.E = F, E
        self.cos = _cosines(F, self.tau)
        ca, cb, cc = self.cos[a], self.cos[b], self.cos[c]
        self.delta = delta_of(self.tau)
        self.alg = QuatAlg(F, ca * ca * 4 - 4, self.delta)
        den = ca * ca - 1
        self.alpha = self.alg.quat(ca, Fraction(1, 2), 0, 0)
        self.beta = self.alg.quat(cb, -(ca * cb + cc) / (den * 2), 0, (den * 4).inverse())
        self.basis = (self.alg.one, self.alpha, self.beta, self.alpha * self.beta)
        # columns are the (1, i, j, ij) coordinates of the basis elements
        self.basis_mat = [[self.basis[col].c[row] for col in range(4)] for row in range(4)]
        self.basis_mat_inv = _mat_inverse(self.basis_mat)
        self.ab_c_sign = 1 if (self.basis[3] ** c) == self.alg.one else -1

    def __repr__(self) -> str:
        return f"TriangleOrder{self.tau}"

    def coords(self, q: Quat) -> tuple[FieldElem, ...]:
        m = self.basis_mat_inv
        return tuple(sum((m[r][k] * q.c[k] for k in range(1, 4)), m[r][0] * q.c[0]) for r in range(4))

    def from_coords(self, v: Sequence[FieldElem]) -> Quat:
        out = self.basis[0].scale(v[0])
        for k in range(1, 4):
            out = out + self.basis[k].scale(v[k])
        return out

    @cached_property
    def structure(self) -> list[list[tuple[FieldElem, ...]]]:
        """C[a][b] = coordinates of e_a * e_b in the order basis."""
        return [[self.coords(ea * eb) for eb in self.basis] for ea in self.basis]

    @cached_property
    def nrd_form(self) -> list[list[FieldElem]]:
        """Symmetric matrix B with nrd(sum v_k e_k) = sum_kl B_kl v_k v_l."""
        return [[(ek * el.conj()).trd() / 2 for el in self.basis] for ek in self.basis]

    def word_eval(self, w: Word) -> Quat:
        out = self.alg.one
        ainv, binv = self.alpha.conj(), self.beta.conj()
        for base, e in w.tokens:
            g = (self.alpha if e > 0 else ainv) if base == "x" else (self.beta if e > 0 else binv)
            for _ in range(abs(e)):
                out = out * g
        return out

    @cached_property
    def integral_basis_mats(self) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
        """Right multiplication by alpha and beta on Q-coordinates (order coord k, power m)."""
        d = self.F.degree
        mats = []
        for g in (self.alpha, self.beta):
            cols = []
            for k in range(4):
                for m in range(d):
                    e = self.basis[k].scale(self.F.gen ** m if d > 1 else self.F.one) * g
                    v = self.coords(e)
                    cols.append([c for vk in v for c in vk.coeffs])
            mats.append([[cols[j][i] for j in range(4 * d)] for i in range(4 * d)])
        return mats[0], mats[1]


_ORDER_CACHE: dict[tuple[int, int, int], TriangleOrder] = {}


def build_order(tau: Sequence[int]) -> TriangleOrder:
    key = check_triple(tau)
    if key not in _ORDER_CACHE:
        _ORDER_CACHE[key] = TriangleOrder(key)
    return _ORDER_CACHE[key]


def word_eval(w: Word, O: TriangleOrder) -> Quat:
    return O.word_eval(w)


def coords_in_order(q: Quat, O: TriangleOrder) -> tuple[FieldElem, ...]:
    return O.coords(q)


def order_reduced_discriminant(O: TriangleOrder) -> tuple[FieldElem, FieldElem]:
    """(delta, det(trd(e_i conj(e_j)))); the determinant is a unit times delta^2."""
    gram = [[(ei * ej.conj()).trd() for ej in O.basis] for ei in O.basis]
    return O.delta, _det(gram)


def field_norm(x: FieldElem) -> Fraction:
    """Norm to Q: determinant of multiplication by x on the power basis."""
    F = x.field
    d = F.degree
    basis = [F.gen ** k if d > 1 else F.one for k in range(d)]
    cols = [list((x * e).coeffs) for e in basis]
    return _rational_det([[cols[j][i] for j in range(d)] for i in range(d)])


def _rational_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [[Fraction(v) for v in r] for r in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


# ---------------------------------------------------------------- even order

@dataclass
class EvenOrderData:
    tau: tuple[int, int, int]
    algebra: QuatAlg
    gamma1: Quat
    gamma2: Quat


def even_order(tau: Sequence[int]) -> EvenOrderData:
    a, b, c = check_triple(tau)
    F, E = field_build((a, b, c))
    cs = _cosines(F, (a, b, c))
    ca, cb, cc = cs[a], cs[b], cs[c]
    delta = delta_of((a, b, c))
    r = E.restrict
    P = r(cb * cb * (cb * cb - 1) * 16)
    Q = r(delta * cb * cb * cc * cc * 16)
    alg = QuatAlg(E.field, P, Q)
    c2b = r(cb * cb * 2 - 1)
    c2c = r(cc * cc * 2 - 1)
    prod = r(ca * cb * cc)
    den = 1 - c2b * c2b
    g1 = alg.quat(c2b, Fraction(1, 2), 0, 0)
    g2 = alg.quat(c2c, (c2b + c2b * c2c + c2c + prod * 4 + 1) / (den * 2), 0, (den * 4).inverse())
    return EvenOrderData((a, b, c), alg, g1, g2)


def r_tau(tau: Sequence[int]) -> int:
    """Number of real places of E at which A_tau splits."""
    data = even_order(tau)
    x, y = data.algebra.x_param, data.algebra.y_param
    n = 0
    for k in range(data.algebra.base.degree):
        if not (sign_at(x, k) < 0 and sign_at(y, k) < 0):
            n += 1
    return n


# ---------------------------------------------------------------- splitting mod a prime

@dataclass
class SplitData:
    prime: PrimeIdeal
    gfq: GFq
    seed: int
    rho: list[tuple[int, int, int, int]]  # images of the order basis
    img_alpha: tuple[int, int, int, int]
    img_beta: tuple[int, int, int, int]
    img_i: tuple[int, int, int, int] | None = None
    img_j: tuple[int, int, int, int] | None = None
    structure: list = dc_field(default_factory=list, repr=False)

    @property
    def group(self) -> PSL2:
        return psl2(self.gfq)

    def reduce_coords(self, v: Sequence[FieldElem]) -> list[int]:
        F = self.gfq
        return [F.from_coeffs(self.prime.reduce(x)) for x in v]

    def rho_of(self, v: Sequence[int]) -> tuple[int, int, int, int]:
        F = self.gfq
        out = [0, 0, 0, 0]
        for k in range(4):
            if v[k]:
                for t in range(4):
                    out[t] = F.add(out[t], F.mul(v[k], self.rho[k][t]))
        return tuple(out)

    def to_json(self) -> dict:
        return {"prime": self.prime.to_json(), "seed": self.seed,
                "img_alpha": list(self.img_alpha), "img_beta": list(self.img_beta)}


def _reduce(x: FieldElem, P: PrimeIdeal, F: GFq) -> int:
    try:
        return F.from_coeffs(P.reduce(x))
    except ZeroDivisionError:
        raise BadPrime(f"denominator divisible by {P.p}") from None


def _rref(rows: list[list[int]], F: GFq) -> tuple[list[list[int]], list[int]]:
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.mul(v, inv) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [F.sub(u, F.mul(f, w)) for u, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def split_order_mod(O: TriangleOrder, P: PrimeIdeal, seed: int = 0) -> SplitData:
    """Isomorphism O/PO -> M_2(O_F/P) by left multiplication on a minimal left ideal."""
    if P.p == 2:
        raise BadPrime("residue characteristic 2")
    if P.field is not O.F:
        raise BadPrime("prime is not a prime of the trace field")
    F = gfq(P.p, P.factor)
    if _reduce(O.delta, P, F) == 0:
        raise BadPrime("prime divides delta")
    C = [[[_reduce(x, P, F) for x in O.structure[a][b]] for b in range(4)] for a in range(4)]
    B = [[_reduce(x, P, F) for x in row] for row in O.nrd_form]

    def lmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
        out = [0, 0, 0, 0]
        for i in range(4):
            if a[i]:
                for j in range(4):
                    if b[j]:
                        s = F.mul(a[i], b[j])
                        cij = C[i][j]
                        for k in range(4):
                            if cij[k]:
                                out[k] = F.add(out[k], F.mul(s, cij[k]))
        return out

    rng = random.Random(seed)
    two = 2 % F.p
    for _ in range(10000):
        v = [rng.randrange(F.q) for _ in range(3)]
        quad = B[3][3]
        lin = 0
        const = 0
        for k in range(3):
            lin = F.add(lin, F.mul(F.mul(two, B[k][3]), v[k]))
            for l in range(3):
                const = F.add(const, F.mul(F.mul(B[k][l], v[k]), v[l]))
        if quad == 0:
            continue
        disc = F.sub(F.mul(lin, lin), F.mul(F.mul(4 % F.p, quad), const))
        s = F.sqrt(disc)
        if s is None:
            continue
        v3 = F.div(F.sub(s, lin), F.mul(two, quad))
        z = v + [v3]
        if not any(z):
            continue
        gens = [lmul([1 if t == k else 0 for t in range(4)], z) for k in range(4)]
        basis, piv = _rref(gens, F)
        if len(basis) != 2:
            continue
        break
    else:
        raise BadPrime("no zero divisor found")

    def action(a: Sequence[int]) -> tuple[int, int, int, int]:
        cols = []
        for l in basis:
            w = lmul(a, l)
            cols.append([w[piv[0]], w[piv[1]]])
        return (cols[0][0], cols[1][0], cols[0][1], cols[1][1])

    rho = [action([1 if t == k else 0 for t in range(4)]) for k in range(4)]
    G = psl2(F)
    for k in (1, 2, 3):
        if G.det(rho[k]) != 1:
            raise BadPrime("splitting failed: determinant is not 1")
    img_i = img_j = None
    try:
        iv = O.coords(O.alg.quat(0, 1, 0, 0))
        jv = O.coords(O.alg.quat(0, 0, 1, 0))
        sd = SplitData(P, F, seed, rho, rho[1], rho[2])
        img_i = sd.rho_of([_reduce(x, P, F) for x in iv])
        img_j = sd.rho_of([_reduce(x, P, F) for x in jv])
    except BadPrime:
        pass
    return SplitData(P, F, seed, rho, G.canon(rho[1]), G.canon(rho[2]), img_i, img_j, C)


# ---------------------------------------------------------------- real embeddings

def iota_numeric(tau: Sequence[int], bits: int = 53):
    """Interval matrices for iota(x), iota(y) (larger root t of the quadratic)."""
    a, b, c = check_triple(tau)
    iv = mpmath.iv
    old = iv.prec
    iv.prec = bits + 10
    try:
        pi = iv.pi
        ca, sa = iv.cos(pi / a), iv.sin(pi / a)
        cb, sb = iv.cos(pi / b), iv.sin(pi / b)
        cc = iv.cos(pi / c)
        h = (ca * cb + cc) / (sa * sb)
        t = h + iv.sqrt(h * h - 1)
        X = iv.matrix([[ca, sa], [-sa, ca]])
        Y = iv.matrix([[cb, sb * t], [-sb / t, cb]])
        return X, Y
    finally:
        iv.prec = old


def real_rep(O: TriangleOrder, prec: int = 53):
    """2x2 real matrices (mpmath) of i and j under the distinguished embedding."""
    with mpmath.workprec(prec + 20):
        x0 = mpmath.mpf(sum(embed_real(O.alg.x_param, O.F.distinguished, prec + 20))) / 2
        y0 = mpmath.mpf(sum(embed_real(O.alg.y_param, O.F.distinguished, prec + 20))) / 2
        s = mpmath.sqrt(y0)
        I = mpmath.matrix([[0, x0], [1, 0]])
        J = mpmath.matrix([[s, 0], [0, -s]])
        return I, J


def quat_real_matrix(q: Quat, O: TriangleOrder, prec: int = 53):
    I, J = real_rep(O, prec)
    with mpmath.workprec(prec + 20):
        cs = [mpmath.mpf(sum(embed_real(c, O.F.distinguished, prec + 20))) / 2 for c in q.c]
        return cs[0] * mpmath.eye(2) + cs[1] * I + cs[2] * J + cs[3] * (I * J)
