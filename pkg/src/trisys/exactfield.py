"""Exact arithmetic in the totally real fields attached to a triangle group.

The field F generated by 2cos(pi/a), 2cos(pi/b), 2cos(pi/c) and its subfield E
generated by the squares and the triple product are built inside the real
cyclotomic field Q(2cos(pi/L)), L = lcm(a, b, c).  Elements are stored in the
power basis of a primitive element with rational coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

import mpmath
from mpmath.libmp import from_rational, round_ceiling, round_floor

from . import polys


class FieldError(ValueError):
    pass


class UnsupportedPrime(FieldError):
    pass


def is_hyperbolic(tau: Sequence[int]) -> bool:
    a, b, c = tau
    return Fraction(1, a) + Fraction(1, b) + Fraction(1, c) < 1


def check_triple(tau: Sequence[int]) -> tuple[int, int, int]:
    if len(tau) != 3:
        raise FieldError("a triple (a, b, c) is required")
    try:
        a, b, c = sorted(int(t) for t in tau)
    except (TypeError, ValueError, OverflowError):
        raise FieldError(f"components must be finite integers: {tau!r}") from None
    if a < 2:
        raise FieldError("components must be >= 2")
    if not is_hyperbolic((a, b, c)):
        kind = "Euclidean" if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) == 1 else "spherical"
        raise FieldError(f"triple {(a, b, c)} is {kind}, not hyperbolic")
    return a, b, c


# ---------------------------------------------------------------- fields

class FieldDesc:
    """A totally real number field Q[x]/(min_poly) with isolated real roots."""

    def __init__(self, min_poly: Sequence[int], distinguished_value: mpmath.mpf | None = None,
                 symbol: str = "u", name: str = ""):
        self.min_poly = tuple(int(c) for c in min_poly)
        if self.min_poly[-1] != 1:
            raise FieldError("minimal polynomial must be monic")
        self.degree = len(self.min_poly) - 1
        self.symbol = symbol
        self.name = name
        self.roots = tuple(polys.isolate_real_roots(list(self.min_poly)))
        if len(self.roots) != self.degree:
            raise FieldError("field is not totally real")
        self.distinguished = 0 if distinguished_value is None else self._locate(distinguished_value)
        self.named: dict[str, FieldElem] = {}
        # x^k mod min_poly for k in [d, 2d-2]
        d = self.degree
        red = []
        cur = [Fraction(-c) for c in self.min_poly[:-1]]  # x^d
        for _ in range(max(d - 1, 0)):
            red.append(cur)
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            nxt = [nxt[i] - top * self.min_poly[i] for i in range(d)]
            cur = nxt
        red.append(cur)
        self._red = red

    def _locate(self, value: mpmath.mpf) -> int:
        f = list(self.min_poly)
        width = Fraction(1, 2 ** 20)
        hits = []
        for k, (lo, hi) in enumerate(self.roots):
            lo, hi = polys.refine_root(f, lo, hi, width)
            if mpmath.mpf(lo.numerator) / lo.denominator - mpmath.mpf(2) ** -18 <= value <= \
                    mpmath.mpf(hi.numerator) / hi.denominator + mpmath.mpf(2) ** -18:
                hits.append(k)
        if len(hits) != 1:
            raise FieldError("could not identify the distinguished root")
        return hits[0]

    def __repr__(self) -> str:
        return f"FieldDesc({self.name or self.min_poly})"

    @cached_property
    def discriminant(self) -> int:
        return polys.resultant_disc(list(self.min_poly))

    def elem(self, coeffs: Iterable) -> FieldElem:
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > self.degree:
            _, r = polys.divmod_q(cs, list(self.min_poly))
            cs = r
        cs = cs + [Fraction(0)] * (self.degree - len(cs))
        return FieldElem(self, tuple(cs))

    def const(self, c) -> FieldElem:
        return self.elem([c])

    @cached_property
    def zero(self) -> FieldElem:
        return self.const(0)

    @cached_property
    def one(self) -> FieldElem:
        return self.const(1)

    @cached_property
    def gen(self) -> FieldElem:
        return self.elem([0, 1]) if self.degree > 1 else self.elem([-self.min_poly[0]])

    def _reduce(self, prod: list) -> tuple[Fraction, ...]:
        d = self.degree
        out = list(prod[:d]) + [Fraction(0)] * (d - min(len(prod), d))
        for k in range(d, len(prod)):
            c = prod[k]
            if c:
                row = self._red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def parse(self, text: str, aliases: Iterable[str] = ()) -> FieldElem:
        """Parse an integer polynomial in the field generator, e.g. ``"2*u^2+u-1"``."""
        return _parse_poly(self, text, {self.symbol, *aliases})


class FieldElem:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldDesc, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldError("field mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return FieldElem(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid over Q
        f = [Fraction(c) for c in self.field.min_poly]
        g = polys.trim(list(self.coeffs))
        r0, r1 = f, g
        s0, s1 = [], [Fraction(1)]
        while polys.degree(r1) > 0:
            q, r = polys.divmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, polys.sub(s0, polys.mul(q, s1))
        c = r1[0]
        return self.field.elem([x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElem(self.field, tuple(a / other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, FieldElem):
            return other.field is self.field and other.coeffs == self.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral_poly(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs))

    def __float__(self) -> float:
        return float(self.embed(self.field.distinguished, 64)[0])

    def __repr__(self) -> str:
        return f"FieldElem({self.pretty()})"

    def pretty(self, symbol: str | None = None) -> str:
        return pretty_poly(self.coeffs, symbol or self.field.symbol)

    def embed(self, root_index: int | None = None, bits: int = 53) -> tuple[mpmath.mpf, mpmath.mpf]:
        return embed_real(self, self.field.distinguished if root_index is None else root_index, bits)

    def sign(self, root_index: int | None = None) -> int:
        return sign_at(self, self.field.distinguished if root_index is None else root_index)

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]


def elem_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if a.field is not b.field:
        raise FieldError("field mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def pretty_poly(coeffs: Sequence, symbol: str = "u") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[k])
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = symbol if k == 1 else f"{symbol}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for s, body in terms[1:]:
        out += s + body
    return out


def field_elem_from_json(field: FieldDesc, data: Sequence[str]) -> FieldElem:
    return field.elem(Fraction(s) for s in data)


def _parse_poly(field: FieldDesc, text: str, symbols: set[str]) -> FieldElem:
    s = text.replace(" ", "").replace("**", "^").replace("−", "-")
    if s.startswith("(") and s.endswith(")") and s.count("(") == 1:
        s = s[1:-1]
    if not s:
        raise FieldError("empty polynomial")
    terms = []
    i, sign, cur = 0, 1, ""
    for ch in s:
        if ch in "+-" and cur:
            terms.append((sign, cur))
            cur = ""
            sign = 1 if ch == "+" else -1
        elif ch in "+-":
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
    terms.append((sign, cur))
    coeffs: dict[int, int] = {}
    for sgn, t in terms:
        if not t:
            raise FieldError(f"cannot parse {text!r}")
        sym = next((y for y in sorted(symbols, key=len, reverse=True) if y in t), None)
        if sym is None:
            c, k = t, 0
        else:
            pre, _, post = t.partition(sym)
            pre = pre.rstrip("*")
            c = pre if pre else "1"
            if post.startswith("^"):
                k = post[1:]
            elif post == "":
                k = 1
            else:
                raise FieldError(f"cannot parse {text!r}")
        try:
            cval, kval = int(c), int(k)
        except ValueError:
            raise FieldError(f"cannot parse {text!r}") from None
        coeffs[kval] = coeffs.get(kval, 0) + sgn * cval
    n = max(coeffs) + 1
    return field.elem([coeffs.get(k, 0) for k in range(n)])


# ---------------------------------------------------------------- embeddings

def _interval_horner(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    alo = ahi = Fraction(0)
    for c in reversed(coeffs):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def _to_mpf(x: Fraction, prec: int, rnd) -> mpmath.mpf:
    # make_mpf keeps the directed rounding; mpf(raw) would round again at the context precision
    return mpmath.mp.make_mpf(from_rational(x.numerator, x.denominator, prec, rnd))


_ROOT_CACHE: dict[tuple, tuple[Fraction, Fraction]] = {}


def root_interval(field: FieldDesc, root_index: int, width: Fraction) -> tuple[Fraction, Fraction]:
    key = (field.min_poly, root_index)
    lo, hi = _ROOT_CACHE.get(key, field.roots[root_index])
    if hi - lo > width:
        lo, hi = polys.refine_root(list(field.min_poly), lo, hi, width)
        _ROOT_CACHE[key] = (lo, hi)
    return lo, hi


def embed_real(x: FieldElem, root_index: int, bits: int = 53) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Enclosing interval of width <= 2^(1-bits) for x under the chosen real embedding."""
    field = x.field
    if not 0 <= root_index < field.degree:
        raise IndexError("root index out of range")
    target = Fraction(2) ** (1 - bits)
    if x.is_rational():
        c = x.coeffs[0]
        return _to_mpf(c, bits + 8, round_floor), _to_mpf(c, bits + 8, round_ceiling)
    extra = 8
    while True:
        lo, hi = root_interval(field, root_index, Fraction(1, 2 ** (bits + extra)))
        vlo, vhi = _interval_horner(x.coeffs, lo, hi)
        if vhi - vlo <= target / 2:
            break
        extra += 16
    prec = bits + 8
    return _to_mpf(vlo, prec, round_floor), _to_mpf(vhi, prec, round_ceiling)


def sign_at(x: FieldElem, root_index: int) -> int:
    """Exact sign of x under a real embedding (0 only for x == 0)."""
    if x.is_zero():
        return 0
    bits = 32
    while True:
        lo, hi = embed_real(x, root_index, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def real_embeddings(x: FieldElem, bits: int = 53) -> list[float]:
    return [float(mpmath.mpf(sum(embed_real(x, k, bits))) / 2) for k in range(x.field.degree)]


# ---------------------------------------------------------------- construction

class _Ambient:
    """Q(eta), eta = 2cos(pi/L), with its Galois action eta -> D_k(eta)."""

    def __init__(self, L: int):
        self.L = L
        self.min_poly = polys.min_poly_2cos(L)
        self.D = len(self.min_poly) - 1
        self.galois = [k for k in range(1, 2 * L, 2) if gcd(k, 2 * L) == 1 and k < L] or [1]

    def reduce(self, f: list) -> list[Fraction]:
        _, r = polys.divmod_q(f, self.min_poly) if len(f) > self.D else ([], [Fraction(c) for c in f])
        r = list(r) + [Fraction(0)] * (self.D - len(r))
        return r[: self.D]

    def two_cos(self, n: int, m: int = 1) -> list[Fraction]:
        """2cos(m*pi/n) for n | L."""
        return self.reduce(polys.dickson(m * self.L // n))

    def mul(self, f, g) -> list[Fraction]:
        return self.reduce(polys.mul(f, g))

    def conj(self, f, k: int) -> list[Fraction]:
        return self.reduce(polys.compose(polys.trim(f), polys.dickson(k)))

    def is_rational(self, f) -> bool:
        return not any(f[1:])


def _orbit(amb: _Ambient, f) -> list[tuple]:
    seen: list[tuple] = []
    for k in amb.galois:
        c = tuple(amb.conj(f, k))
        if c not in seen:
            seen.append(c)
    return seen


def _weights(n: int):
    if n <= 1:
        yield ()
        return
    total = 0
    while True:
        for w in _compositions(total, n - 1):
            yield w
        total += 1


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _solve_rational(columns: list[list[Fraction]], target: list[Fraction]) -> list[Fraction]:
    """Solve sum_k x_k columns[k] = target exactly (consistent system)."""
    rows = len(target)
    n = len(columns)
    aug = [[columns[k][r] for k in range(n)] + [target[r]] for r in range(rows)]
    piv_cols = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, rows) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][col]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][col] != 0:
                fct = aug[i][col]
                aug[i] = [a - fct * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, rows):
        if aug[i][-1] != 0:
            raise FieldError("element is not in the subfield")
    x = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        x[col] = aug[i][-1]
    return x


def _build_subfield(amb: _Ambient, gens: list[list[Fraction]], numeric: list[mpmath.mpf],
                    symbol: str, name: str):
    """Primitive element, field descriptor and a map ambient -> field for Q(gens)."""
    irr = []
    irr_num = []
    for g, v in zip(gens, numeric):
        if not amb.is_rational(g) and tuple(g) not in [tuple(h) for h in irr]:
            irr.append(g)
            irr_num.append(v)
    stab = [k for k in amb.galois if all(amb.conj(g, k) == list(g) for g in irr)]
    target = len(amb.galois) // len(stab)
    if not irr:
        xi = [Fraction(0)] * amb.D
        xi_num = mpmath.mpf(0)
        weights: tuple = ()
    else:
        for w in _weights(len(irr)):
            ws = (1,) + w
            xi = [Fraction(0)] * amb.D
            for c, g in zip(ws, irr):
                xi = [a + c * b for a, b in zip(xi, g)]
            if len(_orbit(amb, xi)) == target:
                weights = ws
                break
        xi_num = sum(c * v for c, v in zip(weights, irr_num))
    orbit = _orbit(amb, xi)
    # minimal polynomial = prod (X - conj), coefficients in the ambient field
    poly: list[list[Fraction]] = [[Fraction(1)] + [Fraction(0)] * (amb.D - 1)]
    for c in orbit:
        neg = [-v for v in c]
        new = [[Fraction(0)] * amb.D for _ in range(len(poly) + 1)]
        for i, coef in enumerate(poly):
            new[i + 1] = [a + b for a, b in zip(new[i + 1], coef)]
            prod = amb.mul(coef, neg)
            new[i] = [a + b for a, b in zip(new[i], prod)]
        poly = new
    mp = []
    for coef in poly:
        if not amb.is_rational(coef):
            raise FieldError("orbit product is not rational")
        if coef[0].denominator != 1:
            raise FieldError("primitive element is not integral")
        mp.append(int(coef[0]))
    if len(orbit) == 1:
        mp = [-int(xi[0]), 1]
    fd = FieldDesc(mp, xi_num if len(mp) > 2 else None, symbol=symbol, name=name)
    powers = [[Fraction(1)] + [Fraction(0)] * (amb.D - 1)]
    for _ in range(fd.degree - 1):
        powers.append(amb.mul(powers[-1], xi))

    def to_field(v: list[Fraction]) -> FieldElem:
        if fd.degree == 1:
            if not amb.is_rational(v):
                raise FieldError("element is not rational")
            return fd.const(v[0])
        return fd.elem(_solve_rational(powers, list(v)))

    return fd, xi, to_field


@dataclass
class SubfieldDesc:
    """E inside F: E's own descriptor plus the image of its primitive element in F."""

    parent: FieldDesc
    field: FieldDesc
    theta: FieldElem
    named: dict = dc_field(default_factory=dict)

    @property
    def min_poly_E(self) -> tuple[int, ...]:
        return self.field.min_poly

    @property
    def is_whole(self) -> bool:
        return self.field is self.parent

    def lift(self, e: FieldElem) -> FieldElem:
        """Image in F of an element of E."""
        if self.is_whole:
            return e
        acc = self.parent.zero
        power = self.parent.one
        for c in e.coeffs:
            acc = acc + power * c
            power = power * self.theta
        return acc

    @cached_property
    def _theta_powers(self) -> list[list[Fraction]]:
        out, power = [], self.parent.one
        for _ in range(self.field.degree):
            out.append(list(power.coeffs))
            power = power * self.theta
        return out

    def restrict(self, x: FieldElem) -> FieldElem:
        """The element of E whose image in F is x; FieldError if x is not in E."""
        if self.is_whole:
            return x
        return self.field.elem(_solve_rational(self._theta_powers, list(x.coeffs)))

    def contains(self, x: FieldElem) -> bool:
        try:
            self.restrict(x)
        except FieldError:
            return False
        return True


_FIELD_CACHE: dict[tuple[int, int, int], tuple[FieldDesc, SubfieldDesc]] = {}


def field_build(tau: Sequence[int]) -> tuple[FieldDesc, SubfieldDesc]:
    """Trace field F and invariant trace field E of a hyperbolic triple."""
    a, b, c = check_triple(tau)
    key = (a, b, c)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    L = lcm(a, b, c)
    amb = _Ambient(L)
    mp = mpmath.mp
    with mpmath.workprec(160):
        num = {s: 2 * mpmath.cos(mpmath.pi / s) for s in (a, b, c)}
        gens = [amb.two_cos(s) for s in (a, b, c)]
        F, xi, toF = _build_subfield(amb, gens, [num[s] for s in (a, b, c)], "u", f"F{(a, b, c)}")
        for s in (a, b, c):
            F.named[f"2cos(pi/{s})"] = toF(amb.two_cos(s))
        e_gens = [amb.two_cos(s, 2) for s in (a, b, c)]
        prod = amb.mul(amb.mul(gens[0], gens[1]), gens[2])
        e_gens.append(prod)
        e_num = [2 * mpmath.cos(2 * mpmath.pi / s) for s in (a, b, c)] + [num[a] * num[b] * num[c]]
        stab_e = [k for k in amb.galois if all(amb.conj(g, k) == list(g) for g in e_gens if not amb.is_rational(g))]
        if len(amb.galois) // len(stab_e) == F.degree:
            E = SubfieldDesc(F, F, F.gen)
        else:
            Ed, theta, toE = _build_subfield(amb, e_gens, e_num, "w", f"E{(a, b, c)}")
            E = SubfieldDesc(F, Ed, toF(theta))
            for s in (a, b, c):
                Ed.named[f"2cos(2pi/{s})"] = toE(amb.two_cos(s, 2))
    del mp
    _FIELD_CACHE[key] = (F, E)
    return F, E


# ---------------------------------------------------------------- primes

@dataclass(frozen=True)
class PrimeIdeal:
    p: int
    factor: tuple[int, ...]
    f: int
    e: int
    norm: int
    level: str = "F"
    field: FieldDesc | None = dc_field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {"p": self.p, "factor": list(self.factor), "f": self.f, "e": self.e, "norm": self.norm}

    def reduce(self, x: FieldElem) -> tuple[int, ...]:
        """Residue of x in F_p[t]/(factor), as f coefficients (lowest first)."""
        if x.field is not self.field:
            raise FieldError("field mismatch")
        red = polys.mod_p(list(x.coeffs), self.p)
        r = polys.p_rem(red, list(self.factor), self.p)
        return tuple(r) + (0,) * (self.f - len(r))


def prime_decompose(field: FieldDesc | SubfieldDesc, p: int) -> list[PrimeIdeal]:
    level = "F"
    if isinstance(field, SubfieldDesc):
        field, level = field.field, "E"
    mp = list(field.min_poly)
    if field.discriminant % p == 0 and not polys.dedekind_p_maximal(mp, p):
        raise UnsupportedPrime(f"Z[{field.symbol}] is not maximal at p={p}")
    out = [PrimeIdeal(p, tuple(g), len(g) - 1, e, p ** (len(g) - 1), level, field)
           for g, e in polys.factor_mod_p(mp, p)]
    out.sort(key=lambda P: P.factor)
    return out


def element_in_ideal(x: FieldElem, P: PrimeIdeal) -> bool:
    return not any(P.reduce(x))


def _fq_mul(u: list[int], v: list[int], mod: list[int], p: int) -> list[int]:
    return polys.p_rem(polys.p_mul(u, v, p), mod, p)


def residue_min_poly(value: Sequence[int], P: PrimeIdeal) -> list[int]:
    """Minimal polynomial over F_p of an element of the residue field of P."""
    mod = list(P.factor)
    cur = polys.trim(list(value))
    conj: list[list[int]] = []
    while cur not in conj:
        conj.append(cur)
        res = [1]
        for _ in range(P.p):
            res = _fq_mul(res, cur, mod, P.p)
        cur = res
    # expand prod (X - c) with coefficients in F_q
    poly: list[list[int]] = [[1]]
    for c in conj:
        neg = polys.p_sub([], c, P.p)
        new: list[list[int]] = [[] for _ in range(len(poly) + 1)]
        for i, coef in enumerate(poly):
            new[i + 1] = polys.p_add(new[i + 1], coef, P.p)
            new[i] = polys.p_add(new[i], _fq_mul(coef, neg, mod, P.p), P.p)
        poly = new
    out = []
    for coef in poly:
        if polys.degree(coef) > 0:
            raise FieldError("minimal polynomial not over F_p")
        out.append(coef[0] if coef else 0)
    return out


def subfield_ideal_under(P: PrimeIdeal, E: SubfieldDesc) -> PrimeIdeal:
    """The prime of E lying under the prime P of F."""
    if E.is_whole:
        return P
    theta_bar = P.reduce(E.theta)
    mpoly = residue_min_poly(theta_bar, P)
    for Q in prime_decompose(E, P.p):
        if tuple(mpoly) == Q.factor:
            return Q
    raise UnsupportedPrime(f"no prime of E matches {P}")


def primes_above(Pe: PrimeIdeal, F: FieldDesc, E: SubfieldDesc) -> list[PrimeIdeal]:
    if E.is_whole:
        return [Pe]
    return [P for P in prime_decompose(F, Pe.p) if subfield_ideal_under(P, E) == Pe]


def poly_to_json(f: Sequence[int]) -> list[str]:
    return [str(int(c)) for c in f]


def dumps(obj) -> str:
    if isinstance(obj, FieldElem):
        return json.dumps(obj.to_json())
    if isinstance(obj, PrimeIdeal):
        return json.dumps(obj.to_json())
    return json.dumps(poly_to_json(obj))
