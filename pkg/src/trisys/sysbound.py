"""Systole upper bounds for congruence subgroups of triangle groups."""

from __future__ import annotations

import csv
import io
import json
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Sequence

import mpmath
import numpy as np

from .exactfield import (FieldElem, PrimeIdeal, SubfieldDesc, UnsupportedPrime, check_triple,
                         element_in_ideal, field_build, prime_decompose, primes_above, sign_at,
                         subfield_ideal_under)
from .fingroup import CapExceeded, PSL2, gfq, psl2, subgroup_closure
from .quatorder import (BadPrime, TriangleOrder, build_order, field_norm, quat_real_matrix,
                        r_tau, split_order_mod)
from .schreier import (CosetGraph, ProductGroup, SchreierSet, build_coset_graph, dump_generators,
                       schreier_generators)

DEFAULT_SEED = 20240229
DEFAULT_CAP = 3_000_000


class UnsupportedIdeal(ValueError):
    pass


# ---------------------------------------------------------------- ideals

@dataclass
class IdealSpec:
    tau: tuple[int, int, int]
    e_primes: list[PrimeIdeal]
    f_primes: list[PrimeIdeal]
    label: str = ""

    def __post_init__(self):
        if len(set(self.e_primes)) != len(self.e_primes):
            raise UnsupportedIdeal("ideal is not squarefree")
        if len(self.e_primes) != len(self.f_primes) or not self.e_primes:
            raise UnsupportedIdeal("malformed ideal")

    @property
    def norm(self) -> int:
        return prod(P.norm for P in self.e_primes)

    def to_json(self) -> dict:
        return {"p": [P.p for P in self.e_primes] if len(self.e_primes) > 1 else self.e_primes[0].p,
                "factors": [P.to_json() for P in self.e_primes],
                "norm": self.norm, "label": self.label}


def quotient_type(tau: Sequence[int], pE: PrimeIdeal) -> str:
    """PSL when the prime of E splits completely in F/E, PGL otherwise."""
    if pE.p == 2:
        raise UnsupportedPrime("residue characteristic 2")
    F, E = field_build(tau)
    if E.is_whole:
        return "PSL"
    above = primes_above(pE, F, E)
    return "PSL" if all(P.f == pE.f for P in above) else "PGL"


def predicted_size(kind: str, q: int) -> int:
    n = q * (q * q - 1)
    return n // 2 if kind == "PSL" else n


def check_support(O: TriangleOrder, pE: PrimeIdeal, PF: PrimeIdeal, seed: int = 0):
    """Split data for PF, or UnsupportedIdeal with the reason it is skipped."""
    if pE.p == 2:
        raise UnsupportedIdeal("residue characteristic 2")
    try:
        sd = split_order_mod(O, PF, seed)
    except BadPrime as exc:
        raise UnsupportedIdeal(str(exc)) from None
    G = sd.group
    a, b, c = O.tau
    ab = G.mul(sd.img_alpha, sd.img_beta)
    if (G.order(sd.img_alpha), G.order(sd.img_beta), G.order(ab)) != (a, b, c):
        raise UnsupportedIdeal("generator images do not have orders (a, b, c)")
    return sd


def primes_of_E(tau: Sequence[int], p: int) -> list[PrimeIdeal]:
    _, E = field_build(tau)
    return prime_decompose(E, p)


def spec_from_primes(tau: Sequence[int], e_primes: Sequence[PrimeIdeal], label: str = "") -> IdealSpec:
    F, E = field_build(tau)
    f_primes = []
    for pE in e_primes:
        above = primes_above(pE, F, E)
        if not above:
            raise UnsupportedIdeal("no prime of F above the given prime")
        f_primes.append(above[0])
    return IdealSpec(check_triple(tau), list(e_primes), f_primes, label or "*".join(prime_label(tau, P) for P in e_primes))


# ---------------------------------------------------------------- labels

_LABEL_CACHE: dict = {}


def principal_generator(tau: Sequence[int], pE: PrimeIdeal, radius: int = 5) -> FieldElem | None:
    """A small-coefficient generator of pE (norm equal to N(pE)), searched by height."""
    key = (check_triple(tau), pE)
    if key in _LABEL_CACHE:
        return _LABEL_CACHE[key]
    _, E = field_build(tau)
    K = E.field
    d = K.degree
    found = None
    if d == 1 or pE.norm == pE.p ** d:
        found = K.const(pE.p)
    else:
        # lowest degree first, then smallest height
        for deg in range(1, d):
            for h in range(1, radius + 1):
                cands = [cs for cs in _box(deg + 1, h) if cs[deg] > 0 and max(abs(c) for c in cs) == h]
                cands.sort(key=lambda cs: (sum(abs(c) for c in cs), [-abs(c) for c in reversed(cs)], [-c for c in cs]))
                for cs in cands:
                    x = K.elem(cs)
                    if abs(field_norm(x)) == pE.norm and element_in_ideal(x, pE):
                        found = x
                        break
                if found is not None:
                    break
            if found is not None:
                break
    _LABEL_CACHE[key] = found
    return found


def _box(d: int, h: int):
    if d == 0:
        yield []
        return
    for rest in _box(d - 1, h):
        for c in range(-h, h + 1):
            yield rest + [c]


def prime_label(tau: Sequence[int], pE: PrimeIdeal) -> str:
    g = principal_generator(tau, pE)
    if g is None:
        return f"p{pE.p}[{','.join(map(str, pE.factor))}]"
    return f"({g.pretty(label_symbol(tau))})"


def label_symbol(tau: Sequence[int]) -> str:
    """u for E = F; sqrtm when E = Q(sqrt m) is generated by a square root."""
    _, E = field_build(tau)
    K = E.field
    if not E.is_whole and K.degree == 2 and K.min_poly[1] == 0:
        return f"sqrt{-K.min_poly[0]}"
    return K.symbol


def parse_ideal_label(tau: Sequence[int], text: str) -> IdealSpec:
    """Ideal generated by an integer polynomial in the generator of E (aliases mu, nu allowed)."""
    _, E = field_build(tau)
    K = E.field
    text = text.strip()
    if text.startswith("("):
        groups = re.findall(r"\(([^()]*)\)(?:\^(\d+))?", text)
        if not groups or re.sub(r"\([^()]*\)(\^\d+)?|\*", "", text).strip():
            raise ValueError(f"invalid ideal label {text!r}")
    else:
        groups = [(text, "")]
    try:
        x = K.one
        for part, power in groups:
            x = x * K.parse(part, aliases=("mu", "nu", "μ", "ν", label_symbol(tau), "√" + label_symbol(tau)[4:])) ** int(power or 1)
    except Exception as exc:
        raise ValueError(f"invalid ideal label {text!r}: {exc}") from None
    if x.is_zero():
        raise ValueError("zero ideal")
    n = abs(field_norm(x))
    if n.denominator != 1:
        raise ValueError("label is not an algebraic integer")
    n = int(n)
    if n == 1:
        raise ValueError("label generates the unit ideal")
    from .fingroup import factorize
    primes = []
    for p in sorted(factorize(n)):
        try:
            cands = prime_decompose(E, p)
        except UnsupportedPrime as exc:
            raise UnsupportedIdeal(str(exc)) from None
        primes.extend(P for P in cands if element_in_ideal(x, P))
    if prod(P.norm for P in primes) != n:
        raise UnsupportedIdeal("ideal is not squarefree (prime powers are not supported)")
    if any(P.p == 2 for P in primes):
        raise UnsupportedIdeal("residue characteristic 2")
    return spec_from_primes(tau, primes, "".join(f"({_strip(prime_label(tau, P))})" for P in primes))


def _strip(s: str) -> str:
    return s[1:-1] if s.startswith("(") and s.endswith(")") else s


# ---------------------------------------------------------------- kernels

@dataclass
class KernelData:
    group: object
    psi_x: object
    psi_y: object
    graph: CosetGraph
    kinds: list[str]
    q_list: list[int]
    flags: list[str] = dc_field(default_factory=list)


def congruence_kernel(tau: Sequence[int], spec: IdealSpec, seed: int = 0, cap: int = DEFAULT_CAP) -> KernelData:
    O = build_order(tau)
    splits = []
    kinds, qs, flags = [], [], []
    for pE, PF in zip(spec.e_primes, spec.f_primes):
        sd = check_support(O, pE, PF, seed)
        splits.append(sd)
        kinds.append(quotient_type(O.tau, pE))
        qs.append(pE.norm)
        if any(s % pE.p == 0 for s in O.tau):
            flags.append("outside abc coprimality")
    expected = prod(predicted_size(k, q) for k, q in zip(kinds, qs))
    if expected > cap:
        raise CapExceeded(f"predicted index {expected} exceeds cap {cap}")
    if len(splits) == 1:
        group = splits[0].group
        px, py = splits[0].img_alpha, splits[0].img_beta
    else:
        group = ProductGroup([sd.group for sd in splits])
        px = tuple(sd.img_alpha for sd in splits)
        py = tuple(sd.img_beta for sd in splits)
    graph = build_coset_graph(group, px, py, cap=cap, orders=(O.tau[0], O.tau[1]))
    if len(graph) != expected:
        raise UnsupportedIdeal(f"quotient has order {len(graph)}, expected {expected}")
    return KernelData(group, px, py, graph, kinds, qs, sorted(set(flags)))


def genus_of(tau: Sequence[int], index: int) -> int:
    a, b, c = tau
    g = Fraction(index, 2) * (1 - Fraction(1, a) - Fraction(1, b) - Fraction(1, c)) + 1
    if g.denominator != 1:
        raise ValueError(f"non-integral genus {g} for index {index}")
    return int(g)


def log_ref(genus: int, r: int) -> float:
    if genus < 1:
        raise ValueError("genus must be >= 1")
    with mpmath.workprec(128):
        return float(mpmath.mpf(4) / (3 * r) * mpmath.log(genus))


def sys_length(trace_abs: FieldElem, bits: int = 128) -> float:
    from .exactfield import embed_real
    lo, hi = embed_real(trace_abs, trace_abs.field.distinguished, bits)
    with mpmath.workprec(bits):
        return float(2 * mpmath.acosh((lo + hi) / 4))


# ---------------------------------------------------------------- trace scan

_LAB_INDEX = {ord("x"): 0, ord("X"): 1, ord("y"): 2, ord("Y"): 3}
_EPS = float(np.finfo(np.longdouble).eps)


def _real_generators(O: TriangleOrder) -> np.ndarray:
    mats = []
    with mpmath.workprec(200):
        for q in (O.alpha, O.alpha.conj(), O.beta, O.beta.conj()):
            m = quat_real_matrix(q, O, 180)
            mats.append([[np.longdouble(str(m[i, j])) for j in range(2)] for i in range(2)])
    return np.array(mats, dtype=np.longdouble)


def _node_matrices(graph: CosetGraph, gens: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real matrices of the transversal elements and an error bound for each."""
    n = len(graph)
    parent = np.frombuffer(graph.parent, dtype=np.int64 if graph.parent.itemsize == 8 else np.int32)
    labels = np.frombuffer(graph.parent_label, dtype=np.uint8)
    depth = np.frombuffer(graph.depth, dtype=np.int64 if graph.depth.itemsize == 8 else np.int32)
    lab_idx = np.zeros(n, dtype=np.int64)
    for ch, k in _LAB_INDEX.items():
        lab_idx[labels == ch] = k
    M = np.zeros((n, 2, 2), dtype=np.longdouble)
    M[0] = np.eye(2, dtype=np.longdouble)
    err = np.zeros(n, dtype=np.longdouble)
    gnorm = np.sqrt((gens.astype(np.longdouble) ** 2).sum(axis=(1, 2)))
    # generator entries carry a representation error of one ulp
    gerr = gnorm * _EPS * 4
    order = np.argsort(depth, kind="stable")
    bounds = np.searchsorted(depth[order], np.arange(int(depth.max()) + 2))
    for d in range(1, int(depth.max()) + 1):
        idx = order[bounds[d]:bounds[d + 1]]
        par = parent[idx]
        gi = gens[lab_idx[idx]]
        Mp = M[par]
        M[idx] = np.matmul(Mp, gi)
        nMp = np.sqrt((Mp ** 2).sum(axis=(1, 2)))
        ng = gnorm[lab_idx[idx]]
        err[idx] = err[par] * ng + nMp * gerr[lab_idx[idx]] + nMp * ng * (4 * _EPS)
    return M, err


@dataclass
class ScanResult:
    abs_trace: np.ndarray
    err: np.ndarray


def _scan_chunk(M, err, gens, u, lab, v) -> ScanResult:
    A = np.matmul(M[u], gens[lab])
    nM = np.sqrt((M ** 2).sum(axis=(1, 2)))
    gnorm = np.sqrt((gens ** 2).sum(axis=(1, 2)))
    eA = err[u] * gnorm[lab] + nM[u] * gnorm[lab] * (4 * _EPS) + nM[u] * gnorm[lab] * 4 * _EPS
    Mv = M[v]
    tr = A[:, 0, 0] * Mv[:, 1, 1] - A[:, 0, 1] * Mv[:, 1, 0] - A[:, 1, 0] * Mv[:, 0, 1] + A[:, 1, 1] * Mv[:, 0, 0]
    nA = np.sqrt((A ** 2).sum(axis=(1, 2)))
    e = 2 * (eA * nM[v] + nA * err[v]) + 8 * _EPS * nA * nM[v]
    return ScanResult(np.abs(tr), 2 * e + 1e-30)


class ExactEvaluator:
    """Exact traces through integer coordinates in the Z-basis {u^m e_k} of the order."""

    def __init__(self, O: TriangleOrder, graph: CosetGraph):
        self.O, self.graph = O, graph
        F = O.F
        d = F.degree
        self.d = d
        powers = [F.gen ** m if d > 1 else F.one for m in range(d)]
        self.zbasis = [O.basis[k].scale(powers[m]) for k in range(4) for m in range(d)]
        self.rmats = []
        for g in (O.alpha, O.alpha.conj(), O.beta, O.beta.conj()):
            cols = [self._vec(b * g) for b in self.zbasis]
            self.rmats.append([[cols[j][i] for j in range(4 * d)] for i in range(4 * d)])
        self.form = [[tuple(_intish(c) for c in (bi * bj.conj()).trd().coeffs) for bj in self.zbasis]
                     for bi in self.zbasis]
        self._memo: dict[int, list] = {0: [1] + [0] * (4 * d - 1)}

    def _vec(self, q) -> list:
        out = []
        for c in self.O.coords(q):
            for x in c.coeffs:
                out.append(int(x) if x.denominator == 1 else x)
        return out

    @staticmethod
    def _apply(mat, v):
        return [sum(mij * vj for mij, vj in zip(row, v) if vj) for row in mat]

    def node_vec(self, u: int) -> list:
        path = []
        while u not in self._memo:
            path.append(u)
            u = self.graph.parent[u]
        vec = self._memo[u]
        for w in reversed(path):
            k = _LAB_INDEX[self.graph.parent_label[w]]
            vec = self._apply(self.rmats[k], vec)
            self._memo[w] = vec
        return vec

    def is_identity(self, u: int, lab: int, v: int) -> bool:
        """t_u g t_v^-1 = +-1, by comparing exact coordinate vectors of t_u g and t_v."""
        x = self._apply(self.rmats[0 if lab == 0 else 2], self.node_vec(u))
        y = self.node_vec(v)
        return x == y or x == [-c for c in y]

    def trace(self, u: int, lab: int, v: int) -> FieldElem:
        x = self._apply(self.rmats[0 if lab == 0 else 2], self.node_vec(u))
        y = self.node_vec(v)
        d = self.d
        acc = [0] * d
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.form[i]
            for j, yj in enumerate(y):
                if yj:
                    s = xi * yj
                    for t, c in enumerate(row[j]):
                        if c:
                            acc[t] += s * c
        return self.O.F.elem(acc)


def _intish(c: Fraction):
    return int(c) if c.denominator == 1 else c


def _abs_exact(t: FieldElem) -> FieldElem:
    return t if sign_at(t, t.field.distinguished) >= 0 else -t


def _exact_less(t1: FieldElem, t2: FieldElem) -> int:
    """Sign of |v0(t1)| - |v0(t2)|, via the sign of v0(t1^2 - t2^2)."""
    return sign_at(t1 * t1 - t2 * t2, t1.field.distinguished)


@dataclass
class TraceMin:
    trace: FieldElem
    gen_index: int
    scanned: int
    candidates: int


def minimal_trace(O: TriangleOrder, sset: SchreierSet, threads: int = 1) -> TraceMin:
    graph = sset.graph
    gens = _real_generators(O)
    M, err = _node_matrices(graph, gens)
    n = len(sset)
    u = np.fromiter((g.node for g in sset.generators), dtype=np.int64, count=n)
    lab = np.fromiter((0 if g.label == "x" else 2 for g in sset.generators), dtype=np.int64, count=n)
    v = np.fromiter((g.target for g in sset.generators), dtype=np.int64, count=n)
    chunks = max(1, threads)
    edges = np.linspace(0, n, chunks + 1).astype(np.int64)
    parts = [(edges[i], edges[i + 1]) for i in range(chunks) if edges[i + 1] > edges[i]]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(lambda r: _scan_chunk(M, err, gens, u[r[0]:r[1]], lab[r[0]:r[1]], v[r[0]:r[1]]), parts))
    else:
        res = [_scan_chunk(M, err, gens, u[a:b], lab[a:b], v[a:b]) for a, b in parts]
    t = np.concatenate([r.abs_trace for r in res])
    e = np.concatenate([r.err for r in res])
    lower, upper = t - e, t + e
    sure = lower > 2
    if sure.any():
        bound = upper[sure].min()
        cand = np.nonzero((lower <= bound) & (upper > 2))[0]
    else:
        cand = np.nonzero(upper > 2)[0]
    ev = ExactEvaluator(O, graph)
    best: tuple[FieldElem, int] | None = None
    two = O.F.const(2)
    for k in cand.tolist():
        if lower[k] <= 2 and ev.is_identity(int(u[k]), int(lab[k]), int(v[k])):
            continue
        tr = _abs_exact(ev.trace(int(u[k]), int(lab[k]), int(v[k])))
        if sign_at(tr - two, O.F.distinguished) <= 0:
            continue
        sset.traces[k] = tr
        if best is None or _exact_less(tr, best[0]) < 0:
            best = (tr, k)
    if best is None:
        raise ValueError("no hyperbolic Schreier generator found")
    return TraceMin(best[0], best[1], n, len(cand))


# ---------------------------------------------------------------- reports

@dataclass
class SysReport:
    tau: tuple[int, int, int]
    ideal: IdealSpec
    quotient_kind: str
    q_list: list[int]
    index: int
    genus: int
    min_trace: FieldElem
    min_trace_float: float
    sys_upper: float
    log_ref: float
    generators_scanned: int
    seed: int
    elapsed_ms: int = 0
    min_word: str = ""
    flags: list[str] = dc_field(default_factory=list)
    trace_alt: str = ""

    @property
    def label(self) -> str:
        return self.ideal.label

    @property
    def norm(self) -> int:
        return self.ideal.norm

    def trace_pretty(self) -> str:
        return self.min_trace.pretty()

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "tau": list(self.tau),
            "ideal": self.ideal.to_json(),
            "quotient": {"kind": self.quotient_kind, "q": self.q_list},
            "index": self.index,
            "genus": self.genus,
            "min_trace": {"coeffs": self.min_trace.to_json(), "pretty": self.trace_pretty(),
                          "float": self.min_trace_float},
            "sys_upper": self.sys_upper,
            "log_ref": self.log_ref,
            "generators_scanned": self.generators_scanned,
            "seed": self.seed,
        }
        if self.trace_alt:
            out["min_trace"]["alt"] = self.trace_alt
        if self.flags:
            out["flags"] = self.flags
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    def csv_row(self) -> list[str]:
        return [self.label, str(self.norm), self.trace_pretty(), f"{self.sys_upper:.3f}",
                str(self.genus), f"{self.log_ref:.3f}"]


CSV_COLUMNS = ["ideal_label", "norm", "trace_pretty", "sys_upper", "genus", "log_ref"]


def alt_form(x: FieldElem, E: SubfieldDesc, tau: Sequence[int]) -> str:
    """x written over E, or as (element of E) * cos(pi/s), when F differs from E."""
    if E.is_whole:
        return ""
    sym = label_symbol(tau)
    if E.contains(x):
        return E.restrict(x).pretty(sym)
    F = x.field
    for s in sorted(set(tau)):
        c = F.named[f"2cos(pi/{s})"] / 2
        if not E.contains(c):
            y = x / c
            if E.contains(y):
                return f"({E.restrict(y).pretty(sym)})*cos(pi/{s})"
    return ""


def sys_upper(tau: Sequence[int], spec: IdealSpec, seed: int = DEFAULT_SEED, threads: int = 1,
              precision_bits: int = 128, cap: int = DEFAULT_CAP, dump_path: str | None = None) -> SysReport:
    t0 = time.perf_counter()
    O = build_order(tau)
    kd = congruence_kernel(O.tau, spec, seed, cap)
    sset = schreier_generators(kd.graph)
    tm = minimal_trace(O, sset, threads)
    if dump_path:
        dump_generators(dump_path, sset)
    index = len(kd.graph)
    genus = genus_of(O.tau, index)
    with mpmath.workprec(precision_bits):
        from .exactfield import embed_real
        lo, hi = embed_real(tm.trace, O.F.distinguished, precision_bits)
        x = (lo + hi) / 2
        length = 2 * mpmath.acosh(x / 2)
    kind = kd.kinds[0] if len(kd.kinds) == 1 else "product"
    return SysReport(
        tau=O.tau, ideal=spec, quotient_kind=kind, q_list=kd.q_list, index=index, genus=genus,
        min_trace=tm.trace, min_trace_float=float(x), sys_upper=float(length),
        log_ref=log_ref(genus, r_tau(O.tau)), generators_scanned=tm.scanned, seed=seed,
        elapsed_ms=int((time.perf_counter() - t0) * 1000), min_word=str(sset.word(tm.gen_index)),
        flags=kd.flags, trace_alt=alt_form(tm.trace, O.E, O.tau))


# ---------------------------------------------------------------- tables

@dataclass
class SkippedIdeal:
    label: str
    norm: int
    reason: str


def supported_primes(tau: Sequence[int], max_norm: int):
    """(supported E-primes, skipped entries) of norm <= max_norm."""
    from .fingroup import factorize
    tau = check_triple(tau)
    O = build_order(tau)
    ok, skipped = [], []
    for p in range(2, max_norm + 1):
        if len(factorize(p)) != 1 or factorize(p).get(p) != 1:
            continue
        try:
            primes = primes_of_E(tau, p)
        except UnsupportedPrime as exc:
            skipped.append(SkippedIdeal(f"p={p}", p, str(exc)))
            continue
        for pE in primes:
            if pE.norm > max_norm:
                continue
            label = prime_label(tau, pE)
            try:
                spec = spec_from_primes(tau, [pE], label)
                check_support(O, pE, spec.f_primes[0])
            except UnsupportedIdeal as exc:
                skipped.append(SkippedIdeal(label, pE.norm, str(exc)))
                continue
            ok.append(pE)
            # prime powers of supported primes are out of scope
        for pE in primes:
            k = 2
            while pE.norm ** k <= max_norm:
                skipped.append(SkippedIdeal(f"{prime_label(tau, pE)}^{k}", pE.norm ** k, "prime power ideal"))
                k += 1
    return ok, skipped


def table_specs(tau: Sequence[int], max_norm: int, composites: bool = True) -> tuple[list[IdealSpec], list[SkippedIdeal]]:
    """Supported squarefree ideals of norm <= max_norm, and the skipped ones with reasons."""
    tau = check_triple(tau)
    ok, skipped = supported_primes(tau, max_norm)
    specs: list[IdealSpec] = [spec_from_primes(tau, [P], prime_label(tau, P)) for P in ok]
    if composites:
        for r in range(2, len(ok) + 1):
            found = False
            for combo in combinations(ok, r):
                if prod(P.norm for P in combo) <= max_norm:
                    found = True
                    specs.append(spec_from_primes(tau, list(combo), "".join(prime_label(tau, P) for P in combo)))
            if not found:
                break
        # products with an unsupported prime are skipped for the same reason
        bad = [s for s in skipped if s.reason == "residue characteristic 2"]
        for s in bad:
            for P in ok:
                if s.norm * P.norm <= max_norm:
                    skipped.append(SkippedIdeal(s.label + prime_label(tau, P), s.norm * P.norm, s.reason))
    return specs, skipped


def table_emit(tau: Sequence[int], max_norm: int, seed: int = DEFAULT_SEED, threads: int = 1,
               composites: bool = True, cap: int = DEFAULT_CAP, precision_bits: int = 128,
               progress=None) -> tuple[list[SysReport], list[SkippedIdeal]]:
    tau = check_triple(tau)
    specs, skipped = table_specs(tau, max_norm, composites)
    rows = []
    for spec in specs:
        try:
            rep = sys_upper(tau, spec, seed, threads, precision_bits, cap)
        except (UnsupportedIdeal, CapExceeded) as exc:
            skipped.append(SkippedIdeal(spec.label, spec.norm, str(exc)))
            continue
        rows.append(rep)
        if progress:
            progress(rep)
    rows.sort(key=lambda r: (r.norm, r.label))
    skipped.sort(key=lambda s: (s.norm, s.label))
    return rows, skipped


def reports_csv(rows: Sequence[SysReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_row())
    return buf.getvalue()


def reports_json(rows: Sequence[SysReport], timing: bool = False) -> str:
    return json.dumps([r.to_json(timing) for r in rows], indent=2)


# ---------------------------------------------------------------- epimorphism search

def kernel_key(group, z1, z2) -> bytes:
    """Canonical coset-graph encoding; equal keys iff equal kernels."""
    g = build_coset_graph(group, z1, z2)
    return bytes(g.succ_x) + b"|" + bytes(g.succ_y)


def find_epimorphism_random(tau: Sequence[int], group: PSL2, k_size: int, seed: int = 0, budget: int = 10_000,
                            trace_targets: Sequence[set] | None = None, elements: Sequence | None = None):
    """Random pair (z1, z2) with z1^a = z2^b = (z1 z2)^c = 1 generating a group of order k_size."""
    a, b, c = tau
    rng = random.Random(seed)
    for _ in range(budget):
        pair = _random_pair(group, a, b, c, rng, elements, trace_targets)
        if pair is None:
            continue
        z1, z2 = pair
        try:
            size = len(subgroup_closure(group, [z1, z2], cap=k_size))
        except CapExceeded:
            continue
        if size == k_size:
            return z1, z2
    return None


def _random_element(group: PSL2, rng: random.Random, elements=None):
    if elements is not None:
        return elements[rng.randrange(len(elements))]
    F = group.F
    while True:
        a, b, c = rng.randrange(F.q), rng.randrange(F.q), rng.randrange(F.q)
        if a:
            d = F.div(F.add(1, F.mul(b, c)), a)
            return group.canon((a, b, c, d))


def _random_pair(group: PSL2, a: int, b: int, c: int, rng: random.Random, elements=None, trace_targets=None):
    z1 = _random_element(group, rng, elements)
    if group.order(z1) != a:
        return None
    z2 = _random_element(group, rng, elements)
    if group.order(z2) != b:
        return None
    if group.order(group.mul(z1, z2)) != c:
        return None
    if trace_targets:
        trs = (group.trace(z1), group.trace(z2), group.trace(group.mul(z1, z2)))
        if not all(t in s for t, s in zip(trs, trace_targets)):
            return None
    return z1, z2


def epimorphism_census(tau: Sequence[int], group: PSL2, k_size: int, attempts: int, seed: int = 0):
    """Distinct kernels among seeded random attempts; returns {key: (z1, z2)}."""
    a, b, c = check_triple(tau)
    rng = random.Random(seed)
    by_order: dict[int, list] = {}
    for m in group.elements():
        by_order.setdefault(group.order(m), []).append(m)
    xs, ys = by_order.get(a, []), by_order.get(b, [])
    kernels: dict[bytes, tuple] = {}
    seen_pairs: dict[tuple, bytes | None] = {}
    for _ in range(attempts):
        if not xs or not ys:
            break
        z1 = xs[rng.randrange(len(xs))]
        z2 = ys[rng.randrange(len(ys))]
        if (z1, z2) in seen_pairs:
            continue
        if group.order(group.mul(z1, z2)) != c:
            seen_pairs[(z1, z2)] = None
            continue
        g = build_coset_graph(group, z1, z2)
        if len(g) != k_size:
            seen_pairs[(z1, z2)] = None
            continue
        key = bytes(g.succ_x) + b"|" + bytes(g.succ_y)
        seen_pairs[(z1, z2)] = key
        kernels.setdefault(key, (z1, z2))
    return kernels
