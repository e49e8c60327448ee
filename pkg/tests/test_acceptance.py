"""Acceptance criteria 1-9.

Each criterion records PASS/FAIL in RESULTS; conftest prints one line per criterion
at the end of the session. Rows are computed once and shared between criteria.
"""

from __future__ import annotations

import contextlib
import math
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from trisys.exactfield import field_build, prime_decompose
from trisys.fingroup import GFq, count_bound, psl2
from trisys.quatorder import build_order
from trisys.schreier import build_coset_graph, identify_ideal, schreier_generators
from trisys.sysbound import (UnsupportedIdeal, epimorphism_census, parse_ideal_label, predicted_size,
                             quotient_type, supported_primes, sys_upper)

pytestmark = pytest.mark.slow

RESULTS: dict[int, tuple[bool, str]] = {}
TOL = 1e-3


@contextlib.contextmanager
def criterion(n: int, what: str):
    try:
        yield
    except BaseException as exc:
        RESULTS[n] = (False, f"{what}: {type(exc).__name__}: {exc}".splitlines()[0])
        print(f"CRITERION {n}: FAIL  {RESULTS[n][1]}")
        raise
    RESULTS[n] = (True, what)
    print(f"CRITERION {n}: PASS  {what}")


# (label, trace, length, genus, log column or None)
HURWITZ = [
    ("mu+2", "2*mu^2+mu-1", 3.936, 3, 1.465),
    ("2*mu+1", "4*mu^2+4*mu-1", 5.904, 14, 3.519),
    ("2*mu+3", "6*mu^2+5*mu-4", 6.393, 14, 3.519),
    ("mu-3", "7*mu^2+7*mu-4", 6.888, 14, 3.519),
    ("3", "45*mu^2+36*mu-25", 10.451, 118, 6.361),
    ("4*mu-1", "19*mu^2+15*mu-12", 8.680, 146, 6.645),
    ("3*mu-4", "49*mu^2+41*mu-27", 10.656, 146, 6.645),
    ("mu+3", "73*mu^2+60*mu-40", 11.442, 146, 6.645),
    ("4*mu-3", "33*mu^2+26*mu-17", 9.340, 411, 8.025),
    ("3*mu+1", "49*mu^2+40*mu-26", 10.648, 411, 8.025),
    ("mu-4", "121*mu^2+97*mu-67", 12.432, 411, 8.025),
    ("2*mu-5", "49*mu^2+40*mu-28", 10.628, 474, 8.215),
    ("3*mu+2", "55*mu^2+43*mu-32", 10.824, 474, 8.215),
    ("5*mu-3", "86*mu^2+69*mu-48", 11.747, 474, 8.215),
    ("(mu+2)(mu-3)", "44*mu^2+36*mu-25", 10.416, 2185, 10.252),
    ("(mu+2)(2*mu+1)", "88*mu^2+72*mu-49", 11.808, 2185, 10.252),
    ("(mu+2)(2*mu+3)", "256*mu^2+205*mu-143", 13.928, 2185, 10.252),
]

# trace = (A + B*sqrt3) * (cos(pi/12) if flagged)
T2312 = [
    ("1-2*sqrt3", (31, 19, False), 8.314, 56, 5.367),
    ("1+2*sqrt3", (36, 21, False), 8.563, 56, 5.367),
    ("4-sqrt3", (35, 20, False), 8.486, 92, 6.029),
    ("4+sqrt3", (45, 27, False), 9.038, 92, 6.029),
    ("2-3*sqrt3", (71, 40, False), 9.887, 254, 7.383),
    ("2+3*sqrt3", (96, 55, False), 10.507, 254, 7.383),
    ("5", (168, 94, True), 11.534, 326, 7.716),
    ("7+2*sqrt3", (204, 117, False), 12.016, 2110, 10.206),
    ("7-2*sqrt3", (324, 187, False), 12.947, 2110, 10.206),
    ("1+4*sqrt3", (282, 164, True), 12.608, 2163, 10.239),
    ("1-4*sqrt3", (378, 222, True), 13.204, 2163, 10.239),
    ("7", (341, 196, False), 13.046, 2451, 10.406),
]

T277 = [
    ("mu+2", "9*mu^2+8*mu-4", 7.358, 19, None),
    ("2*mu+1", "17*mu^2+12*mu-10", 8.404, 118, None),
    ("2*mu+3", "6*mu^2+5*mu-4", 6.393, 118, None),
    ("mu-3", "8*mu^2+7*mu-4", 7.085, 118, None),
    ("3", "135*mu^2+108*mu-74", 12.652, 1054, None),
    ("4*mu-1", "223*mu^2+180*mu-124", 13.658, 1306, None),
    ("3*mu-4", "49*mu^2+41*mu-27", 10.656, 1306, None),
    ("mu+3", "73*mu^2+60*mu-40", 11.442, 1306, None),
]

T3310 = [
    ("nu^2+nu-4", "21+12*nu-18*nu^2-10*nu^3", 9.002, 400, 3.994),
    ("nu^2-nu-4", "24+10*nu-20*nu^2-10*nu^3", 9.173, 400, 3.994),
    ("nu^3-nu^2-3*nu+1", "40+18*nu-32*nu^2-16*nu^3", 10.043, 400, 3.994),
    ("nu^3+nu^2-3*nu-1", "86+46*nu-64*nu^2-34*nu^3", 11.354, 400, 3.994),
    ("nu^3-3*nu-3", "6+4*nu-7*nu^2-4*nu^3", 7.338, 4019, 5.533),
    ("nu-3", "36+18*nu-27*nu^2-14*nu^3", 9.637, 4019, 5.533),
    ("nu^3-3*nu+3", "43+20*nu-32*nu^2-16*nu^3", 9.951, 4019, 5.533),
    ("nu+3", "243+125*nu-178*nu^2-93*nu^3", 13.377, 4019, 5.533),
    ("3", "259+135*nu-189*nu^2-99*nu^3", 13.489, 30997, 6.894),
]

TABLES = {(2, 3, 7): HURWITZ, (2, 3, 12): T2312, (2, 7, 7): T277, (3, 3, 10): T3310}

_CACHE: dict = {}


def row(tau, label):
    """(report, wall seconds), computed single-threaded once per session."""
    key = (tau, label)
    if key not in _CACHE:
        spec = parse_ideal_label(tau, label)
        t0 = time.perf_counter()
        rep = sys_upper(tau, spec, threads=1)
        _CACHE[key] = (rep, time.perf_counter() - t0)
    return _CACHE[key]


def expected_trace(tau, trace):
    F, _ = field_build(tau)
    if tau == (2, 3, 12):
        a, b, with_cos = trace
        c12 = F.named["2cos(pi/12)"]
        s3 = c12 * c12 - 2
        out = s3 * b + a
        return out * c12 * Fraction(1, 2) if with_cos else out
    return F.parse(trace, aliases=("mu", "nu"))


def check_table(tau, rows, seconds=None):
    bad = []
    for label, trace, length, genus, _ in rows:
        rep, dt = row(tau, label)
        exp = expected_trace(tau, trace)
        if rep.min_trace != exp and rep.min_trace != -exp:
            bad.append(f"{label}: trace {rep.trace_pretty()}")
        if abs(rep.sys_upper - length) > TOL:
            bad.append(f"{label}: length {rep.sys_upper:.4f} vs {length}")
        if rep.genus != genus:
            bad.append(f"{label}: genus {rep.genus} vs {genus}")
        if seconds is not None and dt > seconds(label):
            bad.append(f"{label}: {dt:.1f}s over budget")
    assert not bad, "; ".join(bad)


def assert_skipped(tau, label):
    try:
        rep = sys_upper(tau, parse_ideal_label(tau, label))
    except UnsupportedIdeal:
        return
    raise AssertionError(f"{label} not skipped (got {rep.trace_pretty()})")


def test_criterion_1_hurwitz():
    with criterion(1, "Hurwitz rows of norm 7..91, traces exact, lengths +-0.001, runtime"):
        check_table((2, 3, 7), HURWITZ, seconds=lambda lab: 600 if ")(" in lab else 60)


def test_criterion_2_2312():
    with criterion(2, "(2,3,12) rows of norm 11..49; (1+sqrt3), (sqrt3) skipped"):
        check_table((2, 3, 12), T2312)
        assert_skipped((2, 3, 12), "1+sqrt3")
        assert_skipped((2, 3, 12), "sqrt3")
        _, skipped = supported_primes((2, 3, 12), 3)
        assert {s.label for s in skipped} >= {"(sqrt3+1)", "(sqrt3)"}


def test_criterion_3_277():
    with criterion(3, "(2,7,7) rows of norm 7..29; (2) skipped"):
        check_table((2, 7, 7), T277)
        assert_skipped((2, 7, 7), "2")


def test_criterion_4_3310():
    with criterion(4, "(3,3,10) rows of norm 19, 41 and (3) within 15 min"):
        check_table((3, 3, 10), T3310, seconds=lambda lab: 900)


def _chi(tau):
    return 1 - sum(Fraction(1, n) for n in tau)


def test_criterion_5_genus():
    with criterion(5, "genus of every row equals the table value"):
        bad = []
        for tau, rows in TABLES.items():
            for label, _, _, genus, _ in rows:
                rep, _ = row(tau, label)
                if rep.genus != genus:
                    bad.append(f"{tau} {label}: {rep.genus} vs {genus}")
                if tau == (2, 3, 7) and rep.genus != rep.index // 84 + 1:
                    bad.append(f"{label}: Hurwitz specialization")
        assert not bad, "; ".join(bad)


def _predicted(tau, spec):
    out = 1
    for P in spec.e_primes:
        out *= predicted_size(quotient_type(tau, P), P.norm)
    return out


def test_criterion_6_quotients():
    with criterion(6, "|K| equals the predicted PSL2/PGL2 order on every row"):
        bad = []
        for tau, rows in TABLES.items():
            for label, _, _, genus, _ in rows:
                rep, _ = row(tau, label)
                pred = _predicted(tau, rep.ideal)
                # independent route: index recovered from the tabulated genus
                from_genus = 2 * (genus - 1) / _chi(tau)
                if not (rep.index == pred == from_genus):
                    bad.append(f"{tau} {label}: |K|={rep.index} predicted={pred} from genus={from_genus}")
        assert row((2, 3, 12), "1-2*sqrt3")[0].index == 1320
        assert row((2, 3, 12), "1-2*sqrt3")[0].quotient_kind == "PGL"
        assert row((3, 3, 10), "3")[0].index == 265680
        assert not bad, "; ".join(bad)


def test_criterion_7_counting():
    with criterion(7, "count_bound values; (2,7,7) q=13 census finds 9 kernels, 3 congruence"):
        for p in (13, 29):
            assert count_bound((2, 3, 7), p) == 3
            assert count_bound((2, 7, 7), p) == 9
        for p in (11, 13, 23, 37, 47, 59):
            assert count_bound((2, 3, 12), p) == 2
        tau = (2, 7, 7)
        G = psl2(GFq(13))
        kernels = epimorphism_census(tau, G, G.size, attempts=10_000, seed=1)
        assert len(kernels) == 9
        O = build_order(tau)
        cands = prime_decompose(O.F, 13)
        found = []
        for z1, z2 in kernels.values():
            sset = schreier_generators(build_coset_graph(G, z1, z2, orders=(tau[0], tau[1])))
            P = identify_ideal(sset, O, cands)
            if P is not None:
                found.append((P.p, P.factor))
        assert len(found) == 3
        assert len(set(found)) == 3


PROPERTY_SUITES = {
    "a": ["tests/test_fingroup.py::test_kappa_matches_brute_force"],
    "b": ["tests/test_fingroup.py::test_commutative_test_exhaustive"],
    "c": ["tests/test_quatorder.py::test_order_invariants", "tests/test_quatorder.py::test_splitting_homomorphism"],
    "d": ["tests/test_quatorder.py::test_real_trace_matches_exact"],
}


def test_criterion_8_properties():
    with criterion(8, "property suites a-d rerun, determinism across threads and runs"):
        root = Path(__file__).resolve().parent.parent
        ids = [i for v in PROPERTY_SUITES.values() for i in v]
        res = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *ids],
                             cwd=root, capture_output=True, text=True)
        assert res.returncode == 0, res.stdout[-2000:]
        tau = (2, 3, 7)
        spec = parse_ideal_label(tau, "4*mu-1")
        a = sys_upper(tau, spec, threads=1).to_json()
        b = sys_upper(tau, spec, threads=8).to_json()
        c = sys_upper(tau, spec, threads=1).to_json()
        assert a == b == c


def test_criterion_9_log_ref():
    with criterion(9, "log_ref matches the 4/3 and 2/3 log g columns within 0.001"):
        bad = []
        for tau, rows in TABLES.items():
            r = 2 if tau == (3, 3, 10) else 1
            for label, _, _, genus, col in rows:
                rep, _ = row(tau, label)
                ref = 4 / (3 * r) * math.log(genus)
                if abs(rep.log_ref - ref) > 1e-9:
                    bad.append(f"{tau} {label}: formula")
                if col is not None and abs(rep.log_ref - col) > TOL:
                    bad.append(f"{tau} {label}: {rep.log_ref:.4f} vs {col}")
        assert not bad, "; ".join(bad)

