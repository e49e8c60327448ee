from __future__ import annotations

import csv
import io
import json

import mpmath
import pytest

from trisys.exactfield import embed_real, field_build, prime_decompose
from trisys.fingroup import GFq, psl2
from trisys.quatorder import build_order
from trisys.schreier import membership_test, schreier_generators
from trisys.sysbound import (UnsupportedIdeal, congruence_kernel, find_epimorphism_random, genus_of, log_ref,
                             minimal_trace, parse_ideal_label, table_specs, quotient_type, reports_csv, sys_upper,
                             table_emit)
from trisys.words import Word


def test_genus_examples():
    assert genus_of((2, 3, 7), 168) == 3
    assert genus_of((3, 3, 10), 3420) == 400
    for index in (168, 1092, 9828, 12180):
        assert genus_of((2, 3, 7), index) == index // 84 + 1
    with pytest.raises(ValueError):
        genus_of((2, 3, 7), 100)


def test_log_ref_examples():
    assert round(log_ref(3, 1), 3) == 1.465
    assert round(log_ref(400, 2), 3) == 3.994
    assert log_ref(1, 1) == 0


def test_quotient_type_examples():
    F, E = field_build((2, 3, 7))
    assert quotient_type((2, 3, 7), prime_decompose(E, 13)[0]) == "PSL"
    F, E = field_build((2, 3, 12))
    assert all(quotient_type((2, 3, 12), P) == "PGL" for P in prime_decompose(E, 11))
    F, E = field_build((3, 3, 10))
    (P3,) = prime_decompose(E, 3)
    assert quotient_type((3, 3, 10), P3) == "PSL" and P3.norm == 81


def test_label_parsing():
    spec = parse_ideal_label((2, 3, 7), "(mu+2)(mu-3)")
    assert spec.norm == 91 and len(spec.e_primes) == 2
    assert parse_ideal_label((2, 3, 7), "u+2").norm == 7
    assert parse_ideal_label((2, 3, 12), "1-2*sqrt3").norm == 11
    assert parse_ideal_label((3, 3, 10), "nu^2+nu-4").norm == 19
    with pytest.raises(UnsupportedIdeal):
        parse_ideal_label((2, 3, 7), "(u+2)^2")
    with pytest.raises(UnsupportedIdeal):
        parse_ideal_label((2, 3, 7), "2")
    for bad in ("u+q", "0", "1", "(u+2"):
        with pytest.raises(ValueError):
            parse_ideal_label((2, 3, 7), bad)


@pytest.mark.parametrize("tau,label,trace,length,genus", [
    ((2, 3, 7), "mu+2", "2*u^2+u-1", 3.936, 3),
    ((2, 7, 7), "2*mu+3", "6*u^2+5*u-4", 6.393, 118),
    ((2, 3, 12), "1-2*sqrt3", "19*u^2-7", 8.314, 56),
])
def test_sys_upper_examples(tau, label, trace, length, genus):
    r = sys_upper(tau, parse_ideal_label(tau, label))
    assert r.trace_pretty() == trace
    assert round(r.sys_upper, 3) == length
    assert r.genus == genus
    assert r.min_trace_float > 2 and r.sys_upper > 0
    assert r.generators_scanned == r.index + 1
    # the minimizing Schreier generator lies in the congruence kernel
    O = build_order(tau)
    w = Word.parse(r.min_word, (tau[0], tau[1]))
    assert all(membership_test(w, O, P) for P in r.ideal.f_primes)
    assert abs(float(O.word_eval(w).trd())) == pytest.approx(r.min_trace_float)


def test_2312_alt_form():
    r = sys_upper((2, 3, 12), parse_ideal_label((2, 3, 12), "5"))
    assert r.trace_alt == "(94*sqrt3+168)*cos(pi/12)"
    assert round(r.sys_upper, 3) == 11.534 and r.genus == 326


def test_exact_min_agrees_with_256_bit_intervals():
    for tau, label in [((2, 3, 7), "u-3"), ((3, 3, 10), "nu^2+nu-4")]:
        O = build_order(tau)
        kd = congruence_kernel(tau, parse_ideal_label(tau, label))
        sset = schreier_generators(kd.graph)
        tm = minimal_trace(O, sset)
        lo_min, hi_min = embed_real(tm.trace, O.F.distinguished, 256)
        for k, t in sset.traces.items():
            lo, hi = embed_real(t, O.F.distinguished, 256)
            with mpmath.workprec(300):
                if k != tm.gen_index and t != tm.trace:
                    assert hi_min < lo or (lo <= hi_min and t == tm.trace)


def test_determinism_threads():
    tau = (2, 3, 7)
    spec = parse_ideal_label(tau, "u+3")
    a = sys_upper(tau, spec, threads=1).to_json()
    b = sys_upper(tau, spec, threads=8).to_json()
    c = sys_upper(tau, spec, threads=1).to_json()
    assert json.dumps(a) == json.dumps(b) == json.dumps(c)


def test_csv_json_agree():
    rows, _ = table_emit((2, 3, 7), 13)
    data = list(csv.DictReader(io.StringIO(reports_csv(rows))))
    assert [d["ideal_label"] for d in data] == [r.label for r in rows]
    for d, r in zip(data, rows):
        j = r.to_json()
        assert d["trace_pretty"] == j["min_trace"]["pretty"]
        assert int(d["norm"]) == j["ideal"]["norm"] and int(d["genus"]) == j["genus"]
        assert float(d["sys_upper"]) == round(j["sys_upper"], 3)
        assert float(d["log_ref"]) == round(j["log_ref"], 3)


def test_table_small():
    rows, skipped = table_emit((2, 3, 7), 30)
    assert [r.norm for r in rows] == [7, 13, 13, 13, 27, 29, 29, 29]
    assert any(s.norm == 8 and "characteristic 2" in s.reason for s in skipped)
    assert table_emit((2, 3, 7), 1) == ([], [])


def test_epimorphism_search():
    G = psl2(GFq(7))
    pair = find_epimorphism_random((2, 3, 7), G, 168, seed=3)
    assert pair is not None
    again = find_epimorphism_random((2, 3, 7), G, 168, seed=3)
    assert pair == again
    z1, z2 = pair
    assert G.order(z1) == 2 and G.order(z2) == 3 and G.order(G.mul(z1, z2)) == 7
    # PSL2(F_5) has no elements of order 7
    assert find_epimorphism_random((2, 3, 7), psl2(GFq(5)), 60, seed=0, budget=200) is None


def test_table_row_counts():
    specs, skipped = table_specs((2, 3, 7), 100)
    assert len(specs) == 26
    assert {s.reason for s in skipped} == {"residue characteristic 2", "prime power ideal"}
    assert sorted(s.norm for s in skipped) == [8, 49, 56, 64]

    specs, _ = table_specs((3, 3, 10), 81)
    assert len(specs) == 21
    listed = ["nu^2+nu-4", "nu^2-nu-4", "nu^3-nu^2-3*nu+1", "nu^3+nu^2-3*nu-1",
              "nu^3-3*nu-3", "nu-3", "nu^3-3*nu+3", "nu+3",
              "nu^3+nu^2-2*nu-4", "nu^3-nu^2-4*nu+1", "nu^3+nu^2-4*nu-1", "nu^3-nu^2-2*nu+4", "3"]
    keys = {tuple((P.p, P.factor) for P in s.e_primes) for s in specs}
    for lab in listed:
        assert tuple((P.p, P.factor) for P in parse_ideal_label((3, 3, 10), lab).e_primes) in keys, lab
