"""Command line front end: info, primes, sysbound, table."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .exactfield import FieldError, UnsupportedPrime, check_triple, field_build, poly_to_json
from .fingroup import CapExceeded
from .quatorder import build_order, even_order, order_reduced_discriminant, r_tau
from .sysbound import (DEFAULT_CAP, DEFAULT_SEED, CSV_COLUMNS, SysReport, UnsupportedIdeal, check_support,
                       parse_ideal_label, predicted_size, prime_label, primes_of_E, quotient_type,
                       reports_csv, spec_from_primes, supported_primes, sys_upper, table_emit)

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_CAP = 0, 2, 3, 4


def _triple(ns) -> tuple[int, int, int]:
    return check_triple((ns.a, ns.b, ns.c))


def _emit(obj, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def cmd_info(ns) -> int:
    tau = _triple(ns)
    F, E = field_build(tau)
    O = build_order(tau)
    ev = even_order(tau)
    delta, _ = order_reduced_discriminant(O)
    r = r_tau(tau)
    info = {
        "tau": list(tau),
        "F_degree": F.degree,
        "F_min_poly": list(F.min_poly),
        "E_degree": E.field.degree,
        "E_min_poly": list(E.field.min_poly),
        "E_generator": E.theta.pretty() if not E.is_whole else F.symbol,
        "delta": delta.pretty(),
        "B_params": [O.alg.x_param.pretty(), O.alg.y_param.pretty()],
        "A_params": [ev.algebra.x_param.pretty(), ev.algebra.y_param.pretty()],
        "reduced_discriminant": f"({delta.pretty()})",
        "r_tau": r,
        "arithmetic": r == 1,
    }
    _emit(info, "json" if ns.format == "json" else "pretty")
    return EXIT_OK


def cmd_primes(ns) -> int:
    tau = _triple(ns)
    ok, skipped = supported_primes(tau, ns.max_norm)
    O = build_order(tau)
    rows = []
    for P in ok:
        spec = spec_from_primes(tau, [P], prime_label(tau, P))
        kind = quotient_type(tau, P)
        rows.append({"label": spec.label, "norm": P.norm, "p": P.p, "f": P.f, "e": P.e,
                     "quotient": kind, "index": predicted_size(kind, P.norm)})
    rows.sort(key=lambda r: (r["norm"], r["label"]))
    skips = [{"label": s.label, "norm": s.norm, "reason": s.reason} for s in skipped]
    if ns.format == "json":
        print(json.dumps({"supported": rows, "skipped": skips}, indent=2))
    elif ns.format == "csv":
        print("label,norm,p,f,e,quotient,index,status")
        for r in rows:
            print(f"{r['label']},{r['norm']},{r['p']},{r['f']},{r['e']},{r['quotient']},{r['index']},supported")
        for s in skips:
            print(f"{s['label']},{s['norm']},,,,,,skipped: {s['reason']}")
    else:
        for r in rows:
            print(f"{r['label']:<24} N={r['norm']:<6} {r['quotient']}2  index {r['index']}")
        for s in skips:
            print(f"{s['label']:<24} N={s['norm']:<6} skipped: {s['reason']}")
    return EXIT_OK


def _selected_specs(ns, tau):
    if ns.ideal:
        return [parse_ideal_label(tau, ns.ideal)]
    if ns.p is None:
        raise ValueError("one of --ideal or --p is required")
    primes = primes_of_E(tau, ns.p)
    if ns.which == "all":
        idx = list(range(len(primes)))
    else:
        try:
            idx = [int(s) for s in ns.which.split("/")]
        except ValueError:
            raise ValueError(f"bad --which {ns.which!r}") from None
    if any(i < 0 or i >= len(primes) for i in idx):
        raise ValueError(f"--which out of range: {len(primes)} prime(s) above {ns.p}")
    specs = []
    for i in idx:
        P = primes[i]
        if P.p == 2:
            raise UnsupportedIdeal("residue characteristic 2")
        specs.append(spec_from_primes(tau, [P], prime_label(tau, P)))
    return specs


def _print_reports(reports: Sequence[SysReport], fmt: str, timing: bool, as_list: bool = False) -> None:
    if fmt == "csv":
        sys.stdout.write(reports_csv(reports))
    elif fmt == "json":
        out = [r.to_json(timing) for r in reports]
        print(json.dumps(out[0] if len(out) == 1 and not as_list else out, indent=2))
    else:
        print(f"{'ideal':<24} {'N':>6}  {'trace':<40} {'sys':>8} {'genus':>7} {'log_ref':>8}")
        for r in reports:
            tr = r.trace_pretty() + (f" = {r.trace_alt}" if r.trace_alt else "")
            print(f"{r.label:<24} {r.norm:>6}  {tr:<40} {r.sys_upper:>8.3f} {r.genus:>7} {r.log_ref:>8.3f}")
            if r.flags:
                print(f"{'':<24} {'':>6}  flags: {', '.join(r.flags)}")


def cmd_sysbound(ns) -> int:
    tau = _triple(ns)
    specs = _selected_specs(ns, tau)
    reports = []
    for k, spec in enumerate(specs):
        dump = ns.dump_generators
        if dump and len(specs) > 1:
            dump = f"{dump}.{k}"
        reports.append(sys_upper(tau, spec, ns.seed, ns.threads, ns.precision_bits, ns.cap, dump))
    _print_reports(reports, ns.format, ns.timing)
    return EXIT_OK


def cmd_table(ns) -> int:
    tau = _triple(ns)
    rows, skipped = table_emit(tau, ns.max_norm, ns.seed, ns.threads, not ns.no_composites, ns.cap,
                               ns.precision_bits)
    _print_reports(rows, ns.format, ns.timing, as_list=True)
    for s in skipped:
        print(f"skipped {s.label} (norm {s.norm}): {s.reason}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("a", type=int)
    common.add_argument("b", type=int)
    common.add_argument("c", type=int)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--precision-bits", type=int, default=128)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum quotient size")
    common.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON output")

    parser = argparse.ArgumentParser(prog="trisys", description="Systole upper bounds for triangular modular curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="field and algebra summary")
    p = sub.add_parser("primes", parents=[common], help="supported primes of E up to a norm bound")
    p.add_argument("--max-norm", type=int, required=True)
    s = sub.add_parser("sysbound", parents=[common], help="systole bound for one ideal")
    s.add_argument("--ideal", help="generator of the ideal, e.g. 'u+2' or '(mu+2)(mu-3)'")
    s.add_argument("--p", type=int, help="rational prime; pick primes above it with --which")
    s.add_argument("--which", default="0", help="index list like 0/1, or 'all'")
    s.add_argument("--dump-generators", metavar="PATH", help="write Schreier generators (gzip text)")
    t = sub.add_parser("table", parents=[common], help="rows for all supported ideals up to a norm bound")
    t.add_argument("--max-norm", type=int, required=True)
    t.add_argument("--no-composites", action="store_true", help="prime ideals only")
    return parser


_COMMANDS = {"info": cmd_info, "primes": cmd_primes, "sysbound": cmd_sysbound, "table": cmd_table}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.precision_bits < 64:
        parser.error("--precision-bits must be at least 64")
    if ns.threads < 1:
        parser.error("--threads must be positive")
    try:
        return _COMMANDS[ns.command](ns)
    except (UnsupportedIdeal, UnsupportedPrime) as exc:
        print(f"unsupported ideal: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
