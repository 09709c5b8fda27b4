"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclo
from .metaplectic import Cusp, Diag, Flip, Upper, cusps_of_gamma0
from .numeric_base import is_prime
from .oracle import SeriesSpec, fourier_extract
from .theta_engine import CoeffResult, ThetaTwist, gg_check
from .weil_local import rho_generator, xi_generator_value

SUPPORTED_TWIST_PRIMES = (5, 7, 11, 13)
NU_CAP = 400


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def threads() -> int:
    try:
        return max(1, int(os.environ.get("THETA_THREADS", "1")))
    except ValueError:
        return 1


def _matrix_rows(rows) -> list[list[str]]:
    return [[str(x) for x in row] for row in rows]


def coefficient_row(r: CoeffResult) -> dict:
    return {
        "nu": r.frequency,
        "exact_order": r.exact.order,
        "exact_coeffs": [str(Fraction(c, r.exact.den)) for c in r.exact.num],
        "re": r.approx.real,
        "im": r.approx.imag,
        "abs": r.absolute,
    }


def table_json(twist: ThetaTwist, cusp: Cusp, rows: list[dict], source: str = "engine") -> dict:
    return {
        "source": source,
        "level": twist.level,
        "twist": {"p": twist.p, "j": twist.j if twist.p else None},
        "cusp": {"u": cusp.u, "w": cusp.w},
        "scaling_matrix": _matrix_rows(twist.scaling_matrix(cusp).rows()),
        "coefficients": rows,
    }


CSV_COLUMNS = ["level", "p", "j", "u", "w", "nu", "exact_order", "exact_coeffs", "re", "im", "abs"]


def tables_csv(tables: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for t in tables:
        for row in t["coefficients"]:
            writer.writerow([
                t["level"],
                t["twist"]["p"] if t["twist"]["p"] is not None else "",
                t["twist"]["j"] if t["twist"]["j"] is not None else "",
                t["cusp"]["u"],
                t["cusp"]["w"],
                row["nu"],
                "" if row["exact_order"] is None else row["exact_order"],
                ";".join(row["exact_coeffs"] or []),
                f"{row['re']:.17g}",
                f"{row['im']:.17g}",
                f"{row['abs']:.17g}",
            ])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _twist_from_args(args) -> ThetaTwist:
    if args.p is None:
        twist = ThetaTwist()
    else:
        if args.p not in SUPPORTED_TWIST_PRIMES:
            raise UsageError(f"--p must be one of {SUPPORTED_TWIST_PRIMES}")
        if not 1 <= args.j <= (args.p - 3) // 2:
            raise UsageError(f"--j must lie in 1..{(args.p - 3) // 2}")
        try:
            twist = ThetaTwist(args.p, args.j, args.g)
            twist.character()
        except ValueError as exc:
            raise UsageError(str(exc))
    if args.level is not None and args.level != twist.level:
        raise UsageError(f"--level {args.level} does not match the twist level {twist.level}")
    return twist


def _cusps_from_args(args, twist: ThetaTwist, default_all: bool) -> list[Cusp]:
    if not args.cusp:
        return twist.cusps() if default_all else [Cusp(1, 0)]
    if args.cusp == ["all"]:
        return twist.cusps()
    out = []
    for text in args.cusp:
        try:
            cusp = Cusp.parse(text)
        except ValueError as exc:
            raise UsageError(f"invalid cusp {text!r}: {exc}")
        try:
            twist.validate_cusp(cusp)
        except ValueError as exc:
            raise UsageError(str(exc))
        out.append(cusp)
    return out


def _nus(args) -> list[int]:
    if not 0 <= args.nmax <= NU_CAP:
        raise UsageError(f"--nmax must lie in 0..{NU_CAP}")
    return list(range(1, args.nmax + 1))


def _dump(tables: list[dict], fmt: str, out: str | None) -> None:
    if fmt == "csv":
        _emit(tables_csv(tables), out)
    else:
        _emit(json.dumps(tables, indent=2) + "\n", out)


def cmd_coeffs(args) -> int:
    twist = _twist_from_args(args)
    cusps = _cusps_from_args(args, twist, default_all=False)
    nus = _nus(args)
    tables = [table_json(twist, c, [coefficient_row(r) for r in twist.coefficients(c, nus)]) for c in cusps]
    _dump(tables, args.format, args.out)
    return 0


def _cyclo_json(x: Cyclo) -> dict:
    z = x.embed()
    return {"exact": x.to_json(), "re": z.real, "im": z.imag}


def cmd_matrix(args) -> int:
    p = args.p
    if p is None or not is_prime(p) or (p not in (2, 3) and p not in SUPPORTED_TWIST_PRIMES):
        raise UsageError("--p must be 2, 3 or one of 5, 7, 11, 13")
    a = Fraction(args.a)
    if args.gen == "upper":
        token = Upper(a)
    elif args.gen == "diag":
        if a == 0 or (a.numerator % p == 0) or (a.denominator % p == 0):
            raise UsageError("--a must be a unit at p for the diagonal generator")
        token = Diag(a)
    else:
        token = Flip()
    if p in (2, 3):
        payload = {"p": p, "generator": args.gen, "a": str(a), "xi": _cyclo_json(xi_generator_value(p, token))}
    else:
        m = rho_generator(p, token, args.basis, args.g)
        payload = {"p": p, "generator": args.gen, "a": str(a), **m.to_json()}
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_verify_gg(args) -> int:
    report = gg_check(5)
    payload = {
        "ok": report.ok,
        "product_check": report.product_ok,
        "cusps": [
            {"u": r.cusp.u, "w": r.cusp.w, "case": r.case, "pattern": r.pattern, "ok": r.ok,
             "unit_abs": r.unit_abs, "zero_abs": r.zero_abs}
            for r in report.cusps
        ],
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        counts: dict[tuple[str, str], int] = {}
        for r in report.cusps:
            counts[(r.case, r.pattern)] = counts.get((r.case, r.pattern), 0) + 1
        lines = [f"{n:4d} cusps  {case}: {pattern}" for (case, pattern), n in sorted(counts.items())]
        lines.append(f"failures: {len(report.failures())}; product check: {'ok' if report.product_ok else 'FAILED'}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if report.ok else 2


def compare_cusp(twist: ThetaTwist, cusp: Cusp, nus: Sequence[int]) -> list[dict]:
    if not nus:
        return []
    sigma = twist.scaling_matrix(cusp)
    spec = SeriesSpec.plan(twist.character(), sigma, max(nus))
    numeric = fourier_extract(spec, sigma, nus)
    exact = twist.coefficients(cusp, nus)
    return [
        {"u": cusp.u, "w": cusp.w, "nu": nu, "engine": [e.approx.real, e.approx.imag],
         "oracle": [o.real, o.imag], "delta": abs(e.approx - o)}
        for nu, e, o in zip(nus, exact, numeric.values)
    ]


def cmd_oracle_compare(args) -> int:
    twist = _twist_from_args(args)
    cusps = _cusps_from_args(args, twist, default_all=True)
    nus = _nus(args)
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = list(pool.map(lambda c: compare_cusp(twist, c, nus), cusps))
    entries = [e for chunk in results for e in chunk]
    worst = max((e["delta"] for e in entries), default=0.0)
    bad = [e for e in entries if e["delta"] >= args.tol]
    payload = {"level": twist.level, "twist": {"p": twist.p, "j": twist.j if twist.p else None},
               "cusps": len(cusps), "entries": len(entries), "max_delta": worst, "tolerance": args.tol,
               "violations": bad}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        text = f"cusps={len(cusps)} entries={len(entries)} max|delta|={worst:.3e} tol={args.tol:g}\n"
        text += "".join(f"violation u/w={e['u']}/{e['w']} nu={e['nu']} delta={e['delta']:.3e}\n" for e in bad)
        _emit(text, args.out)
    return 2 if bad else 0


def cmd_cusps(args) -> int:
    if args.level is None or args.level < 1:
        raise UsageError("--level must be a positive integer")
    cusps = cusps_of_gamma0(args.level)
    if args.format == "csv":
        _emit("u,w\n" + "".join(f"{c.u},{c.w}\n" for c in cusps), args.out)
    else:
        _emit(json.dumps([{"u": c.u, "w": c.w} for c in cusps], indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thetacusp", description="Fourier coefficients of twisted theta functions at cusps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json", "csv"), cusp=True):
        sp.add_argument("--level", type=int)
        sp.add_argument("--p", type=int, help="twist prime (5, 7, 11, 13); omit for theta_chi")
        sp.add_argument("--j", type=int, default=1, help="index of the even character psi_j")
        sp.add_argument("--g", type=int, help="generator of (Z/p)^x (default: least primitive root)")
        if cusp:
            sp.add_argument("--cusp", action="append", help="inf, u/w, or 'all' (repeatable)")
        sp.add_argument("--nmax", type=int, default=100, help="largest frequency")
        sp.add_argument("--format", choices=list(formats), default=formats[0])
        sp.add_argument("--out")

    sp = sub.add_parser("coeffs", help="exact coefficient tables")
    common(sp)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("matrix", help="generator matrices and xi values")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--gen", choices=["flip", "upper", "diag"], required=True)
    sp.add_argument("--a", default="1", help="parameter of the upper or diagonal generator")
    sp.add_argument("--g", type=int)
    sp.add_argument("--basis", choices=["B1", "B2"], default="B2")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("verify-gg", help="check the five-twist absolute-value patterns")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_gg)

    sp = sub.add_parser("oracle-compare", help="engine against the numerical oracle")
    common(sp, formats=("text", "json"))
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_oracle_compare)

    sp = sub.add_parser("cusps", help="cusp representatives of Gamma_0(N)")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_cusps)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"thetacusp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
