"""Command-line front end: series, identity, joyce and numeric subcommands."""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import forms, joyce, lerch
from .catalog import DUALITY_KS, identity_ids, verify_identity
from .errors import AccuracyError, ResourceLimitError
from .numeric import LAWS, HPComplex, law_check
from .precision import context

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

DEFAULTS = {"order": "40", "prec": 50, "format": "text", "seed": 0,
            "max_compositions": joyce.MAX_COMPOSITION_N}


@dataclass(frozen=True)
class RunConfig:
    command: str
    order: Fraction
    prec: int
    format: str
    seed: int
    max_compositions: int

    def __post_init__(self):
        if self.order <= 0:
            raise ValueError("--order must be positive")
        if self.prec < 10:
            raise ValueError("--prec must be at least 10")


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--order", help="truncation order, e.g. 40 or 81/2 (default 40)")
    p.add_argument("--prec", type=int, help="decimal digits for numeric work (default 50)")
    p.add_argument("--format", choices=("json", "csv", "text"), help="output format (default text)")
    p.add_argument("--seed", type=int, help="seed for random points (default 0)")
    p.add_argument("--max-compositions", type=int, dest="max_compositions",
                   help="largest n for composition enumeration (default 16)")
    return p


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = argparse.ArgumentParser(prog="qmock", parents=[flags],
                                     description="Exact q-series identities and numerical mock-modular checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", parents=[flags], help="print a truncated q-expansion")
    s.add_argument("name", help="eta, theta1..3, E2/E4/..., half_theta, appell1..3, h1..3, g, J<k>, curlyJ<k>")
    s.add_argument("--k", type=int, help="index for J and curlyJ when not part of the name")
    s.add_argument("--normalization", choices=joyce.NORMALIZATIONS, default=joyce.CANONICAL_NORMALIZATION)

    i = sub.add_parser("identity", parents=[flags], help="verify exact identities")
    i.add_argument("id", help="catalog id, DUALITY, or 'all'")
    i.add_argument("--k", type=int, help="even weight for DUALITY")
    i.add_argument("--normalization", choices=joyce.NORMALIZATIONS, default=joyce.CANONICAL_NORMALIZATION)
    i.add_argument("--include-extra", action="store_true", help="with 'all', also run the extra checks")

    j = sub.add_parser("joyce", parents=[flags], help="Joyce invariants and residues")
    j.add_argument("--n-max", type=int, default=10, dest="n_max")
    j.add_argument("--zeta-partial", action="store_true", dest="zeta_partial",
                   help="print sum_{n<=n_max} Res J^{n alpha}/n^k instead of the table")
    j.add_argument("--k", type=int, default=0)

    n = sub.add_parser("numeric", parents=[flags], help="numerical transformation laws")
    n.add_argument("law", help="law id or 'all'")
    n.add_argument("--tau", nargs="+", help="points such as 0.5+1.0i (laws needing u, v, z use --random)")
    n.add_argument("--random", type=int, metavar="M", help="use M seeded random points per law")
    return parser


def _config(args) -> RunConfig:
    get = lambda k: getattr(args, k, DEFAULTS[k])
    return RunConfig(args.command, Fraction(get("order")), int(get("prec")), get("format"),
                     int(get("seed")), int(get("max_compositions")))


def _emit(cfg: RunConfig, payload, text_lines: list[str], csv_text: str | None = None) -> None:
    if cfg.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    elif cfg.format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


# ----------------------------------------------------------------------


def series_by_name(name: str, order: Fraction, k: int | None = None,
                   normalization: str = joyce.CANONICAL_NORMALIZATION):
    m = re.fullmatch(r"(theta|appell|h)([123])", name)
    if m:
        fn = {"theta": forms.theta, "appell": lerch.appell_sum, "h": lerch.h_series}[m.group(1)]
        return fn(int(m.group(2)), order)
    m = re.fullmatch(r"E(\d+)", name)
    if m:
        return forms.eisenstein(int(m.group(1)), order)
    m = re.fullmatch(r"(curlyJ|J)(-?\d+)?", name)
    if m:
        idx = int(m.group(2)) if m.group(2) is not None else k
        if idx is None:
            raise ValueError(f"{name} needs an index, e.g. {m.group(1)}-2 or --k -2")
        if m.group(1) == "J":
            return joyce.jk_series(idx, order)
        return joyce.curly_jk_series(idx, order, normalization)
    simple = {"eta": forms.eta, "half_theta": forms.half_theta, "g": lerch.g_series}
    if name in simple:
        return simple[name](order)
    raise ValueError(f"unknown series name {name!r}")


def cmd_series(cfg: RunConfig, args) -> int:
    s = series_by_name(args.name, cfg.order, args.k, args.normalization)
    lines = [f"{_fs(r)} -> {c}" for r, c in s.items()]
    lines.append(f"O(q^{_fs(s.truncation)})")
    _emit(cfg, s.to_json(), lines, s.to_csv())
    return EXIT_OK


def cmd_identity(cfg: RunConfig, args) -> int:
    if args.id == "all":
        reports = [verify_identity(i, cfg.order) for i in identity_ids(args.include_extra)]
        reports += [verify_identity("DUALITY", cfg.order, k, args.normalization) for k in DUALITY_KS]
    else:
        reports = [verify_identity(args.id, cfg.order, args.k, args.normalization)]
    payload = [r.to_json() for r in reports]
    csv_text = "id,order,pass,first_mismatch_exponent\n" + "".join(
        f"{r.id},{_fs(r.order)},{str(r.passed).lower()},"
        f"{'' if r.first_mismatch is None else _fs(r.first_mismatch.exponent)}\n" for r in reports)
    _emit(cfg, payload if len(payload) > 1 else payload[0], [r.line() for r in reports], csv_text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_joyce(cfg: RunConfig, args) -> int:
    if args.n_max < 1:
        raise ValueError("--n-max must be at least 1")
    if args.zeta_partial:
        ctx = context(cfg.prec)
        value = joyce.zeta_residue_partial(args.k, args.n_max)
        approx = ctx.mpf(value.numerator) / value.denominator
        target = -ctx.zeta(args.k + 2)
        payload = {"k": args.k, "n_max": args.n_max, "value": ctx.nstr(approx, 30),
                   "minus_zeta": ctx.nstr(target, 30),
                   "difference": ctx.nstr(approx - target, 5)}
        lines = [f"sum_(n<={args.n_max}) Res/n^{args.k} = {payload['value']}",
                 f"-zeta({args.k + 2}) = {payload['minus_zeta']}",
                 f"difference = {payload['difference']}"]
        _emit(cfg, payload, lines, ",".join(payload) + "\n" + ",".join(map(str, payload.values())) + "\n")
        return EXIT_OK
    rows = joyce.joyce_table(args.n_max, cfg.max_compositions)
    payload = [{"n": r["n"], "closed_form": str(r["closed_form"]),
                "closed_form_poly": r["closed_form"].to_json(),
                "composition_sum_agrees": r["composition_sum_agrees"],
                "residue": _fs(r["residue"])} for r in rows]
    lines = [f"n={r['n']}  J = {r['closed_form']}  agree={r['composition_sum_agrees']}  "
             f"residue={r['residue']}" for r in payload]
    csv_text = "n,closed_form,composition_sum_agrees,residue\n" + "".join(
        f"{r['n']},{r['closed_form']},{r['composition_sum_agrees']},{r['residue']}\n" for r in payload)
    _emit(cfg, payload, lines, csv_text)
    bad = [r for r in rows if r["composition_sum_agrees"] is False]
    return EXIT_FAIL if bad else EXIT_OK


def cmd_numeric(cfg: RunConfig, args) -> int:
    laws = list(LAWS) if args.law == "all" else [args.law]
    for law in laws:
        if law not in LAWS:
            raise ValueError(f"unknown law {law!r}")
    results = []
    for law in laws:
        if args.tau:
            if len(LAWS[law].variables) > 1:
                raise ValueError(f"law {law} needs u, v points; use --random")
            pts = [{"tau": HPComplex.parse(t, cfg.prec)} for t in args.tau]
            results += law_check(law, pts, cfg.prec)
        else:
            results += law_check(law, None, cfg.prec, m=args.random or 5, seed=cfg.seed)
    payload = [r.to_json() for r in results]
    csv_text = "law,tau,residual,relative,pass\n" + "".join(
        f"{p['law']},{p['point']['tau']},{p['residual']},{p['relative']},{str(p['pass']).lower()}\n"
        for p in payload)
    _emit(cfg, payload, [r.line() for r in results], csv_text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _fs(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


COMMANDS = {"series": cmd_series, "identity": cmd_identity, "joyce": cmd_joyce, "numeric": cmd_numeric}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[cfg.command](cfg, args)
    except (ResourceLimitError, AccuracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
