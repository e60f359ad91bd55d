"""Command line entry point: ``dhl-omega {table,eval,optimize,verify}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import __version__, kernels
from .exact import format_rational, parse_rational
from .functionals import (
    ConstraintError,
    SieveParams,
    UnsupportedParamsError,
    components,
    nested_L,
    nested_L_closed,
    omega_value,
)
from .optimizer import DependentBasisError, dhl, optimize
from .poly import Poly
from .regions import DivergentKernelError, QuadratureError

EXIT_OK = 0
EXIT_CONSTRAINT = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4

CONFIG_KEYS = (
    "regime", "k", "theta", "ell", "eps", "eta", "poly", "basis", "degree",
    "eps_grid", "format", "seed", "samples", "tol", "method", "suite", "name",
)


class VerificationFailure(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _count(text: str) -> int:
    """Positive integer, also accepting forms like ``1e7``."""
    try:
        val = float(text) if any(c in text for c in "eE.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val != int(val) or val <= 0:
        raise argparse.ArgumentTypeError(f"not a positive integer: {text!r}")
    return int(val)


def _grid(text: str) -> List[Fraction]:
    return [_rational(p) for p in text.split(",") if p.strip()]


def read_config(path: str) -> Dict[str, str]:
    """``key=value`` lines; ``#`` starts a comment."""
    out: Dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def dump_config(args: argparse.Namespace) -> str:
    """Inverse of :func:`read_config` for the keys set on ``args``."""
    lines = []
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is None:
            continue
        if isinstance(val, Fraction):
            val = format_rational(val)
        elif isinstance(val, list):
            val = ",".join(format_rational(v) for v in val)
        lines.append(f"{key}={val}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; explicit flags take precedence")
    common.add_argument("--format", choices=("text", "csv", "json"), default=None)
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance (default 1e-12)")
    common.add_argument("--method", choices=("exact", "quadrature"), default=None)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--regime", choices=("standard", "extended", "epsilon"))
    params.add_argument("--k", type=int)
    params.add_argument("--theta", type=_rational)
    params.add_argument("--ell", type=_rational)
    params.add_argument("--eps", type=_rational)
    params.add_argument("--eta", type=_rational)

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--seed", type=int, default=None)
    mc.add_argument("--samples", type=_count, default=None)

    parser = argparse.ArgumentParser(prog="dhl-omega", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="recompute a reference table")
    t.add_argument("name", nargs="?", choices=("B", "C", "D", "E", "G", "b", "c", "d", "e", "g"))

    e = sub.add_parser("eval", parents=[common, params], help="evaluate I, Q, J and Omega for one polynomial")
    e.add_argument("--poly", help='coefficients "c0,c1,...@basis"')
    e.add_argument("--basis", choices=("x", "1-x", "1+eps-x"), help="basis when --poly has no @ suffix")

    o = sub.add_parser("optimize", parents=[common, params], help="minimize Omega over a polynomial degree")
    o.add_argument("--degree", type=int)
    o.add_argument("--eps-grid", dest="eps_grid", type=_grid, help="comma separated eps values to scan")

    v = sub.add_parser("verify", parents=[common, params, mc], help="run a verification suite")
    v.add_argument("--suite", choices=("collapse", "identities", "tables"))
    return parser


_DEFAULTS = {"format": "text", "tol": 1e-12, "method": "exact", "seed": 0, "samples": 10 ** 6}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        conv = {
            "k": int, "degree": int, "seed": int, "tol": float, "samples": _count,
            "theta": _rational, "ell": _rational, "eps": _rational, "eta": _rational,
            "eps_grid": _grid,
        }
        try:
            cfg = read_config(args.config)
            for key, raw in cfg.items():
                if not hasattr(args, key) or getattr(args, key) is not None:
                    continue
                setattr(args, key, conv.get(key, str)(raw))
        except (OSError, ValueError, argparse.ArgumentTypeError) as exc:
            parser.error(str(exc))
    for key, val in _DEFAULTS.items():
        if getattr(args, key, "absent") is None:
            setattr(args, key, val)
    if args.command == "table" and not args.name:
        parser.error("table needs a name (B, C, D, E or G)")
    return args


def params_from(args: argparse.Namespace) -> SieveParams:
    if not args.regime or args.k is None or args.theta is None:
        raise ConstraintError("--regime, --k and --theta are required")
    if args.regime == "epsilon":
        return SieveParams.epsilon(args.k, args.theta, args.eps or 0, args.ell, args.eta)
    return SieveParams(args.regime, args.k, args.theta, args.ell if args.ell is not None else 1, args.eps or 0, args.eta)


def poly_from(args: argparse.Namespace) -> Poly:
    if not args.poly:
        raise ConstraintError("--poly is required")
    lit = args.poly if "@" in args.poly else f"{args.poly}@{args.basis or 'x'}"
    return Poly.parse(lit, eps=args.eps)


# ---------------------------------------------------------------------------
# output


def _envelope(args, results: List[Dict], params: Optional[Dict] = None, extra: Optional[Dict] = None) -> Dict:
    out = {
        "command": args.command,
        "params": params or {},
        "results": results,
        "provenance": {
            "package": "artifact",
            "module": "dhl_omega",
            "mc_backend": kernels.BACKEND,
            "method": args.method,
            "tol": args.tol,
        },
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        out["provenance"].update(extra)
    return out


def _render(args, doc: Dict, columns: Sequence[str]) -> str:
    if args.format == "json":
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    rows = doc["results"]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _cell(r.get(c)) for c in columns})
        return buf.getvalue().rstrip("\r\n")
    head = []
    if doc["params"]:
        head.append(" ".join(f"{k}={v}" for k, v in doc["params"].items()))
    widths = [max(len(c), *(len(_cell(r.get(c))) for r in rows)) if rows else len(c) for c in columns]
    lines = head + ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(_cell(r.get(c)).ljust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


# ---------------------------------------------------------------------------
# commands


def cmd_table(args) -> int:
    from . import tables

    cells = tables.compute(args.name, method=args.method)
    results = [c.as_dict() for c in cells]
    doc = _envelope(args, results, {"table": args.name.upper()}, {"data_version": tables.reference()["version"]})
    cols = ["k", "column", "value", "reference", "delta", "tolerance", "pass", "witness"]
    print(_render(args, doc, cols))
    return EXIT_OK


def cmd_eval(args) -> int:
    params = params_from(args)
    f = poly_from(args)
    comps = components(params, f, method=args.method, tol=args.tol)
    omega = omega_value(params, f, method=args.method, tol=args.tol)
    results = []
    for name, val in (("I", comps.I), ("Q", comps.Q), ("J", comps.J), ("Omega", omega)):
        if val is None:
            continue
        row = {"name": name, **val.as_dict()}
        results.append(row)
    doc = _envelope(args, results, {**params.as_dict(), "poly": f.literal()})
    print(_render(args, doc, ["name", "method", "value", "error_bound", "exact"]))
    return EXIT_OK


def cmd_optimize(args) -> int:
    params = params_from(args)
    if args.degree is None:
        raise ConstraintError("--degree is required")
    rep = optimize(params, args.degree, args.eps_grid, method=args.method, tol=args.tol)
    st = dhl(rep)
    row = {"name": "Omega", "value": rep.bound, "error_bound": rep.error, "method": rep.method}
    row.update({k: v for k, v in rep.as_dict().items() if k not in ("params", "bound", "error_bound", "method")})
    row["statement"] = str(st)
    doc = _envelope(args, [row], {**rep.params.as_dict(), "degree": args.degree})
    print(_render(args, doc, ["name", "value", "error_bound", "rho", "witness", "eigen_residual", "statement"]))
    return EXIT_OK


def _suite_identities(args) -> List[Dict]:
    from . import tables
    from .oracle import random_test_polys

    rows = []
    for k in range(3, 9):
        ok = nested_L(k) == nested_L_closed(k)
        rows.append({"check": f"nested-L k={k}", "value": 0.0 if ok else 1.0, "limit": 0.0, "pass": ok})
    polys = random_test_polys(args.seed, 5, 3)
    for k in (2, 5):
        for theta in (Fraction(1, 4), Fraction(1, 2)):
            spread = 0.0
            for f in polys:
                vals = [omega_value(SieveParams.epsilon(k, theta, 0, ell=l), f).numeric for l in (1, 2, 5)]
                spread = max(spread, max(vals) - min(vals))
            rows.append({"check": f"ell-invariance k={k} theta={format_rational(theta)}", "value": spread, "limit": 1e-8, "pass": spread < 1e-8})
    f = Poly.parse(tables.reference()["K4"]["witness"])
    from .functionals import ext_I, ext_Q

    I = ext_I(f, 4)
    ok = I.exact == parse_rational(tables.reference()["K4"]["I_exact"])
    rows.append({"check": "k=4 extended I exact", "value": I.numeric, "limit": 0.0, "pass": ok})
    Q = ext_Q(f, 4, Fraction(1, 2))
    ok = Q.exact == tables.k4_closed_form()
    rows.append({"check": "k=4 extended Q closed form", "value": Q.numeric, "limit": 0.0, "pass": ok})
    return rows


def _suite_tables(args) -> List[Dict]:
    from . import tables

    rows = []
    cells = tables.table_C(args.method) + tables.table_G(args.method) + tables.table_D(args.method, ks=(3, 4, 5))
    for c in cells:
        rows.append({"check": f"table {c.table} k={c.k} {c.column}", "value": c.delta, "limit": c.tolerance, "pass": c.passed})
    return rows


def _suite_collapse(args) -> List[Dict]:
    from .oracle import collapsed_value, compare, mc_functional, random_test_polys

    regimes = [args.regime] if args.regime else ["standard", "extended", "epsilon"]
    ks = [args.k] if args.k else [3, 4, 5]
    polys = random_test_polys(args.seed, 3, 3)
    rows = []
    for regime in regimes:
        for k in ks:
            theta = args.theta or Fraction(1, 4)
            if regime == "epsilon":
                p = SieveParams.epsilon(k, theta, args.eps if args.eps is not None else Fraction(1, 5), args.ell, args.eta)
            else:
                p = SieveParams(regime, k, theta)
            for n, f in enumerate(polys):
                for which in ("I", "Q", "J"):
                    if which == "J" and regime == "extended":
                        continue
                    mc = mc_functional(which, p, f, samples=args.samples, seed=args.seed + n)
                    z = compare(collapsed_value(p, f, which, method=args.method), mc)
                    rows.append({"check": f"{regime} k={k} f{n} {which}", "value": z, "limit": 4.0, "pass": z <= 4.0})
    return rows


def cmd_verify(args) -> int:
    suite = args.suite or "identities"
    rows = {"identities": _suite_identities, "tables": _suite_tables, "collapse": _suite_collapse}[suite](args)
    params = {"suite": suite, "seed": args.seed, "samples": args.samples}
    doc = _envelope(args, rows, params)
    print(_render(args, doc, ["check", "value", "limit", "pass"]))
    failed = [r for r in rows if not r["pass"]]
    if args.format == "text":
        print(f"{len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {"table": cmd_table, "eval": cmd_eval, "optimize": cmd_optimize, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConstraintError, UnsupportedParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (QuadratureError, DivergentKernelError, DependentBasisError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
