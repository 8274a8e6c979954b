"""Command-line harness: ``verify``, ``sweep``, ``algebra`` and ``list``.

Exit codes: 0 success, 1 a suite ran and failed, 2 usage or configuration
error.  Suite parameters are free ``--name value`` pairs (see ``list``);
a ``--config`` file of ``key=value`` lines supplies the same keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time

import numpy as np

from . import jordan as J
from .quad import QuadratureSpec
from .results import jsonable
from .suites import SUITES, ConfigError, SuiteContext, run_cases

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RESERVED = {"cone", "quad", "tol", "seed", "out", "csv", "config", "grid"}


class UsageError(Exception):
    pass


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _extra_params(tokens: list[str]) -> dict:
    """``--name value`` (or ``--name=value``) pairs left over by argparse."""
    out, i = {}, 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise UsageError(f"unexpected argument {tok!r}")
        key, sep, value = tok[2:].partition("=")
        if not sep:
            if i + 1 >= len(tokens):
                raise UsageError(f"missing value for --{key}")
            value = tokens[i + 1]
            i += 1
        out[key.replace("-", "_")] = value
        i += 1
    return out


def _settings(args, extra: dict) -> dict:
    """Merge config file, then command line; returns cone, spec, tol, seed, params."""
    conf = _read_config(args.config) if args.config else {}
    merged = {**conf, **extra}
    for key in ("cone", "quad", "tol", "seed", "out", "csv"):
        if getattr(args, key, None) is not None:
            merged[key] = getattr(args, key)
    try:
        cone = J.parse_cone(str(merged.get("cone", "halfline")))
        spec = QuadratureSpec.from_text(merged["quad"]) if merged.get("quad") else None
        tol = float(merged["tol"]) if merged.get("tol") is not None else None
        seed = int(merged.get("seed", 42))
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    params = {k: v for k, v in merged.items() if k not in RESERVED}
    return {"cone": cone, "spec": spec, "tol": tol, "seed": seed, "params": params, "out": merged.get("out"), "csv": merged.get("csv")}


def _context(s: dict, params: dict | None = None, strict: bool = True) -> SuiteContext:
    return SuiteContext(s["cone"], dict(s["params"] if params is None else params), s["spec"], s["tol"], s["seed"], strict)


def _config_echo(suite: str, s: dict) -> dict:
    return {
        "suite": suite,
        "cone": s["cone"].spec_string(),
        "params": s["params"],
        "quadrature": s["spec"].to_text() if s["spec"] else "suite defaults (see per-case records)",
        "tolerance": s["tol"],
        "seed": s["seed"],
    }


def run_suite(suite: str, s: dict) -> dict:
    """Run one suite and assemble the report (raises ConfigError on bad input)."""
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    ctx = _context(s)
    cases = run_cases(suite, ctx)
    return {
        "suite": suite,
        "config": jsonable(_config_echo(suite, s)),
        "cases": cases,
        "notes": ctx.notes,
        "passed": all(c["pass"] for c in cases),
        "wall_time": time.perf_counter() - t0,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def cmd_verify(args, extra) -> int:
    s = _settings(args, extra)
    report = run_suite(args.suite, s)
    if s["out"]:
        _write(s["out"], report_json(report))
    for c in report["cases"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {args.suite}: {c['case']}  computed={_short(c.get('computed'))}"
              + (f"  expected={_short(c['expected'])}" if "expected" in c else ""))
    print(f"{args.suite}: {'PASS' if report['passed'] else 'FAIL'} ({len(report['cases'])} cases, {report['wall_time']:.2f} s)")
    if not s["out"]:
        print(report_json(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _short(v) -> str:
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']:.6g}{v['im']:+.3g}j"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v[:6]) + (", ..." if len(v) > 6 else "") + "]"
    return str(v)


def parse_grid(text: str) -> tuple[str, list[str]]:
    """``name=a:b:n`` (n points, linear) or ``name=v1;v2;...`` (values may be comma lists)."""
    name, sep, body = text.partition("=")
    if not sep or not name.strip():
        raise UsageError(f"bad grid {text!r}; use name=start:stop:count or name=v1;v2")
    body = body.strip()
    if ":" in body:
        try:
            a, b, n = body.split(":")
            values = [f"{v:.12g}" for v in np.linspace(float(a), float(b), int(n))]
        except ValueError as exc:
            raise UsageError(f"bad grid range {body!r}") from exc
    else:
        values = [v.strip() for v in body.split(";") if v.strip()]
    if not values:
        raise UsageError(f"empty grid for {name!r}")
    return name.strip().replace("-", "_"), values


def _first(cases, key):
    for c in cases:
        v = c.get(key)
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return v
    return None


def cmd_sweep(args, extra) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if not args.grid:
        raise UsageError("sweep needs at least one --grid")
    if len(args.grid) > 2:
        raise UsageError("sweep takes one or two grid axes")
    s = _settings(args, extra)
    axes = [parse_grid(g) for g in args.grid]
    t0 = time.perf_counter()
    rows = []
    for values in itertools.product(*[v for _, v in axes]):
        cell = dict(zip([a for a, _ in axes], values))
        ctx = _context(s, {**s["params"], **cell}, strict=False)
        row = {**cell, "pass": False, "domain_ok": True, "ratio": None, "drift": None, "error": ""}
        try:
            cases = run_cases(args.suite, ctx)
            row["pass"] = all(c["pass"] for c in cases)
            row["domain_ok"] = ctx.domain_ok
            row["ratio"] = _first(cases, "computed")
            row["drift"] = _first(cases, "drift")
            row["error"] = "; ".join(ctx.notes)
        except (ConfigError, ArithmeticError, RuntimeError, NotImplementedError) as exc:
            row["domain_ok"] = False
            row["error"] = str(exc)
        rows.append(row)
    keys = [a for a, _ in axes] + ["ratio", "drift", "pass", "domain_ok", "error"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in keys})
    _write(s["csv"], buf.getvalue())
    summary = {
        "suite": args.suite,
        "config": jsonable(_config_echo(args.suite, s)),
        "grid": {a: v for a, v in axes},
        "cells": len(rows),
        "passed_cells": sum(r["pass"] for r in rows),
        "rows": jsonable(rows),
        "wall_time": time.perf_counter() - t0,
    }
    if s["out"]:
        _write(s["out"], report_json(summary))
    print(f"sweep {args.suite}: {summary['passed_cells']}/{len(rows)} cells pass", file=sys.stderr if not s["csv"] else sys.stdout)
    return EXIT_OK


def _point(cone, text: str) -> np.ndarray:
    try:
        x = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise ConfigError(f"cannot parse point {text!r}") from exc
    if x.shape != (cone.n,):
        raise ConfigError(f"point needs {cone.n} coordinates, got {x.size}")
    return x


def _fmt(v) -> str:
    arr = np.atleast_1d(np.asarray(v, float))
    return ",".join(f"{a:.15g}" for a in arr)


def cmd_algebra(args, extra) -> int:
    if extra:
        raise UsageError(f"unexpected arguments {sorted(extra)}")
    cone = J.parse_cone(args.cone or "halfline")
    x = _point(cone, args.x)
    op = args.op
    if op == "det":
        print(_fmt(J.determinant(cone, x)))
    elif op == "minor":
        fn = J.rotated_minor if args.rotated else J.principal_minor
        print(_fmt(fn(cone, args.k, x)))
    elif op == "power":
        if args.s is None:
            raise ConfigError("power needs --s")
        s = np.array([float(v) for v in args.s.split(",")])
        if not np.all(J.in_cone(cone, x)):
            raise ConfigError("power function needs x in the open cone")
        print(_fmt(J.power_function(cone, s, x, rotated=args.rotated)))
    elif op == "inverse":
        print(_fmt(J.inverse(cone, x)))
    elif op == "spectral":
        sd = J.spectral(cone, x)
        print("lambda=" + _fmt(sd.eigenvalues))
        for k, c in enumerate(sd.idempotents, 1):
            print(f"c{k}=" + _fmt(c))
    return EXIT_OK


def cmd_list(args, extra) -> int:
    for name, suite in SUITES.items():
        print(f"{name:18s} {suite.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symcone", allow_abbrev=False, description="Numerical verification harness for symmetric-cone analysis.")
    sub = ap.add_subparsers(dest="command", required=True)
    kw = {"allow_abbrev": False}

    def common(p):
        p.add_argument("--cone", help="halfline or lorentz:<n>[:u=...] (default halfline)")
        p.add_argument("--quad", help='quadrature override, e.g. "scheme=monte_carlo samples=2000000"')
        p.add_argument("--tol", type=float, help="tolerance override")
        p.add_argument("--seed", type=int, help="Monte Carlo seed (default 42)")
        p.add_argument("--out", help="JSON report path")
        p.add_argument("--config", help="file of key=value lines")

    v = sub.add_parser("verify", help="run one verification suite", **kw)
    v.add_argument("suite")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="run a suite over a parameter grid", **kw)
    s.add_argument("suite")
    s.add_argument("--grid", action="append", help="name=start:stop:count or name=v1;v2 (one or two)")
    s.add_argument("--csv", help="CSV output path (default standard output)")
    common(s)
    s.set_defaults(func=cmd_sweep)

    a = sub.add_parser("algebra", help="evaluate Jordan-algebra quantities", **kw)
    a.add_argument("op", choices=["det", "minor", "power", "inverse", "spectral"])
    a.add_argument("--cone")
    a.add_argument("--x", required=True, help="point as a comma list")
    a.add_argument("--k", type=int, default=1, help="minor index")
    a.add_argument("--s", help="multi-index for power")
    a.add_argument("--rotated", action="store_true", help="use the rotated frame")
    a.set_defaults(func=cmd_algebra)

    lp = sub.add_parser("list", help="list registered suites", **kw)
    lp.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args, rest = ap.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, _extra_params(rest))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, J.ConeDomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed parameter values surface from the numerical layer as ValueError
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
