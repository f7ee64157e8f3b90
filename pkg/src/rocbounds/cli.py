"""Command-line front end: ``rocbounds <bound|roc|verify|compare-gaussian>``.

Exit codes: 0 success, 1 a verification property failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Callable

from . import bounds, roc, verify
from .extremal_dists import make_lemma2_atom, make_lemma2_flat, make_thm4_extremal, tail_prob

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SQRT2 = math.sqrt(2.0)


class UsageError(Exception):
    pass


def normal_cdf(x: float) -> float:
    """Standard normal CDF via ``erfc``; absolute error below 1e-15 on the real line.

    ``erfc`` avoids the cancellation ``1 + erf(x)`` suffers for negative x.
    """
    return 0.5 * math.erfc(-x / SQRT2)


# input parsing --------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_float(token: str, path: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise UsageError(f"{path}:{lineno}: cannot parse {token!r} as a number") from None
    if not math.isfinite(value):
        raise UsageError(f"{path}:{lineno}: non-finite value {token!r}")
    return value


def read_one_class(path: str) -> list[float]:
    """One real per line; ``#`` starts a comment."""
    values = [_parse_float(line, path, n) for n, line in _data_lines(_read_text(path))]
    if not values:
        raise UsageError(f"{path}: no data values")
    return values


def read_two_class(path: str) -> tuple[list[float], list[float]]:
    """Lines of ``value,label`` with label 0 (no signal) or 1 (signal)."""
    class0, class1 = [], []
    for lineno, line in _data_lines(_read_text(path)):
        row = next(csv.reader([line]))
        if len(row) != 2:
            raise UsageError(f"{path}:{lineno}: expected 'value,label', got {line!r}")
        value = _parse_float(row[0].strip(), path, lineno)
        label = row[1].strip()
        if label == "0":
            class0.append(value)
        elif label == "1":
            class1.append(value)
        else:
            raise UsageError(f"{path}:{lineno}: label must be 0 or 1, got {label!r}")
    for name, vals in (("label 0", class0), ("label 1", class1)):
        if not vals:
            raise UsageError(f"{path}: no rows with {name}")
    return class0, class1


# commands -------------------------------------------------------------------------

BOUND_PARAMS: dict[str, tuple[str, ...]] = {
    "gauss": ("s", "tau"),
    "lemma2": ("t",),
    "cor3": ("t",),
    "thm4": ("t",),
    "thm4-envelope": ("t",),
    "cor6": ("mu",),
    "thm9": ("b", "mu"),
}


def _need(args, names: tuple[str, ...], what: str) -> dict[str, float]:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{what} requires {', '.join(missing)}")
    return {n: getattr(args, n) for n in names}


def cmd_bound(args) -> tuple[dict, dict, list[str], int]:
    which = args.inequality
    p = _need(args, BOUND_PARAMS[which], f"bound {which}")
    inclusive = args.tail_convention == "ge"
    diagnostics: list[str] = []
    if which == "gauss":
        res = bounds.gauss_bound(p["s"], p["tau"])
    elif which == "lemma2":
        res = bounds.lemma2_bound(p["t"])
        law = make_lemma2_flat() if res.branch == bounds.Branch.LINEAR else make_lemma2_atom(p["t"])
        res.params["attained_tail"] = tail_prob(law, p["t"], inclusive)
    elif which == "cor3":
        if args.mu_x is not None:
            p["mu_x"] = args.mu_x
        res = bounds.corollary3_bound(p["t"], p.get("mu_x", 0.0))
    elif which == "thm4":
        res = bounds.theorem4_bound(p["t"])
        u = res.params.get("u", 2.0 / math.sqrt(3.0))
        res.params["attained_tail"] = tail_prob(make_thm4_extremal(u), p["t"], inclusive)
        if res.branch == bounds.Branch.QUADRATIC:
            diagnostics.append(
                "thm4 above 4/sqrt(3) reports the tail of the u(t) extremal law; "
                f"guaranteed bound is params.envelope = {res.params['envelope']!r}"
            )
    elif which == "thm4-envelope":
        res = bounds.theorem4_envelope(p["t"])
    elif which == "cor6":
        res = bounds.corollary6_lower(p["mu"])
    else:
        res = bounds.theorem9_upper(p["b"], p["mu"])
    return {"inequality": which, **p}, res.to_dict(), diagnostics, EXIT_OK


def cmd_roc(args) -> tuple[dict, dict, list[str], int]:
    paths = args.inputs or []
    if len(paths) == 1:
        v0, v1 = read_two_class(paths[0])
    elif len(paths) == 2:
        v0, v1 = read_one_class(paths[0]), read_one_class(paths[1])
    else:
        raise UsageError("roc needs --in FILE (value,label rows) or --in CLASS0 --in CLASS1")
    s0 = roc.EmpiricalSample.of(v0, roc.Label.CLASS0)
    s1 = roc.EmpiricalSample.of(v1, roc.Label.CLASS1)
    curve = roc.roc_curve(s0, s1)
    mw = roc.auc_mann_whitney(s0, s1)
    results = {
        "roc": curve.to_dict(),
        "auc_trapezoid": curve.auc_trapezoid,
        "auc_mann_whitney": mw,
        "difference": curve.auc_trapezoid - mw,
        "n0": len(s0),
        "n1": len(s1),
    }
    return {"inputs": list(paths)}, results, [], EXIT_OK


def cmd_verify(args) -> tuple[dict, dict, list[str], int]:
    suites = args.suite or list(verify.SUITES)
    params = {"suites": suites, "seed": args.seed}
    checks: list[verify.PropertyCheck] = []
    for name in suites:
        if name == "sharpness":
            ts = [args.t] if args.t is not None else None
            checks += verify.suite_sharpness(ts)
        elif name == "riesz":
            checks += verify.suite_riesz(cases=args.cases or 1000, seed=args.seed)
        elif name == "reflection":
            checks += verify.suite_reflection(cases=args.cases or 20, seed=args.seed)
        elif name == "sweeps":
            checks += verify.suite_sweeps(resolution=args.grid or 1000)
        elif name == "montecarlo":
            checks += verify.suite_montecarlo(cases=args.cases or 20, n=args.n or 1_000_000, seed=args.seed)
    failed = [c.name for c in checks if not c.passed]
    results = {
        "checks": [c.to_dict() for c in checks],
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    diagnostics = [f"FAIL {name}" for name in failed]
    return params, results, diagnostics, EXIT_FAIL if failed else EXIT_OK


def cmd_compare_gaussian(args) -> tuple[dict, dict, list[str], int]:
    mu = _need(args, ("mu",), "compare-gaussian")["mu"]
    if not mu > 0:
        raise UsageError(f"compare-gaussian requires --mu > 0, got {mu}")
    free = bounds.corollary6_lower(mu)
    gauss = normal_cdf(mu / SQRT2)
    results = {
        "distribution_free": free.value,
        "distribution_free_branch": free.branch.value,
        "gaussian": gauss,
        "difference": gauss - free.value,
    }
    return {"mu": mu}, results, [], EXIT_OK


COMMANDS: dict[str, Callable] = {
    "bound": cmd_bound,
    "roc": cmd_roc,
    "verify": cmd_verify,
    "compare-gaussian": cmd_compare_gaussian,
}


# output ---------------------------------------------------------------------------


def _flatten(prefix: str, obj, out: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, item in enumerate(obj):
            _flatten(f"{prefix}[{i}]", item, out)
    else:
        out.append((prefix, json.dumps(obj) if isinstance(obj, list) else str(obj)))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv" and doc["command"] == "roc" and "roc" in doc["results"]:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "power"])
        w.writerows(doc["results"]["roc"]["points"])
        return buf.getvalue()
    rows: list[tuple[str, str]] = []
    _flatten("", {"params": doc["params"], "results": doc["results"]}, rows)
    rows += [("diagnostic", d) for d in doc["diagnostics"]]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get("ROCBOUNDS_SEED", "0"))
    parser = argparse.ArgumentParser(prog="rocbounds", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("inequality", nargs="?", choices=list(BOUND_PARAMS), help="for 'bound'")
    for flag in ("mu", "b", "t", "tau", "s"):
        parser.add_argument(f"--{flag}", type=float)
    parser.add_argument("--mu-x", dest="mu_x", type=float, help="mean of X for cor3")
    parser.add_argument("--n", type=int)
    parser.add_argument("--seed", type=int, default=default_seed)
    parser.add_argument("--grid", type=int, help="sweep resolution (steps per parameter)")
    parser.add_argument("--cases", type=int)
    parser.add_argument("--suite", action="append", choices=list(verify.SUITES))
    parser.add_argument("--format", choices=("json", "text", "csv"), default="json")
    parser.add_argument("--in", dest="inputs", action="append", metavar="PATH")
    parser.add_argument("--tail-convention", choices=("gt", "ge"), default="gt")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name in ("mu", "b", "t", "tau", "s", "mu_x"):
        val = getattr(args, name)
        if val is not None and not math.isfinite(val):
            print(f"rocbounds: --{name.replace('_', '-')} must be finite", file=stderr)
            return EXIT_USAGE
    if args.command == "bound" and args.inequality is None:
        print(f"rocbounds: bound needs one of {', '.join(BOUND_PARAMS)}", file=stderr)
        return EXIT_USAGE
    try:
        params, results, diagnostics, code = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"rocbounds: {exc}", file=stderr)
        return EXIT_USAGE
    doc = {"command": args.command, "params": params, "results": results, "diagnostics": diagnostics}
    stdout.write(render(doc, args.format))
    return code


def main() -> None:
    sys.exit(run())
