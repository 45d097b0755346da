"""Command-line interface.

Subcommands: kernel, bounds, witness, remez, verify, sweep. Exit codes:
0 success, 1 invariant failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from ._trigsum import harmonic_sum
from .best_approx import remez_trig
from .bounds import (
    BoundsReport, Status, bounds_report, exp_class_report, weyl_nagy_report,
)
from .errors import ConvApproxError, HypothesisViolation
from .extremal import WitnessSpec, build_witness
from .norms import TWO_PI, PeriodicFunction
from .series import BetaList, ConstantBeta, ExpPower, KernelSpec, PowerLaw, Table, kernel_eval

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SWEEP_COLUMNS = [
    "n", "p", "psi", "beta", "status", "reason", "hyp_2", "hyp_17", "hyp_18", "hyp_25_25",
    "lower", "witness_En", "witness_vp_lower", "upper", "remainder", "certified", "ratio", "tau",
]
VERIFY_COLUMNS = SWEEP_COLUMNS + ["verdict", "failures"]

# absolute slack for comparisons between independently computed quantities
CHECK_SLACK = 1e-12


class UsageError(Exception):
    pass


# -- parameter parsing -------------------------------------------------------

_OPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def eval_param(expr: str, n: int | None = None) -> float:
    """Evaluate a numeric parameter that may refer to ``n`` (e.g. ``n+1``, ``n^2``)."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "n":
            if n is None:
                raise UsageError(f"parameter {expr!r} refers to n but no n is set")
            return float(n)
        if isinstance(node, ast.Name) and node.id in ("inf", "pi", "e"):
            return {"inf": math.inf, "pi": math.pi, "e": math.e}[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](walk(node.operand))
        raise UsageError(f"unsupported expression {expr!r}")

    try:
        tree = ast.parse(expr.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {expr!r}") from exc
    return walk(tree)


def _split_kv(body: str) -> dict:
    out = {}
    for part in body.split(","):
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_psi(text: str, n: int | None = None):
    """``power:r=..``, ``exp:alpha=..,r=..`` or ``table:v1,v2,..``."""
    kind, _, body = text.strip().partition(":")
    try:
        if kind == "power":
            kv = _split_kv(body)
            return PowerLaw(eval_param(kv["r"], n))
        if kind == "exp":
            kv = _split_kv(body)
            return ExpPower(eval_param(kv["alpha"], n), eval_param(kv["r"], n))
        if kind == "table":
            return Table([eval_param(v, n) for v in body.split(",")])
    except KeyError as exc:
        raise UsageError(f"psi spec {text!r} is missing {exc}") from exc
    except ConvApproxError as exc:
        raise UsageError(f"bad psi spec {text!r}: {exc}") from exc
    raise UsageError(f"unknown psi family in {text!r}")


def parse_beta(text: str):
    """``const:b`` or ``list:b1,b2,..``."""
    kind, _, body = text.strip().partition(":")
    if kind == "const":
        return ConstantBeta(eval_param(body))
    if kind == "list":
        return BetaList([eval_param(v) for v in body.split(",")])
    raise UsageError(f"unknown beta spec {text!r}")


def parse_n_range(text: str) -> list[int]:
    """``2..8``, ``2,3,5`` or mixtures like ``2..4,8``."""
    values = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty n range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if not values:
        raise UsageError("empty n range")
    if any(v < 1 for v in values):
        raise UsageError("n must be >= 1")
    return sorted(set(values))


def parse_p_list(text: str) -> list[float]:
    values = [eval_param(v) for v in str(text).split(",") if v.strip()]
    if not values:
        raise UsageError("empty p list")
    if any(not v >= 1 for v in values):
        raise UsageError("p must lie in [1, inf]")
    return sorted(set(values))


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    psi: tuple = ("power:r=n+1",)
    beta: tuple = ("const:0",)
    n: tuple = (2,)
    p: tuple = (math.inf,)
    tol: float = 1e-10
    format: str = "csv"
    out: str | None = None
    jobs: int = 1
    delta: float | None = None


def read_config_file(path: str) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment; psi/beta lists use ``;``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _config_from(settings: dict) -> SweepConfig:
    cfg = SweepConfig()
    known = {"psi", "beta", "n", "p", "tol", "format", "out", "jobs", "delta"}
    unknown = set(settings) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    updates = {}
    for key, value in settings.items():
        if value is None:
            continue
        if key in ("psi", "beta"):
            items = value if isinstance(value, (list, tuple)) else [v for v in value.split(";")]
            items = tuple(v.strip() for v in items if v.strip())
            if not items:
                raise UsageError(f"empty {key} list")
            updates[key] = items
        elif key == "n":
            updates["n"] = tuple(parse_n_range(value))
        elif key == "p":
            updates["p"] = tuple(parse_p_list(value))
        elif key == "tol":
            updates["tol"] = float(value)
        elif key == "jobs":
            updates["jobs"] = int(value)
        elif key == "delta":
            updates["delta"] = float(value)
        else:
            updates[key] = value
    cfg = replace(cfg, **updates)
    if cfg.format not in ("csv", "jsonl"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.jobs < 1:
        raise UsageError("jobs must be >= 1")
    if not cfg.tol > 0:
        raise UsageError("tol must be positive")
    for spec in cfg.psi:  # validate syntax early
        parse_psi(spec, cfg.n[0])
    for spec in cfg.beta:
        parse_beta(spec)
    return cfg


def build_config(args) -> SweepConfig:
    settings = read_config_file(args.config) if getattr(args, "config", None) else {}
    flags = {
        "psi": args.psi, "beta": args.beta, "n": args.n, "p": args.p, "tol": args.tol,
        "format": args.format, "out": args.out, "jobs": args.jobs, "delta": args.delta,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    return _config_from(settings)


# -- output --------------------------------------------------------------------

def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def render(records: list[dict], fmt: str, columns: list[str] | None = None) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        if columns is None:
            columns = []
            for rec in records:
                columns.extend(k for k in rec if k not in columns)
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([format_value(rec.get(c)) for c in columns])
    else:
        for rec in records:
            obj = {k: _json_value(rec.get(k)) for k in (columns or rec)}
            buf.write(json.dumps(obj, allow_nan=False) + "\n")
    return buf.getvalue()


def emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8", newline="")


# -- sweep points --------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    psi_spec: str
    beta_spec: str
    n: int
    p: float
    tol: float
    delta: float | None


def sweep_points(cfg: SweepConfig) -> list[Point]:
    """Parameter points in lexicographic order (psi spec, beta spec, n, p)."""
    return [
        Point(psi, beta, n, p, cfg.tol, cfg.delta)
        for psi in cfg.psi for beta in cfg.beta for n in cfg.n for p in cfg.p
    ]


def _report_for(point: Point) -> BoundsReport:
    psi = parse_psi(point.psi_spec, point.n)
    beta = parse_beta(point.beta_spec)
    delta = point.delta if point.p == 1 else None
    return bounds_report(point.n, point.p, psi, beta, delta=delta, tol=point.tol)


def _refused(point: Point, reason: str) -> dict:
    psi = parse_psi(point.psi_spec, point.n)
    rep = BoundsReport(n=point.n, p=point.p, psi=psi.describe(),
                       beta=parse_beta(point.beta_spec).describe(),
                       status=Status.REFUSED, reason=reason)
    return rep.flat()


def evaluate_point(point: Point) -> dict:
    try:
        return _report_for(point).flat()
    except (HypothesisViolation, ConvApproxError) as exc:
        return _refused(point, str(exc))


def check_record(rec: dict, tol: float) -> list[str]:
    """Invariant failures for an evaluated point (empty when all hold)."""
    failures = []

    def need(cond, label, lhs, rhs):
        if not cond:
            failures.append(f"{label}: {format_value(lhs)} vs {format_value(rhs)}")

    lower, upper, value = rec["lower"], rec["upper"], rec["witness_En"]
    vp = rec["witness_vp_lower"]
    need(rec["certified"], "remez certification", rec["certified"], True)
    floor = rec.get("spike_lower", lower) if rec["p"] == "1" else lower
    need(vp >= floor - CHECK_SLACK, "alternation bound min|f(x_m)| >= lower", vp, floor)
    need(floor <= value + CHECK_SLACK, "sandwich lower <= E_n", floor, value)
    need(value <= upper + CHECK_SLACK, "sandwich E_n <= upper", value, upper)
    need(vp <= value * (1 + 10 * tol) + CHECK_SLACK, "de la Vallee Poussin <= E_n", vp, value)
    need(rec["remainder"] <= upper + CHECK_SLACK, "Fourier remainder <= upper", rec["remainder"], upper)
    need(value <= rec["remainder"] * (1 + 10 * tol) + CHECK_SLACK, "E_n <= Fourier remainder",
         value, rec["remainder"])
    if rec.get("thm4_lower") is not None:
        need(rec["thm4_lower"] <= lower, "power bracket lower", rec["thm4_lower"], lower)
        need(upper <= rec["thm4_upper"], "power bracket upper", upper, rec["thm4_upper"])
    if rec.get("thm6_lower") is not None:
        need(rec["thm6_lower"] <= lower, "exp bracket lower", rec["thm6_lower"], lower)
        need(upper <= rec["thm6_upper"], "exp bracket upper", upper, rec["thm6_upper"])
    if rec.get("tau") is not None and rec.get("ratio") is not None:
        need(abs(rec["ratio"] - 1) <= rec["tau"] + 1e-9, "|ratio - 1| <= tau",
             abs(rec["ratio"] - 1), rec["tau"])
    return failures


def verify_point(point: Point) -> dict:
    rec = evaluate_point(point)
    if rec["status"] != Status.OK.value:
        rec.update(verdict="skipped", failures="")
        return rec
    failures = check_record(rec, point.tol)
    rec.update(verdict="fail" if failures else "pass", failures="; ".join(failures))
    return rec


def run_points(func, points, jobs: int) -> list[dict]:
    if jobs <= 1 or len(points) <= 1:
        return [func(pt) for pt in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, points, chunksize=1))


# -- subcommands -----------------------------------------------------------------

def cmd_sweep(cfg: SweepConfig) -> int:
    records = run_points(evaluate_point, sweep_points(cfg), cfg.jobs)
    emit(render(records, cfg.format, SWEEP_COLUMNS), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: SweepConfig) -> int:
    records = run_points(verify_point, sweep_points(cfg), cfg.jobs)
    emit(render(records, cfg.format, VERIFY_COLUMNS), cfg.out)
    bad = [r for r in records if r["verdict"] == "fail"]
    for rec in records:
        label = f"n={rec['n']} p={rec['p']} {rec['psi']} beta={rec['beta']}"
        if rec["verdict"] == "skipped":
            print(f"SKIP {label}: {rec['reason']}", file=sys.stderr)
        elif rec["verdict"] == "fail":
            print(f"FAIL {label}: {rec['failures']}", file=sys.stderr)
    passed = sum(r["verdict"] == "pass" for r in records)
    print(f"{passed} passed, {len(bad)} failed, "
          f"{len(records) - passed - len(bad)} skipped", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def _single(cfg: SweepConfig, what: str):
    if len(cfg.n) != 1 or len(cfg.p) != 1 or len(cfg.psi) != 1 or len(cfg.beta) != 1:
        raise UsageError(f"{what} takes a single n, p, psi and beta")
    n, p = cfg.n[0], cfg.p[0]
    return n, p, parse_psi(cfg.psi[0], n), parse_beta(cfg.beta[0])


def cmd_bounds(cfg: SweepConfig) -> int:
    n, p, psi, beta = _single(cfg, "bounds")
    delta = cfg.delta if p == 1 else None
    try:
        if isinstance(psi, PowerLaw) and psi.r >= n + 1:
            report = weyl_nagy_report(n, psi.r, p, beta, delta=delta, tol=cfg.tol)
        elif isinstance(psi, ExpPower) and psi.r > 1:
            report = exp_class_report(n, psi.alpha, psi.r, p, beta, delta=delta, tol=cfg.tol)
        else:
            report = bounds_report(n, p, psi, beta, delta=delta, tol=cfg.tol)
        rec = report.flat()
    except (HypothesisViolation, ConvApproxError) as exc:
        rec = _refused(sweep_points(cfg)[0], str(exc))
    emit(render([rec], cfg.format), cfg.out)
    return EXIT_OK


def cmd_kernel(cfg: SweepConfig, grid: int, tail_eps: float) -> int:
    if len(cfg.psi) != 1 or len(cfg.beta) != 1:
        raise UsageError("kernel takes a single psi and beta")
    psi = parse_psi(cfg.psi[0], cfg.n[0])
    spec = KernelSpec(psi, parse_beta(cfg.beta[0]), tail_eps)
    t = np.arange(grid) * (TWO_PI / grid)
    values = kernel_eval(spec, t)
    records = [{"t": float(a), "kernel": float(v)} for a, v in zip(t, values)]
    emit(render(records, cfg.format, ["t", "kernel"]), cfg.out)
    return EXIT_OK


def cmd_witness(cfg: SweepConfig, grid: int) -> int:
    n, p, psi, beta = _single(cfg, "witness")
    w = build_witness(WitnessSpec(n, p, psi, beta, cfg.delta if p == 1 else None))
    t = np.arange(grid) * (TWO_PI / grid)
    cols = ["kind", "index", "t", "phi", "f", "F1", "F2"]
    records = []
    for kind, pts in (("sample", t), ("alternation", w.points)):
        vals = [w.phi(pts), w.f(pts), w.F1(pts), w.F2(pts)]
        for i, x in enumerate(pts):
            records.append({"kind": kind, "index": i, "t": float(x),
                            "phi": float(vals[0][i]), "f": float(vals[1][i]),
                            "F1": float(vals[2][i]), "F2": float(vals[3][i])})
    emit(render(records, cfg.format, cols), cfg.out)
    return EXIT_OK


def load_samples(path: str) -> PeriodicFunction:
    """Read ``t,value`` (or one ``value`` per line) samples of a 2pi-periodic function.

    Uniform samples over one period become their trigonometric interpolant;
    anything else is interpolated by a periodic cubic spline.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read samples {path}: {exc}") from exc
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [s for s in line.replace(",", " ").split() if s]
        try:
            rows.append([float(s) for s in parts])
        except ValueError:
            if rows:
                raise UsageError(f"bad sample line {raw!r}") from None
            continue  # header
    if len(rows) < 4:
        raise UsageError("need at least 4 samples")
    widths = {len(r) for r in rows}
    if widths == {1}:
        y = np.array([r[0] for r in rows])
        t = np.arange(y.size) * (TWO_PI / y.size)
    elif widths == {2}:
        arr = np.array(rows)
        order = np.argsort(arr[:, 0])
        t, y = arr[order, 0], arr[order, 1]
    else:
        raise UsageError("samples must have one or two columns")
    m = y.size
    step = TWO_PI / m
    if np.allclose(np.diff(t), step, rtol=1e-9, atol=1e-12):
        return _trig_interpolant(t[0], y)
    from scipy.interpolate import CubicSpline

    if t[-1] - t[0] >= TWO_PI:
        raise UsageError("sample abscissae must lie within one period")
    spline = CubicSpline(np.append(t, t[0] + TWO_PI), np.append(y, y[0]), bc_type="periodic")
    t0 = t[0]
    return PeriodicFunction(lambda s: spline(t0 + np.mod(s - t0, TWO_PI)), freq=max(1, m // 2))


def _trig_interpolant(t0: float, y: np.ndarray) -> PeriodicFunction:
    m = y.size
    c = np.fft.rfft(y) / m
    a = 2 * c.real
    b = -2 * c.imag
    a[0] = c[0].real
    if m % 2 == 0:
        a[-1] = c[-1].real
        b[-1] = 0.0
    return PeriodicFunction(lambda s: harmonic_sum(np.asarray(s) - t0, a, b), freq=max(1, m // 2))


def cmd_remez(cfg: SweepConfig, path: str) -> int:
    if len(cfg.n) != 1:
        raise UsageError("remez takes a single n")
    n = cfg.n[0]
    f = load_samples(path)
    res = remez_trig(f, n, tol=cfg.tol)
    rec = {"n": n, "value": res.value, "lower": res.lower, "leveled_error": res.leveled_error,
           "iterations": res.iterations, "certified": res.certified}
    for k, v in enumerate(res.best.a):
        rec[f"a{k}"] = float(v)
    for k, v in enumerate(res.best.b, start=1):
        rec[f"b{k}"] = float(v)
    emit(render([rec], cfg.format), cfg.out)
    return EXIT_OK if res.certified else EXIT_FAIL


# -- entry point -------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--config", help="key = value configuration file (flags win)")
    sub.add_argument("--psi", action="append",
                     help="power:r=R | exp:alpha=A,r=R | table:v1,v2,...; R may use n (repeatable)")
    sub.add_argument("--beta", action="append", help="const:B | list:b1,b2,... (repeatable)")
    sub.add_argument("--n", help="order n, a range 2..8 or a list 2,3,5")
    sub.add_argument("--p", help="comma-separated exponents, e.g. 1,2,inf")
    sub.add_argument("--tol", type=float, help="Remez relative tolerance (default 1e-10)")
    sub.add_argument("--delta", type=float, help="spike width for p = 1 witnesses")
    sub.add_argument("--format", choices=["csv", "jsonl"])
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--jobs", type=int, help="worker processes")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("kernel", "evaluate the generating kernel on a grid"),
        ("bounds", "bounds report for a single parameter point"),
        ("witness", "witness samples and alternation data"),
        ("remez", "best uniform approximation of sampled data"),
        ("verify", "check all invariants over a parameter grid"),
        ("sweep", "tabulate bounds and witness values over a parameter grid"),
    ):
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)
        if name in ("kernel", "witness"):
            sub.add_argument("--grid", type=int, default=256, help="number of sample points")
        if name == "kernel":
            sub.add_argument("--tail-eps", type=float, default=1e-12)
        if name == "remez":
            sub.add_argument("samples", help="file of t,value pairs (or values on a uniform grid)")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "bounds":
            return cmd_bounds(cfg)
        if args.command == "kernel":
            if args.grid < 1:
                raise UsageError("grid must be positive")
            return cmd_kernel(cfg, args.grid, args.tail_eps)
        if args.command == "witness":
            if args.grid < 1:
                raise UsageError("grid must be positive")
            return cmd_witness(cfg, args.grid)
        if args.command == "remez":
            return cmd_remez(cfg, args.samples)
    except UsageError as exc:
        print(f"convapprox: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ConvApproxError) as exc:
        print(f"convapprox: error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL
    except OSError as exc:
        print(f"convapprox: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
