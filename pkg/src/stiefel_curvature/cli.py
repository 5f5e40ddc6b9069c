"""Command-line interface: ``stiefel-curvature <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 bad arguments or
preconditions, 3 I/O error.
"""

import argparse
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import verify as verify_mod
from .curvature import NUMERATOR_FORMS, curvature_coords, ricci, sectional, sectional_numerator
from .einstein import einstein_alphas, einstein_lambda, verify_einstein
from .sectional_range import (
    corner_sections,
    interval_table,
    optimize_range,
    sweep,
    sweep_rows_to_csv,
)
from .stiefel import (
    TangentCoords,
    canonical_frame,
    check_alpha,
    complete_frame,
    project_tangent,
    tangency_residual,
)

SCHEMA = "stiefel-curvature/1"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
CHECK_RTOL = 1e-10
EINSTEIN_TOL = 1e-10


class UsageError(Exception):
    """Bad input or violated precondition (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    p: Optional[int] = None
    alpha: Optional[float] = None
    restarts: int = 50
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"

    def require_shape(self):
        if self.n is None or self.p is None:
            raise UsageError(f"{self.command} needs --n and --p")
        if not 2 <= self.p < self.n:
            raise UsageError(f"need 2 <= p < n, got n={self.n}, p={self.p}")

    def require_alpha(self):
        if self.alpha is None:
            raise UsageError(f"{self.command} needs --alpha")
        if not self.alpha > 0:
            raise UsageError(f"alpha must be positive, got {self.alpha}")

    def require_restarts(self):
        if self.restarts < 1:
            raise UsageError(f"restarts must be >= 1, got {self.restarts}")
        if self.seed < 0:
            raise UsageError(f"seed must be non-negative, got {self.seed}")


def _listify(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _dump_json(payload):
    return json.dumps(payload, indent=2, default=_listify) + "\n"


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# curvature


def _matrix(obj, name, shape):
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name}: not a numeric matrix ({exc})") from None
    if arr.shape != shape:
        raise UsageError(f"{name}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name}: non-finite entries")
    return arr


def _read_frame(doc):
    Y = doc.get("Y", "canonical")
    if isinstance(Y, str):
        if Y != "canonical":
            raise UsageError(f"Y must be a matrix or \"canonical\", got {Y!r}")
        try:
            n, p = int(doc["n"]), int(doc["p"])
        except (KeyError, TypeError, ValueError):
            raise UsageError("a canonical frame needs integer fields n and p") from None
        if not 2 <= p < n:
            raise UsageError(f"need 2 <= p < n, got n={n}, p={p}")
        return canonical_frame(n, p)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2:
        raise UsageError("Y must be a 2-d matrix")
    try:
        return complete_frame(Y)
    except ValueError as exc:
        raise UsageError(f"Y: {exc}") from None


def _read_tangent(obj, name, frame, strict):
    """Tangent coordinates from ``{"A", "B"}`` blocks or an ambient ``{"W"}``; returns (coords, residual)."""
    n, p = frame.n, frame.p
    if not isinstance(obj, dict):
        raise UsageError(f"{name}: expected an object with A/B blocks or W")
    if "W" in obj:
        W = _matrix(obj["W"], f"{name}.W", (n, p))
        resid = tangency_residual(frame.Y, W)
        if strict and resid > 1e-10 * max(1.0, float(np.linalg.norm(W))):
            raise UsageError(f"{name}: ambient vector is not tangent (residual {resid:.3e})")
        return project_tangent(frame, W), resid
    if "A" not in obj or "B" not in obj:
        raise UsageError(f"{name}: needs both A and B blocks, or W")
    A = _matrix(obj["A"], f"{name}.A", (p, p))
    B = _matrix(obj["B"], f"{name}.B", (n - p, p))
    if not np.array_equal(A, -A.T):
        raise UsageError(f"{name}.A is not antisymmetric")
    return TangentCoords(A, B), 0.0


def curvature_payload(doc, alpha, strict=False):
    frame = _read_frame(doc)
    if "xi" not in doc or "eta" not in doc:
        raise UsageError("input needs xi and eta")
    xi, r_xi = _read_tangent(doc["xi"], "xi", frame, strict)
    eta, r_eta = _read_tangent(doc["eta"], "eta", frame, strict)
    phi, r_phi = _read_tangent(doc["phi"], "phi", frame, strict) if "phi" in doc else (xi, r_xi)
    R = curvature_coords(alpha, xi, eta, phi)
    sec = sectional(alpha, xi, eta)
    return {
        "schema": SCHEMA,
        "n": frame.n,
        "p": frame.p,
        "alpha": alpha,
        "A_R": R.A,
        "B_R": R.B,
        "ricci": ricci(alpha, frame.n, frame.p, xi, eta),
        "numerator": {f: sectional_numerator(alpha, xi, eta, f) for f in NUMERATOR_FORMS},
        "wedge": sec.wedge,
        "kappa": sec.kappa,
        "kappa_defined": sec.defined,
        "tangency_residual": {"xi": r_xi, "eta": r_eta, "phi": r_phi},
    }


def _compare(expected, actual, path, problems):
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            problems.append(f"{path}: expected an object")
            return
        for key, val in expected.items():
            if key not in actual:
                problems.append(f"{path}.{key}: missing")
            else:
                _compare(val, actual[key], f"{path}.{key}", problems)
    elif isinstance(expected, list):
        a = np.asarray(actual, dtype=np.float64)
        e = np.asarray(expected, dtype=np.float64)
        if a.shape != e.shape:
            problems.append(f"{path}: shape {a.shape} != expected {e.shape}")
        elif np.any(np.abs(a - e) > CHECK_RTOL * np.maximum(1.0, np.abs(e))):
            problems.append(f"{path}: max deviation {np.max(np.abs(a - e)):.3e}")
    elif isinstance(expected, bool) or expected is None or isinstance(expected, str):
        if expected != actual:
            problems.append(f"{path}: {actual!r} != expected {expected!r}")
    else:
        if actual is None or abs(actual - expected) > CHECK_RTOL * max(1.0, abs(expected)):
            problems.append(f"{path}: {actual!r} != expected {expected!r}")


def cmd_curvature(cfg, args):
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {args.input}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {args.input}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("input JSON must be an object")
    alpha = cfg.alpha if cfg.alpha is not None else doc.get("alpha")
    if alpha is None:
        raise UsageError("alpha missing: pass --alpha or set it in the input")
    try:
        alpha = check_alpha(alpha)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    payload = curvature_payload(doc, alpha, strict=args.strict)
    text = _dump_json(payload)
    _emit(text, cfg.out)
    if args.check:
        try:
            with open(args.check, encoding="utf-8") as fh:
                expected = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read {args.check}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON in {args.check}: {exc}") from None
        problems = []
        _compare(expected, json.loads(text), "$", problems)
        for line in problems:
            print(f"check failed: {line}", file=sys.stderr)
        return EXIT_VERIFY if problems else EXIT_OK
    return EXIT_OK


# einstein


def cmd_einstein(cfg, args):
    if cfg.n is None or cfg.p is None:
        raise UsageError("einstein needs --n and --p")
    if cfg.p < 2 or cfg.p >= cfg.n:
        raise UsageError(f"need 2 <= p < n, got n={cfg.n}, p={cfg.p}")
    sol = einstein_alphas(cfg.n, cfg.p)
    devs = [verify_einstein(r, cfg.n, cfg.p, trials=args.trials, seed=cfg.seed) for r in sol.roots]
    payload = {
        "schema": SCHEMA,
        "n": cfg.n,
        "p": cfg.p,
        "roots": list(sol.roots),
        "discriminant": sol.discriminant,
        "lambda": [einstein_lambda(r, cfg.n, cfg.p) for r in sol.roots],
        "verify_trials": args.trials,
        "verify_max_deviation": max(devs),
    }
    _emit(_dump_json(payload), cfg.out)
    return EXIT_OK if max(devs) <= EINSTEIN_TOL else EXIT_VERIFY


# range, sweep, corners


def _section_json(sec):
    return {"xi": {"A": sec.xi.A, "B": sec.xi.B}, "eta": {"A": sec.eta.A, "B": sec.eta.B}, "kappa": sec.kappa}


def cmd_range(cfg, args):
    cfg.require_shape()
    cfg.require_alpha()
    cfg.require_restarts()
    if cfg.format == "csv":
        rows, cols = sweep(cfg.n, cfg.p, [cfg.alpha], cfg.restarts, cfg.seed, workers=1)
        buf = io.StringIO()
        sweep_rows_to_csv(rows, cols, buf)
        _emit(buf.getvalue(), cfg.out)
        return EXIT_OK
    rep = optimize_range(cfg.n, cfg.p, cfg.alpha, restarts=cfg.restarts, seed=cfg.seed)
    lo, hi = interval_table(cfg.n, cfg.p, cfg.alpha)
    payload = {
        "schema": SCHEMA,
        "n": rep.n,
        "p": rep.p,
        "alpha": rep.alpha,
        "kappa_min": rep.kappa_min,
        "kappa_max": rep.kappa_max,
        "interval": [lo, hi],
        "contained": bool(lo >= rep.kappa_min - 1e-3 and hi <= rep.kappa_max + 1e-3),
        "corners": rep.corner_values,
        "restarts": rep.restarts_used,
        "seed": rep.seed,
        "argmin": _section_json(rep.argmin),
        "argmax": _section_json(rep.argmax),
    }
    _emit(_dump_json(payload), cfg.out)
    return EXIT_OK


def _alpha_grid(cfg, args):
    if args.alphas:
        return [float(a) for a in args.alphas.split(",")]
    if cfg.alpha is not None:
        return [cfg.alpha]
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    if not 0 < args.alpha_min <= args.alpha_max:
        raise UsageError("need 0 < alpha-min <= alpha-max")
    return np.linspace(args.alpha_min, args.alpha_max, args.points).tolist()


def cmd_sweep(cfg, args):
    cfg.require_shape()
    cfg.require_restarts()
    grid = _alpha_grid(cfg, args)
    if any(not a > 0 for a in grid):
        raise UsageError("all alpha values must be positive")
    rows, cols = sweep(cfg.n, cfg.p, grid, cfg.restarts, cfg.seed)
    if cfg.format == "json":
        _emit(_dump_json({"schema": SCHEMA, "n": cfg.n, "p": cfg.p, "columns": cols, "rows": rows}), cfg.out)
    else:
        buf = io.StringIO()
        sweep_rows_to_csv(rows, cols, buf)
        _emit(buf.getvalue(), cfg.out)
    bad = [r["alpha"] for r in rows if r.get("status") != "ok" or not r.get("contained")]
    for a in bad:
        print(f"containment or evaluation failed at alpha={a!r}", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_corners(cfg, args):
    cfg.require_shape()
    cfg.require_alpha()
    entries = []
    for c in corner_sections(cfg.n, cfg.p, cfg.alpha):
        x1, x2 = c.build(cfg.n, cfg.p, cfg.alpha)
        sec = sectional(cfg.alpha, x1, x2)
        entries.append(
            {
                "label": c.label,
                "formula": c.formula,
                "kappa_formula": c.kappa(cfg.alpha),
                "kappa_evaluated": sec.kappa,
                "xi": {"A": x1.A, "B": x1.B},
                "eta": {"A": x2.A, "B": x2.B},
            }
        )
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write("label,formula,kappa_formula,kappa_evaluated\n")
        for e in entries:
            buf.write(f"{e['label']},{e['formula']},{e['kappa_formula']:.17g},{e['kappa_evaluated']:.17g}\n")
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(_dump_json({"schema": SCHEMA, "n": cfg.n, "p": cfg.p, "alpha": cfg.alpha, "corners": entries}), cfg.out)
    worst = max((abs(e["kappa_formula"] - e["kappa_evaluated"]) for e in entries), default=0.0)
    return EXIT_OK if worst <= 1e-12 else EXIT_VERIFY


# verify


def cmd_verify(cfg, args):
    start = time.perf_counter()
    results = verify_mod.run_suites(args.level, seed=cfg.seed)
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"{status} {res.name}: max deviation {res.worst:.3e}")
        for c in res.checks.values():
            mark = "ok" if c.passed else "FAILED"
            lines.append(f"    {c.name}: {c.worst:.3e} (tol {c.tol:.0e}, {c.count} instances) {mark}")
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{args.level} verification {'failed: ' + ', '.join(failed) if failed else 'passed'} in {time.perf_counter() - start:.1f}s")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "curvature": cmd_curvature,
    "einstein": cmd_einstein,
    "range": cmd_range,
    "sweep": cmd_sweep,
    "corners": cmd_corners,
    "verify": cmd_verify,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="ambient dimension")
    common.add_argument("--p", type=int, help="number of frame columns")
    common.add_argument("--alpha", type=float, help="metric parameter (alpha = 1 embedded, 1/2 canonical)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=50, help="random optimizer starts")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="stiefel-curvature", description="Curvature of Stiefel manifolds under the alpha-metric family.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", parents=[common], help="curvature quantities for tangent vectors read from JSON")
    p.add_argument("input", help="JSON file with Y (or \"canonical\" plus n, p), xi, eta and optional phi")
    p.add_argument("--strict", action="store_true", help="reject non-tangent ambient vectors instead of projecting")
    p.add_argument("--check", metavar="EXPECTED", help="compare against a previous output; exit 1 on mismatch")

    p = sub.add_parser("einstein", parents=[common], help="Einstein values of alpha and their verification")
    p.add_argument("--trials", type=int, default=1000)

    sub.add_parser("range", parents=[common], help="numerical sectional curvature range at one alpha")

    p = sub.add_parser("sweep", parents=[common], help="curvature range over a grid of alpha (CSV)")
    p.add_argument("--alpha-min", type=float, default=0.05)
    p.add_argument("--alpha-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=30)
    p.add_argument("--alphas", help="comma-separated alpha values (overrides the linear grid)")

    sub.add_parser("corners", parents=[common], help="representative sections and their curvatures")

    p = sub.add_parser("verify", parents=[common], help="run the oracle-equivalence suites")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    default_format = "csv" if args.command == "sweep" else "json"
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        p=args.p,
        alpha=args.alpha,
        restarts=args.restarts,
        seed=args.seed,
        out=args.out,
        format=args.format or default_format,
    )
    try:
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
