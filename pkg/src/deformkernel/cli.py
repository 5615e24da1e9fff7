"""Command-line entry point: grid evaluation, bound scans and invariant checks.

Exit codes: 0 on success, 1 on a numerical failure (non-convergence or a
failed check), 2 on usage or domain errors.  Rows are computed in a
process pool sized by ``DEFORMKERNEL_THREADS`` and written in a fixed order.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import checks
from .closed import closed_form_available, dim2_modulus_array, kernel_dispatch
from .params import DeformParams, KernelArgs, TruncationPolicy, parse_real
from .series import ConvergenceError, kernel_series
from .specfun import DomainError

THREADS_ENV = "DEFORMKERNEL_THREADS"
MIN_TOL = 1e-15
BOUND_SLACK = 1e-10
CSV_HEADER = ("z", "w", "re", "im", "abs", "method", "terms")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_range(text: str) -> tuple[float, float, int]:
    """'min:max:count' with count >= 1 and min <= max."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} is not of the form min:max:count")
    try:
        lo, hi = parse_real(parts[0]), parse_real(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if count < 1:
        raise UsageError(f"range {text!r} needs count >= 1")
    if lo > hi:
        raise UsageError(f"range {text!r} is not ordered")
    if count == 1 and lo != hi:
        raise UsageError(f"range {text!r} has count 1 but min != max")
    return lo, hi, count


def range_values(r: tuple[float, float, int]) -> List[float]:
    lo, hi, count = r
    return [lo] if count == 1 else [float(v) for v in np.linspace(lo, hi, count)]


def read_config(path: Optional[str]) -> Dict[str, str]:
    """key=value lines; blank lines and '#' comments ignored."""
    if not path:
        return {}
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key.startswith("threshold."):
            key = key.replace("-", "_")
        out[key] = value
    return out


def _pick(flag, config: Dict[str, str], key: str, cast: Callable, default):
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError:
            raise UsageError(f"config value {key}={config[key]!r} is invalid") from None
    return default


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1").strip() or "1"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be >= 1")
    return n


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map; a process pool when more than one worker is requested."""
    workers = min(thread_count(), max(len(items), 1))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- eval --------------------------------------------------------------------


@dataclass(frozen=True)
class GridRequest:
    a: float
    m: int
    z_range: tuple
    w_range: tuple
    method: str = "auto"
    tol: float = 1e-14

    def __post_init__(self):
        if not self.tol >= MIN_TOL:
            raise UsageError(f"tol must be >= {MIN_TOL:g}")
        if self.method not in ("auto", "series", "closed"):
            raise UsageError(f"unknown method {self.method!r}")
        if self.z_range[0] < 0:
            raise UsageError("z must be nonnegative")
        if self.w_range[0] < -1 or self.w_range[1] > 1:
            raise UsageError("w must lie in [-1, 1]")


def _eval_row(z: float, params: DeformParams, ws: Sequence[float], method: str, policy: TruncationPolicy) -> list:
    rows = []
    for w in ws:
        args = KernelArgs(z, w)
        if method == "series":
            res = kernel_series(params, args, policy)
            value, used, terms = res.value, "series", res.terms
        else:
            ev = kernel_dispatch(params, args, policy)
            value, used, terms = ev.value, ev.method, ev.terms
        rows.append((fmt(z), fmt(w), fmt(value.real), fmt(value.imag), fmt(abs(value)), used, str(terms)))
    return rows


def cmd_eval(req: GridRequest, out_path: str, policy: TruncationPolicy) -> int:
    params = DeformParams(req.a, req.m)
    zs, ws = range_values(req.z_range), range_values(req.w_range)
    if req.method == "closed":
        for z in zs:
            for w in ws:
                if closed_form_available(params, w, z) is None:
                    raise UsageError(f"no closed form for a={req.a:g}, m={req.m} at z={z:g}, w={w:g}")
    rows = parallel_map(partial(_eval_row, params=params, ws=ws, method=req.method, policy=policy), zs)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for block in rows:
            writer.writerows(block)
    return EXIT_OK


# -- bound-scan --------------------------------------------------------------


def _abs_row(z: float, params: DeformParams, ws: np.ndarray, policy: TruncationPolicy) -> np.ndarray:
    return np.array([abs(kernel_dispatch(params, KernelArgs(z, float(w)), policy).value) for w in ws])


def bound_scan(n: int, m: int, z_max: float, density: int, w_density: int = 201, policy=None) -> dict:
    """Sup of |K_{2/n}^m| over a uniform (z, w) grid on [0, z_max] x [-1, 1]."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    if m < 2 or m % 2:
        raise DomainError("m must be an even integer >= 2")
    if not z_max > 0 or density < 2 or w_density < 2:
        raise DomainError("need z_max > 0 and at least two grid points per axis")
    params = DeformParams.from_n(n, m)
    zs = np.linspace(0.0, z_max, density)
    ws = np.linspace(-1.0, 1.0, w_density)
    if m == 2:
        vals = dim2_modulus_array(n, zs[:, None], ws[None, :])
    else:
        policy = policy or TruncationPolicy()
        vals = np.array(parallel_map(partial(_abs_row, params=params, ws=ws, policy=policy), list(zs)))
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    sup = float(vals[i, j])
    report = {
        "n": n,
        "m": m,
        "a": params.a,
        "sup_abs": sup,
        "z_at_max": float(zs[i]),
        "w_at_max": float(ws[j]),
        "grid": {"z": [0.0, float(z_max), int(density)], "w": [-1.0, 1.0, int(w_density)]},
        # the unit bound is only established in dimension 2; higher m is reported as data
        "bound_checked": m == 2,
        "within_bound": bool(sup <= 1.0 + BOUND_SLACK) if m == 2 else None,
    }
    return report


def dump_json(obj, path: Optional[str]) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    return text


# -- verify ------------------------------------------------------------------


def cmd_verify(suite: str, tol: Optional[float], thresholds: Dict[str, float], json_path: Optional[str]) -> int:
    results = checks.run_suite(suite, tol=tol, thresholds=thresholds)
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  residual={c.residual:.3e}  threshold={c.threshold:.1e}")
    ok = all(c.passed for c in results)
    summary = {"suite": suite, "passed": ok, "checks": [c.as_dict() for c in results]}
    if json_path:
        dump_json(summary, json_path)
    print(f"{sum(c.passed for c in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_NUMERIC


# -- argument handling -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deformkernel", description="Kernel of the radially deformed Fourier transform.")
    p.add_argument("--config", help="key=value file with defaults (command-line flags win)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate K_a^m on a (z, w) grid and write CSV")
    e.add_argument("--a", required=True, help="deformation parameter, e.g. 2, 1 or 2/3")
    e.add_argument("--m", type=int, required=True, help="dimension (>= 2)")
    e.add_argument("--z", required=True, help="min:max:count")
    e.add_argument("--w", required=True, help="min:max:count within [-1, 1]")
    e.add_argument("--method", choices=("auto", "series", "closed"), default=None)
    e.add_argument("--tol", type=float, default=None, help="series truncation tolerance")
    e.add_argument("--max-terms", type=int, default=None, dest="max_terms")
    e.add_argument("--out", required=True, help="output CSV path")

    b = sub.add_parser("bound-scan", help="sup |K_{2/n}^m| over a grid, JSON report")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True, help="even dimension")
    b.add_argument("--zmax", type=float, required=True)
    b.add_argument("--density", type=int, default=None, help="number of z samples")
    b.add_argument("--wdensity", type=int, default=None, help="number of w samples (default 201)")
    b.add_argument("--out", default=None, help="JSON path (stdout when omitted)")

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", choices=sorted(checks.SUITES) + ["all"], required=True)
    v.add_argument("--tol", type=float, default=None, help="replace every threshold")
    v.add_argument("--json", default=None, help="write the JSON summary here")
    return p


def _policy(args, config) -> TruncationPolicy:
    tol = _pick(getattr(args, "tol", None), config, "tol", float, 1e-14)
    max_terms = _pick(getattr(args, "max_terms", None), config, "max_terms", int, 4000)
    streak = _pick(None, config, "consecutive_small", int, 3)
    return TruncationPolicy(abs_tol=tol, max_terms=max_terms, consecutive_small=streak)


def _run(args, config) -> int:
    if args.command == "eval":
        try:
            a = parse_real(args.a)
        except ValueError:
            raise UsageError(f"cannot parse --a {args.a!r}") from None
        policy = _policy(args, config)
        req = GridRequest(
            a=a,
            m=args.m,
            z_range=parse_range(args.z),
            w_range=parse_range(args.w),
            method=_pick(args.method, config, "method", str, "auto"),
            tol=policy.abs_tol,
        )
        return cmd_eval(req, args.out, policy)
    if args.command == "bound-scan":
        density = _pick(args.density, config, "density", int, 500)
        wdensity = _pick(args.wdensity, config, "wdensity", int, 201)
        report = bound_scan(args.n, args.m, args.zmax, density, wdensity, _policy(args, config))
        text = dump_json(report, args.out)
        if not args.out:
            sys.stdout.write(text)
        if report["within_bound"] is False:
            print(f"sup |K| = {report['sup_abs']!r} exceeds 1 + {BOUND_SLACK:g}", file=sys.stderr)
            return EXIT_NUMERIC
        return EXIT_OK
    tol = _pick(args.tol, config, "tol", float, None)
    thresholds = {k[len("threshold."):]: float(v) for k, v in config.items() if k.startswith("threshold.")}
    return cmd_verify(args.suite, tol, thresholds, args.json)


def _glue_negative_values(argv: List[str]) -> List[str]:
    # argparse reads "-1:1:5" as an option; rewrite "--w -1:1:5" to "--w=-1:1:5"
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--z", "--w", "--a", "--tol", "--zmax"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        config = read_config(args.config)
        return _run(args, config)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, OverflowError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
