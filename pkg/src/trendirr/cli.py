"""Command-line interface: ``trendirr analyze | synth | validate``.

All randomness derives from ``--seed``. Output files carry the digest of a
run manifest (tool version, subcommand, configuration, input hashes and
seed); runs with equal manifests write byte-identical outputs. Wall-clock
times and the raw command line go only into ``manifest.json``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import TrendIrrError, UndefinedCorrelationError
from .ingest import build_log_returns_with_imputation, merge_parsed, parse_csv
from .series import LogReturnSeries
from .synth import NAR_TIME_MODES, ProcessSpec
from .validate import N_GRID, SUITES, run_suite, suite_passed
from .windows import WindowConfig, pearson_correlation, run_windows

log = logging.getLogger("trendirr")

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_ERROR = 2

WINDOW_COLUMNS = (
    "window_start_unix",
    "i_t",
    "i_t_threshold95",
    "i_t_significant",
    "i_star",
    "i_star_threshold95",
    "i_star_significant",
    "manifest_digest",
)
SERIES_HEADER = ("t", "value")


class CliError(Exception):
    def __init__(self, message, path=None, kind="error"):
        super().__init__(message)
        self.path = path
        self.kind = kind


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def make_manifest(command, config, seed, inputs=()):
    """Deterministic manifest and its digest."""
    manifest = {
        "tool": "trendirr",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": [{"name": os.path.basename(p), "sha256": sha256_file(p)} for p in inputs],
    }
    digest = hashlib.sha256(_canonical(manifest).encode()).hexdigest()
    return manifest, digest


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _json_num(x):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else x


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(rows)


def _write_run_manifest(out_dir, manifest, digest, started):
    _write_json(
        os.path.join(out_dir, "manifest.json"),
        {
            **manifest,
            "digest": digest,
            "argv": sys.argv[1:],
            "started_at": started,
            "finished_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
    )


def _now():
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _is_series_csv(path):
    with open(path, newline="", encoding="utf-8-sig") as fh:
        header = next(csv.reader(fh), [])
    return tuple(h.strip().lower() for h in header[:2]) == SERIES_HEADER


def load_series_csv(path):
    """Read a ``t,value`` series written by ``synth`` as an analysis series."""
    values = []
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if row:
                values.append(float(row[1]))
    return LogReturnSeries(np.array(values))


def load_input(paths, seed):
    for path in paths:
        if not os.path.isfile(path):
            raise CliError(f"input file not found: {path}", path=path, kind="FileNotFoundError")
    if len(paths) == 1 and _is_series_csv(paths[0]):
        return load_series_csv(paths[0]), None
    parsed = merge_parsed([parse_csv(p) for p in paths])
    return build_log_returns_with_imputation(parsed, seed=seed)


def cmd_analyze(args):
    started = _now()
    cfg = WindowConfig(
        window_minutes=args.window_minutes,
        step_minutes=args.step_minutes,
        alpha=args.alpha,
        n_surrogates=args.surrogates,
        l=args.block_l,
        smoothing=args.smoothing,
        seed=args.seed,
    )
    returns, report = load_input(args.input, args.seed)
    manifest, digest = make_manifest("analyze", cfg.to_dict(), args.seed, args.input)
    log.info("analyzing %d returns in windows of %d", len(returns), cfg.window_minutes)
    results = run_windows(returns, cfg, workers=args.workers)

    os.makedirs(args.out_dir, exist_ok=True)
    _write_csv(
        os.path.join(args.out_dir, "windows.csv"),
        WINDOW_COLUMNS,
        [
            [
                r.window_start,
                _fmt(r.i_t),
                _fmt(r.i_t_threshold),
                _fmt(r.i_t_significant),
                _fmt(r.i_star),
                _fmt(r.i_star_threshold),
                _fmt(r.i_star_significant),
                digest,
            ]
            for r in results
        ],
    )

    i_t = np.array([r.i_t for r in results])
    i_star = np.array([r.i_star for r in results])
    ok = np.isfinite(i_t) & np.isfinite(i_star)
    try:
        r = pearson_correlation(i_t[ok], i_star[ok])
    except (UndefinedCorrelationError, TrendIrrError):
        r = None
    ingest = None
    if report is not None:
        ingest = report.to_dict()
        ingest["source"] = ";".join(os.path.basename(p) for p in args.input)
    summary = {
        "manifest_digest": digest,
        "manifest": manifest,
        "n_windows": len(results),
        "pearson_r_i_t_i_star": _json_num(r),
        "n_windows_i_t_significant": sum(w.i_t_significant for w in results),
        "n_windows_i_star_significant": sum(w.i_star_significant for w in results),
        "n_windows_i_t_undefined": int(np.sum(~np.isfinite(i_t))),
        "ingest": ingest,
    }
    _write_json(os.path.join(args.out_dir, "summary.json"), summary)
    _write_run_manifest(args.out_dir, manifest, digest, started)
    print(f"{len(results)} windows written to {args.out_dir}; pearson r = {r}")
    return EXIT_OK


def process_spec_from_args(args):
    params = {}
    if args.process == "random_walk":
        params["p"] = args.p
    elif args.process == "nar2":
        params["time_mode"] = args.nar_time_mode
    return ProcessSpec(args.process, args.n, args.seed, params)


def cmd_synth(args):
    started = _now()
    spec = process_spec_from_args(args)
    values = spec.generate()
    config = {"process": spec.kind, "n": spec.length, **spec.params}
    manifest, digest = make_manifest("synth", config, args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    _write_csv(
        os.path.join(args.out_dir, "series.csv"),
        (*SERIES_HEADER, "manifest_digest"),
        ([t, _fmt(v) if spec.kind != "random_walk" else int(v), digest] for t, v in enumerate(values)),
    )
    _write_run_manifest(args.out_dir, manifest, digest, started)
    print(f"{spec.kind}: {len(values)} samples written to {args.out_dir}/series.csv")
    return EXIT_OK


def cmd_validate(args):
    started = _now()
    grid = tuple(n for n in N_GRID if n <= args.max_n)
    checks = run_suite(args.suite, args.seed, grid, args.surrogates, args.alpha, args.smoothing)
    config = {
        "suite": args.suite,
        "grid": list(grid),
        "surrogates": args.surrogates,
        "alpha": args.alpha,
        "smoothing": args.smoothing,
    }
    manifest, digest = make_manifest("validate", config, args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    cols = ("suite", "name", "n", "observed", "expected", "tolerance", "threshold", "passed", "binding", "note")
    _write_csv(
        os.path.join(args.out_dir, "validate.csv"),
        (*cols, "manifest_digest"),
        [[_fmt(getattr(c, k)) if getattr(c, k) is not None else "" for k in cols] + [digest] for c in checks],
    )
    ok = suite_passed(checks)
    _write_json(
        os.path.join(args.out_dir, "validate.json"),
        {
            "manifest_digest": digest,
            "manifest": manifest,
            "passed": ok,
            "failures": [c.to_dict() for c in checks if c.binding and not c.passed],
        },
    )
    _write_run_manifest(args.out_dir, manifest, digest, started)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        if not c.binding:
            status += " (info)"
        ref = f"expected {c.expected:.4f} +/- {c.tolerance:.4f}" if c.tolerance is not None else f"threshold {c.threshold:.3g}"
        print(f"{status:12s} {c.suite:12s} {c.name:22s} N={c.n:<8d} observed {c.observed:.4f}  {ref}  {c.note}")
    print("validation", "passed" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_CHECKS_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="trendirr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"trendirr {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", required=True)
        p.add_argument("--seed", type=int, default=0)

    a = sub.add_parser("analyze", help="sliding-window indices for a minute OHLCV file or synth series")
    common(a)
    a.add_argument("--input", required=True, nargs="+", help="one series CSV, or OHLCV files of one instrument")
    a.add_argument("--window-minutes", type=int, default=WindowConfig.window_minutes)
    a.add_argument("--step-minutes", type=int, default=WindowConfig.step_minutes)
    a.add_argument("--alpha", type=float, default=0.05)
    a.add_argument("--surrogates", type=int, default=100)
    a.add_argument("--block-l", type=int, default=2)
    a.add_argument("--smoothing", type=float, default=0.5)
    a.add_argument("--workers", type=int, default=1)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synth", help="generate a synthetic series")
    common(s)
    s.add_argument("--process", choices=("random_walk", "ar2", "nar2"), required=True)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--nar-time-mode", choices=NAR_TIME_MODES, default="integer")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("validate", help="run the synthetic-process oracle suite")
    common(v)
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--surrogates", type=int, default=100)
    v.add_argument("--alpha", type=float, default=0.05)
    v.add_argument("--smoothing", type=float, default=0.5)
    v.add_argument("--max-n", type=int, default=max(N_GRID), help="drop grid sizes above this")
    v.set_defaults(func=cmd_validate)
    return parser


def _report_error(exc, args):
    record = {
        "error": getattr(exc, "kind", None) if isinstance(exc, CliError) else type(exc).__name__,
        "message": str(exc),
        "path": getattr(exc, "path", None),
    }
    if isinstance(exc, TrendIrrError) and getattr(exc, "row_errors", None):
        record["row_errors"] = [list(e) for e in exc.row_errors[:100]]
    print(json.dumps(record), file=sys.stderr)
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        try:
            os.makedirs(out_dir, exist_ok=True)
            _write_json(os.path.join(out_dir, "error.json"), record)
        except OSError:
            pass


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (CliError, TrendIrrError, OSError) as exc:
        _report_error(exc, args)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
