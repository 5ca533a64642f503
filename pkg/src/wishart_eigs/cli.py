"""Command-line front end.

Subcommands::

    wishart-eigs sample  --n 30 --r 30 --beta 2 --method tridiagonal --which min --samples 20000 --seed 1
    wishart-eigs verify  --n 30 --r 30 --beta 2 --samples 20000 --seed 1
    wishart-eigs bench   --grid 64:64,256:256 --samples 10
    wishart-eigs theory  --n 30 --r 30 --svg --samples 20000

Exit codes: 0 success, 2 invalid configuration, 3 I/O failure, 4 solver
failure, 5 a verification check failed (the report is still written).
``WISHART_EIGS_THREADS`` and ``WISHART_EIGS_OUTPUT_DIR`` override the
defaults for ``--threads`` and the output directory.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ensembles import METHODS, EnsembleParams, draw_samples, variates_per_sample
from .errors import InvalidParameterError, SolverError
from .randstream import GENERATOR_ID
from .stats import histogram, ks_one_sample, ks_two_sample, moments
from .svgplot import overlay_svg
from .theory import (
    DEFAULT_GRID,
    TWTable,
    log_joint_density,
    pmin_cdf,
    pmin_exact,
    tw2_moments,
    tw2_pdf,
    tw_rescale,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SOLVER = 4
EXIT_CHECK_FAILED = 5

THREADS_ENV = "WISHART_EIGS_THREADS"
OUTPUT_DIR_ENV = "WISHART_EIGS_OUTPUT_DIR"

CHECKS = ("min_law", "max_law", "cross", "trace")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 2
    R: float = 2.0
    beta: float = 2.0
    sigma1: float = 1.0
    method: str = "tridiagonal"
    which: str = "all"
    samples: int = 1000
    seed: int = 0
    threads: int = 1
    output: str | None = None
    format: str = "csv"
    bins: int | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"--method must be one of {METHODS}")
        if self.which not in ("all", "min", "max"):
            raise ConfigError("--which must be all, min or max")
        if self.format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.samples < 1:
            raise ConfigError("--samples must be >= 1")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.bins is not None and self.bins < 1:
            raise ConfigError("--bins must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("--seed must fit in 64 unsigned bits")
        try:
            params = self.params()
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from exc
        if self.method == "closed2" and (params.n != 2 or params.beta not in (1.0, 2.0) or params.is_spiked):
            raise ConfigError("closed2 needs n = 2, beta in {1, 2} and sigma1 = 1")
        if self.method == "dense" and (params.beta not in (1.0, 2.0) or params.R != int(params.R)):
            raise ConfigError("dense needs integer R and beta in {1, 2}")
        return self

    def params(self) -> EnsembleParams:
        return EnsembleParams(self.n, self.R, self.beta, self.sigma1)

    def describe(self) -> dict:
        d = asdict(self)
        d.pop("threads")
        d.pop("output")
        d["tool_version"] = __version__
        d["generator"] = GENERATOR_ID
        return d


def _fmt(x) -> str:
    return repr(float(x))


def _output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _main_path(cfg: RunConfig, default_name: str) -> Path:
    if cfg.output:
        return Path(cfg.output)
    return _output_dir() / default_name


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _header_lines(cfg: RunConfig) -> str:
    return (
        f"# wishart-eigs {__version__}\n"
        f"# config {json.dumps(cfg.describe(), sort_keys=True)}\n"
    )


# -- sample -----------------------------------------------------------------


def samples_to_csv(cfg: RunConfig, draws: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    writer = csv.writer(buf, lineterminator="\n")
    if cfg.which == "all":
        writer.writerow(["sample_index"] + [f"lambda_{k}" for k in range(1, draws.shape[1] + 1)])
    else:
        writer.writerow(["sample_index", "lambda_min" if cfg.which == "min" else "lambda_max"])
    for i, row in enumerate(draws):
        writer.writerow([i] + [_fmt(v) for v in row])
    return buf.getvalue()


def samples_to_json(cfg: RunConfig, draws: np.ndarray) -> str:
    payload = {"config": cfg.describe(), "samples": draws.tolist()}
    return json.dumps(payload, sort_keys=True) + "\n"


def read_samples_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    rows = list(csv.reader(lines))[1:]
    return np.array([[float(v) for v in row[1:]] for row in rows])


def cmd_sample(cfg: RunConfig) -> int:
    params = cfg.params()
    start = time.perf_counter()
    draws = draw_samples(params, cfg.method, cfg.samples, cfg.seed, which=cfg.which, threads=cfg.threads)
    wall = time.perf_counter() - start
    path = _main_path(cfg, f"samples.{cfg.format}")
    text = samples_to_csv(cfg, draws) if cfg.format == "csv" else samples_to_json(cfg, draws)
    _write_text(path, text)
    summary = {
        "config": cfg.describe(),
        "seed": cfg.seed,
        "generator": GENERATOR_ID,
        "tool_version": __version__,
        "wall_time_seconds": wall,
        "variates_per_sample": variates_per_sample(params, cfg.method),
        "variates_consumed": variates_per_sample(params, cfg.method) * cfg.samples,
        "rows": int(draws.shape[0]),
        "output": str(path),
    }
    _write_text(_sibling(path, ".summary.json"), json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def _applicable_checks(cfg: RunConfig, params: EnsembleParams) -> list[str]:
    requested = cfg.extra.get("checks", "auto")
    if requested != "auto":
        names = [c.strip() for c in requested.split(",") if c.strip()]
        unknown = set(names) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown checks {sorted(unknown)}; choose from {CHECKS}")
        return names
    checks = []
    unspiked_complex = params.beta == 2.0 and not params.is_spiked
    if unspiked_complex and params.R == params.n:
        checks.append("min_law")
    if unspiked_complex and params.n >= cfg.extra.get("tw_min_n", 30):
        checks.append("max_law")
    checks += ["cross", "trace"]
    return checks


def _reference_methods(cfg: RunConfig, params: EnsembleParams) -> list[str]:
    if cfg.method != "tridiagonal":
        return ["tridiagonal"]
    refs = ["pencil"]
    if params.beta in (1.0, 2.0) and params.R == int(params.R) and params.n <= 128:
        refs.append("dense")
    return refs


def _check_min_law(cfg, params, draws, alpha, out_path):
    lam_min = draws[:, -1]
    report = ks_one_sample(lam_min, lambda x: pmin_cdf(x, params.n), alpha)
    hist = histogram(lam_min, cfg.bins)
    _write_text(_sibling(out_path, "_min_hist.csv"), hist.to_csv({"theory": pmin_exact(hist.centers, params.n)}))
    return {"name": "min_law", "passed": report.passed, "soft": False, "ks": report.to_dict()}


def _check_max_law(cfg, params, draws, out_path):
    extra = cfg.extra
    scaled = tw_rescale(draws[:, 0], params.n, params.R - params.n)
    mean, var, skew = moments(scaled)
    ref_mean, ref_var = tw2_moments(DEFAULT_GRID)
    ref_sd = math.sqrt(ref_var)
    table = TWTable.compute(DEFAULT_GRID)
    ks = ks_one_sample(scaled, table.cdf, 0.001)
    mean_ok = abs(mean - ref_mean) <= extra.get("tw_mean_tol", 0.10)
    sd_ok = abs(math.sqrt(var) - ref_sd) <= extra.get("tw_sd_tol", 0.05)
    ks_soft = ks.statistic < extra.get("tw_ks_soft", 0.03)
    hist = histogram(scaled, cfg.bins)
    _write_text(
        _sibling(out_path, "_max_hist.csv"),
        hist.to_csv({"theory": tw2_pdf(hist.centers, DEFAULT_GRID)}),
    )
    return [
        {"name": "max_law_mean", "passed": bool(mean_ok), "soft": False, "value": mean, "reference": ref_mean},
        {"name": "max_law_sd", "passed": bool(sd_ok), "soft": False, "value": math.sqrt(var), "reference": ref_sd},
        {
            "name": "max_law_ks",
            "passed": bool(ks_soft),
            "soft": True,
            "ks": ks.to_dict(),
            "threshold": extra.get("tw_ks_soft", 0.03),
            "skewness": skew,
        },
    ]


def _check_cross(cfg, params, draws, alpha):
    results = []
    count = min(cfg.samples, cfg.extra.get("cross_samples", 5000))
    mine = draws[:count]
    for k, ref in enumerate(_reference_methods(cfg, params)):
        other = draw_samples(params, ref, count, cfg.seed, threads=cfg.threads, start_index=(k + 1) * 2**32)
        reports = [ks_two_sample(mine[:, j], other[:, j], alpha) for j in range(params.n)]
        results.append(
            {
                "name": f"cross_{cfg.method}_vs_{ref}",
                "passed": all(r.passed for r in reports),
                "soft": False,
                "ks": [r.to_dict() for r in reports],
            }
        )
    return results


def _check_trace(params, draws):
    traces = draws.sum(axis=1)
    N = traces.size
    weight = params.n - 1 + params.sigma1**2
    expected_mean = params.R * weight
    expected_var = 2.0 / params.beta * params.R * (params.n - 1 + params.sigma1**4)
    mean = float(traces.mean())
    var = float(traces.var(ddof=1)) if N > 1 else 0.0
    mean_ok = abs(mean - expected_mean) <= 3.0 * math.sqrt(expected_var / N)
    var_ok = N > 1 and abs(var - expected_var) <= 0.10 * expected_var
    return {
        "name": "trace",
        "passed": bool(mean_ok and var_ok),
        "soft": False,
        "mean": mean,
        "expected_mean": expected_mean,
        "variance": var,
        "expected_variance": expected_var,
    }


def cmd_verify(cfg: RunConfig) -> int:
    params = cfg.params()
    alpha = cfg.extra.get("alpha", 0.001)
    if not 0 < alpha < 1:
        raise ConfigError("--alpha must lie in (0, 1)")
    checks = _applicable_checks(cfg, params)
    out_path = _main_path(cfg, "verify_report.json")
    start = time.perf_counter()
    draws = draw_samples(params, cfg.method, cfg.samples, cfg.seed, threads=cfg.threads)
    results = []
    for name in checks:
        if name == "min_law":
            results.append(_check_min_law(cfg, params, draws, alpha, out_path))
        elif name == "max_law":
            results.extend(_check_max_law(cfg, params, draws, out_path))
        elif name == "cross":
            results.extend(_check_cross(cfg, params, draws, alpha))
        elif name == "trace":
            results.append(_check_trace(params, draws))
    hard_pass = all(r["passed"] for r in results if not r["soft"])
    report = {
        "config": cfg.describe(),
        "seed": cfg.seed,
        "generator": GENERATOR_ID,
        "tool_version": __version__,
        "wall_time_seconds": time.perf_counter() - start,
        "checks": results,
        "passed": hard_pass,
    }
    _write_text(out_path, json.dumps(report, sort_keys=True, indent=2) + "\n")
    for r in results:
        tag = "PASS" if r["passed"] else ("SOFT-FAIL" if r["soft"] else "FAIL")
        print(f"{tag:9s} {r['name']}")
    return EXIT_OK if hard_pass else EXIT_CHECK_FAILED


# -- bench ------------------------------------------------------------------


def parse_grid(text: str) -> list[tuple[int, float]]:
    cells = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            n, R = item.split(":")
            cells.append((int(n), float(R)))
        except ValueError as exc:
            raise ConfigError(f"bad grid cell {item!r}; expected n:R") from exc
    if not cells:
        raise ConfigError("--grid is empty")
    return cells


def bench_rows(cfg: RunConfig) -> list[dict]:
    methods = cfg.extra.get("methods", ["tridiagonal", "dense"])
    dense_solver = cfg.extra.get("dense_solver", "lapack")
    rows = []
    for n, R in parse_grid(cfg.extra.get("grid", f"{cfg.n}:{cfg.R}")):
        params = EnsembleParams(n, R, cfg.beta, cfg.sigma1)
        for method in methods:
            if method == "dense" and (params.beta not in (1.0, 2.0) or R != int(R)):
                continue
            if method == "closed2" and n != 2:
                continue
            kwargs = {"dense_solver": dense_solver} if method == "dense" else {}
            draw_samples(params, method, 1, cfg.seed, which=cfg.which, start_index=2**40, **kwargs)
            start = time.perf_counter()
            draw_samples(params, method, cfg.samples, cfg.seed, which=cfg.which, **kwargs)
            elapsed = time.perf_counter() - start
            rows.append(
                {
                    "n": n,
                    "R": R,
                    "beta": params.beta,
                    "method": method,
                    "samples": cfg.samples,
                    "seconds_per_sample": elapsed / cfg.samples,
                    "variates_per_sample": variates_per_sample(params, method),
                }
            )
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    rows = bench_rows(cfg)
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (_fmt(v) if isinstance(v, float) else v) for k, v in row.items()})
    path = _main_path(cfg, "bench.csv")
    _write_text(path, buf.getvalue())
    print(buf.getvalue(), end="")
    return EXIT_OK


# -- theory -----------------------------------------------------------------


def _curve_csv(cfg, columns: dict) -> str:
    buf = io.StringIO()
    buf.write(_header_lines(cfg))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(columns))
    for row in zip(*columns.values()):
        writer.writerow([v if isinstance(v, (int, np.integer)) else _fmt(v) for v in row])
    return buf.getvalue()


def cmd_theory(cfg: RunConfig) -> int:
    params = cfg.params()
    base = _main_path(cfg, "theory.csv")
    written = []

    table = TWTable.compute(DEFAULT_GRID, step=cfg.extra.get("tw_step", 0.05))
    tw_path = _sibling(base, "_tw2")
    tw_path = tw_path.with_suffix(".csv")
    _write_text(
        tw_path,
        _curve_csv(
            cfg,
            {"s": table.s, "F2": table.F, "pdf": tw2_pdf(table.s, DEFAULT_GRID), "order": [table.order] * table.s.size},
        ),
    )
    written.append(tw_path)

    pmin_applies = params.beta == 2.0 and params.R == params.n and not params.is_spiked
    if pmin_applies:
        x = np.linspace(0.0, 8.0 / params.n, 201)
        path = _sibling(base, "_pmin").with_suffix(".csv")
        _write_text(path, _curve_csv(cfg, {"x": x, "pdf": pmin_exact(x, params.n), "cdf": pmin_cdf(x, params.n)}))
        written.append(path)

    if params.n <= 2 and not params.is_spiked:
        path = _sibling(base, "_density").with_suffix(".csv")
        hi = params.R + 6.0 * math.sqrt(params.R) + 10.0
        grid = np.linspace(hi / 400, hi, 400)
        if params.n == 1:
            logp = [log_joint_density([g], params).value for g in grid]
            _write_text(path, _curve_csv(cfg, {"lambda": grid, "density": np.exp(logp)}))
        else:
            coarse = grid[::10]
            l1, l2, dens = [], [], []
            for a in coarse:
                for b in coarse[coarse < a]:
                    l1.append(a)
                    l2.append(b)
                    dens.append(math.exp(log_joint_density([a, b], params).value))
            _write_text(path, _curve_csv(cfg, {"lambda_1": l1, "lambda_2": l2, "density": dens}))
        written.append(path)

    if cfg.extra.get("svg"):
        draws = draw_samples(params, "tridiagonal", cfg.samples, cfg.seed, threads=cfg.threads)
        if pmin_applies:
            hist = histogram(draws[:, -1], cfg.bins)
            xs = np.linspace(0.0, hist.edges[-1], 300)
            path = _sibling(base, "_min_overlay").with_suffix(".svg")
            _write_text(path, overlay_svg(hist, xs, pmin_exact(xs, params.n), "smallest eigenvalue", "p_min"))
            written.append(path)
        scaled = tw_rescale(draws[:, 0], params.n, params.R - params.n)
        hist = histogram(scaled, cfg.bins)
        xs = np.linspace(hist.edges[0], hist.edges[-1], 300)
        path = _sibling(base, "_max_overlay").with_suffix(".svg")
        _write_text(path, overlay_svg(hist, xs, tw2_pdf(xs, DEFAULT_GRID), "rescaled largest eigenvalue", "TW2"))
        written.append(path)

    for p in written:
        print(p)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wishart-eigs", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--r", type=float, default=None, help="R (defaults to n)")
        p.add_argument("--beta", type=float, default=2.0)
        p.add_argument("--sigma1", type=float, default=1.0)
        p.add_argument("--method", choices=METHODS, default="tridiagonal")
        p.add_argument("--which", choices=("all", "min", "max"), default="all")
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--bins", type=int, default=None)

    common(sub.add_parser("sample", help="draw eigenvalue samples"))

    verify = sub.add_parser("verify", help="check samples against exact and limiting laws")
    common(verify)
    verify.add_argument("--alpha", type=float, default=0.001)
    verify.add_argument("--checks", default="auto", help=f"comma list from {CHECKS} or 'auto'")
    verify.add_argument("--cross-samples", type=int, default=5000)

    bench = sub.add_parser("bench", help="time the sampling routes")
    common(bench)
    bench.add_argument("--grid", default=None, help="comma list of n:R cells")
    bench.add_argument("--methods", default="tridiagonal,pencil,dense")
    bench.add_argument("--dense-solver", choices=("lapack", "jacobi"), default="lapack")

    theory = sub.add_parser("theory", help="write theory tables and overlay plots")
    common(theory)
    theory.add_argument("--svg", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    threads = args.threads
    if threads is None:
        try:
            threads = int(os.environ.get(THREADS_ENV, "1"))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from exc
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        R=args.r if args.r is not None else float(args.n),
        beta=args.beta,
        sigma1=args.sigma1,
        method=args.method,
        which=args.which,
        samples=args.samples,
        seed=args.seed,
        threads=threads,
        output=args.output,
        format=args.format,
        bins=args.bins,
    )
    if args.command == "verify":
        cfg.extra = {"alpha": args.alpha, "checks": args.checks, "cross_samples": args.cross_samples}
    elif args.command == "bench":
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        bad = set(methods) - set(METHODS)
        if bad:
            raise ConfigError(f"unknown methods {sorted(bad)}")
        cfg.extra = {"methods": methods, "dense_solver": args.dense_solver}
        if args.grid:
            parse_grid(args.grid)
            cfg.extra["grid"] = args.grid
    elif args.command == "theory":
        cfg.extra = {"svg": args.svg}
    if args.command == "verify" and cfg.which != "all":
        raise ConfigError("verify needs full spectra (--which all)")
    return cfg.validate() if args.command != "bench" else cfg


COMMANDS = {"sample": cmd_sample, "verify": cmd_verify, "bench": cmd_bench, "theory": cmd_theory}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
