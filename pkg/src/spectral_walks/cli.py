"""Command-line driver for the reproduction studies.

Usage:

    spectral-walks <experiment> [--config FILE] [--seed S] [--threads T]
                   [--out PATH] [--format csv|json]

Experiments: wigner-convergence, mp-convergence, mckay-convergence, tail,
walk-census, certify.  Configuration is a JSON object; command-line flags
override it.  The seed is mandatory (no wall-clock seeding) and output
files are byte-identical across runs of the same configuration.  Exit
codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds, graphs, measures, poly, spectra
from .ensembles import covariance, derive_seed, rect_sign_matrix, wigner_matrix
from .errors import NumericError

__all__ = ["ExperimentConfig", "ResultRecord", "run", "emit", "main"]

EXPERIMENTS = (
    "wigner-convergence",
    "mp-convergence",
    "mckay-convergence",
    "tail",
    "walk-census",
    "certify",
)

_DEFAULTS = {
    "wigner-convergence": {"n": [100, 400, 1600], "trials": 20},
    "mp-convergence": {"n": 300, "N": 600, "trials": 20},
    "mckay-convergence": {"n": [60, 200], "d": 3, "trials": 20},
    "tail": {"kind": "wigner", "n": 400, "N": None, "k": 8, "eps": 0.15, "trials": 100},
    "walk-census": {"graph": "complete:5", "k_max": 4},
    "certify": {"graph": "petersen", "m": 3},
}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    params: dict
    threads: int = 1
    out: str | None = None
    fmt: str = "csv"


@dataclass
class ResultRecord:
    experiment: str
    params: dict
    seed: int
    columns: list[str]
    rows: list[list]
    summary: list[tuple[str, str, object]] = field(default_factory=list)
    wall_time: float = 0.0  # logged to stderr, never serialized


def _parse_graph_spec(spec):
    if isinstance(spec, dict):
        kind = spec.get("kind")
        try:
            return graphs.make_graph(kind, **{k: v for k, v in spec.items() if k != "kind"})
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad graph spec {spec!r}: {exc}") from exc
    if isinstance(spec, str):
        parts = spec.split(":")
        name = parts[0]
        try:
            if name == "petersen":
                return graphs.petersen()
            if name == "complete":
                return graphs.complete(int(parts[1]))
            if name in ("complete-bipartite", "complete_bipartite"):
                return graphs.complete_bipartite(int(parts[1]), int(parts[2]))
            if name == "cycle":
                return graphs.cycle(int(parts[1]))
            if name in ("edge-list", "edge_list"):
                return graphs.load_edge_list(parts[1])
        except (IndexError, ValueError) as exc:
            raise ConfigError(f"bad graph spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unrecognized graph spec {spec!r}")


def _as_int_list(value, name) -> list[int]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [int(value)]
    if isinstance(value, (list, tuple)) and value:
        return [int(v) for v in value]
    raise ConfigError(f"parameter {name!r} must be an integer or list of integers")


def _parallel_rows(fn, count: int, threads: int) -> list:
    """Evaluate fn(0..count-1), merged by index regardless of scheduling."""
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


# -- experiment runners ------------------------------------------------------


def _run_wigner_convergence(cfg: ExperimentConfig) -> ResultRecord:
    ns = _as_int_list(cfg.params["n"], "n")
    trials = int(cfg.params["trials"])
    target = measures.wigner_measure()
    columns = ["n", "trial", "dk", "op_norm", "lambda_min", "lambda_max"]
    rows: list[list] = []
    summary = []
    for ni, n in enumerate(ns):

        def one(t, n=n, ni=ni):
            A = wigner_matrix(n, derive_seed(cfg.seed, ni * 1_000_003 + t))
            spec = spectra.empirical(A)
            lam = spec.eigenvalues
            dk = measures.ks_distance_empirical(spec, target)
            return [n, t, dk, float(max(-lam[0], lam[-1])), float(lam[0]), float(lam[-1])]

        block = _parallel_rows(one, trials, cfg.threads)
        rows.extend(block)
        dks = [r[2] for r in block]
        summary.append((f"n={n}", "median_dk", float(np.median(dks))))
        summary.append((f"n={n}", "mean_dk", float(np.mean(dks))))
        summary.append((f"n={n}", "max_dk", float(np.max(dks))))
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, summary)


def _run_mp_convergence(cfg: ExperimentConfig) -> ResultRecord:
    n = int(cfg.params["n"])
    N = int(cfg.params["N"])
    trials = int(cfg.params["trials"])
    target = measures.marchenko_pastur_measure(n / N)
    columns = ["n", "N", "trial", "dk", "lambda_min", "lambda_max"]

    def one(t):
        C = covariance(rect_sign_matrix(n, N, derive_seed(cfg.seed, t)))
        spec = spectra.empirical(C)
        dk = measures.ks_distance_empirical(spec, target)
        return [n, N, t, dk, float(spec.eigenvalues[0]), float(spec.eigenvalues[-1])]

    rows = _parallel_rows(one, trials, cfg.threads)
    dks = [r[3] for r in rows]
    summary = [
        ("all", "median_dk", float(np.median(dks))),
        ("all", "mean_dk", float(np.mean(dks))),
        ("all", "max_dk", float(np.max(dks))),
    ]
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, summary)


def _run_mckay_convergence(cfg: ExperimentConfig) -> ResultRecord:
    ns = _as_int_list(cfg.params["n"], "n")
    d = int(cfg.params["d"])
    trials = int(cfg.params["trials"])
    target = measures.kesten_mckay_measure(d)
    columns = ["n", "d", "trial", "dk", "lambda_min", "lambda_max"]
    rows: list[list] = []
    summary = []
    for ni, n in enumerate(ns):

        def one(t, n=n, ni=ni):
            g = graphs.random_regular(n, d, derive_seed(cfg.seed, ni * 1_000_003 + t))
            spec = spectra.empirical(graphs.adjacency_matrix(g))
            dk = measures.ks_distance_empirical(spec, target)
            return [n, d, t, dk, float(spec.eigenvalues[0]), float(spec.eigenvalues[-1])]

        block = _parallel_rows(one, trials, cfg.threads)
        rows.extend(block)
        dks = [r[3] for r in block]
        summary.append((f"n={n}", "median_dk", float(np.median(dks))))
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, summary)


def _run_tail(cfg: ExperimentConfig) -> ResultRecord:
    kind = cfg.params["kind"]
    n = int(cfg.params["n"])
    N = cfg.params.get("N")
    N = int(N) if N is not None else None
    k = int(cfg.params["k"])
    eps = float(cfg.params["eps"])
    trials = int(cfg.params["trials"])
    result = bounds.tail_experiment(kind, n, k, eps, trials, cfg.seed, N=N)
    if kind == "wigner":
        lo_thr, hi_thr = -(1.0 + eps), 1.0 + eps
    else:
        xi = n / N
        lo_thr = (1.0 - math.sqrt(xi)) ** 2 - eps
        hi_thr = (1.0 + math.sqrt(xi)) ** 2 + eps
    columns = ["trial", "lambda_min", "lambda_max", "exceed", "trace_stat"]
    rows = []
    for t, ((lo, hi), tr) in enumerate(zip(result.extremes, result.traces)):
        exceeded = int(lo < lo_thr or hi > hi_thr)
        rows.append([t, lo, hi, exceeded, tr])
    summary = [("all", "exceed_count", result.exceed_count)]
    for q, v in zip(("q0", "q25", "q50", "q75", "q100"), result.trace_quantiles):
        summary.append(("all", f"trace_{q}", v))
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, summary)


def _run_walk_census(cfg: ExperimentConfig) -> ResultRecord:
    g = _parse_graph_spec(cfg.params["graph"])
    k_max = int(cfg.params["k_max"])
    spec = cfg.params["graph"]
    columns = ["k", "nb_closed", "nb_even_closed", "cyclic_nb", "even_ratio"]
    rows = []
    for k in range(1, k_max + 1):
        counts = graphs.count_walks(g, k)
        ratio = ""
        if k % 2 == 0:
            half = k // 2
            if isinstance(spec, str) and spec.startswith("complete:"):
                ratio = counts.nb_even_closed / (half * float(g.n) ** half)
            elif g.bipartition is not None:
                nn = len(g.bipartition[0]) * len(g.bipartition[1])
                ratio = counts.nb_even_closed / (half * float(nn) ** (half / 2.0))
        rows.append([k, counts.nb_closed, counts.nb_even_closed, counts.cyclic_nb, ratio])
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, [])


def _run_certify(cfg: ExperimentConfig) -> ResultRecord:
    g = _parse_graph_spec(cfg.params["graph"])
    m = int(cfg.params["m"])
    d = g.is_regular()
    if d is None or d < 3:
        raise ConfigError("certify needs a d-regular graph with d >= 3")
    family = poly.canonical_form(poly.kesten_mckay_recurrence(d))
    target = measures.kesten_mckay_scaled_measure(d)
    A = graphs.adjacency_matrix(g) / (2.0 * math.sqrt(d - 1.0))
    result = bounds.certify(family, target, A, m)
    columns = ["m", "d", "bound", "actual", "b_prev", "sup_B"]
    rows = [[m, d, result.bound, result.actual, result.certificate.b_prev, result.certificate.sup_B]]
    summary = [("all", "dominated", int(result.bound >= result.actual - 1e-9))]
    return ResultRecord(cfg.experiment, dict(cfg.params), cfg.seed, columns, rows, summary)


_RUNNERS = {
    "wigner-convergence": _run_wigner_convergence,
    "mp-convergence": _run_mp_convergence,
    "mckay-convergence": _run_mckay_convergence,
    "tail": _run_tail,
    "walk-census": _run_walk_census,
    "certify": _run_certify,
}


def run(cfg: ExperimentConfig) -> ResultRecord:
    """Execute one experiment; deterministic for a fixed configuration."""
    if cfg.experiment not in _RUNNERS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    start = time.perf_counter()
    try:
        record = _RUNNERS[cfg.experiment](cfg)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record.wall_time = time.perf_counter() - start
    return record


# -- serialization -----------------------------------------------------------


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit(record: ResultRecord, fmt: str = "csv", path: str | None = None) -> str:
    """Serialize a result record; CSV by default, JSON on request.

    Wall time is intentionally excluded so identical configurations always
    produce identical bytes.
    """
    if fmt == "csv":
        lines = [",".join(record.columns)]
        for row in record.rows:
            lines.append(",".join(_fmt_cell(v) for v in row))
        for scope, stat, value in record.summary:
            lines.append(f"#summary,{scope},{stat},{_fmt_cell(value)}")
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "experiment": record.experiment,
            "params": record.params,
            "seed": record.seed,
            "columns": record.columns,
            "rows": record.rows,
            "summary": [list(s) for s in record.summary],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


# -- entry point -------------------------------------------------------------


def _build_config(args) -> ExperimentConfig:
    raw = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    experiment = raw.get("experiment", args.experiment)
    if experiment != args.experiment:
        raise ConfigError(
            f"config file is for {experiment!r} but {args.experiment!r} was requested"
        )
    seed = args.seed if args.seed is not None else raw.get("seed")
    if seed is None:
        raise ConfigError("a seed is required (config 'seed' or --seed); no wall-clock seeding")
    params = dict(_DEFAULTS[experiment])
    for key, value in raw.items():
        if key in ("experiment", "seed", "out", "format", "threads"):
            continue
        if key not in params:
            raise ConfigError(f"unknown parameter {key!r} for experiment {experiment!r}")
        params[key] = value
    out = args.out if args.out is not None else raw.get("out")
    fmt = args.format if args.format is not None else raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    threads = args.threads if args.threads is not None else int(raw.get("threads", 1))
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    return ExperimentConfig(
        experiment=experiment,
        seed=int(seed),
        params=params,
        threads=threads,
        out=out,
        fmt=fmt,
    )


def _parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="spectral-walks",
        description="Desk-scale random-matrix spectrum studies",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--seed", type=int, help="base seed (mandatory here or in the config)")
    parser.add_argument("--threads", type=int, help="trial-level parallelism (default 1)")
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)
    try:
        cfg = _build_config(args)
        record = run(cfg)
        emit(record, cfg.fmt, cfg.out)
    except ConfigError as exc:
        print(f"spectral-walks: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"spectral-walks: numeric failure: {exc}", file=sys.stderr)
        return 3
    print(
        f"[spectral-walks] {cfg.experiment} finished in {record.wall_time:.2f}s",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
