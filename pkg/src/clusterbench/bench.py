"""Benchmark harness: load + normalize a dataset, run the three algorithms
under one seed, time them, and emit comparison tables and plot data.

All emission goes through render_* functions that return filename -> text
mappings, so the same bytes come out whether files are written locally or
shipped back from the service.
"""

import dataclasses
import json
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from . import em as em_mod
from . import kmeans as kmeans_mod
from . import kstar as kstar_mod
from .core import Assignment, DataMatrix, RngStream, load_csv, minmax_normalize
from .metrics import MetricsReport, compute_report, dominant_ones_count

ALGORITHMS = ("kmeans", "kstar", "em")
_STREAM_BASE = {"kmeans": 0, "kstar": 1, "em": 2}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    dataset_path: str
    class_col: Optional[int] = None
    algorithms: Tuple[str, ...] = ALGORITHMS
    k: int = 5
    seed: int = 0
    restarts: int = 1
    eta: float = 0.05
    sigma2: Union[str, float] = "data_variance"
    em_variant: str = "standard"
    max_iters: int = 300
    max_epochs: int = 100
    tol: float = 1e-8
    output_dir: str = "."
    output_format: str = "json"
    emit_ones: bool = False


def validate_config(cfg: RunConfig) -> None:
    """Reject a bad config before any data is touched."""
    if cfg.k < 1:
        raise ConfigError(f"k must be >= 1, got {cfg.k}")
    if cfg.restarts < 1:
        raise ConfigError(f"restarts must be >= 1, got {cfg.restarts}")
    if not cfg.algorithms:
        raise ConfigError("at least one algorithm must be selected")
    for a in cfg.algorithms:
        if a not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {a!r}; choose from {ALGORITHMS}")
    if not (0 <= cfg.eta < 1):
        raise ConfigError(f"eta must lie in [0, 1), got {cfg.eta}")
    if cfg.em_variant not in ("standard", "paper_literal"):
        raise ConfigError(f"em_variant must be standard|paper_literal, got {cfg.em_variant!r}")
    if cfg.output_format not in ("json", "csv"):
        raise ConfigError(f"output_format must be json|csv, got {cfg.output_format!r}")
    if cfg.sigma2 != "data_variance":
        try:
            if float(cfg.sigma2) <= 0:
                raise ConfigError("sigma2 must be > 0")
        except (TypeError, ValueError):
            raise ConfigError(f"sigma2 must be a positive number or 'data_variance', got {cfg.sigma2!r}")
    if cfg.max_iters < 1 or cfg.max_epochs < 1:
        raise ConfigError("max_iters and max_epochs must be >= 1")
    if cfg.tol < 0:
        raise ConfigError("tol must be >= 0")


@dataclass
class AlgorithmResult:
    name: str
    metrics: MetricsReport
    assignment: Assignment
    centroids: np.ndarray
    summary: Dict[str, object] = field(default_factory=dict)
    wall_time_seconds: float = 0.0


@dataclass
class ExperimentReport:
    config: Dict[str, object]
    results: List[AlgorithmResult]
    combined_time: float


def _stream(cfg: RunConfig, algo: str, restart: int) -> RngStream:
    return RngStream(seed=cfg.seed, stream_id=_STREAM_BASE[algo] * 1_000_000 + restart)


def _run_kmeans(m: DataMatrix, cfg: RunConfig) -> AlgorithmResult:
    best = None
    elapsed = 0.0
    for r in range(cfg.restarts):
        t0 = time.perf_counter()
        model, a = kmeans_mod.lloyd_run(
            m, cfg.k, _stream(cfg, "kmeans", r), max_iters=cfg.max_iters, tol=cfg.tol
        )
        elapsed += time.perf_counter() - t0
        if best is None or model.sse < best[0].sse:
            best = (model, a)
    model, a = best
    return AlgorithmResult(
        name="kmeans",
        metrics=None,
        assignment=a,
        centroids=model.centroids,
        summary={"iterations": model.iterations, "sse": float(model.sse)},
        wall_time_seconds=elapsed,
    )


def _run_kstar(m: DataMatrix, cfg: RunConfig) -> AlgorithmResult:
    best = None
    best_key = None
    elapsed = 0.0
    for r in range(cfg.restarts):
        t0 = time.perf_counter()
        model, a = kstar_mod.kstar_run(
            m, cfg.k, _stream(cfg, "kstar", r), eta=cfg.eta, max_epochs=cfg.max_epochs
        )
        elapsed += time.perf_counter() - t0
        key = (model.phase != "converged", kstar_mod.mean_penalized_cost(m, model, a))
        if best_key is None or key < best_key:
            best, best_key = (model, a), key
    model, a = best
    return AlgorithmResult(
        name="kstar",
        metrics=None,
        assignment=a,
        centroids=model.means,
        summary={
            "surviving_clusters": kstar_mod.surviving_count(a),
            "alphas": [float(x) for x in model.alphas],
            "converged": model.phase == "converged",
        },
        wall_time_seconds=elapsed,
    )


def _run_em(m: DataMatrix, cfg: RunConfig) -> AlgorithmResult:
    best = None
    best_ll = None
    elapsed = 0.0
    for r in range(cfg.restarts):
        t0 = time.perf_counter()
        model = em_mod.em_run(
            m,
            cfg.k,
            _stream(cfg, "em", r),
            sigma2_mode=cfg.sigma2,
            variant=cfg.em_variant,
            max_iters=cfg.max_iters,
            tol=cfg.tol,
        )
        elapsed += time.perf_counter() - t0
        ll = em_mod.log_likelihood(m, model.means, model.sigma2)
        if best_ll is None or ll > best_ll:
            best, best_ll = model, ll
    model = best
    return AlgorithmResult(
        name="em",
        metrics=None,
        assignment=em_mod.hard_assign(model),
        centroids=model.means,
        summary={
            "iterations": model.iterations,
            "log_likelihood": float(best_ll),
            "sigma2": float(model.sigma2),
        },
        wall_time_seconds=elapsed,
    )


_RUNNERS = {"kmeans": _run_kmeans, "kstar": _run_kstar, "em": _run_em}


def run_experiment(cfg: RunConfig) -> Tuple[ExperimentReport, DataMatrix]:
    """Execute the configured algorithms on the normalized dataset.

    Returns the report plus the normalized data (needed for plot emission).
    """
    validate_config(cfg)
    m = minmax_normalize(load_csv(cfg.dataset_path, class_col=cfg.class_col))
    results = []
    for algo in ALGORITHMS:
        if algo not in cfg.algorithms:
            continue
        try:
            res = _RUNNERS[algo](m, cfg)
        except Exception as exc:
            raise RuntimeError(f"algorithm {algo} failed: {exc}") from exc
        res.metrics = compute_report(m, res.assignment, res.centroids, res.wall_time_seconds)
        if cfg.emit_ones and m.labels is not None:
            res.summary["dominant_ones"] = dominant_ones_count(m, res.assignment, m.labels)
        results.append(res)
    cfg_echo = dataclasses.asdict(cfg)
    cfg_echo["algorithms"] = list(cfg.algorithms)
    combined = sum(r.wall_time_seconds for r in results)
    return ExperimentReport(config=cfg_echo, results=results, combined_time=combined), m


def report_to_dict(report: ExperimentReport) -> Dict[str, object]:
    """Plain-JSON form of a report with stable content."""
    algos = {}
    for r in report.results:
        mt = r.metrics
        algos[r.name] = {
            "wall_time_seconds": float(r.wall_time_seconds),
            "centroids": [[float(v) for v in row] for row in r.centroids],
            "assignment": [int(i) for i in r.assignment.index],
            "summary": r.summary,
            "metrics": {
                "purity": None if mt.purity is None else float(mt.purity),
                "normalized_entropy": float(mt.norm_entropy),
                "class_entropy": None if mt.class_entropy is None else float(mt.class_entropy),
                "dominant_count": mt.dominant_count,
                "cluster_sizes": [int(s) for s in mt.cluster_sizes],
                "cluster_grand_means": [float(g) for g in mt.cluster_means.grand_means],
                "cluster_feature_means": [[float(v) for v in row] for row in mt.cluster_means.means],
                "empty_clusters": [bool(e) for e in mt.cluster_means.empty],
                "intercluster_distances": [[float(v) for v in row] for row in mt.intercluster],
            },
        }
    return {
        "config": report.config,
        "algorithms": algos,
        "combined_time_seconds": float(report.combined_time),
    }


def canonical_json(d: Dict[str, object]) -> str:
    return json.dumps(d, sort_keys=True, indent=2) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def render_report_files(report: ExperimentReport, fmt: str) -> Dict[str, str]:
    """Render the report as filename -> contents; json gives one canonical
    file, csv gives one file per table (purity/entropy, times, means)."""
    if fmt == "json":
        return {"report.json": canonical_json(report_to_dict(report))}
    if fmt != "csv":
        raise ConfigError(f"output_format must be json|csv, got {fmt!r}")
    names = [r.name for r in report.results]
    files = {}

    lines = ["metric," + ",".join(names)]
    for key, get in (
        ("purity", lambda r: r.metrics.purity),
        ("normalized_entropy", lambda r: r.metrics.norm_entropy),
        ("class_entropy", lambda r: r.metrics.class_entropy),
        ("dominant_count", lambda r: r.metrics.dominant_count),
    ):
        lines.append(key + "," + ",".join(_fmt(get(r)) for r in report.results))
    files["purity_entropy.csv"] = "\n".join(lines) + "\n"

    header = ",".join(names) + ",combined"
    row = ",".join(_fmt(r.wall_time_seconds) for r in report.results)
    files["times.csv"] = header + "\n" + row + "," + _fmt(report.combined_time) + "\n"

    k = report.results[0].assignment.k if report.results else 0
    lines = ["cluster," + ",".join(names)]
    for j in range(k):
        lines.append(
            str(j) + "," + ",".join(_fmt(float(r.metrics.cluster_means.grand_means[j])) for r in report.results)
        )
    files["means.csv"] = "\n".join(lines) + "\n"
    return files


def render_plot_files(
    report: ExperimentReport, m: DataMatrix, assignments: Dict[str, Assignment]
) -> Dict[str, str]:
    """Plot-ready text: a means-comparison series, and per-cluster scatter
    files of row index vs row grand mean."""
    files = {}
    names = [r.name for r in report.results]
    lines = ["cluster," + ",".join(names)]
    k = report.results[0].assignment.k if report.results else 0
    for j in range(k):
        lines.append(
            str(j) + "," + ",".join(_fmt(float(r.metrics.cluster_means.grand_means[j])) for r in report.results)
        )
    files["fig1_means.csv"] = "\n".join(lines) + "\n"

    positions = m.values.mean(axis=1)
    for name, a in assignments.items():
        for j in range(a.k):
            rows = ["index,position"]
            for i in np.flatnonzero(a.index == j):
                rows.append(f"{i},{_fmt(float(positions[i]))}")
            files[f"fig2_{name}_cluster{j}.csv"] = "\n".join(rows) + "\n"
    return files


def _write(files: Dict[str, str], out_dir: str) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name in sorted(files):
        path = os.path.join(out_dir, name)
        with open(path, "w", newline="") as fh:
            fh.write(files[name])
        written.append(path)
    return written


def emit_report(report: ExperimentReport, fmt: str, out_dir: str) -> List[str]:
    return _write(render_report_files(report, fmt), out_dir)


def emit_plot_data(
    report: ExperimentReport, m: DataMatrix, assignments: Dict[str, Assignment], out_dir: str
) -> List[str]:
    return _write(render_plot_files(report, m, assignments), out_dir)
