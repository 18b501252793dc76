"""Benchmark CLI.

Runs the experiment in-process by default; with --server URL it acts as a
thin client of the HTTP service and writes the returned files locally.
Exit status is 0 on success, 2 on config/data errors, 1 on anything else;
failures print a single `error: ...` line to stderr.
"""

import argparse
import os
import sys

from .bench import (
    ALGORITHMS,
    ConfigError,
    RunConfig,
    emit_plot_data,
    emit_report,
    run_experiment,
)
from .core import DataError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="clusterbench",
        description="Compare k-means, STAR k*-means and isotropic-Gaussian EM on a CSV dataset.",
    )
    p.add_argument("--data", required=True, help="path to the input CSV")
    p.add_argument("--class-col", type=int, default=None,
                   help="0-based index of the class column (omit for unlabeled data)")
    p.add_argument("--algos", default=",".join(ALGORITHMS),
                   help="comma-separated subset of kmeans,kstar,em (default: all)")
    p.add_argument("--k", type=int, default=5, help="number of clusters / seed points (default 5)")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    p.add_argument("--restarts", type=int, default=1, help="restarts per algorithm (default 1)")
    p.add_argument("--eta", type=float, default=0.05, help="k*-means learning rate (default 0.05)")
    p.add_argument("--sigma2", default="data_variance",
                   help="EM variance: a positive number or 'data_variance' (default)")
    p.add_argument("--em-variant", default="standard", choices=["standard", "paper_literal"],
                   help="EM M-step variant (default standard)")
    p.add_argument("--max-iters", type=int, default=300, help="iteration cap for kmeans/em (default 300)")
    p.add_argument("--max-epochs", type=int, default=100, help="epoch cap for k*-means (default 100)")
    p.add_argument("--tol", type=float, default=1e-8, help="convergence tolerance (default 1e-8)")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--format", default="json", choices=["json", "csv"],
                   help="report format (default json); plot files are always emitted")
    p.add_argument("--emit-ones", action="store_true",
                   help="also report the thresholded 1-cell count of dominant-class rows")
    p.add_argument("--server", default=None,
                   help="URL of a running clusterbench service; runs remotely and writes results locally")
    return p


def _config_from_args(args) -> RunConfig:
    sigma2 = args.sigma2
    if sigma2 != "data_variance":
        try:
            sigma2 = float(sigma2)
        except ValueError:
            raise ConfigError(f"sigma2 must be a number or 'data_variance', got {sigma2!r}")
    return RunConfig(
        dataset_path=args.data,
        class_col=args.class_col,
        algorithms=tuple(a for a in args.algos.split(",") if a),
        k=args.k,
        seed=args.seed,
        restarts=args.restarts,
        eta=args.eta,
        sigma2=sigma2,
        em_variant=args.em_variant,
        max_iters=args.max_iters,
        max_epochs=args.max_epochs,
        tol=args.tol,
        output_dir=args.out,
        output_format=args.format,
        emit_ones=args.emit_ones,
    )


def _run_local(cfg: RunConfig) -> list:
    report, data = run_experiment(cfg)
    written = emit_report(report, cfg.output_format, cfg.output_dir)
    assignments = {r.name: r.assignment for r in report.results}
    written += emit_plot_data(report, data, assignments, cfg.output_dir)
    return written


def _run_remote(cfg: RunConfig, server: str) -> list:
    import httpx

    payload = {
        "dataset_path": cfg.dataset_path,
        "class_col": cfg.class_col,
        "algorithms": list(cfg.algorithms),
        "k": cfg.k,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "eta": cfg.eta,
        "sigma2": cfg.sigma2,
        "em_variant": cfg.em_variant,
        "max_iters": cfg.max_iters,
        "max_epochs": cfg.max_epochs,
        "tol": cfg.tol,
        "output_format": cfg.output_format,
        "emit_ones": cfg.emit_ones,
    }
    resp = httpx.post(server.rstrip("/") + "/experiments", json=payload, timeout=600.0)
    if resp.status_code != 200:
        raise RuntimeError(f"server returned {resp.status_code}: {resp.text}")
    files = resp.json()["files"]
    os.makedirs(cfg.output_dir, exist_ok=True)
    written = []
    for name in sorted(files):
        path = os.path.join(cfg.output_dir, name)
        with open(path, "w", newline="") as fh:
            fh.write(files[name])
        written.append(path)
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if args.server:
            written = _run_remote(cfg, args.server)
        else:
            written = _run_local(cfg)
    except (ConfigError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
