"""Command-line harness: single solves, benchmark tables, and bound curves.

Subcommands:

* ``solve``  -- run one MM solve, writing ``beta.csv`` and ``trace.csv``.
* ``bench``  -- run a grid of (bound, init) cells repeatedly and write a
  TSV summary with mean iteration counts and wall times.
* ``curves`` -- dump grids of the target function and its tangent bounds,
  plot-ready.

All numeric output uses 17 significant digits; files are written
atomically.  Exit status is 0 only if every requested run converged.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .bounds import BoundKind, eval_bound, eval_transformed, h, h_prime, pg_weight
from .coord import solve_elastic_net
from .data import lambda_heuristic, load_csv, standardize, synth
from .objective import Dataset, PenaltyConfig
from .ridge import MMResult, SolverConfig, solve_ridge

__all__ = ["BenchSpec", "main", "cmd_solve", "cmd_bench", "cmd_curves"]


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_synth_spec(spec: str) -> dict:
    out = {}
    keys = {
        "n": int,
        "p": int,
        "seed": int,
        "sparsity": float,
        "scale": float,
    }
    for item in spec.split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in keys:
            raise SystemExit(f"unknown synth key {key!r} (expected {sorted(keys)})")
        out[key] = keys[key](value)
    for required in ("n", "p", "seed"):
        if required not in out:
            raise SystemExit(f"synth spec must set {required}= (got {spec!r})")
    return out


def _load_dataset(args) -> tuple[Dataset, dict]:
    if args.data is not None:
        dataset = standardize(load_csv(args.data))
        source = {"source": "csv", "path": str(args.data)}
    else:
        spec = _parse_synth_spec(args.synth)
        dataset = synth(
            n=spec["n"],
            p=spec["p"],
            seed=spec["seed"],
            coef_sparsity=spec.get("sparsity", 0.1),
            coef_scale=spec.get("scale", 1.0),
        )
        source = {"source": "synth", "spec": spec}
    meta = dict(dataset.meta)
    meta.update(source)
    return dataset, meta


def _resolve_lambda(args, dataset: Dataset) -> float:
    if args.lam is not None:
        return float(args.lam)
    return lambda_heuristic(dataset.p, sigma0=args.lambda_heuristic)


def _parse_init(text: str) -> tuple[str, float]:
    if text == "zeros":
        return "zeros", 10.0
    if text == "boost":
        return "boost", 10.0
    if text.startswith("boost="):
        return "boost", float(text[len("boost=") :])
    raise SystemExit(f"--init must be 'zeros', 'boost' or 'boost=V', got {text!r}")


def _run_solver(dataset, lam, alpha, config: SolverConfig) -> MMResult:
    if alpha == 0.0:
        return solve_ridge(dataset, lam, config)
    return solve_elastic_net(dataset, PenaltyConfig(lam=lam, alpha=alpha), config)


def _write_solution(out_dir, result: MMResult, meta: dict) -> None:
    os.makedirs(out_dir, exist_ok=True)
    beta_lines = "\n".join(_fmt(b) for b in result.beta_hat) + "\n"
    _atomic_write(os.path.join(out_dir, "beta.csv"), beta_lines)
    rows = ["iter,objective,time_s"]
    rows += [f"{it},{_fmt(f)},{_fmt(t)}" for it, f, t in result.trace]
    _atomic_write(os.path.join(out_dir, "trace.csv"), "\n".join(rows) + "\n")
    _atomic_write(
        os.path.join(out_dir, "dataset_meta.json"),
        json.dumps(meta, indent=2, sort_keys=True) + "\n",
    )


def cmd_solve(args) -> int:
    dataset, meta = _load_dataset(args)
    lam = _resolve_lambda(args, dataset)
    init, boost = _parse_init(args.init)
    config = SolverConfig(
        kind=BoundKind(args.bound),
        init=init,
        boost_value=boost,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    result = _run_solver(dataset, lam, args.alpha, config)
    _write_solution(args.out, result, meta)
    final = result.trace[-1][1]
    print(
        f"lambda={_fmt(lam)} n_iter={result.n_iter} "
        f"final_objective={_fmt(final)} status={result.status}"
    )
    return 0 if result.status == "converged" else 1


@dataclass(frozen=True)
class BenchSpec:
    """One benchmark request: dataset, penalty, solver cells, repetitions."""

    cells: tuple  # of (kind, init, boost_value)
    lam: float
    alpha: float
    repetitions: int
    out_dir: str
    tol: float = 1e-10
    max_iter: int = 100_000

    def __post_init__(self):
        if len(self.cells) < 1:
            raise ValueError("bench needs at least one bound cell")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")


def _parse_cells(text: str) -> tuple:
    cells = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, _, init_part = item.partition(":")
        kind = BoundKind(name)
        if init_part:
            init, boost = _parse_init(init_part)
        else:
            init, boost = "zeros", 10.0
        cells.append((kind, init, boost))
    return tuple(cells)


def run_bench(dataset: Dataset, spec: BenchSpec):
    """Execute every (bound, init) cell ``repetitions`` times; returns rows
    of ``(bound, init, lambda, mean_iters, mean_time_s, final_objective)``
    plus an all-converged flag."""
    rows = []
    all_converged = True
    for kind, init, boost in spec.cells:
        config = SolverConfig(
            kind=kind,
            init=init,
            boost_value=boost,
            tol=spec.tol,
            max_iter=spec.max_iter,
        )
        iters, times, finals = [], [], []
        for _ in range(spec.repetitions):
            result = _run_solver(dataset, spec.lam, spec.alpha, config)
            all_converged &= result.status == "converged"
            iters.append(result.n_iter)
            times.append(result.trace[-1][2])
            finals.append(result.trace[-1][1])
        label = init if init == "zeros" else f"boost={_fmt(boost)}"
        rows.append(
            (
                kind.value,
                label,
                spec.lam,
                float(np.mean(iters)),
                float(np.mean(times)),
                float(np.mean(finals)),
            )
        )
    return rows, all_converged


def cmd_bench(args) -> int:
    dataset, meta = _load_dataset(args)
    lam = _resolve_lambda(args, dataset)
    spec = BenchSpec(
        cells=_parse_cells(args.bounds),
        lam=lam,
        alpha=args.alpha,
        repetitions=args.repetitions,
        out_dir=args.out,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    rows, all_converged = run_bench(dataset, spec)
    os.makedirs(args.out, exist_ok=True)
    lines = ["bound\tinit\tlambda\tmean_iters\tmean_time_s\tfinal_objective"]
    for bound, init, lam_val, mean_iters, mean_time, final in rows:
        lines.append(
            f"{bound}\t{init}\t{_fmt(lam_val)}\t{_fmt(mean_iters)}\t"
            f"{_fmt(mean_time)}\t{_fmt(final)}"
        )
        print(lines[-1])
    _atomic_write(os.path.join(args.out, "bench.tsv"), "\n".join(lines) + "\n")
    _atomic_write(
        os.path.join(args.out, "dataset_meta.json"),
        json.dumps(meta, indent=2, sort_keys=True) + "\n",
    )
    return 0 if all_converged else 1


def cmd_curves(args) -> int:
    if args.grid < 1:
        raise SystemExit("--grid must request at least one point")
    if not args.r_max > args.r_min:
        raise SystemExit("--r-max must exceed --r-min")
    zeta = float(args.zeta)
    r = np.linspace(args.r_min, args.r_max, args.grid)
    columns = {
        "r": r,
        "h": np.asarray(h(r)),
        "bl": np.asarray(eval_bound(BoundKind.BL, r, zeta)),
        "pg": np.asarray(eval_bound(BoundKind.PG, r, zeta)),
        "pq": np.asarray(eval_bound(BoundKind.PQ, r, zeta)),
    }
    for mult in args.quad_multiplier or ():
        d = r - zeta
        columns[f"q{mult:g}"] = (
            h(zeta) + h_prime(zeta) * d - mult * pg_weight(zeta) * d * d / 2.0
        )
    if args.transformed:
        rho = np.linspace(0.0, float(np.max(r * r)), args.grid)
        phi = zeta * zeta
        columns["rho"] = rho
        columns["h_t"] = np.asarray(h(np.sqrt(rho)))
        columns["pg_t"] = np.asarray(eval_transformed(BoundKind.PG, rho, phi))
        columns["pq_t"] = np.asarray(eval_transformed(BoundKind.PQ, rho, phi))

    names = list(columns)
    lines = [",".join(names)]
    for i in range(args.grid):
        lines.append(",".join(_fmt(columns[name][i]) for name in names))
    _atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.grid} rows to {args.out}")
    return 0


def _add_data_options(sub) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--data", help="CSV file: response column 'y' first")
    group.add_argument(
        "--synth",
        help="synthetic data recipe, e.g. n=40,p=500,seed=1[,sparsity=0.1,scale=1.0]",
    )
    lam_group = sub.add_mutually_exclusive_group(required=True)
    lam_group.add_argument("--lambda", dest="lam", type=float, help="penalty strength")
    lam_group.add_argument(
        "--lambda-heuristic",
        type=float,
        metavar="SIGMA0",
        help="set lambda = p / (sigma0^2 * 100)",
    )
    sub.add_argument("--alpha", type=float, default=0.0, help="elastic-net mixing")
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--max-iter", type=int, default=100_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmlogit",
        description="MM solvers for penalized logistic regression with "
        "BL/PG/PQ tangent bounds",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="run one solver configuration")
    _add_data_options(solve)
    solve.add_argument("--bound", choices=["bl", "pg", "pq"], default="pg")
    solve.add_argument("--init", default="zeros", help="zeros | boost | boost=V")
    solve.add_argument("--out", required=True, help="output directory")
    solve.set_defaults(func=cmd_solve)

    bench = subparsers.add_parser("bench", help="benchmark several bounds")
    _add_data_options(bench)
    bench.add_argument(
        "--bounds",
        default="bl,pg,pq,pq:boost",
        help="comma list of cells, each KIND[:boost[=V]]",
    )
    bench.add_argument("--repetitions", type=int, default=10)
    bench.add_argument("--out", required=True, help="output directory")
    bench.set_defaults(func=cmd_bench)

    curves = subparsers.add_parser("curves", help="dump bound curves on a grid")
    curves.add_argument("--zeta", type=float, required=True)
    curves.add_argument("--r-min", type=float, default=-30.0)
    curves.add_argument("--r-max", type=float, default=30.0)
    curves.add_argument("--grid", type=int, default=601)
    curves.add_argument(
        "--quad-multiplier",
        type=float,
        action="append",
        help="extra tangent quadratic with curvature MULT * w_pg(zeta)",
    )
    curves.add_argument("--transformed", action="store_true")
    curves.add_argument("--out", required=True, help="output CSV file")
    curves.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
