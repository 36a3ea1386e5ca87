"""Command line surface. Thin adapters only: every command parses flags,
calls the library, and serializes the result.

Exit codes: 0 success, 1 validation or input error, 2 when a solver did
not converge (outputs are still written, flagged in the payload).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .networks import (GwnetError, MeasureNetwork, read_network,
                       write_network)
from .gw import GwParams, solve_gw
from .geodesics import evaluate, geodesic_aligned
from .frechet import FrechetParams, compressed_average, frechet_mean
from .analysis import (featurize, project_along_component, tangent_pca,
                       vectorize_at_base)
from .experiments import (SbmSpec, asymmetry_sweep, default_sbm_spec,
                          generate_sbm, sbm_compression_experiment,
                          support_size_sweep)


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _parse_ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


def _parse_matrix(text: str) -> np.ndarray:
    return np.array([_parse_floats(row) for row in text.split(";")])


def _write_rows(rows: list[dict], path, fmt: str, headers: list[str]):
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=1)
            fh.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=headers)
            writer.writeheader()
            writer.writerows(rows)


def _load_inputs(paths: list[str]) -> list[tuple[str, MeasureNetwork]]:
    """Expand directories, read every network file, keep a stable order."""
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files += sorted(q for q in p.iterdir()
                            if q.suffix in (".json", ".csv"))
        else:
            files.append(p)
    if not files:
        raise GwnetError("no input networks found")
    return [(f.stem, read_network(f)) for f in files]


def _gw_params(args) -> GwParams:
    return GwParams(max_outer_iters=args.max_iters,
                    restarts=args.restarts, rng_seed=args.seed)


def _coupling_payload(coupling, report) -> dict:
    return {"matrix": coupling.matrix.tolist(), "cost": report.cost,
            "gwDistance": report.gw_distance, "iterations": report.iterations,
            "converged": report.converged}


# --------------------------------------------------------------- commands

def _cmd_distance(args) -> int:
    X = read_network(args.x)
    Y = read_network(args.y)
    coupling, report = solve_gw(X, Y, _gw_params(args))
    print(f"gwDistance {report.gw_distance:.9f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(_coupling_payload(coupling, report), fh)
            fh.write("\n")
    return 0 if report.converged else 2


def _cmd_geodesic(args) -> int:
    X = read_network(args.x)
    Y = read_network(args.y)
    rep = geodesic_aligned(X, Y, _gw_params(args))
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    ts = _parse_floats(args.ts)
    files = []
    for t in ts:
        net = evaluate(rep, t)
        name = f"t_{t:.4f}.{args.format}"
        write_network(net, outdir / name, args.format)
        files.append(name)
    manifest = {"ts": ts, "files": files, "halfLength": rep.half_length,
                "size": rep.size}
    if args.mask_threshold is not None:
        mu = rep.pair.mu_hat
        manifest["lowWeightMask"] = (mu < args.mask_threshold * mu.max()) \
            .tolist()
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh)
        fh.write("\n")
    print(f"halfLength {rep.half_length:.9f} size {rep.size}")
    return 0


def _frechet_params(args) -> FrechetParams:
    return FrechetParams(max_iters=args.max_iters,
                         compress=args.compress,
                         loss_tol=args.loss_tol,
                         momentum=args.momentum,
                         gw=GwParams(restarts=args.restarts,
                                     rng_seed=args.seed))


def _cmd_mean(args) -> int:
    nets = [net for _, net in _load_inputs(args.inputs)]
    seed = read_network(args.seed_net) if args.seed_net else \
        (args.seed_size if args.seed_size else None)
    params = _frechet_params(args)
    result = frechet_mean(nets, params, seed=seed, seed_rng=args.seed)
    out = Path(args.out or "mean.json")
    write_network(result.network, out, args.format)
    trace_path = out.with_suffix(out.suffix + ".trace.csv")
    with open(trace_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "loss", "baseSize"])
        writer.writerows(result.trace)
    print(f"loss {result.loss:.9f} size {result.network.size} "
          f"converged {result.converged}")
    return 0 if result.converged else 2


def _cmd_compress(args) -> int:
    X = read_network(args.x)
    Y = read_network(args.y)
    params = FrechetParams(gw=GwParams(restarts=args.restarts,
                                       rng_seed=args.seed))
    net = compressed_average(X, Y, params)
    out = args.out or "compressed.json"
    write_network(net, out, args.format)
    print(f"wrote {out}")
    return 0


def _cmd_pca(args) -> int:
    named = _load_inputs(args.inputs)
    nets = [net for _, net in named]
    base = read_network(args.base) if args.base else nets[0]
    ds = vectorize_at_base(base, nets, GwParams(restarts=args.restarts,
                                                rng_seed=args.seed))
    result = tangent_pca(ds, args.components)
    payload = {
        "explainedVarianceRatios": result.explained_variance_ratios.tolist(),
        "mean": result.mean.tolist(),
        "components": result.components.tolist(),
        "baseSize": ds.base.size,
    }
    out = Path(args.out or "pca.json")
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")
    if args.grid:
        for ci in range(result.num_components):
            for s in _parse_floats(args.grid):
                net = project_along_component(result, ds.base, ci, s)
                name = out.with_name(f"{out.stem}_c{ci}_s{s:+.3f}."
                                     f"{args.format}")
                write_network(net, name, args.format)
    ratios = ", ".join(f"{r:.4f}"
                       for r in result.explained_variance_ratios[:5])
    print(f"ratios [{ratios}]")
    return 0


def _cmd_featurize(args) -> int:
    named = _load_inputs(args.inputs)
    nets = [net for _, net in named]
    base = read_network(args.base) if args.base else nets[0]
    ds = vectorize_at_base(base, nets, GwParams(restarts=args.restarts,
                                                rng_seed=args.seed))
    feats = featurize(ds)
    labels = {name: name for name, _ in named}
    if args.labels:
        with open(args.labels, "r", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if len(row) >= 2:
                    labels[row[0]] = row[1]
    out = args.out or "features.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"f{i}" for i in range(feats.shape[1])])
        for (name, _), row in zip(named, feats):
            writer.writerow([labels.get(name, name)]
                            + [repr(float(x)) for x in row])
    print(f"wrote {out} ({feats.shape[0]} rows, {feats.shape[1]} features)")
    return 0


def _sbm_spec(args) -> SbmSpec:
    if args.means_file:
        with open(args.means_file, "r", encoding="utf-8") as fh:
            means = np.array(json.load(fh), dtype=float)
    elif args.means:
        means = _parse_matrix(args.means)
    else:
        base = default_sbm_spec(args.seed)
        return SbmSpec(block_sizes=tuple(_parse_ints(args.block_sizes)),
                       means=base.means, variance=args.variance,
                       rng_seed=args.seed)
    return SbmSpec(block_sizes=tuple(_parse_ints(args.block_sizes)),
                   means=means, variance=args.variance, rng_seed=args.seed)


def _cmd_sbm_gen(args) -> int:
    net = generate_sbm(_sbm_spec(args))
    out = args.out or "sbm.json"
    write_network(net, out, args.format)
    print(f"wrote {out} ({net.size} nodes)")
    return 0


def _cmd_sbm_experiment(args) -> int:
    report = sbm_compression_experiment(_sbm_spec(args), n_runs=args.runs,
                                        bound=args.bound, rng_seed=args.seed)
    rows = [{"seed": r.seed, "maxDeviation": r.max_deviation,
             "passed": r.passed,
             "singleShotMaxDeviation": r.single_shot_max_deviation,
             "iterations": r.iterations, "converged": r.converged}
            for r in report.runs]
    if args.out:
        if args.format == "json":
            payload = {"target": report.target.tolist(), "runs": rows,
                       "passCount": report.pass_count, "bound": report.bound,
                       "recovered": [r.recovered.tolist()
                                     for r in report.runs]}
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=1)
                fh.write("\n")
        else:
            _write_rows(rows, args.out, "csv", list(rows[0].keys()))
    print(f"passCount {report.pass_count}/{len(report.runs)} "
          f"bound {report.bound}")
    return 0


def _cmd_support_sweep(args) -> int:
    rows = support_size_sweep(_parse_ints(args.sizes), args.trials,
                              rng_seed=args.seed)
    out = args.out or "support_sweep.csv"
    fmt = "csv" if args.format == "csv" or str(out).endswith(".csv") else "json"
    _write_rows(rows, out, fmt, ["n", "trial", "support_size", "ratio"])
    medians = {}
    for row in rows:
        medians.setdefault(row["n"], []).append(row["support_size"])
    line = " ".join(f"n={n}:median={int(np.median(v))}"
                    for n, v in sorted(medians.items()))
    print(line)
    return 0


def _cmd_asym_sweep(args) -> int:
    sizes = _parse_ints(args.sizes)
    if len(sizes) == 1:
        sizes = sizes * 2
    rows = asymmetry_sweep(args.mode, _parse_floats(args.alphas),
                           args.n_seeds, sizes=(sizes[0], sizes[1]),
                           rng_seed=args.seed)
    out = args.out or "asym_sweep.csv"
    fmt = "csv" if args.format == "csv" or str(out).endswith(".csv") else "json"
    _write_rows(rows, out, fmt, ["mode", "alpha", "seed", "final_loss",
                                 "final_size", "iterations", "converged"])
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for all randomness (default 0)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="serialization format for network outputs")
    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--restarts", type=int, default=0,
                        help="extra random starts for each solve")
    solver.add_argument("--max-iters", type=int, default=200,
                        help="outer iteration cap")

    parser = argparse.ArgumentParser(
        prog="gwnet",
        description="statistics on weighted networks under the "
                    "Gromov-Wasserstein distance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[common, solver],
                       help="distance between two networks")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("geodesic", parents=[common, solver],
                       help="sample the geodesic between two networks")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--ts", default="0,0.25,0.5,0.75,1",
                   help="comma separated parameters in [0,1]")
    p.add_argument("--mask-threshold", type=float, default=None,
                   help="flag nodes with measure below this fraction of "
                        "the largest")
    p.set_defaults(func=_cmd_geodesic)

    p = sub.add_parser("mean", parents=[common, solver],
                       help="iterative mean of a collection")
    p.add_argument("inputs", nargs="+",
                   help="network files or directories of them")
    p.add_argument("--seed-net", default=None, help="seed network file")
    p.add_argument("--seed-size", type=int, default=None,
                   help="random seed network of this size")
    p.add_argument("--compress", choices=("none", "to_seed_size"),
                   default="none")
    p.add_argument("--loss-tol", type=float, default=1e-8)
    p.add_argument("--momentum", type=float, default=0.0)
    p.set_defaults(func=_cmd_mean, max_iters=100)

    p = sub.add_parser("compress", parents=[common, solver],
                       help="compressed average of X and Y at X's size")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("pca", parents=[common, solver],
                       help="principal directions of a collection")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--base", default=None,
                   help="base network file (default: first input)")
    p.add_argument("--components", type=int, default=None)
    p.add_argument("--grid", default=None,
                   help="comma separated steps; also write networks along "
                        "each component")
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("featurize", parents=[common, solver],
                       help="export a weighted feature matrix")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--base", default=None)
    p.add_argument("--labels", default=None,
                   help="csv file mapping input stems to labels")
    p.set_defaults(func=_cmd_featurize)

    sbm = argparse.ArgumentParser(add_help=False)
    sbm.add_argument("--block-sizes", default="20,20,20,20,20")
    sbm.add_argument("--means", default=None,
                     help="inline matrix, rows split by ';'")
    sbm.add_argument("--means-file", default=None,
                     help="json file with the block means matrix")
    sbm.add_argument("--variance", type=float, default=5.0)

    p = sub.add_parser("sbm-gen", parents=[common, sbm],
                       help="draw a block model network")
    p.set_defaults(func=_cmd_sbm_gen)

    p = sub.add_parser("sbm-experiment", parents=[common, sbm],
                       help="block mean recovery by compressed averaging")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--bound", type=float, default=0.1)
    p.set_defaults(func=_cmd_sbm_experiment)

    p = sub.add_parser("support-sweep", parents=[common],
                       help="coupling support growth over network size")
    p.add_argument("--sizes", default="5,10,20,40")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=_cmd_support_sweep)

    p = sub.add_parser("asym-sweep", parents=[common],
                       help="mean iteration under growing asymmetry")
    p.add_argument("--mode", choices=("diagonal", "antisymmetric"),
                   default="diagonal")
    p.add_argument("--alphas", default="0,0.25,0.5,0.75,1")
    p.add_argument("--n-seeds", type=int, default=3)
    p.add_argument("--sizes", default="10,10")
    p.set_defaults(func=_cmd_asym_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GwnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
