"""Command-line entry point.

Subcommands: ``qcl``, ``ukm`` and ``kernel`` run one classifier family
under the cross-validation plan and emit one JSON record per line;
``cv`` runs several families back to back; ``vcr`` reads a UMAT target
and synthesizes a circuit.  Machine-readable records always precede the
optional human-readable table (``--table``).

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.  Records omit wall-clock timings unless ``--timing`` is given,
so identical flags (and seeds) produce byte-identical output files.
Datasets needing 8 qubits (more than 128 features) are long-running and
are refused without ``--extended``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .ansatz import AnsatzKind, AnsatzSpec
from .bench import kernel_algo, qcl_algo, ukm_algo
from .encode import encode_dataset, qubits_for
from .errors import ConfigError, DataError, NumericalError, VqckitError
from .harness import CvPlan, Dataset, ExperimentResult, kfold_split, load_csv, run_experiment
from .kernel import FeatureMap
from .ukm import UkmCfg, ukm_fit
from .umat import load_umat, save_umat
from .vcr import VcrProblem, gate_lines, l_delta_search, vcr_synthesize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

EXTENDED_FEATURE_LIMIT = 128  # beyond this the encoder needs 8 qubits


def _parse_seeds(raw: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(s) for s in raw.split(",") if s.strip() != "")
    except ValueError:
        raise ConfigError(f"bad seed list {raw!r}") from None
    if not seeds:
        raise ConfigError("need at least one seed")
    return seeds


def _add_run_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--dataset", required=True, help="dataset CSV path")
    sp.add_argument("--folds", type=int, default=5)
    sp.add_argument("--seeds", default="0,1,2,3,4", help="comma-separated shuffle seeds")
    sp.add_argument("--seed", type=int, default=None, help="single seed (overrides --seeds)")
    sp.add_argument("--loss", default="se", choices=["se", "hinge", "xe"])
    sp.add_argument("--bias", action="store_true", help="estimate the bias term")
    sp.add_argument("--out", default="-", help="records file ('-' = stdout)")
    sp.add_argument("--table", action="store_true", help="print an aggregate table")
    sp.add_argument("--timing", action="store_true", help="include wall times in records")
    sp.add_argument("--extended", action="store_true", help="allow 8-qubit datasets")


def _plan(args) -> CvPlan:
    seeds = (args.seed,) if args.seed is not None else _parse_seeds(args.seeds)
    if args.folds < 2:
        raise ConfigError(f"--folds must be >= 2, got {args.folds}")
    return CvPlan(folds=args.folds, seeds=seeds)


def _load_gated(args) -> Dataset:
    dataset = load_csv(args.dataset)
    if dataset.x.shape[1] > EXTENDED_FEATURE_LIMIT and not args.extended:
        raise ConfigError(
            f"{dataset.name} has {dataset.x.shape[1]} features (8 qubits); "
            "pass --extended to accept hours-scale runs"
        )
    return dataset


def _emit(args, results: list[ExperimentResult]) -> None:
    lines = []
    for result in results:
        for rec in result.records:
            row = dataclasses.asdict(rec)
            if not args.timing:
                row.pop("wall_time")
            lines.append(json.dumps(row))
    text = "".join(line + "\n" for line in lines)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if args.table:
        print("algo      variant  train/test")
        for result in results:
            for (algo, variant), (train, test) in result.aggregates.items():
                print(f"{algo:<9} {variant:<8} {train:.4f}/{test:.4f}")


def cmd_qcl(args) -> int:
    if args.layers < 1:
        raise ConfigError(f"--layers must be >= 1, got {args.layers}")
    if args.iters < 0:
        raise ConfigError(f"--iters must be >= 0, got {args.iters}")
    dataset = _load_gated(args)
    algo = qcl_algo(
        kind=args.ansatz,
        layers=args.layers,
        loss=args.loss,
        iters=args.iters,
        eta=args.eta,
        batch=args.batch,
        use_bias=args.bias,
    )
    _emit(args, [run_experiment(algo, dataset, _plan(args))])
    return EXIT_OK


def cmd_ukm(args) -> int:
    if args.soc_iters < 1 or args.cg_iters < 1:
        raise ConfigError("--soc-iters and --cg-iters must be >= 1")
    if args.r <= 0:
        raise ConfigError(f"--r must be positive, got {args.r}")
    dataset = _load_gated(args)
    algo = ukm_algo(
        mode=args.mode,
        use_bias=args.bias,
        r=args.r,
        outer_iters=args.soc_iters,
        cg_iters=args.cg_iters,
        loss=args.loss,
    )
    plan = _plan(args)
    _emit(args, [run_experiment(algo, dataset, plan)])
    if args.export_umat:
        _export_ukm_unitary(args, dataset, plan)
    return EXIT_OK


def _export_ukm_unitary(args, dataset: Dataset, plan: CvPlan) -> None:
    if args.export_variant not in ("P", "OUX"):
        raise ConfigError(f"--export-variant must be P or OUX, got {args.export_variant!r}")
    seed = args.export_seed if args.export_seed is not None else plan.seeds[0]
    splits = kfold_split(len(dataset.y), plan.folds, seed)
    if not 0 <= args.export_fold < len(splits):
        raise ConfigError(f"--export-fold out of range [0, {len(splits)})")
    train_idx, _ = splits[args.export_fold]
    cfg = UkmCfg(
        mode=args.mode,
        use_bias=args.bias,
        r=args.r,
        outer_iters=args.soc_iters,
        cg_iters=args.cg_iters,
        seed=seed,
    )
    train = dataset.subset(train_idx)
    fit = ukm_fit(encode_dataset(train.x, train.y), cfg, loss=args.loss)
    save_umat(args.export_umat, fit.models[args.export_variant].operator)


def cmd_kernel(args) -> int:
    if args.lam <= 0:
        raise ConfigError(f"--lambda must be positive, got {args.lam}")
    dataset = _load_gated(args)
    fm = FeatureMap(kind=args.feature, normalize=args.normalize, include_bias=args.bias)
    _emit(args, [run_experiment(kernel_algo(fm, args.lam), dataset, _plan(args))])
    return EXIT_OK


def cmd_cv(args) -> int:
    dataset = _load_gated(args)
    plan = _plan(args)
    algos = []
    for name in args.algos.split(","):
        name = name.strip()
        if name == "qcl":
            algos.append(qcl_algo(kind=args.ansatz, layers=args.layers, loss=args.loss,
                                  iters=args.iters, use_bias=args.bias))
        elif name == "ukm":
            algos.append(ukm_algo(mode=args.mode, use_bias=args.bias, r=args.r,
                                  outer_iters=args.soc_iters, cg_iters=args.cg_iters,
                                  loss=args.loss))
        elif name == "kernel":
            fm = FeatureMap(kind=args.feature, normalize=args.normalize, include_bias=args.bias)
            algos.append(kernel_algo(fm, args.lam))
        else:
            raise ConfigError(f"unknown algorithm {name!r} in --algos")
    _emit(args, [run_experiment(algo, dataset, plan) for algo in algos])
    return EXIT_OK


def cmd_vcr(args) -> int:
    target = load_umat(args.target)
    problem = VcrProblem(
        target=target,
        kind=AnsatzKind(args.ansatz),
        p=args.p,
        restarts=args.restarts,
        seed=args.seed if args.seed is not None else 0,
        bfgs_iters=args.bfgs_iters,
    )
    lines = []
    if args.layer_grid:
        grid = sorted({int(s) for s in args.layer_grid.split(",")})
        if any(l < 1 for l in grid):
            raise ConfigError("--layer-grid entries must be >= 1")
        search = l_delta_search(problem, args.delta, grid)
        for layers, cost in search.evaluated:
            lines.append(json.dumps({"algo": "vcr", "target": args.target,
                                     "layers": layers, "p": args.p, "cost": cost}))
        lines.append(json.dumps({"algo": "vcr", "target": args.target, "delta": args.delta,
                                 "l_delta": search.l_delta, "best_layers": search.best.layers,
                                 "best_cost": search.best.cost}))
        result = search.best
    else:
        if args.layers is None or args.layers < 1:
            raise ConfigError("--layers must be >= 1 (or use --layer-grid)")
        result = vcr_synthesize(problem, args.layers)
        lines.append(json.dumps({"algo": "vcr", "target": args.target, "layers": result.layers,
                                 "p": args.p, "cost": result.cost,
                                 "lambda": result.lam, "converged": result.converged,
                                 "trace": result.trace}))
    text = "".join(line + "\n" for line in lines)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if args.gates:
        spec = problem.spec(result.layers)
        with open(args.gates, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(line + "\n" for line in gate_lines(spec, result.theta, result.lam)))
    if not result.converged:
        raise NumericalError("all synthesis restarts diverged")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqckit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("qcl", help="train layered circuits by SGD under the CV plan")
    _add_run_flags(sp)
    sp.add_argument("--ansatz", default="cnot", choices=[k.value for k in AnsatzKind])
    sp.add_argument("--layers", type=int, default=5)
    sp.add_argument("--iters", type=int, default=300)
    sp.add_argument("--eta", type=float, default=0.1)
    sp.add_argument("--batch", type=int, default=None)
    sp.set_defaults(fn=cmd_qcl)

    sp = sub.add_parser("ukm", help="optimize the evolution operator directly")
    _add_run_flags(sp)
    sp.add_argument("--mode", default="complex", choices=["real", "complex"])
    sp.add_argument("--r", type=float, default=0.010)
    sp.add_argument("--soc-iters", type=int, default=30)
    sp.add_argument("--cg-iters", type=int, default=10)
    sp.add_argument("--export-umat", default=None, help="write a learned unitary to this UMAT file")
    sp.add_argument("--export-variant", default="P")
    sp.add_argument("--export-fold", type=int, default=0)
    sp.add_argument("--export-seed", type=int, default=None)
    sp.set_defaults(fn=cmd_ukm)

    sp = sub.add_parser("kernel", help="kernel ridge classification baseline")
    _add_run_flags(sp)
    sp.add_argument("--feature", default="linear", choices=["linear", "poly2"])
    sp.add_argument("--lambda", dest="lam", type=float, default=0.1)
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(fn=cmd_kernel)

    sp = sub.add_parser("cv", help="run several families on one dataset")
    _add_run_flags(sp)
    sp.add_argument("--algos", default="kernel,qcl,ukm")
    sp.add_argument("--ansatz", default="cnot", choices=[k.value for k in AnsatzKind])
    sp.add_argument("--layers", type=int, default=5)
    sp.add_argument("--iters", type=int, default=300)
    sp.add_argument("--mode", default="complex", choices=["real", "complex"])
    sp.add_argument("--r", type=float, default=0.010)
    sp.add_argument("--soc-iters", type=int, default=30)
    sp.add_argument("--cg-iters", type=int, default=10)
    sp.add_argument("--feature", default="linear", choices=["linear", "poly2"])
    sp.add_argument("--lambda", dest="lam", type=float, default=0.1)
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(fn=cmd_cv)

    sp = sub.add_parser("vcr", help="fit a layered circuit to a UMAT target unitary")
    sp.add_argument("--target", required=True, help="target unitary (UMAT file)")
    sp.add_argument("--layers", type=int, default=None)
    sp.add_argument("--layer-grid", default=None, help="comma list; search smallest feasible")
    sp.add_argument("--delta", type=float, default=1e-3, help="error threshold for --layer-grid")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--ansatz", default="cnot", choices=[k.value for k in AnsatzKind])
    sp.add_argument("--bfgs-iters", type=int, default=500)
    sp.add_argument("--gates", default=None, help="write the gate list to this file")
    sp.add_argument("--out", default="-", help="records file ('-' = stdout)")
    sp.set_defaults(fn=cmd_vcr)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VqckitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
