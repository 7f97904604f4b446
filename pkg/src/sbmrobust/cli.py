"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .blockmodel import InvalidModelError, check, read_model, validate, write_model
from .config import RunConfig
from .entropy import DEFAULT_EPSILON, reduce
from .moo import SMSEMOA, Front, constrained_run
from .oracle import validation_report
from .percolation import ConvergenceError, RemovalSchedule, robustness_pair, s_curve, write_robustness_pair

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("sbmrobust")


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_model(path):
    try:
        model = read_model(path)
    except FileNotFoundError:
        raise DataError(f"model file not found: {path}") from None
    except InvalidModelError as exc:
        raise DataError(f"{path}: {exc}") from None
    errors = [v for v in validate(model) if v.severity == "error"]
    if errors:
        report = "\n".join(f"  {v}" for v in errors)
        raise DataError(f"{path}: invalid model\n{report}")
    return model


def _out_dir(args, default="."):
    out = Path(args.out if args.out is not None else default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_robustness(args):
    model = _load_model(args.model)
    out = _out_dir(args)
    curve = s_curve(model, args.schedule, args.grid)
    curve.to_csv(out / "s_curve.csv")
    write_robustness_pair(robustness_pair(model, args.grid), out / "robustness.csv")
    print(f"R={curve.robustness!r}")


# -- optimize -----------------------------------------------------------------


def _write_front(front: Front, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    models = directory / "models"
    models.mkdir(exist_ok=True)
    ids = []
    for i, ind in enumerate(front.members):
        if ind.model is None:
            ids.append("infeasible")
            continue
        mid = f"m{i:03d}"
        write_model(ind.model, models / f"{mid}.json")
        ids.append(mid)
    front.to_csv(directory / "front.csv", ids)


def _write_json(path: Path, data):
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data) + "\n")
    tmp.replace(path)


def _run_moo(config: RunConfig, run_dir: Path):
    ckpt = run_dir / "checkpoint.json"
    if ckpt.exists():
        try:
            state = json.loads(ckpt.read_text())
            opt = SMSEMOA.resume(state)
        except (json.JSONDecodeError, ValueError) as exc:
            raise DataError(f"cannot resume from {ckpt}: {exc}") from None
        if opt.config != config.optimizer:
            raise DataError(f"{ckpt} belongs to a different configuration")
        log.info("resuming at step %d", opt.step_count)
    else:
        opt = SMSEMOA(config.optimizer)

    def on_snapshot(o, snap):
        _write_front(snap.front, run_dir / f"gen{snap.step}")
        _write_json(ckpt, o.checkpoint())

    result = opt.run(on_snapshot=on_snapshot)
    _write_front(result.front, run_dir)
    return result


def _run_constrained(config: RunConfig, run_dir: Path):
    res = constrained_run(config.optimizer, config.target, config.tolerance, config.penalty)
    ind = res.individual
    with open(run_dir / "constrained.csv", "w") as fh:
        fh.write("found,target,R_targeted,R_random,fitness\n")
        fh.write(f"{int(res.found)},{res.target!r},{ind.objectives[0]!r},{ind.objectives[1]!r},{res.fitness!r}\n")
    if ind.model is not None:
        write_model(ind.model, run_dir / "constrained_model.json")
    if not res.found:
        print(f"no individual within tolerance of R_targeted={config.target}; best attempt written", file=sys.stderr)
    return res


def cmd_optimize(args):
    try:
        config = RunConfig.read(args.config)
    except FileNotFoundError:
        raise DataError(f"config file not found: {args.config}") from None
    except (ValueError, TypeError) as exc:
        raise DataError(f"{args.config}: {exc}") from None
    if args.seed is not None:
        config.optimizer.seed = args.seed
    if args.out is not None:
        config.out = args.out
    run_dir = Path(config.out) / str(config.optimizer.seed)
    run_dir.mkdir(parents=True, exist_ok=True)
    config.write(run_dir / "config.json")
    if config.mode == "constrained":
        res = _run_constrained(config, run_dir)
        print(f"R_targeted={res.individual.objectives[0]!r} R_random={res.individual.objectives[1]!r}")
    else:
        result = _run_moo(config, run_dir)
        print(f"hypervolume={result.front.hypervolume()!r} members={len(result.front.members)}")


# -- reduce / validate ----------------------------------------------------------


def cmd_reduce(args):
    model = _load_model(args.model)
    out = _out_dir(args)
    reduced, report = reduce(model, args.epsilon)
    write_model(reduced, out / "reduced_model.json")
    report.write(out / "reduction_report.json")
    print(f"B={report.original_B} -> {report.reduced_B}")


def cmd_validate(args):
    model = _load_model(args.model)
    out = _out_dir(args)
    rng = np.random.default_rng(args.seed)
    exact, mc = validation_report(
        model, args.schedule, args.nodes, args.grid, args.trials, rng, out / "validation.csv"
    )
    print(f"R_analytic={exact.robustness!r} R_mc={mc.robustness!r} stderr={mc.stderr!r}")


# -- front report ---------------------------------------------------------------


def front_tables(run_dir, epsilon=DEFAULT_EPSILON):
    """Structure of every front member, reduced and ordered by ``R_targeted``.

    Returns a mapping ``panel name -> (header, rows)``. Blocks are listed by
    descending mean degree; edge-matrix cells hold ``log10 e_rs``.
    """
    run_dir = Path(run_dir)
    front_csv = run_dir / "front.csv"
    if not front_csv.exists():
        raise DataError(f"missing run artifact: {front_csv}")
    rows = []
    for line in front_csv.read_text().splitlines()[1:]:
        rt, rr, mid = line.split(",")
        path = run_dir / "models" / f"{mid}.json"
        if mid == "infeasible":
            continue
        if not path.exists():
            raise DataError(f"missing run artifact: {path}")
        model, _ = reduce(check(read_model(path)), epsilon)
        order = np.argsort(-model.block_degrees, kind="stable")
        rows.append((float(rt), float(rr), model.n[order], model.block_degrees[order], model.e[np.ix_(order, order)]))
    rows.sort(key=lambda r: r[0])
    width = max((len(r[2]) for r in rows), default=0)

    def pad(values):
        return [repr(float(v)) for v in values] + [""] * (width - len(values))

    tables = {
        "tradeoff": (["R_targeted", "R_random", "B"], [[repr(r[0]), repr(r[1]), str(len(r[2]))] for r in rows]),
        "block_sizes": (["R_targeted"] + [f"n_{i}" for i in range(width)], [[repr(r[0])] + pad(r[2]) for r in rows]),
        "block_degrees": (["R_targeted"] + [f"kappa_{i}" for i in range(width)], [[repr(r[0])] + pad(r[3]) for r in rows]),
    }
    cells = [(i, j) for i in range(width) for j in range(width)]
    emat = []
    for r in rows:
        e = r[4]
        with np.errstate(divide="ignore"):
            vals = [repr(float(np.log10(e[i, j]))) if i < len(e) and j < len(e) and e[i, j] > 0 else "" for i, j in cells]
        emat.append([repr(r[0])] + vals)
    tables["edge_matrix"] = (["R_targeted"] + [f"log10_e_{i}{j}" for i, j in cells], emat)
    return tables


def cmd_front_report(args):
    run_dir = Path(args.run_dir)
    out = Path(args.out) if args.out is not None else run_dir / "report"
    tables = front_tables(run_dir, args.epsilon)
    out.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in tables.items():
        with open(out / f"{name}.csv", "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    print(f"wrote {len(tables)} tables for {len(tables['tradeoff'][1])} front members to {out}")


def build_parser():
    p = _Parser(prog="sbmrobust", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("robustness", help="robustness and S(q) curve of a model")
    s.add_argument("--model", required=True)
    s.add_argument("--schedule", choices=[x.value for x in RemovalSchedule], default="random")
    s.add_argument("--grid", type=int, default=201)
    s.add_argument("--out")
    s.set_defaults(func=cmd_robustness)

    s = sub.add_parser("optimize", help="run the front optimizer or a constrained run")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("reduce", help="drop and merge redundant blocks")
    s.add_argument("--model", required=True)
    s.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("validate", help="Monte-Carlo check against the analytic curve")
    s.add_argument("--model", required=True)
    s.add_argument("--schedule", choices=[x.value for x in RemovalSchedule], default="random")
    s.add_argument("--nodes", type=int, default=100_000)
    s.add_argument("--trials", type=int, default=5)
    s.add_argument("--grid", type=int, default=51)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("front-report", help="structure tables along a stored front")
    s.add_argument("run_dir")
    s.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    s.add_argument("--out")
    s.set_defaults(func=cmd_front_report)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
