"""Command-line interface.

    socialprobe run --model vain --protocol normal --scene all --seeds 0..4 \
        --data data --out out [--epochs N --lr 0.001 --batch 32 --lambda 0.005]
    socialprobe report --out out
    socialprobe selftest
    socialprobe synth --out data_synth --seed 0 --peds 120

`run` accepts a JSON config file (--config) mirroring the experiment
fields; explicit flags override file values. Exit code is 0 on success,
nonzero with a message on any error.
"""

import argparse
import json
import logging
import sys

from ..data import SCENE_NAMES
from ..models import MODEL_KINDS
from .benchmark import emit_plots, load_records, plan_matrix, run_benchmark, write_reports
from .config import PROTOCOLS, ConfigError, ExperimentConfig

log = logging.getLogger("socialprobe")


def parse_seeds(spec):
    """'0..4' -> [0,1,2,3,4]; '1,3' -> [1,3]; '2' -> [2]."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in spec.split(",") if s]


def _build_parser():
    parser = argparse.ArgumentParser(prog="socialprobe", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train and evaluate a (model, protocol) matrix")
    run.add_argument("--model", choices=MODEL_KINDS)
    run.add_argument("--protocol", choices=PROTOCOLS, default=None)
    run.add_argument("--scene", default=None, help="held-out scene name, or 'all'")
    run.add_argument("--seeds", default=None, help="e.g. 0..4 or 0,2,4")
    run.add_argument("--data", dest="data_dir", default=None)
    run.add_argument("--out", dest="out_dir", default=None)
    run.add_argument("--epochs", type=int, default=None)
    run.add_argument("--lr", type=float, default=None)
    run.add_argument("--batch", dest="batch_size", type=int, default=None)
    run.add_argument("--lambda", dest="l0_lambda", type=float, default=None)
    run.add_argument("--val-fraction", type=float, default=None)
    run.add_argument("--hidden", type=int, default=None)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--config", default=None, help="JSON file with ExperimentConfig fields")

    report = sub.add_parser("report", help="regenerate tables from stored runs")
    report.add_argument("--out", dest="out_dir", required=True)

    sub.add_parser("selftest", help="run gradient-check and metric-oracle suites")

    synth = sub.add_parser("synth", help="generate synthetic stand-in scene files")
    synth.add_argument("--out", dest="out_dir", required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--peds", type=int, default=120)
    return parser


def _cmd_run(args):
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    overrides = {
        "model": args.model, "protocol": args.protocol,
        "data_dir": args.data_dir, "out_dir": args.out_dir,
        "epochs": args.epochs, "lr": args.lr, "batch_size": args.batch_size,
        "l0_lambda": args.l0_lambda, "val_fraction": args.val_fraction,
        "hidden": args.hidden,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})

    scene = args.scene if args.scene else base.get("scene", "all")
    scenes = list(SCENE_NAMES) if scene == "all" else [scene]
    if args.seeds:
        seeds = parse_seeds(args.seeds)
    elif "seed" in base:
        seeds = [int(base["seed"])]
    else:
        seeds = [0]
    base.pop("scene", None)
    base.pop("seed", None)
    if "model" not in base:
        raise ConfigError("a model kind is required (--model or config file)")
    model = base.pop("model")
    protocol = base.pop("protocol", "normal")

    configs = plan_matrix([model], [protocol], scenes, seeds, **base)
    out_dir = configs[0].out_dir
    log.info("running %d configurations", len(configs))
    records, failures = run_benchmark(configs, jobs=args.jobs)
    if records:
        write_reports(records, out_dir)
        emit_plots(records, out_dir)
        for rec in records:
            print(f"{rec.run_name}: ADE {rec.test_ade:.3f} m, FDE {rec.test_fde:.3f} m")
    for name, error in failures:
        print(f"FAILED {name}: {error}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_report(args):
    records = load_records(args.out_dir)
    if not records:
        print(f"no stored runs under {args.out_dir}/runs", file=sys.stderr)
        return 1
    reports = write_reports(records, args.out_dir)
    combined, rows = emit_plots(records, args.out_dir)
    print(f"wrote {len(reports)} reports; {rows} gate-trace rows -> {combined}")
    return 0


def _cmd_selftest():
    from ..checks import run_selftest

    return 0 if run_selftest() else 1


def _cmd_synth(args):
    from ..data.synthetic import write_synthetic_dataset

    out = write_synthetic_dataset(args.out_dir, seed=args.seed, n_peds=args.peds)
    print(f"synthetic scenes written to {out} (stand-in data, not the recorded benchmark)")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "selftest":
            return _cmd_selftest()
        if args.command == "synth":
            return _cmd_synth(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
