"""Run-matrix orchestration: scenes x seeds per (model, protocol).

Runs are independent and execute in a process pool; each run owns its
RNG streams and output files. Aggregation is a single reduce over the
completed runs, tolerating partial failures with a warning.
"""

import csv
import dataclasses
import glob
import logging
import os
from concurrent.futures import ProcessPoolExecutor

from ..metrics import aggregate, write_table_csv
from .config import ExperimentConfig
from .training import RunRecord, execute_run, write_gate_trace

log = logging.getLogger(__name__)


def plan_matrix(models, protocols, scenes, seeds, **base):
    """One ExperimentConfig per (model, protocol, scene, seed) cell."""
    configs = []
    for model in models:
        for protocol in protocols:
            for scene in scenes:
                for seed in seeds:
                    configs.append(ExperimentConfig(
                        model=model, protocol=protocol, scene=scene, seed=int(seed), **base
                    ))
    return configs


def _run_task(payload):
    name = "{model}__{protocol}__{scene}__seed{seed}".format(**payload)
    try:
        record = execute_run(ExperimentConfig.from_dict(payload))
        return {"ok": True, "record": dataclasses.asdict(record)}
    except Exception as exc:  # a failed run must not sink the matrix
        return {"ok": False, "name": name, "error": f"{type(exc).__name__}: {exc}"}


def run_benchmark(configs, jobs=1):
    """Execute all configs; returns (records, failures)."""
    payloads = [c.to_dict() for c in configs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, payloads))
    else:
        results = [_run_task(p) for p in payloads]
    records, failures = [], []
    for res in results:
        if res["ok"]:
            records.append(RunRecord(**res["record"]))
        else:
            failures.append((res["name"], res["error"]))
            log.warning("run %s failed: %s", res["name"], res["error"])
    return records, failures


def load_records(out_dir):
    paths = sorted(glob.glob(os.path.join(out_dir, "runs", "*.json")))
    return [RunRecord.from_json(p) for p in paths]


def write_reports(records, out_dir):
    """Aggregate per (model, protocol) and emit report JSON + table CSVs."""
    groups = {}
    for rec in records:
        c = rec.config
        groups.setdefault((c["model"], c["protocol"]), []).append(rec)

    reports_dir = os.path.join(out_dir, "reports")
    tables_dir = os.path.join(out_dir, "tables")
    os.makedirs(reports_dir, exist_ok=True)
    os.makedirs(tables_dir, exist_ok=True)

    reports = []
    by_protocol = {}
    for (model, protocol), recs in sorted(groups.items()):
        scenes = tuple(sorted({r.config["scene"] for r in recs}))
        runs = [
            {"scene": r.config["scene"], "seed": r.config["seed"],
             "ade": r.test_ade, "fde": r.test_fde}
            for r in recs
        ]
        report = aggregate(runs, model=model, protocol=protocol, scenes=scenes)
        report.to_json(os.path.join(reports_dir, f"{model}__{protocol}.json"))
        reports.append(report)
        by_protocol.setdefault(protocol, []).append(report)

    for protocol, group in by_protocol.items():
        scenes = max((tuple(r.scenes) for r in group), key=len)
        usable = [r for r in group if tuple(r.scenes) == scenes]
        write_table_csv(usable, os.path.join(tables_dir, f"table_{protocol}.csv"), scenes=scenes)
    return reports


def emit_plots(records, out_dir):
    """Write per-run gate-trace CSVs plus one combined long-format CSV."""
    traces_dir = os.path.join(out_dir, "traces")
    os.makedirs(traces_dir, exist_ok=True)
    combined = os.path.join(traces_dir, "combined_gates.csv")
    n_rows = 0
    with open(combined, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "scene", "seed", "epoch", "gate_tau", "gate_a"])
        for rec in records:
            if not rec.gate_trace:
                continue
            write_gate_trace(rec.gate_trace, os.path.join(traces_dir, f"{rec.run_name}.csv"))
            c = rec.config
            for epoch, tau, social in rec.gate_trace:
                writer.writerow([c["model"], c["scene"], c["seed"], epoch, tau, social])
                n_rows += 1
    return combined, n_rows
