"""Displacement-error metrics and cross-scene benchmark aggregation.

ADE is the mean L2 distance between predicted and true positions over
the prediction horizon; FDE is the L2 distance at the final step only.
Both are computed in meters on de-normalized positions.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

SCENE_NAMES = ("eth", "hotel", "univ", "zara1", "zara2")


class MetricsError(ValueError):
    pass


def _check_pair(predicted, truth):
    p = np.asarray(predicted, dtype=np.float64)
    t = np.asarray(truth, dtype=np.float64)
    if p.shape != t.shape:
        raise MetricsError(f"prediction shape {p.shape} != truth shape {t.shape}")
    if p.ndim < 2 or p.shape[-1] != 2 or p.shape[-2] == 0:
        raise MetricsError(f"expected a non-empty (..., steps, 2) array, got {p.shape}")
    return p, t


def ade(predicted, truth):
    """Average displacement error in meters over the whole horizon."""
    p, t = _check_pair(predicted, truth)
    return float(np.linalg.norm(p - t, axis=-1).mean())


def fde(predicted, truth):
    """Final displacement error in meters (last step only)."""
    p, t = _check_pair(predicted, truth)
    return float(np.linalg.norm(p[..., -1, :] - t[..., -1, :], axis=-1).mean())


def ade_fde_batch(predicted, truth):
    """Per-window ADE and FDE for stacked (W, steps, 2) arrays."""
    p, t = _check_pair(predicted, truth)
    d = np.linalg.norm(p - t, axis=-1)
    return d.mean(axis=-1), d[..., -1]


@dataclass
class MetricsReport:
    """Per-scene and averaged ADE/FDE, mean and std over repeat seeds."""

    model: str
    protocol: str
    seeds: list = field(default_factory=list)
    scenes: list = field(default_factory=list)
    per_scene: dict = field(default_factory=dict)  # scene -> {ade_mean, ade_std, fde_mean, fde_std}
    average: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def cell(self, scene, metric):
        """Table cell string 'mean +/- std' for scene row or 'AVG'."""
        stats = self.average if scene == "AVG" else self.per_scene[scene]
        return f"{stats[f'{metric}_mean']:.2f} +/- {stats[f'{metric}_std']:.2f}"

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.__dict__, fh, indent=2)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls(**json.load(fh))


def _mean_std(values):
    arr = np.asarray(values, dtype=np.float64)
    # population (N) convention over repeats
    return float(arr.mean()), float(arr.std())


def aggregate(runs, model, protocol, scenes=SCENE_NAMES):
    """Fold per-(scene, seed) metric values into a MetricsReport.

    `runs` is an iterable of dicts with keys scene, seed, ade, fde. Every
    scene in `scenes` must be present; the AVG row is the per-seed mean
    over scenes, then averaged over seeds.
    """
    by_scene = {}
    for run in runs:
        by_scene.setdefault(run["scene"], {})[run["seed"]] = (run["ade"], run["fde"])
    missing = [s for s in scenes if not by_scene.get(s)]
    if missing:
        raise MetricsError(f"no runs for scenes: {', '.join(missing)}")

    report = MetricsReport(model=model, protocol=protocol, scenes=list(scenes))
    all_seeds = sorted({seed for cells in by_scene.values() for seed in cells})
    report.seeds = all_seeds
    for scene in scenes:
        cells = by_scene[scene]
        ade_m, ade_s = _mean_std([v[0] for v in cells.values()])
        fde_m, fde_s = _mean_std([v[1] for v in cells.values()])
        report.per_scene[scene] = {
            "ade_mean": ade_m, "ade_std": ade_s, "fde_mean": fde_m, "fde_std": fde_s,
        }

    common = [s for s in all_seeds if all(s in by_scene[scene] for scene in scenes)]
    if common:
        ade_means = [np.mean([by_scene[sc][s][0] for sc in scenes]) for s in common]
        fde_means = [np.mean([by_scene[sc][s][1] for sc in scenes]) for s in common]
        ade_m, ade_s = _mean_std(ade_means)
        fde_m, fde_s = _mean_std(fde_means)
    else:
        # partial failures left no seed covering all scenes; degrade gracefully
        ade_m = float(np.mean([report.per_scene[s]["ade_mean"] for s in scenes]))
        fde_m = float(np.mean([report.per_scene[s]["fde_mean"] for s in scenes]))
        ade_s = fde_s = math.nan
        report.warnings.append("no seed completed all scenes; AVG std undefined")
    report.average = {"ade_mean": ade_m, "ade_std": ade_s, "fde_mean": fde_m, "fde_std": fde_s}
    return report


def write_table_csv(reports, path, scenes=SCENE_NAMES):
    """Table-1-shaped CSV: scene rows + AVG, one column pair per report."""
    reports = list(reports)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        labels = [f"{r.model}({r.protocol})" for r in reports]
        writer.writerow(["metric", "scene", *labels])
        for metric in ("ade", "fde"):
            for scene in (*scenes, "AVG"):
                writer.writerow([metric.upper(), scene, *(r.cell(scene, metric) for r in reports)])
