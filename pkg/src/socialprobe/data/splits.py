"""Leave-one-scene-out split construction.

The held-out scene supplies every test window and never contributes to
training or validation; the normalizer is fitted on the four training
scenes only. Validation windows are sampled at random from the pooled
training-scene windows.
"""

from dataclasses import dataclass

import numpy as np

from .loading import SCENE_NAMES, DataError
from .normalize import fit_normalizer
from .windows import extract_windows


@dataclass
class SplitPlan:
    held_out: str
    train_scenes: tuple
    val_fraction: float


@dataclass
class SplitData:
    plan: SplitPlan
    train: list
    val: list
    test: list
    normalizer: object
    max_neighbours: int

    def audit(self):
        """Assert the held-out scene never leaks into train or val."""
        for window in (*self.train, *self.val):
            if window.scene == self.plan.held_out:
                raise AssertionError(f"held-out scene {self.plan.held_out} leaked into training data")


def make_splits(scenes, held_out, val_fraction, rng):
    """Build train/val/test window sets for one leave-one-scene-out fold."""
    if held_out not in scenes:
        raise DataError(f"unknown scene name {held_out!r}, expected one of {', '.join(SCENE_NAMES)}")
    if not 0.0 <= val_fraction < 1.0:
        raise ValueError(f"val_fraction must be in [0, 1), got {val_fraction}")
    train_names = tuple(sorted(n for n in scenes if n != held_out))
    plan = SplitPlan(held_out=held_out, train_scenes=train_names, val_fraction=val_fraction)

    pooled = []
    for name in train_names:
        pooled.extend(extract_windows(scenes[name]))
    test = extract_windows(scenes[held_out])

    order = rng.permutation(len(pooled))
    n_val = int(round(val_fraction * len(pooled)))
    val = [pooled[i] for i in order[:n_val]]
    train = [pooled[i] for i in order[n_val:]]

    normalizer = fit_normalizer([scenes[n] for n in train_names])
    max_neighbours = max((w.n_neighbours for w in train), default=0)
    data = SplitData(plan=plan, train=train, val=val, test=test,
                     normalizer=normalizer, max_neighbours=max_neighbours)
    data.audit()
    return data
