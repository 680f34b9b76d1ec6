"""Min-max position scaling fitted on the training scenes only.

Positions map into [0, 1] per axis over the training data; velocities
scale by the same per-axis range (no offset) so that normalized
velocities stay consistent with normalized position differences.
Metrics are always computed in meters after inversion.
"""

from dataclasses import dataclass

import numpy as np


class NormalizationError(ValueError):
    pass


@dataclass
class NormalizationParams:
    min_xy: np.ndarray  # (2,)
    max_xy: np.ndarray  # (2,)

    def __post_init__(self):
        self.min_xy = np.asarray(self.min_xy, dtype=np.float64)
        self.max_xy = np.asarray(self.max_xy, dtype=np.float64)
        if not (self.max_xy > self.min_xy).all():
            raise NormalizationError(f"degenerate axis: min {self.min_xy}, max {self.max_xy}")

    @property
    def range_xy(self):
        return self.max_xy - self.min_xy

    def apply_pos(self, p):
        return (np.asarray(p, dtype=np.float64) - self.min_xy) / self.range_xy

    def invert_pos(self, p):
        return np.asarray(p, dtype=np.float64) * self.range_xy + self.min_xy

    def apply_vel(self, v):
        return np.asarray(v, dtype=np.float64) / self.range_xy

    def invert_vel(self, v):
        return np.asarray(v, dtype=np.float64) * self.range_xy


def fit_normalizer(scenes):
    """Per-axis min/max over all positions of the given scenes."""
    positions = [s.positions() for s in scenes]
    if not positions or not sum(len(p) for p in positions):
        raise NormalizationError("no positions to fit the normalizer on")
    allpos = np.concatenate(positions, axis=0)
    return NormalizationParams(min_xy=allpos.min(axis=0), max_xy=allpos.max(axis=0))
