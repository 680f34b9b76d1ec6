"""Random-noise neighbours for the `random` training protocol.

A replacement neighbour set has r ~ Uniform{0..max_agents} members, each
an 8-step sequence of positions drawn uniformly from the normalized
[0, 1]^2 box, with velocities derived from those positions. All steps
are marked valid. `max_agents` is the largest neighbour count observed
in the training windows.
"""

import numpy as np

from .loading import FRAME_DT
from .windows import T_OBS


def gen_random_neighbours(max_agents, rng, t_obs=T_OBS):
    """One random neighbour set: (steps (r, t_obs, 4), mask (r, t_obs))."""
    if max_agents < 0:
        raise ValueError(f"max_agents must be >= 0, got {max_agents}")
    r = int(rng.integers(0, max_agents + 1))
    pos = rng.uniform(0.0, 1.0, size=(r, t_obs, 2))
    vel = np.empty_like(pos)
    vel[:, 1:] = (pos[:, 1:] - pos[:, :-1]) / FRAME_DT
    vel[:, 0] = vel[:, 1] if t_obs > 1 else 0.0
    steps = np.concatenate([pos, vel], axis=2)
    mask = np.ones((r, t_obs), dtype=bool)
    return steps, mask
