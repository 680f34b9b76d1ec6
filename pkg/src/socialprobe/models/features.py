"""Handcrafted pair features for score-based attention.

For a (main, neighbour) pair at the last observed step, in meters:
  - euclidean distance between the two positions;
  - bearing angle in [0, pi] between the main's velocity and the offset
    to the neighbour (0 when the main is stationary);
  - distance of closest approach (dca) under constant velocities,
    minimizing over future time t >= 0; with no relative motion the dca
    is the current distance.
"""

import numpy as np


def pair_features(main_state, nb_states):
    """main_state (..., 4) broadcast against nb_states (..., 4) -> (..., 3)."""
    main_state = np.asarray(main_state, dtype=np.float64)
    nb_states = np.asarray(nb_states, dtype=np.float64)
    dp = nb_states[..., :2] - main_state[..., :2]
    dist = np.linalg.norm(dp, axis=-1)

    mv = np.broadcast_to(main_state[..., 2:], dp.shape)
    denom = np.linalg.norm(mv, axis=-1) * dist
    cosang = np.divide((mv * dp).sum(axis=-1), denom, out=np.zeros_like(dist), where=denom > 0)
    bearing = np.where(denom > 0, np.arccos(np.clip(cosang, -1.0, 1.0)), 0.0)

    dv = nb_states[..., 2:] - main_state[..., 2:]
    n2 = (dv * dv).sum(axis=-1)
    tstar = np.maximum(0.0, -np.divide((dp * dv).sum(axis=-1), n2, out=np.zeros_like(dist), where=n2 > 0))
    dca = np.linalg.norm(dp + tstar[..., None] * dv, axis=-1)
    dca = np.where(n2 > 0, dca, dist)
    return np.stack([dist, bearing, dca], axis=-1)
