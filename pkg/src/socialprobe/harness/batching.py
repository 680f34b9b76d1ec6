"""Assembly of window batches into model-ready arrays.

All model inputs are normalized; handcrafted pair features are computed
in meters before scaling (and from de-normalized positions for noise
neighbours). Padded neighbour entries stay exactly zero in model space.
"""

from dataclasses import dataclass

import numpy as np

from ..data import T_OBS, gen_random_neighbours, rotate_window
from ..models.features import pair_features


@dataclass
class Batch:
    obs: np.ndarray        # (B, 8, 4) normalized
    last_pos: np.ndarray   # (B, 2) normalized
    targets: np.ndarray    # (B, 12, 2) normalized
    nb: np.ndarray         # (B, N, 8, 4) normalized, padded entries zero
    nb_step_mask: np.ndarray  # (B, N, 8) bool
    nb_valid: np.ndarray   # (B, N) bool, True for real neighbour slots
    features: np.ndarray   # (B, N, 3) meters-space pair features

    @property
    def size(self):
        return self.obs.shape[0]


def _stack_neighbours(windows):
    n_max = max((w.n_neighbours for w in windows), default=0)
    bsz = len(windows)
    nb = np.zeros((bsz, n_max, T_OBS, 4))
    mask = np.zeros((bsz, n_max, T_OBS), dtype=bool)
    for i, w in enumerate(windows):
        k = w.n_neighbours
        if k:
            nb[i, :k] = w.neighbours
            mask[i, :k] = w.neighbour_mask
    return nb, mask


def _random_neighbours(bsz, max_agents, rng):
    sets = [gen_random_neighbours(max_agents, rng) for _ in range(bsz)]
    n_max = max((s[0].shape[0] for s in sets), default=0)
    nb = np.zeros((bsz, n_max, T_OBS, 4))
    mask = np.zeros((bsz, n_max, T_OBS), dtype=bool)
    for i, (steps, m) in enumerate(sets):
        k = steps.shape[0]
        if k:
            nb[i, :k] = steps
            mask[i, :k] = m
    return nb, mask


def make_batch(windows, normalizer, aug_rng=None, noise=None):
    """Build one batch.

    aug_rng: when given, each window is rotated by a fresh uniform angle
    about its main pedestrian's last observed position.
    noise: (max_agents, rng) for the random protocol; real neighbours are
    discarded and replaced by uniform-noise sets in normalized space.
    """
    if aug_rng is not None:
        angles = aug_rng.uniform(0.0, 2.0 * np.pi, size=len(windows))
        windows = [rotate_window(w, a) for w, a in zip(windows, angles)]

    obs_m = np.stack([w.obs for w in windows])
    fut_m = np.stack([w.future for w in windows])

    obs = np.concatenate(
        [normalizer.apply_pos(obs_m[..., :2]), normalizer.apply_vel(obs_m[..., 2:])], axis=-1
    )
    targets = normalizer.apply_pos(fut_m)

    if noise is None:
        nb_m, step_mask = _stack_neighbours(windows)
        nb = np.zeros_like(nb_m)
        if nb_m.size:
            nb[..., :2][step_mask] = normalizer.apply_pos(nb_m[..., :2][step_mask])
            nb[..., 2:][step_mask] = normalizer.apply_vel(nb_m[..., 2:][step_mask])
        nb_last_m = nb_m[:, :, -1, :]
    else:
        max_agents, rng = noise
        nb, step_mask = _random_neighbours(len(windows), max_agents, rng)
        # noise lives in normalized space; features still want meters
        nb_last_m = np.concatenate(
            [normalizer.invert_pos(nb[:, :, -1, :2]), normalizer.invert_vel(nb[:, :, -1, 2:])],
            axis=-1,
        )

    nb_valid = step_mask[:, :, -1] if step_mask.size else np.zeros(step_mask.shape[:2], dtype=bool)
    features = pair_features(obs_m[:, None, -1, :], nb_last_m)
    features[~nb_valid] = 0.0

    return Batch(
        obs=obs, last_pos=np.ascontiguousarray(obs[:, -1, :2]), targets=targets,
        nb=nb, nb_step_mask=step_mask, nb_valid=nb_valid, features=features,
    )
