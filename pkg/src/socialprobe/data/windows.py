"""Observation/prediction windows with neighbour sets.

A window is 8 observed steps plus 12 future steps of one main pedestrian
(stride 1 over its track), together with the 8-step states of every
other pedestrian present at the last observation step. Steps where a
neighbour is absent are zero-padded with mask False.
"""

from dataclasses import dataclass

import numpy as np

T_OBS = 8
T_PRED = 12
T_TOTAL = T_OBS + T_PRED


@dataclass
class TrajectoryWindow:
    scene: str
    ped_id: int
    start_frame: int
    obs: np.ndarray             # (8, 4) [x, y, vx, vy], meters
    neighbours: np.ndarray      # (n, 8, 4)
    neighbour_mask: np.ndarray  # (n, 8) bool
    future: np.ndarray          # (12, 2) meters

    @property
    def n_neighbours(self):
        return self.neighbours.shape[0]

    def validate(self):
        """Raise AssertionError on any structural invariant violation."""
        assert self.obs.shape == (T_OBS, 4)
        assert self.future.shape == (T_PRED, 2)
        n = self.neighbours.shape[0]
        assert self.neighbours.shape == (n, T_OBS, 4)
        assert self.neighbour_mask.shape == (n, T_OBS)
        if n:
            assert self.neighbour_mask[:, -1].all(), "neighbour absent at last observation step"
            padded = ~self.neighbour_mask
            assert (self.neighbours[padded] == 0.0).all(), "padded steps must be exactly zero"


def extract_windows(scene, stride=1):
    """All valid windows of a scene, one per (pedestrian, start index)."""
    states = scene.states_by_frame()
    windows = []
    for track in scene.tracks:
        length = len(track)
        for s in range(0, length - T_TOTAL + 1, stride):
            frames = track.frames[s : s + T_OBS]
            last_frame = int(frames[-1])
            obs = np.concatenate([track.pos[s : s + T_OBS], track.vel[s : s + T_OBS]], axis=1)
            future = track.pos[s + T_OBS : s + T_TOTAL].copy()

            present = states.get(last_frame, {})
            others = sorted(p for p in present if p != track.ped)
            nb = np.zeros((len(others), T_OBS, 4))
            nb_mask = np.zeros((len(others), T_OBS), dtype=bool)
            for j, ped in enumerate(others):
                for k, f in enumerate(frames):
                    state = states.get(int(f), {}).get(ped)
                    if state is not None:
                        nb[j, k] = state
                        nb_mask[j, k] = True
            windows.append(TrajectoryWindow(
                scene=scene.name, ped_id=track.ped, start_frame=int(frames[0]),
                obs=np.ascontiguousarray(obs), neighbours=nb, neighbour_mask=nb_mask,
                future=future,
            ))
    return windows
