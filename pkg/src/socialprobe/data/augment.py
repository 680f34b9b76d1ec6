"""Rotation augmentation.

Windows rotate rigidly about the main pedestrian's last observed
position, which keeps the anchor of displacement decoding fixed.
Padded neighbour entries stay exactly (0, 0).
"""

import numpy as np

from .windows import TrajectoryWindow


def rotate_window(window, angle, center=None):
    """Rotate every valid position and velocity of the window by `angle`."""
    if center is None:
        center = window.obs[-1, :2]
    center = np.asarray(center, dtype=np.float64)
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])

    def rot_pos(p):
        return (p - center) @ rot.T + center

    def rot_vel(v):
        return v @ rot.T

    obs = np.concatenate([rot_pos(window.obs[:, :2]), rot_vel(window.obs[:, 2:])], axis=1)
    future = rot_pos(window.future)
    nb = window.neighbours.copy()
    if nb.size:
        valid = window.neighbour_mask
        nb[..., :2][valid] = rot_pos(window.neighbours[..., :2][valid])
        nb[..., 2:][valid] = rot_vel(window.neighbours[..., 2:][valid])
    return TrajectoryWindow(
        scene=window.scene, ped_id=window.ped_id, start_frame=window.start_frame,
        obs=obs, neighbours=nb, neighbour_mask=window.neighbour_mask.copy(), future=future,
    )
