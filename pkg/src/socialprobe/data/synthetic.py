"""Synthetic stand-in scenes for smoke tests and demos.

Generates crossing-pedestrian scenes in the benchmark file format
(`frame ped x y`, 0.4 s steps). This is NOT the real benchmark data; the
paper-anchored acceptance numbers only make sense on the real recorded
scenes, which the user supplies separately.
"""

import os

import numpy as np

from .loading import FRAME_DT, SCENE_NAMES

# per-scene walkable extents (meters), loosely varied so scenes differ
_SCENE_BOUNDS = {
    "eth": (14.0, 12.0),
    "hotel": (10.0, 8.0),
    "univ": (16.0, 14.0),
    "zara1": (15.0, 11.0),
    "zara2": (15.0, 11.0),
}


def _entry_exit(rng, width, height):
    # opposite-ish edges so paths cross the scene
    side = rng.integers(0, 4)
    t0, t1 = rng.uniform(0.1, 0.9, size=2)
    edges = [
        (np.array([t0 * width, 0.0]), np.array([t1 * width, height])),
        (np.array([t0 * width, height]), np.array([t1 * width, 0.0])),
        (np.array([0.0, t0 * height]), np.array([width, t1 * height])),
        (np.array([width, t0 * height]), np.array([0.0, t1 * height])),
    ]
    return edges[side]


def synth_scene_rows(name, rng, n_peds=120, frame_stride=10):
    """Rows (frame, ped, x, y) of one synthetic scene."""
    width, height = _SCENE_BOUNDS[name]
    rows = []
    frame = 0
    for ped in range(1, n_peds + 1):
        # arrivals overlap so windows have neighbours
        frame += int(rng.integers(0, 4)) * frame_stride
        start, goal = _entry_exit(rng, width, height)
        speed = float(np.clip(rng.normal(1.34, 0.25), 0.6, 2.2))
        direction = goal - start
        distance = np.linalg.norm(direction)
        direction /= distance
        n_steps = int(distance / (speed * FRAME_DT))
        wobble = rng.normal(0.0, 0.03, size=(n_steps, 2))
        pos = start.copy()
        heading = direction.copy()
        for k in range(n_steps):
            rows.append((frame + k * frame_stride, ped, round(pos[0], 2), round(pos[1], 2)))
            heading = 0.9 * heading + 0.1 * direction
            heading /= np.linalg.norm(heading)
            pos = pos + heading * speed * FRAME_DT + wobble[k]
    return rows


def write_synthetic_dataset(out_dir, seed=0, n_peds=120):
    """Write all five synthetic scene files into `out_dir`."""
    os.makedirs(out_dir, exist_ok=True)
    root = np.random.SeedSequence(seed)
    for name, child in zip(SCENE_NAMES, root.spawn(len(SCENE_NAMES))):
        rng = np.random.Generator(np.random.Philox(child))
        rows = synth_scene_rows(name, rng, n_peds=n_peds)
        path = os.path.join(out_dir, f"{name}.txt")
        with open(path, "w") as fh:
            for frame, ped, x, y in rows:
                fh.write(f"{frame} {ped} {x} {y}\n")
    return out_dir
