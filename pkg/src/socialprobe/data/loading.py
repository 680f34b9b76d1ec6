"""Scene file ingestion.

Input format: whitespace-separated rows `frame ped_id x y`, positions in
world meters, one file per scene at `<data_dir>/<scene>.txt` with scene
in {eth, hotel, univ, zara1, zara2}. Consecutive records of a pedestrian
are 0.4 s apart.
"""

import os
from dataclasses import dataclass

import numpy as np

SCENE_NAMES = ("eth", "hotel", "univ", "zara1", "zara2")
FRAME_DT = 0.4


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class RawRecord:
    frame: int
    ped: int
    x: float
    y: float


@dataclass
class Track:
    """One constant-frame-stride presence segment of one pedestrian."""

    ped: int
    frames: np.ndarray  # (L,) int64, strictly increasing, constant stride
    pos: np.ndarray     # (L, 2) meters
    vel: np.ndarray     # (L, 2) m/s; the first step copies the second

    def __len__(self):
        return len(self.frames)


@dataclass
class Scene:
    name: str
    tracks: list

    @property
    def n_pedestrians(self):
        return len({t.ped for t in self.tracks})

    @property
    def n_records(self):
        return sum(len(t) for t in self.tracks)

    def positions(self):
        """All recorded positions, stacked (N, 2)."""
        return np.concatenate([t.pos for t in self.tracks], axis=0)

    def states_by_frame(self):
        """frame -> {ped: (x, y, vx, vy)} lookup for neighbour assembly."""
        table = {}
        for t in self.tracks:
            for k, f in enumerate(t.frames):
                table.setdefault(int(f), {})[t.ped] = (
                    t.pos[k, 0], t.pos[k, 1], t.vel[k, 0], t.vel[k, 1],
                )
        return table


def _velocities(pos):
    vel = np.empty_like(pos)
    vel[1:] = (pos[1:] - pos[:-1]) / FRAME_DT
    vel[0] = vel[1]
    return vel


def _segments(ped, frames, pos):
    """Split a pedestrian's records into constant-stride tracks.

    Real benchmark files are gap-free; splitting keeps dirty inputs usable
    without fabricating velocities across a gap.
    """
    out = []
    n = len(frames)
    start = 0
    while start < n - 1:
        stride = frames[start + 1] - frames[start]
        end = start + 1
        while end + 1 < n and frames[end + 1] - frames[end] == stride:
            end += 1
        seg_pos = np.ascontiguousarray(pos[start : end + 1])
        out.append(Track(ped=ped, frames=frames[start : end + 1].copy(),
                         pos=seg_pos, vel=_velocities(seg_pos)))
        start = end + 1
    return out


def load_scene(path, name=None):
    """Parse one scene file into per-pedestrian, frame-sorted tracks.

    Pedestrians with fewer than two records are dropped (no velocity is
    computable). Malformed rows and duplicate (frame, ped) pairs raise
    DataError with the line number.
    """
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    if name not in SCENE_NAMES:
        raise DataError(f"unknown scene name {name!r}, expected one of {', '.join(SCENE_NAMES)}")

    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 fields `frame ped x y`, got {len(parts)}")
            try:
                frame_f, ped_f = float(parts[0]), float(parts[1])
                x, y = float(parts[2]), float(parts[3])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric field in {line.strip()!r}") from None
            if frame_f != int(frame_f) or ped_f != int(ped_f):
                raise DataError(f"{path}:{lineno}: frame and ped id must be integral")
            records.append(RawRecord(int(frame_f), int(ped_f), x, y))
    if not records:
        raise DataError(f"{path}: empty scene file")

    by_ped = {}
    for rec in records:
        by_ped.setdefault(rec.ped, []).append(rec)

    tracks = []
    for ped in sorted(by_ped):
        rows = sorted(by_ped[ped], key=lambda r: r.frame)
        frames = np.array([r.frame for r in rows], dtype=np.int64)
        if len(frames) >= 2 and (np.diff(frames) == 0).any():
            raise DataError(f"{path}: duplicate frame for pedestrian {ped}")
        if len(rows) < 2:
            continue
        pos = np.array([[r.x, r.y] for r in rows], dtype=np.float64)
        tracks.extend(_segments(ped, frames, pos))
    return Scene(name=name, tracks=tracks)


def load_scenes(data_dir, names=SCENE_NAMES):
    """Load `<data_dir>/<scene>.txt` for every requested scene."""
    missing = [n for n in names if not os.path.isfile(os.path.join(data_dir, f"{n}.txt"))]
    if missing:
        raise DataError(f"missing scene files in {data_dir}: " + ", ".join(f"{n}.txt" for n in missing))
    return {n: load_scene(os.path.join(data_dir, f"{n}.txt"), name=n) for n in names}
