from .augment import rotate_window
from .loading import FRAME_DT, SCENE_NAMES, DataError, RawRecord, Scene, Track, load_scene, load_scenes
from .noise import gen_random_neighbours
from .normalize import NormalizationError, NormalizationParams, fit_normalizer
from .splits import SplitData, SplitPlan, make_splits
from .windows import T_OBS, T_PRED, T_TOTAL, TrajectoryWindow, extract_windows

__all__ = [
    "FRAME_DT", "SCENE_NAMES", "DataError", "RawRecord", "Scene", "Track",
    "load_scene", "load_scenes", "rotate_window", "gen_random_neighbours",
    "NormalizationError", "NormalizationParams", "fit_normalizer",
    "SplitData", "SplitPlan", "make_splits",
    "T_OBS", "T_PRED", "T_TOTAL", "TrajectoryWindow", "extract_windows",
]
