"""Deterministic, splittable RNG streams.

Every run derives a fixed set of named Philox (counter-based) streams
from its seed, so consuming randomness in one concern (e.g. noise
neighbours) never perturbs another (e.g. shuffling). This is what makes
`normal` and `random` protocol runs comparable batch-for-batch.
"""

import numpy as np

STREAM_NAMES = ("params", "split", "shuffle", "augment", "noise", "gates")


def spawn_streams(seed):
    """Named independent generators, reproducible from the integer seed."""
    children = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
    return {
        name: np.random.Generator(np.random.Philox(child))
        for name, child in zip(STREAM_NAMES, children)
    }
