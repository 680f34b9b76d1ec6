"""Baselines that ignore social information."""

import numpy as np

from .. import ops
from ..autodiff import Tensor
from .layers import DisplacementDecoder, LstmEncoder

HORIZON = 12


class ConstantVelocity:
    """Extrapolate the last observed velocity; parameter-free."""

    kind = "cv"
    is_social = False

    def parameters(self):
        return {}

    @staticmethod
    def predict(obs_positions, horizon=HORIZON):
        """obs_positions (..., >=2, 2) -> (..., horizon, 2), same units as input."""
        p = np.asarray(obs_positions, dtype=np.float64)
        v = p[..., -1, :] - p[..., -2, :]
        steps = np.arange(1, horizon + 1).reshape((horizon, 1))
        return p[..., -1:, :] + steps * v[..., None, :]

    def predict_windows(self, windows):
        obs = np.stack([w.obs[:, :2] for w in windows])
        return self.predict(obs)


class BasicMlp:
    """MLP on the last observed position and speed only."""

    kind = "basic_mlp"
    is_social = False

    def __init__(self, rng, name="basic_mlp"):
        self.decoder = DisplacementDecoder(rng, 4, f"{name}.decoder")

    def forward(self, batch, gates=None, gate_mode="eval", gate_rng=None):
        assert gates is None, "gating applies to social models only"
        last = Tensor(np.ascontiguousarray(batch.obs[:, -1, :]))
        return self.decoder.decode(last, batch.last_pos), None

    def parameters(self):
        return self.decoder.parameters()


class LstmMlp:
    """MLP decoder on LSTM-encoded motion history; no social module."""

    kind = "lstm_mlp"
    is_social = False

    def __init__(self, rng, hidden=32, name="lstm_mlp"):
        self.encoder = LstmEncoder(rng, 4, hidden, f"{name}.encoder")
        self.decoder = DisplacementDecoder(rng, hidden, f"{name}.decoder")

    def forward(self, batch, gates=None, gate_mode="eval", gate_rng=None):
        assert gates is None, "gating applies to social models only"
        feat = self.encoder.encode(batch.obs)
        return self.decoder.decode(feat, batch.last_pos), None

    def parameters(self):
        return {**self.encoder.parameters(), **self.decoder.parameters()}
