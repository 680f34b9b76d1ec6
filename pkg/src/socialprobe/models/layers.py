"""Parameterized building blocks: linear layers, MLPs, LSTM encoder.

Weight matrices initialize uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)];
biases start at zero. Every block exposes `parameters()` as an ordered
name -> Tensor map, so construction order fixes both RNG consumption and
checkpoint layout.
"""

import numpy as np

from .. import ops
from ..autodiff import Tensor


def init_weight(rng, fan_in, shape):
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Linear:
    def __init__(self, rng, n_in, n_out, name):
        self.name = name
        self.w = Tensor(init_weight(rng, n_in, (n_in, n_out)), requires_grad=True)
        self.b = Tensor(np.zeros(n_out), requires_grad=True)

    def __call__(self, x):
        return ops.add(ops.matmul(x, self.w), self.b)

    def parameters(self):
        return {f"{self.name}.w": self.w, f"{self.name}.b": self.b}


class Mlp:
    """Stack of linear layers with ReLU between (none after the last)."""

    def __init__(self, rng, sizes, name):
        self.layers = [
            Linear(rng, sizes[k], sizes[k + 1], f"{name}.{k}") for k in range(len(sizes) - 1)
        ]

    def __call__(self, x):
        out = x
        for k, layer in enumerate(self.layers):
            out = layer(out)
            if k < len(self.layers) - 1:
                out = ops.relu(out)
        return out

    def parameters(self):
        out = {}
        for layer in self.layers:
            out.update(layer.parameters())
        return out


class LstmEncoder:
    """Shared-weight sequence encoder; returns the final hidden state."""

    def __init__(self, rng, n_in, hidden, name):
        self.name = name
        self.hidden = hidden
        self.wx = Tensor(init_weight(rng, n_in, (n_in, 4 * hidden)), requires_grad=True)
        self.wh = Tensor(init_weight(rng, hidden, (hidden, 4 * hidden)), requires_grad=True)
        self.b = Tensor(np.zeros(4 * hidden), requires_grad=True)

    def encode(self, steps):
        """steps: ndarray (rows, t, features) -> Tensor (rows, hidden)."""
        rows = steps.shape[0]
        h = None
        c = Tensor(np.zeros((rows, self.hidden)))
        for t in range(steps.shape[1]):
            x = Tensor(steps[:, t, :])
            pre = ops.matmul(x, self.wx)
            if h is not None:
                pre = ops.add(pre, ops.matmul(h, self.wh))
            pre = ops.add(pre, self.b)
            h, c = ops.lstm_cell(pre, c)
        return h

    def parameters(self):
        return {f"{self.name}.wx": self.wx, f"{self.name}.wh": self.wh, f"{self.name}.b": self.b}


class DisplacementDecoder:
    """MLP emitting 12 displacement steps accumulated from the last position."""

    def __init__(self, rng, n_in, name, hidden=(64, 64), horizon=12):
        self.horizon = horizon
        self.mlp = Mlp(rng, (n_in, *hidden, 2 * horizon), name)

    def decode(self, features, last_pos):
        batch = last_pos.shape[0]
        raw = self.mlp(features)
        disp = ops.reshape(raw, (batch, self.horizon, 2))
        path = ops.cumsum(disp, axis=1)
        anchor = Tensor(last_pos.reshape(batch, 1, 2))
        return ops.add(path, anchor)

    def parameters(self):
        return self.mlp.parameters()
