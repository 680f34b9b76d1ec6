"""Adam optimizer and exact-round-trip parameter checkpoints."""

import json

import numpy as np

from . import kernels
from .autodiff import ShapeMismatch, Tensor


class Adam:
    """Adam with bias correction over a named parameter dict.

    One shared step counter; moment accumulators match parameter shapes.
    Parameters may be registered after construction (gates unfrozen for
    fine-tuning join the same optimizer); their moments start at zero.
    """

    def __init__(self, params, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
        if lr <= 0:
            raise ValueError(f"learning rate must be positive, got {lr}")
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._params = {}
        self._moments = {}
        self.register(params)

    @property
    def params(self):
        return self._params

    def register(self, params):
        for name, p in params.items():
            if name in self._params:
                continue
            self._params[name] = p
            self._moments[name] = (np.zeros_like(p.data), np.zeros_like(p.data))

    def zero_grads(self):
        for p in self._params.values():
            p.grad = None

    def step(self):
        """Apply one update from the gradients stored on the parameters."""
        self.t += 1
        for name, p in self._params.items():
            g = p.grad
            if g is None:
                g = np.zeros_like(p.data)
            elif g.shape != p.data.shape:
                raise ShapeMismatch(f"adam: gradient {g.shape} vs parameter {p.data.shape} for {name!r}")
            m, v = self._moments[name]
            kernels.adam_step(p.data, g, m, v, self.t, self.lr, self.beta1, self.beta2, self.eps)


def save_checkpoint(params, path):
    """Write parameters as JSON name -> {shape, values}; round-trips exactly.

    Python's repr-based float serialization preserves every float64 bit
    pattern, so load(save(p)) == p holds exactly.
    """
    payload = {
        name: {"shape": list(p.data.shape), "values": p.data.reshape(-1).tolist()}
        for name, p in params.items()
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_checkpoint(path):
    """Read a checkpoint back into a dict of name -> ndarray."""
    with open(path) as fh:
        payload = json.load(fh)
    out = {}
    for name, entry in payload.items():
        out[name] = np.array(entry["values"], dtype=np.float64).reshape(entry["shape"])
    return out


def restore_params(params, path):
    """Load checkpoint values into existing parameter tensors, by name."""
    values = load_checkpoint(path)
    for name, p in params.items():
        if name not in values:
            raise KeyError(f"checkpoint missing parameter {name!r}")
        if tuple(values[name].shape) != p.data.shape:
            raise ShapeMismatch(f"checkpoint {name!r}: {values[name].shape} vs {p.data.shape}")
        p.data[...] = values[name]
