"""Hard-Concrete binary gates and the stochastic L0 penalty.

Each gate is a learnable scalar distribution over [0, 1]: a logistic
noise sample is squashed, stretched over (gamma, zeta) and hard-clamped,
which leaves point masses at exactly 0 and 1 while staying reparametrizable.
Training multiplies module outputs by a fresh sample per batch; evaluation
uses the deterministic (noise-free) value. The differentiable L0 penalty
is the summed probability of each gate being non-zero.
"""

import math

import numpy as np

from . import ops
from .autodiff import Tensor

GAMMA = -0.1
ZETA = 1.1
BETA = 0.5
# log-alpha at which the deterministic gate value clamps to exactly 1 / 0
LOG_ALPHA_OPEN = 2.5
LOG_ALPHA_CLOSED = -2.5
# prob_nonzero(a) = sigmoid(a - beta * log(-gamma / zeta))
_PNZ_OFFSET = -BETA * math.log(-GAMMA / ZETA)


class GateError(RuntimeError):
    pass


def _sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x)) if x >= 0 else math.exp(x) / (1.0 + math.exp(x))


class HardConcreteGate:
    """One learnable stochastic binary gate.

    `log_alpha` is the learned location parameter; `beta` is the fixed
    temperature. While frozen the gate evaluates deterministically and
    log-alpha receives no gradient.
    """

    def __init__(self, name, log_alpha=LOG_ALPHA_OPEN, beta=BETA, frozen=True):
        self.name = name
        self.log_alpha = Tensor(np.array([float(log_alpha)]), requires_grad=True)
        self.beta = beta
        self.frozen = frozen

    def sample(self, rng):
        """Draw a clamped stretched-concrete sample as a tracked tensor.

        Differentiable w.r.t. log_alpha through the reparametrization;
        u exactly 0 or 1 is resampled.
        """
        if self.frozen:
            raise GateError(f"gate {self.name!r} is frozen; use deterministic_value")
        u = 0.0
        while not 0.0 < u < 1.0:
            u = float(rng.uniform())
        noise = math.log(u) - math.log1p(-u)
        pre = ops.mul(ops.add(self.log_alpha, noise), 1.0 / self.beta)
        stretched = ops.add(ops.mul(ops.sigmoid(pre), ZETA - GAMMA), GAMMA)
        return ops.hardclamp(stretched, 0.0, 1.0)

    def deterministic_value(self):
        """Noise-free gate value in [0, 1] used at evaluation time."""
        s = _sigmoid(float(self.log_alpha.data[0]))
        return float(min(1.0, max(0.0, s * (ZETA - GAMMA) + GAMMA)))

    def prob_nonzero(self):
        """P(gate != 0); strictly increasing in log_alpha."""
        return _sigmoid(float(self.log_alpha.data[0]) + _PNZ_OFFSET)

    def prob_nonzero_tensor(self):
        return ops.sigmoid(ops.add(self.log_alpha, _PNZ_OFFSET))


class GateSet:
    """The two gates of the probe: trajectory-module and social-module."""

    def __init__(self, traj=None, social=None):
        self.traj = traj or HardConcreteGate("traj")
        self.social = social or HardConcreteGate("social")

    @property
    def frozen(self):
        return self.traj.frozen and self.social.frozen

    def freeze(self, frozen=True):
        self.traj.frozen = frozen
        self.social.frozen = frozen

    def parameters(self):
        return {
            "gates.traj.log_alpha": self.traj.log_alpha,
            "gates.social.log_alpha": self.social.log_alpha,
        }

    def penalty(self, lam):
        """lam * sum of per-gate non-zero probabilities, in [0, 2*lam]."""
        total = ops.add(self.traj.prob_nonzero_tensor(), self.social.prob_nonzero_tensor())
        return ops.mul(total, float(lam))

    def _value(self, gate, mode, rng):
        if mode == "train" and not gate.frozen:
            if rng is None:
                raise GateError("sampling a gate requires an RNG")
            return gate.sample(rng)
        return Tensor(np.array([gate.deterministic_value()]))

    def apply(self, traj_feat, context, mode, rng=None):
        """Multiply the two module outputs by their gate values.

        `train` mode samples one fresh value per gate (one sample per
        batch); `eval` mode uses the deterministic values.
        """
        if mode not in ("train", "eval"):
            raise ValueError(f"gate mode must be train or eval, got {mode!r}")
        g_traj = self._value(self.traj, mode, rng)
        g_social = self._value(self.social, mode, rng)
        return ops.mul(traj_feat, g_traj), ops.mul(context, g_social)

    def trace_row(self):
        """(deterministic traj value, deterministic social value)."""
        return self.traj.deterministic_value(), self.social.deterministic_value()
