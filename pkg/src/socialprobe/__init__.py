"""socialprobe: does the social-attention module actually matter?

A small experimentation framework for pedestrian trajectory prediction:
a from-scratch reverse-mode autodiff core, the generic encoder /
soft-attention / decoder architecture with three attention variants and
three naive baselines, random-noise and Hard-Concrete L0-gating probes,
and an ADE/FDE benchmark harness over the five-scene leave-one-out
protocol.
"""

from . import kernels
from .autodiff import NonFiniteValues, ShapeMismatch, Tensor, backward, no_tape

__version__ = "0.1.0"

__all__ = ["Tensor", "backward", "no_tape", "kernels", "NonFiniteValues", "ShapeMismatch", "__version__"]
