"""Model registry keyed by the config identifiers."""

from .baselines import BasicMlp, ConstantVelocity, LstmMlp
from .features import pair_features
from .generic import GenericModel
from .social import SOCIAL_WIDTH, GraphAttentionSocial, HandcraftedScoreSocial, VainSocial

MODEL_KINDS = ("cv", "basic_mlp", "lstm_mlp", "vain", "social_ways", "social_bigat")
SOCIAL_KINDS = ("vain", "social_ways", "social_bigat")
NAIVE_KINDS = ("cv", "basic_mlp", "lstm_mlp")


def build_model(kind, rng=None, hidden=32):
    """Instantiate a model by kind; learnable kinds consume `rng` for init."""
    if kind == "cv":
        return ConstantVelocity()
    if rng is None:
        raise ValueError(f"model kind {kind!r} needs an RNG for initialization")
    if kind == "basic_mlp":
        return BasicMlp(rng)
    if kind == "lstm_mlp":
        return LstmMlp(rng, hidden=hidden)
    if kind in SOCIAL_KINDS:
        return GenericModel(kind, rng, hidden=hidden)
    raise ValueError(f"unknown model kind {kind!r}, expected one of {MODEL_KINDS}")


def default_epochs(kind):
    if kind == "cv":
        return 0
    return 20 if kind in SOCIAL_KINDS else 10


__all__ = [
    "MODEL_KINDS", "SOCIAL_KINDS", "NAIVE_KINDS", "SOCIAL_WIDTH",
    "BasicMlp", "ConstantVelocity", "LstmMlp", "GenericModel",
    "GraphAttentionSocial", "HandcraftedScoreSocial", "VainSocial",
    "build_model", "default_epochs", "pair_features",
]
