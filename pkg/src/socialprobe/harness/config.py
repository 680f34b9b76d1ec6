"""Experiment configuration: one run = (model, protocol, held-out scene, seed)."""

import dataclasses
import json
from dataclasses import dataclass

from ..data import SCENE_NAMES
from ..models import MODEL_KINDS, SOCIAL_KINDS, default_epochs

PROTOCOLS = ("normal", "random", "gates")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    model: str
    protocol: str = "normal"
    scene: str = "zara2"          # held-out scene
    seed: int = 0
    epochs: int = None            # None -> kind default (social 20, naive 10, cv 0)
    lr: float = 0.001
    batch_size: int = 32
    l0_lambda: float = 0.005
    val_fraction: float = 0.2
    patience: int = 3             # plateau patience ending gates pre-training
    hidden: int = 32
    data_dir: str = "data"
    out_dir: str = "out"
    save_params: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.model!r}, expected one of {MODEL_KINDS}")
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}, expected one of {PROTOCOLS}")
        if self.scene not in SCENE_NAMES:
            raise ConfigError(f"unknown scene {self.scene!r}, expected one of {SCENE_NAMES}")
        if self.protocol in ("random", "gates") and self.model not in SOCIAL_KINDS:
            raise ConfigError(f"protocol {self.protocol!r} is only valid for social models, not {self.model!r}")
        if self.lr <= 0:
            raise ConfigError(f"learning rate must be positive, got {self.lr}")
        if self.batch_size < 1:
            raise ConfigError(f"batch size must be >= 1, got {self.batch_size}")
        if self.l0_lambda < 0:
            raise ConfigError(f"l0 penalty strength must be >= 0, got {self.l0_lambda}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ConfigError(f"val_fraction must be in [0, 1), got {self.val_fraction}")

    @property
    def resolved_epochs(self):
        if self.model == "cv":
            return 0
        return default_epochs(self.model) if self.epochs is None else int(self.epochs)

    @property
    def run_name(self):
        return f"{self.model}__{self.protocol}__{self.scene}__seed{self.seed}"

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, payload):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
        return cls(**payload)

    @classmethod
    def from_json(cls, path, **overrides):
        """Load a config file; keyword overrides (CLI flags) win."""
        with open(path) as fh:
            payload = json.load(fh)
        payload.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(payload)
