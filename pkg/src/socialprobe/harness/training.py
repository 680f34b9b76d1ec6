"""Training loop, run protocols, and run persistence.

A run minimizes the batch-mean squared position error over training
windows. Under the `random` protocol every training batch's neighbours
are replaced by fresh uniform noise; under `gates` the model pre-trains
with frozen open gates, then fine-tunes with unfrozen gates and the L0
penalty for as many epochs as pre-training took.
"""

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .. import ops
from ..autodiff import NonFiniteValues, Tensor, backward, no_tape
from ..data import DataError, load_scenes, make_splits
from ..gating import GateSet
from ..metrics import ade_fde_batch
from ..models import build_model
from ..optim import Adam, save_checkpoint
from ..seeding import spawn_streams
from .batching import make_batch


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class RunRecord:
    """Everything needed to inspect or replay one run."""

    config: dict
    train_losses: list = field(default_factory=list)
    val_losses: list = field(default_factory=list)
    test_ade: float = None
    test_fde: float = None
    pretrain_epochs: int = 0
    gate_trace: list = field(default_factory=list)  # rows [epoch, gate_tau, gate_a]
    pre_ade: float = None
    pre_fde: float = None
    duration_s: float = 0.0
    warnings: list = field(default_factory=list)

    @property
    def run_name(self):
        c = self.config
        return f"{c['model']}__{c['protocol']}__{c['scene']}__seed{c['seed']}"

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls(**json.load(fh))


class Trainer:
    """Epoch loops for one model on one leave-one-scene-out split."""

    def __init__(self, model, split, config, streams):
        self.model = model
        self.split = split
        self.config = config
        self.streams = streams
        self.optimizer = Adam(model.parameters(), lr=config.lr)
        self._noise = (split.max_neighbours, streams["noise"]) if config.protocol == "random" else None
        self._val_batches = None

    def _train_groups(self):
        order = self.streams["shuffle"].permutation(len(self.split.train))
        bs = self.config.batch_size
        for start in range(0, len(order), bs):
            yield [self.split.train[i] for i in order[start : start + bs]]

    def train_epoch(self, gates=None, use_penalty=False):
        """One pass over the training windows; returns the mean objective."""
        total, count = 0.0, 0
        for group in self._train_groups():
            batch = make_batch(group, self.split.normalizer,
                               aug_rng=self.streams["augment"], noise=self._noise)
            try:
                pred, _ = self.model.forward(batch, gates=gates, gate_mode="train",
                                             gate_rng=self.streams["gates"])
                loss = ops.squared_error(pred, Tensor(batch.targets))
                if use_penalty:
                    loss = ops.add(loss, ops.reshape(gates.penalty(self.config.l0_lambda), ()))
                self.optimizer.zero_grads()
                backward(loss, params=self.optimizer.params.values())
                self.optimizer.step()
            except NonFiniteValues as exc:
                raise TrainingDiverged(f"loss diverged on batch of {len(group)} windows: {exc}") from exc
            total += loss.item() * len(group)
            count += len(group)
        return total / max(count, 1)

    def val_loss(self, gates=None):
        """Mean squared-error on the validation windows (no augmentation)."""
        if self._val_batches is None:
            bs = self.config.batch_size
            self._val_batches = [
                make_batch(self.split.val[s : s + bs], self.split.normalizer)
                for s in range(0, len(self.split.val), bs)
            ]
        if not self._val_batches:
            return float("nan")
        total, count = 0.0, 0
        with no_tape():
            for batch in self._val_batches:
                pred, _ = self.model.forward(batch, gates=gates, gate_mode="eval")
                loss = ops.squared_error(pred, Tensor(batch.targets))
                total += loss.item() * batch.size
                count += batch.size
        return total / count


def evaluate(model, windows, normalizer, gates=None, batch_size=256):
    """Mean test ADE/FDE in meters over the given windows."""
    if not windows:
        raise DataError("no windows to evaluate on")
    if model.kind == "cv":
        pred_m = model.predict_windows(windows)
    else:
        chunks = []
        with no_tape():
            for s in range(0, len(windows), batch_size):
                batch = make_batch(windows[s : s + batch_size], normalizer)
                pred, _ = model.forward(batch, gates=gates, gate_mode="eval")
                chunks.append(normalizer.invert_pos(pred.data))
        pred_m = np.concatenate(chunks, axis=0)
    truth = np.stack([w.future for w in windows])
    ade_w, fde_w = ade_fde_batch(pred_m, truth)
    return float(ade_w.mean()), float(fde_w.mean())


def fine_tune_protocol(trainer, gates, epochs, record=None):
    """Unfreeze the gates, add the L0 penalty, and continue training.

    The gate parameters join the same Adam instance as the model weights.
    Returns the trace of per-epoch deterministic gate values as rows
    [epoch, gate_tau, gate_a].
    """
    gates.freeze(False)
    trainer.optimizer.register(gates.parameters())
    trace = []
    for epoch in range(1, epochs + 1):
        train_loss = trainer.train_epoch(gates=gates, use_penalty=True)
        val = trainer.val_loss(gates=gates)
        tau, social = gates.trace_row()
        trace.append([epoch, tau, social])
        if record is not None:
            record.train_losses.append(train_loss)
            record.val_losses.append(val)
    return trace


def train(model, config, split, streams, record=None):
    """Run the configured protocol on a prepared split.

    Returns (gates_or_None, record). `cv` takes zero training steps.
    """
    if record is None:
        record = RunRecord(config=config.to_dict())
    if config.model == "cv":
        return None, record
    if not split.train:
        raise DataError("empty training set")

    trainer = Trainer(model, split, config, streams)
    epochs = config.resolved_epochs

    if config.protocol in ("normal", "random"):
        for _ in range(epochs):
            record.train_losses.append(trainer.train_epoch())
            record.val_losses.append(trainer.val_loss())
        return None, record

    # gates protocol: converge with frozen open gates, then fine-tune
    gates = GateSet()
    best, stall, ran, converged = float("inf"), 0, 0, False
    for epoch in range(1, epochs + 1):
        train_loss = trainer.train_epoch(gates=gates)
        val = trainer.val_loss(gates=gates)
        record.train_losses.append(train_loss)
        record.val_losses.append(val)
        ran = epoch
        monitored = train_loss if np.isnan(val) else val
        if monitored < best - 1e-9:
            best, stall = monitored, 0
        else:
            stall += 1
            if stall >= config.patience:
                converged = True
                break
    if not converged:
        record.warnings.append(
            f"pre-training budget ({epochs} epochs) exhausted before a validation plateau"
        )
    record.pretrain_epochs = ran
    record.pre_ade, record.pre_fde = evaluate(model, split.test, split.normalizer, gates=gates)
    record.gate_trace = fine_tune_protocol(trainer, gates, ran, record=record)
    return gates, record


def write_gate_trace(trace, path):
    """Per-run CSV with columns epoch, gate_tau, gate_a."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "gate_tau", "gate_a"])
        writer.writerows(trace)


def execute_run(config):
    """Load data, train per protocol, evaluate, persist run artifacts."""
    started = time.perf_counter()
    streams = spawn_streams(config.seed)
    scenes = load_scenes(config.data_dir)
    split = make_splits(scenes, config.scene, config.val_fraction, streams["split"])
    split.audit()
    model = build_model(config.model, streams["params"], hidden=config.hidden)

    record = RunRecord(config=config.to_dict())
    gates, record = train(model, config, split, streams, record=record)
    record.test_ade, record.test_fde = evaluate(model, split.test, split.normalizer, gates=gates)
    record.duration_s = time.perf_counter() - started

    runs_dir = os.path.join(config.out_dir, "runs")
    os.makedirs(runs_dir, exist_ok=True)
    record.to_json(os.path.join(runs_dir, f"{record.run_name}.json"))
    if record.gate_trace:
        traces_dir = os.path.join(config.out_dir, "traces")
        os.makedirs(traces_dir, exist_ok=True)
        write_gate_trace(record.gate_trace, os.path.join(traces_dir, f"{record.run_name}.csv"))
    if config.save_params and model.parameters():
        ckpt_dir = os.path.join(config.out_dir, "checkpoints")
        os.makedirs(ckpt_dir, exist_ok=True)
        params = dict(model.parameters())
        if gates is not None:
            params.update(gates.parameters())
        save_checkpoint(params, os.path.join(ckpt_dir, f"{record.run_name}.json"))
    return record
