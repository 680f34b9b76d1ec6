"""Built-in verification suites behind `socialprobe selftest`.

Gradient checks compare analytic gradients against central finite
differences of the forward pass only, so the oracle is independent of
the backward implementation. The metric oracle is a plain python loop.
"""

import math

import numpy as np

from . import ops
from .autodiff import Tensor, backward, no_tape
from .data import NormalizationParams, TrajectoryWindow
from .gating import BETA, GAMMA, ZETA, HardConcreteGate
from .harness.batching import make_batch
from .metrics import ade, fde
from .models import SOCIAL_KINDS, build_model
from .optim import Adam

GRAD_TOL = 1e-4
GRAD_FLOOR = 1e-7


def unit_normalizer():
    # identity box: model space == data space, handy for synthetic windows
    return NormalizationParams(min_xy=np.zeros(2), max_xy=np.ones(2))


def random_window(rng, n_neighbours=3, t_obs=8, t_pred=12):
    """A small random-walk window inside the unit box."""

    def walk(steps):
        pos = np.empty((steps, 2))
        pos[0] = rng.uniform(0.2, 0.8, 2)
        for k in range(1, steps):
            pos[k] = pos[k - 1] + rng.normal(0.0, 0.02, 2)
        return pos

    main = walk(t_obs + t_pred)
    vel = np.empty_like(main)
    vel[1:] = (main[1:] - main[:-1]) / 0.4
    vel[0] = vel[1]
    nb = np.zeros((n_neighbours, t_obs, 4))
    mask = np.zeros((n_neighbours, t_obs), dtype=bool)
    for j in range(n_neighbours):
        start = int(rng.integers(0, t_obs - 1))
        path = walk(t_obs - start)
        v = np.empty_like(path)
        v[1:] = (path[1:] - path[:-1]) / 0.4
        v[0] = v[1] if len(path) > 1 else 0.0
        nb[j, start:] = np.concatenate([path, v], axis=1)
        mask[j, start:] = True
    return TrajectoryWindow(
        scene="eth", ped_id=1, start_frame=0,
        obs=np.concatenate([main[:t_obs], vel[:t_obs]], axis=1),
        neighbours=nb, neighbour_mask=mask, future=main[t_obs:],
    )


def rel_error(analytic, numeric):
    scale = max(abs(analytic), abs(numeric))
    if scale < GRAD_FLOOR:
        return 0.0
    return abs(analytic - numeric) / scale


def central_diff(value_fn, array, idx, h):
    flat = array.reshape(-1)
    orig = flat[idx]
    flat[idx] = orig + h
    up = value_fn()
    flat[idx] = orig - h
    down = value_fn()
    flat[idx] = orig
    return (up - down) / (2.0 * h)


# a ReLU kink inside +-h corrupts the central difference at that one step
# size; a genuine backward bug stays wrong at every step size
FD_STEPS = (1e-5, 1e-6, 3e-7)


def fd_matches(value_fn, array, idx, analytic, tol=GRAD_TOL):
    best = float("inf")
    for h in FD_STEPS:
        best = min(best, rel_error(analytic, central_diff(value_fn, array, idx, h)))
        if best < tol:
            return True, best
    return False, best


def gradcheck_model(kind, seed=0, n_windows=2, n_components=12):
    """Max relative error between backward and finite differences."""
    rng = np.random.default_rng(seed)
    model = build_model(kind, rng)
    params = model.parameters()
    norm = unit_normalizer()
    worst = 0.0
    for _ in range(n_windows):
        batch = make_batch([random_window(rng, n_neighbours=int(rng.integers(0, 4)))], norm)
        target = Tensor(batch.targets)

        def loss_value():
            with no_tape():
                pred, _ = model.forward(batch)
                return ops.squared_error(pred, target).item()

        pred, _ = model.forward(batch)
        loss = ops.squared_error(pred, target)
        for p in params.values():
            p.grad = None
        backward(loss, params=params.values())

        for _ in range(n_components):
            name = list(params)[int(rng.integers(0, len(params)))]
            p = params[name]
            idx = int(rng.integers(0, p.data.size))
            analytic = p.grad.reshape(-1)[idx]
            _, err = fd_matches(loss_value, p.data, idx, analytic)
            worst = max(worst, err)
    return worst


def _check_model_gradients():
    worst = {}
    for kind in ("basic_mlp", "lstm_mlp", *SOCIAL_KINDS):
        worst[kind] = gradcheck_model(kind)
    bad = {k: v for k, v in worst.items() if v >= GRAD_TOL}
    detail = ", ".join(f"{k}={v:.2e}" for k, v in worst.items())
    return not bad, detail


def _check_attention_sums():
    rng = np.random.default_rng(1)
    norm = unit_normalizer()
    worst = 0.0
    for kind in SOCIAL_KINDS:
        model = build_model(kind, rng)
        windows = [random_window(rng, n_neighbours=int(rng.integers(1, 6))) for _ in range(8)]
        batch = make_batch(windows, norm)
        with no_tape():
            _, attn = model.forward(batch)
        sums = attn.sum(axis=1)
        worst = max(worst, float(np.abs(sums - 1.0).max()))
        if attn.min() < 0:
            return False, f"negative attention weight in {kind}"
    return worst < 1e-9, f"max |sum-1| = {worst:.2e}"


def _check_hard_concrete_mc():
    rng = np.random.default_rng(2)
    worst = 0.0
    for log_alpha in (-2.0, 0.0, 2.0):
        gate = HardConcreteGate("probe", log_alpha=log_alpha)
        u = rng.uniform(size=1_000_000)
        s = 1.0 / (1.0 + np.exp(-((np.log(u) - np.log1p(-u) + log_alpha) / BETA)))
        value = np.clip(s * (ZETA - GAMMA) + GAMMA, 0.0, 1.0)
        mc_zero = float((value == 0.0).mean())
        analytic_zero = 1.0 - gate.prob_nonzero()
        worst = max(worst, abs(mc_zero - analytic_zero))
    return worst < 0.005, f"max |MC - analytic| = {worst:.4f}"


def _check_penalty_bounds():
    from .gating import GateSet

    open_set = GateSet(HardConcreteGate("t", 50.0), HardConcreteGate("a", 50.0))
    closed_set = GateSet(HardConcreteGate("t", -50.0), HardConcreteGate("a", -50.0))
    top = open_set.penalty(0.005).item()
    bottom = closed_set.penalty(0.005).item()
    ok = top == 0.01 and bottom < 1e-12
    return ok, f"max penalty = {top}, closed penalty = {bottom:.2e}"


def _check_metric_oracle():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        p = rng.normal(size=(12, 2))
        t = rng.normal(size=(12, 2))
        loop_ade = sum(math.dist(a, b) for a, b in zip(p, t)) / 12.0
        loop_fde = math.dist(p[-1], t[-1])
        worst = max(worst, abs(ade(p, t) - loop_ade), abs(fde(p, t) - loop_fde))
    hand = abs(ade([[3, 0], [0, 4]], [[0, 0], [0, 0]]) - 3.5)
    return worst < 1e-12 and hand == 0.0, f"max |vectorized - loop| = {worst:.2e}"


def _check_adam_hand_step():
    p = Tensor(np.array([1.0]), requires_grad=True)
    p.grad = np.array([1.0])
    opt = Adam({"p": p}, lr=0.001)
    opt.step()
    expected = 1.0 - 0.001 * 1.0 / (1.0 + 1e-8)
    err = abs(float(p.data[0]) - expected)
    return err < 1e-12, f"theta after one step = {float(p.data[0]):.6f}"


def _check_normalizer_roundtrip():
    rng = np.random.default_rng(4)
    norm = NormalizationParams(min_xy=np.array([-3.0, 2.0]), max_xy=np.array([14.0, 9.5]))
    pts = rng.uniform(-50, 50, size=(1000, 2))
    err = float(np.abs(norm.invert_pos(norm.apply_pos(pts)) - pts).max())
    return err < 1e-12, f"max round-trip error = {err:.2e}"


CHECKS = (
    ("model-gradients-vs-finite-differences", _check_model_gradients),
    ("attention-weights-sum-to-one", _check_attention_sums),
    ("hard-concrete-monte-carlo", _check_hard_concrete_mc),
    ("l0-penalty-bounds", _check_penalty_bounds),
    ("metric-loop-oracle", _check_metric_oracle),
    ("adam-hand-step", _check_adam_hand_step),
    ("normalizer-round-trip", _check_normalizer_roundtrip),
)


def run_selftest(verbose=True):
    """Run every check; prints one line each, returns overall success."""
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
