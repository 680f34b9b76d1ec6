"""Numeric kernels for the training hot path, with a switchable backend.

Two interchangeable backends exist: ``pure`` (numpy) and ``native``
(Cython, built at install time when a toolchain is present). The active
one is picked at import: the SOCIALPROBE_KERNELS environment variable
(``auto``/``pure``/``native``) wins, otherwise ``native`` is preferred
when importable. ``benchmarks/bench_kernels.py`` compares the two.

All kernels take and return C-contiguous float64 arrays. Elementwise
kernels accept any shape; the structured ones (softmax, lstm_cell) are
row-oriented 2-D.
"""

import contextlib
import logging
import os

import numpy as np

from . import pure as _pure

log = logging.getLogger(__name__)

_IMPLS = {"pure": _pure}
try:
    from . import _native

    _IMPLS["native"] = _native
except ImportError:
    log.info("compiled kernels unavailable, using pure-numpy backend")

_impl = None


def available_backends():
    return tuple(sorted(_IMPLS))


def backend_name():
    return _impl.name


def set_backend(name):
    """Select the kernel backend; name is 'auto', 'pure' or 'native'."""
    global _impl
    if name == "auto":
        name = "native" if "native" in _IMPLS else "pure"
    if name not in _IMPLS:
        raise ValueError(f"kernel backend {name!r} not available (have {available_backends()})")
    _impl = _IMPLS[name]


@contextlib.contextmanager
def use_backend(name):
    prev = _impl.name
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


set_backend(os.environ.get("SOCIALPROBE_KERNELS", "auto"))


def _flat(x):
    return np.ascontiguousarray(x).reshape(-1)


def sigmoid(x):
    return _impl.ew_sigmoid(_flat(x)).reshape(x.shape)


def sigmoid_grad(y, gy):
    return _impl.ew_sigmoid_grad(_flat(y), _flat(gy)).reshape(y.shape)


def tanh(x):
    return _impl.ew_tanh(_flat(x)).reshape(x.shape)


def tanh_grad(y, gy):
    return _impl.ew_tanh_grad(_flat(y), _flat(gy)).reshape(y.shape)


def relu(x):
    return _impl.ew_relu(_flat(x)).reshape(x.shape)


def relu_grad(y, gy):
    return _impl.ew_relu_grad(_flat(y), _flat(gy)).reshape(y.shape)


def leaky_relu(x, slope):
    return _impl.ew_leaky_relu(_flat(x), float(slope)).reshape(x.shape)


def leaky_relu_grad(y, gy, slope):
    return _impl.ew_leaky_relu_grad(_flat(y), _flat(gy), float(slope)).reshape(y.shape)


def lstm_cell(pre, c_prev):
    return _impl.lstm_cell(np.ascontiguousarray(pre), np.ascontiguousarray(c_prev))


def lstm_cell_grad(gh, gc, gates, c_prev, c):
    gh = np.ascontiguousarray(gh)
    if gc is not None:
        gc = np.ascontiguousarray(gc)
    return _impl.lstm_cell_grad(gh, gc, gates, c_prev, c)


def softmax2d(scores):
    return _impl.softmax(np.ascontiguousarray(scores))


def masked_softmax2d(scores, mask):
    mask8 = np.ascontiguousarray(mask).view(np.uint8)
    return _impl.masked_softmax(np.ascontiguousarray(scores), mask8)


def softmax2d_grad(w, gw):
    return _impl.softmax_grad(np.ascontiguousarray(w), np.ascontiguousarray(gw))


def adam_step(p, g, m, v, t, lr, beta1, beta2, eps):
    _impl.adam_step(
        p.reshape(-1), _flat(g), m.reshape(-1), v.reshape(-1),
        int(t), float(lr), float(beta1), float(beta2), float(eps),
    )
