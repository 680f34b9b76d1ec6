"""Differentiable primitives recorded on the tape.

Every function takes Tensors (or anything convertible) and returns new
Tensors. Forward results are checked finite; shape errors name the
operation and the offending shapes. Backward rules skip gradients for
untracked inputs.
"""

import numpy as np

from . import kernels
from .autodiff import NonFiniteValues, ShapeMismatch, Tensor, check_finite, record


def as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _unbroadcast(g, shape):
    """Sum a broadcast gradient back down to `shape`."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def _binary(op, a, b, fwd, grad_a, grad_b):
    a, b = as_tensor(a), as_tensor(b)
    try:
        out_data = fwd(a.data, b.data)
    except ValueError:
        raise ShapeMismatch(f"{op}: incompatible shapes {a.data.shape} and {b.data.shape}") from None
    check_finite(op, out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        g = gouts[0]
        ta, tb = node.inputs
        ga = _unbroadcast(grad_a(g, ta.data, tb.data, node), ta.data.shape) if ta.tracked() else None
        gb = _unbroadcast(grad_b(g, ta.data, tb.data, node), tb.data.shape) if tb.tracked() else None
        return ga, gb

    record(op, (a, b), (out,), None, bwd)
    return out


def add(a, b):
    return _binary("add", a, b, lambda x, y: x + y, lambda g, x, y, n: g, lambda g, x, y, n: g)


def sub(a, b):
    return _binary("subtract", a, b, lambda x, y: x - y, lambda g, x, y, n: g, lambda g, x, y, n: -g)


def mul(a, b):
    return _binary("multiply", a, b, lambda x, y: x * y, lambda g, x, y, n: g * y, lambda g, x, y, n: g * x)


def div(a, b):
    return _binary("divide", a, b, lambda x, y: x / y, lambda g, x, y, n: g / y, lambda g, x, y, n: -g * x / (y * y))


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.data.shape[1] != b.data.shape[0]:
        raise ShapeMismatch(f"matrix-multiply: incompatible shapes {a.data.shape} and {b.data.shape}")
    out_data = a.data @ b.data
    check_finite("matrix-multiply", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        g = gouts[0]
        ta, tb = node.inputs
        ga = g @ tb.data.T if ta.tracked() else None
        gb = ta.data.T @ g if tb.tracked() else None
        return ga, gb

    record("matmul", (a, b), (out,), None, bwd)
    return out


def concat(tensors, axis):
    tensors = [as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeMismatch("concatenate: empty input list")
    try:
        out_data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError:
        shapes = [t.data.shape for t in tensors]
        raise ShapeMismatch(f"concatenate: incompatible shapes {shapes}") from None
    out = Tensor(out_data)
    sizes = [t.data.shape[axis] for t in tensors]

    def bwd(node, gouts):
        g = gouts[0]
        ax, sz = node.cache
        pieces = np.split(g, np.cumsum(sz)[:-1], axis=ax)
        return tuple(p if t.tracked() else None for p, t in zip(pieces, node.inputs))

    record("concat", tensors, (out,), (axis, sizes), bwd)
    return out


def reshape(t, shape):
    t = as_tensor(t)
    out = Tensor(t.data.reshape(shape))

    def bwd(node, gouts):
        return (gouts[0].reshape(node.cache),)

    record("reshape", (t,), (out,), t.data.shape, bwd)
    return out


def _expand_reduced(g, in_shape, axis, keepdims):
    if axis is None:
        return np.broadcast_to(g.reshape((1,) * len(in_shape)), in_shape)
    if not keepdims:
        g = np.expand_dims(g, axis)
    return np.broadcast_to(g, in_shape)


def tsum(t, axis=None, keepdims=False):
    t = as_tensor(t)
    out_data = t.data.sum(axis=axis, keepdims=keepdims)
    check_finite("sum", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        in_shape, ax, kd = node.cache
        return (_expand_reduced(gouts[0], in_shape, ax, kd).copy(),)

    record("sum", (t,), (out,), (t.data.shape, axis, keepdims), bwd)
    return out


def tmean(t, axis=None, keepdims=False):
    t = as_tensor(t)
    out_data = t.data.mean(axis=axis, keepdims=keepdims)
    check_finite("mean", out_data)
    out = Tensor(out_data)
    count = t.data.size if axis is None else t.data.shape[axis]

    def bwd(node, gouts):
        in_shape, ax, kd, n = node.cache
        return (_expand_reduced(gouts[0], in_shape, ax, kd) / n,)

    record("mean", (t,), (out,), (t.data.shape, axis, keepdims, count), bwd)
    return out


def cumsum(t, axis):
    t = as_tensor(t)
    out_data = np.cumsum(t.data, axis=axis)
    check_finite("cumsum", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        ax = node.cache
        g = gouts[0]
        return (np.flip(np.cumsum(np.flip(g, ax), axis=ax), ax),)

    record("cumsum", (t,), (out,), axis, bwd)
    return out


def _activation(op, t, fwd, grad_from_out):
    t = as_tensor(t)
    out_data = fwd(t.data)
    check_finite(op, out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        y = node.out_refs[0]().data
        return (grad_from_out(y, gouts[0]),)

    record(op, (t,), (out,), None, bwd)
    return out


def sigmoid(t):
    return _activation("sigmoid", t, kernels.sigmoid, kernels.sigmoid_grad)


def tanh(t):
    return _activation("tanh", t, kernels.tanh, kernels.tanh_grad)


def relu(t):
    return _activation("relu", t, kernels.relu, kernels.relu_grad)


def leaky_relu(t, slope=0.2):
    t = as_tensor(t)
    out_data = kernels.leaky_relu(t.data, slope)
    check_finite("leaky-relu", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        y = node.out_refs[0]().data
        return (kernels.leaky_relu_grad(y, gouts[0], node.cache),)

    record("leaky-relu", (t,), (out,), slope, bwd)
    return out


def softmax(t, axis=-1):
    """Softmax along `axis`; outputs are non-negative and sum to one."""
    t = as_tensor(t)
    ax = axis % t.data.ndim
    last = ax == t.data.ndim - 1
    moved = t.data if last else np.ascontiguousarray(np.moveaxis(t.data, ax, -1))
    n = moved.shape[-1]
    if n == 0:
        raise ShapeMismatch(f"softmax: reduced axis {axis} of shape {t.data.shape} is empty")
    w2d = kernels.softmax2d(moved.reshape(-1, n))
    out_data = w2d.reshape(moved.shape)
    if not last:
        out_data = np.ascontiguousarray(np.moveaxis(out_data, -1, ax))
    check_finite("softmax", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        ax_, last_ = node.cache
        y = node.out_refs[0]().data
        g = gouts[0]
        if not last_:
            y = np.ascontiguousarray(np.moveaxis(y, ax_, -1))
            g = np.ascontiguousarray(np.moveaxis(g, ax_, -1))
        m = y.shape[-1]
        gs = kernels.softmax2d_grad(y.reshape(-1, m), g.reshape(-1, m)).reshape(y.shape)
        if not last_:
            gs = np.ascontiguousarray(np.moveaxis(gs, -1, ax_))
        return (gs,)

    record("softmax", (t,), (out,), (ax, last), bwd)
    return out


def masked_softmax(t, mask):
    """Softmax over the last axis restricted to entries where `mask` is True.

    `mask` is a plain bool ndarray (data, not a differentiable input).
    Rows with no valid entry yield all-zero weights.
    """
    t = as_tensor(t)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != t.data.shape:
        raise ShapeMismatch(f"masked-softmax: scores {t.data.shape} vs mask {mask.shape}")
    n = t.data.shape[-1]
    rows = int(np.prod(t.data.shape[:-1], dtype=np.int64))
    w2d = kernels.masked_softmax2d(t.data.reshape(rows, n), mask.reshape(rows, n))
    out = Tensor(w2d.reshape(t.data.shape))
    check_finite("masked-softmax", out.data)

    def bwd(node, gouts):
        y = node.out_refs[0]().data
        g = gouts[0]
        m = y.shape[-1]
        r = int(np.prod(y.shape[:-1], dtype=np.int64))
        gs = kernels.softmax2d_grad(y.reshape(r, m), g.reshape(r, m))
        return (gs.reshape(y.shape),)

    record("masked-softmax", (t,), (out,), None, bwd)
    return out


def lstm_cell(pre, c_prev):
    """Fused LSTM cell on pre-activations (R, 4H) and state (R, H) -> (h, c)."""
    pre, c_prev = as_tensor(pre), as_tensor(c_prev)
    if pre.data.shape[1] != 4 * c_prev.data.shape[1] or pre.data.shape[0] != c_prev.data.shape[0]:
        raise ShapeMismatch(f"lstm-cell: pre {pre.data.shape} vs state {c_prev.data.shape}")
    h_data, c_data, gates = kernels.lstm_cell(pre.data, c_prev.data)
    check_finite("lstm-cell", h_data)
    h, c = Tensor(h_data), Tensor(c_data)

    def bwd(node, gouts):
        gh, gc = gouts
        gates_, cprev_, c_ = node.cache
        if gh is None:
            gh = np.zeros_like(cprev_)
        gpre, gc_prev = kernels.lstm_cell_grad(gh, gc, gates_, cprev_, c_)
        tp, tc = node.inputs
        return (gpre if tp.tracked() else None, gc_prev if tc.tracked() else None)

    record("lstm-cell", (pre, c_prev), (h, c), (gates, c_prev.data, c_data), bwd)
    return h, c


def l2_norm(t, axis=None, keepdims=False):
    t = as_tensor(t)
    out_data = np.sqrt((t.data * t.data).sum(axis=axis, keepdims=keepdims))
    check_finite("l2-norm", out_data)
    out = Tensor(out_data)

    def bwd(node, gouts):
        in_shape, ax, kd = node.cache
        x = node.inputs[0].data
        y = node.out_refs[0]().data
        g = _expand_reduced(gouts[0], in_shape, ax, kd)
        y_full = _expand_reduced(y, in_shape, ax, kd)
        return (g * x / np.where(y_full == 0.0, 1.0, y_full),)

    record("l2-norm", (t,), (out,), (t.data.shape, axis, keepdims), bwd)
    return out


def hardclamp(t, lo=0.0, hi=1.0):
    """Clamp to [lo, hi]; gradient passes through strictly inside the window."""
    t = as_tensor(t)
    out = Tensor(np.clip(t.data, lo, hi))
    inside = (t.data > lo) & (t.data < hi)

    def bwd(node, gouts):
        return (gouts[0] * node.cache,)

    record("hardclamp", (t,), (out,), inside, bwd)
    return out


def squared_error(pred, target):
    """Mean over all entries of the squared difference.

    On a (B, T, 2) prediction this equals the batch mean of the per-sample
    position MSE with the 1/(2 t_pred) normalization.
    """
    d = sub(pred, target)
    return tmean(mul(d, d))
