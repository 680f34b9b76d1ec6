"""Pure-numpy kernel backend.

Reference implementation of the training hot-path kernels. The compiled
backend in ``_native.pyx`` mirrors these signatures exactly; both operate
on C-contiguous float64 arrays (1-D for elementwise kernels, 2-D for the
row-structured ones) and are interchangeable up to floating-point
summation order.
"""

import numpy as np

name = "pure"


def ew_sigmoid(x):
    # branch on sign to avoid exp overflow on large negative inputs
    out = np.empty_like(x)
    pos = x >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def ew_sigmoid_grad(y, gy):
    return gy * y * (1.0 - y)


def ew_tanh(x):
    return np.tanh(x)


def ew_tanh_grad(y, gy):
    return gy * (1.0 - y * y)


def ew_relu(x):
    return np.maximum(x, 0.0)


def ew_relu_grad(y, gy):
    return np.where(y > 0.0, gy, 0.0)


def ew_leaky_relu(x, slope):
    return np.where(x >= 0.0, x, slope * x)


def ew_leaky_relu_grad(y, gy, slope):
    # slope > 0 keeps the sign of x, so the branch can be read off y
    return np.where(y >= 0.0, gy, slope * gy)


def lstm_cell(pre, c_prev):
    """Fused LSTM cell: pre (B, 4H) holds the i|f|g|o pre-activations.

    Returns (h, c, gates) where gates caches the activated i|f|g|o block
    for the backward pass.
    """
    hsize = c_prev.shape[1]
    gates = np.empty_like(pre)
    gates[:, : 2 * hsize] = ew_sigmoid(pre[:, : 2 * hsize])
    gates[:, 2 * hsize : 3 * hsize] = np.tanh(pre[:, 2 * hsize : 3 * hsize])
    gates[:, 3 * hsize :] = ew_sigmoid(pre[:, 3 * hsize :])
    i = gates[:, :hsize]
    f = gates[:, hsize : 2 * hsize]
    g = gates[:, 2 * hsize : 3 * hsize]
    o = gates[:, 3 * hsize :]
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c, gates


def lstm_cell_grad(gh, gc, gates, c_prev, c):
    """Backward of lstm_cell. gc may be None (final step). Returns (gpre, gc_prev)."""
    hsize = c_prev.shape[1]
    i = gates[:, :hsize]
    f = gates[:, hsize : 2 * hsize]
    g = gates[:, 2 * hsize : 3 * hsize]
    o = gates[:, 3 * hsize :]
    tc = np.tanh(c)
    gc_total = gh * o * (1.0 - tc * tc)
    if gc is not None:
        gc_total = gc_total + gc
    gpre = np.empty_like(gates)
    gpre[:, :hsize] = gc_total * g * i * (1.0 - i)
    gpre[:, hsize : 2 * hsize] = gc_total * c_prev * f * (1.0 - f)
    gpre[:, 2 * hsize : 3 * hsize] = gc_total * i * (1.0 - g * g)
    gpre[:, 3 * hsize :] = gh * tc * o * (1.0 - o)
    gc_prev = gc_total * f
    return gpre, gc_prev


def softmax(scores):
    """Row softmax of a (R, N) array."""
    m = scores.max(axis=1, keepdims=True)
    e = np.exp(scores - m)
    return e / e.sum(axis=1, keepdims=True)


def masked_softmax(scores, mask):
    """Row softmax over entries where mask != 0; all-masked rows yield zeros."""
    valid = mask != 0
    neg = np.where(valid, scores, -np.inf)
    m = neg.max(axis=1, keepdims=True, initial=-np.inf)
    m = np.where(np.isfinite(m), m, 0.0)
    e = np.where(valid, np.exp(neg - m), 0.0)
    s = e.sum(axis=1, keepdims=True)
    return np.where(s > 0.0, e / np.where(s == 0.0, 1.0, s), 0.0)


def softmax_grad(w, gw):
    # also correct for masked_softmax: masked entries carry w == 0
    dot = (w * gw).sum(axis=1, keepdims=True)
    return w * (gw - dot)


def adam_step(p, g, m, v, t, lr, beta1, beta2, eps):
    """One fused Adam update with bias correction; p, m, v updated in place."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)
