"""Reverse-mode automatic differentiation over numpy float64 arrays.

A forward operation involving any tracked tensor appends a node to an
implicit tape (the graph of creator nodes); ``backward`` walks that graph
once in reverse topological order and accumulates gradients. Every
forward result and every gradient is checked for NaN/Inf: non-finite
values are an error state, never silent.

The tape is single-writer: one training step builds and consumes one
graph. Independent model instances may run in parallel processes with no
shared state.
"""

import weakref
from contextlib import contextmanager

import numpy as np


class AutodiffError(Exception):
    """Base class for tape/tensor errors."""


class ShapeMismatch(AutodiffError):
    pass


class NonFiniteValues(AutodiffError):
    pass


_tape_enabled = True


@contextmanager
def no_tape():
    """Disable graph recording (inference mode) inside the block."""
    global _tape_enabled
    prev = _tape_enabled
    _tape_enabled = False
    try:
        yield
    finally:
        _tape_enabled = prev


def tape_enabled():
    return _tape_enabled


def check_finite(op, arr):
    """Raise NonFiniteValues naming `op` if arr contains NaN or +-Inf.

    The cheap sum probe catches the common case in one pass; a full scan
    only runs to rule out benign overflow of the probe itself.
    """
    if arr.size and not np.isfinite(arr.sum()) and not np.isfinite(arr).all():
        raise NonFiniteValues(f"{op}: produced non-finite values")


class Tensor:
    """n-dimensional float64 array, optionally tracked for gradients.

    `requires_grad` marks leaf parameters. A tensor produced by an
    operation on tracked inputs carries a creator `node`; both kinds are
    "grad-tracked". `grad` is populated by `backward`.
    """

    __slots__ = ("data", "grad", "requires_grad", "node", "__weakref__")

    def __init__(self, data, requires_grad=False):
        arr = np.asarray(data, dtype=np.float64)
        if not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        self.data = arr
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self.node = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data.reshape(()))

    def detach(self):
        return Tensor(self.data)

    def tracked(self):
        return self.requires_grad or self.node is not None

    def __repr__(self):
        flag = ", grad" if self.tracked() else ""
        return f"Tensor(shape={self.data.shape}{flag})"

    # convenience arithmetic; the hot path calls socialprobe.ops directly
    def __add__(self, other):
        from . import ops

        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from . import ops

        return ops.div(self, other)

    def __matmul__(self, other):
        from . import ops

        return ops.matmul(self, other)

    def __neg__(self):
        from . import ops

        return ops.mul(self, -1.0)


class TapeNode:
    """One recorded operation: inputs, forward cache, weak refs to outputs.

    Output references are weak so dropping an unused result frees its
    subgraph by plain refcounting; anything reachable from the loss stays
    alive through the input references.
    """

    __slots__ = ("op", "inputs", "cache", "out_refs", "backward_fn")

    def __init__(self, op, inputs, outputs, cache, backward_fn):
        self.op = op
        self.inputs = tuple(inputs)
        self.cache = cache
        self.backward_fn = backward_fn
        self.out_refs = tuple(weakref.ref(o) for o in outputs)
        for o in outputs:
            o.node = self


def record(op, inputs, outputs, cache, backward_fn):
    """Attach a TapeNode if the tape is on and any input is tracked."""
    if _tape_enabled and any(t.tracked() for t in inputs):
        TapeNode(op, inputs, outputs, cache, backward_fn)


def _topo_order(root):
    """Post-order over tape nodes; each node appears exactly once.

    Nodes are marked at first expansion (not at push): a node queued via
    one path can still be discovered deeper along another, and must sort
    below that deeper use.
    """
    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for t in node.inputs:
            child = t.node
            if child is not None and id(child) not in seen:
                stack.append((child, False))
    return order


def backward(loss, params=None):
    """Accumulate d(loss)/d(tensor) for every tracked tensor in the graph.

    `loss` must be scalar. Gradients overwrite `.grad` on the leaf
    tensors reached; tensors listed in `params` but untouched by the
    graph get an explicit zero gradient. Raises NonFiniteValues naming
    the first node whose input gradient goes NaN/Inf.
    """
    if loss.data.size != 1:
        raise AutodiffError(f"backward: loss must be scalar, got shape {loss.data.shape}")
    grads = {}  # id(tensor) -> [tensor, ndarray]
    if loss.node is not None:
        grads[id(loss)] = [loss, np.ones_like(loss.data)]
        for node in reversed(_topo_order(loss.node)):
            gouts = []
            for ref in node.out_refs:
                out = ref()
                entry = grads.get(id(out)) if out is not None else None
                gouts.append(entry[1] if entry is not None else None)
            if all(g is None for g in gouts):
                continue
            gins = node.backward_fn(node, gouts)
            for t, g in zip(node.inputs, gins):
                if g is None or not t.tracked():
                    continue
                check_finite(f"backward[{node.op}]", g)
                entry = grads.get(id(t))
                if entry is None:
                    grads[id(t)] = [t, g]
                else:
                    entry[1] = entry[1] + g
    for t, g in grads.values():
        if t.requires_grad:
            t.grad = g
    if params is not None:
        for p in params:
            if p.grad is None:
                p.grad = np.zeros_like(p.data)
