"""Soft-attention social modules.

Each module summarizes the neighbour set into a fixed-width context
vector. Attention weights over valid neighbours form a probability
distribution; padded neighbours get zero weight, and with no valid
neighbour the context is the zero vector. All modules are invariant to
neighbour order.
"""

import numpy as np

from .. import ops
from ..autodiff import Tensor
from .layers import Linear, Mlp, init_weight

SOCIAL_WIDTH = 32


class VainSocial:
    """Distance-kernel attention over the last observed states.

    Only the last position and speed of each pedestrian enter. The score
    is the inverse squared euclidean distance between learned non-linear
    projections; the kernel itself has no learned parameters. The
    averaged value is the neighbour's projected last state.
    """

    needs_neighbour_encodings = False

    def __init__(self, rng, name="social", eps=1e-6):
        self.eps = eps
        self.proj = Linear(rng, 4, SOCIAL_WIDTH, f"{name}.proj")

    def __call__(self, batch, main_enc, nb_enc):
        bsz, n = batch.nb.shape[:2]
        main_last = Tensor(batch.obs[:, -1, :])
        nb_last = Tensor(batch.nb[:, :, -1, :].reshape(bsz * n, 4))
        pm = ops.relu(self.proj(main_last))
        pn = ops.relu(self.proj(nb_last))
        pn3 = ops.reshape(pn, (bsz, n, SOCIAL_WIDTH))

        diff = ops.sub(ops.reshape(pm, (bsz, 1, SOCIAL_WIDTH)), pn3)
        d2 = ops.tsum(ops.mul(diff, diff), axis=2)
        inv = ops.div(1.0, ops.add(d2, self.eps))
        valid = Tensor(batch.nb_valid.astype(np.float64))
        inv = ops.mul(inv, valid)
        denom = ops.tsum(inv, axis=1, keepdims=True)
        # rows with no valid neighbour divide by 1 and stay all-zero
        safe = ops.add(denom, Tensor((denom.data == 0.0).astype(np.float64)))
        weights = ops.div(inv, safe)
        context = ops.tsum(ops.mul(ops.reshape(weights, (bsz, n, 1)), pn3), axis=1)
        return context, weights.data.copy()

    def parameters(self):
        return self.proj.parameters()


class HandcraftedScoreSocial:
    """Learned scores over handcrafted pair features plus the neighbour embedding."""

    needs_neighbour_encodings = True

    def __init__(self, rng, name="social", hidden=64):
        self.score = Mlp(rng, (3 + SOCIAL_WIDTH, hidden, 1), f"{name}.score")

    def __call__(self, batch, main_enc, nb_enc):
        bsz, n = batch.nb.shape[:2]
        feats = Tensor(batch.features.reshape(bsz * n, 3))
        scores = self.score(ops.concat([feats, nb_enc], axis=1))
        scores = ops.reshape(scores, (bsz, n))
        weights = ops.masked_softmax(scores, batch.nb_valid)
        nb3 = ops.reshape(nb_enc, (bsz, n, SOCIAL_WIDTH))
        context = ops.tsum(ops.mul(ops.reshape(weights, (bsz, n, 1)), nb3), axis=1)
        return context, weights.data.copy()

    def parameters(self):
        return self.score.parameters()


class GraphAttentionSocial:
    """Multi-head graph attention on the star graph around the main pedestrian."""

    needs_neighbour_encodings = True

    def __init__(self, rng, name="social", heads=4, slope=0.2):
        if SOCIAL_WIDTH % heads:
            raise ValueError(f"heads={heads} must divide width {SOCIAL_WIDTH}")
        self.slope = slope
        self.name = name
        self.heads = []
        d_head = SOCIAL_WIDTH // heads
        for k in range(heads):
            w = Linear(rng, SOCIAL_WIDTH, d_head, f"{name}.head{k}")
            a_src = Tensor(init_weight(rng, d_head, (d_head, 1)), requires_grad=True)
            a_dst = Tensor(init_weight(rng, d_head, (d_head, 1)), requires_grad=True)
            self.heads.append((w, a_src, a_dst))

    def __call__(self, batch, main_enc, nb_enc):
        bsz, n = batch.nb.shape[:2]
        has_valid = Tensor(batch.nb_valid.any(axis=1, keepdims=True).astype(np.float64))
        outs = []
        weight_sum = np.zeros((bsz, n))
        for w, a_src, a_dst in self.heads:
            wh_main = w(main_enc)
            wh_nb = w(nb_enc)
            d_head = wh_main.shape[1]
            s_main = ops.matmul(wh_main, a_src)
            s_nb = ops.reshape(ops.matmul(wh_nb, a_dst), (bsz, n))
            scores = ops.leaky_relu(ops.add(s_main, s_nb), self.slope)
            weights = ops.masked_softmax(scores, batch.nb_valid)
            pooled = ops.tsum(
                ops.mul(ops.reshape(weights, (bsz, n, 1)), ops.reshape(wh_nb, (bsz, n, d_head))),
                axis=1,
            )
            outs.append(ops.sigmoid(pooled))
            weight_sum += weights.data
        # sigma(0) = 0.5 on empty rows; force the no-neighbour context to zero
        context = ops.mul(ops.concat(outs, axis=1), has_valid)
        return context, weight_sum / len(self.heads)

    def parameters(self):
        out = {}
        for k, (w, a_src, a_dst) in enumerate(self.heads):
            out.update(w.parameters())
            out[f"{self.name}.head{k}.a_src"] = a_src
            out[f"{self.name}.head{k}.a_dst"] = a_dst
        return out
