"""The generic encoder / social-attention / decoder architecture.

One shared-weight LSTM encodes the main pedestrian and (when the social
module consumes embeddings) every neighbour; the social module pools the
neighbour set into a context vector; the decoder maps the concatenated
pair to 12 future positions. Optional binary gates multiply the two
module outputs before decoding.
"""

from .. import ops
from .layers import DisplacementDecoder, LstmEncoder
from .social import SOCIAL_WIDTH, GraphAttentionSocial, HandcraftedScoreSocial, VainSocial

_SOCIAL_BUILDERS = {
    "vain": VainSocial,
    "social_ways": HandcraftedScoreSocial,
    "social_bigat": GraphAttentionSocial,
}


class GenericModel:
    is_social = True

    def __init__(self, kind, rng, hidden=32):
        if kind not in _SOCIAL_BUILDERS:
            raise ValueError(f"unknown social model kind {kind!r}")
        self.kind = kind
        self.hidden = hidden
        self.encoder = LstmEncoder(rng, 4, hidden, "encoder")
        self.social = _SOCIAL_BUILDERS[kind](rng)
        self.decoder = DisplacementDecoder(rng, hidden + SOCIAL_WIDTH, "decoder")

    def forward(self, batch, gates=None, gate_mode="eval", gate_rng=None):
        """-> (predictions Tensor (B, 12, 2) in normalized space, attention (B, N))."""
        bsz, n = batch.nb.shape[:2]
        traj_feat = self.encoder.encode(batch.obs)
        nb_enc = None
        if self.social.needs_neighbour_encodings:
            nb_enc = self.encoder.encode(batch.nb.reshape(bsz * n, *batch.nb.shape[2:]))
        context, attention = self.social(batch, traj_feat, nb_enc)
        if gates is not None:
            traj_feat, context = gates.apply(traj_feat, context, mode=gate_mode, rng=gate_rng)
        decoded = self.decoder.decode(ops.concat([traj_feat, context], axis=1), batch.last_pos)
        return decoded, attention

    def parameters(self):
        return {
            **self.encoder.parameters(),
            **self.social.parameters(),
            **self.decoder.parameters(),
        }
