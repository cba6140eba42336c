"""Identity-based aggregate signatures over the pairing group.

The scheme is a partial-aggregate identity-based signature: the master
key z_s extracts per-identity keys sk = Hsig(id)^z_s, a signature on M is

    sigma = (u, v) = (g^t, sk * Hmsg(id || M)^t)

for fresh t, aggregation multiplies the v components while keeping every
per-signature commitment u, and the joint verification equation is

    e(v_agg, g) = e(prod_j Hsig(id_j), pk) * prod_j e(Hmsg(id_j || M_j), u_j).

Aggregation order is caller-supplied and normative: verification consumes
(ids, msgs) in exactly the order the signatures were aggregated.
"""

from dataclasses import dataclass
from typing import Sequence

from .groups import GroupContext, G1Element, LABEL_HSIG, LABEL_HMSG


@dataclass(frozen=True)
class IdasParams:
    ctx: GroupContext
    pk_sign: G1Element


@dataclass(frozen=True)
class IdasMasterKey:
    z_s: int


@dataclass(frozen=True)
class IdasUserKey:
    id: bytes
    sk: G1Element


@dataclass(frozen=True)
class IdasSignature:
    u: G1Element  # per-signature commitment g^t
    v: G1Element  # sk * Hmsg(id || M)^t


@dataclass(frozen=True)
class AggregateSignature:
    v_agg: G1Element
    commitments: tuple  # u components, order-matched to the (id, msg) pairs


def _bind(identity, msg):
    # length prefix keeps (id, msg) framing unambiguous under concatenation
    return len(identity).to_bytes(4, "big") + identity + msg


def setup(ctx, rng=None):
    """Sample the master signing key and publish pk = g^z_s."""
    z_s = ctx.random_scalar(rng)
    return IdasParams(ctx, ctx.g ** z_s), IdasMasterKey(z_s)


def keygen(params, msk, identity):
    """Extract sk = Hsig(id)^z_s for a non-empty identity."""
    if not identity:
        raise ValueError("identity must be non-empty")
    ctx = params.ctx
    return IdasUserKey(bytes(identity), ctx.hash_to_g1(LABEL_HSIG, identity) ** msk.z_s)


def sign(params, key, msg, rng=None):
    ctx = params.ctx
    t = ctx.random_scalar(rng)
    u = ctx.g ** t
    v = key.sk * (ctx.hash_to_g1(LABEL_HMSG, _bind(key.id, msg)) ** t)
    return IdasSignature(u, v)


def aggregate(params, sigs: Sequence[IdasSignature]):
    if not sigs:
        raise ValueError("cannot aggregate an empty signature sequence")
    v_agg = sigs[0].v
    for s in sigs[1:]:
        v_agg = v_agg * s.v
    return AggregateSignature(v_agg, tuple(s.u for s in sigs))


def verify(params, agg, ids, msgs):
    """Joint verification; returns True/False, raises on length mismatch."""
    n = len(agg.commitments)
    if len(ids) != n or len(msgs) != n:
        raise ValueError("ids, msgs and commitments must have equal length")
    if n == 0:
        raise ValueError("nothing to verify")
    ctx = params.ctx
    lhs = ctx.pairing(agg.v_agg, ctx.g)
    hsig_prod = ctx.identity()
    for identity in ids:
        hsig_prod = hsig_prod * ctx.hash_to_g1(LABEL_HSIG, identity)
    rhs = ctx.pairing(hsig_prod, params.pk_sign)
    for identity, msg, u in zip(ids, msgs, agg.commitments):
        rhs = rhs * ctx.pairing(ctx.hash_to_g1(LABEL_HMSG, _bind(identity, msg)), u)
    return lhs == rhs


def verify_single(params, sig, identity, msg):
    return verify(params, AggregateSignature(sig.v, (sig.u,)), [identity], [msg])
