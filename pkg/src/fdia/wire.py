"""Wire and file formats.

Every artifact starts with the magic bytes ``FDIA`` and a version byte.
Tag files then carry name length + name, the block count m, h', h'',
sigma_F and the m compressed tags.  Other record kinds add a single type
byte after the version so they cannot be confused for one another.  All
integers are fixed-width big-endian; group elements, target-group
elements and scalars use the canonical encodings from groups.py.

Proof records follow the order: m', h', h'', sigma_F, count of reused
sets, each set as (id length + id, k_prf, sigma_k, index count + sorted
indices), then the nonce of the challenge being answered.
"""

import io

from . import idas, protocol
from .groups import GroupContext

MAGIC = b"FDIA"
VERSION = 1

TYPE_PARAMS = b"P"
TYPE_MASTER_KEY = b"M"
TYPE_AV_KEY = b"A"
TYPE_ES_KEY = b"E"
TYPE_CHALLENGE = b"C"
TYPE_PROOF = b"R"
TYPE_CACHE = b"H"
TYPE_CHALLENGE_STATE = b"L"


class FormatError(ValueError):
    """Malformed or truncated record."""


def _u32(n):
    if not 0 <= n < 1 << 32:
        raise FormatError("integer out of u32 range")
    return n.to_bytes(4, "big")


class _Reader:
    def __init__(self, data):
        self.buf = io.BytesIO(data)
        self.total = len(data)

    def take(self, n):
        chunk = self.buf.read(n)
        if len(chunk) != n:
            raise FormatError("truncated record")
        return chunk

    def u32(self):
        return int.from_bytes(self.take(4), "big")

    def lp_bytes(self):
        return self.take(self.u32())

    def scalar(self, ctx):
        try:
            return ctx.scalar_from_bytes(self.take(ctx.scalar_bytes))
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def g1(self, ctx):
        try:
            return ctx.g1_from_bytes(self.take(ctx.g1_bytes))
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def gt(self, ctx):
        try:
            return ctx.gt_from_bytes(self.take(ctx.gt_bytes))
        except ValueError as exc:
            raise FormatError(str(exc)) from None

    def sig(self, ctx):
        return idas.IdasSignature(self.g1(ctx), self.g1(ctx))

    def done(self):
        if self.buf.read(1):
            raise FormatError("trailing bytes after record")


def _header(record_type=b""):
    return MAGIC + bytes([VERSION]) + record_type


def _check_header(rd, record_type=b""):
    if rd.take(4) != MAGIC:
        raise FormatError("bad magic")
    version = rd.take(1)[0]
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if record_type and rd.take(1) != record_type:
        raise FormatError("unexpected record type")


# --- signatures ---

def sig_to_bytes(ctx, sig):
    """u || v, two compressed group elements."""
    return ctx.g1_to_bytes(sig.u) + ctx.g1_to_bytes(sig.v)


def sig_from_bytes(ctx, data):
    rd = _Reader(data)
    sig = rd.sig(ctx)
    rd.done()
    return sig


def agg_to_bytes(ctx, agg):
    """v_agg followed by a length-prefixed commitment list."""
    out = [ctx.g1_to_bytes(agg.v_agg), _u32(len(agg.commitments))]
    out += [ctx.g1_to_bytes(u) for u in agg.commitments]
    return b"".join(out)


def agg_from_bytes(ctx, data):
    rd = _Reader(data)
    v_agg = rd.g1(ctx)
    commitments = tuple(rd.g1(ctx) for _ in range(rd.u32()))
    rd.done()
    return idas.AggregateSignature(v_agg, commitments)


# --- system parameters and keys ---

def params_to_bytes(params):
    ctx = params.ctx
    level = ctx.level.encode()
    return b"".join([
        _header(TYPE_PARAMS),
        _u32(len(level)), level,
        _u32(params.m),
        ctx.g1_to_bytes(params.h),
        _u32(len(params.id_star)), params.id_star,
        ctx.g1_to_bytes(params.idas_params.pk_sign),
    ])


def params_from_bytes(data):
    rd = _Reader(data)
    _check_header(rd, TYPE_PARAMS)
    try:
        ctx = GroupContext(rd.lp_bytes().decode())
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError(f"bad security level field: {exc}") from None
    m = rd.u32()
    h = rd.g1(ctx)
    id_star = rd.lp_bytes()
    pk_sign = rd.g1(ctx)
    rd.done()
    return protocol.SystemParams(ctx, h, id_star, m, idas.IdasParams(ctx, pk_sign))


def master_key_to_bytes(params, msk):
    ctx = params.ctx
    return _header(TYPE_MASTER_KEY) + ctx.scalar_to_bytes(msk.z) + ctx.scalar_to_bytes(msk.idas_msk.z_s)


def master_key_from_bytes(params, data):
    rd = _Reader(data)
    _check_header(rd, TYPE_MASTER_KEY)
    z = rd.scalar(params.ctx)
    z_s = rd.scalar(params.ctx)
    rd.done()
    return protocol.MasterKey(z, idas.IdasMasterKey(z_s))


def av_key_to_bytes(params, key):
    ctx = params.ctx
    return b"".join([
        _header(TYPE_AV_KEY),
        _u32(len(key.id_av)), key.id_av,
        ctx.g1_to_bytes(key.s),
        ctx.g1_to_bytes(key.sk_sign.sk),
    ])


def av_key_from_bytes(params, data):
    rd = _Reader(data)
    _check_header(rd, TYPE_AV_KEY)
    id_av = rd.lp_bytes()
    s = rd.g1(params.ctx)
    sk = rd.g1(params.ctx)
    rd.done()
    return protocol.AvKey(id_av, idas.IdasUserKey(id_av, sk), s)


def es_key_to_bytes(params, key):
    ctx = params.ctx
    return b"".join([
        _header(TYPE_ES_KEY),
        _u32(len(key.id_es)), key.id_es,
        ctx.g1_to_bytes(key.sk_sign.sk),
    ])


def es_key_from_bytes(params, data):
    rd = _Reader(data)
    _check_header(rd, TYPE_ES_KEY)
    id_es = rd.lp_bytes()
    sk = rd.g1(params.ctx)
    rd.done()
    return protocol.EsKey(id_es, idas.IdasUserKey(id_es, sk))


# --- tag files ---

def tag_file_to_bytes(params, tagged):
    """magic, version, name length + name, m, h', h'', sigma_F, m tags."""
    ctx = params.ctx
    out = [
        _header(),
        _u32(len(tagged.name)), tagged.name,
        _u32(tagged.m),
        ctx.g1_to_bytes(tagged.h_prime),
        ctx.g1_to_bytes(tagged.h_dprime),
        sig_to_bytes(ctx, tagged.sigma_f),
    ]
    out += [ctx.g1_to_bytes(t) for t in tagged.tags]
    return b"".join(out)


def tag_file_from_bytes(params, data, blocks=None):
    """Parse a tag file; blocks (if supplied) are attached to the result."""
    ctx = params.ctx
    rd = _Reader(data)
    _check_header(rd)
    name = rd.lp_bytes()
    m = rd.u32()
    h_prime = rd.g1(ctx)
    h_dprime = rd.g1(ctx)
    sigma_f = rd.sig(ctx)
    tags = [rd.g1(ctx) for _ in range(m)]
    rd.done()
    if blocks is not None and len(blocks) != m:
        raise FormatError("block count does not match tag file")
    return protocol.TaggedFile(
        name, m, list(blocks) if blocks is not None else [], tags, h_prime, h_dprime, sigma_f
    )


def blocks_to_bytes(ctx, blocks):
    out = [_u32(len(blocks))]
    out += [ctx.scalar_to_bytes(b) for b in blocks]
    return b"".join(out)


def blocks_from_bytes(ctx, data):
    rd = _Reader(data)
    blocks = [rd.scalar(ctx) for _ in range(rd.u32())]
    rd.done()
    return blocks


# --- challenges ---

def challenge_to_bytes(params, ch):
    """Public challenge record; the private lambda never crosses the wire."""
    ctx = params.ctx
    out = [
        _header(TYPE_CHALLENGE),
        ch.nonce,
        _u32(len(ch.challenger_id)), ch.challenger_id,
        _u32(len(ch.av_id)), ch.av_id,
        ctx.scalar_to_bytes(ch.k_prf),
        sig_to_bytes(ctx, ch.sigma_k),
        ctx.g1_to_bytes(ch.alpha),
        ctx.gt_to_bytes(ch.beta),
        ctx.g1_to_bytes(ch.gamma),
        _u32(len(ch.indices)),
    ]
    out += [_u32(i) for i in ch.indices]
    return b"".join(out)


def challenge_from_bytes(params, data):
    ctx = params.ctx
    rd = _Reader(data)
    _check_header(rd, TYPE_CHALLENGE)
    nonce = rd.take(protocol.NONCE_BYTES)
    challenger_id = rd.lp_bytes()
    av_id = rd.lp_bytes()
    k_prf = rd.scalar(ctx)
    sigma_k = rd.sig(ctx)
    alpha = rd.g1(ctx)
    beta = rd.gt(ctx)
    gamma = rd.g1(ctx)
    indices = tuple(rd.u32() for _ in range(rd.u32()))
    rd.done()
    if list(indices) != sorted(set(indices)):
        raise FormatError("challenge indices must be sorted and distinct")
    return protocol.Challenge(
        alpha, beta, gamma, indices, k_prf, sigma_k, challenger_id, av_id, nonce
    )


def challenge_payload_bytes(params, ch):
    """Byte size of the challenge minus headers, identities and the index
    list; this is the part whose size is independent of the subset size."""
    full = len(challenge_to_bytes(params, ch))
    return full - len(_header(TYPE_CHALLENGE)) - protocol.NONCE_BYTES \
        - 4 - len(ch.challenger_id) - 4 - len(ch.av_id) - 4 - 4 * len(ch.indices)


def challenge_state_to_bytes(params, ch):
    """Challenger-private record: lambda keyed by the challenge nonce."""
    if ch.lam is None:
        raise ValueError("challenge carries no private lambda")
    return _header(TYPE_CHALLENGE_STATE) + ch.nonce + params.ctx.scalar_to_bytes(ch.lam)


def challenge_state_from_bytes(params, data):
    rd = _Reader(data)
    _check_header(rd, TYPE_CHALLENGE_STATE)
    nonce = rd.take(protocol.NONCE_BYTES)
    lam = rd.scalar(params.ctx)
    rd.done()
    return nonce, lam


# --- proofs ---

def proof_to_bytes(params, proof):
    ctx = params.ctx
    out = [
        _header(TYPE_PROOF),
        ctx.gt_to_bytes(proof.m_prime),
        ctx.g1_to_bytes(proof.h_prime),
        ctx.g1_to_bytes(proof.h_dprime),
        sig_to_bytes(ctx, proof.sigma_f),
        _u32(len(proof.reused)),
    ]
    for rs in proof.reused:
        out += [
            _u32(len(rs.challenger_id)), rs.challenger_id,
            ctx.scalar_to_bytes(rs.k_prf),
            sig_to_bytes(ctx, rs.sigma_k),
            _u32(len(rs.indices)),
        ]
        out += [_u32(i) for i in rs.indices]
    out.append(proof.nonce)
    return b"".join(out)


def proof_from_bytes(params, data):
    ctx = params.ctx
    rd = _Reader(data)
    _check_header(rd, TYPE_PROOF)
    m_prime = rd.gt(ctx)
    h_prime = rd.g1(ctx)
    h_dprime = rd.g1(ctx)
    sigma_f = rd.sig(ctx)
    reused = []
    for _ in range(rd.u32()):
        challenger_id = rd.lp_bytes()
        k_prf = rd.scalar(ctx)
        sigma_k = rd.sig(ctx)
        indices = tuple(rd.u32() for _ in range(rd.u32()))
        if list(indices) != sorted(set(indices)):
            raise FormatError("reused-set indices must be sorted and distinct")
        reused.append(protocol.ReusedSet(indices, k_prf, sigma_k, challenger_id))
    nonce = rd.take(protocol.NONCE_BYTES)
    rd.done()
    return protocol.IntegrityProof(m_prime, h_prime, h_dprime, sigma_f, reused, nonce)


def proof_payload_bytes(params, proof):
    """Byte size of the fixed group-element payload (m', h', h'', sigma_F);
    independent of both the subset size and the reused-set lists."""
    ctx = params.ctx
    sigma_len = 2 * ctx.g1_bytes
    return ctx.gt_bytes + 2 * ctx.g1_bytes + sigma_len


# --- prover cache ---

def cache_to_bytes(params, cache):
    ctx = params.ctx
    out = [_header(TYPE_CACHE), _u32(len(cache))]
    for entry in cache:
        out += [
            _u32(len(entry.challenger_id)), entry.challenger_id,
            ctx.scalar_to_bytes(entry.k_prf),
            sig_to_bytes(ctx, entry.sigma_k),
            _u32(len(entry.indices)),
        ]
        for i in entry.indices:
            phi_i, mu_i = entry.pairs[i]
            out += [_u32(i), ctx.g1_to_bytes(phi_i), ctx.scalar_to_bytes(mu_i)]
    return b"".join(out)


def cache_from_bytes(params, data):
    ctx = params.ctx
    rd = _Reader(data)
    _check_header(rd, TYPE_CACHE)
    cache = []
    for _ in range(rd.u32()):
        challenger_id = rd.lp_bytes()
        k_prf = rd.scalar(ctx)
        sigma_k = rd.sig(ctx)
        count = rd.u32()
        pairs = {}
        for _ in range(count):
            i = rd.u32()
            pairs[i] = (rd.g1(ctx), rd.scalar(ctx))
        cache.append(protocol.ProofCacheEntry(tuple(sorted(pairs)), k_prf, sigma_k, challenger_id, pairs))
    rd.done()
    return cache
