"""The decentralized integrity-auditing protocol.

Eight algorithms: setup, AV/ES key generation, tag generation, challenge
generation, proof generation with a proof-reuse cache, cache update, and
proof checking, plus the repair flow.  One audit round between an auditor
edge server and an auditing (proving) edge server runs

    challenge_gen -> proof_gen (+ update_proof on the prover) -> proof_check.

Tags are homomorphic authenticators t_i = s^{f_i} * H2(name || h'' || i)^r
bound to the vendor key s = H1(id_av)^z; the proof collapses the challenged
blocks into a single target-group value m' = e(phi, alpha) * beta^(-mu),
and the checker recomputes the expected value from public hashes and its
private lambda.  Previously proven (phi_i, mu_i) pairs are replayed from
the prover's cache so repeated audits skip those exponentiations.

Two elements travel beyond the construction sketch they come from: the
challenge carries gamma = H1(av_id)^lambda so its consistency can be
verified with well-typed pairings, and tagged files plus proofs carry
h'' = h^r bound to h' by the pairing check e(h', h) = e(h'', g), since
the checker cannot derive h^r from g^r itself.
"""

import secrets

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import idas
from .groups import GroupContext, G1Element, GtElement, LABEL_H1, LABEL_H2

DEFAULT_M = 64
CACHE_CAPACITY = 64
NONCE_BYTES = 16


class ChallengeRejectedError(Exception):
    """The prover refused a challenge that fails its consistency checks."""


class CorruptSourceError(Exception):
    """Repair aborted: the designated healthy replica failed its own audit."""


@dataclass(frozen=True)
class SystemParams:
    ctx: GroupContext
    h: G1Element  # g^z
    id_star: bytes
    m: int  # default blocks per file
    idas_params: idas.IdasParams


@dataclass(frozen=True)
class MasterKey:
    z: int
    idas_msk: idas.IdasMasterKey


@dataclass(frozen=True)
class AvKey:
    id_av: bytes
    sk_sign: idas.IdasUserKey
    s: G1Element  # H1(id_av)^z


@dataclass(frozen=True)
class EsKey:
    id_es: bytes
    sk_sign: idas.IdasUserKey


@dataclass
class TaggedFile:
    name: bytes
    m: int
    blocks: List[int]
    tags: List[G1Element]
    h_prime: G1Element   # g^r
    h_dprime: G1Element  # h^r
    sigma_f: idas.IdasSignature  # binds h' || name


@dataclass
class Challenge:
    alpha: G1Element     # g^lambda
    beta: GtElement      # e(H1(av_id), h)^lambda
    gamma: G1Element     # H1(av_id)^lambda
    indices: Tuple[int, ...]  # sorted distinct block indices, 1-based
    k_prf: int
    sigma_k: idas.IdasSignature
    challenger_id: bytes  # the auditor; signs k_prf
    av_id: bytes          # the vendor the audit runs on behalf of; blinds beta
    nonce: bytes
    lam: Optional[int] = None  # challenger-private; never serialized


@dataclass
class ProofCacheEntry:
    indices: Tuple[int, ...]
    k_prf: int
    sigma_k: idas.IdasSignature
    challenger_id: bytes
    pairs: Dict[int, Tuple[G1Element, int]]  # index -> (phi_i, mu_i)


@dataclass(frozen=True)
class ReusedSet:
    """One replayed cache entry inside a proof: indices plus the challenge
    key material they were originally proven under."""
    indices: Tuple[int, ...]
    k_prf: int
    sigma_k: idas.IdasSignature
    challenger_id: bytes


@dataclass
class IntegrityProof:
    m_prime: GtElement
    h_prime: G1Element
    h_dprime: G1Element
    sigma_f: idas.IdasSignature
    reused: List[ReusedSet]
    nonce: bytes  # nonce of the challenge being answered

    @property
    def reused_sets(self):
        return [rs.indices for rs in self.reused]


@dataclass
class OpCounter:
    """Instrumentation hook for proof_gen; counts fresh tag exponentiations."""
    fresh_exponentiations: int = 0
    reused_pairs: int = 0


def _h2_input(name, h_dprime_bytes, index, ctx):
    return name + h_dprime_bytes + ctx.scalar_to_bytes(index)


def _sigma_f_msg(ctx, h_prime, name):
    return ctx.g1_to_bytes(h_prime) + name


def setup(security_level="std", m=DEFAULT_M, id_star=None, rng=None):
    """Create system parameters and the master key.

    ``m`` is the system-wide default block count; individual files may
    carry their own (tag_gen takes an override).
    """
    if m < 1:
        raise ValueError("default block count must be at least 1")
    ctx = GroupContext(security_level)
    z = ctx.random_scalar(rng)
    sig_params, sig_msk = idas.setup(ctx, rng)
    if id_star is None:
        id_star = (rng.getrandbits(64) if rng else secrets.randbits(64)).to_bytes(8, "big")
    params = SystemParams(ctx, ctx.g ** z, bytes(id_star), m, sig_params)
    return params, MasterKey(z, sig_msk)


def av_keygen(params, msk, id_av):
    """Vendor key: signing key plus the tag secret s = H1(id_av)^z."""
    if not id_av:
        raise ValueError("identity must be non-empty")
    sk_sign = idas.keygen(params.idas_params, msk.idas_msk, id_av)
    s = params.ctx.hash_to_g1(LABEL_H1, id_av) ** msk.z
    return AvKey(bytes(id_av), sk_sign, s)


def es_keygen(params, msk, id_es):
    """Edge-server key: just a signing key for the identity."""
    return EsKey(bytes(id_es), idas.keygen(params.idas_params, msk.idas_msk, id_es))


def tag_gen(params, av, data, name, m=None, rng=None):
    """Split a file into blocks and authenticate each one.

    Chooses fresh r, publishes h' = g^r and h'' = h^r, computes per-block
    tags t_i = s^{f_i} * H2(name || h'' || i)^r and signs h' || name.
    """
    ctx = params.ctx
    m = params.m if m is None else m
    blocks = ctx.encode_file_blocks(data, m)
    r = ctx.random_scalar(rng)
    h_prime = ctx.g ** r
    h_dprime = params.h ** r
    hd_bytes = ctx.g1_to_bytes(h_dprime)
    tags = []
    for i, f_i in enumerate(blocks, start=1):
        base = ctx.hash_to_g1(LABEL_H2, _h2_input(name, hd_bytes, i, ctx))
        tags.append((av.s ** f_i) * (base ** r))
    sigma_f = idas.sign(params.idas_params, av.sk_sign, _sigma_f_msg(ctx, h_prime, name), rng)
    return TaggedFile(bytes(name), m, blocks, tags, h_prime, h_dprime, sigma_f)


def challenge_gen(params, auditor, k, av_id, m=None, rng=None):
    """Build a challenge over a uniform k-subset of [1, m].

    The audit runs on behalf of the vendor ``av_id``: the blinding values
    beta = e(H1(av_id), h)^lambda and gamma = H1(av_id)^lambda are formed
    from the identity whose key authenticated the audited tags, which is
    exactly what makes the tag-key term cancel during proof checking.  The
    auditor signs the fresh PRF key under its own identity and keeps
    lambda private (stored on the returned object, excluded from the wire
    form).
    """
    ctx = params.ctx
    m = params.m if m is None else m
    if not 1 <= k <= m:
        raise ValueError(f"subset size {k} out of range [1, {m}]")
    if not av_id:
        raise ValueError("vendor identity must be non-empty")
    if rng is None:
        rng = secrets.SystemRandom()
    indices = tuple(sorted(rng.sample(range(1, m + 1), k)))
    k_prf = ctx.random_scalar(rng)
    lam = ctx.random_scalar(rng)
    h1_av = ctx.hash_to_g1(LABEL_H1, av_id)
    big_lambda = ctx.pairing(h1_av, params.h)
    sigma_k = idas.sign(params.idas_params, auditor.sk_sign, ctx.scalar_to_bytes(k_prf), rng)
    nonce = rng.getrandbits(8 * NONCE_BYTES).to_bytes(NONCE_BYTES, "big")
    return Challenge(
        alpha=ctx.g ** lam,
        beta=big_lambda ** lam,
        gamma=h1_av ** lam,
        indices=indices,
        k_prf=k_prf,
        sigma_k=sigma_k,
        challenger_id=auditor.id_es,
        av_id=bytes(av_id),
        nonce=nonce,
        lam=lam,
    )


def verify_challenge(params, ch):
    """Prover-side consistency check of an incoming challenge.

    Accepts iff e(g, gamma) = e(alpha, H1(av_id)), beta = e(gamma, h), and
    the PRF key signature verifies under the challenger identity.
    """
    ctx = params.ctx
    h1_av = ctx.hash_to_g1(LABEL_H1, ch.av_id)
    if ctx.pairing(ctx.g, ch.gamma) != ctx.pairing(ch.alpha, h1_av):
        return False
    if ch.beta != ctx.pairing(ch.gamma, params.h):
        return False
    return idas.verify_single(
        params.idas_params, ch.sigma_k, ch.challenger_id, ctx.scalar_to_bytes(ch.k_prf)
    )


def proof_gen(params, ch, file, cache=(), counter=None):
    """Answer a challenge, reusing cached (phi_i, mu_i) pairs where possible.

    Challenged indices are matched against cache entries in order, first
    match wins, so the reused sets are pairwise disjoint.  Only the fresh
    remainder costs tag exponentiations.  Returns the proof together with
    the cache entry covering the fresh portion (to be stored via
    update_proof).
    """
    ctx = params.ctx
    if not verify_challenge(params, ch):
        raise ChallengeRejectedError("challenge failed its consistency checks")
    for i in ch.indices:
        if not 1 <= i <= file.m:
            raise ValueError(f"challenged index {i} out of range [1, {file.m}]")

    remaining = set(ch.indices)
    phi = ctx.identity()
    mu = 0
    reused = []
    for entry in cache:
        hit = sorted(remaining.intersection(entry.indices).intersection(entry.pairs))
        if not hit:
            continue
        remaining.difference_update(hit)
        for i in hit:
            phi_i, mu_i = entry.pairs[i]
            phi = phi * phi_i
            mu += mu_i
        if counter is not None:
            counter.reused_pairs += len(hit)
        reused.append(ReusedSet(tuple(hit), entry.k_prf, entry.sigma_k, entry.challenger_id))

    fresh = sorted(remaining)
    fresh_pairs = {}
    for i in fresh:
        f_k = ctx.prf_eval(ch.k_prf, i)
        phi_i = file.tags[i - 1] ** f_k
        mu_i = f_k * file.blocks[i - 1] % ctx.p
        phi = phi * phi_i
        mu = (mu + mu_i) % ctx.p
        fresh_pairs[i] = (phi_i, mu_i)
        if counter is not None:
            counter.fresh_exponentiations += 1
    mu %= ctx.p

    m_prime = ctx.pairing(phi, ch.alpha) * (ch.beta ** (-mu))
    proof = IntegrityProof(m_prime, file.h_prime, file.h_dprime, file.sigma_f, reused, ch.nonce)
    r_update = ProofCacheEntry(tuple(fresh), ch.k_prf, ch.sigma_k, ch.challenger_id, fresh_pairs)
    return proof, r_update


def update_proof(cache, r_update, capacity=CACHE_CAPACITY):
    """Append a fresh cache entry, bounded by capacity.

    Entries with no pairs are dropped outright; when full, the entry
    covering the fewest indices is evicted first.
    """
    cache = list(cache)
    if not r_update.pairs:
        return cache
    cache.append(r_update)
    while len(cache) > capacity:
        cache.remove(min(cache, key=lambda e: len(e.pairs)))
    return cache


def proof_check(params, ch, proof, name, av_id):
    """Auditor-side verdict on an integrity proof; 1 (True) iff all pass:

    (a) sigma_F is a valid signature on h' || name under the vendor id,
    (b) h'' is bound to h' via e(h', h) = e(h'', g),
    (c) the aggregated PRF-key signatures of every reused set verify,
    (d) H3(m') matches H3 of the expected value rebuilt from H2 hashes,
        the per-set PRF keys and the challenger's private lambda.
    """
    ctx = params.ctx
    if ch.lam is None:
        raise ValueError("proof_check requires the challenger-private lambda")
    if proof.nonce != ch.nonce or ch.av_id != av_id:
        return False

    # reused-set hygiene: subsets of I, pairwise disjoint
    challenged = set(ch.indices)
    seen = set()
    for rs in proof.reused:
        idx = set(rs.indices)
        if not idx or not idx.issubset(challenged) or idx & seen:
            return False
        seen |= idx

    # (a)
    if not idas.verify_single(
        params.idas_params, proof.sigma_f, av_id, _sigma_f_msg(ctx, proof.h_prime, name)
    ):
        return False
    # (b)
    if ctx.pairing(proof.h_prime, params.h) != ctx.pairing(proof.h_dprime, ctx.g):
        return False
    # (c)
    if proof.reused:
        agg = idas.aggregate(params.idas_params, [rs.sigma_k for rs in proof.reused])
        ids = [rs.challenger_id for rs in proof.reused]
        msgs = [ctx.scalar_to_bytes(rs.k_prf) for rs in proof.reused]
        if not idas.verify(params.idas_params, agg, ids, msgs):
            return False
    # (d)
    hd_bytes = ctx.g1_to_bytes(proof.h_dprime)
    acc = ctx.identity()
    for rs in proof.reused:
        for i in rs.indices:
            base = ctx.hash_to_g1(LABEL_H2, _h2_input(name, hd_bytes, i, ctx))
            acc = acc * (base ** ctx.prf_eval(rs.k_prf, i))
    for i in sorted(challenged - seen):
        base = ctx.hash_to_g1(LABEL_H2, _h2_input(name, hd_bytes, i, ctx))
        acc = acc * (base ** ctx.prf_eval(ch.k_prf, i))
    expected = ctx.pairing(acc, proof.h_prime ** ch.lam)
    return ctx.hash_gt_to_bytes(proof.m_prime) == ctx.hash_gt_to_bytes(expected)


def repair(params, auditor, av_id, name, source, rng=None):
    """Produce a verified replica copy for re-installation.

    The source must pass a fresh full-coverage audit; returns a deep copy
    of the source replica, or raises CorruptSourceError.
    """
    if source.name != name:
        raise ValueError("source replica is for a different file")
    ch = challenge_gen(params, auditor, source.m, av_id, m=source.m, rng=rng)
    proof, _ = proof_gen(params, ch, source)
    if not proof_check(params, ch, proof, name, av_id):
        raise CorruptSourceError(f"replica for {name!r} failed its audit")
    return TaggedFile(
        name=source.name,
        m=source.m,
        blocks=list(source.blocks),
        tags=list(source.tags),
        h_prime=source.h_prime,
        h_dprime=source.h_dprime,
        sigma_f=source.sigma_f,
    )
