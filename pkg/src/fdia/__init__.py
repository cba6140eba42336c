"""Decentralized integrity auditing for edge storage.

Edge servers audit each other's cached replicas with a pairing-based
challenge/proof protocol, reuse previously proven blocks to cut repeat
audit cost, bind keys and tags with identity-based aggregate signatures,
and are kept honest by a three-player incentive game whose equilibrium
is (Audit, Honest, Pay&Penalize).

Typical flow:

    >>> import fdia
    >>> params, msk = fdia.setup("toy", m=16)
    >>> av = fdia.av_keygen(params, msk, b"vendor")
    >>> es = fdia.es_keygen(params, msk, b"edge-1")
    >>> tagged = fdia.tag_gen(params, av, b"hello world", b"greeting")
    >>> ch = fdia.challenge_gen(params, es, 8, b"vendor")
    >>> proof, r_update = fdia.proof_gen(params, ch, tagged)
    >>> fdia.proof_check(params, ch, proof, b"greeting", b"vendor")
    True
"""

from .curve import InvalidPointError
from .groups import GroupContext, G1Element, GtElement
from .protocol import (
    AvKey,
    CACHE_CAPACITY,
    Challenge,
    ChallengeRejectedError,
    CorruptSourceError,
    DEFAULT_M,
    EsKey,
    IntegrityProof,
    MasterKey,
    OpCounter,
    ProofCacheEntry,
    ReusedSet,
    SystemParams,
    TaggedFile,
    av_keygen,
    challenge_gen,
    es_keygen,
    proof_check,
    proof_gen,
    repair,
    setup,
    tag_gen,
    update_proof,
    verify_challenge,
)
from .game import GameSpec, PayoffParams, backward_induction, solve_ne, utility, validate_incentive
from .sim import AuditEvent, EsNode, SimConfig, SimResult, detection_probability, run_simulation

__version__ = "0.1.0"
