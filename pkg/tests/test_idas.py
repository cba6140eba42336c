import random

import pytest

from fdia import idas
from fdia.groups import LABEL_HSIG


@pytest.fixture(scope="module")
def scheme(ctx):
    rng = random.Random(99)
    params, msk = idas.setup(ctx, rng)
    return params, msk, rng


def test_setup_distinct_master_keys(ctx):
    rng = random.Random(3)
    pks = {ctx.g1_to_bytes(idas.setup(ctx, rng)[0].pk_sign) for _ in range(100)}
    assert len(pks) == 100


def test_setup_pk_well_formed(scheme, ctx):
    params, msk, _ = scheme
    assert ctx.curve.in_subgroup(params.pk_sign.point)
    assert not params.pk_sign.is_identity()
    assert ctx.pairing(ctx.g ** msk.z_s, ctx.g) == ctx.pairing(ctx.g, ctx.g) ** msk.z_s


def test_keygen_defining_equation(scheme, ctx):
    params, msk, _ = scheme
    key = idas.keygen(params, msk, b"user-7")
    assert ctx.pairing(key.sk, ctx.g) == ctx.pairing(
        ctx.hash_to_g1(LABEL_HSIG, b"user-7"), params.pk_sign
    )


def test_keygen_deterministic_and_separating(scheme, ctx):
    params, msk, rng = scheme
    assert idas.keygen(params, msk, b"same") == idas.keygen(params, msk, b"same")
    sks = set()
    for i in range(100):
        sks.add(ctx.g1_to_bytes(idas.keygen(params, msk, b"id-%d" % i).sk))
    assert len(sks) == 100


def test_keygen_rejects_empty_identity(scheme):
    params, msk, _ = scheme
    with pytest.raises(ValueError):
        idas.keygen(params, msk, b"")


def test_sign_verify_roundtrip(scheme):
    params, msk, rng = scheme
    key = idas.keygen(params, msk, b"signer")
    sig = idas.sign(params, key, b"a message", rng)
    assert idas.verify_single(params, sig, b"signer", b"a message")


def test_verify_rejects_flipped_message_bits(scheme, rng):
    params, msk, _ = scheme
    key = idas.keygen(params, msk, b"signer")
    for _ in range(100):
        msg = bytearray(rng.randbytes(rng.randrange(1, 32)))
        sig = idas.sign(params, key, bytes(msg), rng)
        pos = rng.randrange(len(msg))
        msg[pos] ^= 1 << rng.randrange(8)
        assert not idas.verify_single(params, sig, b"signer", bytes(msg))


def test_verify_rejects_wrong_identity(scheme, rng):
    params, msk, _ = scheme
    key = idas.keygen(params, msk, b"signer")
    for i in range(20):
        sig = idas.sign(params, key, b"msg", rng)
        assert not idas.verify_single(params, sig, b"someone-else-%d" % i, b"msg")


def test_aggregate_single_matches_individual(scheme, rng):
    params, msk, _ = scheme
    key = idas.keygen(params, msk, b"solo")
    sig = idas.sign(params, key, b"m", rng)
    agg = idas.aggregate(params, [sig])
    assert idas.verify(params, agg, [b"solo"], [b"m"])
    bad = idas.IdasSignature(sig.u, sig.v * params.ctx.g)
    assert not idas.verify(params, idas.aggregate(params, [bad]), [b"solo"], [b"m"])


def _signed_batch(params, msk, rng, n):
    ids, msgs, sigs = [], [], []
    for i in range(n):
        ident = b"agg-%d-%d" % (n, i)
        key = idas.keygen(params, msk, ident)
        msg = rng.randbytes(12)
        ids.append(ident)
        msgs.append(msg)
        sigs.append(idas.sign(params, key, msg, rng))
    return ids, msgs, sigs


def test_aggregate_of_five_verifies(scheme, rng):
    params, msk, _ = scheme
    ids, msgs, sigs = _signed_batch(params, msk, rng, 5)
    assert all(idas.verify_single(params, s, i, m) for s, i, m in zip(sigs, ids, msgs))
    assert idas.verify(params, idas.aggregate(params, sigs), ids, msgs)


def test_aggregate_with_forged_member_rejected(scheme, rng):
    params, msk, _ = scheme
    ids, msgs, sigs = _signed_batch(params, msk, rng, 5)
    sigs[2] = idas.IdasSignature(sigs[2].u, sigs[2].v * params.ctx.g)
    assert not idas.verify(params, idas.aggregate(params, sigs), ids, msgs)


def test_aggregate_oracle_equivalence(scheme, rng):
    # aggregate verdict == conjunction of individual verdicts, sets of size <= 8
    params, msk, _ = scheme
    for trial in range(20):
        n = rng.randrange(1, 9)
        ids, msgs, sigs = _signed_batch(params, msk, rng, n)
        if trial % 2:
            victim = rng.randrange(n)
            sigs[victim] = idas.IdasSignature(sigs[victim].u ** 2, sigs[victim].v)
        individual = all(
            idas.verify_single(params, s, i, m) for s, i, m in zip(sigs, ids, msgs)
        )
        joint = idas.verify(params, idas.aggregate(params, sigs), ids, msgs)
        assert joint == individual


def test_verify_rejects_permuted_pairs(scheme, rng):
    params, msk, _ = scheme
    ids, msgs, sigs = _signed_batch(params, msk, rng, 4)
    agg = idas.aggregate(params, sigs)
    swapped = [ids[1], ids[0]] + ids[2:]
    assert not idas.verify(params, agg, swapped, msgs)


def test_verify_deterministic(scheme, rng):
    params, msk, _ = scheme
    ids, msgs, sigs = _signed_batch(params, msk, rng, 3)
    agg = idas.aggregate(params, sigs)
    assert idas.verify(params, agg, ids, msgs) == idas.verify(params, agg, ids, msgs)


def test_empty_aggregate_and_length_mismatch(scheme, rng):
    params, msk, _ = scheme
    with pytest.raises(ValueError):
        idas.aggregate(params, [])
    ids, msgs, sigs = _signed_batch(params, msk, rng, 2)
    agg = idas.aggregate(params, sigs)
    with pytest.raises(ValueError):
        idas.verify(params, agg, [], [])
    with pytest.raises(ValueError):
        idas.verify(params, agg, ids[:1], msgs)


def test_tamper_sensitivity_fuzz(scheme, rng):
    # flipping any component of an honest aggregate flips acceptance
    params, msk, _ = scheme
    ctx = params.ctx
    for trial in range(20):
        n = rng.randrange(1, 5)
        ids, msgs, sigs = _signed_batch(params, msk, rng, n)
        agg = idas.aggregate(params, sigs)
        kind = trial % 4
        j = rng.randrange(n)
        if kind == 0:
            msgs = list(msgs)
            msgs[j] = msgs[j] + b"!"
        elif kind == 1:
            ids = list(ids)
            ids[j] = ids[j] + b"x"
        elif kind == 2:
            agg = idas.AggregateSignature(agg.v_agg * ctx.g, agg.commitments)
        else:
            commits = list(agg.commitments)
            commits[j] = commits[j] * ctx.g
            agg = idas.AggregateSignature(agg.v_agg, tuple(commits))
        assert not idas.verify(params, agg, ids, msgs)
