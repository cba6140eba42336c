"""Deterministic in-process simulation of the mutual-auditing network.

One application vendor tags a set of files and distributes replicas to
every edge server; servers then audit each other on a schedule (fixed
ring rotation, uniform random pairing, or explicit vendor requests),
corruption is injected at a configurable rate, failed audits trigger
repair from the lowest-id healthy replica.

Everything is driven by a single seeded RNG, so identical configs yield
byte-identical event logs.  All protocol messages between simulated nodes
pass through the real wire codecs, so format regressions surface here.
"""

import math
import random

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from . import protocol, wire

AUDIT_MODES = ("periodic", "random", "on_request")


@dataclass
class SimConfig:
    seed: int = 0
    es_count: int = 4
    file_count: int = 2
    file_size: Tuple[int, int] = (64, 512)  # bytes, inclusive range
    audit_mode: str = "random"
    audit_period: int = 1          # rounds between ring audits (periodic mode)
    requests_per_round: int = 1    # vendor requests per round (on_request mode)
    challenge_k: int = 8
    corruption_rate: float = 0.0   # per ES per round
    rounds: int = 10
    level: str = "toy"
    m: int = 16                    # blocks per file
    cache_capacity: int = protocol.CACHE_CAPACITY

    def validate(self):
        if self.es_count < 2:
            raise ValueError("need at least two edge servers")
        if self.file_count < 1:
            raise ValueError("need at least one file")
        if not 0 <= self.corruption_rate <= 1:
            raise ValueError("corruption_rate must be in [0, 1]")
        if self.audit_mode not in AUDIT_MODES:
            raise ValueError(f"audit_mode must be one of {AUDIT_MODES}")
        if not 1 <= self.challenge_k <= self.m:
            raise ValueError("challenge_k must be in [1, m]")
        if self.audit_period < 1 or self.requests_per_round < 1:
            raise ValueError("audit_period and requests_per_round must be positive")
        if self.rounds < 0:
            raise ValueError("rounds must be nonnegative")
        if self.cache_capacity < 0:
            raise ValueError("cache_capacity must be nonnegative")
        if not 0 < self.file_size[0] <= self.file_size[1]:
            raise ValueError("file_size must be a positive (lo, hi) range")


@dataclass
class EsNode:
    params: protocol.SystemParams
    key: protocol.EsKey
    replicas: Dict[bytes, protocol.TaggedFile] = field(default_factory=dict)
    caches: Dict[bytes, list] = field(default_factory=dict)
    # injection bookkeeping only; node logic never reads it
    _pristine: Dict[tuple, int] = field(default_factory=dict)

    @property
    def id(self):
        return self.key.id_es


@dataclass
class AuditEvent:
    round: int
    auditor_id: bytes
    auditing_id: bytes
    name: bytes
    verdict: bool
    detected_corruption: bool
    repair_triggered: bool


@dataclass
class SimResult:
    events: List[AuditEvent]
    summary: Dict[str, object]


def detection_probability(m, k, corrupted_blocks):
    """Exact probability that a uniform k-subset of [1, m] hits at least one
    of ``corrupted_blocks`` corrupted indices: 1 - C(m-c, k) / C(m, k)."""
    if not 1 <= k <= m:
        raise ValueError("k must be in [1, m]")
    if not 0 <= corrupted_blocks <= m:
        raise ValueError("corrupted_blocks must be in [0, m]")
    return 1 - Fraction(math.comb(m - corrupted_blocks, k), math.comb(m, k))


def inject_corruption(node, name, block_index, rng=None):
    """Silently alter one block of a cached replica.

    The new value is always different from the pristine one, even across
    repeated injections at the same index.  The node is not informed.
    """
    replica = node.replicas.get(name)
    if replica is None:
        raise ValueError(f"node {node.id!r} does not hold {name!r}")
    if not 1 <= block_index <= replica.m:
        raise ValueError("block index out of range")
    p = node.params.ctx.p
    pristine = node._pristine.setdefault((name, block_index), replica.blocks[block_index - 1])
    delta = rng.randrange(1, p) if rng is not None else 1
    replica.blocks[block_index - 1] = (pristine + delta) % p


class _Sim:
    def __init__(self, config):
        config.validate()
        self.cfg = config
        self.rng = random.Random(config.seed)
        self.params, msk = protocol.setup(config.level, m=config.m, rng=self.rng)
        self.av_id = b"av"
        self.av_key = protocol.av_keygen(self.params, msk, self.av_id)
        self.nodes = []
        for i in range(config.es_count):
            key = protocol.es_keygen(self.params, msk, b"es-%d" % i)
            self.nodes.append(EsNode(self.params, key))
        self.names = []
        self._distribute_files()
        # ground truth: (node index, name) -> {block index: round injected}
        self.corrupted: Dict[tuple, Dict[int, int]] = {}
        self.events: List[AuditEvent] = []
        self.stats = dict(
            audits=0, accepts=0, rejects=0, repairs=0, repair_failures=0,
            false_accepts=0, false_rejects=0, cache_masked_accepts=0,
            corruptions_injected=0,
        )
        self.latencies: List[int] = []

    def _distribute_files(self):
        cfg = self.cfg
        for fi in range(cfg.file_count):
            name = b"file-%d" % fi
            size = self.rng.randint(*cfg.file_size)
            size = min(size, cfg.m * self.params.ctx.block_bytes)
            data = self.rng.randbytes(size)
            tagged = protocol.tag_gen(self.params, self.av_key, data, name, rng=self.rng)
            tag_wire = wire.tag_file_to_bytes(self.params, tagged)
            block_wire = wire.blocks_to_bytes(self.params.ctx, tagged.blocks)
            for node in self.nodes:
                blocks = wire.blocks_from_bytes(self.params.ctx, block_wire)
                node.replicas[name] = wire.tag_file_from_bytes(self.params, tag_wire, blocks)
                node.caches[name] = []
            self.names.append(name)

    # --- per-round phases ---

    def corrupt_phase(self, rnd):
        for ni, node in enumerate(self.nodes):
            if self.rng.random() < self.cfg.corruption_rate:
                name = self.rng.choice(self.names)
                idx = self.rng.randint(1, node.replicas[name].m)
                inject_corruption(node, name, idx, self.rng)
                self.corrupted.setdefault((ni, name), {}).setdefault(idx, rnd)
                self.stats["corruptions_injected"] += 1

    def schedule(self, rnd):
        """Yield (auditor index, target index, file name) audit assignments."""
        cfg = self.cfg
        n = len(self.nodes)
        if cfg.audit_mode == "random":
            for ai in range(n):
                ti = self.rng.choice([x for x in range(n) if x != ai])
                yield ai, ti, self.rng.choice(self.names)
        elif cfg.audit_mode == "periodic":
            if rnd % cfg.audit_period == 0:
                name = self.names[(rnd // cfg.audit_period) % len(self.names)]
                for ai in range(n):
                    yield ai, (ai + 1) % n, name
        else:  # on_request
            for _ in range(cfg.requests_per_round):
                ai = self.rng.randrange(n)
                ti = self.rng.choice([x for x in range(n) if x != ai])
                yield ai, ti, self.rng.choice(self.names)

    def run_audit(self, rnd, ai, ti, name):
        auditor, target = self.nodes[ai], self.nodes[ti]
        replica = target.replicas[name]
        k = min(self.cfg.challenge_k, replica.m)
        ch = protocol.challenge_gen(self.params, auditor.key, k, self.av_id, m=replica.m, rng=self.rng)
        # the prover sees the wire form (no lambda)
        ch_wire = wire.challenge_from_bytes(self.params, wire.challenge_to_bytes(self.params, ch))
        proof, r_update = protocol.proof_gen(self.params, ch_wire, replica, target.caches[name])
        target.caches[name] = protocol.update_proof(
            target.caches[name], r_update, self.cfg.cache_capacity
        )
        proof = wire.proof_from_bytes(self.params, wire.proof_to_bytes(self.params, proof))
        verdict = protocol.proof_check(self.params, ch, proof, name, self.av_id)

        self.stats["audits"] += 1
        bad = self.corrupted.get((ti, name), {})
        hit_fresh, hit_cached = self._classify_hits(ch, proof, bad)
        repair_done = False
        if verdict:
            self.stats["accepts"] += 1
            if hit_fresh:
                self.stats["false_accepts"] += 1
            elif hit_cached:
                self.stats["cache_masked_accepts"] += 1
        else:
            self.stats["rejects"] += 1
            if not bad:
                self.stats["false_rejects"] += 1
            else:
                self.latencies.append(rnd - min(bad.values()))
            repair_done = self.repair(rnd, ai, ti, name)
        self.events.append(AuditEvent(
            round=rnd, auditor_id=auditor.id, auditing_id=target.id, name=name,
            verdict=verdict, detected_corruption=not verdict, repair_triggered=repair_done,
        ))

    def _classify_hits(self, ch, proof, bad):
        reused = set().union(*proof.reused_sets) if proof.reused else set()
        challenged = set(ch.indices)
        hit_fresh = bool(bad.keys() & (challenged - reused))
        hit_cached = bool(bad.keys() & challenged & reused)
        return hit_fresh, hit_cached

    def repair(self, rnd, ai, ti, name):
        """Re-install a verified replica from the lowest-id healthy node."""
        auditor, target = self.nodes[ai], self.nodes[ti]
        for si, source in enumerate(self.nodes):
            if si == ti:
                continue
            try:
                fixed = protocol.repair(
                    self.params, auditor.key, self.av_id, name,
                    source.replicas[name], rng=self.rng,
                )
            except protocol.CorruptSourceError:
                continue
            tag_wire = wire.tag_file_to_bytes(self.params, fixed)
            block_wire = wire.blocks_to_bytes(self.params.ctx, fixed.blocks)
            blocks = wire.blocks_from_bytes(self.params.ctx, block_wire)
            target.replicas[name] = wire.tag_file_from_bytes(self.params, tag_wire, blocks)
            target.caches[name] = []  # stale pairs may reference pre-repair block values
            self.corrupted.pop((ti, name), None)
            for key in [k for k in target._pristine if k[0] == name]:
                del target._pristine[key]
            self.stats["repairs"] += 1
            return True
        self.stats["repair_failures"] += 1
        return False

    def run(self):
        for rnd in range(self.cfg.rounds):
            self.corrupt_phase(rnd)
            for ai, ti, name in self.schedule(rnd):
                self.run_audit(rnd, ai, ti, name)
        return SimResult(self.events, self._summary())

    def _summary(self):
        s = dict(self.stats)
        s["rounds"] = self.cfg.rounds
        s["es_count"] = self.cfg.es_count
        s["files"] = self.cfg.file_count
        lat = sorted(self.latencies)
        s["detections"] = len(lat)
        if lat:
            s["latency_min"] = lat[0]
            s["latency_median"] = lat[len(lat) // 2]
            s["latency_max"] = lat[-1]
        return s


def run_simulation(config):
    """Run the audit network simulation; returns events plus a summary."""
    return _Sim(config).run()


def detection_frequency(m, k, corrupted_blocks, trials, seed=0, level="toy"):
    """Empirical single-replica detection rate through the real protocol.

    Each trial corrupts ``corrupted_blocks`` random blocks of a fresh copy
    and runs one full cache-less audit round; returns the detected
    fraction.  Should track detection_probability(m, k, corrupted_blocks).
    """
    rng = random.Random(seed)
    params, msk = protocol.setup(level, m=m, rng=rng)
    av = protocol.av_keygen(params, msk, b"av")
    auditor = protocol.es_keygen(params, msk, b"auditor")
    data = rng.randbytes(m * params.ctx.block_bytes // 2 + 1)
    tagged = protocol.tag_gen(params, av, data, b"probe", rng=rng)
    p = params.ctx.p
    detected = 0
    for _ in range(trials):
        victim = protocol.TaggedFile(
            tagged.name, tagged.m, list(tagged.blocks), tagged.tags,
            tagged.h_prime, tagged.h_dprime, tagged.sigma_f,
        )
        for idx in rng.sample(range(1, m + 1), corrupted_blocks):
            victim.blocks[idx - 1] = (victim.blocks[idx - 1] + rng.randrange(1, p)) % p
        ch = protocol.challenge_gen(params, auditor, k, b"av", m=m, rng=rng)
        proof, _ = protocol.proof_gen(params, ch, victim)
        if not protocol.proof_check(params, ch, proof, b"probe", b"av"):
            detected += 1
    return detected / trials


# --- stable text output ---

def event_lines(events):
    """Line-delimited audit records, one event per line."""
    for e in events:
        yield (
            f"round={e.round}"
            f" auditor={e.auditor_id.decode('latin-1')}"
            f" auditing={e.auditing_id.decode('latin-1')}"
            f" file={e.name.decode('latin-1')}"
            f" verdict={int(e.verdict)}"
            f" detected={int(e.detected_corruption)}"
            f" repair={int(e.repair_triggered)}"
        )


def summary_lines(summary):
    """key=value block, sorted for stability."""
    return [f"{k}={summary[k]}" for k in sorted(summary)]
