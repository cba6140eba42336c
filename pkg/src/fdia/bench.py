"""Benchmark harness and storage-size report.

Measures the protocol operations over parameter grids and emits one CSV
row per (operation, parameter point).  All numbers are medians of at
least 30 repetitions with warm-up discarded; assertions made downstream
are trend and ratio claims, never absolute times, so results are
meaningful on any host.

CSV schema (fixed): operation, m, I_size, overlap, N, median_ns,
payload_bytes.
"""

import gc
import random
import statistics
import time

from dataclasses import dataclass
from typing import Tuple

from . import idas, protocol, wire

CSV_COLUMNS = ("operation", "m", "I_size", "overlap", "N", "median_ns", "payload_bytes")

ALL_OPERATIONS = ("tag_gen", "challenge_gen", "proof_gen", "proof_check", "sizes")

MIN_REPS = 30


@dataclass
class BenchRecord:
    operation: str
    m: int
    i_size: int
    overlap: float
    n_files: int
    median_ns: int
    payload_bytes: int


@dataclass
class BenchPlan:
    level: str = "toy"
    seed: int = 0
    reps: int = MIN_REPS
    warmup: int = 3
    tag_m_grid: Tuple[int, ...] = (100, 200, 400, 800)
    i_grid: Tuple[int, ...] = (200, 400, 600, 800)
    overlap_grid: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)
    overlap_i: int = 400
    operations: Tuple[str, ...] = ALL_OPERATIONS

    def validate(self):
        if self.reps < MIN_REPS:
            raise ValueError(f"need at least {MIN_REPS} repetitions for stable medians")
        unknown = set(self.operations) - set(ALL_OPERATIONS)
        if unknown:
            raise ValueError(f"unknown operations: {sorted(unknown)}")
        if self.overlap_i > max(self.i_grid):
            raise ValueError("overlap_i exceeds the largest challenge size")
        for s in self.overlap_grid:
            if not 0 <= s <= 1:
                raise ValueError("overlap fractions must be in [0, 1]")


def _timed_median_grid(fns, reps, warmup):
    """Median wall time in ns for each keyed callable, single-threaded.

    Grid points are sampled round-robin rather than in blocks, so clock
    drift and frequency scaling spread evenly over the whole grid instead
    of biasing individual points.  GC is paused during timed sections.
    """
    keys = list(fns)
    for _ in range(warmup):
        for key in keys:
            fns[key]()
    samples = {key: [] for key in keys}
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(reps):
            for key in keys:
                t0 = time.perf_counter_ns()
                fns[key]()
                samples[key].append(time.perf_counter_ns() - t0)
    finally:
        if was_enabled:
            gc.enable()
    return {key: int(statistics.median(v)) for key, v in samples.items()}


def _timed_median(fn, reps, warmup):
    return _timed_median_grid({0: fn}, reps, warmup)[0]


class _Workbench:
    """Lazily built shared fixtures for one benchmark run."""

    def __init__(self, plan):
        self.plan = plan
        self.rng = random.Random(plan.seed)
        self.bench_m = max(plan.i_grid)
        self.params, self.msk = protocol.setup(plan.level, m=self.bench_m, rng=self.rng)
        self.av = protocol.av_keygen(self.params, self.msk, b"bench-av")
        self.es = protocol.es_keygen(self.params, self.msk, b"bench-es")
        self._tagged = None

    def data_for(self, m):
        return self.rng.randbytes(max(1, m * self.params.ctx.block_bytes // 2))

    @property
    def tagged(self):
        if self._tagged is None:
            self._tagged = protocol.tag_gen(
                self.params, self.av, self.data_for(self.bench_m), b"bench-file",
                m=self.bench_m, rng=self.rng,
            )
        return self._tagged

    def synthetic_cache(self, ch, count):
        """One honest cache entry covering ``count`` of the challenged indices,
        as if those blocks had been proven under an earlier challenge."""
        if count == 0:
            return []
        ctx = self.params.ctx
        covered = sorted(self.rng.sample(ch.indices, count))
        k_old = ctx.random_scalar(self.rng)
        sigma = idas.sign(
            self.params.idas_params, self.es.sk_sign, ctx.scalar_to_bytes(k_old), self.rng
        )
        pairs = {}
        for i in covered:
            f_k = ctx.prf_eval(k_old, i)
            pairs[i] = (self.tagged.tags[i - 1] ** f_k,
                        f_k * self.tagged.blocks[i - 1] % ctx.p)
        return [protocol.ProofCacheEntry(tuple(covered), k_old, sigma, self.es.id_es, pairs)]


def bench_suite(plan=None):
    """Run the plan and return records, one per (operation, grid point)."""
    plan = plan or BenchPlan()
    plan.validate()
    wb = _Workbench(plan)
    params = wb.params
    records = []

    if "tag_gen" in plan.operations:
        datasets = {m: wb.data_for(m) for m in plan.tag_m_grid}
        medians = _timed_median_grid({
            m: (lambda m=m: protocol.tag_gen(params, wb.av, datasets[m], b"t", m=m, rng=wb.rng))
            for m in plan.tag_m_grid
        }, plan.reps, plan.warmup)
        for m in plan.tag_m_grid:
            tagged = protocol.tag_gen(params, wb.av, datasets[m], b"t", m=m, rng=wb.rng)
            payload = len(wire.tag_file_to_bytes(params, tagged))
            records.append(BenchRecord("tag_gen", m, 0, 0.0, 1, medians[m], payload))

    if "challenge_gen" in plan.operations:
        medians = _timed_median_grid({
            k: (lambda k=k: protocol.challenge_gen(params, wb.es, k, b"bench-av", rng=wb.rng))
            for k in plan.i_grid
        }, plan.reps, plan.warmup)
        for k in plan.i_grid:
            ch = protocol.challenge_gen(params, wb.es, k, b"bench-av", rng=wb.rng)
            payload = wire.challenge_payload_bytes(params, ch)
            records.append(BenchRecord("challenge_gen", wb.bench_m, k, 0.0, 1, medians[k], payload))

    if "proof_gen" in plan.operations:
        rounds = {}
        for s in plan.overlap_grid:
            ch = protocol.challenge_gen(params, wb.es, plan.overlap_i, b"bench-av", rng=wb.rng)
            rounds[s] = (ch, wb.synthetic_cache(ch, int(s * plan.overlap_i)))
        medians = _timed_median_grid({
            s: (lambda s=s: protocol.proof_gen(params, rounds[s][0], wb.tagged, rounds[s][1]))
            for s in plan.overlap_grid
        }, plan.reps, plan.warmup)
        for s in plan.overlap_grid:
            ch, cache = rounds[s]
            proof, _ = protocol.proof_gen(params, ch, wb.tagged, cache)
            payload = len(wire.proof_to_bytes(params, proof))
            records.append(
                BenchRecord("proof_gen", wb.bench_m, plan.overlap_i, float(s), 1,
                            medians[s], payload)
            )

    if "proof_check" in plan.operations:
        rounds = {}
        for k in plan.i_grid:
            ch = protocol.challenge_gen(params, wb.es, k, b"bench-av", rng=wb.rng)
            proof, _ = protocol.proof_gen(params, ch, wb.tagged)
            rounds[k] = (ch, proof)
        medians = _timed_median_grid({
            k: (lambda k=k: protocol.proof_check(
                params, rounds[k][0], rounds[k][1], b"bench-file", b"bench-av"))
            for k in plan.i_grid
        }, plan.reps, plan.warmup)
        for k in plan.i_grid:
            payload = wire.proof_payload_bytes(params, rounds[k][1])
            records.append(BenchRecord("proof_check", wb.bench_m, k, 0.0, 1, medians[k], payload))

    if "sizes" in plan.operations:
        for m in plan.tag_m_grid:
            tagged = protocol.tag_gen(params, wb.av, wb.data_for(m), b"t", m=m, rng=wb.rng)
            records.append(BenchRecord(
                "tag_file_size", m, 0, 0.0, 1, 0, len(wire.tag_file_to_bytes(params, tagged))
            ))
        for k in plan.i_grid:
            ch = protocol.challenge_gen(params, wb.es, k, b"bench-av", rng=wb.rng)
            records.append(BenchRecord(
                "challenge_payload", wb.bench_m, k, 0.0, 1, 0,
                wire.challenge_payload_bytes(params, ch),
            ))
            proof, _ = protocol.proof_gen(params, ch, wb.tagged)
            records.append(BenchRecord(
                "proof_payload", wb.bench_m, k, 0.0, 1, 0,
                wire.proof_payload_bytes(params, proof),
            ))
    return records


def to_csv(records):
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(
            f"{r.operation},{r.m},{r.i_size},{r.overlap},{r.n_files},{r.median_ns},{r.payload_bytes}"
        )
    return "\n".join(lines) + "\n"


def parse_csv(text):
    lines = text.strip().splitlines()
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    records = []
    for line in lines[1:]:
        op, m, i_size, overlap, n, ns, payload = line.split(",")
        records.append(BenchRecord(op, int(m), int(i_size), float(overlap), int(n),
                                   int(ns), int(payload)))
    return records


# --- storage-size closed forms ---

@dataclass
class SizeRow:
    artifact: str
    measured: int
    expected: int
    formula: str

    @property
    def ok(self):
        return self.measured == self.expected


def size_report(params, tagged, ch, proof):
    """Exact measured-vs-predicted byte sizes for the serialized artifacts.

    The predictions are the closed forms in terms of the element widths
    l_G (group), l_GT (target group), l_Z (scalar) and l_S = 2*l_G
    (signature), plus the documented gamma/h'' extras; any mismatch shows
    up as a failed row.
    """
    ctx = params.ctx
    l_g, l_gt, l_z = ctx.g1_bytes, ctx.gt_bytes, ctx.scalar_bytes
    l_s = 2 * l_g
    rows = []

    tag_const = 5 + 4 + len(tagged.name) + 4 + 2 * l_g + l_s  # header/name/m + h', h'', sigma_F
    rows.append(SizeRow(
        "tag_file",
        len(wire.tag_file_to_bytes(params, tagged)),
        tagged.m * l_g + tag_const,
        f"m*l_G + C_tag (C_tag = {tag_const}: header, name, m, h', h'', sigma_F)",
    ))
    rows.append(SizeRow(
        "challenge_payload",
        wire.challenge_payload_bytes(params, ch),
        2 * l_g + l_s + l_z + l_g,
        "2*l_G + l_S + l_Z plus l_G for gamma (beta compresses to l_G width)",
    ))
    rows.append(SizeRow(
        "proof_payload",
        wire.proof_payload_bytes(params, proof),
        l_g + l_s + l_g + l_gt,
        "l_G + l_S plus l_G for h'' and l_GT for m'",
    ))
    rows.append(SizeRow(
        "challenge_full",
        len(wire.challenge_to_bytes(params, ch)),
        (2 * l_g + l_s + l_z + l_g) + 6 + protocol.NONCE_BYTES
        + 4 + len(ch.challenger_id) + 4 + len(ch.av_id) + 4 + 4 * len(ch.indices),
        "payload + header + nonce + both identities + 4 bytes per challenged index",
    ))
    return rows


def format_size_report(rows):
    lines = [f"{'artifact':<20} {'measured':>9} {'expected':>9}  ok  formula"]
    for r in rows:
        lines.append(f"{r.artifact:<20} {r.measured:>9} {r.expected:>9}  {'y' if r.ok else 'N'}  {r.formula}")
    return "\n".join(lines)
