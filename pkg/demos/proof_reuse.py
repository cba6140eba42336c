"""Show the proof cache cutting repeat-audit cost.

A prover remembers every (phi_i, mu_i) pair it has already computed.
When later challenges overlap earlier ones, only the fresh remainder
costs tag exponentiations.
Run:  python demos/proof_reuse.py
"""

import random
import time

import fdia

rng = random.Random(7)
params, msk = fdia.setup("toy", m=256, rng=rng)
av = fdia.av_keygen(params, msk, b"vendor")
es = fdia.es_keygen(params, msk, b"edge-1")
data = rng.randbytes(256 * params.ctx.block_bytes // 2)
tagged = fdia.tag_gen(params, av, data, b"big-file", rng=rng)
print(f"tagged a {tagged.m}-block file")

cache = []
print(f"\n{'round':>5} {'|I|':>5} {'fresh':>6} {'reused':>7} {'time':>9}  verdict")
for rnd in range(6):
    ch = fdia.challenge_gen(params, es, 128, b"vendor", rng=rng)
    counter = fdia.OpCounter()
    t0 = time.perf_counter()
    proof, r_update = fdia.proof_gen(params, ch, tagged, cache, counter=counter)
    dt = time.perf_counter() - t0
    cache = fdia.update_proof(cache, r_update)
    ok = fdia.proof_check(params, ch, proof, b"big-file", b"vendor")
    print(f"{rnd:>5} {len(ch.indices):>5} {counter.fresh_exponentiations:>6} "
          f"{counter.reused_pairs:>7} {dt * 1e3:>7.1f}ms  {'accept' if ok else 'reject'}")

covered = set()
for entry in cache:
    covered |= set(entry.indices)
print(f"\ncache now covers {len(covered)}/{tagged.m} blocks "
      f"across {len(cache)} entries; fresh work shrinks as coverage grows")
