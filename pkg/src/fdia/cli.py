"""Command-line surface.

Subcommands: setup, keygen-av, keygen-es, tag, challenge, prove, verify,
simulate, game-solve, bench.  Exit codes: 0 on success, 1 when a
verification fails, 2 on usage errors.  The FDIA_SEED environment
variable fixes the deterministic seed; a --seed flag overrides it.
"""

import argparse
import os
import random
import sys

from fractions import Fraction

from . import bench, game, protocol, sim, wire

SEED_ENV = "FDIA_SEED"


def _resolve_rng(seed):
    if seed is None:
        seed = os.environ.get(SEED_ENV)
        if seed is None:
            return None
    return random.Random(int(seed))


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    with open(path, "wb") as fh:
        fh.write(data)


def _load_params(path):
    return wire.params_from_bytes(_read(path))


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help=f"deterministic seed (overrides ${SEED_ENV})")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fdia",
        description="Decentralized integrity auditing for edge storage",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate system parameters and the master key")
    p.add_argument("--level", default="std", help="security level preset (toy, std, high)")
    p.add_argument("--m", type=int, default=protocol.DEFAULT_M, help="default blocks per file")
    p.add_argument("--id-star", default=None, help="reserved identifier to embed in params")
    p.add_argument("--params-out", required=True)
    p.add_argument("--msk-out", required=True)
    _add_seed(p)

    for name, help_text in (("keygen-av", "derive the vendor key"),
                            ("keygen-es", "derive an edge-server key")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--params", required=True)
        p.add_argument("--msk", required=True)
        p.add_argument("--id", required=True)
        p.add_argument("--out", required=True)

    p = sub.add_parser("tag", help="encode and tag a file")
    p.add_argument("--params", required=True)
    p.add_argument("--av-key", required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--m", type=int, default=None, help="override the block count")
    p.add_argument("--out", required=True)
    _add_seed(p)

    p = sub.add_parser("challenge", help="create an audit challenge")
    p.add_argument("--params", required=True)
    p.add_argument("--es-key", required=True)
    p.add_argument("--k", type=int, required=True, help="challenged subset size")
    p.add_argument("--av-id", required=True, help="vendor identity the audit runs on behalf of")
    p.add_argument("--m", type=int, default=None, help="block count of the target file")
    p.add_argument("--tag", default=None, help="tag file to take the block count from")
    p.add_argument("--out", required=True)
    p.add_argument("--state-out", required=True, help="private challenger state (keep local)")
    _add_seed(p)

    p = sub.add_parser("prove", help="answer a challenge for a stored file")
    p.add_argument("--params", required=True)
    p.add_argument("--tag", required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--challenge", required=True)
    p.add_argument("--cache", default=None, help="proof cache to reuse")
    p.add_argument("--cache-out", default=None, help="write the updated cache here")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="check an integrity proof")
    p.add_argument("--params", required=True)
    p.add_argument("--challenge", required=True)
    p.add_argument("--state", required=True, help="private challenger state")
    p.add_argument("--proof", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--av-id", required=True)

    p = sub.add_parser("simulate", help="run the audit network simulation")
    p.add_argument("--es-count", type=int, default=4)
    p.add_argument("--files", type=int, default=2)
    p.add_argument("--file-size", default="64:512", help="size range LO:HI in bytes")
    p.add_argument("--mode", default="random", choices=sim.AUDIT_MODES)
    p.add_argument("--period", type=int, default=1)
    p.add_argument("--requests", type=int, default=1)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--corruption-rate", type=float, default=0.0)
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--level", default="toy")
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--cache-capacity", type=int, default=None,
                   help="prover cache entries per file (0 disables reuse)")
    p.add_argument("--events-out", default=None)
    p.add_argument("--summary-out", default=None)
    _add_seed(p)

    p = sub.add_parser("game-solve", help="solve the audit incentive game")
    p.add_argument("--config", default=None, help="key=value payoff file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="set one payoff parameter (repeatable)")
    p.add_argument("--rows-out", default=None, help="write per-profile rows as CSV")

    p = sub.add_parser("bench", help="run the benchmark suite")
    p.add_argument("--level", default="toy")
    p.add_argument("--reps", type=int, default=bench.MIN_REPS)
    p.add_argument("--ops", default=",".join(bench.ALL_OPERATIONS),
                   help="comma-separated operations to measure")
    p.add_argument("--m-grid", default=None, help="comma-separated block counts for tag_gen")
    p.add_argument("--i-grid", default=None, help="comma-separated challenge sizes")
    p.add_argument("--overlap-grid", default=None, help="comma-separated overlap fractions")
    p.add_argument("--overlap-i", type=int, default=None, help="challenge size for overlap runs")
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.add_argument("--size-report", action="store_true",
                   help="print the measured-vs-predicted size table")
    _add_seed(p)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (OSError, ValueError, wire.FormatError) as exc:
        print(f"fdia: error: {exc}", file=sys.stderr)
        return 2
    except protocol.ChallengeRejectedError as exc:
        print(f"fdia: challenge rejected: {exc}", file=sys.stderr)
        return 1
    except protocol.CorruptSourceError as exc:
        print(f"fdia: {exc}", file=sys.stderr)
        return 1


def _dispatch(args):
    handler = {
        "setup": _cmd_setup,
        "keygen-av": _cmd_keygen_av,
        "keygen-es": _cmd_keygen_es,
        "tag": _cmd_tag,
        "challenge": _cmd_challenge,
        "prove": _cmd_prove,
        "verify": _cmd_verify,
        "simulate": _cmd_simulate,
        "game-solve": _cmd_game_solve,
        "bench": _cmd_bench,
    }[args.command]
    return handler(args)


def _cmd_setup(args):
    rng = _resolve_rng(args.seed)
    id_star = bytes.fromhex(args.id_star) if args.id_star else None
    params, msk = protocol.setup(args.level, m=args.m, id_star=id_star, rng=rng)
    _write(args.params_out, wire.params_to_bytes(params))
    _write(args.msk_out, wire.master_key_to_bytes(params, msk))
    print(f"params written to {args.params_out} (level={args.level}, m={args.m})")
    return 0


def _cmd_keygen_av(args):
    params = _load_params(args.params)
    msk = wire.master_key_from_bytes(params, _read(args.msk))
    key = protocol.av_keygen(params, msk, args.id.encode())
    _write(args.out, wire.av_key_to_bytes(params, key))
    print(f"vendor key for {args.id!r} written to {args.out}")
    return 0


def _cmd_keygen_es(args):
    params = _load_params(args.params)
    msk = wire.master_key_from_bytes(params, _read(args.msk))
    key = protocol.es_keygen(params, msk, args.id.encode())
    _write(args.out, wire.es_key_to_bytes(params, key))
    print(f"edge-server key for {args.id!r} written to {args.out}")
    return 0


def _cmd_tag(args):
    params = _load_params(args.params)
    av = wire.av_key_from_bytes(params, _read(args.av_key))
    rng = _resolve_rng(args.seed)
    tagged = protocol.tag_gen(params, av, _read(args.file), args.name.encode(),
                              m=args.m, rng=rng)
    _write(args.out, wire.tag_file_to_bytes(params, tagged))
    print(f"tagged {args.file} as {args.name!r}: m={tagged.m}, tag file {args.out}")
    return 0


def _cmd_challenge(args):
    params = _load_params(args.params)
    es = wire.es_key_from_bytes(params, _read(args.es_key))
    m = args.m
    if m is None and args.tag is not None:
        m = wire.tag_file_from_bytes(params, _read(args.tag)).m
    rng = _resolve_rng(args.seed)
    ch = protocol.challenge_gen(params, es, args.k, args.av_id.encode(), m=m, rng=rng)
    _write(args.out, wire.challenge_to_bytes(params, ch))
    _write(args.state_out, wire.challenge_state_to_bytes(params, ch))
    print(f"challenge over {len(ch.indices)} blocks written to {args.out}; "
          f"private state in {args.state_out}")
    return 0


def _cmd_prove(args):
    params = _load_params(args.params)
    data = _read(args.file)
    tagged = wire.tag_file_from_bytes(params, _read(args.tag))
    tagged.blocks = params.ctx.encode_file_blocks(data, tagged.m)
    ch = wire.challenge_from_bytes(params, _read(args.challenge))
    cache = wire.cache_from_bytes(params, _read(args.cache)) if args.cache else []
    proof, r_update = protocol.proof_gen(params, ch, tagged, cache)
    _write(args.out, wire.proof_to_bytes(params, proof))
    if args.cache_out:
        updated = protocol.update_proof(cache, r_update)
        _write(args.cache_out, wire.cache_to_bytes(params, updated))
    print(f"proof written to {args.out} "
          f"(reused sets: {len(proof.reused)}, fresh blocks: {len(r_update.indices)})")
    return 0


def _cmd_verify(args):
    params = _load_params(args.params)
    ch = wire.challenge_from_bytes(params, _read(args.challenge))
    nonce, lam = wire.challenge_state_from_bytes(params, _read(args.state))
    if nonce != ch.nonce:
        print("fdia: error: state file does not match this challenge", file=sys.stderr)
        return 2
    ch.lam = lam
    proof = wire.proof_from_bytes(params, _read(args.proof))
    verdict = protocol.proof_check(params, ch, proof, args.name.encode(), args.av_id.encode())
    print(f"verdict: {'accept' if verdict else 'reject'}")
    return 0 if verdict else 1


def _cmd_simulate(args):
    lo, _, hi = args.file_size.partition(":")
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, 0))
    config = sim.SimConfig(
        seed=seed,
        es_count=args.es_count,
        file_count=args.files,
        file_size=(int(lo), int(hi or lo)),
        audit_mode=args.mode,
        audit_period=args.period,
        requests_per_round=args.requests,
        challenge_k=args.k,
        corruption_rate=args.corruption_rate,
        rounds=args.rounds,
        level=args.level,
        m=args.m,
    )
    if args.cache_capacity is not None:
        config.cache_capacity = args.cache_capacity
    result = sim.run_simulation(config)
    event_text = "\n".join(sim.event_lines(result.events))
    summary_text = "\n".join(sim.summary_lines(result.summary))
    if args.events_out:
        _write(args.events_out, (event_text + "\n").encode())
    else:
        print(event_text)
    if args.summary_out:
        _write(args.summary_out, (summary_text + "\n").encode())
    else:
        print(summary_text)
    return 0


def _cmd_game_solve(args):
    values = {}
    if args.config:
        with open(args.config) as fh:
            loaded = game.load_payoffs(fh.read())
        values.update({k: getattr(loaded, k) for k in game.PayoffParams.__dataclass_fields__})
    for item in args.set:
        key, _, val = item.partition("=")
        if key not in game.PayoffParams.__dataclass_fields__:
            raise ValueError(f"unknown payoff parameter {key!r}")
        values[key] = Fraction(val)
    if not values:
        raise ValueError("no payoff parameters given (use --config or --set)")
    missing = set(game.PayoffParams.__dataclass_fields__) - set(values)
    if missing:
        raise ValueError(f"missing parameters: {', '.join(sorted(missing))}")
    spec = game.GameSpec(game.PayoffParams(**values))
    print(game.format_report(spec))
    if args.rows_out:
        rows = game.profile_rows(spec)
        lines = ["s_Ar,s_Ag,s_AV,u_Ar,u_Ag,u_AV,is_ne"]
        for row in rows:
            lines.append(f"{row['s_Ar']},{row['s_Ag']},{row['s_AV']},"
                         f"{row['u_Ar']},{row['u_Ag']},{row['u_AV']},{int(row['is_ne'])}")
        _write(args.rows_out, ("\n".join(lines) + "\n").encode())
    return 0


def _cmd_bench(args):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, 0))
    overrides = {}
    if args.m_grid:
        overrides["tag_m_grid"] = tuple(int(x) for x in args.m_grid.split(","))
    if args.i_grid:
        overrides["i_grid"] = tuple(int(x) for x in args.i_grid.split(","))
    if args.overlap_grid:
        overrides["overlap_grid"] = tuple(float(x) for x in args.overlap_grid.split(","))
    if args.overlap_i:
        overrides["overlap_i"] = args.overlap_i
    plan = bench.BenchPlan(
        level=args.level,
        seed=seed,
        reps=args.reps,
        operations=tuple(args.ops.split(",")),
        **overrides,
    )
    records = bench.bench_suite(plan)
    csv_text = bench.to_csv(records)
    if args.out:
        _write(args.out, csv_text.encode())
        print(f"benchmark CSV written to {args.out}")
    else:
        print(csv_text, end="")
    if args.size_report:
        wb_rng = random.Random(seed)
        params, msk = protocol.setup(args.level, m=64, rng=wb_rng)
        av = protocol.av_keygen(params, msk, b"report-av")
        es = protocol.es_keygen(params, msk, b"report-es")
        data = wb_rng.randbytes(64 * params.ctx.block_bytes // 2)
        tagged = protocol.tag_gen(params, av, data, b"report-file", rng=wb_rng)
        ch = protocol.challenge_gen(params, es, 32, b"report-av", rng=wb_rng)
        proof, _ = protocol.proof_gen(params, ch, tagged)
        print(bench.format_size_report(bench.size_report(params, tagged, ch, proof)))
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
