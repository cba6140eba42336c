import os

import pytest

from fdia import cli, wire
from fdia.bench import parse_csv


def run_cli(argv):
    return cli.main(argv)


@pytest.fixture()
def deployment(tmp_path):
    """Files for a complete CLI round: params, keys, data, tag."""
    paths = {
        "params": tmp_path / "params.fdia",
        "msk": tmp_path / "msk.fdia",
        "av": tmp_path / "av.key",
        "es": tmp_path / "es.key",
        "data": tmp_path / "data.bin",
        "tag": tmp_path / "tagged.fdia",
        "ch": tmp_path / "challenge.fdia",
        "state": tmp_path / "challenge.state",
        "proof": tmp_path / "proof.fdia",
        "cache": tmp_path / "cache.fdia",
    }
    paths["data"].write_bytes(os.urandom(120))
    assert run_cli([
        "setup", "--level", "toy", "--m", "16", "--seed", "9",
        "--params-out", str(paths["params"]), "--msk-out", str(paths["msk"]),
    ]) == 0
    assert run_cli([
        "keygen-av", "--params", str(paths["params"]), "--msk", str(paths["msk"]),
        "--id", "vendor", "--out", str(paths["av"]),
    ]) == 0
    assert run_cli([
        "keygen-es", "--params", str(paths["params"]), "--msk", str(paths["msk"]),
        "--id", "edge-1", "--out", str(paths["es"]),
    ]) == 0
    assert run_cli([
        "tag", "--params", str(paths["params"]), "--av-key", str(paths["av"]),
        "--file", str(paths["data"]), "--name", "report", "--out", str(paths["tag"]),
        "--seed", "10",
    ]) == 0
    return paths


def _challenge(paths, seed="11"):
    return run_cli([
        "challenge", "--params", str(paths["params"]), "--es-key", str(paths["es"]),
        "--k", "6", "--av-id", "vendor", "--tag", str(paths["tag"]),
        "--out", str(paths["ch"]), "--state-out", str(paths["state"]), "--seed", seed,
    ])


def _prove(paths, with_cache=False):
    argv = [
        "prove", "--params", str(paths["params"]), "--tag", str(paths["tag"]),
        "--file", str(paths["data"]), "--challenge", str(paths["ch"]),
        "--out", str(paths["proof"]),
    ]
    if with_cache:
        argv += ["--cache-out", str(paths["cache"])]
        if paths["cache"].exists():
            argv += ["--cache", str(paths["cache"])]
    return run_cli(argv)


def _verify(paths):
    return run_cli([
        "verify", "--params", str(paths["params"]), "--challenge", str(paths["ch"]),
        "--state", str(paths["state"]), "--proof", str(paths["proof"]),
        "--name", "report", "--av-id", "vendor",
    ])


def test_full_round_trip_exits_zero(deployment):
    assert _challenge(deployment) == 0
    assert _prove(deployment) == 0
    assert _verify(deployment) == 0


def test_cache_flow(deployment):
    assert _challenge(deployment, seed="21") == 0
    assert _prove(deployment, with_cache=True) == 0
    assert deployment["cache"].exists()
    assert _challenge(deployment, seed="22") == 0
    assert _prove(deployment, with_cache=True) == 0
    assert _verify(deployment) == 0


def test_corrupted_data_fails_verification(deployment):
    # flip every byte so each block differs; any challenged index catches it
    assert _challenge(deployment) == 0
    blob = deployment["data"].read_bytes()
    deployment["data"].write_bytes(bytes(b ^ 0xFF for b in blob))
    assert _prove(deployment) == 0
    assert _verify(deployment) == 1


def test_corrupted_tag_file_fails_verification(deployment):
    # rotate the tag list by one slot: still parseable, every tag wrong
    params = wire.params_from_bytes(deployment["params"].read_bytes())
    blob = bytearray(deployment["tag"].read_bytes())
    width = params.ctx.g1_bytes
    start = len(blob) - 16 * width
    tags = blob[start:]
    blob[start:] = tags[width:] + tags[:width]
    deployment["tag"].write_bytes(bytes(blob))
    assert _challenge(deployment) == 0
    assert _prove(deployment) == 0
    assert _verify(deployment) == 1


def test_unknown_flag_is_usage_error(deployment):
    with pytest.raises(SystemExit) as exc:
        run_cli(["setup", "--frobnicate"])
    assert exc.value.code == 2


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli(["dance"])
    assert exc.value.code == 2


def test_missing_file_is_usage_error(tmp_path):
    assert run_cli([
        "keygen-av", "--params", str(tmp_path / "absent.fdia"),
        "--msk", str(tmp_path / "absent2.fdia"), "--id", "x",
        "--out", str(tmp_path / "out"),
    ]) == 2


def test_state_challenge_mismatch_is_error(deployment, tmp_path):
    assert _challenge(deployment, seed="31") == 0
    old_state = deployment["state"].read_bytes()
    assert _prove(deployment) == 0
    assert _challenge(deployment, seed="32") == 0  # new challenge, new state
    deployment["state"].write_bytes(old_state)
    assert _prove(deployment) == 0
    assert _verify(deployment) == 2


def test_simulate_deterministic_output(tmp_path, capsys):
    argv = ["simulate", "--seed", "4", "--es-count", "2", "--files", "1",
            "--rounds", "2", "--k", "4", "--m", "8", "--level", "toy"]
    assert run_cli(argv) == 0
    first = capsys.readouterr().out
    assert run_cli(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "round=0" in first
    assert "audits=" in first


def test_simulate_env_seed(tmp_path, capsys, monkeypatch):
    # corruption timing depends on the seed, so verdicts expose which seed ran
    monkeypatch.setenv(cli.SEED_ENV, "77")
    argv = ["simulate", "--es-count", "2", "--files", "1", "--rounds", "3",
            "--k", "4", "--m", "4", "--corruption-rate", "0.6"]
    assert run_cli(argv) == 0
    first = capsys.readouterr().out
    monkeypatch.setenv(cli.SEED_ENV, "78")
    assert run_cli(argv) == 0
    assert capsys.readouterr().out != first


def test_game_solve_from_flags(capsys):
    argv = ["game-solve"] + sum(
        [["--set", f"{k}=1"] for k in
         ("R_A", "P_N", "R_H", "P_forge", "P_Na", "U_Py", "U_Pn")], [])
    assert run_cli(argv) == 0
    out = capsys.readouterr().out
    assert "('A', 'H', '2P')" in out


def test_game_solve_from_config(tmp_path, capsys):
    cfg = tmp_path / "game.cfg"
    cfg.write_text("R_A=3\nP_N=1\nR_H=2\nP_forge=4\nP_Na=4\nU_Py=2\nU_Pn=1\n")
    rows = tmp_path / "rows.csv"
    assert run_cli(["game-solve", "--config", str(cfg), "--rows-out", str(rows)]) == 0
    lines = rows.read_text().splitlines()
    assert lines[0] == "s_Ar,s_Ag,s_AV,u_Ar,u_Ag,u_AV,is_ne"
    assert len(lines) == 19
    assert sum(line.endswith(",1") for line in lines[1:]) == 1


def test_game_solve_requires_parameters():
    assert run_cli(["game-solve"]) == 2


def test_bench_quick_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert run_cli([
        "bench", "--level", "toy", "--reps", "30", "--seed", "2",
        "--m-grid", "4,8", "--i-grid", "2,4", "--overlap-grid", "0,1",
        "--overlap-i", "4", "--out", str(out),
    ]) == 0
    records = parse_csv(out.read_text())
    assert any(r.operation == "challenge_gen" for r in records)


def test_bench_size_report(capsys):
    assert run_cli([
        "bench", "--level", "toy", "--reps", "30", "--seed", "2",
        "--ops", "sizes", "--m-grid", "4", "--i-grid", "2",
        "--overlap-i", "2", "--size-report",
    ]) == 0
    out = capsys.readouterr().out
    assert "tag_file" in out
    assert "challenge_payload" in out
