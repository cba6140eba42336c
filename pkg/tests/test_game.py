import random

from fractions import Fraction

import pytest

from fdia import game
from fdia.game import GameSpec, PayoffParams, PLAYERS, PROFILES, STRATEGIES


def spec_of(**kw):
    base = dict(R_A=1, P_N=1, R_H=1, P_forge=1, P_Na=1, U_Py=1, U_Pn=1)
    base.update(kw)
    return GameSpec(PayoffParams(**base))


def brute_force_ne(table):
    """Oracle: check the no-profitable-deviation definition directly."""
    out = set()
    for profile in PROFILES:
        ok = True
        for n, player in enumerate(PLAYERS):
            for s in STRATEGIES[player]:
                alt = profile[:n] + (s,) + profile[n + 1:]
                if table[alt][n] > table[profile][n]:
                    ok = False
        if ok:
            out.add(profile)
    return out


# --- utilities ---

def test_utility_equilibrium_profile():
    spec = spec_of(R_A=5, R_H=3, U_Py=2, U_Pn=4)
    assert game.utility(spec, ("A", "H", "2P")) == (5, 3, 6)


def test_utility_defection_profile():
    spec = spec_of(P_N=2, P_Na=7, U_Pn=4)
    assert game.utility(spec, ("N", "Na", "Pn")) == (-2, -7, 4)


def test_utility_zero_game():
    spec = spec_of(R_A=0, P_N=0, R_H=0, P_forge=0, P_Na=0, U_Py=0, U_Pn=0)
    for profile in PROFILES:
        assert game.utility(spec, profile) == (0, 0, 0)


def test_payoffs_reject_negative_penalties():
    with pytest.raises(ValueError):
        PayoffParams(R_A=1, P_N=-1, R_H=1, P_forge=1, P_Na=1, U_Py=1, U_Pn=1)
    with pytest.raises(ValueError):
        PayoffParams(R_A=-1, P_N=1, R_H=1, P_forge=1, P_Na=1, U_Py=1, U_Pn=1)


def test_payoffs_are_exact_fractions():
    p = PayoffParams(R_A="1/3", P_N=0, R_H=1, P_forge=1, P_Na=1, U_Py=1, U_Pn=1)
    assert p.R_A == Fraction(1, 3)


# --- best responses ---

def test_best_response_auditor():
    spec = spec_of(R_A=5, P_N=2)
    assert game.best_response(spec, "Ar", {"Ag": "H", "AV": "Py"}) == {"A"}


def test_best_response_full_tie():
    spec = spec_of(R_H=0, P_forge=0, P_Na=0)
    assert game.best_response(spec, "Ag", {"Ar": "A", "AV": "2P"}) == {"H", "F", "Na"}


def test_best_response_vendor():
    spec = spec_of(U_Py=3, U_Pn=4)
    assert game.best_response(spec, "AV", {"Ar": "A", "Ag": "H"}) == {"2P"}


# --- equilibria ---

def test_unique_equilibrium_strictly_positive():
    assert game.solve_ne(spec_of()) == {("A", "H", "2P")}


def test_zero_game_all_profiles_are_equilibria():
    spec = spec_of(R_A=0, P_N=0, R_H=0, P_forge=0, P_Na=0, U_Py=0, U_Pn=0)
    assert game.solve_ne(spec) == set(PROFILES)


def test_auditor_tie_doubles_equilibria():
    spec = spec_of(R_A=0, P_N=0)
    assert game.solve_ne(spec) == {("A", "H", "2P"), ("N", "H", "2P")}


def test_solver_agrees_with_brute_force_oracle():
    rng = random.Random(42)
    for _ in range(25):
        spec = spec_of(**{
            k: Fraction(rng.randrange(0, 6), rng.randrange(1, 4))
            for k in ("R_A", "P_N", "R_H", "P_forge", "P_Na", "U_Py", "U_Pn")
        })
        table = game.payoff_table(spec)
        assert game.solve_ne(spec) == brute_force_ne(table)


def test_every_reported_equilibrium_survives_deviations():
    spec = spec_of(R_A=2, P_N=0, U_Py=5)
    table = game.payoff_table(spec)
    for profile in game.solve_ne(spec):
        for n, player in enumerate(PLAYERS):
            for s in STRATEGIES[player]:
                alt = profile[:n] + (s,) + profile[n + 1:]
                assert table[alt][n] <= table[profile][n]


# --- backward induction ---

def test_backward_induction_unique_case():
    assert game.backward_induction(spec_of()) == {("A", "H", "2P")}


def test_backward_induction_subset_of_ne_when_unique():
    rng = random.Random(17)
    for _ in range(20):
        spec = spec_of(**{
            k: Fraction(rng.randrange(1, 9)) for k in
            ("R_A", "P_N", "R_H", "P_forge", "P_Na", "U_Py", "U_Pn")
        })
        bi = game.backward_induction(spec)
        assert bi == {("A", "H", "2P")}
        assert bi <= game.solve_ne(spec)


def test_backward_induction_constant_game_reaches_everything():
    spec = spec_of(R_A=0, P_N=0, R_H=0, P_forge=0, P_Na=0, U_Py=0, U_Pn=0)
    assert game.backward_induction(spec) == set(PROFILES)


# --- affine invariance ---

def rescaled(table, scales, shifts):
    return {
        profile: tuple(scales[n] * u + shifts[n] for n, u in enumerate(us))
        for profile, us in table.items()
    }


def test_affine_rescaling_preserves_equilibria():
    rng = random.Random(8)
    spec = spec_of(R_A=2, U_Py=3, U_Pn=1)
    table = game.payoff_table(spec)
    reference = game.solve_ne_table(table)
    for _ in range(20):
        scales = [Fraction(rng.randrange(1, 20), rng.randrange(1, 10)) for _ in range(3)]
        shifts = [Fraction(rng.randrange(-30, 30)) for _ in range(3)]
        assert game.solve_ne_table(rescaled(table, scales, shifts)) == reference


# --- incentive report ---

def test_validate_incentive_all_positive():
    report = game.validate_incentive(spec_of())
    assert report.is_ne and report.unique and report.ties == []


def test_validate_incentive_flags_vendor_tie():
    report = game.validate_incentive(spec_of(U_Pn=0))
    assert report.is_ne and not report.unique
    assert any("2P over Py" in t for t in report.ties)
    assert ("A", "H", "Py") in report.equilibria


def test_validate_incentive_flags_forge_tie():
    report = game.validate_incentive(spec_of(R_H=0, P_forge=0))
    assert report.is_ne and not report.unique
    assert any("H and F" in t for t in report.ties)


# --- config parsing and reports ---

def test_load_payoffs():
    text = """
    # audit game parameters
    R_A = 3
    P_N = 1
    R_H = 5/2
    P_forge = 2
    P_Na = 2
    U_Py = 1.5
    U_Pn = 1
    """
    p = game.load_payoffs(text)
    assert p.R_H == Fraction(5, 2)
    assert p.U_Py == Fraction(3, 2)


def test_load_payoffs_errors():
    with pytest.raises(ValueError):
        game.load_payoffs("R_A=1")  # missing the rest
    with pytest.raises(ValueError):
        game.load_payoffs("bogus=1\nR_A=1\nP_N=1\nR_H=1\nP_forge=1\nP_Na=1\nU_Py=1\nU_Pn=1")
    with pytest.raises(ValueError):
        game.load_payoffs("no equals sign here")


def test_profile_rows_schema():
    rows = game.profile_rows(spec_of())
    assert len(rows) == 18
    flagged = [r for r in rows if r["is_ne"]]
    assert len(flagged) == 1
    assert (flagged[0]["s_Ar"], flagged[0]["s_Ag"], flagged[0]["s_AV"]) == ("A", "H", "2P")


def test_format_report_mentions_equilibrium():
    text = game.format_report(spec_of())
    assert "('A', 'H', '2P')" in text
    assert "backward induction" in text
