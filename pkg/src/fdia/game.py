"""The three-player audit incentive game.

Players move in order: the auditor edge server (Ar) chooses to audit or
not, the audited edge server (Ag) answers honestly, forges, or stays
silent, and the application vendor (AV) pays, penalizes, or does both.

    S_Ar = {A, N}    S_Ag = {H, F, Na}    S_AV = {Py, Pn, 2P}

Payoffs depend on each player's own move: the auditor earns R_A for
auditing and loses P_N otherwise; the audited server earns R_H for
honesty and loses P_F or P_Na for forging or silence; the vendor gets
U_Py, U_Pn, or their sum.  With all parameters strictly positive the
unique equilibrium is (A, H, 2P): audit, answer honestly, pay and
penalize.

Payoffs are exact rationals so tie detection is exact.  The solver
enumerates the 18 profiles for the simultaneous reading and also walks
the tree backward for the sequential reading.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

PLAYERS = ("Ar", "Ag", "AV")
STRATEGIES = {
    "Ar": ("A", "N"),
    "Ag": ("H", "F", "Na"),
    "AV": ("Py", "Pn", "2P"),
}
PROFILES = tuple(product(STRATEGIES["Ar"], STRATEGIES["Ag"], STRATEGIES["AV"]))


@dataclass(frozen=True)
class PayoffParams:
    """Reward/penalty magnitudes; rewards and penalties must be nonnegative,
    the vendor utilities U_Py and U_Pn may take either sign."""
    R_A: Fraction      # auditor's reward for auditing
    P_N: Fraction      # auditor's penalty for skipping the audit
    R_H: Fraction      # audited server's reward for an honest answer
    P_forge: Fraction  # audited server's penalty for forging a proof
    P_Na: Fraction     # audited server's penalty for not answering
    U_Py: Fraction     # vendor's utility from paying
    U_Pn: Fraction     # vendor's utility from penalizing

    def __post_init__(self):
        for name in ("R_A", "P_N", "R_H", "P_forge", "P_Na", "U_Py", "U_Pn"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        for name in ("R_A", "P_N", "R_H", "P_forge", "P_Na"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class GameSpec:
    payoffs: PayoffParams


def utility(spec, profile):
    """Utility triple (u_Ar, u_Ag, u_AV) for a strategy profile."""
    s_ar, s_ag, s_av = profile
    p = spec.payoffs
    u_ar = p.R_A if s_ar == "A" else -p.P_N
    u_ag = {"H": p.R_H, "F": -p.P_forge, "Na": -p.P_Na}[s_ag]
    u_av = {"Py": p.U_Py, "Pn": p.U_Pn, "2P": p.U_Py + p.U_Pn}[s_av]
    return (u_ar, u_ag, u_av)


def payoff_table(spec):
    """Normal-form table: profile -> utility triple."""
    return {profile: utility(spec, profile) for profile in PROFILES}


def _with(profile, player, strategy):
    n = PLAYERS.index(player)
    return profile[:n] + (strategy,) + profile[n + 1:]


def best_response(spec, player, others):
    """Argmax set of ``player``'s strategies holding the others fixed.

    ``others`` maps the two remaining player names to their strategies.
    Ties return every maximizer.
    """
    table = payoff_table(spec)
    return best_response_table(table, player, others)


def best_response_table(table, player, others):
    n = PLAYERS.index(player)
    base = tuple(others.get(name, STRATEGIES[name][0]) for name in PLAYERS)
    scores = {s: table[_with(base, player, s)][n] for s in STRATEGIES[player]}
    top = max(scores.values())
    return {s for s, v in scores.items() if v == top}


def solve_ne(spec):
    """All pure Nash equilibria by exhaustive enumeration of the 18 profiles."""
    return solve_ne_table(payoff_table(spec))


def solve_ne_table(table):
    """Nash equilibria of an arbitrary payoff table over the fixed profiles:
    a profile survives iff no unilateral deviation improves the deviator."""
    out = set()
    for profile in PROFILES:
        if all(
            table[profile][n] >= table[_with(profile, player, s)][n]
            for n, player in enumerate(PLAYERS)
            for s in STRATEGIES[player]
        ):
            out.add(profile)
    return out


def backward_induction(spec):
    """Equilibrium paths of the sequential game (Ar, then Ag, then AV).

    Ties are resolved every possible way; the returned set contains the
    on-path profile of every such resolution.  With unique best responses
    this is a single profile and always a Nash equilibrium of the
    simultaneous game.
    """
    table = payoff_table(spec)
    av_nodes = list(product(STRATEGIES["Ar"], STRATEGIES["Ag"]))
    av_best = {
        (a, g): [av for av in STRATEGIES["AV"]
                 if table[(a, g, av)][2] == max(table[(a, g, x)][2] for x in STRATEGIES["AV"])]
        for (a, g) in av_nodes
    }
    outcomes = set()
    for av_pick in product(*(av_best[node] for node in av_nodes)):
        av_choice = dict(zip(av_nodes, av_pick))
        ag_best = {}
        for a in STRATEGIES["Ar"]:
            vals = {g: table[(a, g, av_choice[(a, g)])][1] for g in STRATEGIES["Ag"]}
            top = max(vals.values())
            ag_best[a] = [g for g, v in vals.items() if v == top]
        for ag_pick in product(*(ag_best[a] for a in STRATEGIES["Ar"])):
            ag_choice = dict(zip(STRATEGIES["Ar"], ag_pick))
            vals = {a: table[(a, ag_choice[a], av_choice[(a, ag_choice[a])])][0]
                    for a in STRATEGIES["Ar"]}
            top = max(vals.values())
            for a in (a for a, v in vals.items() if v == top):
                g = ag_choice[a]
                outcomes.add((a, g, av_choice[(a, g)]))
    return outcomes


@dataclass
class IncentiveReport:
    is_ne: bool              # (A, H, 2P) is an equilibrium
    unique: bool             # ... and the only one
    ties: list               # human-readable tie descriptions
    equilibria: list         # sorted equilibrium profiles

    def __str__(self):
        lines = [
            "audit incentive check: target profile (A, H, 2P)",
            f"  equilibrium: {'yes' if self.is_ne else 'NO'}",
            f"  unique:      {'yes' if self.unique else 'no'}",
        ]
        for t in self.ties:
            lines.append(f"  tie: {t}")
        lines.append(f"  all equilibria: {', '.join(map(str, self.equilibria))}")
        return "\n".join(lines)


def validate_incentive(spec):
    """Report whether (A, H, 2P) is the equilibrium and which parameter
    ties, if any, keep it from being unique."""
    p = spec.payoffs
    equilibria = solve_ne(spec)
    target = ("A", "H", "2P")
    ties = []
    if p.R_A + p.P_N == 0:
        ties.append("Ar indifferent between A and N (R_A + P_N = 0)")
    if p.R_H + p.P_forge == 0:
        ties.append("Ag indifferent between H and F (R_H + P_forge = 0)")
    if p.R_H + p.P_Na == 0:
        ties.append("Ag indifferent between H and Na (R_H + P_Na = 0)")
    if p.U_Pn <= 0:
        ties.append("AV does not strictly prefer 2P over Py (U_Pn <= 0)")
    if p.U_Py <= 0:
        ties.append("AV does not strictly prefer 2P over Pn (U_Py <= 0)")
    return IncentiveReport(
        is_ne=target in equilibria,
        unique=equilibria == {target},
        ties=ties,
        equilibria=sorted(equilibria),
    )


def load_payoffs(text):
    """Parse key=value lines (R_A=3, U_Py=5/2, ...) into PayoffParams.

    Blank lines and lines starting with '#' are ignored; values may be
    integers, fractions like 5/2, or decimal strings.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in PayoffParams.__dataclass_fields__:
            raise ValueError(f"line {lineno}: unknown parameter {key!r}")
        values[key] = Fraction(val.strip())
    missing = set(PayoffParams.__dataclass_fields__) - set(values)
    if missing:
        raise ValueError(f"missing parameters: {', '.join(sorted(missing))}")
    return PayoffParams(**values)


def profile_rows(spec):
    """Machine-readable solver output: one row per profile with strategies,
    utilities and the equilibrium flag."""
    equilibria = solve_ne(spec)
    rows = []
    for profile in PROFILES:
        u = utility(spec, profile)
        rows.append({
            "s_Ar": profile[0],
            "s_Ag": profile[1],
            "s_AV": profile[2],
            "u_Ar": u[0],
            "u_Ag": u[1],
            "u_AV": u[2],
            "is_ne": profile in equilibria,
        })
    return rows


def format_report(spec):
    """Human-readable equilibrium report with the full profile table."""
    lines = [str(validate_incentive(spec)), "", "profile table:"]
    header = f"{'Ar':>3} {'Ag':>3} {'AV':>3} {'u_Ar':>8} {'u_Ag':>8} {'u_AV':>8}  NE"
    lines.append(header)
    for row in profile_rows(spec):
        lines.append(
            f"{row['s_Ar']:>3} {row['s_Ag']:>3} {row['s_AV']:>3}"
            f" {str(row['u_Ar']):>8} {str(row['u_Ag']):>8} {str(row['u_AV']):>8}"
            f"  {'*' if row['is_ne'] else ''}"
        )
    bi = backward_induction(spec)
    lines.append("")
    lines.append(f"backward induction (sequential play): {', '.join(map(str, sorted(bi)))}")
    return "\n".join(lines)
