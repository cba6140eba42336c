"""Solve the audit incentive game for a few payoff settings.

Three players move in turn: the auditor edge server (audit or not), the
audited edge server (honest, forge, or silent), the vendor (pay,
penalize, or both).  With every reward and penalty strictly positive the
unique equilibrium is (A, H, 2P): servers audit, answer honestly, and
the vendor both pays and penalizes.
Run:  python demos/incentive_game.py
"""

from fdia.game import GameSpec, PayoffParams, backward_induction, format_report, validate_incentive

print("== healthy incentives ==")
spec = GameSpec(PayoffParams(R_A=3, P_N=1, R_H=2, P_forge=5, P_Na=4, U_Py=2, U_Pn=1))
print(format_report(spec))

print("\n\n== what if penalizing is worthless to the vendor? (U_Pn = 0) ==")
spec = GameSpec(PayoffParams(R_A=3, P_N=1, R_H=2, P_forge=5, P_Na=4, U_Py=2, U_Pn=0))
print(validate_incentive(spec))

print("\n\n== what if honesty goes unrewarded and forging unpunished? ==")
spec = GameSpec(PayoffParams(R_A=3, P_N=1, R_H=0, P_forge=0, P_Na=4, U_Py=2, U_Pn=1))
print(validate_incentive(spec))
print("sequential play outcomes:", sorted(backward_induction(spec)))
