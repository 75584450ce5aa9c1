"""Three ways of choosing the area element, and what they disagree about.

At leading order in d/a every choice gives the same force.  At the next
order each one picks up its own coefficient eta in F/F0 = 1 + eta d/a.  We
compute the three electrostatic and three Casimir coefficients numerically
and compare the electrostatic ones with the exact force.

Run:  python3 demos/02_proximity_schemes.py
"""

from cylcasimir.pfa import Interaction, PfaScheme, eta_estimate, exact_pfa_ratio, pfa_ratio

print("coefficient of d/a in F/F0")
for interaction in Interaction:
    for scheme in PfaScheme:
        eta = eta_estimate(scheme, interaction)
        print(f"  {interaction.value:<14} {scheme.value:<15} {eta.value:+.5f}  (+- {eta.est_error:.1e})")
print("  the exact electrostatic force has -1/12 = -0.08333, between the schemes")

print("\nd/a     plane     cylinder  geo-mean  exact     (electrostatic)")
for x in (1e-3, 1e-2, 0.05, 0.1, 0.3):
    row = [pfa_ratio(x, s, Interaction.ELECTROSTATIC) for s in PfaScheme]
    print(f"{x:<7g} " + "  ".join(f"{r:.5f}" for r in row) + f"  {exact_pfa_ratio(x):.5f}")

print("\nThe Casimir integrand is more sharply peaked, so its schemes stay closer together:")
for x in (1e-2, 0.1, 0.3):
    row = [pfa_ratio(x, s, Interaction.CASIMIR) for s in PfaScheme]
    print(f"  d/a = {x:<5g} spread = {max(row) - min(row):.4f}")
