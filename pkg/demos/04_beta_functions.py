"""
One-loop running of the current-current couplings
=================================================

The 1/(z zbar) entries of the pairwise OPEs are resolved back onto the
perturbing operators; beta_k = -sum C^k_ij g_i g_j.
"""

from superspin.sugawara import beta_one_loop, perturbing_operators

for family in ("su", "so"):
    print(beta_one_loop(family))
    print()

# the perturbing operators themselves
for name, op in perturbing_operators("su").items():
    print(name, "has", len(op), "terms")
