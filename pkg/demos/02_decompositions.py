"""
Splitting the free stress tensor
================================

The free tensor equals a supercurrent Sugawara tensor plus a level-zero
bosonic one, as an identity in N.
"""

from superspin.algebras import check_mutual_commute, gl11_multiplet, osp22_multiplet
from superspin.expressions import psi
from superspin.sugawara import FAMILY_SECTORS, build_T, conformal_weight, decomposition_report

for family, (sup, bos) in FAMILY_SECTORS.items():
    print(decomposition_report(family).to_json())
    f = psi("+", "i")
    print(
        f"  weights: free {conformal_weight(build_T('free'), f)}"
        f" = {sup} {conformal_weight(build_T(sup), f)} + {bos} {conformal_weight(build_T(bos), f)}"
    )

print("T_gl11 =", build_T("gl11"))

# the two sectors do not talk to each other
print("su currents vs gl(1|1):", check_mutual_commute("su", gl11_multiplet()))
print("so currents vs osp(2|2):", check_mutual_commute("so", osp22_multiplet()))
