"""
Density-of-states exponents
===========================

Gamma is read off twice: from the kinetic prefactor of the surviving
supercurrent tensor and from the double pole of T and Tbar on rho.
"""

from superspin.sugawara import build_T, density_double_pole, dos_exponents, kappa_kinetic

print("kappa(gl11) =", kappa_kinetic(build_T("gl11")))
kz, kzb = density_double_pole(build_T("gl11"))
print(f"double poles on rho: {kz} (z), {kzb} (zbar)")

for family in ("su", "so", "sp"):
    r = dos_exponents(family)
    print(f"{family}: Gamma = {r.gamma}, nu = {r.nu}, routes agree: {r.routes_agree}")

print("su(2):", dos_exponents("su").eval(2))
print("sp(2):", dos_exponents("sp").eval(1))
print("so(3):", dos_exponents("so").eval(3))
