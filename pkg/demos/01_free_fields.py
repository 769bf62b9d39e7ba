"""
Free fermions, ghosts and Wick contractions
===========================================

Every operator is a sum of normal-ordered monomials in psi_+-, beta_+- with
coefficients that are exact rational functions of the rank N.
"""

from superspin.expressions import beta, derivative, psi
from superspin.sugawara import build_T, central_charge, conformal_weight
from superspin.wick import normal_product, ope

# the only singular pairings: one pole, a Kronecker delta, and a sign for ghosts
print(ope(psi("-", "i"), psi("+", "j")))
print(ope(beta("-", "i"), beta("+", "j")))

# derivatives of the propagator: d_z d_w 1/(z-w) = -2/(z-w)^3
print(ope(derivative(psi("-", 1)), derivative(psi("+", 1))))

# the point-splitting product picks up Taylor terms when a composite meets a contraction
print(normal_product(psi("+", 1) * beta("+", 1), psi("-", 1)))

T = build_T("free")
print("T_free =", T)
for f in (psi("+", "i"), beta("-", "i")):
    print(f, "has weight", conformal_weight(T, f))
print("c =", central_charge(T))
