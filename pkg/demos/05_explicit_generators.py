"""
Explicit generators as an independent check
===========================================

Exact Hermitian matrices for su(n), so(n) and sp(2n) at small rank.  Sums
over the algebra run over the matrices directly, with no completeness rule.
"""

from superspin import oracle
from superspin.sugawara import build_T, free_tensor

for family, n in (("su", 3), ("so", 4), ("sp", 1)):
    basis = oracle.generator_basis(family, n)
    k = oracle.casimir_constants(basis)
    print(f"{family} n={n}: dim {k.dimension}, C2(G) = {k.casimir2_adjoint}, "
          f"completeness {oracle.completeness_numeric(family, n)}")

# the symbolic identity, expanded over explicit flavors
residual = free_tensor() - build_T("gl11").expr - build_T("su0").expr
print("expanded residual at N = 3:", oracle.expand_flavors(residual, 3))

# the symplectic split is only checked here
for n in (1, 2):
    print(f"sp({2 * n}) decomposition:", oracle.numeric_verify_sp(n))
print("with a wrong adjoint Casimir:", oracle.numeric_verify_sp(1, casimir2_adjoint=5))

for name, ok in oracle.equivalence_checks("so", 3).items():
    print(f"  {'ok' if ok else 'FAIL'}  {name}")
