from math import factorial

from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import field_symbols, homogeneous_operators
from superspin.algebras import casimir_bilocal, gl11_multiplet
from superspin.expressions import (
    ANTI,
    BETA,
    HOL,
    PSI,
    FieldSymbol,
    Monomial,
    OperatorExpr,
    beta,
    derivative,
    formal_product,
    mirror,
    psi,
)
from superspin.scalars import N
from superspin.sugawara import free_tensor
from superspin.wick import (
    contraction_value,
    count_matchings,
    graded_symmetry_check,
    iter_matchings,
    normal_product,
    ope,
    propagator_sign,
)

# <a(z) b(w)> = sign * delta / (z - w), typed in by hand from the free-field propagators
PROPAGATOR_TABLE = {
    (PSI, -1, PSI, 1): 1,
    (PSI, 1, PSI, -1): 1,
    (BETA, 1, BETA, -1): 1,
    (BETA, -1, BETA, 1): -1,
}


def sym(species, charge, index=1, chirality=HOL, deriv=0):
    return FieldSymbol(chirality, species, charge, deriv, index)


def test_fermion_pole():
    l = ope(psi("-", "i"), psi("+", "j"))
    assert l.pole_coeff(1, 0) == OperatorExpr.delta("i", "j")
    assert set(l.singular()) == {(1, 0)}


def test_like_charges_are_regular():
    l = ope(psi("+", "i"), psi("+", "j"))
    assert l.is_regular()
    assert l.pole_coeff(0, 0) == formal_product(psi("+", "i"), psi("+", "j"))
    assert l.pole_coeff(1, 0) == 0


def test_ghost_poles():
    assert ope(beta("+", 1), beta("-", 1)).pole_coeff(1, 0) == 1
    assert ope(beta("-", 1), beta("+", 1)).pole_coeff(1, 0) == -1
    assert ope(beta("-", 1), beta("+", 2)).is_regular()


def test_antiholomorphic_pole_lands_in_q():
    l = ope(psi("-", 1, chirality=ANTI), psi("+", 1, chirality=ANTI))
    assert l.pole_coeff(0, 1) == 1 and l.pole_coeff(1, 0) == 0


def test_mixed_chiralities_never_contract():
    assert ope(psi("-", 1), psi("+", 1, chirality=ANTI)).is_regular()


def test_derivative_rule():
    # d_z d_w 1/(z-w) = -2/(z-w)^3
    l = ope(derivative(psi("-", 1)), derivative(psi("+", 1)))
    assert l.pole_coeff(3, 0) == -2
    # d_w^2 1/(z-w) = 2/(z-w)^3
    assert ope(psi("-", 1), derivative(psi("+", 1), order=2)).pole_coeff(3, 0) == 2


def test_free_tensor_weights_and_central_charge():
    T = free_tensor()
    for f in (psi("+", "i"), psi("-", "i"), beta("+", "i"), beta("-", "i")):
        l = ope(T, f, depth=None)
        assert l.pole_coeff(2, 0) == f * (N / N / 2)
        assert l.pole_coeff(1, 0) == derivative(f)
    assert ope(T, T, orders={(4, 0)}).pole_coeff(4, 0) == 0


def test_su_fermion_bilocal_level():
    b = casimir_bilocal("su", "fermion")
    total = b.contract(ope(b.left, b.right, orders={(2, 0)}).pole_coeff(2, 0))
    assert total == N**2 - 1  # level 1 times dim su(N)


def test_normal_product_identity_and_taylor():
    a = psi("+", 1) * 3
    assert normal_product(OperatorExpr.identity(), a) == a
    # psi_+(z) psi_-(w) = 1/(z-w) + :psi_+ psi_-:(w) + (z-w) ...; the (0,0) part has no scalar
    np = normal_product(psi("+", 1), psi("-", 1))
    assert np == formal_product(psi("+", 1), psi("-", 1))
    # Taylor terms appear when a composite is split against a contraction
    np3 = normal_product(formal_product(psi("+", 1), beta("+", 1)), psi("-", 1))
    assert np3 == formal_product(formal_product(psi("+", 1), beta("+", 1)), psi("-", 1)) + derivative(beta("+", 1))


def test_graded_symmetry_examples():
    assert graded_symmetry_check(psi("-", "i"), psi("+", "j"))
    m = gl11_multiplet()
    assert graded_symmetry_check(m["H"], m["J"])
    assert graded_symmetry_check(m["S+"], m["S-"])
    T = free_tensor()
    assert graded_symmetry_check(T, T)


def test_depth_truncation():
    T = free_tensor()
    shallow = ope(T, psi("+", 1), depth=0)
    assert all(p >= 0 for p, _ in shallow.coeffs)
    assert shallow.pole_coeff(2, 0) == ope(T, psi("+", 1), depth=None).pole_coeff(2, 0)


def test_json_records_are_deterministic():
    l = ope(free_tensor(), psi("+", 1))
    assert l.to_json() == ope(free_tensor(), psi("+", 1)).to_json()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6))
def test_matching_count(s, t):
    ms = list(iter_matchings(s, t))
    assert len(ms) == count_matchings(s, t) == len(set(ms))


@settings(max_examples=200, deadline=None)
@given(field_symbols(indices=st.just(1), max_deriv=2), field_symbols(indices=st.just(1), max_deriv=2))
def test_propagator_table(a, b):
    key = (a.species, a.charge, b.species, b.charge)
    expected = PROPAGATOR_TABLE.get(key, 0) if a.chirality == b.chirality else 0
    assert propagator_sign(a, b) == expected
    const, pole = contraction_value(a, b)
    if expected:
        assert (const, pole) == (expected * (-1) ** a.deriv * factorial(a.deriv + b.deriv), a.deriv + b.deriv + 1)
    else:
        assert const == 0


@settings(max_examples=150, deadline=None)
@given(homogeneous_operators(), homogeneous_operators())
def test_graded_symmetry_property(a, b):
    assert graded_symmetry_check(a, b)


@settings(max_examples=100, deadline=None)
@given(homogeneous_operators(), homogeneous_operators(), homogeneous_operators())
def test_bilinearity(a, b, c):
    assert ope(a + b, c, depth=None) == _sum(ope(a, c, depth=None), ope(b, c, depth=None))


@settings(max_examples=100, deadline=None)
@given(homogeneous_operators(chirality=st.just(HOL)), homogeneous_operators(chirality=st.just(HOL)))
def test_mirror_swaps_pole_orders(a, b):
    hol = ope(a, b, depth=None)
    anti = ope(mirror(a), mirror(b), depth=None)
    assert {(q, p): mirror(v) for (p, q), v in hol.coeffs.items()} == dict(anti.coeffs)


def _sum(l1, l2):
    keys = set(l1.coeffs) | set(l2.coeffs)
    out = {k: l1.pole_coeff(*k) + l2.pole_coeff(*k) for k in keys}
    return type(l1)({k: v for k, v in out.items() if v}, depth=None)


def test_monomial_helper_is_canonical():
    m = Monomial((sym(PSI, 1), sym(PSI, -1)))
    assert OperatorExpr([(m, 1)]) == formal_product(psi("+", 1), psi("-", 1))
