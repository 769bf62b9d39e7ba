from fractions import Fraction

import pytest

from superspin import oracle
from superspin.expressions import OperatorExpr
from superspin.scalars import GaussianRational
from superspin.oracle import (
    UnsupportedRank,
    casimir_constants,
    commutator,
    completeness_numeric,
    dagger,
    expand_flavors,
    generator_basis,
    inner,
    is_zero_matrix,
    long_root_length,
    mmul,
    numeric_g0_tensor,
    numeric_verify_sp,
    sp_osp_tensor,
    structure_constant_metric,
    structure_constants_antisymmetric,
    symplectic_form,
    trace,
    transpose,
)
from superspin.sugawara import build_T, density_operator, free_tensor

DIMENSIONS = {"su": lambda n: n * n - 1, "so": lambda n: n * (n - 1) // 2, "sp": lambda n: n * (2 * n + 1)}
RANKS = [("su", 2), ("su", 3), ("su", 4), ("so", 3), ("so", 4), ("so", 5), ("sp", 1), ("sp", 2)]


def m(t):
    return [list(r) for r in t]


@pytest.mark.parametrize("family, n", RANKS)
def test_basis_shape(family, n):
    b = generator_basis(family, n)
    assert len(b) == DIMENSIONS[family](n)
    for t in b.matrices:
        assert m(t) == dagger(m(t))
        assert trace(m(t)) == 0
    for a, x in enumerate(b.matrices):
        for c, y in enumerate(b.matrices):
            if a != c:
                assert inner(x, y) == 0


@pytest.mark.parametrize("family, n", [("so", 3), ("so", 4), ("so", 5)])
def test_orthogonal_generators_are_imaginary_antisymmetric(family, n):
    for t in generator_basis(family, n).matrices:
        assert m(t) == [[-x for x in r] for r in transpose(m(t))]
        assert all(x.re == 0 for r in t for x in r)


@pytest.mark.parametrize("n", [1, 2])
def test_symplectic_generators_preserve_the_form(n):
    om = symplectic_form(n)
    for t in generator_basis("sp", n).matrices:
        # t^T Omega + Omega t = 0
        lhs = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(mmul(transpose(m(t)), om), mmul(om, m(t)))]
        assert is_zero_matrix(lhs)


@pytest.mark.parametrize("family, n", [("su", 2), ("su", 3), ("su", 4), ("so", 4), ("so", 5), ("sp", 1), ("sp", 2)])
def test_long_roots_have_length_two(family, n):
    assert long_root_length(generator_basis(family, n)) == 2


@pytest.mark.parametrize("family, n", RANKS + [("so", 2)])
def test_completeness(family, n):
    assert completeness_numeric(family, n)


@pytest.mark.parametrize(
    "family, n, c, c2, c2g",
    [
        ("su", 2, 1, Fraction(3, 2), 4),
        ("su", 3, 1, Fraction(8, 3), 6),
        ("su", 4, 1, Fraction(15, 4), 8),
        ("so", 3, 2, 2, 2),
        ("so", 4, 2, 3, 4),
        ("so", 5, 2, 4, 6),
        ("sp", 1, 1, Fraction(3, 2), 4),
        ("sp", 2, 1, Fraction(5, 2), 6),
    ],
)
def test_casimir_constants(family, n, c, c2, c2g):
    k = casimir_constants(generator_basis(family, n))
    assert (k.casimir_fund, k.casimir2_fund, k.casimir2_adjoint) == (c, c2, c2g)
    assert k.dimension == DIMENSIONS[family](n)


@pytest.mark.parametrize("family, n", [("su", 2), ("su", 3), ("so", 3), ("so", 4), ("sp", 1)])
def test_structure_constants(family, n):
    b = generator_basis(family, n)
    assert structure_constants_antisymmetric(b)
    c2g = casimir_constants(b).casimir2_adjoint
    metric = structure_constant_metric(b)
    assert all(v == (c2g if a == c else 0) for (a, c), v in metric.items())


def test_sp2_matches_su2():
    sp, su = generator_basis("sp", 1), generator_basis("su", 2)
    assert structure_constant_metric(sp) == structure_constant_metric(su)
    assert casimir_constants(sp) == casimir_constants(su)
    assert numeric_g0_tensor(sp) == expand_flavors(build_T("su0").expr, 2)
    assert sp_osp_tensor(1) == expand_flavors(build_T("gl11").expr, 2)


def test_unsupported_ranks():
    for family, n in [("su", 5), ("su", 1), ("so", 6), ("sp", 3), ("g2", 2)]:
        with pytest.raises(UnsupportedRank):
            generator_basis(family, n)
    with pytest.raises(UnsupportedRank):
        oracle.sp_check(3)


def test_expand_flavors_examples():
    assert len(expand_flavors(free_tensor(), 1)) == 4
    assert len(expand_flavors(density_operator(), 2)) == 8
    for n in (2, 3):
        residual = build_T("gl11").expr + build_T("su0").expr - free_tensor()
        assert expand_flavors(residual, n) == 0


def test_expand_flavors_errors():
    from superspin.expressions import psi
    from superspin.scalars import PoleError

    with pytest.raises(PoleError):
        expand_flavors(build_T("so0").expr, 2)
    with pytest.raises(ValueError):
        expand_flavors(psi("+", "i"), 2)


def test_expand_matches_symbolic_evaluation():
    # a scalar carries straight through: delta(i,i) -> N
    assert expand_flavors(OperatorExpr.delta("i", "i"), 3) == 3


def test_sp_rank_one_and_mutation_control():
    assert numeric_verify_sp(1)
    assert not numeric_verify_sp(1, casimir2_adjoint=5)


def test_gaussian_rationals_exact():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert commutator([[i]], [[1]]) == [[0]]
