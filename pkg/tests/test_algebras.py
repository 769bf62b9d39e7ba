import pytest

from superspin.algebras import (
    SO,
    SU,
    CurrentMultiplet,
    UnsupportedFamily,
    casimir_bilocal,
    check_mutual_commute,
    current_bilinear,
    gl11_multiplet,
    left_right_casimir,
    level,
    osp22_multiplet,
    primary_reports,
    regular_with,
    weight_one_primary_check,
)
from superspin.expressions import OperatorExpr, derivative
from superspin.scalars import N
from superspin.sugawara import build_T, free_tensor
from superspin.wick import ope


@pytest.mark.parametrize("spec", [SU, SO])
def test_completeness_trace_gives_fundamental_casimir(spec):
    # sum_a (t^a t^a)_il = C2(N) delta_il  <=>  contract j = k
    w = spec.completeness_expr(("i", "j", "j", "l"))
    assert w == OperatorExpr.delta("i", "l") * spec.casimir2_fund


@pytest.mark.parametrize("spec", [SU, SO])
def test_completeness_double_trace_is_dimension_times_index(spec):
    # sum_a tr(t^a t^a) = C(N) dim G
    w = spec.completeness_expr(("i", "j", "j", "i"))
    assert w == spec.casimir_fund * spec.dimension


def test_su_generators_traceless():
    assert SU.completeness_expr(("i", "i", "k", "l")) == 0


def test_so_generators_antisymmetric():
    assert SO.completeness_expr(("i", "j", "k", "l")) == -SO.completeness_expr(("j", "i", "k", "l"))


@pytest.mark.parametrize(
    "family, species, expected",
    [("su", "fermion", 1), ("su", "ghost", -1), ("so", "fermion", 2), ("so", "ghost", -2)],
)
def test_levels(family, species, expected):
    assert level(family, species) == expected


def test_total_level_zero():
    for family in ("su", "so"):
        b = casimir_bilocal(family)
        assert b.contract(ope(b.left, b.right, orders={(2, 0)}).pole_coeff(2, 0)) == 0


def test_sp_is_numeric_only():
    with pytest.raises(UnsupportedFamily):
        casimir_bilocal("sp")
    with pytest.raises(UnsupportedFamily):
        left_right_casimir("sp")
    with pytest.raises(UnsupportedFamily):
        casimir_bilocal("e8")


def test_current_bilinear_rejects_unknown_species():
    with pytest.raises(ValueError):
        current_bilinear("i", "j", "boson")


def test_sectors_commute():
    assert check_mutual_commute("su", gl11_multiplet())
    assert check_mutual_commute("so", osp22_multiplet())


def test_su_does_not_commute_with_ghost_pair_current():
    j_plus = CurrentMultiplet("J+", {"J+": osp22_multiplet()["J+"]})
    assert not check_mutual_commute("su", j_plus)


def test_gl11_closes_under_ope():
    m = gl11_multiplet()
    l = ope(m["S+"], m["S-"], depth=None)
    assert l.pole_coeff(2, 0) == N
    assert l.pole_coeff(1, 0) == m["H"] - m["J"]
    assert ope(m["H"], m["S+"], depth=None).singular() == {(1, 0): m["S+"]}
    assert ope(m["J"], m["S+"], depth=None).singular() == {(1, 0): m["S+"]}
    assert ope(m["H"], m["J"], depth=None).is_regular()


def test_multiplet_members_are_weight_one_primaries():
    assert weight_one_primary_check(free_tensor(), gl11_multiplet())
    assert weight_one_primary_check(build_T("gl11").expr, gl11_multiplet())
    assert weight_one_primary_check(build_T("osp22").expr, osp22_multiplet())


def test_boson_sector_is_blind_to_the_super_currents():
    assert regular_with(build_T("su0").expr, gl11_multiplet())
    assert regular_with(build_T("so0").expr, osp22_multiplet())


def test_primary_reports_detail():
    reports = {r.member: r for r in primary_reports(free_tensor(), gl11_multiplet())}
    assert set(reports) == {"H", "J", "S+", "S-"}
    assert all(r.ok for r in reports.values())
    assert reports["H"].third_order_scalar == 0


def test_primary_check_rejects_antiholomorphic_tensor():
    from superspin.expressions import mirror

    with pytest.raises(ValueError):
        primary_reports(mirror(free_tensor()), gl11_multiplet())


def test_sugawara_current_ope_with_its_tensor():
    H = gl11_multiplet()["H"]
    l = ope(build_T("gl11").expr, H, depth=None)
    assert l.pole_coeff(1, 0) == derivative(H)
    assert l.pole_coeff(2, 0) == H


def test_left_right_casimir_mixes_chiralities():
    lr = left_right_casimir("su")
    assert not lr.is_holomorphic()
    assert all(sum(f.chirality for f in m.fields) == 2 for m in lr.terms)
