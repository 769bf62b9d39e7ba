"""Current algebras built from the free fields.

The level-0 currents are ``L^a = t^a_ij (psi_-^i psi_+^j + beta_-^i beta_+^j)``.
Symbolically the generator sum ``sum_a t^a_ij t^a_kl`` is never formed
explicitly; it is replaced by the completeness relation of the family, a
combination of Kronecker deltas with :class:`RatN` coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .expressions import BETA, IDENTITY, PSI, OperatorExpr, bilinear, derivative, formal_product
from .scalars import N, RatN
from .wick import ope, normal_product

# index slots of t^a_ij t^a_kl
I, J, K, L = "i", "j", "k", "l"


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    """A symmetry family in the ``alpha^2 = 2`` normalization.

    ``completeness`` lists ``(coeff, ((a, b), (c, d)))`` meaning
    ``sum_a t^a_ij t^a_kl = sum coeff * delta_ab delta_cd`` over slots i, j, k, l.
    """

    family: str
    completeness: tuple
    casimir_fund: RatN
    casimir2_fund: RatN
    casimir2_adjoint: RatN
    dimension: RatN
    flavor_multiplicity: RatN = field(default=N)

    def completeness_expr(self, slots=(I, J, K, L)) -> OperatorExpr:
        names = dict(zip((I, J, K, L), slots))
        out = OperatorExpr.zero()
        for c, ((a, b), (p, q)) in self.completeness:
            out = out + OperatorExpr.delta(names[a], names[b]) * OperatorExpr.delta(names[p], names[q]) * c
        return out


SU = AlgebraSpec(
    family="su",
    # C2(N) N/(N^2-1) (d_il d_jk - d_ij d_kl / N) with C2(N) = (N^2-1)/N
    completeness=((RatN(1), ((I, L), (J, K))), (-1 / N, ((I, J), (K, L)))),
    casimir_fund=RatN(1),
    casimir2_fund=(N**2 - 1) / N,
    casimir2_adjoint=2 * N,
    dimension=N**2 - 1,
)

SO = AlgebraSpec(
    family="so",
    # C2(N)/(N-1) (d_il d_jk - d_ik d_jl) with C2(N) = N - 1
    completeness=((RatN(1), ((I, L), (J, K))), (RatN(-1), ((I, K), (J, L)))),
    casimir_fund=RatN(2),
    casimir2_fund=N - 1,
    casimir2_adjoint=2 * (N - 2),
    dimension=N * (N - 1) / 2,
)

# Symbolic sp(2N) needs the symplectic form in the index calculus; only the
# constants are recorded here.  The oracle checks sp numerically.
SP = AlgebraSpec(
    family="sp",
    completeness=(),
    casimir_fund=RatN(1),
    casimir2_fund=(2 * N + 1) / 2,
    casimir2_adjoint=2 * (N + 1),
    dimension=N * (2 * N + 1),
    flavor_multiplicity=2 * N,
)

FAMILIES = {"su": SU, "so": SO, "sp": SP}


def get_spec(family) -> AlgebraSpec:
    if isinstance(family, AlgebraSpec):
        return family
    try:
        return FAMILIES[family]
    except KeyError:
        raise UnsupportedFamily(f"unknown family {family!r}") from None


def current_bilinear(i, j, species="both", chirality=0) -> OperatorExpr:
    """``psi_-^i psi_+^j`` (+ ``beta_-^i beta_+^j``) with free indices ``i, j``."""
    out = OperatorExpr.zero()
    if species in ("fermion", "both"):
        out = out + bilinear(PSI, "-", PSI, "+", i, j, chirality)
    if species in ("ghost", "both"):
        out = out + bilinear(BETA, "-", BETA, "+", i, j, chirality)
    if species not in ("fermion", "ghost", "both"):
        raise ValueError(f"species must be fermion, ghost or both, got {species!r}")
    return out


@dataclass(frozen=True)
class Bilocal:
    """``sum_a L^a(z) L^a(w)`` as delta-weighted pairs of free-index bilinears."""

    spec: AlgebraSpec
    weight: OperatorExpr  # deltas in slots i, j, k, l
    left: OperatorExpr  # E_ij at z
    right: OperatorExpr  # E_kl at w

    def contract(self, expr: OperatorExpr) -> OperatorExpr:
        """Multiply by the completeness weight, summing the shared slots."""
        return formal_product(self.weight, expr)

    def normal_product(self) -> OperatorExpr:
        return self.contract(normal_product(self.left, self.right))

    def ope(self, depth=None):
        lope = ope(self.left, self.right, depth=depth)
        return {key: self.contract(v) for key, v in lope.coeffs.items() if self.contract(v)}


def casimir_bilocal(spec, species="both") -> Bilocal:
    spec = get_spec(spec)
    if not spec.completeness:
        raise UnsupportedFamily(f"{spec.family} has no symbolic completeness relation; use the oracle")
    return Bilocal(
        spec,
        spec.completeness_expr(),
        current_bilinear(I, J, species),
        current_bilinear(K, L, species),
    )


def left_right_casimir(spec) -> OperatorExpr:
    """``sum_a L^a Lbar^a`` (the g-perturbation of the current-current action)."""
    spec = get_spec(spec)
    if not spec.completeness:
        raise UnsupportedFamily(f"{spec.family} has no symbolic completeness relation")
    left = current_bilinear(I, J)
    right = current_bilinear(K, L, chirality=1)
    return formal_product(spec.completeness_expr(), formal_product(left, right))


def level(spec, species="fermion") -> RatN:
    """Double-pole scalar of ``sum_a J^a J^a`` divided by ``dim G``."""
    b = casimir_bilocal(spec, species)
    total = b.contract(ope(b.left, b.right, orders={(2, 0)}).pole_coeff(2, 0))
    return total.scalar_part() / b.spec.dimension


@dataclass(frozen=True)
class CurrentMultiplet:
    name: str
    members: dict

    def __getitem__(self, key) -> OperatorExpr:
        return self.members[key]

    def __iter__(self):
        return iter(self.members.items())


def _H(chirality=0):
    return bilinear(PSI, "+", PSI, "-", chirality=chirality)


def gl11_multiplet(chirality=0) -> CurrentMultiplet:
    """H = psi_+ psi_-, J = beta_+ beta_-, S_+ = psi_+ beta_-, S_- = -psi_- beta_+."""
    c = chirality
    return CurrentMultiplet(
        "gl11",
        {
            "H": _H(c),
            "J": bilinear(BETA, "+", BETA, "-", chirality=c),
            "S+": bilinear(PSI, "+", BETA, "-", chirality=c),
            "S-": -bilinear(PSI, "-", BETA, "+", chirality=c),
        },
    )


def osp22_multiplet(chirality=0) -> CurrentMultiplet:
    """gl(1|1) currents plus J_+ = beta_- beta_-, J_- = beta_+ beta_+, Shat_+- = psi_-+ beta_-+."""
    c = chirality
    members = dict(gl11_multiplet(c).members)
    members.update(
        {
            "J+": bilinear(BETA, "-", BETA, "-", chirality=c),
            "J-": bilinear(BETA, "+", BETA, "+", chirality=c),
            "Shat+": bilinear(PSI, "-", BETA, "-", chirality=c),
            "Shat-": bilinear(PSI, "+", BETA, "+", chirality=c),
        }
    )
    return CurrentMultiplet("osp22", members)


MULTIPLETS = {"gl11": gl11_multiplet, "osp22": osp22_multiplet}


def multiplet_member(name: str, chirality=0) -> OperatorExpr:
    return osp22_multiplet(chirality)[name]


def generator_pole_parts(spec, current: OperatorExpr, both_orders=True) -> dict:
    """Singular OPE entries of ``L^a`` with ``current``, contracted with ``t^a``.

    ``X_ij t^a_ij = 0`` for every generator iff ``X_ij sum_a t^a_ij t^a_kl = 0``
    (the generators are linearly independent), so the completeness relation
    turns "vanishes for all a" into a single symbolic zero test.
    """
    spec = get_spec(spec)
    E = current_bilinear(I, J)
    weight = spec.completeness_expr()
    out = {}
    pairs = [("L.K", ope(E, current, depth=None))]
    if both_orders:
        pairs.append(("K.L", ope(current, E, depth=None)))
    for tag, lope in pairs:
        for key, v in lope.singular().items():
            contracted = formal_product(weight, v)
            if contracted:
                out[(tag,) + key] = contracted
    return out


def check_mutual_commute(spec, multiplet: CurrentMultiplet) -> bool:
    return all(not generator_pole_parts(spec, k) for _, k in multiplet)


@dataclass
class PrimaryReport:
    member: str
    weight_ok: bool
    derivative_ok: bool
    third_order_scalar: RatN
    unexpected: dict

    @property
    def ok(self) -> bool:
        return self.weight_ok and self.derivative_ok and not self.unexpected


def primary_reports(T: OperatorExpr, multiplet: CurrentMultiplet) -> list:
    if not T.is_holomorphic():
        raise ValueError("weight_one_primary_check needs a holomorphic stress tensor")
    reports = []
    for name, k in multiplet:
        l = ope(T, k, depth=None)
        third = l.pole_coeff(3, 0)
        unexpected = {
            key: v
            for key, v in l.singular().items()
            if key not in ((1, 0), (2, 0)) and not (key == (3, 0) and set(v.terms) <= {IDENTITY})
        }
        reports.append(
            PrimaryReport(
                member=name,
                weight_ok=l.pole_coeff(2, 0) == k,
                derivative_ok=l.pole_coeff(1, 0) == derivative(k),
                third_order_scalar=third.scalar_part(),
                unexpected=unexpected,
            )
        )
    return reports


def weight_one_primary_check(T: OperatorExpr, multiplet: CurrentMultiplet) -> bool:
    return all(r.ok for r in primary_reports(T, multiplet))


def regular_with(T: OperatorExpr, multiplet: CurrentMultiplet) -> bool:
    """True when every member has a pole-free OPE with ``T``."""
    return all(ope(T, k, depth=None).is_regular() for _, k in multiplet)
