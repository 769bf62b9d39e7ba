"""Explicit-matrix ground truth at small rank.

Generators are exact Hermitian matrices over the Gaussian rationals.  Bases
are trace-orthogonal but not normalized, since normalizing would introduce
square roots; every sum over the algebra carries the weight
``w_a = lam / tr(t^a t^a)`` instead, which is what an orthonormal basis with
``tr(t^a t^b) = lam delta^ab`` would produce.

Flavor indices here are concrete integers ``1..m``.  Operators built from the
matrices never go through a completeness relation, so they give a route to
every symbolic identity that is independent of the delta calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product

from .algebras import get_spec
from .expressions import (
    ANTI,
    BETA,
    HOL,
    PSI,
    FieldSymbol,
    Monomial,
    OperatorExpr,
    formal_product,
)
from .scalars import GaussianRational as G
from .scalars import RatN
from .wick import normal_product, ope

MAX_RANK = {"su": 4, "so": 5, "sp": 2}
# tr(t^a t^b) = lam delta^ab; this is C(N) of the family
TRACE_NORM = {"su": Fraction(1), "so": Fraction(2), "sp": Fraction(1)}

ZERO, ONE, I = G(0), G(1), G(0, 1)


class UnsupportedRank(ValueError):
    pass


# --- small exact matrix kit ----------------------------------------------


def zeros(n):
    return [[ZERO] * n for _ in range(n)]


def unit(n, i, j, c=ONE):
    m = zeros(n)
    m[i][j] = c
    return m


def identity(n):
    m = zeros(n)
    for i in range(n):
        m[i][i] = ONE
    return m


def madd(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a, c):
    return [[x * c for x in row] for row in a]


def mmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), ZERO) for j in range(m)] for i in range(n)]


def trace(a):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def dagger(a):
    return [[a[j][i].conjugate() for j in range(len(a))] for i in range(len(a[0]))]


def transpose(a):
    return [list(row) for row in zip(*a)]


def commutator(a, b):
    return madd(mmul(a, b), mmul(b, a), -1)


def is_zero_matrix(a):
    return all(not x for row in a for x in row)


def inverse(a):
    n = len(a)
    m = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col])
        m[col], m[piv] = m[piv], m[col]
        lead = m[col][col]
        m[col] = [x / lead for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def inner(a, b) -> Fraction:
    """``tr(a b)`` for Hermitian ``a, b`` (always real)."""
    t = trace(mmul(a, b))
    if t.im:
        raise ValueError("trace form is not real; inputs are not Hermitian")
    return t.re


def symplectic_form(n):
    """``Omega = antidiag(1, ..., 1, -1, ..., -1)`` of size ``2n``."""
    m = 2 * n
    om = zeros(m)
    for i in range(m):
        om[i][m - 1 - i] = ONE if i < n else -ONE
    return om


# --- generator bases -----------------------------------------------------


def _complex_span(family, n):
    """A spanning set of the complexified algebra in the defining representation."""
    if family == "su":
        out = [unit(n, i, j) for i in range(n) for j in range(n) if i != j]
        out += [madd(unit(n, k, k), unit(n, k + 1, k + 1), -1) for k in range(n - 1)]
        return out
    if family == "so":
        return [madd(unit(n, i, j), unit(n, j, i), -1) for i in range(n) for j in range(i + 1, n)]
    if family == "sp":
        om = symplectic_form(n)
        m = 2 * n
        out = []
        for i in range(m):
            for j in range(i, m):
                sym = madd(unit(m, i, j), unit(m, j, i)) if i != j else unit(m, i, i)
                out.append(mscale(mmul(om, sym), -ONE))
        return out
    raise UnsupportedRank(f"unknown family {family!r}")


def _hermitian_parts(x):
    xd = dagger(x)
    return [madd(x, xd), mscale(madd(x, xd, -1), I)]


def _gram_schmidt(cands):
    basis = []
    for c in cands:
        v = c
        for b in basis:
            v = madd(v, mscale(b, G(inner(v, b) / inner(b, b))), -1)
        if not is_zero_matrix(v):
            basis.append(v)
    return basis


@dataclass(frozen=True)
class GeneratorBasis:
    family: str
    n: int
    matrices: tuple
    lam: Fraction

    @property
    def size(self) -> int:
        """Dimension of the defining representation."""
        return len(self.matrices[0]) if self.matrices else (2 * self.n if self.family == "sp" else self.n)

    @property
    def weights(self) -> tuple:
        return tuple(self.lam / inner(t, t) for t in self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(zip(self.weights, self.matrices))


@lru_cache(maxsize=None)
def generator_basis(family: str, n: int) -> GeneratorBasis:
    """Hermitian trace-orthogonal basis of su(n), so(n) or sp(2n)."""
    limit = MAX_RANK.get(family)
    if limit is None:
        raise UnsupportedRank(f"unknown family {family!r}")
    if not 1 <= n <= limit or (family == "su" and n < 2) or (family == "so" and n < 2):
        raise UnsupportedRank(f"{family}({n}) is outside the supported ranks")
    cands = []
    for x in _complex_span(family, n):
        cands.extend(_hermitian_parts(x))
    mats = tuple(tuple(tuple(r) for r in m) for m in _gram_schmidt(cands))
    return GeneratorBasis(family, n, mats, TRACE_NORM[family])


def _m(t):
    return [list(r) for r in t]


def cartan_frame(basis: GeneratorBasis):
    """Diagonal Cartan generators and the change of frame that produced them.

    su is already diagonal.  For so the rotation blocks are diagonalized by
    ``[[1, 1], [i, -i]]``; for sp the diagonal elements of the basis commute.
    """
    size = basis.size
    if basis.family == "so":
        p = identity(size)
        for k in range(size // 2):
            a, b = 2 * k, 2 * k + 1
            p[a][a], p[a][b], p[b][a], p[b][b] = ONE, ONE, I, -I
        pinv = inverse(p)
        diag = []
        for k in range(size // 2):
            h = madd(unit(size, 2 * k, 2 * k + 1, -I), unit(size, 2 * k + 1, 2 * k, I))
            diag.append(mmul(pinv, mmul(h, p)))
        return diag, p, pinv
    diag = [_m(t) for t in basis.matrices if all(not t[i][j] for i in range(size) for j in range(size) if i != j)]
    return diag, identity(size), identity(size)


def long_root_length(basis: GeneratorBasis) -> Fraction:
    """``max alpha^2`` over the roots, with the metric ``tr(h h') / lam``."""
    hs, p, pinv = cartan_frame(basis)
    if not hs:
        return Fraction(0)
    r = len(hs)
    metric = [[G(inner(a, b) / basis.lam) for b in hs] for a in hs]
    ginv = inverse(metric)
    size = basis.size
    mu = [[h[i][i] for h in hs] for i in range(size)]
    rotated = [mmul(pinv, mmul(_m(t), p)) for t in basis.matrices]
    best = Fraction(0)
    for i in range(size):
        for j in range(size):
            alpha = [mu[i][a] - mu[j][a] for a in range(r)]
            if not any(alpha) or not any(t[i][j] for t in rotated):
                continue
            val = sum((alpha[a] * ginv[a][b] * alpha[b] for a in range(r) for b in range(r)), ZERO)
            best = max(best, val.re)
    return best


def completeness_tensor(basis: GeneratorBasis) -> dict:
    """``W[i,j,k,l] = sum_a w_a t^a_ij t^a_kl`` (zero entries omitted, 0-based)."""
    acc = {}
    for w, t in basis:
        nz = [((i, j), x) for i, row in enumerate(t) for j, x in enumerate(row) if x]
        for (ij, x), (kl, y) in product(nz, repeat=2):
            acc[ij + kl] = acc.get(ij + kl, ZERO) + w * x * y
    out = {}
    for idx, v in acc.items():
        if v:
            if v.im:
                raise ValueError("completeness sum is not real")
            out[idx] = v.re
    return out


def _delta(a, b):
    return 1 if a == b else 0


def symbolic_completeness_value(family, n, idx) -> Fraction:
    spec = get_spec(family)
    vals = dict(zip("ijkl", idx))
    total = Fraction(0)
    for c, ((a, b), (p, q)) in spec.completeness:
        total += c.eval(n) * _delta(vals[a], vals[b]) * _delta(vals[p], vals[q])
    return total


def sp_completeness_value(n, idx) -> Fraction:
    """Relation found by brute force over the sp basis (lam = 1).

    ``sum_a t_ij t_kl = (d_il d_jk - Omega_ik Omega_jl) / 2``
    """
    om = symplectic_form(n)
    i, j, k, l = idx
    return Fraction(_delta(i, l) * _delta(j, k), 2) - om[i][k].re * om[j][l].re / 2


def completeness_numeric(family: str, n: int) -> bool:
    basis = generator_basis(family, n)
    w = completeness_tensor(basis)
    size = basis.size
    ref = sp_completeness_value if family == "sp" else lambda n, idx: symbolic_completeness_value(family, n, idx)
    return all(w.get(idx, 0) == ref(n, idx) for idx in product(range(size), repeat=4))


@dataclass(frozen=True)
class Constants:
    casimir_fund: Fraction  # C(N): tr(t t) in the orthonormal normalization
    casimir2_fund: Fraction  # sum_a t^a t^a = C2(N) * 1
    casimir2_adjoint: Fraction  # f^acd f^bcd = C2(G) delta^ab
    dimension: int


def casimir_constants(basis: GeneratorBasis) -> Constants:
    size = basis.size
    c2 = zeros(size)
    for w, t in basis:
        c2 = madd(c2, mscale(mmul(_m(t), _m(t)), G(w)))
    c2f = c2[0][0]
    if not is_zero_matrix(madd(c2, mscale(identity(size), c2f), -1)):
        raise ValueError("quadratic Casimir is not a multiple of the identity")
    adj = None
    for _, tb in basis:
        acc = zeros(size)
        for w, tc in basis:
            acc = madd(acc, mscale(commutator(_m(tc), commutator(_m(tc), _m(tb))), G(w)))
        # acc = C2(G) * tb
        pos = next((i, j) for i in range(size) for j in range(size) if tb[i][j])
        ratio = acc[pos[0]][pos[1]] / tb[pos[0]][pos[1]]
        if not is_zero_matrix(madd(acc, mscale(_m(tb), ratio), -1)):
            raise ValueError("adjoint Casimir is not diagonal")
        if adj is not None and ratio != adj:
            raise ValueError("adjoint Casimir differs between generators")
        adj = ratio
    adj = adj if adj is not None else ZERO
    return Constants(basis.lam, c2f.re, adj.re, len(basis))


def structure_constants_antisymmetric(basis: GeneratorBasis) -> bool:
    """``tr([t^a, t^b] t^c)`` is totally antisymmetric (so is ``f^abc``)."""
    ms = [_m(t) for t in basis.matrices]
    k = len(ms)
    g = {}
    for a in range(k):
        for b in range(k):
            comm = commutator(ms[a], ms[b])
            for c in range(k):
                g[a, b, c] = trace(mmul(comm, ms[c]))
    return all(
        g[a, b, c] == -g[b, a, c] and g[a, b, c] == g[b, c, a] for a in range(k) for b in range(k) for c in range(k)
    )


def structure_constant_metric(basis: GeneratorBasis) -> dict:
    """``sum_cd f^acd f^bcd`` in the orthonormal normalization, keyed by ``(a, b)``.

    Off-diagonal entries carry a harmless ``sqrt(w_a w_b)`` factor; only their
    vanishing is meaningful.
    """
    ms = [_m(t) for t in basis.matrices]
    ws = basis.weights
    k = len(ms)
    lam = basis.lam
    g = {}
    for a in range(k):
        for c in range(k):
            comm = commutator(ms[a], ms[c])
            for d in range(k):
                g[a, c, d] = trace(mmul(comm, ms[d]))
    out = {}
    for a in range(k):
        for b in range(k):
            s = sum((ws[c] * ws[d] * g[a, c, d] * g[b, c, d] for c in range(k) for d in range(k)), ZERO)
            # f = -i sqrt(w w w) g / lam, so f f = -w w w g g / lam^2
            val = -s / (lam * lam)
            out[a, b] = val.re * (ws[a] if a == b else 1)
    return out


# --- flavor-expanded operators -------------------------------------------


def expand_flavors(e: OperatorExpr, n: int, multiplicity: int | None = None) -> OperatorExpr:
    """Sum every abstract index over ``1..m`` and evaluate coefficients at ``N = n``.

    ``m`` defaults to ``n``.  Free abstract indices are rejected.
    """
    m = n if multiplicity is None else multiplicity
    out = []
    for mono, c in e.terms.items():
        value = c.eval(n)  # PoleError propagates
        names = sorted(mono.names(), key=str)
        counts = mono.names()
        free = [x for x in names if counts[x] == 1]
        if free:
            raise ValueError(f"free index {free[0]!r} cannot be expanded")
        for choice in product(range(1, m + 1), repeat=len(names)):
            sub = dict(zip(names, choice))
            fields = tuple(f.with_index(sub.get(f.index, f.index)) for f in mono.fields)
            deltas = tuple((sub.get(a, a), sub.get(b, b)) for a, b in mono.deltas)
            out.append((Monomial(fields, deltas), value))
    return OperatorExpr(out)


def _field(chirality, species, charge, index):
    return FieldSymbol(chirality, species, charge, 0, index)


def _pair(s1, q1, i, s2, q2, j, chirality=HOL):
    return Monomial((_field(chirality, s1, q1, i), _field(chirality, s2, q2, j)))


def current_matrix(mat, species="both", chirality=HOL) -> OperatorExpr:
    """``psi_-^i M_ij psi_+^j (+ beta_-^i M_ij beta_+^j)`` for a real matrix ``M``."""
    terms = []
    size = len(mat)
    for i in range(size):
        for j in range(size):
            v = mat[i][j]
            v = v.re if isinstance(v, G) else Fraction(v)
            if not v:
                continue
            if species in ("fermion", "both"):
                terms.append((_pair(PSI, -1, i + 1, PSI, 1, j + 1, chirality), v))
            if species in ("ghost", "both"):
                terms.append((_pair(BETA, -1, i + 1, BETA, 1, j + 1, chirality), v))
    return OperatorExpr(terms)


def _bilinear_at(i, j, species, chirality=HOL) -> OperatorExpr:
    out = []
    if species in ("fermion", "both"):
        out.append((_pair(PSI, -1, i, PSI, 1, j, chirality), 1))
    if species in ("ghost", "both"):
        out.append((_pair(BETA, -1, i, BETA, 1, j, chirality), 1))
    return OperatorExpr(out)


def numeric_bilocal_terms(basis: GeneratorBasis, species="both", right_chirality=HOL):
    """``[(W_ijkl, E_ij, E_kl)]`` from the explicit completeness tensor."""
    out = []
    for (i, j, k, l), v in sorted(completeness_tensor(basis).items()):
        out.append((v, _bilinear_at(i + 1, j + 1, species), _bilinear_at(k + 1, l + 1, species, right_chirality)))
    return out


def numeric_casimir_np(basis: GeneratorBasis, species="both") -> OperatorExpr:
    """``lim sum_a w_a L^a(z) L^a(w)`` built from explicit generators."""
    total = OperatorExpr.zero()
    cache = {}
    for v, left, right in numeric_bilocal_terms(basis, species):
        key = (left, right)
        if key not in cache:
            cache[key] = normal_product(left, right)
        total = total + cache[key] * v
    return total


def numeric_left_right(basis: GeneratorBasis) -> OperatorExpr:
    total = OperatorExpr.zero()
    for v, left, right in numeric_bilocal_terms(basis, right_chirality=ANTI):
        total = total + formal_product(left, right) * v
    return total


def numeric_level(basis: GeneratorBasis, species="fermion") -> Fraction:
    total = Fraction(0)
    for v, left, right in numeric_bilocal_terms(basis, species):
        total += v * ope(left, right, orders={(2, 0)}).pole_coeff(2, 0).scalar_part().constant_value()
    return total / len(basis)


def numeric_currents(basis: GeneratorBasis, chirality=HOL) -> list:
    return [current_matrix(t, chirality=chirality) for t in _real_combinations(basis)]


def _real_combinations(basis):
    """Real matrices spanning the same complex space (currents need real coefficients)."""
    out = []
    for t in basis.matrices:
        re = [[G(x.re) for x in row] for row in t]
        im = [[G(x.im) for x in row] for row in t]
        for m in (re, im):
            if not is_zero_matrix(m):
                out.append(m)
    return out


def numeric_free_tensor(m: int) -> OperatorExpr:
    from .sugawara import free_tensor

    return expand_flavors(free_tensor(), m)


# --- sp(2N) decomposition ------------------------------------------------


def sp_osp_multiplet(n: int, chirality=HOL) -> dict:
    """osp(2|2) currents commuting with sp(2n) on ``2n`` flavors.

    With ``Omega`` antisymmetric the fermion pairs ``psi Omega psi`` survive and
    ``beta Omega beta`` vanish, so the su(2) is carried by the fermions
    (``H``, ``A+-``) and the u(1) by the ghosts (``J``).
    """
    om = symplectic_form(n)
    rng = range(2 * n)

    def omega_pair(s1, q1, s2, q2):
        terms = []
        for i in rng:
            for j in rng:
                if om[i][j]:
                    terms.append((_pair(s1, q1, i + 1, s2, q2, j + 1, chirality), om[i][j].re))
        return OperatorExpr(terms)

    def diag(s1, q1, s2, q2, sign=1):
        return OperatorExpr([(_pair(s1, q1, i + 1, s2, q2, i + 1, chirality), sign) for i in rng])

    return {
        "H": diag(PSI, 1, PSI, -1),
        "J": diag(BETA, 1, BETA, -1),
        "S+": diag(PSI, 1, BETA, -1),
        "S-": diag(PSI, -1, BETA, 1, -1),
        "A+": omega_pair(PSI, 1, PSI, 1),
        "A-": omega_pair(PSI, -1, PSI, -1),
        "Shat+": omega_pair(PSI, -1, BETA, -1),
        "Shat-": omega_pair(PSI, 1, BETA, 1),
    }


def sp_osp_tensor(n: int, level=None) -> OperatorExpr:
    """Single-Casimir osp(2|2) Sugawara tensor on the symplectic multiplet.

    Compared with the orthogonal case the su(2) and u(1) parts trade places
    between fermions and ghosts, which flips the sign of every block.
    """
    k = Fraction(-2 * n) if level is None else Fraction(level)
    m = sp_osp_multiplet(n)
    np_ = normal_product
    body = (
        np_(m["J"], m["J"])
        - np_(m["H"], m["H"])
        + (np_(m["A+"], m["A-"]) + np_(m["A-"], m["A+"])) * Fraction(1, 2)
        + np_(m["S+"], m["S-"])
        - np_(m["S-"], m["S+"])
        + np_(m["Shat-"], m["Shat+"])
        - np_(m["Shat+"], m["Shat-"])
    )
    return body * (-1 / (2 * (2 - k)))


def numeric_g0_tensor(basis: GeneratorBasis, casimir2_adjoint=None) -> OperatorExpr:
    c2 = casimir_constants(basis).casimir2_adjoint if casimir2_adjoint is None else Fraction(casimir2_adjoint)
    return numeric_casimir_np(basis) * (1 / c2)


@dataclass
class SpCheck:
    n: int
    casimir2_adjoint: Fraction
    residual: OperatorExpr
    commuting: bool

    @property
    def ok(self) -> bool:
        return not self.residual and self.commuting


def sp_check(n: int, casimir2_adjoint=None) -> SpCheck:
    """``T_free = T_osp22(-2n) + T_sp(2n)0`` on ``2n`` explicit flavors."""
    if n not in (1, 2):
        raise UnsupportedRank("the sp decomposition is checked for n = 1, 2")
    basis = generator_basis("sp", n)
    c2 = casimir_constants(basis).casimir2_adjoint if casimir2_adjoint is None else Fraction(casimir2_adjoint)
    t_sp = numeric_g0_tensor(basis, c2)
    residual = numeric_free_tensor(2 * n) - sp_osp_tensor(n) - t_sp
    members = sp_osp_multiplet(n).values()
    commuting = all(ope(L, K, depth=None).is_regular() for L in numeric_currents(basis) for K in members)
    return SpCheck(n, c2, residual, commuting)


def numeric_verify_sp(n: int, casimir2_adjoint=None) -> bool:
    return sp_check(n, casimir2_adjoint).ok


# --- symbolic versus explicit -------------------------------------------


def _pole_free(a, b) -> bool:
    return ope(a, b, depth=None).is_regular()


def equivalence_checks(family: str, n: int) -> dict:
    """Every symbolic su/so claim at ``N = n`` against the explicit generators.

    Returns ``{check name: bool}``.  For ``so(2)`` the adjoint Casimir vanishes,
    so tensors are compared after multiplying through by ``N - 2``.
    """
    from . import sugawara as sg
    from .algebras import casimir_bilocal, level, left_right_casimir, MULTIPLETS
    from .expressions import psi

    spec = get_spec(family)
    basis = generator_basis(family, n)
    consts = casimir_constants(basis)
    out = {
        "completeness": completeness_numeric(family, n),
        "structure_constants_antisymmetric": structure_constants_antisymmetric(basis),
        "C(N)": consts.casimir_fund == spec.casimir_fund.eval(n),
        "C2(N)": consts.casimir2_fund == spec.casimir2_fund.eval(n),
        "C2(G)": consts.casimir2_adjoint == spec.casimir2_adjoint.eval(n),
        "dim G": consts.dimension == spec.dimension.eval(n),
    }
    metric = structure_constant_metric(basis)
    out["f f = C2(G) delta"] = all(
        v == (consts.casimir2_adjoint if a == b else 0) for (a, b), v in metric.items()
    )
    for species in ("fermion", "ghost"):
        out[f"level {species}"] = numeric_level(basis, species) == level(spec, species).eval(n)

    bilocal_np = numeric_casimir_np(basis)
    out["sum_a L^a L^a"] = bilocal_np == expand_flavors(casimir_bilocal(spec).normal_product(), n)

    sup_label = sg.FAMILY_SECTORS[family][0]
    sup = sg.build_T(sup_label).expr
    free = sg.free_tensor()
    scale = RatN(1) if spec.casimir2_adjoint.eval(n) else RatN((-2, 1))  # N - 2
    c2_over_scale = (spec.casimir2_adjoint / scale).eval(n)
    lhs = expand_flavors((free - sup) * scale, n)
    out["decomposition"] = lhs == bilocal_np * (1 / c2_over_scale)

    multiplet = MULTIPLETS[sup_label]()
    currents = numeric_currents(basis)
    out["commuting sectors"] = all(
        _pole_free(L, expand_flavors(K, n)) for L in currents for _, K in multiplet
    )

    if consts.casimir2_adjoint:
        t_g0 = bilocal_np * (1 / consts.casimir2_adjoint)
        t_sup = expand_flavors(free, n) - t_g0
        out["central charge"] = sg.central_charge(t_g0) == sg.central_charge(sg.build_T(f"{family}0")).eval(n)
        out["weight psi+"] = sg.conformal_weight(t_g0, psi("+", 1)) == sg.conformal_weight(
            sg.build_T(f"{family}0"), psi("+", "i")
        ).eval(n)
        rho = expand_flavors(sg.density_operator(), n)
        kz, kzb = sg.density_double_pole(t_sup, rho)
        kappa = sg.kappa_kinetic(sup).eval(n)
        out["density double pole"] = kz == kappa and kzb == kappa

    o_g = numeric_left_right(basis)
    entry = ope(o_g, o_g, orders={(1, 1)}).pole_coeff(1, 1)
    entry = entry - OperatorExpr.identity(entry.scalar_part())
    coeff = sg.beta_one_loop(family).coefficient("g", "g", "g").eval(n)
    out["C^g_gg"] = entry == o_g * coeff
    out["O_g"] = o_g == expand_flavors(left_right_casimir(spec), n)
    return out
