"""Stress tensors, their decompositions and the data extracted from them.

All tensors are holomorphic.  The Sugawara tensors are built by the
point-splitting product of the wick kernel, never typed in by hand, so the
explicit quartic forms are outputs of this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebras import (
    SO,
    SU,
    casimir_bilocal,
    get_spec,
    gl11_multiplet,
    left_right_casimir,
    osp22_multiplet,
)
from .expressions import (
    ANTI,
    BETA,
    HOL,
    IDENTITY,
    PSI,
    FieldSymbol,
    Monomial,
    OperatorExpr,
    formal_product,
    mirror,
    render,
)
from .scalars import N, RatN
from .wick import normal_product, ope

FAMILY_SECTORS = {"su": ("gl11", "su0"), "so": ("osp22", "so0")}


class NonPrimaryError(ValueError):
    """The double pole of ``T`` with a field is not proportional to the field."""


class InconsistentKineticBlock(ValueError):
    """The four kinetic monomials do not share one prefactor."""


class BetaResidualError(ValueError):
    """A ``1/(z zbar)`` entry has a component outside the perturbing operators."""

    def __init__(self, pair, residue):
        super().__init__(f"OPE of {pair[0]} with {pair[1]} leaves {render(residue)}")
        self.pair = pair
        self.residue = residue


@dataclass(frozen=True)
class StressTensor:
    expr: OperatorExpr
    label: str

    def __post_init__(self):
        if not self.expr.is_holomorphic():
            raise ValueError("a stress tensor must be holomorphic")

    def __str__(self):
        return render(self.expr)


def kinetic_block(chirality=HOL) -> OperatorExpr:
    """``psi_- d psi_+ + psi_+ d psi_- + beta_- d beta_+ - beta_+ d beta_-``."""

    def term(s, q1, q2):
        a = FieldSymbol(chirality, s, q1, 0, "i")
        b = FieldSymbol(chirality, s, q2, 1, "i")
        return OperatorExpr([(Monomial((a, b)), 1)])

    return term(PSI, -1, 1) + term(PSI, 1, -1) + term(BETA, -1, 1) - term(BETA, 1, -1)


def free_tensor() -> OperatorExpr:
    return kinetic_block() * RatN(-1, 2)


def g0_tensor(family) -> OperatorExpr:
    """``(1/C2(G)) lim sum_a L^a(z) L^a(w)`` via the completeness relation."""
    spec = get_spec(family)
    return casimir_bilocal(spec).normal_product() / spec.casimir2_adjoint


def gl11_tensor() -> OperatorExpr:
    m = gl11_multiplet()
    H, J, Sp, Sm = m["H"], m["J"], m["S+"], m["S-"]
    quad = normal_product(J, J) - normal_product(H, H) + normal_product(Sp, Sm) - normal_product(Sm, Sp)
    E = H - J
    return quad * (-1 / (2 * N)) + normal_product(E, E) / (2 * N**2)


def osp22_tensor(level=N) -> OperatorExpr:
    """Single-Casimir Sugawara tensor of the osp(2|2) multiplet at the given level."""
    m = osp22_multiplet()
    np_ = normal_product
    body = (
        np_(m["J"], m["J"])
        - np_(m["H"], m["H"])
        - (np_(m["J+"], m["J-"]) + np_(m["J-"], m["J+"])) * RatN(1, 2)
        + np_(m["S+"], m["S-"])
        - np_(m["S-"], m["S+"])
        + np_(m["Shat-"], m["Shat+"])
        - np_(m["Shat+"], m["Shat-"])
    )
    return body / (2 * (2 - RatN(level)))


def build_T(label: str, level=None) -> StressTensor:
    """Stress tensor for ``free``, ``su0``, ``so0``, ``gl11`` or ``osp22``.

    ``level`` only applies to ``osp22`` and defaults to ``N``.
    """
    if label == "free":
        expr = free_tensor()
    elif label in ("su0", "so0"):
        expr = g0_tensor(label[:2])
    elif label == "gl11":
        expr = gl11_tensor()
    elif label == "osp22":
        level = N if level is None else RatN(level)
        expr = osp22_tensor(level)
        if level != N:
            label = f"osp22({level})"
    else:
        raise ValueError(f"unknown stress tensor {label!r}")
    return StressTensor(expr, label)


@dataclass
class Report:
    """Outcome of one claimed identity ``lhs - rhs == 0``."""

    claim: str
    residual: OperatorExpr = field(repr=False)

    @property
    def status(self) -> str:
        return "proven" if not self.residual else "failed"

    @property
    def ok(self) -> bool:
        return not self.residual

    def to_dict(self, max_witnesses=10) -> dict:
        out = {
            "claim": self.claim,
            "status": self.status,
            "lhs_minus_rhs_term_count": len(self.residual),
        }
        if self.residual:
            out["witness_terms"] = [
                {"coeff": str(c), "monomial": render(OperatorExpr._from_canonical({m: RatN(1)}))}
                for m, c in list(self.residual)[:max_witnesses]
            ]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def decomposition_report(family: str, tensors=None) -> Report:
    """Check ``T_free = T_super + T_boson``; ``tensors`` overrides the three inputs."""
    if family not in FAMILY_SECTORS:
        raise ValueError(f"decomposition is proven symbolically for su and so, not {family!r}")
    if tensors is None:
        sup, bos = FAMILY_SECTORS[family]
        tensors = (free_tensor(), build_T(sup).expr, build_T(bos).expr)
    free, sup, bos = tensors
    names = {"su": "T_free = T_gl11(N) + T_su(N)0", "so": "T_free = T_osp22(N) + T_so(N)0"}
    return Report(names[family], free - sup - bos)


def verify_decomposition(family: str) -> bool:
    return decomposition_report(family).ok


def _as_expr(T) -> OperatorExpr:
    return T.expr if isinstance(T, StressTensor) else T


def central_charge(T) -> RatN:
    T = _as_expr(T)
    return 2 * ope(T, T, orders={(4, 0)}).pole_coeff(4, 0).scalar_part()


def conformal_weight(T, fld: OperatorExpr) -> RatN:
    """Double-pole eigenvalue of ``T`` on ``fld``."""
    T = _as_expr(T)
    if len(fld) != 1:
        raise ValueError("conformal_weight expects a single monomial")
    (m, c), = fld.terms.items()
    double = ope(T, fld, depth=None, orders={(2, 0)}).pole_coeff(2, 0)
    weight = double.coeff(m) / c
    if double != fld * weight:
        raise NonPrimaryError(f"double pole {render(double)} is not a multiple of {render(fld)}")
    return weight


def kappa_kinetic(T) -> RatN:
    """``kappa`` such that ``T`` contains ``-kappa`` times the kinetic block."""
    T = _as_expr(T)
    block = kinetic_block()
    ratios = {T.coeff(m) / c for m, c in block.terms.items()}
    if len(ratios) != 1:
        raise InconsistentKineticBlock(f"kinetic prefactors disagree: {sorted(map(str, ratios))}")
    return -ratios.pop()


def quartic_part(T) -> OperatorExpr:
    T = _as_expr(T)
    return OperatorExpr._from_canonical({m: c for m, c in T.terms.items() if len(m.fields) == 4})


def density_operator(index="i") -> OperatorExpr:
    """``psibar_- psi_+ + psi_- psibar_+ + betabar_- beta_+ + beta_- betabar_+``."""
    def pair(s, first_anti):
        a = FieldSymbol(ANTI if first_anti else HOL, s, -1, 0, index)
        b = FieldSymbol(HOL if first_anti else ANTI, s, 1, 0, index)
        return OperatorExpr([(Monomial((a, b)), 1)])

    return pair(PSI, True) + pair(PSI, False) + pair(BETA, True) + pair(BETA, False)


def density_double_pole(T, rho=None) -> tuple:
    """``(kappa_z, kappa_zbar)`` from ``T rho`` and ``Tbar rho``; raises if not proportional."""
    T = _as_expr(T)
    rho = density_operator() if rho is None else rho
    out = []
    for tensor, key in ((T, (2, 0)), (mirror(T), (0, 2))):
        double = ope(tensor, rho, depth=None, orders={key}).pole_coeff(*key)
        m, c = next(iter(rho))
        k = double.coeff(m) / c
        if double != rho * k:
            raise NonPrimaryError(f"density operator is not an eigenvector: {render(double)}")
        out.append(k)
    return tuple(out)


@dataclass(frozen=True)
class DosResult:
    family: str
    kappa: RatN
    gamma: RatN
    nu: RatN
    gamma_direct: RatN
    quartic_double_pole_zero: bool

    @property
    def routes_agree(self) -> bool:
        return self.gamma == self.gamma_direct

    def eval(self, n) -> dict:
        return {"gamma": self.gamma.eval(n), "nu": self.nu.eval(n)}


def _exponents(family, kappa, gamma_direct, quartic_zero) -> DosResult:
    gamma = 2 * kappa
    return DosResult(family, kappa, gamma, gamma / (2 - gamma), gamma_direct, quartic_zero)


def dos_exponents(family: str) -> DosResult:
    """Density-of-states exponents from the surviving super sector.

    ``sp`` reuses the osp(2|2) tensor with the rank continued to ``-2N``; the
    explicit symplectic construction is checked separately by the oracle.
    """
    if family == "su":
        T = gl11_tensor()
    elif family in ("so", "sp"):
        T = osp22_tensor()
    else:
        raise ValueError(f"unknown family {family!r}")
    kappa = kappa_kinetic(T)
    kz, kzb = density_double_pole(T)
    quartic_zero = not ope(quartic_part(T), density_operator(), depth=None, orders={(2, 0)}).pole_coeff(2, 0)
    if family == "sp":
        kappa, kz, kzb = (x.subs_linear(-2) for x in (kappa, kz, kzb))
    return _exponents(family, kappa, kz + kzb, quartic_zero)


# --- one-loop beta functions -----------------------------------------------


def _lr(a, b):
    return formal_product(a, mirror(b))


def perturbing_operators(family: str) -> dict:
    """Left-right invariants added to the free action, keyed by coupling name."""
    if family == "su":
        m = gl11_multiplet()
        H, J, Sp, Sm = m["H"], m["J"], m["S+"], m["S-"]
        return {
            "g": left_right_casimir(SU),
            "g1'": _lr(J, J) - _lr(H, H) + _lr(Sp, Sm) - _lr(Sm, Sp),
            "g2'": -_lr(H - J, H - J),
        }
    if family == "so":
        m = osp22_multiplet()
        body = (
            _lr(m["J"], m["J"])
            - _lr(m["H"], m["H"])
            - (_lr(m["J+"], m["J-"]) + _lr(m["J-"], m["J+"])) * RatN(1, 2)
            + _lr(m["S+"], m["S-"])
            - _lr(m["S-"], m["S+"])
            + _lr(m["Shat-"], m["Shat+"])
            - _lr(m["Shat+"], m["Shat-"])
        )
        return {"g": left_right_casimir(SO), "g'": -body}
    raise ValueError(f"beta functions are available for su and so, not {family!r}")


def solve_linear(columns: list, target: OperatorExpr):
    """Exact ``target = sum_k x_k columns[k]``; returns ``(x, residue)``."""
    monos = sorted({m for c in columns for m in c.terms} | set(target.terms), key=str)
    rows = [[c.coeff(m) for c in columns] + [target.coeff(m)] for m in monos]
    ncols = len(columns)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    x = [RatN(0)] * ncols
    for k, col in enumerate(pivots):
        x[col] = rows[k][-1]
    fit = OperatorExpr.zero()
    for xk, c in zip(x, columns):
        fit = fit + c * xk
    return x, target - fit


def _factor_text(c: RatN) -> str:
    """``c`` as a factor: parenthesized unless it is a product or a single term."""
    text = str(c)
    depth = 0
    for k, ch in enumerate(text):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and (ch == "/" or (ch in "+-" and k > 0)):
            return f"({text})"
    return text


@dataclass
class BetaSystem:
    family: str
    couplings: list
    structure: dict  # (k, i, j) -> C^k_ij

    def coefficient(self, k, i, j) -> RatN:
        return self.structure.get((k, i, j), RatN(0))

    def beta(self, k) -> dict:
        """``beta_k`` as ``{(i, j): coeff}`` over unordered coupling pairs."""
        out = {}
        order = {g: n for n, g in enumerate(self.couplings)}
        for i in self.couplings:
            for j in self.couplings:
                key = tuple(sorted((i, j), key=order.__getitem__))
                out[key] = out.get(key, RatN(0)) - self.coefficient(k, i, j)
        return {key: v for key, v in out.items() if v}

    def render(self) -> list:
        lines = []
        for k in self.couplings:
            parts = []
            for (i, j), c in self.beta(k).items():
                mono = f"{i}^2" if i == j else f"{i}*{j}"
                neg = c.num[-1] < 0
                mag = -c if neg else c
                coeff = "" if mag == 1 else _factor_text(mag) + "*"
                parts.append(("- " if neg else "+ ") + coeff + mono)
            body = " ".join(parts).lstrip("+ ") if parts else "0"
            if body.startswith("- "):
                body = "-" + body[2:]
            lines.append(f"beta_{k} = {body}")
        return lines

    def __str__(self):
        return "\n".join(self.render())


def beta_one_loop(family: str) -> BetaSystem:
    ops = perturbing_operators(family)
    names = list(ops)
    columns = [ops[k] for k in names]
    structure = {}
    for i in names:
        for j in names:
            entry = ope(ops[i], ops[j], orders={(1, 1)}).pole_coeff(1, 1)
            entry = entry - OperatorExpr.identity(entry.scalar_part()) if IDENTITY in entry.terms else entry
            x, residue = solve_linear(columns, entry)
            if residue:
                raise BetaResidualError((i, j), residue)
            for k, c in zip(names, x):
                if c:
                    structure[(k, i, j)] = c
    return BetaSystem(family, names, structure)
