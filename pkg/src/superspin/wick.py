"""Operator product expansions of free-field composites by Wick's theorem.

``ope(a, b)`` expands ``a(z, zbar) b(w, wbar)`` as

    sum_{p, q} C_{p,q}(w, wbar) / ((z - w)^p (zbar - wbar)^q)

keeping the entries with ``p, q >= 0``.  Every uncontracted field of ``a`` is
Taylor expanded about ``w``; the ``(0, 0)`` entry is the point-splitting normal
product.  Identity-operator content is kept (empty monomial) so that levels and
central charges can be read off.
"""

from __future__ import annotations

import json
import os
from collections import defaultdict
from fractions import Fraction
from math import comb, factorial

from .expressions import (
    ANTI,
    HOL,
    PSI,
    FieldSymbol,
    Monomial,
    OperatorExpr,
    _names,
    _odd_sign,
    grading_classes,
    canonical_form,
    derivative,
    render_latex,
    render_monomial,
    rename_apart,
)
from .scalars import RatN

DEFAULT_DEPTH = int(os.environ.get("SUPERSPIN_OPE_DEPTH", "2"))


def propagator_sign(a: FieldSymbol, b: FieldSymbol) -> int:
    """Sign ``s`` in ``<a(z) b(w)> = s * delta / (z - w)``; 0 when they do not pair.

    psi_-(z) psi_+(w) and psi_+(z) psi_-(w) give +1; beta_+(z) beta_-(w) gives
    +1 and beta_-(z) beta_+(w) gives -1.  Different species or chiralities, equal
    fermion charges and like-sign ghosts do not contract.
    """
    if a.chirality != b.chirality or a.species != b.species or a.charge == b.charge:
        return 0
    if a.species == PSI:
        return 1
    return 1 if a.charge > 0 else -1


def contraction_value(a: FieldSymbol, b: FieldSymbol):
    """``(constant, pole)`` for ``<d^m a(z) d^k b(w)>`` without its delta.

    Uses ``d_z^m d_w^k 1/(z-w) = (-1)^m (m+k)! / (z-w)^(m+k+1)``.
    """
    s = propagator_sign(a, b)
    if not s:
        return 0, 0
    m, k = a.deriv, b.deriv
    return s * (-1) ** m * factorial(m + k), m + k + 1


def count_matchings(s: int, t: int) -> int:
    """Number of partial matchings between clusters of sizes ``s`` and ``t``."""
    return sum(comb(s, k) * comb(t, k) * factorial(k) for k in range(min(s, t) + 1))


def iter_matchings(s: int, t: int, allowed=None):
    """Yield every partial matching as a tuple of ``(i, j)`` pairs, ``i`` increasing.

    ``allowed(i, j)`` prunes pairs; without it all ``count_matchings(s, t)``
    matchings are produced.
    """
    used = [False] * t
    current = []

    def rec(i):
        if i == s:
            yield tuple(current)
            return
        yield from rec(i + 1)
        for j in range(t):
            if used[j] or (allowed is not None and not allowed(i, j)):
                continue
            used[j] = True
            current.append((i, j))
            yield from rec(i + 1)
            current.pop()
            used[j] = False

    yield from rec(0)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _taylor_terms(fields, chirality, max_order):
    """Yield ``(order, weight, bumped_fields)`` for the Taylor expansion about w."""
    slots = [k for k, f in enumerate(fields) if f.chirality == chirality]
    for order in range(max_order + 1):
        if order and not slots:
            break
        for comp in _compositions(order, len(slots)):
            weight = Fraction(1)
            out = list(fields)
            for k, n in zip(slots, comp):
                if n:
                    weight /= factorial(n)
                    out[k] = out[k]._replace(deriv=out[k].deriv + n)
            yield order, weight, out


class LaurentOPE:
    """Bi-graded Laurent expansion; ``coeffs[(p, q)]`` sits at ``(w, wbar)``."""

    def __init__(self, coeffs=None, depth=None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}
        self.depth = depth

    def pole_coeff(self, p: int, q: int = 0) -> OperatorExpr:
        return self.coeffs.get((p, q), OperatorExpr.zero())

    def __getitem__(self, key):
        return self.pole_coeff(*key)

    def orders(self):
        return sorted(self.coeffs, key=lambda k: (-(k[0] + k[1]), -k[0]))

    def singular(self) -> dict:
        return {k: v for k, v in self.coeffs.items() if k != (0, 0)}

    def is_regular(self) -> bool:
        return not self.singular()

    def __eq__(self, other):
        return isinstance(other, LaurentOPE) and self.coeffs == other.coeffs

    def to_records(self):
        out = []
        for p, q in self.orders():
            terms = [{"coeff": str(c), "monomial": render_monomial(m) or "1"} for m, c in self.coeffs[(p, q)]]
            out.append({"pole_z": p, "pole_zbar": q, "terms": terms})
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_records(), **kw)

    def __str__(self):
        if not self.coeffs:
            return "0"
        lines = []
        for p, q in self.orders():
            pole = []
            if p:
                pole.append("(z-w)" if p == 1 else f"(z-w)^{p}")
            if q:
                pole.append("(zb-wb)" if q == 1 else f"(zb-wb)^{q}")
            head = "regular" if not pole else "1/" + "".join(pole)
            lines.append(f"[{head}]  {self.coeffs[(p, q)]}")
        return "\n".join(lines)

    def to_latex(self) -> str:
        parts = []
        for p, q in self.orders():
            den = []
            if p:
                den.append("(z-w)" + (f"^{{{p}}}" if p > 1 else ""))
            if q:
                den.append(r"(\bar z-\bar w)" + (f"^{{{q}}}" if q > 1 else ""))
            body = render_latex(self.coeffs[(p, q)])
            if den:
                parts.append(rf"\frac{{{body}}}{{{' '.join(den)}}}")
            else:
                parts.append(rf"\left({body}\right)_{{\rm reg}}")
        return " + ".join(parts) if parts else "0"


def _monomial_ope(ma: Monomial, mb: Monomial, depth, wanted, acc):
    """Accumulate the rational Wick data of one monomial pair.

    ``acc[(p, q)][monomial][npow]`` collects rational weights of ``N**npow``.
    """
    A, B = ma.fields, mb.fields
    s, t = len(A), len(B)
    odd = grading_classes(A + B)
    base_deltas = ma.deltas + mb.deltas

    def allowed(i, j):
        return propagator_sign(A[i], B[j]) != 0

    for matching in iter_matchings(s, t, allowed):
        const = 1
        P = Q = 0
        deltas = list(base_deltas)
        order = []
        for i, j in matching:
            c, pole = contraction_value(A[i], B[j])
            const *= c
            if A[i].chirality == HOL:
                P += pole
            else:
                Q += pole
            deltas.append((A[i].index, B[j].index))
            order += [i, s + j]
        if wanted is not None and not any(p <= P and q <= Q for p, q in wanted):
            continue
        hit_a = {i for i, _ in matching}
        hit_b = {j for _, j in matching}
        rest_a = [i for i in range(s) if i not in hit_a]
        rest_b = [j for j in range(t) if j not in hit_b]
        order += rest_a + [s + j for j in rest_b]
        sign = _odd_sign(order, odd)
        fa = [A[i] for i in rest_a]
        fb = tuple(B[j] for j in rest_b)
        dtuple = tuple(deltas)
        max_p = P if depth is None else min(P, depth)
        max_q = Q if depth is None else min(Q, depth)
        for th, wh, fa_h in _taylor_terms(fa, HOL, max_p):
            for ta, wa, fa_ha in _taylor_terms(fa_h, ANTI, max_q):
                key = (P - th, Q - ta)
                if wanted is not None and key not in wanted:
                    continue
                res = canonical_form(tuple(fa_ha) + fb, dtuple)
                if res is None:
                    continue
                mono, sgn, npow = res
                slot = acc[key][mono]
                slot[npow] = slot.get(npow, 0) + sign * sgn * const * wh * wa


def ope(a: OperatorExpr, b: OperatorExpr, depth: int | None = DEFAULT_DEPTH, orders=None) -> LaurentOPE:
    """Operator product expansion ``a(z) b(w)`` located at ``w``.

    ``depth`` caps the Taylor order used to expand the fields of ``a`` about
    ``w``; ``None`` expands as far as needed so every stored entry is exact.
    With an integer depth the entries of pole order ``p`` are exact whenever
    every contraction pole is at most ``p + depth`` (true for all singular
    entries of the bilinear and quartic operators handled here at the default).
    ``orders`` restricts the computation to a set of ``(p, q)`` keys.
    """
    wanted = None if orders is None else set(orders)
    # grouped[key][mono][coefficient product] -> {npow: rational}
    grouped: dict = defaultdict(lambda: defaultdict(dict))
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            ma2 = rename_apart(ma, _names(mb), "a")
            mb2 = rename_apart(mb, _names(ma2), "b")
            acc = defaultdict(lambda: defaultdict(dict))
            _monomial_ope(ma2, mb2, depth, wanted, acc)
            c = ca * cb
            for key, monos in acc.items():
                for mono, poly in monos.items():
                    slot = grouped[key][mono].setdefault(c, {})
                    for k, v in poly.items():
                        slot[k] = slot.get(k, 0) + v
    coeffs = {}
    for key, monos in grouped.items():
        terms = {}
        for mono, by_c in monos.items():
            total = RatN(0)
            for c, poly in by_c.items():
                if not any(poly.values()):
                    continue
                top = max(poly)
                p = RatN.from_poly(tuple(Fraction(poly.get(k, 0)) for k in range(top + 1)))
                total = total + c * p
            if total:
                terms[mono] = total
        if terms:
            coeffs[key] = OperatorExpr._from_canonical(terms)
    return LaurentOPE(coeffs, depth)


def pole_coeff(l: LaurentOPE, p: int, q: int = 0) -> OperatorExpr:
    return l.pole_coeff(p, q)


def normal_product(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    """Point-splitting product ``lim_{z->w} [a(z) b(w) - singular part]``."""
    return ope(a, b, depth=None, orders={(0, 0)}).pole_coeff(0, 0)


def _exchange_sign(a: OperatorExpr, b: OperatorExpr) -> int:
    # the empty expression is homogeneous of either parity
    pa, pb = (x.parity() if x else 0 for x in (a, b))
    if pa is None or pb is None:
        raise ValueError("graded symmetry needs homogeneous operators")
    return -1 if pa and pb else 1


def swapped_ope(a: OperatorExpr, b: OperatorExpr) -> dict:
    """Singular entries of ``a(z) b(w)`` rebuilt from ``ope(b, a)``.

    ``b(w) a(z)`` is expanded about ``z``; continuing ``(w - z) -> -(z - w)``
    and re-expanding the ``z``-located coefficients about ``w`` gives

        C^{ab}_{p,q} = s * sum_{p'>=p, q'>=q} (-1)^(p'+q') / ((p'-p)! (q'-q)!)
                       d^(p'-p) dbar^(q'-q) C^{ba}_{p',q'}.
    """
    sign = _exchange_sign(a, b)
    ba = ope(b, a, depth=None)
    out = {}
    keys = set(ba.coeffs)
    for p in range(0, max((k[0] for k in keys), default=0) + 1):
        for q in range(0, max((k[1] for k in keys), default=0) + 1):
            if p == 0 and q == 0:
                continue
            total = OperatorExpr.zero()
            for (pp, qq), c in ba.coeffs.items():
                if pp < p or qq < q:
                    continue
                term = derivative(derivative(c, HOL, pp - p), ANTI, qq - q)
                w = Fraction(sign * (-1) ** (pp + qq), factorial(pp - p) * factorial(qq - q))
                total = total + term.scale(w)
            if total:
                out[(p, q)] = total
    return out


def graded_symmetry_check(a: OperatorExpr, b: OperatorExpr, depth=None) -> bool:
    """``a(z) b(w) == (-1)^{|a||b|} b(w) a(z)`` at the level of singular entries."""
    direct = ope(a, b, depth=depth).singular()
    return direct == swapped_ope(a, b)
