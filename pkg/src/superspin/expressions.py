"""Normal-ordered composite operators of the free fermions and ghosts.

A :class:`Monomial` is a fully normal-ordered product of :class:`FieldSymbol`
factors together with unresolved Kronecker deltas between free indices.  An
:class:`OperatorExpr` maps canonical monomials to :class:`RatN` coefficients.
Every constructor canonicalizes, so ``==`` decides operator identities.

Flavor indices are either concrete (``int``) or abstract (``str``).  An
abstract name occurring twice in a monomial is summed over; ``N`` is the range
of the sum, so a closed delta loop contributes a factor ``N``.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import permutations
from typing import Iterable, NamedTuple, Union

from .scalars import RatN

Index = Union[int, str]

HOL, ANTI = 0, 1
PSI, BETA = 0, 1

_DUMMY_NAMES = "ijklmnpqrstuvxy"


class MalformedIndexError(ValueError):
    """An abstract index occurs three or more times in one monomial."""


class FieldSymbol(NamedTuple):
    chirality: int  # HOL or ANTI
    species: int  # PSI (odd) or BETA (even)
    charge: int  # +1 or -1
    deriv: int  # derivatives in the field's own chirality
    index: Index

    @property
    def odd(self) -> bool:
        return self.species == PSI

    def with_index(self, index: Index) -> "FieldSymbol":
        return self._replace(index=index)


class Monomial(NamedTuple):
    fields: tuple = ()
    deltas: tuple = ()

    def parity(self) -> int:
        return sum(1 for f in self.fields if f.species == PSI) % 2

    def names(self) -> Counter:
        c = Counter(f.index for f in self.fields if isinstance(f.index, str))
        for a, b in self.deltas:
            for x in (a, b):
                if isinstance(x, str):
                    c[x] += 1
        return c

    def free_indices(self) -> set:
        return {x for x, k in self.names().items() if k == 1}

    def dummies(self) -> set:
        return {x for x, k in self.names().items() if k == 2}


IDENTITY = Monomial((), ())


def _idx_key(x, dummy_rank=None):
    if isinstance(x, int):
        return (0, x)
    if dummy_rank is not None and x in dummy_rank:
        return (2, dummy_rank[x])
    return (1, x)


def _field_key(f: FieldSymbol, idx_key):
    return (f.chirality, f.species, 0 if f.charge > 0 else 1, f.deriv, idx_key)


def _resolve_deltas(fields, deltas):
    """Contract deltas against summed indices.  Returns (fields, deltas, npow) or None."""
    fields = list(fields)
    deltas = [tuple(d) for d in deltas]
    npow = 0
    changed = True
    while changed:
        changed = False
        counts = Counter(f.index for f in fields if isinstance(f.index, str))
        for a, b in deltas:
            for x in (a, b):
                if isinstance(x, str):
                    counts[x] += 1
        bad = [x for x, k in counts.items() if k > 2]
        if bad:
            raise MalformedIndexError(f"index {bad[0]!r} occurs {counts[bad[0]]} times")
        for pos, (a, b) in enumerate(deltas):
            if a == b:
                del deltas[pos]
                if isinstance(a, str):
                    npow += 1
                changed = True
                break
            if isinstance(a, int) and isinstance(b, int):
                return None
            target = None
            for u, v in ((a, b), (b, a)):
                if isinstance(u, str) and counts[u] == 2:
                    target = (u, v)
                    break
            if target is None:
                continue
            u, v = target
            del deltas[pos]
            for k, f in enumerate(fields):
                if f.index == u:
                    fields[k] = f.with_index(v)
                    break
            else:
                for k, (c, d) in enumerate(deltas):
                    if c == u:
                        deltas[k] = (v, d)
                        break
                    if d == u:
                        deltas[k] = (c, v)
                        break
            changed = True
            break
    return fields, deltas, npow


def _dummy_names(count, taken):
    out = []
    pool = [c for c in _DUMMY_NAMES if c not in taken]
    k = 1
    while len(pool) < count:
        name = f"i{k}"
        if name not in taken:
            pool.append(name)
        k += 1
    out.extend(pool[:count])
    return out


def grading_classes(fields) -> list:
    """Grassmann parity per field.

    Odd fields of both chiralities mutually anticommute; this is the only
    choice under which the left-right invariants are neutral under the
    diagonal odd charges.
    """
    return [1 if f.species == PSI else 0 for f in fields]


def _odd_sign(order, odd):
    """Sign of permuting odd elements into ``order`` (list of original positions)."""
    seq = [p for p in order if odd[p]]
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j] and odd[seq[i]] == odd[seq[j]]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=1 << 18)
def canonical_form(fields: tuple, deltas: tuple = ()):
    """Canonical ``(Monomial, sign, npow)`` or ``None`` when the monomial vanishes.

    The input product equals ``sign * N**npow`` times the returned monomial.
    """
    res = _resolve_deltas(fields, deltas)
    if res is None:
        return None
    fields, deltas, npow = res
    counts = Counter(f.index for f in fields if isinstance(f.index, str))
    dummies = sorted((x for x, k in counts.items() if k == 2), key=str)
    odd = grading_classes(fields)
    n = len(fields)
    best = None
    best_sign = 0
    vanishes = False
    for perm in permutations(range(len(dummies))):
        rank = dict(zip(dummies, perm))
        keys = [_field_key(f, _idx_key(f.index, rank)) for f in fields]
        order = sorted(range(n), key=keys.__getitem__)
        tup = tuple(keys[p] for p in order)
        sign = _odd_sign(order, odd)
        if best is None or tup < best:
            best, best_sign, vanishes, best_rank = tup, sign, False, rank
            best_order = order
        elif tup == best and sign != best_sign:
            vanishes = True
    if vanishes:
        return None
    for p, q in zip(best, best[1:]):
        if p == q and p[1] == PSI:
            return None
    free = {f.index for f in fields if isinstance(f.index, str) and counts[f.index] == 1}
    for a, b in deltas:
        free.update(x for x in (a, b) if isinstance(x, str))
    names = _dummy_names(len(dummies), free)
    rename = {d: names[best_rank[d]] for d in dummies}
    out_fields = tuple(
        fields[p].with_index(rename.get(fields[p].index, fields[p].index)) for p in best_order
    )
    out_deltas = tuple(
        sorted((tuple(sorted((a, b), key=_idx_key)) for a, b in deltas), key=lambda d: (_idx_key(d[0]), _idx_key(d[1])))
    )
    return Monomial(out_fields, out_deltas), best_sign, npow


def canonicalize(m: Monomial, c=1):
    """Canonical pair ``(Monomial, RatN)``; a vanishing monomial gives ``(None, 0)``."""
    res = canonical_form(tuple(m.fields), tuple(m.deltas))
    if res is None:
        return None, RatN(0)
    mono, sign, npow = res
    coeff = RatN(c) * sign
    if npow:
        coeff = coeff * RatN.from_poly((0,) * npow + (1,))
    return mono, coeff


def rename_apart(m: Monomial, taken: set, prefix: str) -> Monomial:
    """Rename the dummies of ``m`` to fresh names avoiding ``taken``."""
    dummies = m.dummies()
    if not dummies & taken:
        return m
    avoid = taken | set(m.names())
    mapping = {}
    k = 0
    for d in sorted(dummies):
        while f"_{prefix}{k}" in avoid:
            k += 1
        mapping[d] = f"_{prefix}{k}"
        k += 1
    return Monomial(
        tuple(f.with_index(mapping.get(f.index, f.index)) for f in m.fields),
        tuple((mapping.get(a, a), mapping.get(b, b)) for a, b in m.deltas),
    )


class OperatorExpr:
    """Finite ``RatN``-weighted sum of canonical monomials.

    Treat instances as immutable.  Arithmetic returns new canonical objects;
    ``a * b`` for two expressions is the formal normal-ordered juxtaposition
    (no contractions; see :mod:`superspin.wick` for operator products).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for m, c in items:
                mono, coeff = canonicalize(m, c)
                if mono is None or not coeff:
                    continue
                _accumulate(acc, mono, coeff)
        self.terms = acc

    @classmethod
    def _from_canonical(cls, terms: dict) -> "OperatorExpr":
        obj = cls.__new__(cls)
        obj.terms = {m: c for m, c in terms.items() if c}
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, c=1) -> "OperatorExpr":
        return cls._from_canonical({IDENTITY: RatN(c)})

    @classmethod
    def zero(cls) -> "OperatorExpr":
        return cls._from_canonical({})

    @classmethod
    def field(cls, species, charge, index, chirality=HOL, deriv=0) -> "OperatorExpr":
        return cls([(Monomial((FieldSymbol(chirality, species, charge, deriv, index),)), 1)])

    @classmethod
    def delta(cls, i, j) -> "OperatorExpr":
        return cls([(Monomial((), ((i, j),)), 1)])

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            other = _scalar_operand(other)
            if other is None:
                return NotImplemented
            other = OperatorExpr.identity(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(acc, m, c)
        return OperatorExpr._from_canonical(acc)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr._from_canonical({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, OperatorExpr):
            other = _scalar_operand(other)
            if other is None:
                return NotImplemented
            other = OperatorExpr.identity(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "OperatorExpr":
        c = RatN(c)
        if not c:
            return OperatorExpr.zero()
        return OperatorExpr._from_canonical({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return formal_product(self, other)
        c = _scalar_operand(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def __rmul__(self, other):
        c = _scalar_operand(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def __truediv__(self, other):
        c = _scalar_operand(other)
        if c is None:
            return NotImplemented
        return self.scale(RatN(1) / c)

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, OperatorExpr):
            return self.terms == other.terms
        c = _scalar_operand(other)
        if c is None:
            return NotImplemented
        return self.terms == OperatorExpr.identity(c).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda mc: monomial_order(mc[0])))

    def coeff(self, m) -> RatN:
        """Coefficient of a monomial (canonicalized first, sign absorbed)."""
        if isinstance(m, OperatorExpr):
            if len(m.terms) != 1:
                raise ValueError("coeff() needs a single-term expression")
            (mono, c), = m.terms.items()
            return self.terms.get(mono, RatN(0)) / c
        mono, c = canonicalize(m)
        if mono is None:
            return RatN(0)
        return self.terms.get(mono, RatN(0)) / c

    def scalar_part(self) -> RatN:
        return self.terms.get(IDENTITY, RatN(0))

    def parity(self):
        """0 or 1 for homogeneous expressions, ``None`` for mixed or empty."""
        ps = {m.parity() for m in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def is_holomorphic(self) -> bool:
        return all(f.chirality == HOL for m in self.terms for f in m.fields)

    def free_indices(self) -> set:
        out = set()
        for m in self.terms:
            out |= m.free_indices()
        return out

    def map_coeffs(self, fn) -> "OperatorExpr":
        return OperatorExpr([(m, fn(c)) for m, c in self.terms.items()])

    # -- rendering ------------------------------------------------------

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"OperatorExpr({render(self)!r})"

    def to_latex(self) -> str:
        return render_latex(self)


def _scalar_operand(x):
    if isinstance(x, RatN):
        return x
    try:
        return RatN(x)
    except TypeError:
        return None


def _accumulate(acc, m, c):
    prev = acc.get(m)
    if prev is None:
        acc[m] = c
    else:
        s = prev + c
        if s:
            acc[m] = s
        else:
            del acc[m]


def _names(m: Monomial) -> set:
    return set(m.names())


def formal_product(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    """Juxtapose normal-ordered monomials of ``a`` and ``b`` (no contractions)."""
    out = []
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            ma2 = rename_apart(ma, _names(mb), "a")
            mb2 = rename_apart(mb, _names(ma2), "b")
            out.append((Monomial(ma2.fields + mb2.fields, ma2.deltas + mb2.deltas), ca * cb))
    return OperatorExpr(out)


def expr_add(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return a + b


def expr_scale(a: OperatorExpr, c) -> OperatorExpr:
    return a.scale(c)


def expr_mul_formal(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return formal_product(a, b)


def mirror(a: OperatorExpr) -> OperatorExpr:
    """Swap holomorphic and antiholomorphic symbols (``d`` becomes ``dbar``)."""
    return OperatorExpr(
        [
            (Monomial(tuple(f._replace(chirality=1 - f.chirality) for f in m.fields), m.deltas), c)
            for m, c in a.terms.items()
        ]
    )


def derivative(a: OperatorExpr, chirality: int = HOL, order: int = 1) -> OperatorExpr:
    """Leibniz derivative ``d/dz`` (or ``d/dzbar``) of every monomial."""
    out = a
    for _ in range(order):
        terms = []
        for m, c in out.terms.items():
            for k, f in enumerate(m.fields):
                if f.chirality != chirality:
                    continue
                fields = m.fields[:k] + (f._replace(deriv=f.deriv + 1),) + m.fields[k + 1 :]
                terms.append((Monomial(fields, m.deltas), c))
        out = OperatorExpr(terms)
    return out


def monomial_order(m: Monomial):
    return (
        len(m.fields),
        tuple(_field_key(f, _idx_key(f.index)) for f in m.fields),
        tuple((_idx_key(a), _idx_key(b)) for a, b in m.deltas),
    )


# --- convenience builders ------------------------------------------------


def psi(charge, index, chirality=HOL, deriv=0) -> OperatorExpr:
    return OperatorExpr.field(PSI, _charge(charge), index, chirality, deriv)


def beta(charge, index, chirality=HOL, deriv=0) -> OperatorExpr:
    return OperatorExpr.field(BETA, _charge(charge), index, chirality, deriv)


def _charge(q):
    if q in ("+", 1, +1):
        return 1
    if q in ("-", -1):
        return -1
    raise ValueError(f"charge must be '+' or '-', got {q!r}")


def bilinear(s1, q1, s2, q2, i="i", j=None, chirality=HOL) -> OperatorExpr:
    """``phi1^i phi2^j``; with ``j=None`` the index is summed (``j = i``)."""
    j = i if j is None else j
    f1 = FieldSymbol(chirality, s1, _charge(q1), 0, i)
    f2 = FieldSymbol(chirality, s2, _charge(q2), 0, j)
    return OperatorExpr([(Monomial((f1, f2)), 1)])


# --- rendering -----------------------------------------------------------


def _render_field(f: FieldSymbol) -> str:
    name = ("psi" if f.species == PSI else "beta") + ("b" if f.chirality == ANTI else "")
    text = f"{name}({'+' if f.charge > 0 else '-'},{f.index})"
    d = "d" if f.chirality == HOL else "db"
    for _ in range(f.deriv):
        text = f"{d}({text})"
    return text


def render_monomial(m: Monomial) -> str:
    parts = [f"delta({a},{b})" for a, b in m.deltas]
    if len(m.fields) == 1:
        parts.append(_render_field(m.fields[0]))
    elif m.fields:
        parts.append("no(" + ", ".join(_render_field(f) for f in m.fields) + ")")
    return " * ".join(parts)


def _render_coeff(c: RatN) -> str:
    text = str(c)
    if c.is_constant() and c.constant_value().denominator == 1:
        return text
    return f"({text})"


def render(e: OperatorExpr) -> str:
    if not e.terms:
        return "0"
    out = []
    for m, c in e:
        neg = c.num[-1] < 0
        mag = -c if neg else c
        mono = render_monomial(m)
        if not mono:
            body = str(mag)
            if mag.den == (1,) and sum(1 for x in mag.num if x) > 1:
                body = f"({body})"
        elif mag == 1:
            body = mono
        else:
            body = f"{_render_coeff(mag)} * {mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def _latex_field(f: FieldSymbol) -> str:
    base = r"\psi" if f.species == PSI else r"\beta"
    if f.chirality == ANTI:
        base = rf"\overline{{{base}}}"
    sym = f"{base}_{{{'+' if f.charge > 0 else '-'}}}^{{{f.index}}}"
    if f.deriv:
        d = r"\partial_{z}" if f.chirality == HOL else r"\partial_{\bar z}"
        power = f"^{{{f.deriv}}}" if f.deriv > 1 else ""
        sym = f"{d}{power}{sym}"
    return sym


def _latex_ratn(c: RatN) -> str:
    text = str(c).replace("*", " ")
    if "/" in text and c.den != (1,):
        from .scalars import _render_poly

        num = _render_poly(c.num).replace("*", " ")
        den = _render_poly(c.den).replace("*", " ")
        return rf"\frac{{{num}}}{{{den}}}"
    return text


def render_latex(e: OperatorExpr) -> str:
    if not e.terms:
        return "0"
    out = []
    for m, c in e:
        neg = c.num[-1] < 0
        mag = -c if neg else c
        parts = [rf"\delta_{{{a}{b}}}" for a, b in m.deltas]
        if m.fields:
            body = " ".join(_latex_field(f) for f in m.fields)
            parts.append(body if len(m.fields) == 1 else rf"\colon\! {body} \!\colon")
        mono = " ".join(parts)
        coeff = "" if mag == 1 and mono else _latex_ratn(mag)
        body = f"{coeff} {mono}".strip()
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def from_terms(items: Iterable) -> OperatorExpr:
    return OperatorExpr(list(items))
