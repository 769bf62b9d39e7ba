"""Exact scalar arithmetic.

``Rational`` is :class:`fractions.Fraction`.  :class:`GaussianRational` covers
the complex Hermitian generator matrices of the oracle, and :class:`RatN` is a
rational function of the single formal rank symbol ``N``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational as _RationalABC

Rational = Fraction

__all__ = [
    "Rational",
    "GaussianRational",
    "RatN",
    "PoleError",
    "ratn_arith",
    "ratn_eval",
    "N",
]


class PoleError(ZeroDivisionError):
    """Substitution hit a zero of the denominator."""

    def __init__(self, value, at):
        super().__init__(f"{value} has a pole at N = {at}")
        self.value = value
        self.at = at


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = other.norm2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational._coerce(other) / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {abs(self.im)}*I)"


# --- dense polynomials in N: tuples of coefficients, lowest degree first ----


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] += c
    return _trim(out)


def _pneg(p):
    return tuple(-c for c in p)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _pdivmod(p, q):
    """Division over Q; ``q`` nonzero."""
    rem = [Fraction(c) for c in p]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k] / lead
        if c == 0:
            continue
        quot[k - dq] = c
        for j in range(dq + 1):
            rem[k - dq + j] -= c * q[j]
    return _trim(quot), _trim(rem[:dq] if dq > 0 else [])


def _pgcd(p, q):
    while q:
        _, r = _pdivmod(p, q)
        p, q = q, r
    if not p:
        return ()
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _content_ints(p):
    """Scale a rational polynomial to coprime integer coefficients: (ints, factor)."""
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in p), 1)
    ints = [int(Fraction(c) * den) for c in p]
    g = reduce(gcd, ints, 0)
    return ints, g, den


class RatN:
    """Reduced rational function of the formal symbol ``N``.

    Numerator and denominator are integer coefficient tuples (lowest degree
    first), coprime as polynomials, with the overall integer content removed
    and a positive leading coefficient in the denominator.  The representation
    is therefore unique and ``==`` is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if isinstance(num, RatN):
            if den == 1:
                self._set(num.num, num.den)
                return
            other = den if isinstance(den, RatN) else RatN(den)
            res = num / other
            self._set(res.num, res.den)
            return
        num = _as_poly(num)
        den = _as_poly(den)
        if not den:
            raise ZeroDivisionError("RatN with zero denominator")
        self._set(*_normalize(num, den))

    def _set(self, num, den):
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj._set(num, den)
        return obj

    @classmethod
    def from_poly(cls, coeffs) -> "RatN":
        """Polynomial from low-to-high coefficients (ints or Fractions)."""
        return cls(tuple(coeffs), (1,))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on N")
        if not self.num:
            return Fraction(0)
        return Fraction(self.num[0], self.den[0])

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatN):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, _RationalABC):
            return RatN(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatN(_padd(self.num, other.num), self.den)
        return RatN(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatN._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RatN._raw((), (1,))
        return RatN(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatN(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return RatN(1) / (self ** (-k))
        out = RatN(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if len(self.num) <= 1 and len(self.den) == 1:
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- substitution ---------------------------------------------------

    def eval(self, n) -> Fraction:
        """Exact value at ``N = n``; raises :class:`PoleError` at a pole."""
        n = Fraction(n)
        d = _peval(self.den, n)
        if d == 0:
            raise PoleError(self, n)
        return _peval(self.num, n) / d

    def subs_linear(self, a, b=0) -> "RatN":
        """Substitute ``N -> a*N + b``, e.g. ``subs_linear(-2)`` for ``N -> -2N``."""
        lin = _trim((Fraction(b), Fraction(a)))
        return RatN(_compose(self.num, lin), _compose(self.den, lin))

    # -- rendering ------------------------------------------------------

    def __str__(self):
        if not self.num:
            return "0"
        if self.num[-1] < 0:
            pos = str(-self)
            if self.den == (1,) and sum(1 for c in self.num if c) > 1:
                return f"-({pos})"
            return f"-{pos}"
        num = _render_poly(self.num)
        if self.den == (1,):
            return num
        den = _render_poly(self.den)
        if not _is_atom(self.den):
            den = f"({den})"
        if not _is_atom(self.num):
            num = f"({num})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatN('{self}')"

    @classmethod
    def parse(cls, text: str) -> "RatN":
        from .dsl import parse_scalar

        return parse_scalar(text)


def _as_poly(x):
    if isinstance(x, tuple):
        return _trim(x)
    if isinstance(x, list):
        return _trim(tuple(x))
    if isinstance(x, (int, Fraction)) or isinstance(x, _RationalABC):
        return _trim((Fraction(x),))
    raise TypeError(f"cannot build a polynomial from {x!r}")


def _normalize(num, den):
    if not num:
        return (), (1,)
    if len(den) > 1 and len(num) > 0:
        g = _pgcd(num, den)
        if len(g) > 1:
            num, _ = _pdivmod(num, g)
            den, _ = _pdivmod(den, g)
    # common scale making every coefficient an integer with overall content 1
    ni, ng, nd = _content_ints(num)
    di, dg, dd = _content_ints(den)
    # num/den = (ni/nd)/(di/dd) = (ni*dd)/(di*nd)
    ni = [c * dd for c in ni]
    di = [c * nd for c in di]
    g = reduce(gcd, ni + di, 0)
    if di[-1] < 0:
        g = -g
    return tuple(c // g for c in ni), tuple(c // g for c in di)


def _compose(p, lin):
    out = ()
    power = (Fraction(1),)
    for c in p:
        if c:
            out = _padd(out, tuple(c * x for x in power))
        power = _pmul(power, lin)
    return out


def _is_atom(p):
    nz = [k for k, c in enumerate(p) if c]
    if len(nz) != 1:
        return False
    k = nz[0]
    c = p[k]
    return k == 0 and c > 0 or (k > 0 and c == 1)


def _render_monomial(c, k):
    if k == 0:
        return str(c)
    sym = "N" if k == 1 else f"N^{k}"
    if c == 1:
        return sym
    return f"{c}*{sym}"


def _render_poly(p):
    ints = [int(c) for c in p]
    g = reduce(gcd, ints, 0)
    nonzero = [k for k, c in enumerate(ints) if c]
    if g > 1 and len(nonzero) > 1:
        inner = _render_poly(tuple(c // g for c in ints))
        return f"{g}*({inner})"
    parts = []
    for k in reversed(nonzero):
        c = ints[k]
        text = _render_monomial(abs(c), k)
        if not parts:
            parts.append(text if c > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(parts)


N = RatN((0, 1), (1,))


def ratn_arith(a: RatN, b: RatN, op: str) -> RatN:
    """``op`` in {"add", "sub", "mul", "div"}."""
    a, b = RatN(a), RatN(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def ratn_eval(a: RatN, n) -> Fraction:
    return RatN(a).eval(n)
