"""Text syntax for operators, shared by the renderer and the command line.

::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | "N" | "(" expr ")" | field | "d(" expr ")" | "db(" expr ")"
            | "no(" expr ("," expr)* ")" | "np(" expr "," expr ")" | "delta(" idx "," idx ")"
    field  := ("psi" | "beta" | "psib" | "betab") "(" ("+" | "-") "," idx ")"

``*`` juxtaposes normal-ordered factors without contractions, exactly like
``no``; ``np`` is the point-splitting product computed by the wick kernel.
Division and powers are only defined for scalars.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import NamedTuple

from .expressions import ANTI, BETA, HOL, PSI, MalformedIndexError, OperatorExpr, derivative, formal_product
from .scalars import N, RatN

FIELDS = {"psi": (PSI, HOL), "beta": (BETA, HOL), "psib": (PSI, ANTI), "betab": (BETA, ANTI)}
FUNCTIONS = {"d", "db", "no", "np", "delta"} | set(FIELDS)


class DslError(ValueError):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message, position, expected=(), source=""):
        self.position = position
        self.expected = tuple(expected)
        self.source = source
        text = f"{message} at position {position}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        if source:
            text += f"\n  {source}\n  {' ' * position}^"
        super().__init__(text)


class DslSemanticError(DslError):
    pass


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")


def tokenize(src: str) -> list:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            if src[pos:].strip() == "":
                break
            raise DslSyntaxError(f"unexpected character {src[pos]!r}", pos, source=src)
        kind = m.lastgroup
        if kind is None:
            break
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def error(self, message, expected=()):
        raise DslSyntaxError(message, self.tok.pos, expected, self.src)

    def take(self, text=None, kind=None, expected=()):
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = expected or ([repr(text)] if text else [kind])
            found = t.text or "end of input"
            self.error(f"unexpected {found!r}", want)
        self.k += 1
        return t

    def parse(self) -> OperatorExpr:
        e, _ = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}", ["operator", "end of input"])
        return e

    # every rule returns (expr, textual index usage of one summand at most)

    def expr(self):
        e, use = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            rhs, ruse = self.term()
            e = e + rhs if op == "+" else e - rhs
            use = use | ruse
        return e, use

    def term(self):
        e, use = self.unary()
        while self.tok.text in ("*", "/"):
            op_tok = self.take()
            rhs, ruse = self.unary()
            if op_tok.text == "*":
                use = self._joined(use, ruse, op_tok.pos)
                e = formal_product(e, rhs)
            else:
                e = e / self._scalar(rhs, op_tok.pos, "divisor")
        return e, use

    @staticmethod
    def _joined(a: Counter, b: Counter, pos) -> Counter:
        use = a + b
        bad = sorted(x for x, k in use.items() if k > 2)
        if bad:
            raise DslSemanticError(f"index {bad[0]!r} used {use[bad[0]]} times in one product (position {pos})")
        return use

    def unary(self):
        if self.tok.text == "-":
            self.take()
            e, use = self.unary()
            return -e, use
        return self.power()

    def power(self):
        base_pos = self.tok.pos
        e, use = self.atom()
        if self.tok.text == "^":
            self.take()
            exp = int(self.take(kind="int", expected=["integer exponent"]).text)
            e = OperatorExpr.identity(self._scalar(e, base_pos, "base of a power") ** exp)
        return e, use

    def _scalar(self, e: OperatorExpr, pos, role) -> RatN:
        if any(m.fields or m.deltas for m in e.terms):
            raise DslSemanticError(f"{role} at position {pos} must be a scalar")
        return e.scalar_part()

    def index(self):
        t = self.tok
        if t.kind == "int":
            self.take()
            value = int(t.text)
            if value < 1:
                self.error("concrete indices start at 1")
            return value
        if t.kind == "name" and t.text not in FUNCTIONS and t.text != "N":
            self.take()
            return t.text
        self.error(f"unexpected {t.text or 'end of input'!r}", ["index name", "positive integer"])

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.take()
            return OperatorExpr.identity(int(t.text)), Counter()
        if t.text == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t.kind != "name":
            self.error(f"unexpected {t.text or 'end of input'!r}", ["number", "N", "field", "(", "function"])
        self.take()
        name = t.text
        if name == "N":
            return OperatorExpr.identity(N), Counter()
        if name not in FUNCTIONS:
            raise DslSyntaxError(f"unknown name {name!r}", t.pos, sorted(FUNCTIONS | {"N"}), self.src)
        self.take("(")
        if name in FIELDS:
            species, chirality = FIELDS[name]
            sign = self.take(kind="op", expected=["'+'", "'-'"])
            if sign.text not in "+-":
                raise DslSyntaxError(f"unexpected {sign.text!r}", sign.pos, ["'+'", "'-'"], self.src)
            self.take(",")
            idx = self.index()
            self.take(")")
            field = OperatorExpr.field(species, 1 if sign.text == "+" else -1, idx, chirality)
            return field, Counter([idx] if isinstance(idx, str) else [])
        if name == "delta":
            a = self.index()
            self.take(",")
            b = self.index()
            self.take(")")
            return OperatorExpr.delta(a, b), Counter(x for x in (a, b) if isinstance(x, str))
        args = [self.expr()]
        while self.tok.text == ",":
            self.take()
            args.append(self.expr())
        self.take(")", expected=["','", "')'"])
        if name in ("d", "db"):
            if len(args) != 1:
                raise DslSyntaxError(f"{name} takes one argument", t.pos, source=self.src)
            e, use = args[0]
            return derivative(e, HOL if name == "d" else ANTI), use
        if name == "np":
            if len(args) != 2:
                raise DslSyntaxError("np takes two arguments", t.pos, source=self.src)
            from .wick import normal_product

            use = self._joined(args[0][1], args[1][1], t.pos)
            return normal_product(args[0][0], args[1][0]), use
        out, use = args[0]
        for a, ause in args[1:]:
            use = self._joined(use, ause, t.pos)
            out = formal_product(out, a)
        return out, use


def parse(src: str) -> OperatorExpr:
    """Parse text into a canonical :class:`OperatorExpr`."""
    try:
        return _Parser(src).parse()
    except MalformedIndexError as exc:
        raise DslSemanticError(str(exc)) from exc


def parse_scalar(src: str) -> RatN:
    e = parse(src)
    if any(m.fields or m.deltas for m in e.terms):
        raise DslSemanticError(f"{src!r} is not a scalar")
    return e.scalar_part()
