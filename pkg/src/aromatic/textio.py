"""Text grammar for forests, forms and polynomial vector fields.

Forms::

    expr      := term (('+' | '-') term)*  |  '0'
    term      := [rational] forest
    rational  := int ['/' uint]
    forest    := component+
    component := tree | aroma
    aroma     := '<' tree (',' tree)* '>'
    tree      := node ['[' tree (',' tree)* ']']
    node      := '*' | 'o' uint

Items inside brackets are predecessors.  In ``<t1,...,tk>`` the root of
``t_i`` points to the root of ``t_{i+1}`` and the last one to the first, so
``<t>`` is a self-loop.  Trees are roots ``1..n`` from left to right; aromas
may appear anywhere and are printed first.  A term denotes the wedge of its
forest.

Vector fields::

    d=2; f1 = x2^3 - 1/2*x1*x2; f2 = x1
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .forest import VERTEX, Forest, ForestError
from .forms import Form, GradeError, wedge


class ParseError(ValueError):
    """Syntax or consistency error, with the offending character span."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.span = span


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError("span start after end")


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<cov>o\d+)|(?P<sym>[*<>\[\],+\-/]))")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", SourceSpan(start, start + 1))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> tuple[str, str, int, int]:
        return self.tokens[self.i]

    def error(self, message: str) -> ParseError:
        _, _, start, end = self.tok
        return ParseError(message, SourceSpan(start, max(end, start)))

    def accept(self, value: str) -> bool:
        if self.tok[1] == value and self.tok[0] == "sym":
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            raise self.error(f"expected {value!r}, found {self.tok[1] or 'end of input'!r}")

    # grammar ----------------------------------------------------------------------
    def expr(self) -> list[tuple[Fraction, list, int]]:
        if self.tok[0] == "int" and self.tok[1] == "0" and self.tokens[self.i + 1][0] == "eof":
            self.i += 1
            return []
        terms = []
        sign = -1 if self.accept("-") else 1
        while True:
            start = self.tok[2]
            coeff, forest = self.term()
            terms.append((sign * coeff, forest, start))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        if self.tok[0] != "eof":
            raise self.error(f"unexpected token {self.tok[1]!r}")
        return terms

    def term(self) -> tuple[Fraction, list]:
        coeff = Fraction(1)
        if self.tok[0] == "int":
            num = int(self.tok[1])
            self.i += 1
            den = 1
            if self.accept("/"):
                if self.tok[0] != "int":
                    raise self.error("expected denominator")
                den = int(self.tok[1])
                if den == 0:
                    raise self.error("zero denominator")
                self.i += 1
            coeff = Fraction(num, den)
        return coeff, self.forest()

    def forest(self) -> list:
        comps = []
        while self.tok[1] in ("*", "<") or self.tok[0] == "cov":
            comps.append(self.component())
        if not comps:
            raise self.error("expected a forest")
        return comps

    def component(self) -> tuple:
        if self.accept("<"):
            items = [self.tree()]
            while self.accept(","):
                items.append(self.tree())
            self.expect(">")
            return ("aroma", items)
        return ("tree", self.tree())

    def tree(self) -> tuple:
        if self.accept("*"):
            kind = VERTEX
        elif self.tok[0] == "cov":
            kind = int(self.tok[1][1:])
            if kind == 0:
                raise self.error("covertex labels start at 1")
            self.i += 1
        else:
            raise self.error(f"expected a node, found {self.tok[1] or 'end of input'!r}")
        kids = []
        if self.accept("["):
            kids.append(self.tree())
            while self.accept(","):
                kids.append(self.tree())
            self.expect("]")
        return (kind, kids)


def _to_graph(components: list) -> tuple[list[int], list[int], list[int]]:
    kinds: list[int] = []
    succ: list[int] = []

    def emit(tree: tuple, parent: int) -> int:
        v = len(kinds)
        kinds.append(tree[0])
        succ.append(parent)
        for kid in tree[1]:
            emit(kid, v)
        return v

    roots = []
    for comp, body in components:
        if comp == "tree":
            roots.append(emit(body, -1))
        else:
            cycle = [emit(t, -2) for t in body]
            for i, v in enumerate(cycle):
                succ[v] = cycle[(i + 1) % len(cycle)]
    return kinds, succ, roots


def parse_forest(text: str) -> Forest:
    """Parse a single forest (no coefficient)."""
    p = _Parser(text)
    comps = p.forest()
    if p.tok[0] != "eof":
        raise p.error(f"unexpected token {p.tok[1]!r}")
    try:
        return Forest.from_graph(*_to_graph(comps))
    except ForestError as exc:
        raise ParseError(str(exc), SourceSpan(0, len(text))) from None


def parse_expr(text: str, n: int | None = None, p: int | None = None) -> Form:
    """Parse a form expression; ``n``/``p`` give the grade of ``"0"``."""
    terms = _Parser(text).expr()
    pairs = []
    for coeff, comps, start in terms:
        try:
            forest = Forest.from_graph(*_to_graph(comps))
        except ForestError as exc:
            raise ParseError(str(exc), SourceSpan(start, len(text))) from None
        if pairs and (forest.n, forest.p) != (pairs[0][0].n, pairs[0][0].p):
            raise ParseError("terms have inconsistent root/covertex counts", SourceSpan(start, len(text)))
        pairs.append((forest, coeff))
    if not pairs:
        return Form(n or 0, p or 0)
    try:
        return wedge(pairs)
    except GradeError as exc:  # pragma: no cover - guarded above
        raise ParseError(str(exc), SourceSpan(0, len(text))) from None


# printing ---------------------------------------------------------------------------


def _print_node(node: tuple) -> str:
    head = "*" if node[0] == VERTEX else f"o{node[0]}"
    if node[1]:
        return head + "[" + ",".join(_print_node(c) for c in node[1]) + "]"
    return head


def print_forest(forest: Forest) -> str:
    aromas, trees = forest.key
    parts = ["<" + ",".join(_print_node(x) for x in aroma) + ">" for aroma in aromas]
    parts += [_print_node(t) for t in trees]
    return " ".join(parts) if parts else "1"


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def print_form(form: Form) -> str:
    """Canonical text: terms sorted by representative key, coefficients as ``p/q``."""
    if not form.terms:
        return "0"
    out = []
    for i, (forest, c) in enumerate(form.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = print_forest(forest)
        text = body if mag == 1 else f"{format_coefficient(mag)} {body}"
        if i == 0:
            out.append(text if sign == "+" else f"-{text}")
        else:
            out.append(f"{sign} {text}")
    return " ".join(out)


# vector fields ----------------------------------------------------------------------

_FIELD_HEAD = re.compile(r"^\s*d\s*=\s*(\d+)\s*$")
_FIELD_COMP = re.compile(r"^\s*f(\d+)\s*=\s*(.+?)\s*$", re.S)
_POLY_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<sym>[-+*^()]))")


def parse_polynomial(text: str, dim: int) -> dict[tuple[int, ...], Fraction]:
    """Parse a polynomial in ``x1..x<dim>`` into an exponent-vector -> coefficient map."""
    tokens = []
    pos = 0
    while pos < len(text) and text[pos:].strip():
        m = _POLY_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character in polynomial {text[pos:].strip()[:1]!r}", SourceSpan(pos, pos + 1))
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    i = 0

    def peek() -> tuple[str, str, int]:
        return tokens[i]

    def fail(msg: str) -> ParseError:
        return ParseError(msg, SourceSpan(peek()[2], peek()[2] + len(peek()[1])))

    def add(a: dict, b: dict, s: int = 1) -> dict:
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + s * v
        return {k: v for k, v in out.items() if v}

    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return {k: v for k, v in out.items() if v}

    one = (0,) * dim

    def expr() -> dict:
        nonlocal i
        sign = 1
        if peek()[1] in "+-" and peek()[0] == "sym":
            sign = -1 if peek()[1] == "-" else 1
            i += 1
        acc = add({}, term(), sign)
        while peek()[0] == "sym" and peek()[1] in "+-":
            sign = -1 if peek()[1] == "-" else 1
            i += 1
            acc = add(acc, term(), sign)
        return acc

    def term() -> dict:
        nonlocal i
        acc = factor()
        while peek()[0] == "sym" and peek()[1] == "*":
            i += 1
            acc = mul(acc, factor())
        return acc

    def factor() -> dict:
        nonlocal i
        kind, val, _ = peek()
        if kind == "num":
            i += 1
            base = {one: Fraction(val)}
        elif kind == "var":
            k = int(val[1:])
            if not 1 <= k <= dim:
                raise fail(f"variable {val} outside x1..x{dim}")
            i += 1
            base = {tuple(int(j == k - 1) for j in range(dim)): Fraction(1)}
        elif kind == "sym" and val == "(":
            i += 1
            base = expr()
            if peek()[1] != ")":
                raise fail("expected ')'")
            i += 1
        else:
            raise fail(f"unexpected token {val or 'end of input'!r}")
        if peek()[0] == "sym" and peek()[1] == "^":
            i += 1
            if peek()[0] != "num" or "/" in peek()[1]:
                raise fail("expected integer exponent")
            power = int(peek()[1])
            i += 1
            result = {one: Fraction(1)}
            for _ in range(power):
                result = mul(result, base)
            base = result
        return base

    poly = expr()
    if peek()[0] != "eof":
        raise fail(f"unexpected token {peek()[1]!r}")
    return poly


def parse_field_text(text: str) -> tuple[int, list[dict[tuple[int, ...], Fraction]]]:
    """Parse ``d=<uint>; f1 = ...; f2 = ...`` into the dimension and component maps."""
    chunks = [c for c in re.split(r"[;\n]", text) if c.strip() and not c.strip().startswith("#")]
    if not chunks:
        raise ParseError("empty vector field", SourceSpan(0, 0))
    head = _FIELD_HEAD.match(chunks[0])
    if head is None:
        raise ParseError("vector field must start with 'd=<dimension>'", SourceSpan(0, len(chunks[0])))
    dim = int(head.group(1))
    comps: dict[int, dict] = {}
    for chunk in chunks[1:]:
        m = _FIELD_COMP.match(chunk)
        if m is None:
            raise ParseError(f"bad component {chunk.strip()!r}", SourceSpan(0, len(text)))
        k = int(m.group(1))
        if not 1 <= k <= dim or k in comps:
            raise ParseError(f"component index f{k} invalid or repeated", SourceSpan(0, len(text)))
        comps[k] = parse_polynomial(m.group(2), dim)
    if sorted(comps) != list(range(1, dim + 1)):
        raise ParseError(f"expected components f1..f{dim}", SourceSpan(0, len(text)))
    return dim, [comps[k] for k in range(1, dim + 1)]


def print_polynomial(poly: dict[tuple[int, ...], Fraction]) -> str:
    if not poly:
        return "0"
    parts = []
    for i, exps in enumerate(sorted(poly, reverse=True)):
        c = Fraction(poly[exps])
        factors = [f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exps) if e]
        mag = abs(c)
        if factors:
            body = "*".join(([format_coefficient(mag)] if mag != 1 else []) + factors)
        else:
            body = format_coefficient(mag)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
