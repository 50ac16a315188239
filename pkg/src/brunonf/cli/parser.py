"""Reader for vector-field input files.

Format::

    vars: x, y, z
    scalars: gaussian          # optional: rational | gaussian | float
    truncation: 16             # optional
    i*x*dx - i*y*dy + (x*y - z^2)*(x*dx + y*dy + z*dz)

The field may also follow a ``field:`` header.  ``d<var>`` stands for the
partial derivative along ``<var>``; ``i`` is the imaginary unit unless it is
declared as a variable.  Precedence: ``^`` over ``*`` and ``/`` over binary
``+`` and ``-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from ..derivation import LogDerivation
from ..errors import MixedScalars, NotLogarithmic, ParseError, UnknownVariable
from ..scalars import QQ, QQI, ComplexFloatField, GaussQ
from ..series import Series

DEFAULT_ORDER = 16

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\d*\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass
class ProblemSpec:
    names: list
    field: object
    order: int
    components: list
    derivation: LogDerivation
    text: str

    @property
    def n(self):
        return len(self.names)


class _Value:
    """A polynomial function (vec is None) or a polynomial vector field."""

    __slots__ = ("fn", "vec")

    def __init__(self, fn=None, vec=None):
        self.fn = fn
        self.vec = vec


def _padd(a, b, sign=1):
    out = dict(a)
    for m, c in b.items():
        c = c if sign == 1 else -c
        out[m] = out[m] + c if m in out else c
    return {m: c for m, c in out.items() if c}


def _pmul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            p = ca * cb
            out[m] = out[m] + p if m in out else p
    return {m: c for m, c in out.items() if c}


class _Parser:
    def __init__(self, tokens, names, float_mode, end_pos):
        self.toks = tokens
        self.pos = 0
        self.names = names
        self.n = len(names)
        self.float_mode = float_mode
        self.end_pos = end_pos
        self.saw_i = False
        self.one = complex(1) if float_mode else GaussQ(1, 0)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def error(self, msg, tok=None, expected=None, cls=ParseError):
        tok = tok or self.peek()
        line, col = (tok.line, tok.col) if tok else self.end_pos
        return cls(msg, line, col, expected)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def const(self, c):
        return _Value(fn={(0,) * self.n: c} if c else {})

    def parse(self):
        if self.peek() is None:
            raise self.error("empty field expression", expected={"expression"})
        v = self.expr()
        if self.peek() is not None:
            raise self.error(f"unexpected token {self.peek().text!r}",
                             expected={"+", "-", "*", "/", "^", "end of input"})
        return v

    def expr(self):
        v = self.term()
        while self.peek() is not None and self.peek().text in "+-" and self.peek().kind == "op":
            op = self.take()
            w = self.term()
            v = self.add(v, w, 1 if op.text == "+" else -1, op)
        return v

    def term(self):
        v = self.unary()
        while self.peek() is not None and self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take()
            w = self.unary()
            if op.text == "*":
                v = self.mul(v, w, op)
            else:
                v = self.div(v, w, op)
        return v

    def unary(self):
        t = self.peek()
        if t is not None and t.kind == "op" and t.text in "+-":
            self.take()
            v = self.unary()
            if t.text == "-":
                v = self.mul(self.const(-self.one), v, t)
            return v
        return self.power()

    def power(self):
        v = self.atom()
        t = self.peek()
        if t is not None and t.kind == "op" and t.text == "^":
            self.take()
            e = self.peek()
            if e is None or e.kind != "num" or not e.text.isdigit():
                raise self.error("exponent must be a nonnegative integer literal", e,
                                 expected={"integer"})
            self.take()
            if v.vec is not None:
                raise self.error("cannot raise a vector field to a power", t)
            k = int(e.text)
            out = {(0,) * self.n: self.one}
            for _ in range(k):
                out = _pmul(out, v.fn)
            v = _Value(fn=out)
        return v

    def atom(self):
        t = self.peek()
        expected = {"number", "variable", "d<var>", "i", "("}
        if t is None:
            raise self.error("unexpected end of input", expected=expected)
        if t.kind == "num":
            self.take()
            if re.fullmatch(r"\d+", t.text):
                c = complex(int(t.text)) if self.float_mode else GaussQ(mpq(int(t.text)), 0)
            else:
                if not self.float_mode:
                    raise self.error(f"decimal literal {t.text!r} in exact input "
                                     "(declare 'scalars: float')", t, cls=MixedScalars)
                c = complex(float(t.text))
            return self.const(c)
        if t.kind == "name":
            self.take()
            if t.text in self.names:
                i = self.names.index(t.text)
                return _Value(fn={tuple(int(j == i) for j in range(self.n)): self.one})
            if t.text == "i":
                self.saw_i = True
                return self.const(complex(0, 1) if self.float_mode else GaussQ(0, 1))
            if t.text.startswith("d") and t.text[1:] in self.names:
                i = self.names.index(t.text[1:])
                vec = [{} for _ in range(self.n)]
                vec[i] = {(0,) * self.n: self.one}
                return _Value(vec=vec)
            raise self.error(f"unknown variable {t.text!r}", t, cls=UnknownVariable,
                             expected=set(self.names) | {"d" + v for v in self.names})
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            c = self.peek()
            if c is None or c.text != ")":
                raise self.error("missing closing parenthesis", c, expected={")"})
            self.take()
            return v
        raise self.error(f"unexpected token {t.text!r}", t, expected=expected)

    def add(self, v, w, sign, op):
        if v.vec is None and w.vec is None:
            return _Value(fn=_padd(v.fn, w.fn, sign))
        if v.vec is not None and w.vec is not None:
            return _Value(vec=[_padd(a, b, sign) for a, b in zip(v.vec, w.vec)])
        if (v.vec is None and not v.fn) or (w.vec is None and not w.fn):
            return v if w.vec is None else _Value(vec=[_padd({}, b, sign) for b in w.vec])
        raise self.error("cannot add a function and a vector field", op)

    def mul(self, v, w, op):
        if v.vec is not None and w.vec is not None:
            raise self.error("cannot multiply two vector fields", op)
        if v.vec is None and w.vec is None:
            return _Value(fn=_pmul(v.fn, w.fn))
        f, vec = (v.fn, w.vec) if v.vec is None else (w.fn, v.vec)
        return _Value(vec=[_pmul(f, a) for a in vec])

    def div(self, v, w, op):
        if w.vec is not None or any(sum(m) for m in w.fn):
            raise self.error("division is only allowed by a nonzero constant", op)
        c = w.fn.get((0,) * self.n)
        if not c:
            raise self.error("division by zero", op)
        inv = self.one / c
        k = self.const(inv)
        return self.mul(v, k, op)


def _tokenize(text, line_offsets):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        line, col = _position(pos, line_offsets)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col,
                             {"number", "name", "operator"})
        kind = m.lastgroup
        if kind != "ws":
            toks.append(Token(kind, m.group(), line, col))
        pos = m.end()
    return toks


def _position(pos, line_offsets):
    line = 0
    for i, entry in enumerate(line_offsets):
        if entry[0] <= pos:
            line = i
    return line_offsets[line][1], pos - line_offsets[line][0] + line_offsets[line][2]


def parse_field(text: str, order=None, scalars=None, epsilon: float = 1e-12) -> ProblemSpec:
    """Parse an input file into a ProblemSpec with a validated LogDerivation."""
    names = None
    header_scalars = None
    header_order = None
    body = []  # (line number, column offset, text)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        m = re.match(r"\s*(vars|scalars|truncation|field)\s*:(.*)$", line)
        if m:
            key, val = m.group(1), m.group(2)
            col = m.start(2) + 1
            if key == "vars":
                names = [v.strip() for v in val.split(",") if v.strip()]
                for v in names:
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                        raise ParseError(f"invalid variable name {v!r}", lineno, col)
                if len(set(names)) != len(names):
                    raise ParseError("duplicate variable name", lineno, col)
            elif key == "scalars":
                header_scalars = val.strip().lower()
            elif key == "truncation":
                try:
                    header_order = int(val.strip())
                except ValueError:
                    raise ParseError("truncation must be an integer", lineno, col,
                                     {"integer"}) from None
            else:
                body.append((lineno, col, val))
            continue
        body.append((lineno, 1, line))
    if not names:
        raise ParseError("missing 'vars:' header", 1, 1, {"vars:"})
    scalars = scalars or header_scalars
    if scalars not in (None, "rational", "exact", "qq", "gaussian", "qqi", "float", "cc",
                       "complex"):
        raise ParseError(f"unknown scalar kind {scalars!r}", None, None,
                         {"rational", "gaussian", "float"})
    float_mode = scalars in ("float", "cc", "complex")
    N = order if order is not None else (header_order or DEFAULT_ORDER)
    if N < 2:
        raise ParseError("truncation order must be at least 2")
    joined = ""
    offsets = []
    for lineno, col, seg in body:
        offsets.append((len(joined), lineno, col))
        joined += seg + "\n"
    if not offsets:
        raise ParseError("missing field expression", None, None, {"expression"})
    toks = _tokenize(joined, offsets)
    end = (body[-1][0], body[-1][1] + len(body[-1][2]))
    p = _Parser(toks, names, float_mode, end)
    val = p.parse()
    if val.vec is None:
        if val.fn:
            raise ParseError("expression is a function, not a vector field", None, None,
                             {"d<var>"})
        val = _Value(vec=[{} for _ in names])
    has_imag = any((c.im if isinstance(c, GaussQ) else 0) for a in val.vec for c in a.values())
    if float_mode:
        field = ComplexFloatField(epsilon)
    elif scalars in ("rational", "exact", "qq"):
        if has_imag or p.saw_i:
            raise MixedScalars("imaginary unit in rational input (declare 'scalars: gaussian')")
        field = QQ
    elif scalars in ("gaussian", "qqi") or p.saw_i or has_imag:
        field = QQI
    else:
        field = QQ
    n = len(names)
    comps = [Series(n, N + 1, field, {m: field.coerce(c) for m, c in a.items()}) for a in val.vec]
    try:
        d = LogDerivation.from_vector_components(comps, N)
    except NotLogarithmic as exc:
        i = exc.index
        q, bad = comps[i].divide_var(i)
        from ..series import grlex_key

        mono, c = min(bad, key=lambda t: grlex_key(t[0]))
        term = Series(n, N + 1, field, {mono: c}).to_str(names)
        raise NotLogarithmic(i, f"{term}*d{names[i]}") from None
    return ProblemSpec(names, field, N, comps, d, text)


def parse_scalar_list(text: str, epsilon: float = 1e-12):
    """Comma-separated scalars for ``--lambda``; exact unless a decimal appears."""
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise ParseError("empty entry in scalar list")
    float_mode = bool(re.search(r"\d\.|\.\d|\d[eE]", text))
    out = []
    for part in parts:
        toks = _tokenize(part, [(0, 1, 1)])
        p = _Parser(toks, [], float_mode, (1, len(part) + 1))
        v = p.parse()
        if v.vec is not None:
            raise ParseError("expected a scalar")
        out.append(v.fn.get((), complex(0) if float_mode else GaussQ(0, 0)))
    if float_mode:
        return [complex(x) for x in out], ComplexFloatField(epsilon)
    if all(x.im == 0 for x in out):
        return [x.re for x in out], QQ
    return out, QQI


def format_field(d: LogDerivation, names) -> str:
    return d.to_expr(names)


__all__ = ["parse_field", "parse_scalar_list", "ProblemSpec", "format_field", "DEFAULT_ORDER"]
