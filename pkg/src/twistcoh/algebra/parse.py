"""Canonical text grammar for scalars, polynomials, rational functions and forms.

Polynomials print as terms joined by ``+``/``-`` with coefficients ``p/q``,
variables ``x0..x15``, powers ``^`` and the extension generator ``t``.  Terms
are ordered by descending graded-lexicographic monomial order and, within one
monomial, by ascending power of ``t``.  The parser additionally accepts
parentheses and products so that hand-written inputs like ``x0*(x1+x2)`` work.
"""

import re

from gmpy2 import mpq

from ..errors import ParseError, UsageError
from .fields import QQ, NFElement
from .poly import MAX_VARS, MultiPoly, pack, unpack

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<dx>dx\d+)|(?P<var>x\d+)|(?P<t>t)|(?P<op>[-+*/^()\[\]]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens, text


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Factored:
    """A product of polynomial factors, expanded only when it is not a divisor."""

    def __init__(self, factors):
        self.factors = factors

    @classmethod
    def of(cls, v):
        return v if isinstance(v, cls) else cls([(v, 1)])

    def __mul__(self, other):
        return _Factored(self.factors + other.factors)

    def power(self, e):
        return _Factored([(f, k * e) for f, k in self.factors])

    def expand(self):
        out = None
        for f, e in self.factors:
            term = f**e
            out = term if out is None else out * term
        return out


def _expand(v):
    return v.expand() if isinstance(v, _Factored) else v


class _Parser:
    def __init__(self, text, field, nvars, rational, t_as_var=False):
        self.tokens, self.text = _tokenize(text)
        self.i = 0
        self.field = field
        self.nvars = nvars
        self.rational = rational
        self.t_as_var = t_as_var

    # token helpers
    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *_linecol(self.text, tok[2]))

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            self.error(f"expected {value!r}", tok)
        return tok

    def const(self, c):
        return MultiPoly.constant(self.field, self.nvars, c)

    # grammar
    def expr(self, keep=False):
        tok = self.peek()
        if tok[1] in "+-" and tok[0] == "op":
            self.take()
            val = _expand(self.term())
            if tok[1] == "-":
                val = -val
        else:
            val = self.term()
            nxt = self.peek()
            if keep and isinstance(val, _Factored) and not (nxt[0] == "op" and nxt[1] in "+-"):
                return val
            val = _expand(val)
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = _expand(self.term())
                val = val + rhs if tok[1] == "+" else val - rhs
            else:
                return val

    def term(self):
        val = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.power()
                if tok[1] == "/":
                    val = self.divide(_expand(val), rhs, tok)
                elif isinstance(val, _Factored) or isinstance(rhs, _Factored):
                    val = _Factored.of(val) * _Factored.of(rhs)
                else:
                    val = val * rhs
            else:
                return val

    def divide(self, a, b, tok):
        from .ratfunc import RationalFunction

        if isinstance(b, _Factored):
            if not self.rational:
                self.error("division by a non-constant polynomial", tok)
            out = a if not isinstance(a, MultiPoly) else RationalFunction(a)
            for f, e in b.factors:
                out = self.divide(out, f**e, tok)
            return out
        if isinstance(b, MultiPoly) and b.is_constant():
            c = b.constant_value()
            if not c:
                self.error("division by zero", tok)
            return a * (1 / c)
        if not self.rational:
            self.error("division by a non-constant polynomial", tok)
        if isinstance(a, MultiPoly):
            a = RationalFunction(a)
        if isinstance(b, MultiPoly):
            b = RationalFunction(b)
        return a / b

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                self.error("expected an integer exponent", e)
            base = base ** int(e[1]) if not isinstance(base, _Factored) else base.power(int(e[1]))
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.const(mpq(int(val)))
        if kind == "var":
            idx = int(val[1:])
            if idx >= MAX_VARS or idx >= self.nvars:
                self.error(f"variable {val} outside x0..x{self.nvars - 1}", tok)
            return MultiPoly.variable(self.field, self.nvars, idx)
        if kind == "t":
            if self.t_as_var:
                return MultiPoly.variable(self.field, self.nvars, 0)
            gen = getattr(self.field, "gen", None)
            if gen is None:
                self.error("extension generator t used over the rationals", tok)
            return self.const(gen)
        if kind == "op" and val == "(":
            inner = self.expr(keep=self.rational)
            self.expect(")")
            if isinstance(inner, _Factored):
                return inner
            if self.rational and isinstance(inner, MultiPoly) and not inner.is_constant():
                # keep parenthesized factors apart so a printed denominator
                # parses back into the same factorization
                return _Factored([(inner, 1)])
            return inner
        self.error(f"unexpected token {val!r}", tok)

    def done(self):
        if self.peek()[0] != "end":
            self.error(f"unexpected trailing input {self.peek()[1]!r}")


def parse_poly(text, nvars, field=QQ):
    p = _Parser(text, field, nvars, rational=False)
    val = p.expr()
    p.done()
    return val


def parse_rational(text, nvars, field=QQ):
    from .ratfunc import RationalFunction

    p = _Parser(text, field, nvars, rational=True)
    val = p.expr()
    p.done()
    if isinstance(val, MultiPoly):
        val = RationalFunction(val)
    return val


def parse_scalar(text, field=QQ):
    if not isinstance(text, str):
        return field(text)
    p = _Parser(text, field, 0, rational=False)
    val = p.expr()
    p.done()
    return val.constant_value()


def parse_univariate_t(text):
    """Coefficients (low to high) of a polynomial in ``t`` over Q."""
    p = _Parser(text, QQ, 1, rational=False, t_as_var=True)
    val = p.expr()
    p.done()
    deg = max(0, val.total_degree())
    coeffs = [mpq(0)] * (deg + 1)
    for (e,), c in val.items():
        coeffs[e] = c
    return coeffs


def parse_form(text, nvars, field=QQ):
    """Parse ``[coef] dx0^dx1 + ...``; ``0`` alone is the zero 0-form."""
    from ..forms import DiffForm

    p = _Parser(text, field, nvars, rational=True)
    if p.peek()[0] == "num" and p.peek()[1] == "0" and p.tokens[p.i + 1][0] == "end":
        return DiffForm.zero(field, nvars, 0)
    result = None
    sign = 1
    first = True
    while True:
        tok = p.peek()
        if tok[0] == "op" and tok[1] in "+-":
            p.take()
            sign = 1 if tok[1] == "+" else -1
        elif not first:
            break
        p.expect("[")
        coef = p.expr()
        p.expect("]")
        idx = []
        if p.peek()[0] == "dx":
            idx.append(int(p.take()[1][2:]))
            while p.peek()[0] == "op" and p.peek()[1] == "^":
                p.take()
                dtok = p.take()
                if dtok[0] != "dx":
                    p.error("expected dx<i>", dtok)
                idx.append(int(dtok[1][2:]))
        if any(i >= nvars for i in idx):
            p.error("differential index out of range")
        term = DiffForm.monomial(field, nvars, idx, coef)
        if sign < 0:
            term = -term
        if result is None:
            result = term
        else:
            if term.degree != result.degree:
                p.error("mixed form degrees")
            result = result + term
        first = False
        sign = 1
    p.done()
    return result


# printing ---------------------------------------------------------------


def format_rational_scalar(c):
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _t_power(k):
    if k == 0:
        return ""
    return "t" if k == 1 else f"t^{k}"


def _mono_str(exps):
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def _join_terms(pieces):
    """pieces: list of (rational coefficient, factor string)."""
    if not pieces:
        return "0"
    out = []
    for k, (c, factors) in enumerate(pieces):
        neg = c < 0
        a = -c if neg else c
        if factors:
            body = factors if a == 1 else f"{format_rational_scalar(a)}*{factors}"
        else:
            body = format_rational_scalar(a)
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("-" if neg else "+") + body)
    return "".join(out)


def _coeff_components(c):
    if isinstance(c, NFElement):
        return list(c.c)
    return [mpq(c)]


def format_scalar(c):
    comps = _coeff_components(c)
    pieces = [(comps[k], _t_power(k)) for k in range(len(comps) - 1, -1, -1) if comps[k]]
    return _join_terms(pieces)


def format_univariate_t(coeffs):
    pieces = [(mpq(coeffs[k]), _t_power(k)) for k in range(len(coeffs) - 1, -1, -1) if coeffs[k]]
    return _join_terms(pieces)


def format_poly(p):
    pieces = []
    for m in sorted(p.terms, reverse=True):
        mono = _mono_str(unpack(m, p.nvars))
        comps = _coeff_components(p.terms[m])
        for k, c in enumerate(comps):
            if c:
                factors = "*".join(x for x in (_t_power(k), mono) if x)
                pieces.append((c, factors))
    return _join_terms(pieces)


def format_rational(r):
    num = format_poly(r.num)
    if not r.factors:
        return num
    dens = []
    for f, e in r.sorted_factors():
        s = f"({format_poly(f)})"
        dens.append(s if e == 1 else f"{s}^{e}")
    if len(dens) == 1:
        return f"({num})/{dens[0]}"
    return f"({num})/({'*'.join(dens)})"


def format_form(w):
    if not w.coeffs:
        return "0"
    parts = []
    for idx in sorted(w.coeffs):
        dx = "^".join(f"dx{i}" for i in idx)
        body = f"[{format_rational(w.coeffs[idx])}]"
        parts.append(f"{body} {dx}" if dx else body)
    return " + ".join(parts)


def poly_from_dict(terms, nvars, field=QQ):
    """Build a polynomial from {exponent tuple: coefficient}."""
    return MultiPoly(field, nvars, {pack(k): v for k, v in terms.items()})


def require_field_scalar(field, value):
    try:
        return parse_scalar(value, field)
    except (ParseError, TypeError) as exc:
        raise UsageError(f"bad scalar {value!r}: {exc}") from exc
