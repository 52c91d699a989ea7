"""Coefficient fields: the rationals and simple extensions Q[t]/(m(t)).

Rational scalars are ``gmpy2.mpq``.  Extension scalars are :class:`NFElement`
instances holding the reduced residue as a coefficient vector in the power
basis ``1, t, ..., t^(k-1)``.
"""

from itertools import product as _product

import gmpy2
from gmpy2 import mpq

from ..errors import UsageError

MAX_EXTENSION_DEGREE = 3


def to_mpq(x):
    if isinstance(x, NFElement):
        if not x.is_rational():
            raise UsageError(f"{x} is not a rational number")
        return x.c[0]
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            p, q = x.split("/")
            return mpq(int(p), int(q))
        return mpq(int(x))
    return mpq(x)


class RationalField:
    """The field Q."""

    kind = "rationals"
    degree = 1
    minimal_poly = None

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __call__(self, x):
        if isinstance(x, NFElement):
            return to_mpq(x)
        return mpq(x)

    def is_rational(self, x):
        return True

    def as_rational(self, x):
        return mpq(x)

    def coefficients(self, x):
        return (mpq(x),)

    def from_coefficients(self, coeffs):
        if len(coeffs) != 1:
            raise UsageError("rational scalars carry exactly one coefficient")
        return mpq(coeffs[0])

    def to_json(self):
        return {"kind": "rationals"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _divisors(n):
    n = abs(int(n))
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _check_irreducible(coeffs):
    """Raise unless the monic rational polynomial (low to high) is irreducible over Q."""
    deg = len(coeffs) - 1
    if deg == 2:
        c, b = coeffs[0], coeffs[1]
        disc = b * b - 4 * c
        if disc >= 0 and gmpy2.is_square(disc.numerator) and gmpy2.is_square(disc.denominator):
            raise UsageError("minimal polynomial has a rational root")
        return
    # degree 3: reducible iff it has a rational root
    lcm = 1
    for c in coeffs:
        lcm = gmpy2.lcm(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    if ints[0] == 0:
        raise UsageError("minimal polynomial has the rational root 0")
    for p, q in _product(_divisors(ints[0]), _divisors(ints[-1])):
        for sign in (1, -1):
            r = mpq(sign * p, q)
            if sum(c * r**k for k, c in enumerate(coeffs)) == 0:
                raise UsageError(f"minimal polynomial has the rational root {r}")


class NumberField:
    """Simple extension Q[t]/(m(t)) with m monic, irreducible, of degree 2 or 3.

    ``minimal_poly`` is given low-to-high, e.g. ``[1, 1, 1]`` for t^2+t+1, or as
    a string in the polynomial grammar.
    """

    kind = "extension"

    def __init__(self, minimal_poly):
        if isinstance(minimal_poly, str):
            from .parse import parse_univariate_t

            minimal_poly = parse_univariate_t(minimal_poly)
        coeffs = [mpq(c) for c in _poly_trim(minimal_poly)]
        deg = len(coeffs) - 1
        if deg < 2:
            raise UsageError("extension minimal polynomial must have degree >= 2")
        if deg > MAX_EXTENSION_DEGREE:
            raise UsageError("extensions of degree > 3 are not supported")
        if coeffs[-1] != 1:
            raise UsageError("minimal polynomial must be monic")
        _check_irreducible(coeffs)
        self.minimal_poly = tuple(coeffs)
        self.degree = deg
        # t^k reduced, for deg <= k <= 2*deg - 2
        red = {}
        cur = [-c for c in coeffs[:-1]]
        red[deg] = tuple(cur)
        for k in range(deg + 1, 2 * deg - 1):
            top = cur[-1]
            nxt = [mpq(0)] + cur[:-1]
            nxt = [a + top * b for a, b in zip(nxt, red[deg])]
            red[k] = tuple(nxt)
            cur = nxt
        self._reduction = red
        z = (mpq(0),) * deg
        self.zero = NFElement(self, z)
        self.one = NFElement(self, (mpq(1),) + z[1:])
        self.gen = NFElement(self, (mpq(0), mpq(1)) + z[2:])

    def __call__(self, x):
        if isinstance(x, NFElement):
            if x.field != self:
                raise UsageError("scalar belongs to a different field")
            return x
        v = [mpq(0)] * self.degree
        v[0] = mpq(x)
        return NFElement(self, tuple(v))

    def is_rational(self, x):
        return self(x).is_rational()

    def as_rational(self, x):
        return to_mpq(self(x))

    def coefficients(self, x):
        return self(x).c

    def from_coefficients(self, coeffs):
        if len(coeffs) != self.degree:
            raise UsageError("wrong coefficient vector length")
        return NFElement(self, tuple(mpq(c) for c in coeffs))

    def to_json(self):
        from .parse import format_univariate_t

        return {"kind": "extension", "minimal_poly": format_univariate_t(self.minimal_poly)}

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.minimal_poly == self.minimal_poly

    def __hash__(self):
        return hash(self.minimal_poly)

    def __repr__(self):
        from .parse import format_univariate_t

        return f"NumberField({format_univariate_t(self.minimal_poly)})"


class NFElement:
    __slots__ = ("field", "c")

    def __init__(self, field, c):
        self.field = field
        self.c = c

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.field is not self.field and other.field != self.field:
                raise UsageError("scalars from different fields")
            return other.c
        try:
            v = mpq(other)
        except TypeError:
            return None
        return (v,) + self.field.zero.c[1:]

    def is_rational(self):
        return not any(self.c[1:])

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple(a + b for a, b in zip(self.c, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple(a - b for a, b in zip(self.c, o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple(b - a for a, b in zip(self.c, o)))

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, NFElement):
            try:
                v = mpq(other)
            except TypeError:
                return NotImplemented
            return NFElement(self.field, tuple(a * v for a in self.c))
        o = self._coerce(other)
        a, b = self.c, o
        k = len(a)
        prod = [mpq(0)] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        res = prod[:k]
        red = self.field._reduction
        for e in range(k, 2 * k - 1):
            v = prod[e]
            if v:
                res = [r + v * s for r, s in zip(res, red[e])]
        return NFElement(self.field, tuple(res))

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.c):
            raise ZeroDivisionError("division by zero in number field")
        # solve (multiplication-by-self matrix) * x = e0
        k = len(self.c)
        basis = [self.field.from_coefficients([1 if i == j else 0 for i in range(k)]) for j in range(k)]
        cols = [(self * b).c for b in basis]
        m = [[cols[j][i] for j in range(k)] + [mpq(1 if i == 0 else 0)] for i in range(k)]
        for col in range(k):
            piv = next(r for r in range(col, k) if m[r][col])
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [v * inv for v in m[col]]
            for r in range(k):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return NFElement(self.field, tuple(m[i][k] for i in range(k)))

    def __truediv__(self, other):
        if isinstance(other, NFElement):
            return self * other.inverse()
        try:
            v = mpq(other)
        except TypeError:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero in number field")
        return NFElement(self.field, tuple(a / v for a in self.c))

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == tuple(o)

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash(self.c)

    def __str__(self):
        from .parse import format_scalar

        return format_scalar(self)

    def __repr__(self):
        return f"NFElement({self})"


def make_field(spec):
    """Build a field from its JSON description (``{"kind": ...}``)."""
    if spec is None:
        return QQ
    kind = spec.get("kind")
    if kind == "rationals":
        if set(spec) - {"kind"}:
            raise UsageError("rationals field takes no other keys")
        return QQ
    if kind == "extension":
        if set(spec) - {"kind", "minimal_poly"}:
            raise UsageError("unknown keys in field spec")
        return NumberField(spec["minimal_poly"])
    raise UsageError(f"unknown field kind {kind!r}")


def is_integer(x):
    """True/False for rational scalars; None when integrality is undecidable here."""
    if isinstance(x, NFElement):
        if not x.is_rational():
            return None
        x = x.c[0]
    x = mpq(x)
    return x.denominator == 1
