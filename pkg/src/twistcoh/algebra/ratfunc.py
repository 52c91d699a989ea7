"""Rational functions with a factored denominator.

The denominator is kept as a product of monic, non-monomial-content polynomial
factors (single variables count as factors too).  Sums use the factor-wise
maximum exponent as common denominator, so denominators built from a fixed set
of polynomials never need a multivariate gcd.  Equality is decided by
cross-multiplication, i.e. by testing the numerator of the difference.
"""

from ..errors import PoleError, UsageError
from .poly import MultiPoly


def _split_denominator(den):
    """den -> (scalar, {factor: exponent}) with monic factors."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if den.is_constant():
        return den.constant_value(), {}
    factors = {}
    exps = den.monomial_content()
    if any(exps):
        mono = MultiPoly(den.field, den.nvars, {exps: 1})
        den = den.exact_div(mono)
        for i, e in enumerate(exps):
            if e:
                factors[MultiPoly.variable(den.field, den.nvars, i)] = e
    if den.is_constant():
        return den.constant_value(), factors
    lc, g = den.monic()
    factors[g] = factors.get(g, 0) + 1
    return lc, factors


class RationalFunction:
    """num / prod(f ** e for f, e in factors)."""

    __slots__ = ("num", "factors")

    def __init__(self, num, den=None):
        if not isinstance(num, MultiPoly):
            raise UsageError("numerator must be a MultiPoly")
        if den is None:
            self.num = num
            self.factors = {}
            return
        if not isinstance(den, MultiPoly):
            den = MultiPoly.constant(num.field, num.nvars, den)
        num._check(den)
        lc, factors = _split_denominator(den)
        self.num = num.scale(1 / lc) if lc != 1 else num
        self.factors = factors if self.num else {}

    @classmethod
    def _make(cls, num, factors):
        r = cls.__new__(cls)
        r.num = num
        r.factors = factors if num.terms else {}
        return r

    @property
    def field(self):
        return self.num.field

    @property
    def nvars(self):
        return self.num.nvars

    @classmethod
    def constant(cls, field, nvars, c):
        return cls._make(MultiPoly.constant(field, nvars, c), {})

    @classmethod
    def zero(cls, field, nvars):
        return cls._make(MultiPoly.zero(field, nvars), {})

    @property
    def den(self):
        d = MultiPoly.constant(self.num.field, self.num.nvars, 1)
        for f, e in self.factors.items():
            d = d * f**e
        return d

    def sorted_factors(self):
        return sorted(self.factors.items(), key=lambda fe: (fe[0].total_degree(), str(fe[0])))

    def is_zero(self):
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_polynomial(self):
        return not self.factors

    def is_constant(self):
        return not self.factors and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise UsageError("not a constant")
        return self.num.constant_value()

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            self.num._check(other.num)
            return other
        if isinstance(other, MultiPoly):
            self.num._check(other)
            return RationalFunction._make(other, {})
        try:
            return RationalFunction._make(MultiPoly.constant(self.field, self.nvars, other), {})
        except (TypeError, UsageError):
            return None

    # arithmetic ---------------------------------------------------------
    def _combine(self, other, sign):
        a, b = self, other
        if not b.num.terms:
            return a if sign > 0 else a
        if not a.num.terms:
            return b if sign > 0 else -b
        if a.factors == b.factors:
            num = a.num + b.num if sign > 0 else a.num - b.num
            return RationalFunction._make(num, dict(a.factors))
        lcm = dict(a.factors)
        for f, e in b.factors.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
        na, nb = a.num, b.num
        for f, e in lcm.items():
            ea = e - a.factors.get(f, 0)
            if ea:
                na = na * f**ea
            eb = e - b.factors.get(f, 0)
            if eb:
                nb = nb * f**eb
        num = na + nb if sign > 0 else na - nb
        return RationalFunction._make(num, lcm)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction._make(-self.num, dict(self.factors))

    def __mul__(self, other):
        if not isinstance(other, (RationalFunction, MultiPoly)):
            try:
                return RationalFunction._make(self.num.scale(other), dict(self.factors))
            except (TypeError, UsageError):
                return NotImplemented
        other = self._lift(other)
        if not self.num.terms or not other.num.terms:
            return RationalFunction.zero(self.field, self.nvars)
        factors = dict(self.factors)
        for f, e in other.factors.items():
            factors[f] = factors.get(f, 0) + e
        return RationalFunction._make(self.num * other.num, factors)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise ZeroDivisionError("inverse of the zero rational function")
        num = MultiPoly.constant(self.field, self.nvars, 1)
        for f, e in self.factors.items():
            num = num * f**e
        return RationalFunction(num, self.num)

    def __truediv__(self, other):
        if not isinstance(other, (RationalFunction, MultiPoly)):
            try:
                c = self.field(other)
            except (TypeError, UsageError):
                return NotImplemented
            if not c:
                raise ZeroDivisionError("division by zero")
            return RationalFunction._make(self.num.scale(1 / c), dict(self.factors))
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            raise UsageError("integer exponents only")
        if e < 0:
            return self.inverse() ** (-e)
        num = self.num**e
        return RationalFunction._make(num, {f: k * e for f, k in self.factors.items()})

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.factors == other.factors:
            return self.num == other.num
        return (self - other).is_zero()

    __hash__ = None

    # normalization ------------------------------------------------------
    def cancel(self):
        """Divide out denominator factors that divide the numerator."""
        if not self.factors:
            return self
        num = self.num
        factors = {}
        for f, e in self.factors.items():
            while e:
                q = num.exact_div(f)
                if q is None:
                    break
                num = q
                e -= 1
            if e:
                factors[f] = e
        return RationalFunction._make(num, factors)

    # calculus -----------------------------------------------------------
    def partial(self, var):
        """Partial derivative; bumps only factors that depend on ``var``."""
        dnum = self.num.partial(var)
        if not self.factors:
            return RationalFunction._make(dnum, {})
        moving = []
        for f, e in self.factors.items():
            df = f.partial(var)
            if df.terms:
                moving.append((f, e, df))
        if not moving:
            return RationalFunction._make(dnum, dict(self.factors))
        prod = MultiPoly.constant(self.field, self.nvars, 1)
        for f, _, _ in moving:
            prod = prod * f
        num = dnum * prod
        for k, (f, e, df) in enumerate(moving):
            rest = df.scale(e)
            for j, (g, _, _) in enumerate(moving):
                if j != k:
                    rest = rest * g
            num = num - self.num * rest
        factors = dict(self.factors)
        for f, e, _ in moving:
            factors[f] = e + 1
        return RationalFunction._make(num, factors)

    def evaluate(self, point):
        top = self.num.evaluate(point)
        bottom = self.field.one
        for f, e in self.factors.items():
            v = f.evaluate(point)
            if not v:
                raise PoleError("denominator vanishes at the evaluation point")
            bottom = bottom * v**e
        return top / bottom

    def homogeneous_degree(self):
        """deg(num) - deg(den) when both are homogeneous, else None."""
        if not self.num.terms:
            raise UsageError("the zero function has no degree")
        if not self.num.is_homogeneous():
            return None
        d = self.num.total_degree()
        for f, e in self.factors.items():
            if not f.is_homogeneous():
                return None
            d -= e * f.total_degree()
        return d

    def substitute(self, values):
        """Compose with ``values`` (one RationalFunction per variable)."""
        return compose_poly(self.num, values) / compose_den(self, values)

    def __str__(self):
        from .parse import format_rational

        return format_rational(self)

    def __repr__(self):
        return f"RationalFunction({self})"


def compose_poly(p, values):
    if len(values) != p.nvars:
        raise UsageError("need one substitution value per variable")
    target = values[0] if values else None
    out = RationalFunction.zero(target.field, target.nvars)
    for exps, c in p.items():
        term = RationalFunction.constant(target.field, target.nvars, c)
        for v, e in zip(values, exps):
            if e:
                term = term * v**e
        out = out + term
    return out


def compose_den(r, values):
    target = values[0]
    out = RationalFunction.constant(target.field, target.nvars, 1)
    for f, e in r.factors.items():
        out = out * compose_poly(f, values) ** e
    return out


def as_rational_function(x, field=None, nvars=None):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction._make(x, {})
    if field is None:
        raise UsageError("cannot lift a scalar without a field")
    return RationalFunction.constant(field, nvars, x)


def homogeneous_degree(f):
    return as_rational_function(f).homogeneous_degree()


def evaluate(f, point):
    """Exact value of a polynomial or rational function at ``point``."""
    return f.evaluate(point)
