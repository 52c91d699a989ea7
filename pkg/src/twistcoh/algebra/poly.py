"""Sparse multivariate polynomials with exact coefficients.

Monomials are packed into a single Python int: 16 bits per exponent with the
total degree in the most significant slot and x0 next, so that integer
comparison of packed monomials is graded-lexicographic comparison and monomial
multiplication is integer addition.
"""

from ..errors import UsageError

MAX_VARS = 16
BITS = 16
MASK = (1 << BITS) - 1


def pack(exps):
    v = sum(exps)
    for e in exps:
        if e < 0 or e > MASK:
            raise UsageError("exponent out of range")
        v = (v << BITS) | e
    return v


def unpack(m, nvars):
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = m & MASK
        m >>= BITS
    return tuple(out)


def mono_degree(m, nvars):
    return m >> (BITS * nvars)


def _var_shift(i, nvars):
    return BITS * (nvars - 1 - i)


def mono_divides(a, b, nvars):
    """True when monomial a divides monomial b."""
    d = b - a
    if d < 0:
        return False
    for _ in range(nvars):
        if (b & MASK) < (a & MASK):
            return False
        a >>= BITS
        b >>= BITS
    return True


class MultiPoly:
    """Element of K[x0, ..., x_{nvars-1}].

    ``terms`` maps packed monomials to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field, nvars, terms=None):
        if nvars < 0 or nvars > MAX_VARS:
            raise UsageError(f"nvars must be in [0, {MAX_VARS}]")
        self.field = field
        self.nvars = nvars
        clean = {}
        if terms:
            for k, c in terms.items():
                if isinstance(k, tuple):
                    if len(k) != nvars:
                        raise UsageError("exponent vector length does not match nvars")
                    k = pack(k)
                c = field(c)
                if c:
                    clean[k] = clean.get(k, field.zero) + c
                    if not clean[k]:
                        del clean[k]
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, field, nvars, terms):
        p = cls.__new__(cls)
        p.field = field
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field, nvars):
        return cls._make(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, c):
        c = field(c)
        return cls._make(field, nvars, {0: c} if c else {})

    @classmethod
    def variable(cls, field, nvars, i):
        if not 0 <= i < nvars:
            raise UsageError(f"variable index {i} out of range")
        exps = [0] * nvars
        exps[i] = 1
        return cls._make(field, nvars, {pack(exps): field.one})

    @classmethod
    def gens(cls, field, nvars):
        return [cls.variable(field, nvars, i) for i in range(nvars)]

    # basic queries ------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        return self.terms.get(0, self.field.zero)

    def items(self):
        """(exponent tuple, coefficient) pairs in descending graded-lex order."""
        for m in sorted(self.terms, reverse=True):
            yield unpack(m, self.nvars), self.terms[m]

    def total_degree(self):
        if not self.terms:
            return -1
        return mono_degree(max(self.terms), self.nvars)

    def degrees(self):
        return {mono_degree(m, self.nvars) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def leading(self):
        m = max(self.terms)
        return m, self.terms[m]

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            raise UsageError("expected a MultiPoly")
        if other.nvars != self.nvars:
            raise UsageError("polynomials have different numbers of variables")
        if other.field is not self.field and other.field != self.field:
            raise UsageError("polynomials are over different fields")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        try:
            return MultiPoly.constant(self.field, self.nvars, other)
        except (TypeError, UsageError):
            return None

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        t = dict(a.terms)
        for m, c in b.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return MultiPoly._make(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._make(self.field, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = -c
            else:
                v = v - c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return MultiPoly._make(self.field, self.nvars, t)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.field(c)
        if not c:
            return MultiPoly.zero(self.field, self.nvars)
        return MultiPoly._make(self.field, self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except (TypeError, UsageError):
                return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t = {}
        get = t.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                v = get(m)
                if v is None:
                    t[m] = c1 * c2
                else:
                    t[m] = v + c1 * c2
        t = {m: c for m, c in t.items() if c}
        return MultiPoly._make(self.field, self.nvars, t)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise UsageError("polynomial powers must be non-negative integers")
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (
                self.nvars == other.nvars
                and (self.field is other.field or self.field == other.field)
                and self.terms == other.terms
            )
        try:
            c = self.field(other)
        except (TypeError, UsageError):
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # division -----------------------------------------------------------
    def exact_div(self, other):
        """Quotient self / other, or None when other does not divide self."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        lm, lc = other.leading()
        n = self.nvars
        if len(other.terms) == 1:
            out = {}
            for m, c in self.terms.items():
                if not mono_divides(lm, m, n):
                    return None
                out[m - lm] = c / lc
            return MultiPoly._make(self.field, n, out)
        inv = 1 / lc
        r = dict(self.terms)
        q = {}
        otherterms = list(other.terms.items())
        while r:
            m = max(r)
            if not mono_divides(lm, m, n):
                return None
            c = r[m] * inv
            dm = m - lm
            q[dm] = c
            for m2, c2 in otherterms:
                k = m2 + dm
                v = r.get(k)
                if v is None:
                    r[k] = -c * c2
                else:
                    v = v - c * c2
                    if v:
                        r[k] = v
                    else:
                        del r[k]
        return MultiPoly._make(self.field, n, q)

    def divides(self, other):
        return other.exact_div(self) is not None

    # calculus and evaluation -------------------------------------------
    def partial(self, var):
        if not 0 <= var < self.nvars:
            raise UsageError(f"variable index {var} out of range")
        shift = _var_shift(var, self.nvars)
        step = (1 << shift) + (1 << (BITS * self.nvars))
        out = {}
        for m, c in self.terms.items():
            e = (m >> shift) & MASK
            if e:
                out[m - step] = c * e
        return MultiPoly._make(self.field, self.nvars, out)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise UsageError("point has the wrong number of coordinates")
        point = [self.field(p) for p in point]
        total = self.field.zero
        powers = [dict() for _ in range(self.nvars)]
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(unpack(m, self.nvars)):
                if e:
                    cache = powers[i]
                    pw = cache.get(e)
                    if pw is None:
                        pw = cache[e] = point[i] ** e
                    v = v * pw
            total = total + v
        return total

    def monic(self):
        """(leading coefficient, self / leading coefficient)."""
        if self.is_zero():
            raise UsageError("zero polynomial has no leading coefficient")
        _, lc = self.leading()
        if lc == 1:
            return self.field.one, self
        inv = 1 / lc
        return lc, MultiPoly._make(self.field, self.nvars, {m: c * inv for m, c in self.terms.items()})

    def monomial_content(self):
        """Exponent tuple of the largest monomial dividing every term."""
        if self.is_zero():
            return (0,) * self.nvars
        exps = None
        for m in self.terms:
            e = unpack(m, self.nvars)
            exps = e if exps is None else tuple(min(a, b) for a, b in zip(exps, e))
        return exps

    def homogenize(self, degree, var_index=0):
        """Insert a new variable at ``var_index`` and homogenize to ``degree``."""
        n = self.nvars
        if n + 1 > MAX_VARS:
            raise UsageError("too many variables to homogenize")
        out = {}
        for exps, c in self.items():
            d = sum(exps)
            if d > degree:
                raise UsageError("target degree below the polynomial degree")
            e = list(exps)
            e.insert(var_index, degree - d)
            out[pack(e)] = c
        return MultiPoly._make(self.field, n + 1, out)

    def dehomogenize(self, var_index):
        """Set variable ``var_index`` to 1 and drop it."""
        n = self.nvars
        out = {}
        for exps, c in self.items():
            e = list(exps)
            del e[var_index]
            k = pack(e)
            v = out.get(k, self.field.zero) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return MultiPoly._make(self.field, n - 1, out)

    def coefficient_vector(self, monomials):
        """Coefficients on a list of packed monomials; raises if a term is missing."""
        index = set(monomials)
        for m in self.terms:
            if m not in index:
                raise UsageError("polynomial has a term outside the given monomials")
        return [self.terms.get(m, self.field.zero) for m in monomials]

    def __str__(self):
        from .parse import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def monomials_of_degree(nvars, degree):
    """All packed monomials of the given total degree, descending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(pack(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    if nvars == 0:
        return [0] if degree == 0 else []
    rec([], degree, nvars)
    return out


def poly_arith(a, b, op):
    """Apply ``op`` in {"add", "sub", "mul"} to two polynomials."""
    if not isinstance(a, MultiPoly) or not isinstance(b, MultiPoly):
        raise UsageError("poly_arith expects two MultiPoly operands")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise UsageError(f"unknown operation {op!r}")


def partial_derivative(f, var):
    return f.partial(var)
