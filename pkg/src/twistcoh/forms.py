"""Differential forms with rational-function coefficients.

A p-form on K^nvars is stored as {strictly increasing index tuple: coefficient}.
Besides d, wedge and dlog this module provides the derivation bracket

    bracket(w1, ..., wp) = sum_k (-1)^(k-1) w1 ^ ... ^ (omit wk) ^ ... ^ wp

and the rank tests that decide when a bracket of logarithmic forms vanishes.
"""

from dataclasses import dataclass

from .algebra.matrix import Matrix, rank_kernel_det, symbolic_rank
from .algebra.poly import MultiPoly
from .algebra.ratfunc import RationalFunction, as_rational_function
from .errors import UsageError


def _merge_sign(a, b):
    """Sign and sorted union of two disjoint increasing tuples (None if they meet)."""
    inversions = 0
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            inversions += len(a) - i
            j += 1
        else:
            return 0, None
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions % 2 else 1), tuple(out)


def _sort_sign(idx):
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class DiffForm:
    """Homogeneous-degree differential form; immutable by convention."""

    __slots__ = ("field", "nvars", "degree", "coeffs")

    def __init__(self, field, nvars, degree, coeffs=None):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(b <= a for a, b in zip(idx, idx[1:])):
                raise UsageError(f"bad index tuple {idx} for a {degree}-form")
            if idx and (idx[0] < 0 or idx[-1] >= nvars):
                raise UsageError("index out of range")
            c = as_rational_function(c, field, nvars)
            if c:
                clean[idx] = c
        self.coeffs = clean

    @classmethod
    def _make(cls, field, nvars, degree, coeffs):
        w = cls.__new__(cls)
        w.field = field
        w.nvars = nvars
        w.degree = degree
        w.coeffs = coeffs
        return w

    @classmethod
    def zero(cls, field, nvars, degree):
        return cls._make(field, nvars, degree, {})

    @classmethod
    def function(cls, f):
        f = as_rational_function(f)
        return cls._make(f.field, f.nvars, 0, {(): f} if f else {})

    @classmethod
    def monomial(cls, field, nvars, indices, coef):
        sign, idx = _sort_sign(indices)
        coef = as_rational_function(coef, field, nvars)
        if idx is None or not coef:
            return cls.zero(field, nvars, len(indices))
        return cls._make(field, nvars, len(idx), {idx: coef if sign > 0 else -coef})

    @classmethod
    def dx(cls, field, nvars, i):
        return cls.monomial(field, nvars, [i], 1)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other):
        if not isinstance(other, DiffForm):
            raise UsageError("expected a DiffForm")
        if other.nvars != self.nvars:
            raise UsageError("forms live on different spaces")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree:
            if not other.coeffs:
                return self
            if not self.coeffs:
                return other
            raise UsageError("cannot add forms of different degrees")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return DiffForm._make(self.field, self.nvars, self.degree, out)

    def __neg__(self):
        return DiffForm._make(self.field, self.nvars, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Multiply by a scalar, polynomial or rational function."""
        if isinstance(f, DiffForm):
            raise UsageError("use wedge() to multiply forms")
        out = {}
        for k, c in self.coeffs.items():
            v = c * f
            if v:
                out[k] = v
        return DiffForm._make(self.field, self.nvars, self.degree, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self - other).is_zero() if self.nvars == other.nvars else False

    __hash__ = None

    def __xor__(self, other):
        return wedge(self, other)

    def cancel(self):
        return DiffForm._make(
            self.field, self.nvars, self.degree, {k: c.cancel() for k, c in self.coeffs.items()}
        )

    def __str__(self):
        from .algebra.parse import format_form

        return format_form(self)

    def __repr__(self):
        return f"DiffForm<{self.degree}>({self})"


# operations ---------------------------------------------------------------


def wedge(*forms):
    """Exterior product of any number of forms."""
    if not forms:
        raise UsageError("wedge of nothing")
    result = forms[0]
    for w in forms[1:]:
        result = _wedge2(result, w)
    return result


def _wedge2(a, b):
    a._check(b)
    deg = a.degree + b.degree
    out = {}
    if deg > a.nvars:
        return DiffForm.zero(a.field, a.nvars, deg)
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            sign, idx = _merge_sign(ia, ib)
            if idx is None:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            v = out.get(idx)
            out[idx] = term if v is None else v + term
    out = {k: c for k, c in out.items() if c}
    return DiffForm._make(a.field, a.nvars, deg, out)


def exterior_derivative(w):
    out = {}
    for idx, c in w.coeffs.items():
        for i in range(w.nvars):
            if i in idx:
                continue
            dc = c.partial(i)
            if not dc:
                continue
            sign, key = _sort_sign((i,) + idx)
            term = dc if sign > 0 else -dc
            v = out.get(key)
            out[key] = term if v is None else v + term
    out = {k: c.cancel() for k, c in out.items() if c}
    return DiffForm._make(w.field, w.nvars, w.degree + 1, out)


def differential(f):
    """df for a polynomial or rational function."""
    return exterior_derivative(DiffForm.function(f))


def dlog(f):
    """df / f as a 1-form."""
    f = as_rational_function(f)
    if not f:
        raise UsageError("dlog of zero")
    out = {}
    if f.is_polynomial():
        num = f.num
        for i in range(f.nvars):
            d = num.partial(i)
            if d:
                out[(i,)] = RationalFunction(d, num)
        return DiffForm._make(f.field, f.nvars, 1, out)
    # dlog(num / prod g^e) = dlog num - sum e dlog g
    w = dlog(f.num) if not f.num.is_constant() else DiffForm.zero(f.field, f.nvars, 1)
    for g, e in f.factors.items():
        w = w - dlog(g) * e
    return w


def bracket(forms):
    """Derivation bracket of p >= 2 one-forms (a (p-1)-form)."""
    forms = list(forms)
    p = len(forms)
    if p < 2:
        raise UsageError("the bracket needs at least two forms")
    first = forms[0]
    for w in forms:
        first._check(w)
        if w.degree != 1:
            raise UsageError("the bracket takes 1-forms")
    # prefix[k] = w1 ^ ... ^ wk, suffix[k] = wk ^ ... ^ wp (0-based, exclusive/inclusive)
    one = DiffForm.function(RationalFunction.constant(first.field, first.nvars, 1))
    prefix = [one]
    for w in forms[:-1]:
        prefix.append(_wedge2(prefix[-1], w))
    suffix = [one] * (p + 1)
    for k in range(p - 1, 0, -1):
        suffix[k] = _wedge2(forms[k], suffix[k + 1])
    total = DiffForm.zero(first.field, first.nvars, p - 1)
    for k in range(p):
        term = _wedge2(prefix[k], suffix[k + 1])
        total = total + term if k % 2 == 0 else total - term
    return total


der_bracket = bracket


def euler_contraction(w):
    """Interior product with the Euler field sum x_i d/dx_i."""
    if w.degree == 0:
        return DiffForm.zero(w.field, w.nvars, 0)
    xs = MultiPoly.gens(w.field, w.nvars)
    out = {}
    for idx, c in w.coeffs.items():
        for k, i in enumerate(idx):
            key = idx[:k] + idx[k + 1:]
            term = c * xs[i]
            if k % 2:
                term = -term
            v = out.get(key)
            out[key] = term if v is None else v + term
    out = {k: c for k, c in out.items() if c}
    return DiffForm._make(w.field, w.nvars, w.degree - 1, out)


def coefficient_rows(forms):
    """nvars x p matrix whose column k holds the coefficients of the 1-form forms[k]."""
    first = forms[0]
    zero = RationalFunction.zero(first.field, first.nvars)
    return [[w.coeffs.get((i,), zero) for w in forms] for i in range(first.nvars)]


@dataclass
class LogDependence:
    bracket_zero: bool
    wedge_zero: bool
    witness: list = None


def _clear(vec):
    """Scale a vector of rational functions to polynomial entries."""
    lcm = {}
    for x in vec:
        for f, e in x.factors.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
    out = []
    for x in vec:
        num = x.num
        for f, e in lcm.items():
            k = e - x.factors.get(f, 0)
            if k:
                num = num * f**k
        out.append(num)
    return out


def log_dependence(functions, seed=0):
    """Decide vanishing of the bracket and of the wedge of dlog f_1, ..., dlog f_p.

    The bracket vanishes iff some nonzero (g_1..g_p) has sum g_i = 0 and
    sum g_i dlog f_i = 0, i.e. iff the matrix with a row of ones on top of the
    coefficient rows has a nontrivial kernel.  The witness returned is such a
    g with polynomial entries.
    """
    fs = [as_rational_function(f) for f in functions]
    if len(fs) < 2:
        raise UsageError("need at least two functions")
    for f in fs:
        if not f:
            raise UsageError("zero function in log_dependence")
        if f.is_constant():
            raise UsageError("constant function in log_dependence")
    nvars = fs[0].nvars
    # scaling column i by f_i keeps both ranks and turns dlog f_i into df_i,
    # which is polynomial for polynomial f_i; a kernel vector h gives g_i = f_i h_i
    coeffs = coefficient_rows([differential(f) for f in fs])
    stacked = Matrix([list(fs)] + coeffs)
    bracket_zero = symbolic_rank(stacked, seed=seed) < len(fs)
    witness = None
    if bracket_zero:
        h = rank_kernel_det(stacked).kernel[0]
        witness = _clear([f * x for f, x in zip(fs, h)])
    wedge_zero = len(fs) > nvars or symbolic_rank(Matrix(coeffs), seed=seed) < len(fs)
    return LogDependence(bracket_zero, wedge_zero, witness)
