"""Exact linear algebra over K and K(x).

Scalar matrices are reduced by ordinary Gauss-Jordan elimination.  Matrices
with rational-function entries have each row's denominator cleared and are
then reduced by fraction-free (Bareiss) elimination over K[x], so every
intermediate entry stays a polynomial minor of the cleared matrix.
"""

import random
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from ..errors import PoleError, UsageError
from .poly import MultiPoly
from .ratfunc import RationalFunction


class Matrix:
    """Dense rows x cols grid of scalars, polynomials or rational functions."""

    def __init__(self, entries, cols=None):
        entries = [list(r) for r in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        for r in entries:
            if len(r) != cols:
                raise UsageError("ragged matrix")
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j):
        return [r[j] for r in self.entries]

    def submatrix(self, rows, cols):
        return Matrix([[self.entries[i][j] for j in cols] for i in rows], cols=len(cols))

    def transpose(self):
        return Matrix([list(c) for c in zip(*self.entries)], cols=self.rows)

    def is_symbolic(self):
        return any(isinstance(x, (MultiPoly, RationalFunction)) for r in self.entries for x in r)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


@dataclass
class RankResult:
    rank: int
    kernel: list = dc_field(default_factory=list)
    det: object = None
    pivots: tuple = ()


# scalar path --------------------------------------------------------------


def _scalar_rref(rows, ncols):
    """In-place Gauss-Jordan; returns (pivot columns, determinant sign/scale)."""
    pivots = []
    det = 1
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            det = -det
        pv = rows[r][c]
        det = det * pv
        inv = 1 / pv
        rows[r] = [v * inv if v else v for v in rows[r]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rr = rows[r]
                    rows[i] = [a - f * b if b else a for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots, det


def _scalar(x):
    return mpq(x) if isinstance(x, int) else x


def scalar_rank(entries, ncols=None):
    rows = [[_scalar(x) for x in r] for r in entries]
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    pivots, _ = _scalar_rref(rows, ncols)
    return len(pivots)


def _scalar_rank_kernel_det(M, zero, one):
    rows = [list(r) for r in M.entries]
    pivots, det = _scalar_rref(rows, M.cols)
    rank = len(pivots)
    free = [c for c in range(M.cols) if c not in pivots]
    kernel = []
    for f in free:
        v = [zero] * M.cols
        v[f] = one
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][f]
        kernel.append(v)
    d = None
    if M.rows == M.cols:
        d = det if rank == M.rows else zero
    return RankResult(rank, kernel, d, tuple(pivots))


# symbolic path -------------------------------------------------------------


def _as_rf(x, field, nvars):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction(x)
    return RationalFunction.constant(field, nvars, x)


def _context(M):
    for r in M.entries:
        for x in r:
            if isinstance(x, (MultiPoly, RationalFunction)):
                return x.field, x.nvars
    return None, None


def clear_row_denominators(M):
    """Polynomial matrix with each row scaled by its common denominator, and the scales."""
    field, nvars = _context(M)
    out = []
    scales = []
    for row in M.entries:
        rfs = [_as_rf(x, field, nvars) for x in row]
        lcm = {}
        for x in rfs:
            for f, e in x.factors.items():
                if lcm.get(f, 0) < e:
                    lcm[f] = e
        polys = []
        for x in rfs:
            num = x.num
            for f, e in lcm.items():
                k = e - x.factors.get(f, 0)
                if k:
                    num = num * f**k
            polys.append(num)
        den = MultiPoly.constant(field, nvars, 1)
        for f, e in lcm.items():
            den = den * f**e
        out.append(polys)
        scales.append(den)
    return out, scales


def bareiss(rows, ncols):
    """Fraction-free row echelon form of a polynomial matrix, in place.

    Returns (pivot columns, sign of the row permutation).
    """
    nrows = len(rows)
    if not nrows:
        return [], 1
    field = rows[0][0].field
    nvars = rows[0][0].nvars
    prev = MultiPoly.constant(field, nvars, 1)
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        p = None
        best = None
        for i in range(r, nrows):
            x = rows[i][c]
            if x.terms and (best is None or len(x.terms) < best):
                p, best = i, len(x.terms)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        pv = rows[r][c]
        for i in range(r + 1, nrows):
            a = rows[i][c]
            row_i = rows[i]
            for j in range(c + 1, ncols):
                v = pv * row_i[j]
                if a.terms and rows[r][j].terms:
                    v = v - a * rows[r][j]
                if prev.terms != {0: field.one}:
                    q = v.exact_div(prev)
                    if q is None:
                        raise ArithmeticError("Bareiss division was not exact")
                    v = q
                row_i[j] = v
            row_i[c] = MultiPoly.zero(field, nvars)
        prev = pv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots, sign


def _symbolic_rank_kernel_det(M):
    field, nvars = _context(M)
    polys, scales = clear_row_denominators(M)
    rows = [list(r) for r in polys]
    pivots, sign = bareiss(rows, M.cols)
    rank = len(pivots)
    zero = RationalFunction.zero(field, nvars)
    one = RationalFunction.constant(field, nvars, 1)
    kernel = []
    for f in (c for c in range(M.cols) if c not in pivots):
        v = [zero] * M.cols
        v[f] = one
        for k in range(rank - 1, -1, -1):
            pc = pivots[k]
            acc = zero
            for j in range(pc + 1, M.cols):
                if v[j] and rows[k][j].terms:
                    acc = acc + v[j] * rows[k][j]
            v[pc] = (-acc / rows[k][pc]).cancel()
        kernel.append(v)
    det = None
    if M.rows == M.cols:
        if rank < M.rows:
            det = zero
        else:
            top = rows[-1][-1].scale(sign)
            den = MultiPoly.constant(field, nvars, 1)
            for s in scales:
                den = den * s
            det = RationalFunction(top, den).cancel()
    return RankResult(rank, kernel, det, tuple(pivots))


def rank_kernel_det(M):
    """Exact rank, right-kernel basis and (for square M) determinant."""
    if not isinstance(M, Matrix):
        M = Matrix(M)
    if M.rows == 0 or M.cols == 0:
        return RankResult(0, [], None)
    field, _ = _context(M)
    if field is None:
        M = Matrix([[_scalar(x) for x in r] for r in M.entries], cols=M.cols)
        zero = M.entries[0][0] * 0
        return _scalar_rank_kernel_det(M, zero, zero + 1)
    return _symbolic_rank_kernel_det(M)


def _random_point(nvars, rng):
    return [rng.randint(-97, 97) for _ in range(nvars)]


def symbolic_rank(M, seed=0, tries=3):
    """Rank over K(x).

    A nonzero minor at a random rational point certifies a lower bound exactly,
    so when evaluation already reaches min(rows, cols) no elimination is run.
    """
    if not isinstance(M, Matrix):
        M = Matrix(M)
    field, nvars = _context(M)
    if field is None:
        return scalar_rank(M.entries, M.cols)
    full = min(M.rows, M.cols)
    rng = random.Random(seed)
    for _ in range(tries):
        pt = _random_point(nvars, rng)
        try:
            vals = [[_as_rf(x, field, nvars).evaluate(pt) for x in r] for r in M.entries]
        except PoleError:
            continue
        if scalar_rank(vals, M.cols) == full:
            return full
    return _symbolic_rank_kernel_det(M).rank


def determinant(M):
    return rank_kernel_det(M).det


def cofactor_det(entries):
    """Determinant by Laplace expansion along the first row (test oracle)."""
    n = len(entries)
    if n == 0:
        return 1
    if n == 1:
        return entries[0][0]
    total = None
    for j in range(n):
        a = entries[0][j]
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = a * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return entries[0][0] - entries[0][0]
    return total


def mat_vec(M, v):
    out = []
    for row in M.entries:
        acc = None
        for a, b in zip(row, v):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out
