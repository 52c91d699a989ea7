"""Independent cross-checks for the arrangement combinatorics.

These routines never touch the Moebius function: chi(q) is obtained by
counting points over a prime field, and real chambers by enumerating sign
vectors of sample points.
"""

from fractions import Fraction
from itertools import combinations, product

from gmpy2 import mpq

from .algebra.fields import QQ, NFElement
from .algebra.matrix import scalar_rank
from .errors import UsageError


class GFElement:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _lift(self, o):
        if isinstance(o, GFElement):
            return o.v
        if isinstance(o, int):
            return o
        return NotImplemented

    def __add__(self, o):
        o = self._lift(o)
        return NotImplemented if o is NotImplemented else GFElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return NotImplemented if o is NotImplemented else GFElement(self.v - o, self.p)

    def __rsub__(self, o):
        o = self._lift(o)
        return NotImplemented if o is NotImplemented else GFElement(o - self.v, self.p)

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __mul__(self, o):
        o = self._lift(o)
        return NotImplemented if o is NotImplemented else GFElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero mod p")
        return GFElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, o):
        o = self._lift(o)
        if o is NotImplemented:
            return o
        if not self.v:
            raise ZeroDivisionError("division by zero mod p")
        return GFElement(o * pow(self.v, -1, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        o = self._lift(o)
        return False if o is NotImplemented else (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} mod {self.p}"


class PrimeField:
    def __init__(self, p):
        self.p = p
        self.zero = GFElement(0, p)
        self.one = GFElement(1, p)

    def __call__(self, x):
        if isinstance(x, GFElement):
            return x
        return GFElement(int(x), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def _roots_mod_p(coeffs, p):
    return [r for r in range(p) if sum(int(c) * r**k for k, c in enumerate(coeffs)) % p == 0]


def reduction_map(field, p, root=None):
    """A function sending elements of ``field`` to GF(p).

    For an extension field a root of the minimal polynomial mod p is needed;
    the first one is used unless ``root`` is given.
    """
    def rat(q):
        q = mpq(q)
        den = int(q.denominator)
        if den % p == 0:
            raise UsageError(f"{q} has a denominator divisible by {p}")
        return int(q.numerator) * pow(den, -1, p) % p

    if field == QQ:
        return lambda x: GFElement(rat(x), p)
    poly = [int(c) for c in field.minimal_poly] if all(mpq(c).denominator == 1 for c in field.minimal_poly) else None
    if poly is None:
        raise UsageError("minimal polynomial must have integer coefficients for reduction")
    roots = _roots_mod_p(poly, p)
    if root is None:
        if not roots:
            raise UsageError(f"minimal polynomial has no root mod {p}")
        root = roots[0]
    elif root not in roots:
        raise UsageError(f"{root} is not a root of the minimal polynomial mod {p}")

    def nf(x):
        if not isinstance(x, NFElement):
            return GFElement(rat(x), p)
        return GFElement(sum(rat(c) * root**k for k, c in enumerate(x.c)), p)

    return nf


def reduce_arrangement(arr, p, root=None):
    """The arrangement mod p (its lattice may differ: check good reduction)."""
    from .arrangements import Arrangement

    f = reduction_map(arr.field, p, root)
    hs = [(tuple(f(x) for x in a), f(c)) for a, c in arr.hyperplanes]
    return Arrangement(hs, arr.ambient, arr.kind, PrimeField(p))


def good_reduction(arr, p, root=None):
    """True when reduction mod p keeps the intersection lattice (same closed sets)."""
    from .arrangements import lattice

    try:
        red = reduce_arrangement(arr, p, root)
    except UsageError:
        return False
    a = {f.members: f.dim for f in lattice(arr).flats}
    b = {f.members: f.dim for f in lattice(red).flats}
    return a == b


def point_count(arr, p, root=None):
    """Number of points of F_p^l lying on no hyperplane (brute force)."""
    f = reduction_map(arr.field, p, root)
    hs = [([f(x).v for x in a], f(c).v) for a, c in arr.hyperplanes]
    ell = arr.ambient
    if p**ell > 2_000_000:
        raise UsageError("point count too large for brute force")
    count = 0
    for pt in product(range(p), repeat=ell):
        if all(sum(a * x for a, x in zip(n, pt)) % p != c for n, c in hs):
            count += 1
    return count


def sign_vector_chambers(arr):
    """(regions, bounded) of a real arrangement in l <= 2 by sampling sign vectors.

    Unbounded regions are read off exactly from the sign pattern of R*d + w as
    R grows, for d running over line directions and one direction inside each
    sector between them.  Every other region has a vertex on its boundary and
    is hit by a small circle of samples around that vertex.
    """
    if arr.field != QQ:
        raise UsageError("sign vectors need a real arrangement")
    ell = arr.ambient
    if ell > 2:
        raise UsageError("sign-vector enumeration is implemented for l <= 2")
    hs = [([Fraction(int(mpq(x).numerator), int(mpq(x).denominator)) for x in a],
           Fraction(int(mpq(c).numerator), int(mpq(c).denominator))) for a, c in arr.hyperplanes]

    def signs(pt):
        out = []
        for a, c in hs:
            v = sum(x * y for x, y in zip(a, pt)) - c
            if v == 0:
                return None
            out.append(v > 0)
        return tuple(out)

    if not hs:
        return 1, 0
    if ell == 1:
        cuts = sorted({c / a[0] for a, c in hs})
        pts = [cuts[0] - 1, cuts[-1] + 1] + [(x + y) / 2 for x, y in zip(cuts, cuts[1:])]
        far = {signs((cuts[0] - 1,)), signs((cuts[-1] + 1,))}
        regions = {signs((x,)) for x in pts}
        return len(regions), len(regions - far)

    verts = set()
    for (a, c), (b, d) in combinations(hs, 2):
        det = a[0] * b[1] - a[1] * b[0]
        if det:
            verts.add(((c * b[1] - a[1] * d) / det, (a[0] * d - c * b[0]) / det))
    # directions: both orientations of every line, plus one inside each sector
    lines = {_normalize((a[1], -a[0])) for a, _ in hs}
    base = sorted(lines | {(-x, -y) for x, y in lines}, key=_angle_key)
    inner = []
    for k, u in enumerate(base):
        v = base[(k + 1) % len(base)]
        w = (u[0] + v[0], u[1] + v[1])
        inner.append(w if w != (0, 0) else (-u[1], u[0]))
    # unbounded regions: sign pattern of R*d + w as R -> infinity
    unbounded = set()
    for d in inner:
        unbounded.add(tuple(a[0] * d[0] + a[1] * d[1] > 0 for a, _ in hs))
    for d in base:
        par = [k for k, (a, _) in enumerate(hs) if a[0] * d[0] + a[1] * d[1] == 0]
        normal = hs[par[0]][0]
        # positions along the normal: t with a_k . (t * normal) = c_k
        ts = sorted({hs[k][1] / (hs[k][0][0] * normal[0] + hs[k][0][1] * normal[1]) for k in par})
        samples_t = [ts[0] - 1, ts[-1] + 1] + [(x + y) / 2 for x, y in zip(ts, ts[1:])]
        for t in samples_t:
            sg = []
            for k, (a, c) in enumerate(hs):
                if k in par:
                    sg.append(t * (a[0] * normal[0] + a[1] * normal[1]) - c > 0)
                else:
                    sg.append(a[0] * d[0] + a[1] * d[1] > 0)
            unbounded.add(tuple(sg))
    # bounded regions have a vertex on their boundary: sample a small circle
    # around each vertex, with radius below the distance to any other line
    regions = set(unbounded)
    for v in verts:
        gaps = [abs(a[0] * v[0] + a[1] * v[1] - c) for a, c in hs]
        gaps = [g for g in gaps if g]
        norm = max(abs(a[0]) + abs(a[1]) for a, _ in hs) * max(abs(x) + abs(y) for x, y in inner + base)
        eps = (min(gaps) / (2 * norm)) if gaps else Fraction(1)
        for d in inner + base:
            sg = signs((v[0] + eps * d[0], v[1] + eps * d[1]))
            if sg is not None:
                regions.add(sg)
    return len(regions), len(regions - unbounded)


def _normalize(v):
    x, y = v
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    m = max(abs(x), abs(y))
    return (x / m, y / m)


def _angle_key(v):
    import math

    return math.atan2(float(v[1]), float(v[0]))


def chi_by_point_counts(arr, primes, root=None):
    """Interpolate chi(t) from point counts at primes of good reduction."""
    ell = arr.ambient
    pts = []
    for p in primes:
        if good_reduction(arr, p, root):
            pts.append((p, point_count(arr, p, root)))
        if len(pts) == ell + 1:
            break
    if len(pts) < ell + 1:
        raise UsageError("not enough primes of good reduction")
    # Lagrange interpolation with exact fractions
    coeffs = [Fraction(0)] * (ell + 1)
    for i, (xi, yi) in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(ell + 1):
            coeffs[k] += yi * basis[k] / denom
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("point counts are not polynomial in q")
    return [int(c) for c in coeffs]


def rank_mod_p(rows, p):
    return scalar_rank([[GFElement(int(x), p) for x in r] for r in rows])
