"""Hyperplane arrangements: intersection lattice, Moebius function,
characteristic polynomial, chamber counts, cone/decone, decomposability,
dense edges and the beta invariant.

A hyperplane is a pair (normal, offset) meaning {x : normal . x = offset}.
Projective arrangements in P^(l-1) are stored as central arrangements in l
coordinates and flagged ``kind="projective"``.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from gmpy2 import mpq

from .algebra.fields import QQ, is_integer
from .algebra.matrix import _scalar_rref, scalar_rank
from .errors import UsageError

MAX_HYPERPLANES = 24
KINDS = ("affine", "central", "projective")


def _proportional(u, v):
    """True when the vectors u and v are nonzero multiples of each other."""
    ratio = None
    for a, b in zip(u, v):
        if (not a) != (not b):
            return False
        if a:
            r = b / a
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None


class Arrangement:
    def __init__(self, hyperplanes, ambient=None, kind="central", field=QQ):
        if kind not in KINDS:
            raise UsageError(f"unknown arrangement kind {kind!r}")
        self.kind = kind
        self.field = field
        hs = []
        for h in hyperplanes:
            if len(h) == 2 and isinstance(h[0], (list, tuple)):
                normal, offset = h
            else:
                normal, offset = h[:-1], h[-1]
            normal = tuple(field(a) for a in normal)
            offset = field(offset)
            hs.append((normal, offset))
        if ambient is None:
            if not hs:
                raise UsageError("ambient dimension required for an empty arrangement")
            ambient = len(hs[0][0])
        self.ambient = ambient
        for k, (a, c) in enumerate(hs):
            if len(a) != ambient:
                raise UsageError(f"hyperplane {k} has the wrong number of coordinates")
            if not any(a):
                raise UsageError(f"hyperplane {k} has a zero normal vector")
            if kind != "affine" and c:
                raise UsageError("central hyperplanes must pass through the origin")
        for i, j in combinations(range(len(hs)), 2):
            if _proportional(hs[i][0] + (hs[i][1],), hs[j][0] + (hs[j][1],)):
                raise UsageError(f"hyperplanes {i} and {j} coincide")
        self.hyperplanes = hs

    def __len__(self):
        return len(self.hyperplanes)

    @property
    def is_central(self):
        return self.kind != "affine" or not any(c for _, c in self.hyperplanes)

    def normals(self, members=None):
        idx = range(len(self)) if members is None else members
        return [list(self.hyperplanes[i][0]) for i in idx]

    def augmented(self, members=None):
        idx = range(len(self)) if members is None else members
        return [list(self.hyperplanes[i][0]) + [self.hyperplanes[i][1]] for i in idx]

    def rank(self, members=None):
        rows = self.normals(members)
        return scalar_rank(rows, self.ambient) if rows else 0

    def subarrangement(self, members, kind=None):
        return Arrangement(
            [self.hyperplanes[i] for i in members], self.ambient, kind or self.kind, self.field
        )

    def to_json(self):
        from .algebra.parse import format_scalar

        return {
            "ambient": self.ambient,
            "kind": self.kind,
            "hyperplanes": [[format_scalar(x) for x in a] + [format_scalar(c)] for a, c in self.hyperplanes],
        }

    def __repr__(self):
        return f"Arrangement({self.kind}, l={self.ambient}, {len(self)} hyperplanes)"


@dataclass
class Flat:
    members: frozenset
    dim: int
    point: tuple = ()
    basis: tuple = ()


@dataclass
class IntersectionLattice:
    arrangement: Arrangement
    flats: list
    mobius: list
    covers: list = dc_field(default_factory=list)

    def index(self, members):
        return self._index[frozenset(members)]

    def __post_init__(self):
        self._index = {f.members: k for k, f in enumerate(self.flats)}

    def rank_of(self, flat):
        return self.arrangement.ambient - flat.dim

    def by_rank(self):
        out = {}
        for f in self.flats:
            out.setdefault(self.rank_of(f), []).append(f)
        return out

    def whitney_numbers(self):
        """|sum of mu over flats of codimension k| for each k."""
        out = [0] * (self.arrangement.ambient + 1)
        for f, mu in zip(self.flats, self.mobius):
            out[self.rank_of(f)] += abs(mu)
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def counts_by_rank(self):
        out = {}
        for f in self.flats:
            r = self.rank_of(f)
            out[r] = out.get(r, 0) + 1
        return out

    def to_json(self):
        return [
            {"members": sorted(f.members), "dim": f.dim, "mobius": mu}
            for f, mu in zip(self.flats, self.mobius)
        ]


def _solve_affine(arr, members):
    """(point, kernel basis) of the subspace cut out by ``members``, or None if empty."""
    ell = arr.ambient
    rows = arr.augmented(sorted(members))
    if not rows:
        zero = arr.field.zero
        basis = tuple(tuple(arr.field.one if i == j else zero for i in range(ell)) for j in range(ell))
        return (zero,) * ell, basis
    rows = [list(r) for r in rows]
    pivots, _ = _scalar_rref(rows, ell + 1)
    if ell in pivots:
        return None
    zero = arr.field.zero
    point = [zero] * ell
    for k, pc in enumerate(pivots):
        point[pc] = rows[k][ell]
    basis = []
    for f in range(ell):
        if f in pivots:
            continue
        v = [zero] * ell
        v[f] = arr.field.one
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][f]
        basis.append(tuple(v))
    return tuple(point), tuple(basis)


def _contains(h, point, basis):
    a, c = h
    if sum((x * y for x, y in zip(a, point)), 0) != c:
        return False
    return all(not sum((x * y for x, y in zip(a, v)), 0) for v in basis)


def lattice(arr):
    """All nonempty flats with closed member sets, Moebius values and covers."""
    if len(arr) > MAX_HYPERPLANES:
        raise UsageError(
            f"lattice enumeration is capped at {MAX_HYPERPLANES} hyperplanes; restrict the arrangement"
        )
    ell = arr.ambient
    top = _solve_affine(arr, ())
    flats = {frozenset(): Flat(frozenset(), ell, *top)}
    level = [frozenset()]
    while level:
        nxt = []
        for members in level:
            for h in range(len(arr)):
                if h in members:
                    continue
                cand = members | {h}
                sol = _solve_affine(arr, cand)
                if sol is None:
                    continue
                point, basis = sol
                closed = frozenset(
                    k for k in range(len(arr)) if k in cand or _contains(arr.hyperplanes[k], point, basis)
                )
                if closed in flats:
                    continue
                flats[closed] = Flat(closed, len(basis), point, basis)
                nxt.append(closed)
        level = nxt
    ordered = sorted(flats.values(), key=lambda f: (-f.dim, sorted(f.members)))
    mobius = []
    covers = []
    for k, x in enumerate(ordered):
        mu = 0 if k else 1
        for j in range(k):
            y = ordered[j]
            if y.members < x.members:
                if k:
                    mu -= mobius[j]
                if y.dim == x.dim + 1:
                    covers.append((j, k))
        mobius.append(mu)
    return IntersectionLattice(arr, ordered, mobius, covers)


def characteristic_polynomial(arr, lat=None):
    """Integer coefficients of chi(t), low degree first."""
    lat = lat or lattice(arr)
    coeffs = [0] * (arr.ambient + 1)
    for f, mu in zip(lat.flats, lat.mobius):
        coeffs[f.dim] += mu
    return coeffs


def poly_eval(coeffs, t):
    return sum(c * t**k for k, c in enumerate(coeffs))


def format_char_poly(coeffs):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        body = (str(abs(c)) if abs(c) != 1 or not mono else "") + ("*" if abs(c) != 1 and mono else "") + mono
        terms.append(("-" if c < 0 else "+") + body)
    s = "".join(terms) or "0"
    return s[1:] if s.startswith("+") else s


@dataclass
class ChamberCounts:
    regions: int
    bounded: int
    relatively_bounded: int


def _require_real(arr):
    if arr.field != QQ:
        raise UsageError("chamber counts need an arrangement defined over the rationals")


def chamber_counts(arr, lat=None):
    """Zaslavsky's counts: regions = (-1)^l chi(-1), bounded = (-1)^rank chi(1)."""
    _require_real(arr)
    chi = characteristic_polynomial(arr, lat)
    ell = arr.ambient
    r = arr.rank()
    regions = (-1) ** ell * poly_eval(chi, -1)
    rel = (-1) ** r * poly_eval(chi, 1)
    bounded = rel if r == ell else 0
    return ChamberCounts(regions, bounded, rel)


# cone / decone / deletion / restriction ------------------------------------


def cone(arr):
    """Central arrangement in l+1 coordinates; the new hyperplane x_l = 0 comes last."""
    f = arr.field
    hs = [(a + (-c,), f.zero) for a, c in arr.hyperplanes]
    hs.append(((f.zero,) * arr.ambient + (f.one,), f.zero))
    return Arrangement(hs, arr.ambient + 1, "central", f)


def _restrict_to(arr, k, target):
    """Hyperplanes other than k, written in coordinates on {h_k . x = target}."""
    a = arr.hyperplanes[k][0]
    j = next(i for i, v in enumerate(a) if v)
    out = []
    keep = []
    for idx, (b, d) in enumerate(arr.hyperplanes):
        if idx == k:
            continue
        r = b[j] / a[j]
        normal = tuple(b[i] - r * a[i] for i in range(arr.ambient) if i != j)
        offset = d - r * target
        out.append((normal, offset))
        keep.append(idx)
    return out, keep


def decone(arr, chosen):
    """Affine arrangement of the other hyperplanes in the chart {alpha_chosen = 1}."""
    if not arr.is_central:
        raise UsageError("decone needs a central arrangement")
    if not 0 <= chosen < len(arr):
        raise UsageError(f"hyperplane {chosen} is not in the arrangement")
    hs, _ = _restrict_to(arr, chosen, arr.field.one)
    return Arrangement(hs, arr.ambient - 1, "affine", arr.field)


def cone_decone(arr, chosen=None):
    """decone(arr, chosen) for central input, cone(arr) for affine input."""
    if chosen is None:
        return cone(arr)
    return decone(arr, chosen)


def deletion(arr, k):
    return arr.subarrangement([i for i in range(len(arr)) if i != k])


def restriction(arr, k):
    """The arrangement induced on hyperplane k (empty intersections dropped)."""
    a, c = arr.hyperplanes[k]
    hs, _ = _restrict_to(arr, k, c)
    kept = []
    for normal, offset in hs:
        if not any(normal):
            continue  # parallel to H_k
        if any(_proportional(normal + (offset,), n2 + (o2,)) for n2, o2 in kept):
            continue
        kept.append((normal, offset))
    kind = "affine" if arr.kind == "affine" else "central"
    return Arrangement(kept, arr.ambient - 1, kind, arr.field)


# decomposability ---------------------------------------------------------


def components(arr, members=None):
    """Connected components of the matroid of the normals of ``members``.

    Two elements lie in one component when some fundamental circuit with
    respect to a fixed basis contains both.
    """
    members = sorted(range(len(arr)) if members is None else members)
    if not members:
        return []
    rows = arr.normals(members)
    ell = arr.ambient
    # greedy basis among members
    basis = []
    for k, row in enumerate(rows):
        if scalar_rank([rows[b] for b in basis] + [row], ell) > len(basis):
            basis.append(k)
    parent = list(range(len(members)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # coordinates of each element in the basis: solve B^T y = v
    bt = [[rows[b][i] for b in basis] for i in range(ell)]
    for k in range(len(members)):
        if k in basis:
            continue
        aug = [bt[i] + [rows[k][i]] for i in range(ell)]
        pivots, _ = _scalar_rref(aug, len(basis) + 1)
        for r, pc in enumerate(pivots):
            if pc < len(basis) and aug[r][len(basis)]:
                parent[find(basis[pc])] = find(k)
    groups = {}
    for k in range(len(members)):
        groups.setdefault(find(k), []).append(members[k])
    return sorted(groups.values())


@dataclass
class Decomposition:
    decomposable: bool
    partition: tuple = None


def is_decomposable(arr, members=None):
    """Decide whether the central arrangement splits into rank-additive parts."""
    members = sorted(range(len(arr)) if members is None else members)
    if len(members) < 2:
        return Decomposition(False)
    if members == list(range(len(arr))) and not arr.is_central:
        raise UsageError("decomposability is defined for central arrangements")
    comps = components(arr, members)
    if len(comps) == 1:
        return Decomposition(False)
    first = tuple(comps[0])
    rest = tuple(sorted(x for c in comps[1:] for x in c))
    return Decomposition(True, (first, rest))


# dense edges and beta -----------------------------------------------------


@dataclass
class DenseEdge:
    members: tuple
    dim: int
    weight: object
    nonneg_integer: object  # True/False, or None when integrality is user-asserted


@dataclass
class DenseEdgeReport:
    edges: list
    projective_check: bool
    coned_check: bool
    user_asserted: bool = False
    center_included: bool = False


class WeightedArrangement:
    def __init__(self, arrangement, weights):
        if len(weights) != len(arrangement):
            raise UsageError("one weight per hyperplane is required")
        self.arrangement = arrangement
        self.weights = [arrangement.field(w) for w in weights]

    def flat_weight(self, members):
        total = self.arrangement.field.zero
        for h in members:
            total = total + self.weights[h]
        return total


def _nonneg_integer(x):
    integral = is_integer(x)
    if integral is None:
        return None
    return bool(integral) and mpq(x.c[0] if hasattr(x, "c") else x) >= 0


def dense_edges(warr, lat=None):
    """Enumerate flats X whose localization is indecomposable, with their weights.

    Two verdicts are returned: one over the projective lattice (for central
    input the center is excluded, it is empty in projective space) and one
    over the coned lattice where the center is included.
    """
    arr = warr.arrangement
    lat = lat or lattice(arr)
    edges = []
    center = None
    if arr.is_central and lat.flats[-1].dim == arr.ambient - arr.rank():
        center = lat.flats[-1].members
    for f in lat.flats:
        if not f.members:
            continue
        if is_decomposable(arr, sorted(f.members)).decomposable:
            continue
        w = warr.flat_weight(f.members)
        edges.append(DenseEdge(tuple(sorted(f.members)), f.dim, w, _nonneg_integer(w)))
    user = any(e.nonneg_integer is None for e in edges)
    proj = all(e.nonneg_integer is not True for e in edges if e.members != tuple(sorted(center or ())))
    coned = all(e.nonneg_integer is not True for e in edges)
    if arr.kind == "affine":
        coned = proj
    return DenseEdgeReport(edges, proj, coned, user, center is not None)


def beta_invariant(arr, lat=None):
    """beta = (-1)^(r-1) [chi(t) / (t - 1)] at t = 1 for a central arrangement."""
    if not arr.is_central:
        raise UsageError("beta invariant needs a central (projective) arrangement")
    chi = characteristic_polynomial(arr, lat)
    # synthetic division by (t - 1), high degree first
    high = list(reversed(chi))
    quotient = []
    acc = 0
    for c in high[:-1]:
        acc = acc + c
        quotient.append(acc)
    remainder = acc + high[-1]
    if remainder != 0:
        raise ArithmeticError("(t - 1) does not divide the characteristic polynomial")
    value = sum(quotient)
    r = arr.rank()
    return (-1) ** (r - 1) * value


def generic_beta(s, n):
    return comb(s - 2, n - 1)
