"""Orlik-Solomon algebra on the nbc basis and the Aomoto complex (OS, a ^ -).

Elements of OS^k are dicts {nbc tuple: coefficient}.  Any product
e_{i1} ^ ... ^ e_{ik} is rewritten to the nbc basis by repeatedly replacing a
broken circuit through the relation  sum_j (-1)^j e_{C - c_j} = 0.
"""

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .algebra.fields import QQ, is_integer
from .algebra.matrix import scalar_rank
from .arrangements import Arrangement, lattice
from .errors import UsageError
from .forms import _merge_sign, _sort_sign


class OSAlgebra:
    """OS algebra of an arrangement with respect to a linear order of the hyperplanes.

    ``order`` lists hyperplane indices from smallest to largest; the input
    order is used by default.
    """

    def __init__(self, arrangement, order=None):
        self.arrangement = arrangement
        self.field = arrangement.field
        n = len(arrangement)
        self.order = list(range(n)) if order is None else list(order)
        if sorted(self.order) != list(range(n)):
            raise UsageError("order must be a permutation of the hyperplanes")
        self.position = {h: k for k, h in enumerate(self.order)}
        self._rank_memo = {}
        self._build_matroid()
        self._nf_memo = {}

    # matroid data --------------------------------------------------------
    def _rank(self, subset):
        r = self._rank_memo.get(subset)
        if r is None:
            arr = self.arrangement
            r = scalar_rank(arr.augmented(subset), arr.ambient + 1) if subset else 0
            lin = scalar_rank(arr.normals(subset), arr.ambient) if subset else 0
            # an inconsistent (non-central) subset has augmented rank > linear rank
            r = (lin, r)
            self._rank_memo[subset] = r
        return r

    def _build_matroid(self):
        n = len(self.arrangement)
        indep = {1: [(h,) for h in range(n)]}
        circuits = []
        k = 1
        while indep[k]:
            have = set(indep[k])
            nxt = []
            for s in indep[k]:
                for h in range(s[-1] + 1, n):
                    cand = s + (h,)
                    if any(cand[:j] + cand[j + 1:] not in have for j in range(k)):
                        continue
                    lin, aug = self._rank(cand)
                    if aug > lin:
                        continue  # empty intersection
                    if lin == k + 1:
                        nxt.append(cand)
                    else:
                        circuits.append(cand)
            k += 1
            indep[k] = nxt
        self.independent = {0: [()]}
        self.independent.update({j: v for j, v in indep.items() if v})
        self._indep_set = {s for v in self.independent.values() for s in v}
        self.circuits = circuits
        self.broken = []
        for c in circuits:
            low = min(c, key=self.position.__getitem__)
            self.broken.append((frozenset(c) - {low}, c, low))
        self.nbc = {}
        for j, sets in self.independent.items():
            self.nbc[j] = [s for s in sets if not any(b <= set(s) for b, _, _ in self.broken)]
        self.top = max(self.nbc)
        self.basis_index = {j: {s: i for i, s in enumerate(v)} for j, v in self.nbc.items()}

    def dims(self):
        return [len(self.nbc[j]) for j in range(self.top + 1)]

    def dim(self, k):
        return len(self.nbc.get(k, []))

    # normal form ---------------------------------------------------------
    def normal_form(self, indices):
        """e_{i1} ^ ... ^ e_{ik} in the nbc basis (indices in any order)."""
        sign, idx = _sort_sign(indices)
        if idx is None:
            return {}
        nf = self._nf(idx)
        return nf if sign > 0 else {k: -v for k, v in nf.items()}

    def _nf(self, u):
        hit = self._nf_memo.get(u)
        if hit is not None:
            return hit
        if u not in self._indep_set:
            out = {}
        else:
            su = set(u)
            found = next(((b, c, low) for b, c, low in self.broken if b <= su), None)
            if found is None:
                out = {u: 1}
            else:
                out = self._rewrite(u, found)
        self._nf_memo[u] = out
        return out

    def _rewrite(self, u, found):
        # relation over the circuit c (sorted): sum_j (-1)^j e_{c - c_j} = 0,
        # so e_{c - low} = -(-1)^q sum_{j != q} (-1)^j e_{c - c_j}
        b, c, low = found
        q = c.index(low)
        b_sorted = tuple(x for x in c if x != low)
        rest = tuple(x for x in u if x not in b)
        s0, merged = _merge_sign(b_sorted, rest)
        assert merged == u
        out = {}
        for j, cj in enumerate(c):
            if j == q:
                continue
            coef = -((-1) ** q) * ((-1) ** j) * s0
            part = tuple(x for x in c if x != cj)
            s1, v = _merge_sign(part, rest)
            if v is None:
                continue
            for key, val in self._nf(v).items():
                out[key] = out.get(key, 0) + coef * s1 * val
        return {k: v for k, v in out.items() if v}

    # algebra operations ---------------------------------------------------
    def generator(self, h):
        return self.normal_form((h,))

    def wedge(self, x, y):
        out = {}
        for s, a in x.items():
            for t, b in y.items():
                sign, v = _merge_sign(s, t)
                if v is None:
                    continue
                for key, val in self._nf(v).items():
                    out[key] = out.get(key, 0) + sign * val * a * b
        return {k: v for k, v in out.items() if v}

    def monomial(self, indices):
        return self.normal_form(tuple(indices))

    def bracket(self, indices):
        """sum_k (-1)^k e_{i0} ^ ... (omit e_{ik}) ... ^ e_{ip}."""
        out = {}
        for k in range(len(indices)):
            part = indices[:k] + indices[k + 1:]
            sgn = -1 if k % 2 else 1
            for key, val in self.normal_form(part).items():
                out[key] = out.get(key, 0) + sgn * val
        return {k: v for k, v in out.items() if v}

    def vector(self, x, k):
        v = [self.field.zero] * self.dim(k)
        for s, c in x.items():
            v[self.basis_index[k][s]] = v[self.basis_index[k][s]] + c
        return v

    def whitney_check(self, lat=None):
        """OS dimensions against the unsigned Whitney numbers of the lattice."""
        lat = lat or lattice(self.arrangement)
        w = lat.whitney_numbers()
        return self.dims() == w[: len(self.dims())] and len(w) == len(self.dims())


# Aomoto complex ---------------------------------------------------------


@dataclass
class AomotoComplex:
    algebra: OSAlgebra
    weights: list
    matrices: dict  # k -> matrix of d^k : OS^k -> OS^(k+1), as row lists
    ranks: dict
    cohomology: list
    closed: bool = True

    def image_rank(self, k):
        return self.ranks.get(k - 1, 0)


def _differential(os_alg, weights, k):
    src = os_alg.nbc.get(k, [])
    tgt_index = os_alg.basis_index.get(k + 1, {})
    zero = os_alg.field.zero
    mat = [[zero] * len(src) for _ in range(len(tgt_index))]
    for col, s in enumerate(src):
        for h, lam in enumerate(weights):
            if not lam or h in s:
                continue
            sign, v = _sort_sign((h,) + s)
            for key, val in os_alg._nf(v).items():
                row = tgt_index[key]
                mat[row][col] = mat[row][col] + lam * sign * val
    return mat


def _matmul(a, b, zero):
    if not a or not b or not b[0]:
        return []
    return [[sum((x * y for x, y in zip(row, col)), zero) for col in zip(*b)] for row in a]


def aomoto_cohomology(arrangement, weights, order=None, os_alg=None):
    """Ranks of H^k(OS, a ^ -) for a = sum lambda_H e_H."""
    if len(weights) != len(arrangement):
        raise UsageError("one weight per hyperplane is required")
    os_alg = os_alg or OSAlgebra(arrangement, order)
    f = arrangement.field
    weights = [f(w) for w in weights]
    top = os_alg.top
    mats, ranks = {}, {}
    for k in range(top):
        m = _differential(os_alg, weights, k)
        mats[k] = m
        ranks[k] = scalar_rank(m, os_alg.dim(k)) if m and os_alg.dim(k) else 0
    closed = True
    for k in range(top - 1):
        prod = _matmul(mats[k + 1], mats[k], f.zero)
        if any(x for r in prod for x in r):
            closed = False
    coh = []
    for k in range(top + 1):
        coh.append(os_alg.dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0))
    return AomotoComplex(os_alg, weights, mats, ranks, coh, closed)


def is_cocycle(cx, k, vec):
    m = cx.matrices.get(k)
    if not m:
        return True
    return all(not sum((a * b for a, b in zip(row, vec)), cx.algebra.field.zero) for row in m)


def independent_mod_image(cx, k, vectors):
    """True when the classes of the cocycles ``vectors`` in H^k are independent."""
    image = []
    m = cx.matrices.get(k - 1)
    if m:
        image = [list(col) for col in zip(*m)]
    r0 = scalar_rank(image, cx.algebra.dim(k)) if image else 0
    allv = image + [list(v) for v in vectors]
    r1 = scalar_rank(allv, cx.algebra.dim(k)) if allv else 0
    return r1 - r0 == len(vectors)


# generic arrangements ---------------------------------------------------


def random_generic_arrangement(s, n, seed=0, field=QQ, bound=9):
    """s hyperplanes through 0 in K^n with all n x n minors nonzero."""
    from .algebra.matrix import rank_kernel_det

    rng = random.Random(seed)
    for _ in range(1000):
        rows = [[field(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(s)]
        if all(rank_kernel_det([rows[i] for i in c]).rank == n for c in combinations(range(s), n)):
            return Arrangement([r + [0] for r in rows], n, "central", field)
    raise ArithmeticError("failed to draw a generic arrangement")


def _check_generic_weights(weights):
    if is_integer(weights[0]) is not False or is_integer(weights[-1]) is not False:
        raise UsageError("the first and last weights must be non-integers")
    if sum(weights, 0) != 0:
        raise UsageError("weights must sum to zero")


@dataclass
class GenericVerdict:
    s: int
    n: int
    os_dims: list
    expected_os_dims: list
    cohomology: list
    expected_cohomology: list
    degree_n_minus_1_basis: bool
    degree_n_basis: bool
    untwisted_families: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return (
            self.os_dims == self.expected_os_dims
            and self.cohomology == self.expected_cohomology
            and self.degree_n_minus_1_basis
            and self.degree_n_basis
            and all(self.untwisted_families.values())
        )


def distinguished_brackets(s, n):
    """Index tuples (0, i1, ..., i_{n-1}) with 0 < i1 < ... < s - 1."""
    return [(0,) + c for c in combinations(range(1, s - 1), n - 1)]


def distinguished_monomials(s, n):
    return [(0,) + c for c in combinations(range(1, s), n - 1)]


def _is_basis(os_alg, k, elems):
    vecs = [os_alg.vector(e, k) for e in elems]
    return len(vecs) == os_alg.dim(k) and scalar_rank(vecs, os_alg.dim(k)) == len(vecs)


def generic_lemma_suite(s, n, weights, seed=0, arrangement=None):
    """Check the dimension counts and explicit bases for a generic arrangement."""
    if not 1 < n < s:
        raise UsageError("need 1 < n < s")
    arr = arrangement or random_generic_arrangement(s, n, seed)
    weights = [arr.field(w) for w in weights]
    if len(weights) != s:
        raise UsageError("one weight per hyperplane is required")
    _check_generic_weights(weights)
    cx = aomoto_cohomology(arr, weights)
    os_alg = cx.algebra
    exp_dims = [comb(s, k) for k in range(n)] + [comb(s - 1, n - 1)]
    exp_coh = [0] * (n - 1) + [comb(s - 2, n - 1), comb(s - 2, n - 1)]
    fam1 = [os_alg.bracket(idx) for idx in distinguished_brackets(s, n)]
    vec1 = [os_alg.vector(e, n - 1) for e in fam1]
    ok1 = all(is_cocycle(cx, n - 1, v) for v in vec1) and independent_mod_image(cx, n - 1, vec1)
    ok1 = ok1 and len(vec1) == cx.cohomology[n - 1]
    fam2 = [os_alg.monomial(idx) for idx in distinguished_brackets(s, n)]
    vec2 = [os_alg.vector(e, n) for e in fam2]
    ok2 = independent_mod_image(cx, n, vec2) and len(vec2) == cx.cohomology[n]
    untwisted = corollary_bases(os_alg, s, n)
    return GenericVerdict(s, n, os_alg.dims(), exp_dims, cx.cohomology, exp_coh, ok1, ok2, untwisted)


def corollary_bases(os_alg, s, n):
    """Untwisted basis facts for a generic central arrangement of s hyperplanes in K^n.

    top: {e_0 ^ e_I : |I| = n - 1} spans OS^n.
    k (1 <= k <= n - 1): brackets [e_0 : e_I] with |I| = k together with the
    monomials e_0 ^ e_J with |J| = k - 1 span OS^k.
    """
    out = {"top": _is_basis(os_alg, n, [os_alg.monomial(i) for i in distinguished_monomials(s, n)])}
    for k in range(1, n):
        fam = [os_alg.bracket((0,) + c) for c in combinations(range(1, s), k)]
        fam += [os_alg.monomial((0,) + c) for c in combinations(range(1, s), k - 1)]
        out[f"degree_{k}"] = _is_basis(os_alg, k, fam)
    return out


def shift_weight(weights, shift):
    """lambda + k for an integer vector k summing to zero."""
    if len(shift) != len(weights):
        raise UsageError("shift vector has the wrong length")
    if any(not isinstance(k, int) for k in shift) or sum(shift) != 0:
        raise UsageError("the shift must be an integer vector summing to zero")
    return [w + k for w, k in zip(weights, shift)]


def hopf_check(arrangement, weights, chosen=0):
    """Compare Aomoto ranks of a central arrangement with those of its decone.

    For weights summing to zero the central ranks satisfy
    H^k(cone) = H^k(decone) + H^(k-1)(decone); the decone keeps the weights of
    the remaining hyperplanes.
    """
    from .arrangements import decone

    total = sum((arrangement.field(w) for w in weights), arrangement.field.zero)
    if total:
        raise UsageError("weights must sum to zero")
    central = aomoto_cohomology(arrangement, weights).cohomology
    dec = decone(arrangement, chosen)
    rest = [w for k, w in enumerate(weights) if k != chosen]
    affine = aomoto_cohomology(dec, rest).cohomology
    padded = affine + [0] * (len(central) - len(affine))
    predicted = [padded[k] + (padded[k - 1] if k else 0) for k in range(len(central))]
    return central, affine, predicted == central
