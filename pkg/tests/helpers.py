"""Shared builders for the test suite (random forms, polynomials, arrangements)."""

import random
from itertools import combinations, permutations

from gmpy2 import mpq

from twistcoh.algebra import QQ, MultiPoly, RationalFunction, parse_poly
from twistcoh.algebra.poly import monomials_of_degree, unpack
from twistcoh.arrangements import Arrangement
from twistcoh.errors import UsageError
from twistcoh.forms import DiffForm, bracket, wedge

CONICS = ["x0^2+x1^2-2*x2^2", "x0^2+2*x1^2-3*x2^2", "2*x0^2+x1^2-3*x2^2"]


def polys(texts, nvars=3, field=QQ):
    return [parse_poly(t, nvars, field) for t in texts]


def random_linear(rng, nvars, field=QQ):
    """Random linear polynomial c + sum a_i x_i with integer entries in [-5, 5]."""
    f = MultiPoly.constant(field, nvars, rng.randint(-5, 5))
    for x in MultiPoly.gens(field, nvars):
        f = f + x * rng.randint(-5, 5)
    return f


def random_form(rng, nvars, field=QQ, rational=False):
    """Random 1-form with linear polynomial coefficients (optionally over a linear denominator)."""
    coeffs = {}
    den = random_linear(rng, nvars, field) if rational else None
    for i in range(nvars):
        c = random_linear(rng, nvars, field)
        if den is not None and den:
            c = RationalFunction(c, den)
        coeffs[(i,)] = c
    return DiffForm(field, nvars, 1, coeffs)


def random_homogeneous(rng, nvars, degree, field=QQ, bound=4):
    monos = monomials_of_degree(nvars, degree)
    while True:
        terms = {m: field(rng.randint(-bound, bound)) for m in monos if rng.random() < 0.7}
        f = MultiPoly(field, nvars, terms)
        if f:
            return f


def random_poly(rng, nvars, degree, bound=4):
    terms = {}
    for d in range(degree + 1):
        for m in monomials_of_degree(nvars, d):
            if rng.random() < 0.5:
                terms[m] = QQ(rng.randint(-bound, bound))
    return MultiPoly(QQ, nvars, terms)


def exps(f):
    return {unpack(m, f.nvars): c for m, c in f.terms.items()}


def random_affine_lines(rng, s, bound=9):
    """s lines in general position in the real plane: no two parallel, no three concurrent."""
    while True:
        hs = [[mpq(rng.randint(-bound, bound)) for _ in range(3)] for _ in range(s)]
        if any(a == b == 0 for a, b, _ in hs):
            continue
        ok = all(h[0] * k[1] != h[1] * k[0] for h, k in combinations(hs, 2))
        ok = ok and all(_det3(*t) != 0 for t in combinations(hs, 3))
        if ok:
            return Arrangement(hs, 2, "affine")


def random_line_arrangement(rng, s, bound=3):
    """Arbitrary affine line arrangement in the plane (repeats avoided, degeneracies likely)."""
    while True:
        hs = []
        for _ in range(s):
            a = [mpq(rng.randint(-bound, bound)) for _ in range(3)]
            if a[0] == a[1] == 0:
                continue
            hs.append(a)
        try:
            return Arrangement(hs, 2, "affine")
        except UsageError:
            continue


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def rng(seed):
    return random.Random(seed)


def corpus_problem(id):
    from twistcoh.corpus import build

    return next(pf for pf in build() if pf.id == id)


def corpus_system(id):
    """DivisorSystem of a bundled divisor_system example."""
    from twistcoh.runner import _system_from

    return _system_from(corpus_problem(id))


def perm_sign(perm):
    s = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def bracket_identities(forms):
    """Evaluate the six bracket identities; returns {label: bool}."""
    p = len(forms)
    b = bracket(forms)
    out = {}
    perms = list(permutations(range(p)))
    sigma = perms[len(perms) // 2 + 1] if len(perms) > 2 else perms[-1]
    out["permutation"] = bracket([forms[i] for i in sigma]) == b * perm_sign(sigma)
    if p >= 4:
        split = True
        for j in range(2, p - 1):
            rhs = wedge(bracket(forms[:j]), *forms[j:]) + wedge(*forms[:j], bracket(forms[j:])) * (-1) ** j
            split = split and b == rhs
        out["split"] = split
    if p >= 3:
        out["peel"] = b == -wedge(forms[0] - forms[1], bracket(forms[1:]))
    diffs = [forms[k] - forms[k + 1] for k in range(p - 1)]
    out["consecutive"] = b == wedge(*diffs) * (-1) ** (p - 1)
    out["anchored"] = b == wedge(*[forms[k] - forms[0] for k in range(1, p)])
    out["absorb"] = wedge(forms[0], b) == wedge(*forms)
    return out
