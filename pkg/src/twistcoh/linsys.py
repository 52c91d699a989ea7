"""Divisor systems on P^n: hypothesis checks, the one-form omega, the
bracket cocycles eta and the resulting lower bounds.

Indices in reports (``CocycleCertificate.indices``, basis indices) are
1-based, matching the usual numbering D_1, ..., D_m.  Everything else is
0-based.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

from .algebra.fields import QQ, is_integer
from .algebra.matrix import Matrix, _scalar_rref, rank_kernel_det, scalar_rank
from .algebra.poly import MultiPoly, monomials_of_degree, pack
from .algebra.ratfunc import RationalFunction
from .arrangements import Arrangement, WeightedArrangement, beta_invariant, dense_edges, lattice
from .errors import UsageError
from .forms import DiffForm, bracket, dlog, euler_contraction, exterior_derivative, wedge


class DivisorSystem:
    """m homogeneous polynomials of a common degree in n + 1 variables.

    The first ``s`` are the members of the linear system.  ``weights`` has one
    entry per polynomial.  ``components`` optionally gives, per polynomial, a
    list of (linear form, multiplicity) describing its factorization.
    """

    def __init__(self, n, polys, s, weights, base_point=None, field=QQ, components=None,
                 theorem_weight=True, name=""):
        self.n = n
        self.polys = list(polys)
        self.s = s
        self.m = len(self.polys)
        self.field = field
        self.name = name
        if not 1 < n < s <= self.m:
            raise UsageError(f"need 1 < n < s <= m, got n={n}, s={s}, m={self.m}")
        degree = None
        for k, f in enumerate(self.polys):
            if f.nvars != n + 1:
                raise UsageError(f"F_{k + 1} must be a polynomial in x0..x{n}")
            if f.is_zero():
                raise UsageError(f"F_{k + 1} is zero")
            if not f.is_homogeneous():
                raise UsageError(f"F_{k + 1} is not homogeneous")
            if degree is None:
                degree = f.total_degree()
            elif f.total_degree() != degree:
                raise UsageError("all polynomials must have the same degree")
        self.degree = degree
        if len(weights) != self.m:
            raise UsageError("one weight per polynomial is required")
        self.weights = [field(w) for w in weights]
        self.theorem_weight = theorem_weight
        if theorem_weight:
            if sum(self.weights[:s], field.zero) != 0:
                raise UsageError("the first s weights must sum to zero")
            if any(self.weights[s:]):
                raise UsageError("weights beyond the first s must be zero")
        if base_point is not None:
            base_point = [field(x) for x in base_point]
            if len(base_point) != n + 1:
                raise UsageError("base point needs n + 1 coordinates")
            if not any(base_point):
                raise UsageError("base point cannot be all zero")
        self.base_point = base_point
        self.components = components
        if components is not None and len(components) != self.m:
            raise UsageError("components must be given for every polynomial")

    @property
    def nvars(self):
        return self.n + 1

    def dlogs(self):
        return [dlog(f) for f in self.polys]


# hypotheses ---------------------------------------------------------------


@dataclass
class HypothesisReport:
    a1: dict
    a2: dict
    a3: dict
    matrix_A: list = None
    basis: tuple = ()  # 0-based indices of the chosen basis
    notes: list = dc_field(default_factory=list)

    @property
    def holds(self):
        return self.a1["holds"] and self.a2["status"] == "holds" and self.a3["holds"]

    def to_json(self):
        from .algebra.parse import format_scalar

        return {
            "a1": self.a1,
            "a2": self.a2,
            "a3": self.a3,
            "matrix_A": None if self.matrix_A is None else [[format_scalar(x) for x in r] for r in self.matrix_A],
            "notes": self.notes,
        }


def coefficient_matrix(polys, degree, nvars):
    monos = monomials_of_degree(nvars, degree)
    return [[f.terms.get(mono, 0) for f in polys] for mono in monos]


def _span_and_coordinates(sys):
    """Greedy basis among the first s members and coordinates of every member."""
    f = sys.field
    rows = [[f(x) for x in r] for r in coefficient_matrix(sys.polys[: sys.s], sys.degree, sys.nvars)]
    pivots, _ = _scalar_rref(rows, sys.s)
    coords = [[rows[k][j] for j in range(sys.s)] for k in range(len(pivots))]
    return tuple(pivots), coords


def _minor(A, cols):
    return rank_kernel_det(Matrix([[A[i][j] for j in cols] for i in range(len(A))])).det


def check_hypotheses(sys):
    n, s = sys.n, sys.s
    basis, coords = _span_and_coordinates(sys)
    span = len(basis)
    a1 = {"holds": span == n, "span_dim": span, "basis_indices": [b + 1 for b in basis]}
    notes = []
    if basis != tuple(range(span)):
        notes.append(f"members reindexed: basis taken as F_{[b + 1 for b in basis]}")
    A = None
    if span == n:
        A = coords
        # exact reconstruction F_j = sum_i a_ij F_{b_i}
        for j in range(s):
            rebuilt = MultiPoly.zero(sys.field, sys.nvars)
            for i, b in enumerate(basis):
                if A[i][j]:
                    rebuilt = rebuilt + sys.polys[b].scale(A[i][j])
            if rebuilt != sys.polys[j]:
                raise ArithmeticError(f"coordinates do not reproduce F_{j + 1}")
    a2 = _check_a2(sys, basis if span == n else None)
    a3 = {"holds": False, "vanishing_minor": None}
    if A is not None:
        a3["holds"] = True
        for cols in combinations(range(s), n):
            if not _minor(A, cols):
                a3 = {"holds": False, "vanishing_minor": [c + 1 for c in cols]}
                break
    if sys.components is not None:
        for k, comp in enumerate(sys.components):
            if any(mult > 1 for _, mult in comp):
                notes.append(f"D_{k + 1} is not reduced (component multiplicities > 1)")
    return HypothesisReport(a1, a2, a3, A, basis, notes)


def _check_a2(sys, basis):
    P = sys.base_point
    if P is None:
        return {"status": "not checked", "which_failed": []}
    if basis is None:
        return {"status": "failed", "which_failed": ["no basis of the linear system (A1 fails)"]}
    failed = []
    for b in basis:
        if sys.polys[b].evaluate(P):
            failed.append(f"F_{b + 1} does not vanish at P")
    jac = [[sys.polys[b].partial(i).evaluate(P) for i in range(sys.nvars)] for b in basis]
    if scalar_rank(jac, sys.nvars) != sys.n:
        failed.append("Jacobian of the basis at P has rank < n")
    for b in basis:
        if not any(sys.polys[b].partial(i).evaluate(P) for i in range(sys.nvars)):
            failed.append(f"F_{b + 1} is singular at P")
    for i in range(sys.s, sys.m):
        if not sys.polys[i].evaluate(P):
            failed.append(f"F_{i + 1} passes through P")
    return {"status": "failed" if failed else "holds", "which_failed": failed}


# omega and cocycles ---------------------------------------------------------


def build_omega(sys, check_j=True):
    """sum lambda_i dlog F_i, verified against the quotient expressions for two j."""
    f = sys.field
    if sum(sys.weights, f.zero):
        raise UsageError("weights must sum to zero")
    dl = sys.dlogs()
    omega = DiffForm.zero(f, sys.nvars, 1)
    for lam, w in zip(sys.weights, dl):
        if lam:
            omega = omega + w * lam
    if check_j:
        for j in (0, 1):
            alt = DiffForm.zero(f, sys.nvars, 1)
            for i, lam in enumerate(sys.weights):
                if i != j and lam:
                    alt = alt + dlog(RationalFunction(sys.polys[i], sys.polys[j])) * lam
            if alt != omega:
                raise ArithmeticError(f"omega depends on the choice j={j + 1}")
    return omega


@dataclass
class CocycleCertificate:
    indices: tuple  # 1-based
    eta: DiffForm
    d_closed: bool
    nabla_closed: bool
    nonzero: bool
    wedge_nonzero: bool
    basic: bool

    @property
    def ok(self):
        return self.d_closed and self.nabla_closed and self.nonzero

    def to_json(self, forms=False):
        out = {
            "indices": list(self.indices),
            "d_closed": self.d_closed,
            "nabla_closed": self.nabla_closed,
            "nonzero": self.nonzero,
            "wedge_nonzero": self.wedge_nonzero,
            "basic": self.basic,
        }
        if forms:
            out["eta"] = str(self.eta)
        return out


@dataclass
class CocycleFamily:
    degree: int
    certificates: list
    distinguished: list  # index tuples (1-based) of the independent family

    @property
    def ok(self):
        return all(c.ok for c in self.certificates)


def _certify(sys, omega, dl, idx):
    forms = [dl[i] for i in idx]
    eta = bracket(forms)
    d_closed = exterior_derivative(eta).is_zero()
    nabla = (exterior_derivative(eta) + wedge(omega, eta)).cancel()
    wedge_nonzero = not wedge(*forms).cancel().is_zero()
    return CocycleCertificate(
        tuple(i + 1 for i in idx),
        eta,
        d_closed,
        nabla.is_zero(),
        (not eta.cancel().is_zero()) and wedge_nonzero,
        wedge_nonzero,
        euler_contraction(eta).cancel().is_zero(),
    )


def build_cocycles(sys, degree, omega=None):
    n, s, m = sys.n, sys.s, sys.m
    if degree not in (n - 1, n):
        raise UsageError(f"degree must be n-1={n - 1} or n={n}")
    if degree == n and s == m:
        raise UsageError("degree-n cocycles need an extra divisor (s < m)")
    omega = omega if omega is not None else build_omega(sys)
    dl = sys.dlogs()
    certs = []
    if degree == n - 1:
        for idx in combinations(range(s), n):
            certs.append(_certify(sys, omega, dl, idx))
        dist = [(1,) + tuple(i + 1 for i in c) for c in combinations(range(1, s - 1), n - 1)]
    else:
        for idx in combinations(range(s), n):
            certs.append(_certify(sys, omega, dl, (m - 1,) + idx))
        dist = [(m, 1) + tuple(i + 1 for i in c) for c in combinations(range(1, s - 1), n - 1)]
    return CocycleFamily(degree, certs, dist)


def vanishing_brackets(sys):
    """Check the bracket of every n + 1 of dlog F_1..F_s vanishes."""
    dl = sys.dlogs()
    return all(bracket([dl[i] for i in idx]).cancel().is_zero() for idx in combinations(range(sys.s), sys.n + 1))


def lemma_wedge_identity(sys, cert):
    """dlog F_{i1} ^ eta[i1..in] equals the wedge of the dlogs."""
    dl = sys.dlogs()
    idx = [i - 1 for i in cert.indices]
    return wedge(dl[idx[0]], cert.eta) == wedge(*[dl[i] for i in idx])


# local model ----------------------------------------------------------------


def local_arrangement(report, field):
    """Central arrangement {alpha_j = sum_i a_ij x_i} in K^n from the matrix A."""
    A = report.matrix_A
    if A is None:
        raise UsageError("hypothesis (A1) must hold to build the local model")
    n = len(A)
    return Arrangement([[A[i][j] for i in range(n)] + [0] for j in range(len(A[0]))], n, "central", field)


def chart_identity(sys, report, omega=None, certificates=None):
    """Pull the arrangement forms back along y_i = F_{b_i} / x_k^d.

    Returns (omega matches e_lambda, every eta matches its arrangement bracket).
    """
    P = sys.base_point
    if P is None or report.matrix_A is None:
        raise UsageError("the chart identity needs a base point and (A1)")
    k = next(i for i, v in enumerate(P) if v)
    xk = MultiPoly.variable(sys.field, sys.nvars, k) ** sys.degree
    A = report.matrix_A
    alphas = []
    for j in range(sys.s):
        num = MultiPoly.zero(sys.field, sys.nvars)
        for i, b in enumerate(report.basis):
            if A[i][j]:
                num = num + sys.polys[b].scale(A[i][j])
        alphas.append(RationalFunction(num, xk))
    e = [dlog(a) for a in alphas]
    omega = omega if omega is not None else build_omega(sys)
    e_lambda = DiffForm.zero(sys.field, sys.nvars, 1)
    for lam, w in zip(sys.weights[: sys.s], e):
        if lam:
            e_lambda = e_lambda + w * lam
    omega_ok = e_lambda == omega
    eta_ok = True
    for cert in certificates or []:
        idx = [i - 1 for i in cert.indices]
        if any(i >= sys.s for i in idx):
            continue
        eta_ok = eta_ok and bracket([e[i] for i in idx]) == cert.eta
    return omega_ok, eta_ok


@dataclass
class LocalCertificate:
    arrangement: Arrangement
    cohomology: list
    family_n_minus_1: bool
    family_n: object  # bool, or None when s = m
    all_brackets_nonzero: bool
    label: str


def restrict_and_certify(sys, report=None):
    """Independence of the distinguished classes in the Aomoto complex of the local model."""
    from .aomoto import OSAlgebra, aomoto_cohomology, independent_mod_image, is_cocycle

    report = report or check_hypotheses(sys)
    if not report.holds:
        raise UsageError("hypotheses (A1)-(A3) with a base point are required")
    lam = sys.weights[: sys.s]
    if any(is_integer(x) is None for x in lam):
        raise UsageError("local certification needs rational weights")
    if is_integer(lam[0]) or is_integer(lam[-1]):
        raise UsageError(
            "the first and last weights must be non-integers; shift by an integer vector with zero sum first"
        )
    arr = local_arrangement(report, sys.field)
    os_alg = OSAlgebra(arr)
    cx = aomoto_cohomology(arr, lam, os_alg=os_alg)
    n, s = sys.n, sys.s
    fam = [os_alg.vector(os_alg.bracket((0,) + c), n - 1) for c in combinations(range(1, s - 1), n - 1)]
    ok1 = all(is_cocycle(cx, n - 1, v) for v in fam) and independent_mod_image(cx, n - 1, fam)
    every = all(
        independent_mod_image(cx, n - 1, [os_alg.vector(os_alg.bracket(c), n - 1)])
        for c in combinations(range(s), n)
    )
    ok2 = None
    if s < sys.m:
        top = [os_alg.vector(os_alg.monomial((0,) + c), n) for c in combinations(range(1, s - 1), n - 1)]
        ok2 = independent_mod_image(cx, n, top)
    return LocalCertificate(arr, cx.cohomology, ok1, ok2, every, "lemma-covered (generic local model)")


# divisors made of hyperplanes ------------------------------------------------


@dataclass
class ComponentArrangement:
    arrangement: Arrangement
    weights: list
    owners: list  # per hyperplane: list of (divisor index, multiplicity)
    scales: list  # F_i = scale_i * product of its components


def _linear_normal(form):
    if form.total_degree() != 1 or not form.is_homogeneous():
        raise UsageError(f"component {form} is not a linear form")
    return [form.terms.get(pack(tuple(1 if j == i else 0 for j in range(form.nvars))), 0)
            for i in range(form.nvars)]


def component_arrangement(sys):
    """Projective arrangement of the linear components with the induced weights.

    A hyperplane occurring with multiplicity k in D_i receives k * lambda_i;
    the product of the components is checked against each F_i.
    """
    from .arrangements import _proportional

    if sys.components is None:
        raise UsageError("no components were supplied")
    f = sys.field
    normals, weights, owners, scales = [], [], [], []
    for i, comps in enumerate(sys.components):
        prod = MultiPoly.constant(f, sys.nvars, 1)
        for form, mult in comps:
            if mult < 1:
                raise UsageError("multiplicities must be positive")
            prod = prod * form**mult
            a = [f(x) for x in _linear_normal(form)]
            hit = next((k for k, b in enumerate(normals) if _proportional(a, b)), None)
            if hit is None:
                normals.append(a)
                weights.append(f.zero)
                owners.append([])
                hit = len(normals) - 1
            weights[hit] = weights[hit] + sys.weights[i] * mult
            owners[hit].append((i, mult))
        q = sys.polys[i].exact_div(prod)
        if q is None or not q.is_constant():
            raise UsageError(f"the components of D_{i + 1} do not multiply to F_{i + 1}")
        scales.append(q.constant_value())
    arr = Arrangement([a + [0] for a in normals], sys.nvars, "projective", f)
    return ComponentArrangement(arr, weights, owners, scales)


# bounds ---------------------------------------------------------------------


@dataclass
class Bounds:
    h_top_minus_1: object
    h_top: object
    betti: dict
    twisted: bool
    user_asserted: bool = False

    def to_json(self):
        return {
            "h_top_minus_1": self.h_top_minus_1,
            "h_top": self.h_top,
            "betti": {str(k): v for k, v in self.betti.items()},
            "twisted": self.twisted,
            "user_asserted": self.user_asserted,
        }


def weight_is_nontrivial(weights):
    """(non-trivial, user asserted) for the weight vector."""
    flags = [is_integer(w) for w in weights]
    if any(f is False for f in flags):
        return True, False
    if any(f is None for f in flags):
        return True, True
    return False, False


def lower_bounds(sys):
    n, s, m = sys.n, sys.s, sys.m
    nontrivial, asserted = weight_is_nontrivial(sys.weights)
    if s < m:
        betti = {k: comb(s, k) for k in range(1, n)}
        betti[n] = comb(s - 1, n - 1)
    else:
        betti = {k: comb(s - 1, k) for k in range(1, n)}
    if not nontrivial:
        return Bounds(None, None, betti, False)
    top = comb(s - 2, n - 1)
    return Bounds(top, top if s < m else None, betti, True, asserted)


# the dual point arrangement -------------------------------------------------


@dataclass
class DualReport:
    beta: int
    generic_value: int
    dense: object
    bounded_chambers: list  # per deconing, or None for non-real fields


def dual_point_check(sys, report=None):
    """beta invariant and dense edges of the points D_1..D_s in P^(n-1)."""
    from .arrangements import chamber_counts, decone

    report = report or check_hypotheses(sys)
    arr = local_arrangement(report, sys.field)
    arr = Arrangement(arr.hyperplanes, arr.ambient, "projective", arr.field)
    lat = lattice(arr)
    beta = beta_invariant(arr, lat)
    dense = dense_edges(WeightedArrangement(arr, sys.weights[: sys.s]), lat)
    chambers = None
    if sys.field == QQ:
        chambers = [chamber_counts(decone(arr, k)).bounded for k in range(len(arr))]
    return DualReport(beta, comb(sys.s - 2, sys.n - 1), dense, chambers)


# affine setting -------------------------------------------------------------


@dataclass
class AffineProjectivization:
    polys: list
    degrees: list
    degree: int
    infinity_weight: object
    h_inf_in_support: bool
    zero_infinity_weight_case: bool


def homogenize_to(f, degree):
    """x0^degree f(x1/x0, ..., xn/x0), with x0 a new first variable."""
    terms = {}
    for exps, c in f.items():
        d = sum(exps)
        terms[pack((degree - d,) + tuple(exps))] = c
    return MultiPoly(f.field, f.nvars + 1, terms)


def projectivize_affine(polys, weights, field=QQ):
    if not polys:
        raise UsageError("no polynomials given")
    if len(weights) != len(polys):
        raise UsageError("one weight per polynomial is required")
    for f in polys:
        if f.is_zero():
            raise UsageError("zero polynomial")
    degrees = [f.total_degree() for f in polys]
    d = max(degrees)
    weights = [field(w) for w in weights]
    homog = [homogenize_to(f, d) for f in polys]
    inf = field.zero
    for lam, dj in zip(weights, degrees):
        inf = inf - lam * dj
    in_support = any(dj < d for dj in degrees)
    zero_case = not in_support and sum(weights, field.zero) == 0
    return AffineProjectivization(homog, degrees, d, inf, in_support, zero_case)
