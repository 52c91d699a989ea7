"""Run problem files and collect reports."""

import hashlib
import json
import random
import time
from dataclasses import dataclass, field as dc_field
from math import comb

from gmpy2 import mpq

from . import __version__
from .algebra.fields import QQ
from .algebra.parse import format_poly, format_scalar
from .algebra.poly import MultiPoly
from .aomoto import OSAlgebra, aomoto_cohomology, hopf_check
from .arrangements import (
    Arrangement,
    WeightedArrangement,
    beta_invariant,
    chamber_counts,
    characteristic_polynomial,
    decone,
    deletion,
    dense_edges,
    format_char_poly,
    is_decomposable,
    lattice,
    restriction,
)
from .errors import UsageError
from .linsys import (
    DivisorSystem,
    build_cocycles,
    build_omega,
    chart_identity,
    check_hypotheses,
    component_arrangement,
    dual_point_check,
    lemma_wedge_identity,
    lower_bounds,
    projectivize_affine,
    restrict_and_certify,
    vanishing_brackets,
)
from .oracles import good_reduction, point_count, sign_vector_chambers

PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


@dataclass
class Report:
    id: str
    mode: str
    digest: str
    seed: int
    checks: list = dc_field(default_factory=list)  # (name, passed, detail)
    values: dict = dc_field(default_factory=dict)
    certificates: list = dc_field(default_factory=list)
    expectations: list = dc_field(default_factory=list)  # (name, expected, actual, passed)
    forms: list = dc_field(default_factory=list)
    seconds: float = 0.0
    error: str = ""

    def check(self, name, passed, detail=""):
        self.checks.append((name, bool(passed), detail))

    @property
    def passed(self):
        return not self.error and all(c[1] for c in self.checks) and all(e[3] for e in self.expectations)

    def to_json(self, timing=True):
        out = {
            "tool": "twistcoh",
            "version": __version__,
            "id": self.id,
            "mode": self.mode,
            "input_digest": self.digest,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in self.checks],
            "values": self.values,
            "certificates": self.certificates,
            "expectations": [
                {"name": n, "expected": e, "actual": a, "passed": p} for n, e, a, p in self.expectations
            ],
        }
        if self.error:
            out["error"] = self.error
        if timing:
            out["timing"] = {"seconds": round(self.seconds, 3)}
        return out

    def summary(self):
        head = f"[{'PASS' if self.passed else 'FAIL'}] {self.id or '(unnamed)'} ({self.mode}, {self.seconds:.2f}s)"
        lines = [head]
        if self.error:
            lines.append(f"  error: {self.error}")
        for n, p, d in self.checks:
            lines.append(f"  {'ok ' if p else 'BAD'} {n}" + (f": {d}" if d else ""))
        for key in ("h_top_minus_1", "h_top", "arrangement_cohomology", "local_cohomology", "beta", "infinity_weight"):
            if key in self.values:
                lines.append(f"  {key} = {self.values[key]}")
        for n, e, a, p in self.expectations:
            lines.append(f"  {'ok ' if p else 'BAD'} expect {n} = {json.dumps(e)} (got {json.dumps(a)})")
        for f in self.forms:
            lines.append(f"  eta{f[0]} = {f[1]}")
        return "\n".join(lines)


def _json_value(x):
    """Scalars to canonical strings so values compare cleanly against JSON."""
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return format_scalar(x)


# arrangement analysis -------------------------------------------------------


def _good_primes(arr, count=2):
    out = []
    for p in PRIMES:
        if p ** arr.ambient > 200_000:
            break
        if good_reduction(arr, p):
            out.append(p)
            if len(out) == count:
                break
    return out


def arrangement_oracles(rep, arr, lat, prefix=""):
    chi = characteristic_polynomial(arr, lat)
    ok = True
    for k in range(len(arr)):
        if len(arr) < 2:
            break
        lhs = characteristic_polynomial(deletion(arr, k))
        rhs = characteristic_polynomial(restriction(arr, k))
        rhs = rhs + [0] * (len(lhs) - len(rhs))
        if [a - b for a, b in zip(lhs, rhs)] != chi:
            ok = False
    rep.check(prefix + "deletion_restriction", ok)
    primes = _good_primes(arr)
    counts = {p: point_count(arr, p) for p in primes}
    rep.check(
        prefix + "finite_field_counts",
        len(primes) == 2 and all(c == sum(a * p**i for i, a in enumerate(chi)) for p, c in counts.items()),
        f"primes {primes}",
    )
    if arr.field == QQ:
        if arr.ambient == 2 and arr.kind == "affine":
            c = chamber_counts(arr, lat)
            rep.check(prefix + "sign_vector_chambers", sign_vector_chambers(arr) == (c.regions, c.bounded))
        elif arr.ambient == 3 and arr.is_central:
            good = True
            for k in range(len(arr)):
                d = decone(arr, k)
                c = chamber_counts(d)
                good = good and sign_vector_chambers(d) == (c.regions, c.bounded)
            rep.check(prefix + "sign_vector_chambers", good, "every deconing")


def projective_analysis(rep, arr, weights, seed, prefix):
    """Lattice, beta, dense edges and Aomoto ranks of a projective arrangement."""
    lat = lattice(arr)
    v = rep.values
    chi = characteristic_polynomial(arr, lat)
    v[prefix + "size"] = len(arr)
    v[prefix + "characteristic_polynomial"] = format_char_poly(chi)
    v[prefix + "whitney"] = lat.whitney_numbers()
    v[prefix + "flats_by_rank"] = [lat.counts_by_rank()[r] for r in sorted(lat.counts_by_rank())]
    beta = beta_invariant(arr, lat)
    v[prefix + "beta"] = beta
    if arr.field == QQ:
        bounded = [chamber_counts(decone(arr, k)).bounded for k in range(len(arr))]
        rep.check(prefix + "beta_equals_bounded_chambers", all(b == beta for b in bounded), f"beta={beta}")
    if weights is not None:
        dense = dense_edges(WeightedArrangement(arr, weights), lat)
        v[prefix + "dense_edges"] = len(dense.edges)
        v[prefix + "section4_projective"] = dense.projective_check
        v[prefix + "section4_coned"] = dense.coned_check
        v[prefix + "section4_user_asserted"] = dense.user_asserted
        for e in dense.edges:
            members = set(e.members)
            recomputed = sum((weights[h] for h in range(len(arr)) if h in members), arr.field.zero)
            if recomputed != e.weight:
                rep.check(prefix + "flat_weight_additivity", False)
                break
        os_alg = OSAlgebra(arr)
        rep.check(prefix + "os_dims_match_whitney", os_alg.whitney_check(lat))
        if any(weights):
            central, affine, split = hopf_check(arr, weights)
            v[prefix + "cohomology_cone"] = central
            v[prefix + "cohomology"] = affine
            rep.check(prefix + "hopf_split", split)
        rng = random.Random(seed)
        euler_ok = True
        for _ in range(3):
            w = [mpq(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(len(arr) - 1)]
            w.append(-sum(w))
            cx = aomoto_cohomology(arr, w, os_alg=os_alg)
            euler_ok = euler_ok and cx.closed and sum((-1) ** k * h for k, h in enumerate(cx.cohomology)) == sum(
                (-1) ** k * d for k, d in enumerate(os_alg.dims())
            )
        rep.check(prefix + "aomoto_euler_characteristic", euler_ok, "3 random weights")
    arrangement_oracles(rep, arr, lat, prefix)


# modes ---------------------------------------------------------------------


def _divisor_pipeline(rep, sys, emit_forms, seed):
    v = rep.values
    hyp = check_hypotheses(sys)
    v.update({
        "a1": hyp.a1["holds"],
        "a2": hyp.a2["status"],
        "a3": hyp.a3["holds"],
        "span_dim": hyp.a1["span_dim"],
        "hypotheses": hyp.to_json(),
    })
    total = MultiPoly.zero(sys.field, sys.nvars)
    for f in sys.polys[: sys.s]:
        total = total + f
    v["members_sum_to_zero"] = total.is_zero()
    rep.check("hypotheses", hyp.holds, "; ".join(hyp.a2["which_failed"] + hyp.notes))
    if not hyp.holds:
        return
    omega = build_omega(sys)
    v["omega_j_independent"] = True
    fam = build_cocycles(sys, sys.n - 1, omega)
    rep.check("cocycles_degree_n_minus_1", fam.ok, f"{len(fam.certificates)} certificates")
    rep.check("cocycles_basic", all(c.basic for c in fam.certificates))
    rep.check("vanishing_brackets", vanishing_brackets(sys))
    rep.check("wedge_identity", all(lemma_wedge_identity(sys, c) for c in fam.certificates))
    om_ok, eta_ok = chart_identity(sys, hyp, omega, fam.certificates)
    rep.check("chart_pullback", om_ok and eta_ok)
    certs = list(fam.certificates)
    v["family_size"] = len(fam.distinguished)
    v["distinguished"] = [list(t) for t in fam.distinguished]
    if sys.s < sys.m:
        top = build_cocycles(sys, sys.n, omega)
        rep.check("cocycles_degree_n", top.ok, f"{len(top.certificates)} certificates")
        certs += top.certificates
        v["distinguished_top"] = [list(t) for t in top.distinguished]
    rep.certificates = [c.to_json(forms=emit_forms) for c in certs]
    rep.forms = [(c.indices, str(c.eta)) for c in certs] if emit_forms else []
    bounds = lower_bounds(sys)
    v.update(bounds.to_json())
    rep.check("family_matches_bound", bounds.h_top_minus_1 in (None, len(fam.distinguished)))
    if bounds.twisted:
        loc = restrict_and_certify(sys, hyp)
        v["local_cohomology"] = loc.cohomology
        v["local_label"] = loc.label
        rep.check("local_independence", loc.family_n_minus_1 and loc.all_brackets_nonzero)
        if loc.family_n is not None:
            rep.check("local_independence_top", loc.family_n)
    dual = dual_point_check(sys, hyp)
    v["dual_beta"] = dual.beta
    v["dual_section4_projective"] = dual.dense.projective_check
    v["dual_section4_coned"] = dual.dense.coned_check
    rep.check("dual_beta_matches_binomial", dual.beta == dual.generic_value, f"beta={dual.beta}")
    if dual.bounded_chambers is not None:
        rep.check("dual_beta_equals_bounded_chambers", all(b == dual.beta for b in dual.bounded_chambers))
    if sys.components is not None:
        ca = component_arrangement(sys)
        v["arrangement_weights"] = [format_scalar(w) for w in ca.weights]
        projective_analysis(rep, ca.arrangement, ca.weights, seed, "arrangement_")
        if "arrangement_cohomology" in v:
            v["arrangement_h1"] = v["arrangement_cohomology"][1] if len(v["arrangement_cohomology"]) > 1 else 0


def _system_from(pf, polys=None, base_point=None):
    p = pf.payload
    return DivisorSystem(
        p["n"],
        polys if polys is not None else p["polynomials"],
        p["s"],
        p["weights"],
        base_point if base_point is not None else p.get("base_point"),
        pf.field,
        p.get("components"),
        name=pf.id,
    )


def run_divisor_system(pf, rep, emit_forms=False, seed=0):
    _divisor_pipeline(rep, _system_from(pf), emit_forms, seed)


def run_affine(pf, rep, emit_forms=False, seed=0):
    p = pf.payload
    proj = projectivize_affine(p["polynomials"], p["weights"], pf.field)
    v = rep.values
    v["homogenized"] = [format_poly(f) for f in proj.polys]
    v["infinity_weight"] = format_scalar(proj.infinity_weight)
    v["h_inf_in_support"] = proj.h_inf_in_support
    v["zero_infinity_weight_case"] = proj.zero_infinity_weight_case
    rep.check("infinity_weight_rule", not proj.zero_infinity_weight_case or proj.infinity_weight == 0)
    bp = p.get("base_point")
    point = [pf.field.one] + list(bp) if bp is not None else None
    sys = _system_from(pf, proj.polys, point)
    _divisor_pipeline(rep, sys, emit_forms, seed)
    if rep.passed and point is not None and v.get("twisted"):
        v["corollary_bound"] = comb(sys.s - 2, sys.n - 1)


def _arrangement_from(pf):
    p = pf.payload
    return Arrangement(p["hyperplanes"], p["ambient"], p["kind"], pf.field)


def run_arrangement(pf, rep, emit_forms=False, seed=0):
    arr = _arrangement_from(pf)
    weights = pf.payload.get("weights")
    v = rep.values
    lat = lattice(arr)
    chi = characteristic_polynomial(arr, lat)
    v["characteristic_polynomial"] = format_char_poly(chi)
    v["whitney"] = lat.whitney_numbers()
    counts = lat.counts_by_rank()
    v["flats_by_rank"] = [counts[r] for r in sorted(counts)]
    if arr.field == QQ:
        c = chamber_counts(arr, lat)
        v["regions"] = c.regions
        v["bounded"] = c.bounded
    if arr.is_central:
        v["beta"] = beta_invariant(arr, lat)
        v["decomposable"] = is_decomposable(arr).decomposable
        if arr.field == QQ:
            bounded = [chamber_counts(decone(arr, k)).bounded for k in range(len(arr))]
            rep.check("beta_equals_bounded_chambers", all(b == v["beta"] for b in bounded))
    if weights is not None:
        dense = dense_edges(WeightedArrangement(arr, weights), lat)
        v["dense_edges"] = [list(e.members) for e in dense.edges]
        v["section4_projective"] = dense.projective_check
        v["section4_coned"] = dense.coned_check
        v["section4_user_asserted"] = dense.user_asserted
    arrangement_oracles(rep, arr, lat)


def run_aomoto(pf, rep, emit_forms=False, seed=0):
    arr = _arrangement_from(pf)
    os_alg = OSAlgebra(arr, pf.payload.get("order"))
    cx = aomoto_cohomology(arr, pf.payload["weights"], os_alg=os_alg)
    v = rep.values
    v["order"] = os_alg.order
    v["os_dims"] = os_alg.dims()
    v["cohomology"] = cx.cohomology
    rep.check("square_zero", cx.closed)
    rep.check("os_dims_match_whitney", os_alg.whitney_check())
    euler = sum((-1) ** k * h for k, h in enumerate(cx.cohomology))
    rep.check("euler_characteristic", euler == sum((-1) ** k * d for k, d in enumerate(os_alg.dims())))
    total = sum(cx.weights, arr.field.zero)
    if arr.is_central and len(arr) > 1 and not total:
        _, affine, split = hopf_check(arr, pf.payload["weights"])
        v["cohomology_decone"] = affine
        rep.check("hopf_split", split)


RUNNERS = {
    "divisor_system": run_divisor_system,
    "affine": run_affine,
    "arrangement": run_arrangement,
    "aomoto": run_aomoto,
}


def run(pf, seed=0, emit_forms=False, mode=None):
    """Run one problem file; ``mode`` restricts which modes are accepted."""
    if mode is not None and pf.mode not in mode:
        raise UsageError(f"this verb takes {' or '.join(mode)} problems, got {pf.mode!r}")
    digest = hashlib.sha256(pf.dumps().encode("utf-8")).hexdigest()
    rep = Report(pf.id, pf.mode, digest, seed)
    start = time.perf_counter()
    try:
        RUNNERS[pf.mode](pf, rep, emit_forms=emit_forms, seed=seed)
    except UsageError as exc:
        rep.error = str(exc)
    rep.values = _json_value(rep.values)
    for name, expected in pf.expectations:
        if name not in rep.values:
            rep.expectations.append((name, expected, None, False))
            continue
        actual = rep.values[name]
        rep.expectations.append((name, expected, actual, json.dumps(actual) == json.dumps(expected)))
    rep.seconds = time.perf_counter() - start
    return rep
