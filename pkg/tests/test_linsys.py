from math import comb

import pytest
from gmpy2 import mpq

from helpers import CONICS, corpus_system, polys
from twistcoh.algebra import QQ, MultiPoly, parse_poly
from twistcoh.corpus import build
from twistcoh.errors import UsageError
from twistcoh.forms import dlog
from twistcoh.linsys import (
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

W3 = [mpq(1, 2), mpq(1, 3), mpq(-5, 6)]
DIVISOR_IDS = [pf.id for pf in build() if pf.mode == "divisor_system"]


def conics(weights=W3, point=(1, 1, 1), extra=()):
    fs = polys(CONICS + list(extra))
    return DivisorSystem(2, fs, 3, list(weights) + [0] * len(extra), list(point))


# hypotheses --------------------------------------------------------------------------


def test_conic_hypotheses():
    rep = check_hypotheses(conics())
    assert rep.a1 == {"holds": True, "span_dim": 2, "basis_indices": [1, 2]}
    assert rep.a2 == {"status": "holds", "which_failed": []}
    assert rep.a3["holds"] and rep.holds
    # F3 = 3 F1 - F2, so A = [[1, 0, 3], [0, 1, -1]] with minors 1, -1, -3
    assert rep.matrix_A == [[1, 0, 3], [0, 1, -1]]


def test_missing_point_is_not_checked():
    rep = check_hypotheses(DivisorSystem(2, polys(CONICS), 3, W3))
    assert rep.a2["status"] == "not checked"
    assert not rep.holds


def test_point_off_the_base_locus_fails():
    rep = check_hypotheses(conics(point=(1, 0, 0)))
    assert rep.a2["status"] == "failed"
    assert "F_1 does not vanish at P" in rep.a2["which_failed"]


def test_degenerate_minor_is_named():
    f1, f2, _ = polys(CONICS)
    rep = check_hypotheses(DivisorSystem(2, [f1, f2, f1], 3, W3, [1, 1, 1]))
    assert rep.a1["holds"]
    assert rep.a3 == {"holds": False, "vanishing_minor": [1, 3]}


def test_basis_is_reindexed():
    f1, f2, f3 = polys(CONICS)
    fs = [f1, f1.scale(QQ(2)), f2, f3]
    rep = check_hypotheses(DivisorSystem(2, fs, 4, [mpq(1, 2), mpq(1, 3), mpq(1, 5), mpq(-31, 30)], [1, 1, 1]))
    assert rep.a1["basis_indices"] == [1, 3]
    assert any("reindexed" in note for note in rep.notes)
    assert rep.a3["vanishing_minor"] == [1, 2]


def test_l8_span():
    sys = corpus_system("l8")
    total = MultiPoly.zero(QQ, 4)
    for f in sys.polys:
        total = total + f
    assert total.is_zero()
    rep = check_hypotheses(sys)
    assert rep.a1["span_dim"] == 3 and rep.holds


def test_system_validation():
    fs = polys(CONICS)
    with pytest.raises(UsageError):
        DivisorSystem(2, fs, 3, [1, 1, 1])  # weights do not sum to zero
    with pytest.raises(UsageError):
        DivisorSystem(2, fs + [parse_poly("x0^2", 3)], 3, W3 + [1])
    with pytest.raises(UsageError):
        DivisorSystem(2, fs[:2] + [parse_poly("x0^2+x1", 3)], 3, W3)
    with pytest.raises(UsageError):
        DivisorSystem(2, fs[:2] + [parse_poly("x0^3", 3)], 3, W3)
    with pytest.raises(UsageError):
        DivisorSystem(3, fs, 3, W3)
    with pytest.raises(UsageError):
        DivisorSystem(2, fs, 3, W3, [0, 0, 0])


# omega and the cocycles ------------------------------------------------------------------


def test_build_omega():
    assert build_omega(conics(weights=[0, 0, 0])).is_zero()
    f1, f2, _ = polys(CONICS)
    omega = build_omega(conics(weights=[1, -1, 0]))
    assert omega == dlog(f1) - dlog(f2)
    sys = conics(weights=[1, -1, 0])
    sys.weights = [QQ(1), QQ(1), QQ(0)]
    with pytest.raises(UsageError):
        build_omega(sys)


def test_integral_weight_certificate():
    sys = conics(weights=[1, -1, 0])
    fam = build_cocycles(sys, 1)
    f1, f2, _ = polys(CONICS)
    cert = fam.certificates[0]
    assert cert.indices == (1, 2)
    assert cert.eta == dlog(f2) - dlog(f1)
    assert cert.d_closed and cert.nabla_closed and cert.nonzero
    assert fam.distinguished == [(1, 2)]


def test_family_sizes():
    sys = corpus_system("cubics.s5")
    fam = build_cocycles(sys, 1)
    assert len(fam.distinguished) == 3 == comb(3, 1)
    assert fam.ok
    sys = corpus_system("l8")
    fam = build_cocycles(sys, 2)
    assert fam.distinguished == [(1, 2, 3)] and fam.ok
    with pytest.raises(UsageError):
        build_cocycles(sys, 3)
    with pytest.raises(UsageError):
        build_cocycles(sys, 1)


def test_off_pencil_degree_two_family():
    sys = corpus_system("conics.offpencil")
    fam = build_cocycles(sys, 2)
    assert fam.distinguished == [(4, 1, 2)]
    assert fam.ok


@pytest.mark.parametrize("id", DIVISOR_IDS)
def test_corpus_certificates(id):
    sys = corpus_system(id)
    rep = check_hypotheses(sys)
    assert rep.holds
    fam = build_cocycles(sys, sys.n - 1)
    assert fam.ok
    assert vanishing_brackets(sys)
    assert all(lemma_wedge_identity(sys, c) for c in fam.certificates)
    assert chart_identity(sys, rep, certificates=fam.certificates) == (True, True)
    assert lower_bounds(sys).h_top_minus_1 == len(fam.distinguished)
    local = restrict_and_certify(sys, rep)
    assert local.family_n_minus_1 and local.all_brackets_nonzero


# bounds -----------------------------------------------------------------------------------


def test_lower_bound_examples():
    b = lower_bounds(conics())
    assert (b.h_top_minus_1, b.h_top, b.twisted) == (1, None, True)
    assert lower_bounds(corpus_system("hessian")).h_top_minus_1 == 2
    assert lower_bounds(corpus_system("l8")).h_top_minus_1 == 1
    b = lower_bounds(corpus_system("conics.offpencil"))
    assert (b.h_top_minus_1, b.h_top) == (1, 1)
    assert b.betti == {1: 3, 2: 2}


def test_trivial_weight_gives_untwisted_bounds_only():
    b = lower_bounds(conics(weights=[1, -1, 0]))
    assert not b.twisted and b.h_top_minus_1 is None
    assert b.betti == {1: 2}


def test_extension_weights_are_user_asserted():
    sys = corpus_system("hessian")
    t = sys.field.gen
    sys.weights = [t, -t, sys.field.zero, sys.field.zero]
    b = lower_bounds(sys)
    assert b.twisted and b.user_asserted


# the local model ---------------------------------------------------------------------------


def test_local_model_for_conics():
    local = restrict_and_certify(conics())
    assert local.cohomology == [0, 1, 1]
    assert local.family_n is None


def test_integral_end_weight_is_rejected():
    with pytest.raises(UsageError, match="shift"):
        restrict_and_certify(conics(weights=[1, mpq(1, 2), mpq(-3, 2)]))
    with pytest.raises(UsageError):
        restrict_and_certify(conics(weights=[mpq(1, 2), mpq(1, 2), -1]))
    # moving the integral weight to the middle satisfies the normalization
    f1, f2, f3 = polys(CONICS)
    sys = DivisorSystem(2, [f1, f3, f2], 3, [mpq(1, 2), -1, mpq(1, 2)], [1, 1, 1])
    assert restrict_and_certify(sys).family_n_minus_1


def test_local_model_needs_hypotheses():
    with pytest.raises(UsageError):
        restrict_and_certify(DivisorSystem(2, polys(CONICS), 3, W3))


def test_component_arrangements():
    ceva = component_arrangement(corpus_system("ceva"))
    assert len(ceva.arrangement) == 6
    assert sorted(ceva.weights) == sorted(W3 * 2)
    b3 = component_arrangement(corpus_system("b3"))
    assert len(b3.arrangement) == 9
    assert sorted(b3.weights) == sorted([2 * W3[0], W3[0], W3[0], 2 * W3[1], W3[1], W3[1],
                                         2 * W3[2], W3[2], W3[2]])
    hess = component_arrangement(corpus_system("hessian"))
    assert len(hess.arrangement) == 12
    with pytest.raises(UsageError):
        component_arrangement(conics())
    sys = corpus_system("ceva")
    sys.components = [sys.components[1], sys.components[0], sys.components[2]]
    with pytest.raises(UsageError):
        component_arrangement(sys)


def test_dual_point_checks():
    ceva = dual_point_check(corpus_system("ceva"))
    assert ceva.beta == ceva.generic_value == 1
    assert ceva.dense.projective_check
    assert ceva.bounded_chambers == [1, 1, 1]
    hess = dual_point_check(corpus_system("hessian"))
    assert hess.beta == hess.generic_value == 2
    assert hess.bounded_chambers is None


# the affine setting --------------------------------------------------------------------------


def test_projectivize_affine():
    f = parse_poly("x0*x1-1", 2)
    proj = projectivize_affine([f], [0])
    assert proj.polys == [parse_poly("x1*x2-x0^2", 3)]
    fs = [parse_poly("x0+x1", 2), parse_poly("x0^2-x1", 2)]
    proj = projectivize_affine(fs, [1, -1])
    assert proj.infinity_weight == 1
    assert proj.h_inf_in_support and not proj.zero_infinity_weight_case
    assert proj.polys[0] == parse_poly("x0*x1+x0*x2", 3)
    conic = [parse_poly(t, 2) for t in ("x0^2+x1^2-2", "x0^2+2*x1^2-3")]
    proj = projectivize_affine(conic, [mpq(1, 2), mpq(-1, 2)])
    assert proj.infinity_weight == 0 and proj.zero_infinity_weight_case
    proj = projectivize_affine(conic, [mpq(1, 2), mpq(1, 2)])
    assert proj.infinity_weight == -2 and not proj.zero_infinity_weight_case
    with pytest.raises(UsageError):
        projectivize_affine([], [])
    with pytest.raises(UsageError):
        projectivize_affine(conic, [1])
