import random
from itertools import combinations
from math import comb

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_affine_lines, random_line_arrangement
from twistcoh.algebra import QQ, NumberField
from twistcoh.arrangements import (
    Arrangement,
    WeightedArrangement,
    beta_invariant,
    chamber_counts,
    characteristic_polynomial,
    cone,
    decone,
    deletion,
    dense_edges,
    format_char_poly,
    generic_beta,
    is_decomposable,
    lattice,
    poly_eval,
    restriction,
)
from twistcoh.errors import UsageError
from twistcoh.oracles import chi_by_point_counts, good_reduction, point_count, sign_vector_chambers

XI = NumberField("t^2+t+1")


def projective(normals, field=QQ):
    return Arrangement([list(a) + [0] for a in normals], len(normals[0]), "projective", field)


def ceva():
    return projective([[0, 1, -1], [0, 1, 1], [-1, 0, 1], [1, 0, 1], [1, -1, 0], [1, 1, 0]])


def b3():
    return projective([[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, -1, 0], [1, 1, 0], [1, 0, -1], [1, 0, 1],
                       [0, 1, -1], [0, 1, 1]])


def braid():
    """Essential braid arrangement: x_i = x_j in the quotient by the diagonal, x3 = 0."""
    pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]]
    hs = [[a - b for a, b in zip(pts[i], pts[j])] for i, j in combinations(range(4), 2)]
    return Arrangement([h + [0] for h in hs], 3, "central")


def generic_lines(s):
    return Arrangement([[1, k, k * k, 0] for k in range(s)], 3, "projective")


def brute_decomposable(arr, members):
    """Rank-additive split search over all bipartitions (oracle)."""
    members = list(members)
    r = arr.rank(members)
    for k in range(1, len(members)):
        for part in combinations(members[1:], k - 1):
            a = [members[0], *part]
            b = [m for m in members if m not in a]
            if b and arr.rank(a) + arr.rank(b) == r:
                return True
    return False


# lattices ------------------------------------------------------------------------


def test_two_generic_lines():
    arr = Arrangement([[1, 0, 0], [0, 1, 0]], 2, "affine")
    lat = lattice(arr)
    assert len(lat.flats) == 4
    assert lat.mobius[-1] == 1
    assert sorted(lat.flats[-1].members) == [0, 1]


def test_ceva_points():
    lat = lattice(ceva())
    points = [f for f in lat.flats if f.dim == 1]
    sizes = sorted(len(f.members) for f in points)
    assert sizes == [2, 2, 2, 3, 3, 3, 3]


def test_ceva_points_by_pairwise_solving():
    # independent oracle: intersect every pair of lines by a cross product and group
    arr = ceva()
    normals = arr.normals()
    groups = {}
    for i, j in combinations(range(len(normals)), 2):
        a, b = normals[i], normals[j]
        p = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        k = next(v for v in p if v)
        key = tuple(v / k for v in p)
        groups.setdefault(key, set()).update({i, j})
    assert sorted(len(g) for g in groups.values()) == [2, 2, 2, 3, 3, 3, 3]


def test_b3_lattice_and_polynomial():
    arr = b3()
    lat = lattice(arr)
    assert [lat.counts_by_rank()[r] for r in range(4)] == [1, 9, 13, 1]
    assert characteristic_polynomial(arr) == [-15, 23, -9, 1]  # (t-1)(t-3)(t-5)
    assert chi_by_point_counts(arr, [5, 7, 11, 13, 17]) == [-15, 23, -9, 1]


def test_braid_arrangement():
    arr = braid()
    chi = characteristic_polynomial(arr)
    assert chi == [-6, 11, -6, 1]  # (t-1)(t-2)(t-3)
    assert chamber_counts(arr).regions == 24
    assert beta_invariant(arr) == 2


def test_generic_line_counts():
    for s in range(1, 7):
        arr = random_affine_lines(random.Random(s), s)
        chi = characteristic_polynomial(arr)
        assert chi == [comb(s, 2), -s, 1]
        c = chamber_counts(arr)
        assert c.regions == 1 + s + comb(s, 2)
        assert c.bounded == comb(s - 1, 2)


def test_empty_and_single():
    assert characteristic_polynomial(Arrangement([], 3, "affine")) == [0, 0, 0, 1]
    one = Arrangement([[1, 0, 2]], 2, "affine")
    c = chamber_counts(one)
    assert (c.regions, c.bounded) == (2, 0)


def test_mobius_interval_identity():
    # sum of mu over [V, X] is zero for every X above the bottom
    lat = lattice(b3())
    for k, x in enumerate(lat.flats):
        if k == 0:
            continue
        total = sum(mu for y, mu in zip(lat.flats, lat.mobius) if y.members <= x.members)
        assert total == 0


def test_lattice_size_limit():
    arr = Arrangement([[1, k, 0] for k in range(25)], 2, "central")
    with pytest.raises(UsageError):
        lattice(arr)


def test_arrangement_validation():
    with pytest.raises(UsageError):
        Arrangement([[0, 0, 1]], 2, "affine")
    with pytest.raises(UsageError):
        Arrangement([[1, 1, 0], [2, 2, 0]], 2, "central")
    with pytest.raises(UsageError):
        Arrangement([[1, 1, 1]], 2, "central")
    with pytest.raises(UsageError):
        Arrangement([[1, 0]], 2, "affine")


# chambers and the finite-field count ---------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_zaslavsky_matches_sign_vectors(seed, s):
    arr = random_line_arrangement(random.Random(seed), s)
    c = chamber_counts(arr)
    assert sign_vector_chambers(arr) == (c.regions, c.bounded)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6))
def test_point_counts_interpolate_chi(seed, s):
    rng = random.Random(seed)
    hs = []
    while len(hs) < s:
        a = [mpq(rng.randint(-2, 2)) for _ in range(3)]
        if any(a) and not any(all(x * k == y for x, y in zip(a, b)) for b in hs for k in (1, -1, 2, -2)):
            hs.append(a)
    try:
        arr = Arrangement([h + [0] for h in hs], 3, "central")
    except UsageError:
        return
    chi = characteristic_polynomial(arr)
    assert chi_by_point_counts(arr, [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]) == chi
    for p in (5, 7):
        if good_reduction(arr, p):
            assert point_count(arr, p) == poly_eval(chi, p)


def test_point_counts_over_the_cyclotomic_field():
    t = XI.gen
    arr = projective([[1, 1, 1], [1, t, t * t], [1, t * t, t], [1, 0, 0]], XI)
    chi = characteristic_polynomial(arr)
    assert chi_by_point_counts(arr, [7, 13, 19, 31, 37]) == chi


# deletion and restriction ---------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_deletion_restriction(seed, s):
    arr = random_line_arrangement(random.Random(seed), s)
    chi = characteristic_polynomial(arr)
    for k in range(len(arr)):
        d = characteristic_polynomial(deletion(arr, k))
        r = characteristic_polynomial(restriction(arr, k)) + [0]
        assert chi == [a - b for a, b in zip(d, r)]


def test_deletion_restriction_on_b3_and_braid():
    for arr in (b3(), braid(), ceva()):
        chi = characteristic_polynomial(arr)
        for k in range(len(arr)):
            d = characteristic_polynomial(deletion(arr, k))
            r = characteristic_polynomial(restriction(arr, k)) + [0]
            assert chi == [a - b for a, b in zip(d, r)]


# cone and decone ---------------------------------------------------------------------


def test_cone_of_a_point():
    pt = Arrangement([[1, 3]], 1, "affine")
    c = cone(pt)
    assert len(c) == 2 and c.ambient == 2 and c.is_central


def test_decone_of_generic_is_in_general_position():
    arr = generic_lines(6)
    d = decone(arr, 0)
    assert len(d) == 5
    lat = lattice(d)
    points = [f for f in lat.flats if f.dim == 0]
    assert len(points) == comb(5, 2) and all(len(f.members) == 2 for f in points)


def _rank_profile(lat):
    return sorted((lat.rank_of(f), len(f.members)) for f in lat.flats)


def test_cone_decone_keeps_the_lattice():
    arr = b3()
    for k in range(len(arr)):
        back = cone(decone(arr, k))
        assert _rank_profile(lattice(back)) == _rank_profile(lattice(arr))
        assert characteristic_polynomial(back) == characteristic_polynomial(arr)
    with pytest.raises(UsageError):
        decone(arr, 9)


def test_deconed_ceva_bounded_chambers_equal_beta():
    arr = ceva()
    beta = beta_invariant(arr)
    assert beta == 2
    assert all(chamber_counts(decone(arr, k)).bounded == beta for k in range(len(arr)))


# decomposability --------------------------------------------------------------------


def test_decomposable_examples():
    axes = Arrangement([[1, 0, 0], [0, 1, 0]], 2, "central")
    res = is_decomposable(axes)
    assert res.decomposable and res.partition == ((0,), (1,))
    three = Arrangement([[1, 0, 0], [0, 1, 0], [1, 1, 0]], 2, "central")
    assert not is_decomposable(three).decomposable
    arr = ceva()
    triple = next(f for f in lattice(arr).flats if len(f.members) == 3)
    assert not is_decomposable(arr, sorted(triple.members)).decomposable
    assert not brute_decomposable(arr, sorted(triple.members))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6), st.integers(2, 4))
def test_decomposability_matches_brute_force(seed, s, ell):
    rng = random.Random(seed)
    hs = []
    for _ in range(s):
        a = [mpq(rng.choice([0, 0, 1, -1, 2])) for _ in range(ell)]
        if any(a):
            hs.append(a + [0])
    try:
        arr = Arrangement(hs, ell, "central")
    except UsageError:
        return
    if len(arr) < 2:
        return
    res = is_decomposable(arr)
    assert res.decomposable == brute_decomposable(arr, range(len(arr)))
    if res.decomposable:
        a, b = res.partition
        assert arr.rank(a) + arr.rank(b) == arr.rank()


# dense edges and beta ---------------------------------------------------------------------


def test_generic_dense_edges_are_hyperplanes_and_center():
    arr = generic_lines(5)
    rep = dense_edges(WeightedArrangement(arr, ["1/2", "1/3", "1/5", "1/7", "-247/210"]))
    members = sorted(e.members for e in rep.edges)
    assert members == sorted([(k,) for k in range(5)] + [tuple(range(5))])
    assert rep.center_included


def test_ceva_lines_have_integral_triple_point_weights():
    lam = [mpq(1, 2), mpq(1, 3), mpq(-5, 6)]
    weights = [lam[0], lam[0], lam[1], lam[1], lam[2], lam[2]]
    rep = dense_edges(WeightedArrangement(ceva(), weights))
    # dense: 6 lines, 4 triple points and the center
    assert sorted(len(e.members) for e in rep.edges) == [1] * 6 + [3] * 4 + [6]
    for e in rep.edges:
        assert e.weight == sum((weights[h] for h in e.members), mpq(0))
    # each triple point meets one line of every pair, so its weight is sum(lam) = 0
    integral = sorted(e.members for e in rep.edges if e.nonneg_integer)
    assert sorted(len(m) for m in integral) == [3, 3, 3, 3, 6]
    assert not rep.projective_check and not rep.coned_check
    # halving the per-line weights does not help: the triple points still sum to 0
    halves = [w / 2 for w in weights]
    assert not dense_edges(WeightedArrangement(ceva(), halves)).projective_check


def test_integral_dense_weight_fails_the_check():
    arr = generic_lines(3)
    rep = dense_edges(WeightedArrangement(arr, [mpq(2), mpq(1, 2), mpq(-5, 2)]))
    assert not rep.projective_check


def test_extension_weights_are_user_asserted():
    arr = generic_lines(3)
    t = XI.gen
    rep = dense_edges(WeightedArrangement(Arrangement(arr.hyperplanes, 3, "projective", XI), [t, -t, XI.zero]))
    assert rep.user_asserted


@pytest.mark.parametrize("s,n", [(3, 2), (4, 2), (5, 2), (4, 3), (5, 3), (6, 3), (6, 4)])
def test_generic_beta(s, n):
    rng = random.Random(s * 10 + n)
    while True:
        rows = [[mpq(rng.randint(-6, 6)) for _ in range(n)] for _ in range(s)]
        arr = Arrangement([r + [0] for r in rows], n, "projective")
        if all(arr.rank(list(c)) == n for c in combinations(range(s), n)):
            break
    assert beta_invariant(arr) == generic_beta(s, n) == comb(s - 2, n - 1)


def test_four_points_on_a_line_give_beta_two():
    arr = Arrangement([[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, -1, 0]], 2, "projective")
    assert characteristic_polynomial(arr) == [3, -4, 1]  # (t-1)(t-3)
    assert beta_invariant(arr) == 2


def test_format_char_poly():
    assert format_char_poly([-15, 23, -9, 1]) == "t^3-9*t^2+23*t-15"
    assert format_char_poly([0, 0, 1]) == "t^2"
