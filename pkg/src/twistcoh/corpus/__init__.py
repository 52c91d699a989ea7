"""The bundled example problems.

``build()`` constructs every problem from scratch; the JSON files shipped in
this directory are its canonical printouts (``scripts/build_corpus.py``), and
the test suite checks they stay in sync.
"""

import os
from itertools import combinations

from gmpy2 import mpq

from ..algebra.fields import QQ, NumberField
from ..algebra.parse import parse_poly
from ..errors import UsageError
from ..problem import ProblemFile, load

HERE = os.path.dirname(os.path.abspath(__file__))

W3 = ["1/2", "1/3", "-5/6"]
W4 = ["1/2", "1/3", "1/5", "-31/30"]
W5 = ["1/2", "1/3", "1/5", "1/7", "-247/210"]

CUBIC = "x0^3+x1^3+x2^3"
CUBIC_MEMBERS = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)]


def _q(values):
    return [mpq(v) for v in values]


def _polys(texts, nvars, field=QQ):
    return [parse_poly(t, nvars, field) for t in texts]


def _components(rows, nvars, field=QQ):
    return [[(parse_poly(f, nvars, field), k) for f, k in row] for row in rows]


def _divisor(id, description, n, s, polys, weights, point, field=QQ, components=None, expectations=()):
    nvars = n + 1
    payload = {
        "n": n,
        "s": s,
        "polynomials": _polys(polys, nvars, field),
        "weights": _q(weights),
        "base_point": _q(point),
    }
    if components is not None:
        payload["components"] = _components(components, nvars, field)
    return ProblemFile("divisor_system", payload, field, expectations, id, description)


def _paired_lines(pairs):
    """x_i^2 - x_j^2 = (x_i - x_j)(x_i + x_j)."""
    return [[(f"x{i}-x{j}", 1), (f"x{i}+x{j}", 1)] for i, j in pairs]


def cubic_member(a, b):
    """a (x0^3 + x1^3 + x2^3) + 3 b x0 x1 x2, checked to be a smooth cubic."""
    if a == 0 or mpq(b, a) ** 3 == -1:
        raise UsageError(f"pencil member ({a}, {b}) is singular")
    return f"{a}*({CUBIC})+{3 * b}*x0*x1*x2"


def _basic(h):
    return [("a1", True), ("a2", "holds"), ("a3", True), ("h_top_minus_1", h), ("family_size", h)]


def conic_pencil():
    main = ["x0^2+x1^2-2*x2^2", "x0^2+2*x1^2-3*x2^2", "2*x0^2+x1^2-3*x2^2"]
    out = [
        _divisor("conics", "three generic conics of a pencil", 2, 3, main, W3, [1, 1, 1], expectations=_basic(1)),
        _divisor("conics.lines1", "two conics and a pair of lines", 2, 3, main[:2] + ["x0^2-x1^2"], W3, [1, 1, 1],
                 expectations=_basic(1)),
        _divisor("conics.lines2", "one conic and two pairs of lines", 2, 3, [main[0], "x2^2-x0^2", "x0^2-x1^2"], W3,
                 [1, 1, 1], expectations=_basic(1)),
        _divisor("ceva", "three pairs of lines: the Ceva arrangement of 6 lines", 2, 3,
                 ["x1^2-x2^2", "x2^2-x0^2", "x0^2-x1^2"], W3, [1, 1, 1],
                 components=_paired_lines([(1, 2), (2, 0), (0, 1)]),
                 expectations=_basic(1) + [("arrangement_characteristic_polynomial", "t^3-6*t^2+11*t-6"),
                                           ("arrangement_flats_by_rank", [1, 6, 7, 1]),
                                           ("arrangement_h1", 1)]),
        _divisor("conics.offpencil", "three conics plus an off-pencil conic with zero weight", 2, 3,
                 main + ["x0^2+x1^2+x2^2"], W3 + ["0"], [1, 1, 1],
                 expectations=_basic(1) + [("h_top", 1)]),
        _divisor("b3", "B3 arrangement as three non-reduced quartics", 2, 3,
                 ["x0^2*x2^2-x1^2*x2^2", "x0^2*x1^2-x1^2*x2^2", "x0^2*x1^2-x0^2*x2^2"], W3, [1, 1, 1],
                 components=[[("x2", 2)] + _paired_lines([(0, 1)])[0],
                             [("x1", 2)] + _paired_lines([(0, 2)])[0],
                             [("x0", 2)] + _paired_lines([(1, 2)])[0]],
                 expectations=_basic(1) + [("arrangement_characteristic_polynomial", "t^3-9*t^2+23*t-15"),
                                           ("arrangement_h1", 1)]),
    ]
    affine = ProblemFile(
        "affine",
        {
            "n": 2,
            "s": 3,
            "polynomials": _polys(["x0^2+x1^2-2", "x0^2+2*x1^2-3", "2*x0^2+x1^2-3"], 2),
            "weights": _q(W3),
            "base_point": _q([1, 1]),
        },
        QQ,
        [("infinity_weight", "0"), ("h_inf_in_support", False), ("corollary_bound", 1)],
        "conics.affine",
        "the conic pencil in the affine chart x0 != 0",
    )
    out.append(affine)
    return out


def cubic_pencil():
    out = []
    for s, w in ((4, W4), (5, W5)):
        polys = [cubic_member(a, b) for a, b in CUBIC_MEMBERS[:s]]
        out.append(_divisor(f"cubics.s{s}", f"{s} smooth members of the Hesse cubic pencil", 2, s, polys, w,
                            [1, -1, 0], expectations=_basic(s - 2)))
    xi = NumberField("t^2+t+1")
    polys = ["x0*x1*x2", CUBIC + "-3*x0*x1*x2", CUBIC + "-3*t*x0*x1*x2", CUBIC + "-3*t^2*x0*x1*x2"]
    comps = [
        [("x0", 1), ("x1", 1), ("x2", 1)],
        [("x0+x1+x2", 1), ("x0+t*x1+t^2*x2", 1), ("x0+t^2*x1+t*x2", 1)],
        [("x0+x1+t*x2", 1), ("x0+t*x1+x2", 1), ("x0+t^2*x1+t^2*x2", 1)],
        [("x0+x1+t^2*x2", 1), ("x0+t*x1+t*x2", 1), ("x0+t^2*x1+x2", 1)],
    ]
    out.append(_divisor("hessian", "the Hessian configuration of 12 lines", 2, 4, polys, W4, [1, -1, 0],
                        xi, comps, _basic(2) + [("arrangement_size", 12), ("arrangement_h1", 2)]))
    return out


def l8_system():
    polys = ["x0*(x1+x2+x3)", "x1*(-x0+x2-x3)", "x2*(-x0-x1+x3)", "x3*(-x0+x1-x2)"]
    comps = [
        [("x0", 1), ("x1+x2+x3", 1)],
        [("x1", 1), ("x0-x2+x3", 1)],
        [("x2", 1), ("x0+x1-x3", 1)],
        [("x3", 1), ("x0-x1+x2", 1)],
    ]
    return [_divisor("l8", "four quadrics giving the L8 configuration of 8 planes", 3, 4, polys, W4,
                     [0, 0, 0, 1], components=comps,
                     expectations=_basic(1) + [("members_sum_to_zero", True), ("arrangement_size", 8)])]


def monomial_system(n, d):
    """F_i = x_{i-1}^d - x_i^d for i = 1..n followed by F_0 = x_n^d - x_0^d."""
    pairs = [(i - 1, i) for i in range(1, n + 1)] + [(n, 0)]
    polys = [f"x{i}^{d}-x{j}^{d}" for i, j in pairs]
    if d == 2:
        field = QQ
        comps = _paired_lines(pairs)
    elif d == 3:
        field = NumberField("t^2+t+1")
        comps = [[(f"x{i}-x{j}", 1), (f"x{i}-t*x{j}", 1), (f"x{i}-t^2*x{j}", 1)] for i, j in pairs]
    else:
        raise UsageError("monomial systems are bundled for d = 2, 3")
    weights = {3: W3, 4: W4, 5: W5}[n + 1]
    return _divisor(f"monomial.{n}-{d}", f"monomial system n={n}, d={d}", n, n + 1, polys, weights, [1] * (n + 1),
                    field, comps, _basic(1) + [("members_sum_to_zero", True), ("arrangement_size", (n + 1) * d)])


def generic_examples():
    arr = ProblemFile(
        "arrangement",
        {
            "ambient": 3,
            "kind": "projective",
            "hyperplanes": [_q(h) for h in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0])],
            "weights": _q(W4),
        },
        QQ,
        [("characteristic_polynomial", "t^3-4*t^2+6*t-3"), ("beta", 1), ("section4_projective", True),
         ("section4_coned", False)],
        "arr.generic4",
        "four generic lines in the projective plane",
    )
    normals = [[1, 0], [0, 1], [1, 1], [1, 2], [1, 3]]
    aom = ProblemFile(
        "aomoto",
        {"ambient": 2, "kind": "central", "hyperplanes": [_q(a + [0]) for a in normals], "weights": _q(W5)},
        QQ,
        [("os_dims", [1, 5, 4]), ("cohomology", [0, 3, 3])],
        "aomoto.generic5",
        "five generic lines through the origin of the plane",
    )
    assert all(a[0] * b[1] != a[1] * b[0] for a, b in combinations(normals, 2))
    return [arr, aom]


def build():
    out = conic_pencil() + cubic_pencil() + l8_system()
    out += [monomial_system(2, 2), monomial_system(2, 3), monomial_system(3, 2)]
    out += generic_examples()
    return out


def filename(id):
    return id.replace(".", "_") + ".json"


def index():
    """[(id, path)] of the bundled files in corpus order."""
    return [(p.id, os.path.join(HERE, filename(p.id))) for p in build()]


def load_all(only=None):
    out = []
    for id, path in index():
        if only is None or id == only or id.startswith(only + "."):
            out.append(load(path))
    if only is not None and not out:
        raise UsageError(f"no corpus example with id {only!r}")
    return out


def write_all():
    paths = []
    for p in build():
        path = os.path.join(HERE, filename(p.id))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(p.dumps())
        paths.append(path)
    return paths
