"""Problem files: a small JSON schema with a canonical printer.

Every scalar, polynomial and field is stored as a string in the canonical
text grammar, so parse followed by print reproduces a canonical file byte for
byte.
"""

import json

from .algebra.fields import QQ, make_field
from .algebra.parse import format_poly, format_scalar, parse_poly, parse_scalar
from .errors import ParseError, UsageError

SCHEMA_VERSION = "1"
MODES = ("divisor_system", "affine", "arrangement", "aomoto")
TOP_KEYS = ("schema_version", "id", "description", "field", "mode", "payload", "expectations")
REQUIRED_TOP = ("schema_version", "mode", "payload")

PAYLOAD_KEYS = {
    "divisor_system": (("n", True), ("s", True), ("polynomials", True), ("weights", True),
                       ("base_point", False), ("components", False)),
    "affine": (("n", True), ("s", True), ("polynomials", True), ("weights", True), ("base_point", False)),
    "arrangement": (("ambient", True), ("kind", True), ("hyperplanes", True), ("weights", False)),
    "aomoto": (("ambient", True), ("kind", True), ("hyperplanes", True), ("weights", True), ("order", False)),
}


class ProblemFile:
    def __init__(self, mode, payload, field=QQ, expectations=(), id="", description=""):
        if mode not in MODES:
            raise UsageError(f"unknown mode {mode!r}")
        self.mode = mode
        self.payload = payload
        self.field = field
        self.expectations = list(expectations)
        self.id = id
        self.description = description

    # printing ----------------------------------------------------------
    def to_dict(self):
        out = {"schema_version": SCHEMA_VERSION}
        if self.id:
            out["id"] = self.id
        if self.description:
            out["description"] = self.description
        out["field"] = self.field.to_json()
        out["mode"] = self.mode
        out["payload"] = _print_payload(self.mode, self.payload)
        if self.expectations:
            out["expectations"] = [{"name": n, "value": v} for n, v in self.expectations]
        return out

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _scalars(values):
    return [format_scalar(v) for v in values]


def _print_payload(mode, p):
    out = {}
    for key, _ in PAYLOAD_KEYS[mode]:
        if key not in p or p[key] is None:
            continue
        v = p[key]
        if key in ("n", "s", "ambient", "kind", "order"):
            out[key] = v
        elif key == "polynomials":
            out[key] = [format_poly(f) for f in v]
        elif key in ("weights", "base_point"):
            out[key] = _scalars(v)
        elif key == "hyperplanes":
            out[key] = [_scalars(h) for h in v]
        elif key == "components":
            out[key] = [[{"form": format_poly(f), "multiplicity": k} for f, k in comp] for comp in v]
    return out


# parsing ----------------------------------------------------------------


def _scalar(text, field, path):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise UsageError(f"{path}: expected a scalar string")
    try:
        return parse_scalar(str(text), field)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}", exc.line, exc.column) from exc


def _poly(text, nvars, field, path):
    if not isinstance(text, str):
        raise UsageError(f"{path}: expected a polynomial string")
    try:
        return parse_poly(text, nvars, field)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}", exc.line, exc.column) from exc


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"{path}: expected an integer")
    return value


def _list(value, path):
    if not isinstance(value, list):
        raise UsageError(f"{path}: expected a list")
    return value


def _parse_payload(mode, raw, field):
    if not isinstance(raw, dict):
        raise UsageError("payload must be an object")
    allowed = dict(PAYLOAD_KEYS[mode])
    unknown = set(raw) - set(allowed)
    if unknown:
        raise UsageError(f"unknown payload keys: {sorted(unknown)}")
    missing = [k for k, req in allowed.items() if req and k not in raw]
    if missing:
        raise UsageError(f"missing payload keys: {missing}")
    p = {}
    if mode in ("divisor_system", "affine"):
        n = p["n"] = _int(raw["n"], "payload.n")
        p["s"] = _int(raw["s"], "payload.s")
        nvars = n + 1 if mode == "divisor_system" else n
        p["polynomials"] = [
            _poly(t, nvars, field, f"payload.polynomials[{k}]")
            for k, t in enumerate(_list(raw["polynomials"], "payload.polynomials"))
        ]
        p["weights"] = [_scalar(t, field, f"payload.weights[{k}]") for k, t in enumerate(_list(raw["weights"], "payload.weights"))]
        if "base_point" in raw:
            p["base_point"] = [
                _scalar(t, field, f"payload.base_point[{k}]")
                for k, t in enumerate(_list(raw["base_point"], "payload.base_point"))
            ]
        if "components" in raw:
            comps = []
            for i, comp in enumerate(_list(raw["components"], "payload.components")):
                row = []
                for j, item in enumerate(_list(comp, f"payload.components[{i}]")):
                    path = f"payload.components[{i}][{j}]"
                    if not isinstance(item, dict) or set(item) != {"form", "multiplicity"}:
                        raise UsageError(f"{path}: expected {{form, multiplicity}}")
                    row.append((_poly(item["form"], nvars, field, path + ".form"), _int(item["multiplicity"], path)))
                comps.append(row)
            p["components"] = comps
    else:
        ell = p["ambient"] = _int(raw["ambient"], "payload.ambient")
        kind = raw["kind"]
        if kind not in ("affine", "central", "projective"):
            raise UsageError(f"payload.kind: unknown arrangement kind {kind!r}")
        p["kind"] = kind
        hs = []
        for k, h in enumerate(_list(raw["hyperplanes"], "payload.hyperplanes")):
            h = _list(h, f"payload.hyperplanes[{k}]")
            if len(h) != ell + 1:
                raise UsageError(f"payload.hyperplanes[{k}]: expected {ell} coefficients and an offset")
            hs.append([_scalar(t, field, f"payload.hyperplanes[{k}][{j}]") for j, t in enumerate(h)])
        p["hyperplanes"] = hs
        if "weights" in raw:
            p["weights"] = [_scalar(t, field, f"payload.weights[{k}]") for k, t in enumerate(_list(raw["weights"], "payload.weights"))]
        if "order" in raw:
            p["order"] = [_int(x, "payload.order") for x in _list(raw["order"], "payload.order")]
    return p


def loads(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise UsageError("a problem file must be a JSON object")
    unknown = set(raw) - set(TOP_KEYS)
    if unknown:
        raise UsageError(f"unknown top-level keys: {sorted(unknown)}")
    missing = [k for k in REQUIRED_TOP if k not in raw]
    if missing:
        raise UsageError(f"missing keys: {missing}")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise UsageError(f"unsupported schema_version {raw['schema_version']!r}")
    mode = raw["mode"]
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}")
    field = make_field(raw.get("field"))
    payload = _parse_payload(mode, raw["payload"], field)
    exps = []
    for k, e in enumerate(_list(raw.get("expectations", []), "expectations")):
        if not isinstance(e, dict) or set(e) != {"name", "value"}:
            raise UsageError(f"expectations[{k}]: expected {{name, value}}")
        exps.append((e["name"], e["value"]))
    return ProblemFile(mode, payload, field, exps, raw.get("id", ""), raw.get("description", ""))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
