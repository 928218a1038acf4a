"""JSON and CSV formats for vectors, polynomials, series and results.

Complex numbers are written as ``[re, im]`` pairs, reals as plain numbers.
Multiset indices are 0-based sorted lists.  ``dumps`` sorts keys so equal
objects always serialize to identical bytes.
"""
from __future__ import annotations

import csv
import io as _io
import json
from typing import Any

import numpy as np

from .core import CoeffBox, Field, NormTag, SearchBudget, Space, SupResult, Vec
from .errors import StructuralError
from .polys import (
    BlackBox,
    Diagonal,
    HomPoly,
    ScalarFunctional,
    ScaledIdentity,
    SymTensor,
    TensorBacked,
    WeightedScale,
    tensor_from_blackbox,
)
from .series import SeriesPrefix


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def require(data, key, what):
    if not isinstance(data, dict):
        raise StructuralError(f"{what} must be a JSON object")
    if key not in data:
        raise StructuralError(f"{what} is missing field {key!r}")
    return data[key]


def num_to_json(z):
    z = complex(z) if np.iscomplexobj(z) else float(z)
    if isinstance(z, complex):
        return [z.real, z.imag]
    return z


def num_from_json(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise StructuralError(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise StructuralError(f"expected a number, got {v!r}")
    return float(v)


def array_to_json(a):
    return [num_to_json(z) for z in np.asarray(a).ravel()]


def array_from_json(items):
    if not isinstance(items, list):
        raise StructuralError("expected a list of numbers")
    vals = [num_from_json(v) for v in items]
    return np.array(vals, dtype=complex if any(isinstance(v, complex) for v in vals) else float)


# vectors and spaces


def vec_to_json(v: Vec):
    return {"dim": v.dim, "tag": v.tag.to_json(), "entries": array_to_json(v.entries)}


def vec_from_json(data, tag: NormTag | None = None):
    entries = array_from_json(require(data, "entries", "vector"))
    if "tag" in data:
        tag = NormTag.from_json(data["tag"])
    elif tag is None:
        raise StructuralError("vector is missing field 'tag'")
    return Vec(entries, tag, data.get("dim"))


def functional_to_json(f: ScalarFunctional):
    return {"tag": f.tag.to_json(), "coefficients": array_to_json(f.coefficients)}


def functional_from_json(data):
    return ScalarFunctional(array_from_json(require(data, "coefficients", "functional")),
                            NormTag.from_json(require(data, "tag", "functional")))


# polynomials


def _tensor_to_json(t: SymTensor):
    return [{"index": [int(i) for i in ms], "value": array_to_json(row)} for ms, row in t.items()]


def poly_to_json(p: HomPoly):
    """Black-box bodies are written as their polarized tensor."""
    body = p.body
    if isinstance(body, BlackBox):
        body = TensorBacked(tensor_from_blackbox(p))
    if isinstance(body, TensorBacked):
        b = {"variant": "tensor", "coefficients": _tensor_to_json(body.tensor)}
    elif isinstance(body, Diagonal):
        b = {"variant": "diagonal", "weights": array_to_json(body.weights)}
    elif isinstance(body, ScaledIdentity):
        b = {"variant": "scaled_identity", "functional": array_to_json(body.functional)}
    elif isinstance(body, WeightedScale):
        b = {"variant": "weighted_scale", "weights": array_to_json(body.weights)}
    else:  # pragma: no cover - HomPoly validates bodies
        raise StructuralError(f"cannot serialize body {type(body).__name__}")
    return {"k": p.k, "domain": p.domain.to_json(), "codomain": p.codomain.to_json(), "field": p.field.value, "body": b}


def poly_from_json(data) -> HomPoly:
    k = require(data, "k", "polynomial")
    if isinstance(k, bool) or not isinstance(k, int):
        raise StructuralError(f"polynomial degree must be an integer, got {k!r}")
    domain = Space.from_json(require(data, "domain", "polynomial"))
    codomain = Space.from_json(require(data, "codomain", "polynomial"))
    field = Field.parse(data.get("field", "real"))
    b = require(data, "body", "polynomial")
    variant = require(b, "variant", "polynomial body")
    dtype = complex if field is Field.COMPLEX else float

    def arr(key):
        a = array_from_json(require(b, key, f"{variant} body"))
        if np.iscomplexobj(a) and field is Field.REAL:
            raise StructuralError(f"complex {key} in a real polynomial")
        return a.astype(dtype)

    if variant == "tensor":
        mapping = {}
        for item in require(b, "coefficients", "tensor body"):
            idx = tuple(int(i) for i in require(item, "index", "tensor coefficient"))
            val = require(item, "value", "tensor coefficient")
            mapping[idx] = _value(val, codomain.dim)
        if field is Field.REAL and any(np.iscomplexobj(v) for v in mapping.values()):
            raise StructuralError("complex tensor coefficient in a real polynomial")
        tensor = SymTensor.from_dict(k, domain.dim, codomain.dim, mapping, field)
        body = TensorBacked(tensor)
    elif variant == "diagonal":
        body = Diagonal(arr("weights"))
    elif variant == "scaled_identity":
        body = ScaledIdentity(arr("functional"))
    elif variant == "weighted_scale":
        body = WeightedScale(arr("weights"))
    else:
        raise StructuralError(f"unknown polynomial body variant {variant!r}")
    return HomPoly(k, domain, codomain, field, body)


def _value(val, m):
    """A tensor coefficient: a list of ``m`` numbers, or one number when ``m == 1``."""
    if isinstance(val, list) and len(val) == m:
        return array_from_json(val)
    if m == 1:
        return array_from_json([val])
    raise StructuralError(f"tensor coefficient value must list {m} numbers, got {val!r}")


# series


def series_to_json(s: SeriesPrefix):
    return {"label": s.label, "dim": s.space.dim, "tag": s.space.tag.to_json(),
            "terms": [vec_to_json(t) for t in s]}


def series_from_json(data) -> SeriesPrefix:
    terms = require(data, "terms", "series")
    if not isinstance(terms, list) or not terms:
        raise StructuralError("series has no terms")
    tag_data = data.get("tag", data.get("norm_tag"))
    tag = NormTag.from_json(tag_data) if tag_data is not None else None
    vecs = []
    for t in terms:
        if isinstance(t, dict):
            vecs.append(vec_from_json(t, tag))
        else:
            if tag is None:
                raise StructuralError("series of plain entry lists is missing field 'tag'")
            vecs.append(Vec(array_from_json(t), tag))
    if "dim" in data and any(v.dim != data["dim"] for v in vecs):
        raise StructuralError(f"series declares dim {data['dim']} but a term has another length")
    return SeriesPrefix(tuple(vecs), str(data.get("label", "")))


def _csv_num(z):
    if isinstance(z, complex) or np.iscomplexobj(z):
        return str(complex(z))
    return repr(float(z))


def series_to_csv(s: SeriesPrefix) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(range(s.space.dim))
    for t in s:
        w.writerow(_csv_num(z) for z in t.entries)
    return buf.getvalue()


def series_from_csv(text: str, tag: NormTag, label="") -> SeriesPrefix:
    rows = [r for r in csv.reader(_io.StringIO(text)) if r]
    if len(rows) < 2:
        raise StructuralError("series CSV needs a header row and at least one term")
    dim = len(rows[0])
    vecs = []
    for i, r in enumerate(rows[1:], start=2):
        if len(r) != dim:
            raise StructuralError(f"CSV row {i} has {len(r)} entries, header has {dim}")
        try:
            vals = [complex(c.strip()) if "j" in c else float(c) for c in r]
        except ValueError:
            raise StructuralError(f"CSV row {i} has a non-numeric entry") from None
        vecs.append(Vec(vals, tag))
    return SeriesPrefix(tuple(vecs), label)


def rows_to_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(_csv_num(v) if isinstance(v, (float, complex, np.floating, np.complexfloating)) else v for v in r)
    return buf.getvalue()


# results


def witness_to_json(w) -> Any:
    if isinstance(w, Vec):
        return vec_to_json(w)
    if isinstance(w, CoeffBox):
        return {"field": w.field.value, "coefficients": array_to_json(w.coefficients)}
    if w is None:
        return None
    return array_to_json(w)


def sup_result_to_json(r: SupResult):
    out = {"value": float(r.value), "witness": witness_to_json(r.witness)}
    out.update(r.exactness.to_json())
    return out


def budget_to_json(b: SearchBudget):
    return b.to_json()


def certificate_to_json(c):
    lhs = rhs = None
    if c.lhs is not None:
        lhs = {"value": float(c.lhs.value), "witness": witness_to_json(c.lhs.witness), "exact": c.lhs.exact}
    if c.rhs is not None:
        rhs = {"value": float(c.rhs.value), "witness": witness_to_json(c.rhs.witness)}
        if c.rhs.exactness.resolution is not None:
            rhs["resolution"] = c.rhs.exactness.resolution
    out = {
        "k": c.k,
        "field": c.field.value,
        "C_k": c.c_k,
        "lhs": lhs,
        "rhs": rhs,
        "margin": c.margin,
        "verdict": c.verdict.value,
        "budget": c.budget.to_json(),
        "seed": c.budget.seed,
    }
    if c.reason:
        out["reason"] = c.reason
    return out


def instance_to_json(inst):
    return {"index": inst.index, "k": inst.k, "dim": inst.dim, "codim": inst.codim, "n_vectors": inst.n_vectors,
            "domain_tag": inst.domain_tag.to_json(), "codomain_tag": inst.codomain_tag.to_json()}


def suite_to_json(summary):
    return {
        "field": summary.field.value,
        "seed": summary.seed,
        "count": summary.count,
        "proved": summary.proved,
        "unresolved": summary.unresolved,
        "violations": summary.violations,
        "max_ratio": summary.max_ratio,
        "tightest": instance_to_json(summary.tightest) if summary.tightest else None,
        "certificates": [dict(certificate_to_json(c), instance=instance_to_json(i)) for i, c in summary.certificates],
    }


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
