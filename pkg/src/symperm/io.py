"""JSON file formats for matrices and states.

All files are UTF-8 JSON; a complex scalar is a two-element array
[re, im]. The layouts are:

* ComplexMatrix:   {"n": int, "rows": [[[re, im], ...], ...]}
* MultisetColumns: {"n": int, "columns": [{"vector": [[re, im], ...],
                    "multiplicity": int}, ...]}
* SymmetricState:  {"n": int, "d": int, "terms": [{"k": [ints],
                    "coeff": [re, im]}, ...]}
* ProductState:    {"n": int, "d": int, "rows": [[[re, im], ...], ...]}
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ValidationError
from .permanents import MultisetColumns, as_square_matrix
from .states import ProductState, SymmetricState


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValidationError("complex scalar must be a [re, im] pair, got %r" % (v,))
    return complex(float(v[0]), float(v[1]))


def matrix_to_json(m) -> dict:
    a = as_square_matrix(m)
    return {
        "n": int(a.shape[0]),
        "rows": [[complex_to_json(z) for z in row] for row in a],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    rows = [[complex_from_json(v) for v in row] for row in doc["rows"]]
    a = as_square_matrix(rows)
    if a.shape[0] != int(doc["n"]):
        raise ValidationError("declared order %r does not match rows" % doc["n"])
    return a


def multiset_to_json(cols: MultisetColumns) -> dict:
    return {
        "n": cols.dimension,
        "columns": [
            {"vector": [complex_to_json(z) for z in vec], "multiplicity": mult}
            for vec, mult in cols.columns
        ],
    }


def multiset_from_json(doc: dict) -> MultisetColumns:
    columns = tuple(
        (
            np.asarray([complex_from_json(v) for v in col["vector"]], dtype=complex),
            int(col["multiplicity"]),
        )
        for col in doc["columns"]
    )
    return MultisetColumns(int(doc["n"]), columns)


def symmetric_state_to_json(s: SymmetricState) -> dict:
    return {
        "n": s.n,
        "d": s.d,
        "terms": [
            {"k": list(k), "coeff": complex_to_json(c)}
            for k, c in sorted(s.terms.items(), reverse=True)
        ],
    }


def symmetric_state_from_json(doc: dict) -> SymmetricState:
    terms = {
        tuple(int(v) for v in t["k"]): complex_from_json(t["coeff"]) for t in doc["terms"]
    }
    return SymmetricState(int(doc["n"]), int(doc["d"]), terms)


def product_state_to_json(p: ProductState) -> dict:
    return {
        "n": p.n,
        "d": p.d,
        "rows": [[complex_to_json(z) for z in row] for row in p.rows],
    }


def product_state_from_json(doc: dict) -> ProductState:
    rows = np.asarray(
        [[complex_from_json(v) for v in row] for row in doc["rows"]], dtype=complex
    )
    if rows.shape != (int(doc["n"]), int(doc["d"])):
        raise ValidationError("declared (n, d) does not match rows")
    return ProductState(rows)


def object_to_json(obj) -> dict:
    if isinstance(obj, MultisetColumns):
        return multiset_to_json(obj)
    if isinstance(obj, SymmetricState):
        return symmetric_state_to_json(obj)
    if isinstance(obj, ProductState):
        return product_state_to_json(obj)
    return matrix_to_json(obj)


def object_from_json(doc: dict):
    """Dispatch on the document layout to the matching parser."""
    if not isinstance(doc, dict):
        raise ValidationError("top-level JSON value must be an object")
    try:
        if "columns" in doc:
            return multiset_from_json(doc)
        if "terms" in doc:
            return symmetric_state_from_json(doc)
        if "d" in doc:
            return product_state_from_json(doc)
        if "rows" in doc:
            return matrix_from_json(doc)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError("malformed document: %s" % exc) from exc
    raise ValidationError("unrecognized document layout (keys %r)" % sorted(doc))


def save(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(object_to_json(obj), fh, indent=1)
        fh.write("\n")


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError("cannot parse %s: %s" % (path, exc)) from exc
    return object_from_json(doc)
