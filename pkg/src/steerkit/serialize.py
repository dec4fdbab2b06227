"""JSON encoding of specifications and reports.

Complex numbers are ``[re, im]`` pairs and matrices are row-major nested lists.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
from jsonschema import Draft202012Validator

from .errors import InvariantError, SchemaError, SteerkitError
from .model import Factor, FullOperatorSpec, LsiSpec, LsiTerm, PartyLayout, Term, UntrustedSetting
from .objects import Observable, Povm


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("steerkit").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _validator(name: str) -> Draft202012Validator:
    return Draft202012Validator(load_schema(name))


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def _kind_validator(doc) -> Draft202012Validator | None:
    """Validator for the branch named by ``kind`` so errors point inside the document."""
    schema = load_schema("spec")
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind not in schema["$defs"] or kind not in ("full", "lsi"):
        return None
    return Draft202012Validator({"$ref": f"#/$defs/{kind}", "$defs": schema["$defs"]})


def validate(doc, name: str) -> None:
    v = (_kind_validator(doc) if name == "spec" else None) or _validator(name)
    errors = list(v.iter_errors(doc))
    if errors:
        # deepest error is usually the most specific one
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise SchemaError(err.message, _pointer(err.absolute_path))


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(rows, pointer: str = "") -> np.ndarray:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvariantError("square-matrix", f"{pointer}: matrix is not square")
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def _encode_setting(s) -> dict:
    if isinstance(s, Observable):
        return {"type": "observable", "label": s.label, "matrix": encode_matrix(s.matrix), "two_valued": s.two_valued}
    return {"type": "povm", "label": s.label, "effects": [encode_matrix(e) for e in s.effects]}


def spec_to_dict(spec) -> dict:
    if isinstance(spec, FullOperatorSpec):
        return {
            "kind": "full",
            "name": spec.name,
            "dims": list(spec.dims),
            "settings": [[_encode_setting(s) for s in ps] for ps in spec.settings],
            "terms": [
                {
                    "coeff": t.coeff,
                    "factors": [None if f is None else {"setting": f.setting, "outcome": f.outcome} for f in t.factors],
                }
                for t in spec.terms
            ],
            "constant": spec.constant,
        }
    if isinstance(spec, LsiSpec):
        return {
            "kind": "lsi",
            "dims": list(spec.layout.dims),
            "trusted": list(spec.trusted),
            "settings": [{"label": s.label, "kind": s.kind, "m": s.m} for s in spec.settings],
            "terms": [
                {"setting": t.setting, "outcome": t.outcome, "weight": t.weight, "op": encode_matrix(t.op)}
                for t in spec.terms
            ],
            "constant_term": spec.constant_term,
            "constant_op": None if spec.constant_op is None else encode_matrix(spec.constant_op),
        }
    raise TypeError(f"cannot serialize {type(spec).__name__}")


def serialize_spec(spec, indent=None) -> str:
    return json.dumps(spec_to_dict(spec), indent=indent)


def _wrap(pointer, fn):
    """Run a constructor, re-raising library errors as InvariantError at ``pointer``."""
    try:
        return fn()
    except InvariantError as e:
        raise InvariantError(e.invariant, f"{pointer}: {e.detail}") from e
    except SteerkitError as e:
        raise InvariantError(type(e).__name__, f"{pointer}: {e}") from e


def _decode_setting(doc, pointer):
    label = doc.get("label", "")
    if doc["type"] == "observable":
        m = decode_matrix(doc["matrix"], pointer + "/matrix")
        return _wrap(pointer, lambda: Observable(m, label, doc.get("two_valued", True)))
    effs = tuple(decode_matrix(e, f"{pointer}/effects/{k}") for k, e in enumerate(doc["effects"]))
    return _wrap(pointer, lambda: Povm(effs, label))


def spec_from_dict(doc):
    if doc["kind"] == "full":
        settings = tuple(
            tuple(_decode_setting(s, f"/settings/{p}/{k}") for k, s in enumerate(ps))
            for p, ps in enumerate(doc["settings"])
        )
        terms = tuple(
            Term(t["coeff"], tuple(None if f is None else Factor(f["setting"], f.get("outcome")) for f in t["factors"]))
            for t in doc["terms"]
        )
        return _wrap("/", lambda: FullOperatorSpec(PartyLayout(doc["dims"]), settings, terms,
                                                    doc.get("constant", 0.0), doc.get("name", "")))
    settings = tuple(UntrustedSetting(s["label"], s["kind"], s.get("m", 2)) for s in doc["settings"])
    terms = []
    for i, t in enumerate(doc["terms"]):
        op = decode_matrix(t["op"], f"/terms/{i}/op")
        terms.append(LsiTerm(t["setting"], t.get("outcome", 0), t["weight"], op))
    # validate term by term so the error names the offending index
    cop = doc.get("constant_op")
    cop = None if cop is None else decode_matrix(cop, "/constant_op")
    layout = _wrap("/dims", lambda: PartyLayout(doc["dims"]))
    for i in range(len(terms)):
        try:
            LsiSpec(layout, doc["trusted"], settings, (terms[i],))
        except InvariantError as e:
            raise InvariantError(e.invariant, f"/terms/{i}: {e.detail.removeprefix('term 0: ')}") from e
        except SteerkitError as e:
            raise InvariantError(type(e).__name__, f"/terms/{i}: {e}") from e
    return _wrap("/", lambda: LsiSpec(layout, doc["trusted"], settings, tuple(terms), doc.get("constant_term", 0.0), cop))


def parse_spec_json(text: str):
    """Parse and validate a spec document; errors carry a JSON pointer."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} at line {e.lineno}", "/") from e
    validate(doc, "spec")
    return spec_from_dict(doc)


def load_spec(path: str):
    with open(path) as fh:
        return parse_spec_json(fh.read())


__all__ = [
    "load_schema",
    "validate",
    "encode_matrix",
    "decode_matrix",
    "spec_to_dict",
    "spec_from_dict",
    "serialize_spec",
    "parse_spec_json",
    "load_spec",
]
