"""JSON encoding of certificates, maps and witnesses.

No floats ever reach the output: rationals are written as ``"num/den"``
strings (``"n"`` when integral), the zero-polynomial degree as ``"-inf"``,
polynomials in the canonical text form.  Documents are dumped with sorted keys
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .automorphism import Affine, Elementary, PolyMap
from .certificate import Certificate
from .polyring import MinusInfinity, Polynomial, render_poly
from .sureduction import TypeOneWitness

SCHEMA_VERSION = "tameforge-cert/1"

_CHECK = {
    "type": "object",
    "required": ["name", "expected", "computed", "pass"],
    "properties": {
        "name": {"type": "string"},
        "pass": {"type": "boolean"},
        "note": {"type": "string"},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "inputs", "checks", "overall"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "checks": {"type": "array", "items": _CHECK},
        "polynomials": {"type": "object", "additionalProperties": {"type": "string"}},
        "overall": {"type": "boolean"},
    },
}


class SchemaError(ValueError):
    pass


def encode(value):
    """JSON-safe form of check values."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, MinusInfinity):
        return "-inf"
    if isinstance(value, Polynomial):
        return render_poly(value)
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    raise TypeError(f"cannot encode {type(value).__name__}")


def certificate_checks(cert: Certificate) -> list:
    out = []
    for c in cert.checks:
        item = {"name": c.name, "expected": encode(c.expected), "computed": encode(c.computed), "pass": c.passed}
        if c.note:
            item["note"] = c.note
        out.append(item)
    return out


def step_to_json(step) -> dict:
    if isinstance(step, Elementary):
        return {"type": "elementary", "index": step.index + 1, "phi": render_poly(step.phi)}
    if isinstance(step, Affine):
        return {"type": "affine", "A": encode([list(r) for r in step.A]), "b": encode(list(step.b))}
    raise TypeError(type(step).__name__)


def polymap_to_json(F: PolyMap) -> dict:
    out = {"images": [render_poly(g) for g in F.images]}
    if F.word is not None:
        out["word"] = [step_to_json(s) for s in F.word]
    return out


def witness_to_json(w: TypeOneWitness) -> dict:
    return {
        "perm": [i + 1 for i in w.perm],
        "s": w.s,
        "alpha": str(w.alpha),
        "phi": render_poly(w.phi_expr, symbol="T"),
    }


def document(command: str, inputs: dict, cert: Certificate, **extra) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "checks": certificate_checks(cert),
        "overall": cert.overall,
    }
    for k, v in extra.items():
        if v is not None:
            doc[k] = v
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def validate(doc) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from exc
