"""JSON encodings for shapes, elements, measures and reports."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import AlgebraShape, Element, Projection
from .exceptions import MalformedElementError, RepresentationError
from .extension import ExtensionResult, LinearityAudit, NormBound
from .measures import AdditivityReport, Frame2, ScalarMeasure, Table, TraceForm


class FormatError(ValueError):
    """Input document does not match the expected JSON layout."""


def shape_to_json(shape: AlgebraShape) -> dict:
    return {"blocks": list(shape.blocks)}


def shape_from_json(doc) -> AlgebraShape:
    if isinstance(doc, list):
        return AlgebraShape.of(doc)
    try:
        return AlgebraShape.of(doc["blocks"])
    except (KeyError, TypeError, MalformedElementError) as exc:
        raise FormatError(f"bad shape: {doc!r}") from exc


def element_to_json(x: Element) -> dict:
    return {"blocks": [[[[float(z.real), float(z.imag)] for z in row] for row in b]
                       for b in x.blocks]}


def element_from_json(doc, shape=None) -> Element:
    try:
        blocks = []
        for b in doc["blocks"]:
            arr = np.asarray(b, dtype=float)
            if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
                raise FormatError("each block must be an n x n array of [re, im] pairs")
            blocks.append(arr[..., 0] + 1j * arr[..., 1])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad element: {exc}") from exc
    if shape is None:
        shape = AlgebraShape(tuple(b.shape[0] for b in blocks))
    try:
        return Element(shape, blocks)
    except MalformedElementError as exc:
        raise FormatError(str(exc)) from exc


def measure_to_json(mu: ScalarMeasure) -> dict:
    if isinstance(mu, TraceForm):
        return {"type": "trace_form", "shape": shape_to_json(mu.shape),
                "rho": element_to_json(mu.rho)}
    if isinstance(mu, Frame2):
        if mu.power_coeffs is None:
            raise RepresentationError("only polynomial Frame2 measures can be serialized")
        return {"type": "frame2", "c": mu.c,
                "odd": {"kind": "poly_nz", "coeffs": list(mu.power_coeffs)}}
    if isinstance(mu, Table):
        doc: dict[str, Any] = {
            "type": "table", "shape": shape_to_json(mu.shape),
            "entries": [{"p": element_to_json(p), "value": [v.real, v.imag]}
                        for p, v in mu.items()],
        }
        if mu.oracle_spec is not None:
            doc["oracle"] = dict(mu.oracle_spec)
        return doc
    raise RepresentationError(f"cannot serialize {type(mu).__name__}")


def measure_from_json(doc) -> ScalarMeasure:
    if not isinstance(doc, dict) or "type" not in doc:
        raise FormatError("measure document needs a 'type' field")
    kind = doc["type"]
    try:
        if kind == "trace_form":
            shape = shape_from_json(doc["shape"])
            return TraceForm(element_from_json(doc["rho"], shape))
        if kind == "frame2":
            odd = doc.get("odd", {"kind": "poly_nz", "coeffs": []})
            if odd.get("kind") != "poly_nz":
                raise FormatError(f"unknown odd-function kind {odd.get('kind')!r}")
            if "shape" in doc and shape_from_json(doc["shape"]).blocks != (2,):
                raise FormatError("frame2 measures live on shape [2]")
            return Frame2.poly_nz(float(doc.get("c", 1.0)), odd["coeffs"])
        if kind == "table":
            shape = shape_from_json(doc["shape"])
            entries = []
            for e in doc.get("entries", []):
                p = Projection.of(element_from_json(e["p"], shape))
                re, im = e["value"]
                entries.append((p, complex(re, im)))
            oracle = doc.get("oracle")
            if oracle is None:
                return Table(shape, entries)
            if oracle.get("kind") != "trace_power":
                raise FormatError(f"unknown oracle kind {oracle.get('kind')!r}")
            return Table.trace_power(shape, int(oracle["power"]), entries)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad {kind} measure: {exc}") from exc
    raise FormatError(f"unknown measure type {kind!r}")


def result_to_json(result: ExtensionResult) -> dict:
    return {"status": result.status.value, "rho": element_to_json(result.rho),
            "residual": result.residual, "verified_on": result.verified_on}


def additivity_to_json(report: AdditivityReport) -> dict:
    return {"trials": report.trials, "max_violation": report.max_violation,
            "bound_estimate": report.bound_estimate, "skipped": report.skipped,
            "worst_pair": None if report.worst_pair is None
            else [element_to_json(p) for p in report.worst_pair]}


def audit_to_json(audit: LinearityAudit) -> dict:
    return {"max_commuting_defect": audit.max_commuting_defect,
            "max_general_defect": audit.max_general_defect}


def norms_to_json(bound: NormBound) -> dict:
    return {"trace_norm": bound.trace_norm, "four_sup": bound.four_sup, "sup": bound.sup}


def dumps(doc) -> str:
    """Deterministic JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_measure(path) -> ScalarMeasure:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return measure_from_json(doc)
