"""JSON documents with a ``kind`` discriminator; see docs/schema.md.

Maps are always index tables: entry ``i`` is the index of the image of
element ``i``.  For vector-backed objects element ``i`` is the coefficient
vector whose base-p digits spell ``i`` (most significant first).
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .actions import DerivedAction
from .core import OmegaGroup, Signature
from .errors import MalformedBackend, SchemaError, XmodkitError
from .report import ValidationReport, Violation

DOCUMENT_KINDS = ("omega-group", "action", "xmod", "xmod-morphism", "derivation",
                  "derivation-list", "simplicial", "simplicial-map", "simplicial-homotopy")


def _list(a) -> Any:
    return np.asarray(a).tolist()


def _need(d: dict, key: str, kind: str):
    if not isinstance(d, dict):
        raise SchemaError(f"{kind}: expected an object, got {type(d).__name__}")
    if key not in d:
        raise SchemaError(f"{kind}: missing field {key!r}")
    return d[key]


def _check_kind(d: dict, kind: str) -> None:
    if not isinstance(d, dict):
        raise SchemaError(f"expected a {kind} object")
    if d.get("kind", kind) != kind:
        raise SchemaError(f"expected kind {kind!r}, got {d.get('kind')!r}")


def _ints(x, what: str):
    try:
        arr = np.asarray(x)
    except Exception:
        raise SchemaError(f"{what}: not an integer array") from None
    if arr.dtype == object or (arr.size and not np.issubdtype(arr.dtype, np.integer)):
        raise SchemaError(f"{what}: not a rectangular integer array")
    return arr.astype(np.int64)


# ---------------------------------------------------------------------------
# omega groups and actions

def omega_group_to_dict(G: OmegaGroup) -> dict:
    b = G.backend
    if G.is_vector:
        backend = {"type": "vectors", "p": b.p, "d": b.d,
                   "tensors": {k: _list(v) for k, v in b.tensors.items()},
                   "matrices": {k: _list(v) for k, v in b.matrices.items()}}
    else:
        backend = {"type": "table", "add": _list(b.add), "neg": _list(b.neg), "zero": b.zero,
                   "stars": {k: _list(v) for k, v in b.stars.items()},
                   "unary": {k: _list(v) for k, v in b.unary.items()}}
    out = {"kind": "omega-group", "signature": G.signature.to_dict(), "backend": backend}
    if G.name:
        out["name"] = G.name
    return out


def omega_group_from_dict(d: dict) -> OmegaGroup:
    _check_kind(d, "omega-group")
    try:
        sig = Signature.from_dict(_need(d, "signature", "omega-group"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, XmodkitError):
            raise
        raise SchemaError(f"bad signature: {exc}") from None
    b = _need(d, "backend", "omega-group")
    kind = _need(b, "type", "backend")
    name = d.get("name")
    if kind == "table":
        return OmegaGroup.from_tables(
            sig, _ints(_need(b, "add", "backend"), "add"), _ints(_need(b, "neg", "backend"), "neg"),
            int(b.get("zero", 0)),
            {k: _ints(v, k) for k, v in b.get("stars", {}).items()},
            {k: _ints(v, k) for k, v in b.get("unary", {}).items()}, name=name)
    if kind == "vectors":
        p = _need(b, "p", "backend")
        dim = _need(b, "d", "backend")
        if sig.p is not None and sig.p != p:
            raise MalformedBackend(f"signature p={sig.p} but backend p={p}")
        return OmegaGroup.from_vectors(
            sig, p, dim, {k: _ints(v, k) for k, v in b.get("tensors", {}).items()},
            {k: _ints(v, k) for k, v in b.get("matrices", {}).items()}, name=name)
    raise SchemaError(f"unknown backend type {kind!r}")


def _action_tables(a: DerivedAction) -> dict:
    return {"dot": _list(a.dot),
            "star_left": {k: _list(v) for k, v in a.star_left.items()},
            "star_right": {k: _list(v) for k, v in a.star_right.items()}}


def action_to_dict(a: DerivedAction) -> dict:
    return {"kind": "action", "actor": omega_group_to_dict(a.actor),
            "acted": omega_group_to_dict(a.acted), **_action_tables(a)}


def _action_from(d: dict, actor: OmegaGroup, acted: OmegaGroup) -> DerivedAction:
    return DerivedAction.build(actor, acted, _ints(_need(d, "dot", "action"), "dot"),
                               {k: _ints(v, k) for k, v in d.get("star_left", {}).items()},
                               {k: _ints(v, k) for k, v in d.get("star_right", {}).items()})


def action_from_dict(d: dict) -> DerivedAction:
    _check_kind(d, "action")
    return _action_from(d, omega_group_from_dict(_need(d, "actor", "action")),
                        omega_group_from_dict(_need(d, "acted", "action")))


# ---------------------------------------------------------------------------
# crossed modules, morphisms, derivations

def xmod_to_dict(X) -> dict:
    out = {"kind": "xmod", "E": omega_group_to_dict(X.E), "R": omega_group_to_dict(X.R),
           "boundary": _list(X.boundary), "action": _action_tables(X.action),
           "precrossed": X.precrossed_only}
    if X.name:
        out["name"] = X.name
    return out


def xmod_from_dict(d: dict):
    from .xmod import CrossedModule
    _check_kind(d, "xmod")
    E = omega_group_from_dict(_need(d, "E", "xmod"))
    R = omega_group_from_dict(_need(d, "R", "xmod"))
    act = _action_from(_need(d, "action", "xmod"), R, E)
    return CrossedModule.build(E, R, _ints(_need(d, "boundary", "xmod"), "boundary"), act,
                               bool(d.get("precrossed", False)), d.get("name"))


def morphism_to_dict(m) -> dict:
    return {"kind": "xmod-morphism", "source": xmod_to_dict(m.source),
            "target": xmod_to_dict(m.target), "f1": _list(m.f1), "f0": _list(m.f0)}


def morphism_from_dict(d: dict):
    from .xmod import XModMorphism
    _check_kind(d, "xmod-morphism")
    return XModMorphism.build(xmod_from_dict(_need(d, "source", "xmod-morphism")),
                              xmod_from_dict(_need(d, "target", "xmod-morphism")),
                              _ints(_need(d, "f1", "xmod-morphism"), "f1"),
                              _ints(_need(d, "f0", "xmod-morphism"), "f0"))


def derivation_to_dict(dv) -> dict:
    return {"kind": "derivation", "f": morphism_to_dict(dv.f), "s": _list(dv.s)}


def derivation_from_dict(d: dict):
    from .homotopy import Derivation
    _check_kind(d, "derivation")
    return Derivation.build(morphism_from_dict(_need(d, "f", "derivation")),
                            _ints(_need(d, "s", "derivation"), "s"))


# ---------------------------------------------------------------------------
# simplicial data

def simplicial_to_dict(S) -> dict:
    return {"kind": "simplicial", "levels": [omega_group_to_dict(A) for A in S.levels],
            "faces": [[_list(t) for t in row] for row in S.faces[1:]],
            "degeneracies": [[_list(t) for t in row] for row in S.degeneracies]}


def simplicial_from_dict(d: dict):
    from .simplicial import TruncatedSimplicialObject
    _check_kind(d, "simplicial")
    levels = [omega_group_from_dict(x) for x in _need(d, "levels", "simplicial")]
    faces = [[_ints(t, "face") for t in row] for row in _need(d, "faces", "simplicial")]
    degs = [[_ints(t, "degeneracy") for t in row] for row in _need(d, "degeneracies", "simplicial")]
    return TruncatedSimplicialObject.build(levels, [()] + faces, degs)


def simplicial_map_to_dict(m) -> dict:
    return {"kind": "simplicial-map", "source": simplicial_to_dict(m.source),
            "target": simplicial_to_dict(m.target), "maps": [_list(t) for t in m.maps]}


def simplicial_map_from_dict(d: dict, source=None, target=None):
    from .simplicial import SimplicialMap
    _check_kind(d, "simplicial-map")
    A = source if source is not None else simplicial_from_dict(_need(d, "source", "simplicial-map"))
    B = target if target is not None else simplicial_from_dict(_need(d, "target", "simplicial-map"))
    return SimplicialMap.build(A, B, [_ints(t, "map") for t in _need(d, "maps", "simplicial-map")])


def simplicial_homotopy_to_dict(H) -> dict:
    return {"kind": "simplicial-homotopy", "source": simplicial_to_dict(H.f.source),
            "target": simplicial_to_dict(H.f.target),
            "f": [_list(t) for t in H.f.maps], "g": [_list(t) for t in H.g.maps],
            "h": [{"n": n, "i": i, "table": _list(t)} for (n, i), t in sorted(H.h.items())]}


def simplicial_homotopy_from_dict(d: dict):
    from .simplicial import SimplicialHomotopy, SimplicialMap
    _check_kind(d, "simplicial-homotopy")
    A = simplicial_from_dict(_need(d, "source", "simplicial-homotopy"))
    B = simplicial_from_dict(_need(d, "target", "simplicial-homotopy"))
    f = SimplicialMap.build(A, B, [_ints(t, "f") for t in _need(d, "f", "simplicial-homotopy")])
    g = SimplicialMap.build(A, B, [_ints(t, "g") for t in _need(d, "g", "simplicial-homotopy")])
    h = {}
    for entry in _need(d, "h", "simplicial-homotopy"):
        h[(int(_need(entry, "n", "h")), int(_need(entry, "i", "h")))] = _ints(entry["table"], "h")
    return SimplicialHomotopy.build(f, g, h)


def derivation_list_from_dict(d: dict) -> list:
    _check_kind(d, "derivation-list")
    return [derivation_from_dict(x) for x in _need(d, "derivations", "derivation-list")]


# ---------------------------------------------------------------------------
# reports

def report_from_dict(d: dict) -> ValidationReport:
    return ValidationReport(list(d.get("checks", [])),
                            [Violation(v["law"], v["assignment"], v["lhs"], v["rhs"])
                             for v in d.get("violations", [])],
                            list(d.get("not_checked", [])))


# ---------------------------------------------------------------------------
# dispatch

_LOADERS = {
    "omega-group": omega_group_from_dict,
    "action": action_from_dict,
    "xmod": xmod_from_dict,
    "xmod-morphism": morphism_from_dict,
    "derivation": derivation_from_dict,
    "derivation-list": derivation_list_from_dict,
    "simplicial": simplicial_from_dict,
    "simplicial-map": simplicial_map_from_dict,
    "simplicial-homotopy": simplicial_homotopy_from_dict,
}


def from_dict(d: dict):
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError("document needs a 'kind' field")
    loader = _LOADERS.get(d["kind"])
    if loader is None:
        raise SchemaError(f"unknown document kind {d['kind']!r}")
    try:
        return loader(d)
    except XmodkitError:
        raise
    except (TypeError, AttributeError, IndexError, KeyError, ValueError) as exc:
        raise SchemaError(f"malformed {d['kind']} document: {exc}") from None


def to_dict(obj) -> dict:
    if isinstance(obj, OmegaGroup):
        return omega_group_to_dict(obj)
    return obj.to_dict()


def dumps(doc: dict) -> str:
    """Deterministic text form: sorted keys, compact separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save(obj, path) -> None:
    doc = obj if isinstance(obj, dict) else to_dict(obj)
    Path(path).write_text(dumps(doc))


def load_document(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON ({exc})") from None


def load(path):
    return from_dict(load_document(path))
