"""Concrete categories: groups, associative, Leibniz and Lie algebras, dialgebras.

Each kind has its own derivation formula written in its native operations;
:func:`specialized_derivation_check` evaluates those formulas directly so
they can be compared with the generic laws in :mod:`xmodkit.homotopy`.
The bracket functors send associative algebras to Lie algebras
(``[a, b] = ab - ba``) and dialgebras to Leibniz algebras
(``<<x, y>> = x -| y - y |- x``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core
from .actions import DerivedAction
from .core import OmegaGroup, Signature
from .errors import CharTwo, InternalTheoremViolation, KindMismatch, NotLinear
from .homotopy import (Derivation, homotopy_target, validate_derivation)
from .report import MAX_WITNESSES, ValidationReport, check_grid
from .xmod import CrossedModule, XModMorphism, validate_crossed_module

ALGEBRA_KINDS = ("assoc", "lie", "leibniz", "dias")

# action symbols of each kind, as names for the left and right star actions
OP_NAMES = {
    "group": {},
    "assoc": {"mul": "ab"},
    "lie": {"br": "[a,b]"},
    "leibniz": {"br": "<a,b>"},
    "dias": {"vdash": "a |- b", "dashv": "a -| b"},
}


@dataclass(frozen=True)
class InstanceEncoding:
    kind: str
    underlying: OmegaGroup
    op_dictionary: dict


def encode(G: OmegaGroup) -> InstanceEncoding:
    kind = G.signature.kind
    if kind not in OP_NAMES:
        raise KindMismatch(f"no instance encoding for kind {kind!r}")
    if kind in ALGEBRA_KINDS and not G.is_vector:
        raise KindMismatch(f"{kind} objects must be given by structure constants")
    return InstanceEncoding(kind, G, dict(OP_NAMES[kind]))


def _require_kind(d: Derivation, kind: str) -> None:
    for G in (d.f.source.E, d.f.source.R, d.f.target.E, d.f.target.R):
        if G.signature.kind != kind:
            raise KindMismatch(f"derivation lives in kind {G.signature.kind!r}, not {kind!r}")


def _require_linear(d: Derivation) -> None:
    """Over a prime field additivity is linearity."""
    R, Ep, s = d.f.source.R, d.f.target.E, np.asarray(d.s)
    if not R.is_vector:
        raise NotLinear("algebra kinds need vector-backed objects")
    if not (s[R.add_table] == Ep.add_table[s[:, None], s[None, :]]).all():
        raise NotLinear("s is not F_p-linear")


def specialized_derivation_check(kind: str, d: Derivation,
                                 max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    """Check the derivation formula of ``kind`` over all pairs ``(a, b)``.

    group:   s(a + b) = f0(-b).s(a) + s(b)    (s(gh) = (f0(h^-1).s(g)) s(h))
    assoc:   s(ab) = f0(a) > s(b) + s(a) < f0(b) + s(a)s(b)
    leibniz: s(<a,b>) = f0(a) > s(b) + s(a) < f0(b) + <s(a),s(b)>
    lie:     s([a,b]) = f0(a) > s(b) - f0(b) > s(a) + [s(a),s(b)]
    dias:    the assoc formula for |- and for -|, each with its own actions
    """
    _require_kind(d, kind)
    f = d.f
    R, Ep, act = f.source.R, f.target.E, f.target.action
    s, f0 = np.asarray(d.s), f.f0
    add, neg = Ep.add_table, Ep.neg_table
    dom = (np.arange(R.size), R.ref)
    report = ValidationReport()
    kw = dict(out_ref=Ep.ref, max_witnesses=max_witnesses)

    if kind == "group":
        check_grid(report, "group derivation formula", {"a": dom, "b": dom},
                   lambda a, b: (s[R.add_table[a, b]],
                                 add[act.dot[f0[R.neg_table[b]], s[a]], s[b]]), **kw)
        return report
    if kind not in ALGEBRA_KINDS:
        raise KindMismatch(f"no specialized formula for kind {kind!r}")
    _require_linear(d)

    def three_terms(op, a, b):
        # f0(a) acting on s(b) from the left, s(a) acted on from the right by f0(b)
        left = act.star_left[op][f0[a], s[b]]
        right = act.star_right[op][f0[b], s[a]]
        return add[add[left, right], Ep.star_table(op)[s[a], s[b]]]

    if kind == "lie":
        def lie(a, b):
            left = act.star_left["br"]
            rhs = add[add[left[f0[a], s[b]], neg[left[f0[b], s[a]]]], Ep.star_table("br")[s[a], s[b]]]
            return s[R.star_table("br")[a, b]], rhs
        check_grid(report, "lie derivation formula", {"a": dom, "b": dom}, lie, **kw)
    elif kind in ("assoc", "leibniz"):
        op = R.signature.star_ops[0]
        check_grid(report, f"{kind} derivation formula", {"a": dom, "b": dom},
                   lambda a, b: (s[R.star_table(op)[a, b]], three_terms(op, a, b)), **kw)
    else:
        for op in ("vdash", "dashv"):
            check_grid(report, f"dialgebra derivation formula [{op}]", {"a": dom, "b": dom},
                       lambda a, b: (s[R.star_table(op)[a, b]], three_terms(op, a, b)), **kw)
    return report


# ---------------------------------------------------------------------------
# bracket functors

def _lie_object(G: OmegaGroup) -> OmegaGroup:
    b = G.backend
    C = b.tensors["mul"]
    sig = Signature.preset("lie", b.p, G.signature.unary_ops)
    return OmegaGroup.from_vectors(sig, b.p, b.d, {"br": C - C.transpose(1, 0, 2)},
                                   b.matrices, name=f"Lie({G.name})")


def _leibniz_object(G: OmegaGroup) -> OmegaGroup:
    b = G.backend
    sig = Signature.preset("leibniz", b.p, G.signature.unary_ops)
    br = b.tensors["dashv"] - b.tensors["vdash"].transpose(1, 0, 2)
    return OmegaGroup.from_vectors(sig, b.p, b.d, {"br": br}, b.matrices, name=f"Lb({G.name})")


def _sub(G: OmegaGroup, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return G.add_table[x, G.neg_table[y]]


def _check_source(X: CrossedModule, kind: str) -> None:
    if X.signature.kind != kind:
        raise KindMismatch(f"expected a {kind} crossed module, got {X.signature.kind!r}")
    if not (X.E.is_vector and X.R.is_vector):
        raise KindMismatch(f"{kind} crossed modules must be given by structure constants")


def liezation(X: CrossedModule) -> CrossedModule:
    """Same carriers and boundary; bracket ``ab - ba``; actions
    ``b > a = ba - ab`` and ``a < b = ab - ba``."""
    _check_source(X, "assoc")
    if X.E.backend.p == 2:
        raise CharTwo("the Lie preset needs p != 2")
    E, R = _lie_object(X.E), _lie_object(X.R)
    L, Rt = X.action.star_left["mul"], X.action.star_right["mul"]
    act = DerivedAction.build(R, E, X.action.dot, {"br": _sub(E, L, Rt)}, {"br": _sub(E, Rt, L)})
    return CrossedModule.build(E, R, X.boundary, act, X.precrossed_only, name=f"Lie({X.name})")


def dialg_to_leibniz(X: CrossedModule) -> CrossedModule:
    """Same carriers and boundary; bracket ``x -| y - y |- x``; actions
    ``<<b, a>> = b -| a - a |- b`` and ``<<a, b>> = a -| b - b |- a``."""
    _check_source(X, "dias")
    E, R = _leibniz_object(X.E), _leibniz_object(X.R)
    act = X.action
    left = _sub(E, act.star_left["dashv"], act.star_right["vdash"])
    right = _sub(E, act.star_right["dashv"], act.star_left["vdash"])
    a = DerivedAction.build(R, E, act.dot, {"br": left}, {"br": right})
    return CrossedModule.build(E, R, X.boundary, a, X.precrossed_only, name=f"Lb({X.name})")


FUNCTORS: dict[str, Callable[[CrossedModule], CrossedModule]] = {
    "liezation": liezation,
    "dialg_to_leibniz": dialg_to_leibniz,
}


def transport_morphism(F: Callable, m: XModMorphism, source=None, target=None) -> XModMorphism:
    """The same component tables between the images of the endpoints."""
    return XModMorphism(source if source is not None else F(m.source),
                        target if target is not None else F(m.target), m.f1, m.f0)


def transport_homotopy(F: Callable, d: Derivation, source=None, target=None) -> Derivation:
    """Reinterpret the table of ``d`` in the target kind and check it there.

    Failure would contradict the preservation of homotopies by ``F``; it is
    raised as InternalTheoremViolation with the first witness.
    """
    m = transport_morphism(F, d.f, source, target)
    out = Derivation(m, d.s)
    kind = m.source.signature.kind
    for label, rep in (("generic", validate_derivation(out, 3)),
                       ("specialized", specialized_derivation_check(kind, out, 3))):
        if not rep.ok:
            v = rep.violations[0]
            raise InternalTheoremViolation(
                f"transported derivation fails the {label} {kind} check: {v.law} at "
                f"{v.assignment} ({v.lhs} != {v.rhs})")
    return out


def functor_commutes_with_target(F: Callable, d: Derivation, source=None, target=None) -> bool:
    """``F(homotopy_target(d)) == homotopy_target(transport_homotopy(F, d))`` tablewise."""
    g = homotopy_target(d)
    t = homotopy_target(transport_homotopy(F, d, source, target))
    Fg = transport_morphism(F, g, source, target)
    return bool(np.array_equal(Fg.f1, t.f1) and np.array_equal(Fg.f0, t.f0))
