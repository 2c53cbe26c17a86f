"""Crossed and precrossed modules and their morphisms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import core
from .actions import DerivedAction, equal_actions, validate_derived_action
from .core import OmegaGroup, require_same_signature
from .errors import CapExceeded, SignatureMismatch, SourceTargetMismatch
from .report import MAX_WITNESSES, ValidationReport, check_grid


@dataclass(frozen=True, eq=False)
class CrossedModule:
    """A boundary ``E -> R`` together with an action of ``R`` on ``E``."""
    E: OmegaGroup
    R: OmegaGroup
    boundary: np.ndarray
    action: DerivedAction
    precrossed_only: bool = False
    name: str | None = None

    @classmethod
    def build(cls, E, R, boundary, action, precrossed_only=False, name=None):
        require_same_signature(E, R)
        if action.actor is not R and not core.groups_equal(action.actor, R):
            raise SignatureMismatch("the action's actor must be R")
        if action.acted is not E and not core.groups_equal(action.acted, E):
            raise SignatureMismatch("the action must act on E")
        return cls(E, R, core.as_map(boundary, E, R, "boundary"), action,
                   bool(precrossed_only), name)

    @property
    def signature(self):
        return self.E.signature

    def __repr__(self) -> str:
        label = self.name or "CrossedModule"
        return f"<{label} |E|={self.E.size} |R|={self.R.size}>"

    def to_dict(self) -> dict:
        from .io import xmod_to_dict
        return xmod_to_dict(self)


def validate_crossed_module(X: CrossedModule, max_witnesses: int = MAX_WITNESSES,
                            check_action: bool = True) -> ValidationReport:
    """Boundary is a morphism, the action is derived, and XM1/XM2 hold.

    XM1 and XM2 are checked for every star and its opposite.  For a
    precrossed module XM2 is listed under ``not_checked``.
    """
    E, R, act, bd = X.E, X.R, X.action, X.boundary
    require_same_signature(E, R)
    report = ValidationReport()
    if check_action:
        report.extend(validate_derived_action(act, max_witnesses), "action: ")
    core.check_morphism(report, E, R, bd, "boundary", max_witnesses)
    r_dom = (np.arange(R.size), R.ref)
    e_dom = (np.arange(E.size), E.ref)
    radd, rneg = R.add_table, R.neg_table
    D = act.dot
    check_grid(report, "XM1 [dot]", {"r": r_dom, "e": e_dom},
               lambda r, e: (bd[D[r, e]], radd[radd[r, bd[e]], rneg[r]]),
               out_ref=R.ref, max_witnesses=max_witnesses)
    for s in R.signature.all_stars:
        L, Rs = act.left(s), R.star_table(s)
        check_grid(report, f"XM1 [{s}]", {"r": r_dom, "e": e_dom},
                   lambda r, e: (bd[L[r, e]], Rs[r, bd[e]]),
                   out_ref=R.ref, max_witnesses=max_witnesses)
    if X.precrossed_only:
        report.not_checked.append("XM2 (precrossed module)")
        return report
    eadd, eneg = E.add_table, E.neg_table
    check_grid(report, "XM2 [dot]", {"e": e_dom, "e'": e_dom},
               lambda **k: (D[bd[k["e"]], k["e'"]], eadd[eadd[k["e"], k["e'"]], eneg[k["e"]]]),
               out_ref=E.ref, max_witnesses=max_witnesses)
    for s in E.signature.all_stars:
        L, Es = act.left(s), E.star_table(s)
        check_grid(report, f"XM2 [{s}]", {"e": e_dom, "e'": e_dom},
                   lambda **k: (L[bd[k["e"]], k["e'"]], Es[k["e"], k["e'"]]),
                   out_ref=E.ref, max_witnesses=max_witnesses)
    return report


def xmod_equal(X: CrossedModule, Y: CrossedModule) -> bool:
    if X is Y:
        return True
    return (core.groups_equal(X.E, Y.E) and core.groups_equal(X.R, Y.R)
            and np.array_equal(X.boundary, Y.boundary) and equal_actions(X.action, Y.action)
            and X.precrossed_only == Y.precrossed_only)


@dataclass(frozen=True, eq=False)
class XModMorphism:
    """``f1: E -> E'`` and ``f0: R -> R'``."""
    source: CrossedModule
    target: CrossedModule
    f1: np.ndarray
    f0: np.ndarray

    @classmethod
    def build(cls, source: CrossedModule, target: CrossedModule, f1, f0):
        require_same_signature(source.E, target.E)
        return cls(source, target, core.as_map(f1, source.E, target.E, "f1"),
                   core.as_map(f0, source.R, target.R, "f0"))

    def to_dict(self) -> dict:
        from .io import morphism_to_dict
        return morphism_to_dict(self)


def morphisms_equal(f: XModMorphism, g: XModMorphism) -> bool:
    """Same endpoints and identical component tables."""
    return (np.array_equal(f.f1, g.f1) and np.array_equal(f.f0, g.f0)
            and xmod_equal(f.source, g.source) and xmod_equal(f.target, g.target))


def validate_xmod_morphism(m: XModMorphism, max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    """Component morphisms, the commuting square and action preservation."""
    X, Y = m.source, m.target
    require_same_signature(X.E, Y.E)
    report = ValidationReport()
    core.check_morphism(report, X.E, Y.E, m.f1, "f1", max_witnesses)
    core.check_morphism(report, X.R, Y.R, m.f0, "f0", max_witnesses)
    f1, f0 = m.f1, m.f0
    e_dom = (np.arange(X.E.size), X.E.ref)
    r_dom = (np.arange(X.R.size), X.R.ref)
    check_grid(report, "square commutes", {"e": e_dom},
               lambda e: (Y.boundary[f1[e]], f0[X.boundary[e]]),
               out_ref=Y.R.ref, max_witnesses=max_witnesses)
    check_grid(report, "f1 preserves dot action", {"r": r_dom, "e": e_dom},
               lambda r, e: (f1[X.action.dot[r, e]], Y.action.dot[f0[r], f1[e]]),
               out_ref=Y.E.ref, max_witnesses=max_witnesses)
    for s in X.E.signature.all_stars:
        Lx, Ly = X.action.left(s), Y.action.left(s)
        check_grid(report, f"f1 preserves {s} action", {"r": r_dom, "e": e_dom},
                   lambda r, e: (f1[Lx[r, e]], Ly[f0[r], f1[e]]),
                   out_ref=Y.E.ref, max_witnesses=max_witnesses)
    return report


def is_valid_morphism(m: XModMorphism) -> bool:
    return validate_xmod_morphism(m, max_witnesses=1).ok


def compose_morphisms(g: XModMorphism, f: XModMorphism) -> XModMorphism:
    """``g after f``."""
    if not xmod_equal(f.target, g.source):
        raise SourceTargetMismatch("target of f differs from source of g")
    return XModMorphism(f.source, g.target, core.compose_maps(g.f1, f.f1),
                        core.compose_maps(g.f0, f.f0))


def identity_morphism(X: CrossedModule) -> XModMorphism:
    return XModMorphism(X, X, core.identity_map(X.E), core.identity_map(X.R))


def zero_morphism(X: CrossedModule, Y: CrossedModule) -> XModMorphism:
    return XModMorphism(X, Y, core.zero_map(X.E, Y.E), core.zero_map(X.R, Y.R))


def _inverse(table: np.ndarray) -> np.ndarray | None:
    if len(set(table.tolist())) != table.size:
        return None
    inv = np.empty_like(table)
    inv[table] = np.arange(table.size)
    return inv


def is_isomorphism(m: XModMorphism) -> bool:
    """Both components bijective and the inverse pair a valid morphism."""
    if m.source.E.size != m.target.E.size or m.source.R.size != m.target.R.size:
        return False
    i1, i0 = _inverse(m.f1), _inverse(m.f0)
    if i1 is None or i0 is None:
        return False
    back = XModMorphism(m.target, m.source, i1, i0)
    return is_valid_morphism(m) and is_valid_morphism(back)


def enumerate_morphisms(X: CrossedModule, Y: CrossedModule,
                        cap: int = core.BRUTE_CAP) -> Iterator[XModMorphism]:
    """All valid morphisms ``X -> Y`` in deterministic order (f0 first, then f1)."""
    require_same_signature(X.E, Y.E)
    f0s = list(core.homomorphisms(X.R, Y.R, cap))
    f1s = list(core.homomorphisms(X.E, Y.E, cap))
    if len(f0s) * len(f1s) > cap:
        raise CapExceeded(f"{len(f0s)} x {len(f1s)} component pairs exceed cap {cap}")
    for f0, f1 in itertools.product(f0s, f1s):
        # the square is the cheapest filter
        if not np.array_equal(Y.boundary[f1], f0[X.boundary]):
            continue
        m = XModMorphism(X, Y, f1, f0)
        if is_valid_morphism(m):
            yield m


def find_isomorphism(X: CrossedModule, Y: CrossedModule,
                     cap: int = core.BRUTE_CAP) -> XModMorphism | None:
    if X.E.size != Y.E.size or X.R.size != Y.R.size:
        return None
    try:
        require_same_signature(X.E, Y.E)
    except SignatureMismatch:
        return None
    for f0 in core.isomorphisms(X.R, Y.R, cap):
        for f1 in core.isomorphisms(X.E, Y.E, cap):
            m = XModMorphism(X, Y, f1, f0)
            if np.array_equal(Y.boundary[f1], f0[X.boundary]) and is_isomorphism(m):
                return m
    return None
