"""Derivations between crossed-module morphisms and the homotopy groupoid.

A derivation ``s: R -> E'`` is anchored to a morphism ``f: X -> X'``.  It
must satisfy, for all ``g, h`` in ``R`` and every star ``*``::

    s(g + h) = f0(-h).s(g) + s(h)
    s(g * h) = f0(g) * s(h) + s(g) * f0(h) + s(g) * s(h)
    s(w g)   = w s(g)                      for every unary operation w

The mixed products use the target's action tables: ``f0(g) * s(h)`` is
``star_left`` and ``s(g) * f0(h)`` is ``star_right``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import core
from .actions import semidirect_product
from .core import OmegaGroup
from .errors import (CapExceeded, InternalTheoremViolation, MiddleMismatch,
                     PrecrossedTarget, XmodkitError)
from .report import MAX_WITNESSES, ValidationReport, check_grid
from .xmod import (CrossedModule, XModMorphism, compose_morphisms, enumerate_morphisms,
                   identity_morphism, morphisms_equal, validate_xmod_morphism, xmod_equal)


@dataclass(frozen=True, eq=False)
class Derivation:
    f: XModMorphism
    s: np.ndarray

    @classmethod
    def build(cls, f: XModMorphism, s) -> "Derivation":
        return cls(f, core.as_map(s, f.source.R, f.target.E, "s"))

    def to_dict(self) -> dict:
        from .io import derivation_to_dict
        return derivation_to_dict(self)


@dataclass(frozen=True, eq=False)
class HomotopyArrow:
    derivation: Derivation
    target: XModMorphism


def _refuse_precrossed(f: XModMorphism) -> None:
    if f.target.precrossed_only:
        raise PrecrossedTarget("derivations need XM2 in the target; it is declared precrossed")


# ---------------------------------------------------------------------------
# checking

def validate_derivation(d: Derivation, max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    """Derivation laws over all pairs, plus the consequences every derivation
    has: ``s(0) = 0``, ``s(-g) = f0(g).(-s(g))`` and the conjugation formula."""
    f = d.f
    _refuse_precrossed(f)
    core.require_same_signature(f.source.R, f.target.E)
    R, Ep, act = f.source.R, f.target.E, f.target.action
    s, f0 = np.asarray(d.s), f.f0
    D = act.dot
    add, neg = Ep.add_table, Ep.neg_table
    radd, rneg = R.add_table, R.neg_table
    dom = (np.arange(R.size), R.ref)
    report = ValidationReport()
    kw = dict(out_ref=Ep.ref, max_witnesses=max_witnesses)

    check_grid(report, "additive law", {"g": dom, "h": dom},
               lambda g, h: (s[radd[g, h]], add[D[f0[rneg[h]], s[g]], s[h]]), **kw)
    for sym in R.signature.star_ops:
        L, Rt, Es, Rs = act.left(sym), act.right(sym), Ep.star_table(sym), R.star_table(sym)
        check_grid(report, f"star law [{sym}]", {"g": dom, "h": dom},
                   lambda g, h: (s[Rs[g, h]],
                                 add[add[L[f0[g], s[h]], Rt[f0[h], s[g]]], Es[s[g], s[h]]]),
                   **kw)
    for w in R.signature.unary_ops:
        uR, uE = R.unary_table(w), Ep.unary_table(w)
        check_grid(report, f"unary law [{w}]", {"g": dom}, lambda g: (s[uR[g]], uE[s[g]]), **kw)

    report.add_check("s(0) = 0")
    if s[R.zero] != Ep.zero:
        report.fail("s(0) = 0", {}, Ep.ref(s[R.zero]), Ep.ref(Ep.zero))
    check_grid(report, "s(-g) = f0(g).(-s(g))", {"g": dom},
               lambda g: (s[rneg[g]], D[f0[g], neg[s[g]]]), **kw)

    def conj(g, h):
        inner = add[D[f0[rneg[h]], s[g]], s[h]]
        return s[radd[radd[g, h], rneg[g]]], add[D[f0[g], inner], s[rneg[g]]]
    check_grid(report, "s(g+h-g) formula", {"g": dom, "h": dom}, conj, **kw)
    return report


def is_derivation(d: Derivation) -> bool:
    return validate_derivation(d, max_witnesses=1).ok


def _candidate_mask(f: XModMorphism, S: np.ndarray) -> np.ndarray:
    """Which rows of ``S`` (candidates x |R|) satisfy the defining laws."""
    R, Ep, act = f.source.R, f.target.E, f.target.action
    f0, D = f.f0, act.dot
    add = Ep.add_table
    g = np.arange(R.size)[:, None]
    h = np.arange(R.size)[None, :]
    ok = np.ones(S.shape[0], dtype=bool)
    lhs = S[:, R.add_table[g, h]]
    rhs = add[D[f0[R.neg_table[h]][None], S[:, g]], S[:, h]]
    ok &= (lhs == rhs).all(axis=(1, 2))
    for sym in R.signature.star_ops:
        L, Rt, Es = act.left(sym), act.right(sym), Ep.star_table(sym)
        lhs = S[:, R.star_table(sym)[g, h]]
        rhs = add[add[L[f0[g][None], S[:, h]], Rt[f0[h][None], S[:, g]]], Es[S[:, g], S[:, h]]]
        ok &= (lhs == rhs).all(axis=(1, 2))
    for w in R.signature.unary_ops:
        ok &= (S[:, R.unary_table(w)] == Ep.unary_table(w)[S]).all(axis=1)
    return ok


# ---------------------------------------------------------------------------
# constructions

def derivation_to_semidirect_morphism(d: Derivation, cap: int | None = None):
    """``(P, phi)`` with ``P = E' x| R'`` and ``phi(r) = (f0(r).s(r), f0(r))``.

    ``phi`` is a morphism ``R -> P`` exactly when ``s`` is a derivation.
    """
    f = d.f
    P = semidirect_product(f.target.action, cap)
    nb = f.target.R.size
    s, f0 = np.asarray(d.s), f.f0
    phi = f.target.action.dot[f0, s] * nb + f0
    return P, core._frozen(phi)


def target_maps(d: Derivation) -> tuple[np.ndarray, np.ndarray]:
    """``(g1, g0)`` with ``g0 = f0 + d's`` and ``g1 = f1 + s d``, unchecked."""
    f = d.f
    X, Y = f.source, f.target
    s = np.asarray(d.s)
    g0 = Y.R.add_table[f.f0, Y.boundary[s]]
    g1 = Y.E.add_table[f.f1, s[X.boundary]]
    return core._frozen(g1), core._frozen(g0)


def homotopy_target(d: Derivation, check: bool = True) -> XModMorphism:
    """The morphism ``g`` that ``d`` connects ``f`` to.

    The result is validated; a failure raises InternalTheoremViolation since
    it cannot happen for a derivation into a genuine crossed module.
    """
    if check:
        rep = validate_derivation(d, max_witnesses=1)
        if not rep.ok:
            raise XmodkitError(f"not a derivation: {rep.failed()}")
    g1, g0 = target_maps(d)
    g = XModMorphism(d.f.source, d.f.target, g1, g0)
    if check:
        rep = validate_xmod_morphism(g, max_witnesses=3)
        if not rep.ok:
            v = rep.violations[0]
            raise InternalTheoremViolation(
                "homotopy target is not a crossed-module morphism "
                f"({v.law} at {v.assignment}: {v.lhs} != {v.rhs}). Either the target "
                "does not satisfy XM2 or this is a bug in xmodkit.")
    return g


def homotopy_arrow(d: Derivation) -> HomotopyArrow:
    return HomotopyArrow(d, homotopy_target(d))


def identity_derivation(f: XModMorphism) -> Derivation:
    _refuse_precrossed(f)
    return Derivation(f, core.zero_map(f.source.R, f.target.E))


def invert_derivation(d: Derivation) -> Derivation:
    """``-s``, attached to the target of ``d``."""
    _refuse_precrossed(d.f)
    g = homotopy_target(d)
    return Derivation(g, core._frozen(d.f.target.E.neg_table[d.s]))


def concat_derivations(d1: Derivation, d2: Derivation) -> Derivation:
    """``s1 + s2`` pointwise, attached to the source of ``d1``."""
    _refuse_precrossed(d1.f)
    mid = homotopy_target(d1)
    if not morphisms_equal(mid, d2.f):
        raise MiddleMismatch("the second derivation does not start where the first ends")
    return Derivation(d1.f, core._frozen(d1.f.target.E.add_table[d1.s, d2.s]))


def derivations_equal(a: Derivation, b: Derivation) -> bool:
    return np.array_equal(a.s, b.s) and morphisms_equal(a.f, b.f)


# ---------------------------------------------------------------------------
# enumeration

class _DerivationRules:
    def __init__(self, f: XModMorphism):
        self.f = f
        self.E = f.target.E
        self.act = f.target.action
        self.R = f.source.R
        self.f0 = f.f0.tolist()
        self.dot = self.act.dot.tolist()

    def plus(self, x, y, vx, vy):
        return self.E.add(self.dot[self.f0[self.R.neg(y)]][vx], vy)

    def neg(self, x, vx):
        return self.dot[self.f0[x]][self.E.neg(vx)]

    def star(self, sym, x, y, vx, vy):
        a = self.act.left(sym)[self.f0[x], vy]
        b = self.act.right(sym)[self.f0[y], vx]
        return self.E.add(self.E.add(int(a), int(b)), self.E.star(sym, vx, vy))

    def unary(self, w, x, vx):
        return self.E.unary(w, vx)


def _dot_trivial(X: CrossedModule) -> bool:
    return bool((X.action.dot == np.arange(X.E.size)[None, :]).all())


def _brute(f: XModMorphism, cap: int) -> np.ndarray:
    nR, nE = f.source.R.size, f.target.E.size
    if nE ** nR > cap:
        raise CapExceeded(f"|E'|^|R| = {nE}^{nR} exceeds brute-force cap {cap}")
    out = []
    chunk = max(1, 2 ** 16 // max(1, nR * nR))
    it = itertools.product(range(nE), repeat=nR)
    while True:
        block = np.array(list(itertools.islice(it, chunk)), dtype=np.int64).reshape(-1, nR)
        if block.size == 0:
            break
        out.append(block[_candidate_mask(f, block)])
    return np.concatenate(out) if out else np.zeros((0, nR), np.int64)


def _linear(f: XModMorphism, cap: int) -> np.ndarray:
    R, Ep = f.source.R, f.target.E
    p, dR, dE = Ep.backend.p, R.backend.d, Ep.backend.d
    if p ** (dR * dE) > cap:
        raise CapExceeded(f"{p}^{dR * dE} linear candidates exceed cap {cap}")
    # all matrices, entries in row-major order, each a candidate table
    Ms = np.indices((p,) * (dR * dE)).reshape(dR * dE, -1).T.reshape(-1, dE, dR)
    S = Ep.vec_to_index(np.einsum("kij,rj->kri", Ms, R.coords))
    return S[_candidate_mask(f, S)]


def _by_generators(f: XModMorphism, cap: int) -> np.ndarray:
    R, Ep = f.source.R, f.target.E
    gens = core.generators(R)
    if Ep.size ** len(gens) > cap:
        raise CapExceeded(f"{Ep.size}^{len(gens)} generator assignments exceed cap {cap}")
    rules = _DerivationRules(f)
    rows = []
    for images in itertools.product(range(Ep.size), repeat=len(gens)):
        seed = {R.zero: Ep.zero}
        if any(seed.get(g, v) != v for g, v in zip(gens, images)):
            continue
        seed.update(zip(gens, images))
        val = core.propagate(R, seed, rules)
        if val is None or len(val) != R.size:
            continue
        rows.append([val[i] for i in range(R.size)])
    S = np.array(rows, dtype=np.int64).reshape(-1, R.size)
    return S[_candidate_mask(f, S)] if len(S) else S


def _sorted_rows(S: np.ndarray) -> np.ndarray:
    if len(S) == 0:
        return S
    order = np.lexsort(S.T[::-1])
    return np.unique(S[order], axis=0)


def enumerate_derivations(f: XModMorphism, strategy: str = "auto",
                          cap: int = core.BRUTE_CAP) -> list[Derivation]:
    """Every derivation attached to ``f``, ordered lexicographically by table.

    Strategies: ``brute`` tries every map ``R -> E'``; ``generators``
    assigns values on generators of ``R`` and propagates the laws;
    ``linear`` tries every F_p-linear map (vector objects only).  ``auto``
    uses ``linear`` for vector objects whose target has a trivial dot action
    (there the additive law forces linearity) and cross-checks it against
    ``brute`` whenever that is within the cap; otherwise ``generators``.
    """
    _refuse_precrossed(f)
    core.require_same_signature(f.source.R, f.target.E)
    R, Ep = f.source.R, f.target.E
    if strategy == "auto":
        if R.is_vector and Ep.is_vector and _dot_trivial(f.target):
            S = _linear(f, cap)
            if Ep.size ** R.size <= cap:
                full = _brute(f, cap)
                if not np.array_equal(_sorted_rows(S), _sorted_rows(full)):
                    raise InternalTheoremViolation("linear and brute-force derivation sets differ")
        else:
            S = _by_generators(f, cap)
    elif strategy == "brute":
        S = _brute(f, cap)
    elif strategy == "generators":
        S = _by_generators(f, cap)
    elif strategy == "linear":
        if not (R.is_vector and Ep.is_vector):
            raise XmodkitError("the linear strategy needs vector-backed objects")
        S = _linear(f, cap)
    else:
        raise XmodkitError(f"unknown strategy {strategy!r}")
    return [Derivation(f, core._frozen(row)) for row in _sorted_rows(S)]


# ---------------------------------------------------------------------------
# the groupoid

def are_homotopic(f: XModMorphism, g: XModMorphism,
                  cap: int = core.BRUTE_CAP) -> Derivation | None:
    """A derivation connecting ``f`` to ``g``, or None."""
    if f.target.precrossed_only:
        raise PrecrossedTarget("derivations need XM2 in the target; it is declared precrossed")
    for d in enumerate_derivations(f, cap=cap):
        g1, g0 = target_maps(d)
        if np.array_equal(g1, g.f1) and np.array_equal(g0, g.f0):
            return d
    return None


def are_homotopy_equivalent(X: CrossedModule, Y: CrossedModule, cap: int = core.BRUTE_CAP):
    """``(f, g, d_gf, d_fg)`` with ``f: X -> Y``, ``g: Y -> X``, ``d_gf``
    connecting ``g after f`` to the identity of X and ``d_fg`` connecting
    ``f after g`` to the identity of Y; None when no such pair exists.
    """
    fs = list(enumerate_morphisms(X, Y, cap))
    gs = list(enumerate_morphisms(Y, X, cap))
    if xmod_equal(X, Y):
        # try the identity first so X is reported equivalent to itself by (id, id)
        ident = identity_morphism(X)
        fs.sort(key=lambda m: not morphisms_equal(m, ident))
        gs.sort(key=lambda m: not morphisms_equal(m, ident))
    idX, idY = identity_morphism(X), identity_morphism(Y)
    for f in fs:
        for g in gs:
            d_gf = are_homotopic(compose_morphisms(g, f), idX, cap)
            if d_gf is None:
                continue
            d_fg = are_homotopic(compose_morphisms(f, g), idY, cap)
            if d_fg is not None:
                return f, g, d_gf, d_fg
    return None


@dataclass
class HomGroupoid:
    """Objects: morphisms ``X -> Y``.  Arrows: derivations between them."""
    objects: list
    arrows: dict

    def arrows_from(self, k: int) -> list[Derivation]:
        return self.arrows[k]

    def target_index(self, d: Derivation) -> int:
        g = homotopy_target(d)
        for k, m in enumerate(self.objects):
            if np.array_equal(m.f1, g.f1) and np.array_equal(m.f0, g.f0):
                return k
        raise InternalTheoremViolation("homotopy target is not among the enumerated morphisms")


def hom_groupoid(X: CrossedModule, Y: CrossedModule, cap: int = core.BRUTE_CAP) -> HomGroupoid:
    objects = list(enumerate_morphisms(X, Y, cap))
    return HomGroupoid(objects, {k: enumerate_derivations(m, cap=cap) for k, m in enumerate(objects)})
