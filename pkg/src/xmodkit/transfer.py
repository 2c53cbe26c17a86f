"""From simplicial objects to crossed modules and back, and the homotopy transfer.

``x1_object`` turns a simplicial object whose Moore complex has length one
into the crossed module ``Ker d_0 -> A_0``; ``nerve`` goes the other way.
``zeta`` sends a simplicial homotopy to a derivation ``-s_0 f_0 + h_0^0``
and checks that it connects the transferred maps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import weakref

import numpy as np

from . import core
from .actions import DerivedAction, semidirect_product
from .errors import (CapExceeded, InternalTheoremViolation, MooreTooLong, NotInKernel,
                     NotSimplicial, PrecrossedTarget, RestrictionEscapesKernel,
                     SourceTargetMismatch, XmodkitError)
from .homotopy import (Derivation, homotopy_target, target_maps, validate_derivation)
from .report import ValidationReport, check_grid
from .simplicial import (MAX_LEVEL, SimplicialHomotopy, SimplicialMap,
                         TruncatedSimplicialObject, compose_simplicial_maps, moore_complex,
                         simplicial_maps_equal, validate_simplicial,
                         validate_simplicial_homotopy, validate_simplicial_map)
from .xmod import (CrossedModule, XModMorphism, compose_morphisms, identity_morphism,
                   validate_crossed_module, validate_xmod_morphism)


# ---------------------------------------------------------------------------
# X_1

def _pull(values: np.ndarray, back: dict, what: str) -> np.ndarray:
    out = np.empty(values.shape, dtype=np.int64)
    for pos, v in np.ndenumerate(values):
        if int(v) not in back:
            raise NotInKernel(f"{what} leaves Ker d_0 at {pos}")
        out[pos] = back[int(v)]
    return out


# simplicial objects are immutable, so X_1 is computed (and checked) once per object
_X1_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def x1_object(S: TruncatedSimplicialObject, check: bool = True) -> CrossedModule:
    """``Ker d_0 -> A_0`` with ``r.e = s_0(r) + e - s_0(r)`` and
    ``r * e = s_0(r) * e``, ``e * r = e * s_0(r)``."""
    cached = _X1_CACHE.get(S)
    if cached is not None and (cached[1] or not check):
        return cached[0]
    X = _x1_object(S, check)
    _X1_CACHE[S] = (X, check)
    return X


def _x1_object(S: TruncatedSimplicialObject, check: bool) -> CrossedModule:
    if S.N < 1:
        raise NotSimplicial("X_1 needs levels 0 and 1")
    if check:
        rep = validate_simplicial(S, max_witnesses=1)
        if not rep.ok:
            raise NotSimplicial(f"not a simplicial object: {rep.failed()[:3]}")
    M = moore_complex(S)
    for i in range(2, S.N + 1):
        if M.groups[i][0].size != 1:
            raise MooreTooLong(f"NA_{i} has {M.groups[i][0].size} elements; length must be 1")
    R, A1 = S.levels[0], S.levels[1]
    E, emb = M.groups[1]
    back = {int(e): k for k, e in enumerate(emb.tolist())}
    s0 = S.s(0, 0)
    r = s0[:, None]
    e = emb[None, :]
    dot = _pull(A1.add_table[A1.add_table[r, e], A1.neg_table[r]], back, "s0(r) + e - s0(r)")
    left = {s: _pull(A1.star_table(s)[r, e], back, f"s0(r) {s} e") for s in R.signature.star_ops}
    right = {s: _pull(A1.star_table(s)[e, r], back, f"e {s} s0(r)") for s in R.signature.star_ops}
    act = DerivedAction.build(R, E, dot, left, right)
    X = CrossedModule.build(E, R, S.d(1, 1)[emb], act, name="X1")
    if check:
        rep = validate_crossed_module(X, max_witnesses=1)
        if not rep.ok:
            raise InternalTheoremViolation(
                f"X_1 of a valid simplicial object is not a crossed module: {rep.failed()[:3]}")
    return X


def x1_map(f: SimplicialMap, check: bool = True) -> XModMorphism:
    """``(f_1 restricted to Ker d_0, f_0)``."""
    if check:
        rep = validate_simplicial_map(f, max_witnesses=1)
        if not rep.ok:
            raise NotSimplicial(f"not a simplicial map: {rep.failed()[:3]}")
    X, Y = x1_object(f.source, check), x1_object(f.target, check)
    embX, embY = _kernel_embed(f.source), _kernel_embed(f.target)
    back = {int(e): k for k, e in enumerate(embY.tolist())}
    images = f.maps[1][embX]
    try:
        f1 = np.array([back[int(v)] for v in images], dtype=np.int64)
    except KeyError:
        raise RestrictionEscapesKernel("f_1 does not map Ker d_0 into Ker d_0") from None
    m = XModMorphism.build(X, Y, f1, f.maps[0])
    if check:
        rep = validate_xmod_morphism(m, max_witnesses=1)
        if not rep.ok:
            raise InternalTheoremViolation(f"X_1 of a simplicial map is not a morphism: {rep.failed()}")
    return m


def _kernel_embed(S: TruncatedSimplicialObject) -> np.ndarray:
    return np.flatnonzero(S.d(1, 0) == S.levels[0].zero)


# ---------------------------------------------------------------------------
# nerve

def _dims(X: CrossedModule, n: int) -> tuple:
    return (X.E.size,) * n + (X.R.size,)


def nerve(X: CrossedModule, N: int = 2, cap: int | None = None) -> TruncatedSimplicialObject:
    """Levels ``A_n`` on tuples ``(e_n, ..., e_1, r)``, built as ``E x| A_(n-1)``
    with ``A_(n-1)`` acting through ``tau(e, x) = d(e) + tau(x)``.

    ``d_0`` drops ``e_n``; ``d_i`` (``0 < i < n``) adds the neighbouring
    entries ``e_(n-i+1) + e_(n-i)``; ``d_n`` replaces ``(e_1, r)`` by
    ``d(e_1) + r``; ``s_j`` inserts a zero at position ``j``.
    """
    if X.precrossed_only:
        raise PrecrossedTarget("the nerve needs XM2; the input is declared precrossed")
    if not 0 <= N <= MAX_LEVEL:
        raise XmodkitError(f"nerve level {N} outside 0..{MAX_LEVEL}")
    cap = core.ENUM_CAP if cap is None else cap
    E, R = X.E, X.R
    if E.size ** N * R.size > cap:
        raise CapExceeded(f"|E|^{N} |R| = {E.size ** N * R.size} exceeds cap {cap}")
    levels = [R]
    tau = np.arange(R.size)
    for n in range(1, N + 1):
        prev = levels[-1]
        dot = X.action.dot[tau]
        left = {s: X.action.star_left[s][tau] for s in R.signature.star_ops}
        right = {s: X.action.star_right[s][tau] for s in R.signature.star_ops}
        A = semidirect_product(DerivedAction.build(prev, E, dot, left, right), cap)
        levels.append(A)
        # tau on the new level: (e, x) -> d(e) + tau(x)
        ie, ix = np.divmod(np.arange(A.size), prev.size)
        tau = R.add_table[X.boundary[ie], tau[ix]]
    faces, degens = [()], []
    for n in range(1, N + 1):
        coords = np.array(np.unravel_index(np.arange(levels[n].size), _dims(X, n)))
        row = []
        for i in range(n + 1):
            if i == 0:
                new = coords[1:]
            elif i < n:
                merged = E.add_table[coords[i - 1], coords[i]]
                new = np.concatenate([coords[:i - 1], merged[None], coords[i + 1:]])
            else:
                last = R.add_table[X.boundary[coords[n - 1]], coords[n]]
                new = np.concatenate([coords[:n - 1], last[None]])
            row.append(np.ravel_multi_index(tuple(new), _dims(X, n - 1)))
        faces.append(row)
    for n in range(N):
        coords = np.array(np.unravel_index(np.arange(levels[n].size), _dims(X, n)))
        zero = np.full((1, coords.shape[1]), E.zero)
        row = [np.ravel_multi_index(tuple(np.concatenate([coords[:j], zero, coords[j:]])),
                                    _dims(X, n + 1)) for j in range(n + 1)]
        degens.append(row)
    return TruncatedSimplicialObject.build(levels, faces, degens)


def nerve_map(m: XModMorphism, N: int = 2, source=None, target=None) -> SimplicialMap:
    """``f_1`` on every ``e`` entry and ``f_0`` on ``r``."""
    X, Y = m.source, m.target
    A = source if source is not None else nerve(X, N)
    B = target if target is not None else nerve(Y, N)
    maps = []
    for n in range(N + 1):
        coords = np.array(np.unravel_index(np.arange(A.levels[n].size), _dims(X, n)))
        out = np.concatenate([m.f1[coords[:n]], m.f0[coords[n:]]])
        maps.append(np.ravel_multi_index(tuple(out), _dims(Y, n)))
    return SimplicialMap.build(A, B, maps)


def lift_derivation(d: Derivation, source=None, target=None) -> SimplicialHomotopy:
    """The simplicial homotopy on nerves (N = 2) induced by a derivation.

    With ``g`` the homotopy target and ``phi(r) = f0(r).s(r)``::

        h_0^0(r)    = (phi(r), f0(r))
        h_0^1(e, r) = (phi(d(e) + r), f1(e), f0(r))
        h_1^1(e, r) = (g1(e), phi(r), f0(r))
    """
    f = d.f
    X, Y = f.source, f.target
    g = homotopy_target(d)
    A = source if source is not None else nerve(X, 2)
    B = target if target is not None else nerve(Y, 2)
    F, G = nerve_map(f, 2, A, B), nerve_map(g, 2, A, B)
    phi = Y.action.dot[f.f0, np.asarray(d.s)]
    f0 = f.f0
    h00 = np.ravel_multi_index((phi, f0), _dims(Y, 1))
    e, r = np.unravel_index(np.arange(A.levels[1].size), _dims(X, 1))
    tau = X.R.add_table[X.boundary[e], r]
    h01 = np.ravel_multi_index((phi[tau], f.f1[e], f0[r]), _dims(Y, 2))
    h11 = np.ravel_multi_index((g.f1[e], phi[r], f0[r]), _dims(Y, 2))
    return SimplicialHomotopy.build(F, G, {(0, 0): h00, (1, 0): h01, (1, 1): h11})


# ---------------------------------------------------------------------------
# zeta

@dataclass
class TransferReport:
    derivation: Derivation | None
    image_in_kernel: bool
    g_matches: bool
    law_witnesses: list = field(default_factory=list)
    report: ValidationReport = field(default_factory=ValidationReport)

    @property
    def success(self) -> bool:
        return self.image_in_kernel and self.g_matches and not self.law_witnesses

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "image_in_kernel": self.image_in_kernel,
            "g_matches": self.g_matches,
            "s": None if self.derivation is None else self.derivation.s.tolist(),
            "law_witnesses": [v.to_dict() for v in self.law_witnesses],
            "report": self.report.to_dict(),
        }


def zeta(H: SimplicialHomotopy, check: bool = True) -> TransferReport:
    """Transfer ``H: f ~ g`` to a derivation from ``X_1(f)`` to ``X_1(g)``.

    Besides the three outcome checks the report records the intermediate
    identities: ``d' s = -f0 + g0``, ``s d = -f1 + g1`` on ``Ker d_0`` and
    that ``(-s0 d0 h0 + h0 - h1 + s1 d0 h0)(e)`` lies in ``Ker d_0`` and
    ``Ker d_1`` at level 2.
    """
    if check:
        rep = validate_simplicial_homotopy(H, max_witnesses=1)
        if not rep.ok:
            raise NotSimplicial(f"not a simplicial homotopy: {rep.failed()[:3]}")
    f, g = H.f, H.g
    A, B = f.source, f.target
    F, G = x1_map(f, check), x1_map(g, check)
    A0, B1, B0 = A.levels[0], B.levels[1], B.levels[0]
    report = ValidationReport()
    s0f0 = B.s(0, 0)[f.maps[0]]
    sval = B1.add_table[B1.neg_table[s0f0], H.h[(0, 0)]]

    a_dom = (np.arange(A0.size), A0.ref)
    in_kernel = check_grid(report, "image in Ker d_0", {"a": a_dom},
                           lambda a: (B.d(1, 0)[sval[a]], np.full(a.shape, B0.zero)),
                           out_ref=B0.ref)
    if not in_kernel:
        return TransferReport(None, False, False, list(report.violations), report)
    embB = _kernel_embed(B)
    back = {int(e): k for k, e in enumerate(embB.tolist())}
    s = core._frozen([back[int(v)] for v in sval])
    d = Derivation(F, s)

    laws = validate_derivation(d)
    report.extend(laws, "derivation: ")
    g1, g0 = target_maps(d)
    Y = F.target
    report.add_check("homotopy target equals X_1(g)")
    g_matches = bool(np.array_equal(g1, G.f1) and np.array_equal(g0, G.f0))
    if not g_matches:
        bad0 = np.flatnonzero(g0 != G.f0)
        bad1 = np.flatnonzero(g1 != G.f1)
        if bad0.size:
            k = int(bad0[0])
            report.fail("homotopy target equals X_1(g)", {"r": A0.ref(k), "component": "g0"},
                        Y.R.ref(int(g0[k])), Y.R.ref(int(G.f0[k])))
        else:
            k = int(bad1[0])
            report.fail("homotopy target equals X_1(g)", {"e": F.source.E.ref(k), "component": "g1"},
                        Y.E.ref(int(g1[k])), Y.E.ref(int(G.f1[k])))

    # intermediate identities
    X = F.source
    radd, rneg = Y.R.add_table, Y.R.neg_table
    eadd, eneg = Y.E.add_table, Y.E.neg_table
    r_dom = (np.arange(X.R.size), X.R.ref)
    e_dom = (np.arange(X.E.size), X.E.ref)
    check_grid(report, "d' s = -f0 + g0", {"r": r_dom},
               lambda r: (Y.boundary[s[r]], radd[rneg[F.f0[r]], G.f0[r]]), out_ref=Y.R.ref)
    check_grid(report, "s d = -f1 + g1", {"e": e_dom},
               lambda e: (s[X.boundary[e]], eadd[eneg[F.f1[e]], G.f1[e]]), out_ref=Y.E.ref)
    if A.N >= 2 and B.N >= 2:
        B2 = B.levels[2]
        a2 = B2.add_table
        n2 = B2.neg_table
        embA = _kernel_embed(A)
        h0, h1 = H.h[(1, 0)][embA], H.h[(1, 1)][embA]
        d0h0 = B.d(2, 0)[h0]
        t1 = n2[B.s(1, 0)[d0h0]]
        t4 = B.s(1, 1)[d0h0]
        x = a2[a2[a2[t1, h0], n2[h1]], t4]
        for i in (0, 1):
            check_grid(report, f"level-2 element in Ker d_{i}", {"e": e_dom},
                       lambda e: (B.d(2, i)[x[e]], np.full(e.shape, B1.zero)), out_ref=B1.ref)
    else:
        report.not_checked.append("level-2 kernel memberships (need N >= 2)")
    law_witnesses = [v for v in report.violations if v.law.startswith("derivation: ")]
    return TransferReport(d, True, g_matches, law_witnesses, report)


def check_main2(A: TruncatedSimplicialObject, B: TruncatedSimplicialObject,
                f: SimplicialMap, g: SimplicialMap,
                H1: SimplicialHomotopy, H2: SimplicialHomotopy) -> bool:
    """``H1: f g ~ id_B`` and ``H2: g f ~ id_A`` transfer to a homotopy
    equivalence between ``X_1(A)`` and ``X_1(B)``."""
    if f.source is not A or f.target is not B or g.source is not B or g.target is not A:
        raise SourceTargetMismatch("f must go A -> B and g must go B -> A")
    fg, gf = compose_simplicial_maps(f, g), compose_simplicial_maps(g, f)
    if not (simplicial_maps_equal(H1.f, fg) and simplicial_maps_equal(H2.f, gf)):
        raise SourceTargetMismatch("H1 must start at f after g and H2 at g after f")
    idA = [core.identity_map(L) for L in A.levels]
    idB = [core.identity_map(L) for L in B.levels]
    if not (all(np.array_equal(a, b) for a, b in zip(H1.g.maps, idB))
            and all(np.array_equal(a, b) for a, b in zip(H2.g.maps, idA))):
        raise SourceTargetMismatch("H1 and H2 must end at identities")
    t1, t2 = zeta(H1), zeta(H2)
    if not (t1.success and t2.success):
        return False
    Xf, Xg = x1_map(f), x1_map(g)
    # functoriality: the transferred derivations sit on X1(f) X1(g) and X1(g) X1(f)
    c1, c2 = compose_morphisms(Xf, Xg), compose_morphisms(Xg, Xf)
    ok = (np.array_equal(c1.f1, t1.derivation.f.f1) and np.array_equal(c1.f0, t1.derivation.f.f0)
          and np.array_equal(c2.f1, t2.derivation.f.f1) and np.array_equal(c2.f0, t2.derivation.f.f0))
    if not ok:
        return False
    e1 = homotopy_target(t1.derivation)
    e2 = homotopy_target(t2.derivation)
    i1, i2 = identity_morphism(x1_object(B)), identity_morphism(x1_object(A))
    return bool(np.array_equal(e1.f1, i1.f1) and np.array_equal(e1.f0, i1.f0)
                and np.array_equal(e2.f1, i2.f1) and np.array_equal(e2.f0, i2.f0))
