"""Truncated simplicial objects, simplicial maps and homotopies, Moore complexes.

Levels run ``0..N``.  ``faces[n][i]`` is ``d_i: A_n -> A_(n-1)`` for
``1 <= n <= N`` (``faces[0]`` is empty) and ``degeneracies[n][j]`` is
``s_j: A_n -> A_(n+1)`` for ``n < N``.  An identity is checked only when every
map it mentions exists within the truncation; the rest are listed in the
report's ``not_checked``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import OmegaGroup
from .errors import InternalTheoremViolation, LevelMismatch
from .report import MAX_WITNESSES, ValidationReport, check_grid

MAX_LEVEL = 4


def _maps(rows, src, dst, label):
    try:
        return tuple(core.as_map(t, src, dst, label) for t in rows)
    except Exception as exc:
        raise LevelMismatch(str(exc)) from None


@dataclass(frozen=True, eq=False)
class TruncatedSimplicialObject:
    levels: tuple
    faces: tuple
    degeneracies: tuple

    @classmethod
    def build(cls, levels, faces, degeneracies):
        levels = tuple(levels)
        N = len(levels) - 1
        if N < 0 or N > MAX_LEVEL:
            raise LevelMismatch(f"truncation level {N} outside 0..{MAX_LEVEL}")
        core.require_same_signature(*levels)
        faces = list(faces)
        if len(faces) == N:
            faces = [()] + faces
        if len(faces) != N + 1 or len(faces[0]) != 0:
            raise LevelMismatch("faces must list d_0..d_n for each level n = 1..N")
        if len(degeneracies) != N:
            raise LevelMismatch("degeneracies must list s_0..s_n for each level n = 0..N-1")
        fs = [()]
        for n in range(1, N + 1):
            if len(faces[n]) != n + 1:
                raise LevelMismatch(f"level {n} needs {n + 1} faces, got {len(faces[n])}")
            fs.append(_maps(faces[n], levels[n], levels[n - 1], f"d at level {n}"))
        ds = []
        for n in range(N):
            if len(degeneracies[n]) != n + 1:
                raise LevelMismatch(f"level {n} needs {n + 1} degeneracies, got {len(degeneracies[n])}")
            ds.append(_maps(degeneracies[n], levels[n], levels[n + 1], f"s at level {n}"))
        return cls(levels, tuple(fs), tuple(ds))

    @property
    def N(self) -> int:
        return len(self.levels) - 1

    def d(self, n: int, i: int) -> np.ndarray:
        """``d_i`` on level ``n``."""
        return self.faces[n][i]

    def s(self, n: int, j: int) -> np.ndarray:
        """``s_j`` on level ``n``."""
        return self.degeneracies[n][j]

    def to_dict(self) -> dict:
        from .io import simplicial_to_dict
        return simplicial_to_dict(self)


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: TruncatedSimplicialObject
    target: TruncatedSimplicialObject
    maps: tuple

    @classmethod
    def build(cls, source, target, maps):
        if source.N != target.N or len(maps) != source.N + 1:
            raise LevelMismatch("a simplicial map needs one component per level of equal-length objects")
        ms = tuple(core.as_map(m, a, b, f"f_{n}")
                   for n, (m, a, b) in enumerate(zip(maps, source.levels, target.levels)))
        return cls(source, target, ms)

    def to_dict(self) -> dict:
        from .io import simplicial_map_to_dict
        return simplicial_map_to_dict(self)


@dataclass(frozen=True, eq=False)
class SimplicialHomotopy:
    """``h[(n, i)]: A_n -> B_(n+1)`` for ``n < N`` and ``0 <= i <= n``."""
    f: SimplicialMap
    g: SimplicialMap
    h: dict = field(default_factory=dict)

    @classmethod
    def build(cls, f, g, h):
        A, B = f.source, f.target
        if g.source is not A and g.source.N != A.N:
            raise LevelMismatch("f and g must share their source")
        need = {(n, i) for n in range(A.N) for i in range(n + 1)}
        if set(h) != need:
            raise LevelMismatch(f"homotopy components must be exactly {sorted(need)}")
        hs = {k: core.as_map(v, A.levels[k[0]], B.levels[k[0] + 1], f"h_{k[1]}^{k[0]}")
              for k, v in h.items()}
        return cls(f, g, hs)

    def to_dict(self) -> dict:
        from .io import simplicial_homotopy_to_dict
        return simplicial_homotopy_to_dict(self)


def compose_simplicial_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """``g after f``."""
    if g.source.N != f.target.N:
        raise LevelMismatch("levels differ")
    return SimplicialMap(f.source, g.target,
                         tuple(core.compose_maps(gm, fm) for gm, fm in zip(g.maps, f.maps)))


def identity_simplicial_map(S: TruncatedSimplicialObject) -> SimplicialMap:
    return SimplicialMap(S, S, tuple(core.identity_map(A) for A in S.levels))


def simplicial_maps_equal(f: SimplicialMap, g: SimplicialMap) -> bool:
    return len(f.maps) == len(g.maps) and all(np.array_equal(a, b) for a, b in zip(f.maps, g.maps))


# ---------------------------------------------------------------------------
# validation

def _eq(report, law, G: OmegaGroup, lhs, rhs, out: OmegaGroup, w):
    """``lhs[x] == rhs[x]`` for every x in G, both given as index tables."""
    check_grid(report, law, {"x": (np.arange(G.size), G.ref)},
               lambda x: (np.asarray(lhs)[x], np.asarray(rhs)[x]), out_ref=out.ref,
               max_witnesses=w)


def validate_simplicial(S: TruncatedSimplicialObject,
                        max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    report = ValidationReport()
    N, A, d, s = S.N, S.levels, S.d, S.s
    c = core.compose_maps
    w = max_witnesses
    for n in range(1, N + 1):
        for i in range(n + 1):
            core.check_morphism(report, A[n], A[n - 1], d(n, i), f"d_{i} at level {n}", w)
    for n in range(N):
        for j in range(n + 1):
            core.check_morphism(report, A[n], A[n + 1], s(n, j), f"s_{j} at level {n}", w)

    # (i) d_i d_j = d_(j-1) d_i, i < j, on A_n
    for n in range(2, N + 1):
        for j in range(n + 1):
            for i in range(j):
                _eq(report, f"(i) d_i d_j = d_(j-1) d_i [n={n}, i={i}, j={j}]", A[n],
                    c(d(n - 1, i), d(n, j)), c(d(n - 1, j - 1), d(n, i)), A[n - 2], w)
    if N < 2:
        report.not_checked.append("(i) d_i d_j = d_(j-1) d_i (needs N >= 2)")
    # (ii) s_i s_j = s_(j+1) s_i, i <= j, on A_n
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                _eq(report, f"(ii) s_i s_j = s_(j+1) s_i [n={n}, i={i}, j={j}]", A[n],
                    c(s(n + 1, i), s(n, j)), c(s(n + 1, j + 1), s(n, i)), A[n + 2], w)
    if N < 2:
        report.not_checked.append("(ii) s_i s_j = s_(j+1) s_i (needs N >= 2)")
    # (iii) faces after degeneracies, on A_n with n < N
    for n in range(N):
        for j in range(n + 1):
            ident = core.identity_map(A[n])
            _eq(report, f"(iii) d_j s_j = id [n={n}, j={j}]", A[n],
                c(d(n + 1, j), s(n, j)), ident, A[n], w)
            _eq(report, f"(iii) d_(j+1) s_j = id [n={n}, j={j}]", A[n],
                c(d(n + 1, j + 1), s(n, j)), ident, A[n], w)
            if n == 0:
                continue
            for i in range(j):
                _eq(report, f"(iii) d_i s_j = s_(j-1) d_i [n={n}, i={i}, j={j}]", A[n],
                    c(d(n + 1, i), s(n, j)), c(s(n - 1, j - 1), d(n, i)), A[n], w)
            for i in range(j + 2, n + 2):
                _eq(report, f"(iii) d_i s_j = s_j d_(i-1) [n={n}, i={i}, j={j}]", A[n],
                    c(d(n + 1, i), s(n, j)), c(s(n - 1, j), d(n, i - 1)), A[n], w)
    if N < 2:
        report.not_checked.append("(iii) mixed d_i s_j identities (need N >= 2)")
    return report


def validate_simplicial_map(m: SimplicialMap, max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    A, B = m.source, m.target
    if A.N != B.N or len(m.maps) != A.N + 1:
        raise LevelMismatch("source and target truncation levels differ")
    core.require_same_signature(A.levels[0], B.levels[0])
    report = ValidationReport()
    c, f, w = core.compose_maps, m.maps, max_witnesses
    for n in range(A.N + 1):
        core.check_morphism(report, A.levels[n], B.levels[n], f[n], f"f_{n}", w)
    for n in range(1, A.N + 1):
        for i in range(n + 1):
            _eq(report, f"f d_i = d_i f [n={n}, i={i}]", A.levels[n],
                c(f[n - 1], A.d(n, i)), c(B.d(n, i), f[n]), B.levels[n - 1], w)
    for n in range(A.N):
        for j in range(n + 1):
            _eq(report, f"f s_j = s_j f [n={n}, j={j}]", A.levels[n],
                c(f[n + 1], A.s(n, j)), c(B.s(n, j), f[n]), B.levels[n + 1], w)
    return report


def validate_simplicial_homotopy(H: SimplicialHomotopy,
                                 max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    """The homotopy identities, at every level where both sides exist."""
    f, g, h = H.f, H.g, H.h
    A, B = f.source, f.target
    if g.source.N != A.N or g.target.N != B.N or A.N != B.N:
        raise LevelMismatch("f and g must run between objects of the same truncation level")
    report = ValidationReport()
    N, c, w = A.N, core.compose_maps, max_witnesses
    Al, Bl = A.levels, B.levels
    for (n, i), t in sorted(h.items()):
        core.check_morphism(report, Al[n], Bl[n + 1], t, f"h_{i} at level {n}", w)
    for n in range(N):
        _eq(report, f"(i) d_0 h_0 = f [n={n}]", Al[n], c(B.d(n + 1, 0), h[(n, 0)]),
            f.maps[n], Bl[n], w)
        _eq(report, f"(i) d_(n+1) h_n = g [n={n}]", Al[n], c(B.d(n + 1, n + 1), h[(n, n)]),
            g.maps[n], Bl[n], w)
        for j in range(n + 1):
            if n >= 1:
                for i in range(j):
                    _eq(report, f"(ii) d_i h_j = h_(j-1) d_i [n={n}, i={i}, j={j}]", Al[n],
                        c(B.d(n + 1, i), h[(n, j)]), c(h[(n - 1, j - 1)], A.d(n, i)), Bl[n], w)
                for i in range(j + 2, n + 2):
                    _eq(report, f"(ii) d_i h_j = h_j d_(i-1) [n={n}, i={i}, j={j}]", Al[n],
                        c(B.d(n + 1, i), h[(n, j)]), c(h[(n - 1, j)], A.d(n, i - 1)), Bl[n], w)
            if j + 1 <= n:
                _eq(report, f"(ii) d_(j+1) h_(j+1) = d_(j+1) h_j [n={n}, j={j}]", Al[n],
                    c(B.d(n + 1, j + 1), h[(n, j + 1)]), c(B.d(n + 1, j + 1), h[(n, j)]),
                    Bl[n], w)
            if n + 2 <= N:
                for i in range(j + 1):
                    _eq(report, f"(iii) s_i h_j = h_(j+1) s_i [n={n}, i={i}, j={j}]", Al[n],
                        c(B.s(n + 1, i), h[(n, j)]), c(h[(n + 1, j + 1)], A.s(n, i)),
                        Bl[n + 2], w)
                for i in range(j + 1, n + 2):
                    _eq(report, f"(iii) s_i h_j = h_j s_(i-1) [n={n}, i={i}, j={j}]", Al[n],
                        c(B.s(n + 1, i), h[(n, j)]), c(h[(n + 1, j)], A.s(n, i - 1)),
                        Bl[n + 2], w)
    if N < 2:
        report.not_checked.append("(iii) s_i h_j identities (need N >= 2)")
    return report


# ---------------------------------------------------------------------------
# Moore complex

@dataclass(frozen=True, eq=False)
class MooreComplex:
    """``groups[n] = (NA_n, embed_n)``; ``boundaries[n]: NA_n -> NA_(n-1)``
    as index tables between subobjects (``boundaries[0]`` is None)."""
    groups: tuple
    boundaries: tuple
    report: ValidationReport

    def sizes(self) -> list[int]:
        return [H.size for H, _ in self.groups]


def moore_complex(S: TruncatedSimplicialObject) -> MooreComplex:
    """Kernels by enumeration; closure is checked while restricting, and the
    boundaries are checked to land in the previous term and to compose to 0."""
    report = ValidationReport()
    groups, boundaries = [], [None]
    for n, A in enumerate(S.levels):
        members = np.ones(A.size, dtype=bool)
        for i in range(n):
            members &= S.d(n, i) == S.levels[n - 1].zero
        elements = np.flatnonzero(members).tolist()
        report.add_check(f"NA_{n} closed under all operations")
        groups.append(core.subobject(A, elements, name=f"NA_{n}"))
    for n in range(1, S.N + 1):
        H, emb = groups[n]
        _, prev = groups[n - 1]
        pos = {int(e): k for k, e in enumerate(prev.tolist())}
        image = S.d(n, n)[emb].tolist()
        law = f"d_{n} maps NA_{n} into NA_{n - 1}"
        report.add_check(law)
        outside = [x for x in image if x not in pos]
        if outside:
            report.fail(law, {}, outside[0], "outside NA")
            raise InternalTheoremViolation(f"{law} fails on a simplicial input; invalid input or a bug")
        boundaries.append(core._frozen([pos[x] for x in image]))
    for n in range(2, S.N + 1):
        law = f"boundary {n - 1} after boundary {n} = 0"
        report.add_check(law)
        comp = boundaries[n - 1][boundaries[n]]
        zero = groups[n - 2][0].zero
        if (comp != zero).any():
            report.fail(law, {}, int(comp[comp != zero][0]), zero)
    return MooreComplex(tuple(groups), tuple(boundaries), report)


def moore_length_at_most(S: TruncatedSimplicialObject, n: int) -> bool:
    """``NA_i = {0}`` for every ``n < i <= N``."""
    M = moore_complex(S)
    return all(M.groups[i][0].size == 1 for i in range(n + 1, S.N + 1))


# ---------------------------------------------------------------------------
# constant objects

def constant_simplicial(G: OmegaGroup, N: int = 2) -> TruncatedSimplicialObject:
    ident = core.identity_map(G)
    return TruncatedSimplicialObject.build(
        [G] * (N + 1),
        [()] + [[ident] * (n + 1) for n in range(1, N + 1)],
        [[ident] * (n + 1) for n in range(N)])


def constant_homotopy(f: SimplicialMap) -> SimplicialHomotopy:
    """``h_i = s_i f`` on every level: a homotopy from ``f`` to ``f``."""
    A, B = f.source, f.target
    h = {(n, i): core.compose_maps(B.s(n, i), f.maps[n]) for n in range(A.N) for i in range(n + 1)}
    return SimplicialHomotopy(f, f, h)
