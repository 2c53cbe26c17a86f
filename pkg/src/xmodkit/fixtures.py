"""Small named objects used by tests, examples and the CLI."""
from __future__ import annotations

import itertools

import numpy as np

from . import core
from .actions import DerivedAction, conjugation_action, trivial_action
from .core import OmegaGroup, Signature
from .xmod import CrossedModule

GROUP = Signature.preset("group")


# groups ------------------------------------------------------------------

def cyclic(n: int, signature: Signature = GROUP, name: str | None = None) -> OmegaGroup:
    i = np.arange(n)
    add = (i[:, None] + i[None, :]) % n
    return OmegaGroup.from_tables(signature, add, (-i) % n, 0, name=name or f"Z{n}")


def klein(signature: Signature = GROUP) -> OmegaGroup:
    i = np.arange(4)
    return OmegaGroup.from_tables(signature, i[:, None] ^ i[None, :], i, 0, name="Klein")


S3_ELEMENTS = list(itertools.permutations(range(3)))


def s3() -> OmegaGroup:
    """Permutations of {0,1,2} in lexicographic order; ``p + q`` is ``p`` after ``q``."""
    idx = {p: k for k, p in enumerate(S3_ELEMENTS)}
    add = [[idx[tuple(p[q[x]] for x in range(3))] for q in S3_ELEMENTS] for p in S3_ELEMENTS]
    neg = [idx[tuple(sorted(range(3), key=lambda x: p[x]))] for p in S3_ELEMENTS]
    return OmegaGroup.from_tables(GROUP, add, neg, 0, name="S3")


def sign_map() -> np.ndarray:
    """S3 -> Z2, 1 on transpositions."""
    def parity(p):
        return sum(1 for a, b in itertools.combinations(range(3), 2) if p[a] > p[b]) % 2
    return core._frozen([parity(p) for p in S3_ELEMENTS])


def trivial_group(signature: Signature = GROUP) -> OmegaGroup:
    stars = {s: [[0]] for s in signature.star_ops}
    unary = {w: [0] for w in signature.unary_ops}
    return OmegaGroup.from_tables(signature, [[0]], [0], 0, stars, unary, name="0")


# crossed modules ----------------------------------------------------------

def id_xmod(G: OmegaGroup, name: str | None = None) -> CrossedModule:
    """``id: G -> G`` with the conjugation action."""
    return CrossedModule.build(G, G, core.identity_map(G), conjugation_action(G),
                               name=name or f"id({G.name})")


def zero_xmod(G: OmegaGroup, name: str | None = None) -> CrossedModule:
    """``0: G -> G`` with the trivial action (a crossed module when G is abelian)."""
    return CrossedModule.build(G, G, core.zero_map(G, G), trivial_action(G, G),
                               name=name or f"0({G.name})")


def trivial_xmod(signature: Signature = GROUP) -> CrossedModule:
    T = trivial_group(signature)
    return CrossedModule.build(T, T, [0], trivial_action(T, T), name="0->0")


def pull_back_values(values: np.ndarray, embed) -> np.ndarray:
    """Translate parent indices into subobject indices; KeyError if one escapes."""
    back = {int(e): i for i, e in enumerate(np.asarray(embed).tolist())}
    return np.vectorize(lambda v: back[int(v)], otypes=[np.int64])(values)


def inclusion_xmod(R: OmegaGroup, E: OmegaGroup, embed, name: str | None = None) -> CrossedModule:
    """A normal subobject ``E`` of ``R`` (via ``embed``) acted on by conjugation."""
    emb = np.asarray(embed)
    r = np.arange(R.size)[:, None]
    e = emb[None, :]
    dot = pull_back_values(R.add_table[R.add_table[r, e], R.neg_table[r]], emb)
    left = {s: pull_back_values(R.star_table(s)[r, e], emb) for s in R.signature.star_ops}
    right = {s: pull_back_values(R.star_table(s)[e, r], emb) for s in R.signature.star_ops}
    act = DerivedAction.build(R, E, dot, left, right)
    return CrossedModule.build(E, R, emb, act, name=name)


def a3_in_s3() -> CrossedModule:
    S = s3()
    even = [i for i, v in enumerate(sign_map().tolist()) if v == 0]
    A3, emb = core.subobject(S, even, name="A3")
    return inclusion_xmod(S, A3, emb, name="A3<S3")


def z3_sign_s3() -> CrossedModule:
    """``0: Z3 -> S3`` with odd permutations acting by negation."""
    E, S = cyclic(3), s3()
    sg = sign_map()
    e = np.arange(3)
    dot = np.where(sg[:, None] == 1, (-e[None, :]) % 3, e[None, :])
    return CrossedModule.build(E, S, core.zero_map(E, S), DerivedAction.build(S, E, dot),
                               name="Z3-0->S3")


def z4_mod2() -> CrossedModule:
    E, R = cyclic(4), cyclic(2)
    return CrossedModule.build(E, R, np.arange(4) % 2, trivial_action(R, E), name="Z4->Z2")


def sign_precrossed(flag: bool = True) -> CrossedModule:
    """``sign: S3 -> Z2`` with the trivial action: XM1 holds, XM2 does not.

    With ``flag=False`` the failure of XM2 is not declared, which is the
    input the homotopy constructions must catch.
    """
    S, Z = s3(), cyclic(2)
    return CrossedModule.build(S, Z, sign_map(), trivial_action(Z, S),
                               precrossed_only=flag, name="sign:S3->Z2")


# algebras over F_p --------------------------------------------------------

def _tensor(d: int, products: dict) -> np.ndarray:
    C = np.zeros((d, d, d), dtype=np.int64)
    for (a, b), vec in products.items():
        C[a, b] = vec
    return C


def dual_numbers(p: int = 2) -> OmegaGroup:
    """``F_p[x]/(x^2)`` with basis (1, x)."""
    C = _tensor(2, {(0, 0): [1, 0], (0, 1): [0, 1], (1, 0): [0, 1]})
    return OmegaGroup.from_vectors(Signature.preset("assoc", p), p, 2, {"mul": C},
                                   name=f"F{p}[x]/(x^2)")


def triangular(p: int = 3) -> OmegaGroup:
    """Basis (e, n) with ee = e, en = n, ne = nn = 0: noncommutative."""
    C = _tensor(2, {(0, 0): [1, 0], (0, 1): [0, 1]})
    return OmegaGroup.from_vectors(Signature.preset("assoc", p), p, 2, {"mul": C},
                                   name=f"T{p}")


def null_algebra(p: int, d: int, kind: str = "assoc") -> OmegaGroup:
    sig = Signature.preset(kind, p)
    zero = np.zeros((d, d, d), dtype=np.int64)
    return OmegaGroup.from_vectors(sig, p, d, {s: zero for s in sig.star_ops},
                                   name=f"F{p}^{d}({kind}, null)")


def triangular_ideal(p: int = 3) -> tuple[OmegaGroup, np.ndarray]:
    """``span{n}`` inside :func:`triangular` and its index embedding."""
    T = triangular(p)
    N = null_algebra(p, 1)
    emb = core.matrix_map(N, T, [[0], [1]])
    return N, emb


def ideal_xmod(p: int = 3) -> CrossedModule:
    N, emb = triangular_ideal(p)
    return inclusion_xmod(triangular(p), N, emb, name=f"span(n)<T{p}")


def zero_boundary_algebra_xmod(A: OmegaGroup) -> CrossedModule:
    """``0: A -> A`` with the multiplication action; XM2 fails when A^2 != 0."""
    act = conjugation_action(A)
    return CrossedModule.build(A, A, core.zero_map(A, A), act, name=f"0({A.name}) mult")


def assoc_as_dialgebra(A: OmegaGroup) -> OmegaGroup:
    """Both dialgebra products equal to the multiplication."""
    C = A.backend.tensors["mul"]
    p, d = A.backend.p, A.backend.d
    return OmegaGroup.from_vectors(Signature.preset("dias", p), p, d,
                                   {"dashv": C, "vdash": C}, name=f"{A.name} as dias")


def phi_dialgebra(p: int = 3) -> OmegaGroup:
    """From :func:`triangular` and the idempotent morphism e -> e, n -> 0:
    ``x |- y = phi(x) y`` and ``x -| y = x phi(y)``."""
    C = triangular(p).backend.tensors["mul"]
    phi = np.array([[1, 0], [0, 0]])
    vdash = np.einsum("xa,abk->xbk", phi.T, C)
    dashv = np.einsum("yb,abk->ayk", phi.T, C)
    return OmegaGroup.from_vectors(Signature.preset("dias", p), p, 2,
                                   {"dashv": dashv, "vdash": vdash}, name=f"phi-dias{p}")


def abelian_lie(p: int = 3, d: int = 2) -> OmegaGroup:
    return null_algebra(p, d, "lie")


# catalogues --------------------------------------------------------------

def group_xmods() -> dict[str, CrossedModule]:
    Z2 = cyclic(2)
    return {
        "trivial": trivial_xmod(),
        "id(Z2)": id_xmod(Z2),
        "0(Z2)": zero_xmod(Z2),
        "id(Z3)": id_xmod(cyclic(3)),
        "0(Z3)": zero_xmod(cyclic(3)),
        "0(Klein)": zero_xmod(klein()),
        "id(S3)": id_xmod(s3()),
        "A3<S3": a3_in_s3(),
        "Z3-0->S3": z3_sign_s3(),
        "Z4->Z2": z4_mod2(),
    }


def algebra_xmods() -> dict[str, CrossedModule]:
    return {
        "id(F2[x]/x^2)": id_xmod(dual_numbers(2)),
        "id(F3[x]/x^2)": id_xmod(dual_numbers(3)),
        "id(T3)": id_xmod(triangular(3)),
        "span(n)<T3": ideal_xmod(3),
        "id(abelian lie)": id_xmod(abelian_lie(3, 2)),
        "id(phi-dias)": id_xmod(phi_dialgebra(3)),
        "id(T3 as dias)": id_xmod(assoc_as_dialgebra(triangular(3))),
    }


def all_xmods() -> dict[str, CrossedModule]:
    return {**group_xmods(), **algebra_xmods()}
