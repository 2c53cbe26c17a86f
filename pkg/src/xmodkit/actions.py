"""Derived actions, split extensions and semidirect products."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import OmegaGroup, base_symbol, require_same_signature
from .errors import CapExceeded, MalformedBackend, NotInKernel
from .report import MAX_WITNESSES, ValidationReport, check_grid


def _table(t, rows: int, cols: int, target: int, name: str) -> np.ndarray:
    arr = np.array(t, dtype=np.int64)
    if arr.shape != (rows, cols):
        raise MalformedBackend(f"{name} has shape {arr.shape}, expected {(rows, cols)}")
    if arr.size and (arr.min() < 0 or arr.max() >= target):
        raise MalformedBackend(f"{name} leaves the acted carrier")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DerivedAction:
    """Actions of ``actor`` (B) on ``acted`` (A).

    ``dot[b, a] = b.a``; ``star_left[s][b, a] = b s a`` and
    ``star_right[s][b, a] = a s b``, one entry per base star symbol.
    """
    actor: OmegaGroup
    acted: OmegaGroup
    dot: np.ndarray
    star_left: dict
    star_right: dict

    @classmethod
    def build(cls, actor: OmegaGroup, acted: OmegaGroup, dot, star_left=None, star_right=None):
        require_same_signature(actor, acted)
        nb, na = actor.size, acted.size
        stars = actor.signature.star_ops
        star_left = star_left or {}
        star_right = star_right or {}
        if set(star_left) != set(stars) or set(star_right) != set(stars):
            raise MalformedBackend(f"action star tables must cover {list(stars)}")
        return cls(actor, acted, _table(dot, nb, na, na, "dot"),
                   {s: _table(star_left[s], nb, na, na, f"star_left[{s}]") for s in stars},
                   {s: _table(star_right[s], nb, na, na, f"star_right[{s}]") for s in stars})

    def left(self, sym: str) -> np.ndarray:
        """``[b, a] -> b sym a`` for any symbol, opposites included."""
        base, opp = base_symbol(sym)
        return self.star_right[base] if opp else self.star_left[base]

    def right(self, sym: str) -> np.ndarray:
        """``[b, a] -> a sym b`` for any symbol, opposites included."""
        base, opp = base_symbol(sym)
        return self.star_left[base] if opp else self.star_right[base]

    def to_dict(self) -> dict:
        from .io import action_to_dict
        return action_to_dict(self)


def trivial_action(actor: OmegaGroup, acted: OmegaGroup) -> DerivedAction:
    """``b.a = a`` and every star action zero."""
    nb, na = actor.size, acted.size
    dot = np.tile(np.arange(na), (nb, 1))
    zero = np.full((nb, na), acted.zero)
    stars = actor.signature.star_ops
    return DerivedAction.build(actor, acted, dot, {s: zero for s in stars}, {s: zero for s in stars})


def conjugation_action(G: OmegaGroup) -> DerivedAction:
    """``G`` acting on itself: ``b.a = b + a - b`` and ``b*a`` the internal star."""
    n = G.size
    b = np.arange(n)[:, None]
    a = np.arange(n)[None, :]
    dot = G.add_table[G.add_table[b, a], G.neg_table[b]]
    stars = G.signature.star_ops
    return DerivedAction.build(G, G, dot, {s: G.star_table(s) for s in stars},
                               {s: G.star_table(s).T for s in stars})


def equal_actions(x: DerivedAction, y: DerivedAction) -> bool:
    return (core.groups_equal(x.actor, y.actor) and core.groups_equal(x.acted, y.acted)
            and np.array_equal(x.dot, y.dot)
            and all(np.array_equal(x.star_left[s], y.star_left[s]) for s in x.star_left)
            and all(np.array_equal(x.star_right[s], y.star_right[s]) for s in x.star_right))


def _unique(values) -> np.ndarray:
    return np.unique(np.asarray(values).ravel())


def _products(act: DerivedAction):
    """A-valued products (internal and mixed), mixed ones alone, and B products."""
    A, B = act.acted, act.actor
    internal, mixed, inB = [], [], []
    for s in A.signature.all_stars:
        internal.append(A.star_table(s).ravel())
        mixed.append(act.left(s).ravel())
        mixed.append(act.right(s).ravel())
        inB.append(B.star_table(s).ravel())
    cat = lambda xs: _unique(np.concatenate(xs)) if xs else np.zeros(0, np.int64)
    mixed_u = cat(mixed)
    return cat(internal + mixed), mixed_u, cat(inB)


def validate_derived_action(act: DerivedAction, max_witnesses: int = MAX_WITNESSES,
                            check_objects: bool = True) -> ValidationReport:
    """Check the twelve derived-action conditions plus the supplements that
    make them equivalent to ``A x| B`` being an object.

    Conditions are named ``condition 1`` .. ``condition 12`` (with the star
    symbol in brackets); ``condition 6+``, ``7+`` and ``12+`` are the
    strengthened forms (products of B act trivially on all of A, every element
    of B fixes A-valued products, mixed products are central in A).  When the
    signature carries identities they are checked on the semidirect product.
    """
    A, B = act.acted, act.actor
    require_same_signature(A, B)
    report = ValidationReport()
    if check_objects:
        report.extend(core.validate_omega_group(A, max_witnesses), "acted: ")
        report.extend(core.validate_omega_group(B, max_witnesses), "actor: ")
    D = act.dot
    Aadd, Badd = A.add_table, B.add_table
    a_dom = (np.arange(A.size), A.ref)
    b_dom = (np.arange(B.size), B.ref)
    w = max_witnesses
    grid = lambda law, dom, fn: check_grid(report, law, dom, fn, out_ref=A.ref, max_witnesses=w)

    grid("condition 1", {"a": a_dom}, lambda a: (D[B.zero, a], a))
    grid("condition 2", {"b": b_dom, "a1": a_dom, "a2": a_dom},
         lambda b, a1, a2: (D[b, Aadd[a1, a2]], Aadd[D[b, a1], D[b, a2]]))
    grid("condition 3", {"b1": b_dom, "b2": b_dom, "a": a_dom},
         lambda b1, b2, a: (D[Badd[b1, b2], a], D[b1, D[b2, a]]))

    all_A_products, mixed_products, B_products = _products(act)
    for s in A.signature.all_stars:
        L, Rt, As = act.left(s), act.right(s), A.star_table(s)
        grid(f"condition 4 [{s}]", {"b": b_dom, "a1": a_dom, "a2": a_dom},
             lambda b, a1, a2: (L[b, Aadd[a1, a2]], Aadd[L[b, a1], L[b, a2]]))
        grid(f"condition 5 [{s}]", {"b1": b_dom, "b2": b_dom, "a": a_dom},
             lambda b1, b2, a: (L[Badd[b1, b2], a], Aadd[L[b1, a], L[b2, a]]))
        qB = (_unique(B.star_table(s)), B.ref)
        grid(f"condition 6 [{s}]", {"b1*b2": qB, "a1*a2": (_unique(As), A.ref)},
             lambda **kw: (D[kw["b1*b2"], kw["a1*a2"]], kw["a1*a2"]))
        grid(f"condition 7 [{s}]", {"b1*b2": qB, "a*b": (_unique(Rt), A.ref)},
             lambda **kw: (D[kw["b1*b2"], kw["a*b"]], kw["a*b"]))
        grid(f"condition 8 [{s}]", {"a1": a_dom, "b": b_dom, "a2": a_dom},
             lambda a1, b, a2: (As[a1, D[b, a2]], As[a1, a2]))
        grid(f"condition 9 [{s}]", {"b": b_dom, "b1": b_dom, "a": a_dom},
             lambda b, b1, a: (L[b, D[b1, a]], L[b, a]))
        for om in A.signature.unary_ops:
            uA, uB = A.unary_table(om), B.unary_table(om)
            grid(f"condition 11 [{om}, {s}]", {"a": a_dom, "b": b_dom},
                 lambda a, b: (uA[Rt[b, a]], Rt[uB[b], uA[a]]))
    for om in A.signature.unary_ops:
        uA, uB = A.unary_table(om), B.unary_table(om)
        grid(f"condition 10 [{om}]", {"b": b_dom, "a": a_dom},
             lambda b, a: (uA[D[b, a]], D[uB[b], uA[a]]))
    if A.signature.star_ops:
        pa = (all_A_products, A.ref)
        grid("condition 12 [in A]", {"x*y": pa, "z*t": pa},
             lambda **kw: (Aadd[kw["x*y"], kw["z*t"]], Aadd[kw["z*t"], kw["x*y"]]))
        pb = (B_products, B.ref)
        check_grid(report, "condition 12 [in B]", {"x*y": pb, "z*t": pb},
                   lambda **kw: (Badd[kw["x*y"], kw["z*t"]], Badd[kw["z*t"], kw["x*y"]]),
                   out_ref=B.ref, max_witnesses=w)
        grid("condition 6+", {"b1*b2": pb, "a": a_dom},
             lambda **kw: (D[kw["b1*b2"], kw["a"]], kw["a"]))
        grid("condition 7+", {"b": b_dom, "p": pa},
             lambda b, p: (D[b, p], p))
        grid("condition 12+", {"a": a_dom, "m": (mixed_products, A.ref)},
             lambda a, m: (Aadd[a, m], Aadd[m, a]))
    if A.signature.identities and report.ok:
        try:
            P = semidirect_product(act)
        except CapExceeded:
            report.not_checked.append("identities on the semidirect product (cap)")
        else:
            sub = ValidationReport()
            for ident in A.signature.identities:
                core._check_identity(sub, P, f"identity {ident.name}", ident, False, w)
            report.extend(sub, "semidirect: ")
    return report


def semidirect_product(act: DerivedAction, cap: int | None = None) -> OmegaGroup:
    """``A x| B`` on pairs ``(a, b)``, index ``ia * |B| + ib``.

    ``(a', b') + (a, b) = (a' + b'.a, b' + b)`` and
    ``(a', b') * (a, b) = (a'*a + a'*b + b'*a, b'*b)``.
    """
    A, B = act.acted, act.actor
    require_same_signature(A, B)
    cap = core.ENUM_CAP if cap is None else cap
    na, nb = A.size, B.size
    if na * nb > cap:
        raise CapExceeded(f"|A|*|B| = {na * nb} exceeds enumeration cap {cap}")
    idx = np.arange(na * nb)
    ia, ib = idx // nb, idx % nb
    x, y = ia[:, None], ib[:, None]          # left operand (a', b')
    u, v = ia[None, :], ib[None, :]          # right operand (a, b)
    pair = lambda a, b: a * nb + b
    D = act.dot
    add = pair(A.add_table[x, D[y, u]], B.add_table[y, v])
    nbneg = B.neg_table[ib]
    neg = pair(D[nbneg, A.neg_table[ia]], nbneg)
    stars = {}
    for s in A.signature.star_ops:
        first = A.add_table[A.add_table[A.star_table(s)[x, u], act.right(s)[v, x]],
                            act.left(s)[y, u]]
        stars[s] = pair(first, B.star_table(s)[y, v])
    unary = {w: pair(A.unary_table(w)[ia], B.unary_table(w)[ib]) for w in A.signature.unary_ops}
    name = f"{A.name or 'A'} x| {B.name or 'B'}"
    return OmegaGroup.from_tables(A.signature, add, neg, pair(A.zero, B.zero), stars, unary, name=name)


def semidirect_pair(act: DerivedAction, index: int) -> tuple[int, int]:
    nb = act.actor.size
    return index // nb, index % nb


@dataclass(frozen=True, eq=False)
class SplitExtension:
    """``0 -> A -> E -> B -> 0`` with a section ``B -> E``."""
    kernel: OmegaGroup
    total: OmegaGroup
    base: OmegaGroup
    kernel_embed: np.ndarray
    proj: np.ndarray
    section: np.ndarray


def validate_split_extension(se: SplitExtension) -> ValidationReport:
    report = ValidationReport()
    A, E, B = se.kernel, se.total, se.base
    core.check_morphism(report, A, E, se.kernel_embed, "kernel_embed")
    core.check_morphism(report, E, B, se.proj, "proj")
    core.check_morphism(report, B, E, se.section, "section")
    check_grid(report, "proj after section = id", {"b": (np.arange(B.size), B.ref)},
               lambda b: (se.proj[se.section[b]], b), out_ref=B.ref)
    report.add_check("kernel_embed is injective")
    if len(set(np.asarray(se.kernel_embed).tolist())) != A.size:
        report.fail("kernel_embed is injective", {}, len(set(se.kernel_embed.tolist())), A.size)
    report.add_check("image of kernel_embed = Ker proj")
    image = sorted(set(np.asarray(se.kernel_embed).tolist()))
    ker = core.kernel(se.proj, B)
    if image != ker:
        report.fail("image of kernel_embed = Ker proj", {}, image, ker)
    return report


def action_from_split_extension(se: SplitExtension) -> DerivedAction:
    """``b.a = s(b) + a - s(b)`` and ``b*a = s(b)*a``, pulled back into A."""
    A, E, B = se.kernel, se.total, se.base
    back = {int(e): i for i, e in enumerate(np.asarray(se.kernel_embed).tolist())}
    emb, sec = np.asarray(se.kernel_embed), np.asarray(se.section)
    b = np.arange(B.size)[:, None]
    a = np.arange(A.size)[None, :]
    sb, ea = sec[b], emb[a]

    def pull(values, what):
        out = np.empty(values.shape, dtype=np.int64)
        for pos, val in np.ndenumerate(values):
            if int(val) not in back:
                raise NotInKernel(f"{what} at (b, a) = {pos} gives {int(val)}, outside the kernel")
            out[pos] = back[int(val)]
        return out

    dot = pull(E.add_table[E.add_table[sb, ea], E.neg_table[sb]], "s(b) + a - s(b)")
    left = {s: pull(E.star_table(s)[sb, ea], f"s(b) {s} a") for s in E.signature.star_ops}
    right = {s: pull(E.star_table(s)[ea, sb], f"a {s} s(b)") for s in E.signature.star_ops}
    return DerivedAction.build(B, A, dot, left, right)
