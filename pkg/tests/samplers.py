"""Random and exhaustive instance generators shared by the property tests."""
from __future__ import annotations

import functools

import numpy as np

from xmodkit import core, fixtures as fx, xmod
from xmodkit.actions import DerivedAction
from xmodkit.core import OmegaGroup, Signature
from xmodkit.homotopy import enumerate_derivations

GENERIC = Signature("generic", ("m",), ("u",))
ASSOC = Signature.preset("assoc")


def _ring(sig, n, mul, unary=None):
    i = np.arange(n)
    return OmegaGroup.from_tables(sig, (i[:, None] + i[None, :]) % n, (-i) % n, 0,
                                  {sig.star_ops[0]: mul},
                                  {w: unary for w in sig.unary_ops}, name=None)


def _klein(sig, mul, unary=None):
    i = np.arange(4)
    return OmegaGroup.from_tables(sig, i[:, None] ^ i[None, :], i, 0, {sig.star_ops[0]: mul},
                                  {w: unary for w in sig.unary_ops})


@functools.lru_cache(maxsize=None)
def small_objects(kind: str) -> tuple[OmegaGroup, ...]:
    """Valid objects of size at most 4 sharing one signature.

    ``generic`` has one star ``m`` and one unary ``u``; ``assoc`` carries the
    associativity identity, so semidirect products are also checked against it.
    """
    i2, i3, i4 = np.arange(2), np.arange(3), np.arange(4)
    z = lambda n: np.zeros((n, n), dtype=np.int64)
    if kind == "generic":
        sig = GENERIC
        objs = [
            _ring(sig, 2, (i2[:, None] * i2[None, :]) % 2, i2),
            _ring(sig, 2, z(2), i2),
            _ring(sig, 2, z(2), np.zeros(2, dtype=np.int64)),
            _ring(sig, 3, (i3[:, None] * i3[None, :]) % 3, i3),
            _ring(sig, 3, z(3), (-i3) % 3),
            _ring(sig, 4, (2 * i4[:, None] * i4[None, :]) % 4, i4),
            _ring(sig, 4, z(4), i4),
            _klein(sig, i4[:, None] & i4[None, :], i4),
            _klein(sig, z(4), np.array([0, 2, 1, 3])),
            _klein(sig, z(4), i4),
        ]
    else:
        sig = ASSOC
        objs = [
            _ring(sig, 2, (i2[:, None] * i2[None, :]) % 2),
            _ring(sig, 2, z(2)),
            _ring(sig, 3, (i3[:, None] * i3[None, :]) % 3),
            _ring(sig, 4, (i4[:, None] * i4[None, :]) % 4),
            _ring(sig, 4, (2 * i4[:, None] * i4[None, :]) % 4),
            _klein(sig, i4[:, None] & i4[None, :]),
            _klein(sig, z(4)),
        ]
    return tuple(objs)


def valid_actions(B: OmegaGroup, A: OmegaGroup) -> list[tuple]:
    """The trivial action and every action pulled back along a morphism B -> A."""
    nb, na = B.size, A.size
    stars = A.signature.star_ops
    zero = np.zeros((nb, na), dtype=np.int64)
    out = [(np.tile(np.arange(na), (nb, 1)), {s: zero for s in stars}, {s: zero for s in stars})]
    for phi in core.homomorphisms(B, A):
        b, a = phi[:, None], np.arange(na)[None, :]
        dot = A.add_table[A.add_table[b, a], A.neg_table[b]]
        out.append((dot, {s: A.star_table(s)[b, a] for s in stars},
                    {s: A.star_table(s)[a, b] for s in stars}))
    return out


def candidate_action(rng: np.random.Generator, kind: str) -> DerivedAction:
    """A valid action, or a valid action disturbed in one of several ways."""
    pool = small_objects(kind)
    B, A = pool[rng.integers(len(pool))], pool[rng.integers(len(pool))]
    base = valid_actions(B, A)
    dot, left, right = base[rng.integers(len(base))]
    dot = dot.copy()
    left = {s: t.copy() for s, t in left.items()}
    right = {s: t.copy() for s, t in right.items()}
    s = A.signature.star_ops[0]
    mode = rng.integers(6)
    if mode == 1:
        t = [dot, left[s], right[s]][rng.integers(3)]
        t[rng.integers(B.size), rng.integers(A.size)] = rng.integers(A.size)
    elif mode == 2:
        # zero on the axes, arbitrary elsewhere: often passes conditions 4 and 5 only
        left[s] = rng.integers(A.size, size=(B.size, A.size))
        left[s][:, 0] = 0
        left[s][0, :] = 0
    elif mode == 3:
        right[s] = left[s].copy() if rng.random() < 0.5 else np.zeros_like(right[s])
    elif mode == 4:
        dot = rng.integers(A.size, size=(B.size, A.size))
        dot[0] = np.arange(A.size)
    elif mode == 5:
        left, right = right, left
    return DerivedAction.build(B, A, dot, left, right)


def _families() -> list[dict]:
    return [fx.group_xmods(), fx.algebra_xmods()]


@functools.lru_cache(maxsize=None)
def morphism_pool() -> tuple:
    """``(label, morphism, derivations)`` over all compatible fixture pairs."""
    out = []
    for family in _families():
        for k1, X in family.items():
            for k2, Y in family.items():
                if not X.signature.compatible(Y.signature):
                    continue
                if X.E.is_vector and X.E.backend.p != Y.E.backend.p:
                    continue
                for m in xmod.enumerate_morphisms(X, Y):
                    out.append((f"{k1} -> {k2}", m, tuple(enumerate_derivations(m))))
    return tuple(out)
