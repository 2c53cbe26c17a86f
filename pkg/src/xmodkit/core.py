"""Finite groups with operations.

An :class:`OmegaGroup` is a group carrier (written additively) with extra
binary operations (stars) and unary operations.  Two storage backends share
one element interface: elements are always integer indices ``0..n-1``.

* :class:`TableBackend` stores Cayley tables.
* :class:`VectorBackend` stores structure constants over ``Z/p``; element
  ``i`` is the coefficient vector whose base-``p`` digits (most significant
  first) spell ``i``, so index order is lexicographic vector order.

Every binary symbol ``s`` has an opposite ``s^op`` with ``x s^op y = y s x``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from .errors import (ArityMismatch, CapExceeded, MalformedBackend, SignatureMismatch,
                     UnknownSymbol, XmodkitError)
from .report import ValidationReport, check_grid, MAX_WITNESSES

OPP = "^op"

KINDS = ("group", "assoc", "lie", "leibniz", "dias", "generic")


def _env_cap(default: int) -> int:
    raw = os.environ.get("XMODKIT_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


ENUM_CAP = _env_cap(4096)
BRUTE_CAP = 65536


def opposite(sym: str) -> str:
    return sym[: -len(OPP)] if sym.endswith(OPP) else sym + OPP


def base_symbol(sym: str) -> tuple[str, bool]:
    """Split ``sym`` into (base symbol, is_opposite)."""
    if sym.endswith(OPP):
        return sym[: -len(OPP)], True
    return sym, False


# --------------------------------------------------------------------------
# terms and identities

def term_vars(term) -> list[str]:
    out: list[str] = []

    def walk(t):
        if isinstance(t, str):
            if t != "0" and t not in out:
                out.append(t)
        else:
            for a in t[1:]:
                walk(a)

    walk(term)
    return out


_ANY = "any"


def _multilinear(term, stars, unary):
    """Return the variable set a term is multilinear in, ``_ANY`` for the
    zero term, or None when the term is not multilinear."""
    if isinstance(term, str):
        return _ANY if term == "0" else frozenset([term])
    op, *args = term
    parts = [_multilinear(a, stars, unary) for a in args]
    if any(p is None for p in parts):
        return None
    if op == "+":
        a, b = parts
        if a == _ANY:
            return b
        if b == _ANY or a == b:
            return a
        return None
    if op == "neg" or op in unary:
        return parts[0]
    if base_symbol(op)[0] in stars:
        a, b = parts
        if a == _ANY or b == _ANY:
            return _ANY
        return a | b if not (a & b) else None
    return None


@dataclass(frozen=True)
class Identity:
    """An equational law ``lhs = rhs`` between terms.

    Terms are variables (strings), the constant ``"0"``, or lists
    ``[op, *args]`` with op one of ``"+"``, ``"neg"``, a star symbol (or its
    ``^op`` opposite) or a unary symbol.
    """
    name: str
    lhs: Any
    rhs: Any

    @property
    def variables(self) -> list[str]:
        vs = term_vars(self.lhs)
        for v in term_vars(self.rhs):
            if v not in vs:
                vs.append(v)
        return vs

    def is_multilinear(self, stars, unary) -> bool:
        a = _multilinear(self.lhs, stars, unary)
        b = _multilinear(self.rhs, stars, unary)
        if a is None or b is None:
            return False
        return a == _ANY or b == _ANY or a == b

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": _listify(self.lhs), "rhs": _listify(self.rhs)}

    @classmethod
    def from_dict(cls, d: dict) -> "Identity":
        return cls(d["name"], _tuplify(d["lhs"]), _tuplify(d["rhs"]))


def _tuplify(t):
    return t if isinstance(t, str) else tuple(_tuplify(a) for a in t)


def _listify(t):
    return t if isinstance(t, str) else [_listify(a) for a in t]


def _plus(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = ("+", out, t)
    return out


def _neg(t):
    return ("neg", t)


def preset_identities(kind: str) -> tuple[Identity, ...]:
    if kind == "assoc":
        return (Identity("associativity", ("mul", ("mul", "x", "y"), "z"),
                         ("mul", "x", ("mul", "y", "z"))),)
    if kind == "lie":
        return (
            Identity("antisymmetry", _plus(("br", "x", "y"), ("br", "y", "x")), "0"),
            Identity("jacobi", _plus(("br", "x", ("br", "y", "z")),
                                     ("br", "y", ("br", "z", "x")),
                                     ("br", "z", ("br", "x", "y"))), "0"),
        )
    if kind == "leibniz":
        # [x,[y,z]] = [[x,y],z] - [[x,z],y]
        return (Identity("leibniz", ("br", "x", ("br", "y", "z")),
                         _plus(("br", ("br", "x", "y"), "z"),
                               _neg(("br", ("br", "x", "z"), "y")))),)
    if kind == "dias":
        L, R = "dashv", "vdash"
        return (
            Identity("dias 1", (L, (L, "x", "y"), "z"), (L, "x", (L, "y", "z"))),
            Identity("dias 2", (L, (L, "x", "y"), "z"), (L, "x", (R, "y", "z"))),
            Identity("dias 3", (L, (R, "x", "y"), "z"), (R, "x", (L, "y", "z"))),
            Identity("dias 4", (R, (L, "x", "y"), "z"), (R, "x", (R, "y", "z"))),
            Identity("dias 5", (R, (R, "x", "y"), "z"), (R, "x", (R, "y", "z"))),
        )
    return ()


PRESET_STARS = {
    "group": (),
    "assoc": ("mul",),
    "lie": ("br",),
    "leibniz": ("br",),
    "dias": ("dashv", "vdash"),
}


@dataclass(frozen=True)
class Signature:
    kind: str = "generic"
    star_ops: tuple[str, ...] = ()
    unary_ops: tuple[str, ...] = ()
    identities: tuple[Identity, ...] = ()
    p: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedBackend(f"unknown signature kind {self.kind!r}")
        for s in self.star_ops:
            if s.endswith(OPP) or s in ("+", "neg", "0"):
                raise MalformedBackend(f"reserved star symbol {s!r}")

    @classmethod
    def preset(cls, kind: str, p: int | None = None, unary_ops: Sequence[str] = ()) -> "Signature":
        if kind == "generic":
            return cls("generic", (), tuple(unary_ops), (), p)
        return cls(kind, PRESET_STARS[kind], tuple(unary_ops), preset_identities(kind), p)

    @property
    def all_stars(self) -> tuple[str, ...]:
        return self.star_ops + tuple(s + OPP for s in self.star_ops)

    def shape(self) -> tuple:
        return (self.kind, self.star_ops, self.unary_ops)

    def compatible(self, other: "Signature") -> bool:
        return self.shape() == other.shape()

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "star_ops": list(self.star_ops),
             "unary_ops": list(self.unary_ops)}
        if self.kind == "generic" or self.identities != preset_identities(self.kind):
            d["identities"] = [i.to_dict() for i in self.identities]
        if self.p is not None:
            d["p"] = self.p
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Signature":
        kind = d.get("kind", "generic")
        if "identities" in d:
            ids = tuple(Identity.from_dict(i) for i in d["identities"])
        else:
            ids = preset_identities(kind)
        stars = d.get("star_ops", PRESET_STARS.get(kind, ()))
        return cls(kind, tuple(stars), tuple(d.get("unary_ops", ())), ids, d.get("p"))


def require_same_signature(*groups: "OmegaGroup") -> None:
    first = groups[0].signature
    for g in groups[1:]:
        if not first.compatible(g.signature):
            raise SignatureMismatch(f"signature {g.signature.shape()} != {first.shape()}")


# --------------------------------------------------------------------------
# backends

def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TableBackend:
    add: np.ndarray
    neg: np.ndarray
    zero: int = 0
    stars: dict = field(default_factory=dict)
    unary: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.neg.shape[0]) if self.neg.ndim == 1 else -1


@dataclass(frozen=True)
class VectorBackend:
    p: int
    d: int
    tensors: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.p ** self.d


class OmegaGroup:
    """A finite object of a category of groups with operations."""

    def __init__(self, signature: Signature, backend, name: str | None = None):
        self.signature = signature
        self.backend = backend
        self.name = name
        if isinstance(backend, TableBackend):
            self._check_table(backend)
        elif isinstance(backend, VectorBackend):
            self._check_vectors(backend)
        else:
            raise MalformedBackend(f"unsupported backend {type(backend).__name__}")

    # construction helpers ---------------------------------------------------
    @classmethod
    def from_tables(cls, signature, add, neg, zero=0, stars=None, unary=None, name=None):
        backend = TableBackend(_frozen(add), _frozen(neg), int(zero),
                               {k: _frozen(v) for k, v in (stars or {}).items()},
                               {k: _frozen(v) for k, v in (unary or {}).items()})
        return cls(signature, backend, name)

    @classmethod
    def from_vectors(cls, signature, p, d, tensors=None, matrices=None, name=None):
        backend = VectorBackend(int(p), int(d),
                                {k: _frozen(np.asarray(v) % p) for k, v in (tensors or {}).items()},
                                {k: _frozen(np.asarray(v) % p) for k, v in (matrices or {}).items()})
        return cls(signature, backend, name)

    def _check_table(self, b: TableBackend) -> None:
        sig = self.signature
        if b.neg.ndim != 1:
            raise MalformedBackend("neg table must be one-dimensional")
        n = b.neg.shape[0]
        if n == 0:
            raise MalformedBackend("empty carrier")
        if b.add.shape != (n, n):
            raise MalformedBackend(f"add table has shape {b.add.shape}, expected {(n, n)}")
        if not 0 <= b.zero < n:
            raise MalformedBackend("zero index out of range")
        if set(b.stars) != set(sig.star_ops):
            raise MalformedBackend(f"star tables {sorted(b.stars)} do not match signature {list(sig.star_ops)}")
        if set(b.unary) != set(sig.unary_ops):
            raise MalformedBackend(f"unary tables {sorted(b.unary)} do not match signature {list(sig.unary_ops)}")
        for name, t in [("add", b.add), ("neg", b.neg), *b.stars.items(), *b.unary.items()]:
            expected = (n,) if name in b.unary or name == "neg" else (n, n)
            if t.shape != expected:
                raise MalformedBackend(f"table {name!r} has shape {t.shape}, expected {expected}")
            if t.size and (t.min() < 0 or t.max() >= n):
                raise MalformedBackend(f"table {name!r} is not index-closed")

    def _check_vectors(self, b: VectorBackend) -> None:
        sig = self.signature
        if b.p < 2 or any(b.p % q == 0 for q in range(2, int(b.p ** 0.5) + 1)):
            raise MalformedBackend(f"p={b.p} is not prime")
        if b.d < 0:
            raise MalformedBackend("negative dimension")
        if sig.p is not None and sig.p != b.p:
            raise MalformedBackend(f"signature prime {sig.p} != backend prime {b.p}")
        if set(b.tensors) != set(sig.star_ops):
            raise MalformedBackend(f"tensors {sorted(b.tensors)} do not match signature {list(sig.star_ops)}")
        if set(b.matrices) != set(sig.unary_ops):
            raise MalformedBackend(f"matrices {sorted(b.matrices)} do not match signature {list(sig.unary_ops)}")
        for k, t in b.tensors.items():
            if t.shape != (b.d, b.d, b.d):
                raise MalformedBackend(f"tensor {k!r} has shape {t.shape}, expected {(b.d,) * 3}")
        for k, m in b.matrices.items():
            if m.shape != (b.d, b.d):
                raise MalformedBackend(f"matrix {k!r} has shape {m.shape}, expected {(b.d,) * 2}")

    # basic structure ----------------------------------------------------------
    @property
    def is_vector(self) -> bool:
        return isinstance(self.backend, VectorBackend)

    @property
    def size(self) -> int:
        return self.backend.size

    def __len__(self) -> int:
        return self.size

    @property
    def zero(self) -> int:
        return 0 if self.is_vector else self.backend.zero

    def __repr__(self) -> str:
        label = self.name or "OmegaGroup"
        if self.is_vector:
            return f"<{label} {self.signature.kind} F_{self.backend.p}^{self.backend.d}>"
        return f"<{label} {self.signature.kind} order {self.size}>"

    def _materialize_ok(self) -> None:
        if self.size > ENUM_CAP:
            raise CapExceeded(f"carrier of size {self.size} exceeds enumeration cap {ENUM_CAP}")

    @cached_property
    def coords(self) -> np.ndarray:
        """Coefficient vectors of all elements in index order (vector backend)."""
        b = self.backend
        self._materialize_ok()
        grid = np.indices((b.p,) * b.d).reshape(b.d, -1).T if b.d else np.zeros((1, 0), np.int64)
        return _frozen(grid)

    @cached_property
    def _powers(self) -> np.ndarray:
        b = self.backend
        return np.array([b.p ** (b.d - 1 - i) for i in range(b.d)], dtype=np.int64)

    def vec_to_index(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.backend.p
        return (v * self._powers).sum(axis=-1)

    def index_to_vec(self, i) -> np.ndarray:
        b = self.backend
        i = np.asarray(i, dtype=np.int64)
        return (i[..., None] // self._powers) % b.p

    @cached_property
    def additive_generators(self) -> np.ndarray:
        """A generating set of ``(G, +)``: the basis, or a greedy pick by index."""
        if self.is_vector:
            return self._powers.copy()
        add, n = self.add_table, self.size
        inside = np.zeros(n, dtype=bool)
        inside[self.zero] = True
        gens = []
        for g in range(n):
            if inside[g]:
                continue
            gens.append(g)
            frontier = np.flatnonzero(inside)
            while frontier.size:
                new = np.unique(add[frontier[:, None], np.asarray(gens)[None, :]])
                new = new[~inside[new]]
                inside[new] = True
                frontier = new
        return np.asarray(gens, dtype=np.int64)

    @cached_property
    def stars_biadditive(self) -> bool:
        """Whether every star distributes over + in both arguments."""
        if self.size > ENUM_CAP:
            return False
        add, gens = self.add_table, self.additive_generators
        x = np.arange(self.size)[:, None, None]
        y = np.arange(self.size)[None, :, None]
        g = gens[None, None, :]
        for s in self.signature.star_ops:
            t = self.star_table(s)
            if not (t[x, add[y, g]] == add[t[x, y], t[x, g]]).all():
                return False
            if not (t[add[y, g], x] == add[t[y, x], t[g, x]]).all():
                return False
        return True

    @cached_property
    def add_table(self) -> np.ndarray:
        if not self.is_vector:
            return self.backend.add
        V = self.coords
        return _frozen(self.vec_to_index(V[:, None, :] + V[None, :, :]))

    @cached_property
    def neg_table(self) -> np.ndarray:
        if not self.is_vector:
            return self.backend.neg
        return _frozen(self.vec_to_index(-self.coords))

    @cached_property
    def _star_tables(self) -> dict:
        if not self.is_vector:
            return dict(self.backend.stars)
        V = self.coords
        out = {}
        for k, C in self.backend.tensors.items():
            prod = np.einsum("ia,jb,abk->ijk", V, V, C)
            out[k] = _frozen(self.vec_to_index(prod))
        return out

    @cached_property
    def _unary_tables(self) -> dict:
        if not self.is_vector:
            return dict(self.backend.unary)
        V = self.coords
        return {k: _frozen(self.vec_to_index(V @ M.T)) for k, M in self.backend.matrices.items()}

    def star_table(self, sym: str) -> np.ndarray:
        base, opp = base_symbol(sym)
        if base not in self.signature.star_ops:
            raise UnknownSymbol(f"{sym!r} is not a star operation of this object")
        t = self._star_tables[base]
        return t.T if opp else t

    def unary_table(self, sym: str) -> np.ndarray:
        if sym not in self.signature.unary_ops:
            raise UnknownSymbol(f"{sym!r} is not a unary operation of this object")
        return self._unary_tables[sym]

    @cached_property
    def _add_py(self) -> list:
        return self.add_table.tolist()

    @cached_property
    def _neg_py(self) -> list:
        return self.neg_table.tolist()

    def add(self, x: int, y: int) -> int:
        return self._add_py[x][y]

    def neg(self, x: int) -> int:
        return self._neg_py[x]

    def sub(self, x: int, y: int) -> int:
        return self._add_py[x][self._neg_py[y]]

    def star(self, sym: str, x: int, y: int) -> int:
        return int(self.star_table(sym)[x, y])

    def unary(self, sym: str, x: int) -> int:
        return int(self.unary_table(sym)[x])

    def elements(self) -> range:
        self._materialize_ok()
        return range(self.size)

    @cached_property
    def basis(self) -> np.ndarray:
        """Indices of the standard basis vectors (vector backend only)."""
        b = self.backend
        return _frozen([self.vec_to_index(np.eye(b.d, dtype=np.int64)[i]) for i in range(b.d)])

    # element references -------------------------------------------------------
    def ref(self, i: int):
        """Public form of an element: an int, or a coefficient list."""
        if self.is_vector:
            return [int(c) for c in self.index_to_vec(int(i))]
        return int(i)

    def index(self, ref) -> int:
        if self.is_vector:
            v = np.asarray(ref, dtype=np.int64)
            if v.shape != (self.backend.d,):
                raise MalformedBackend(f"vector of length {v.shape} for dimension {self.backend.d}")
            if (v < 0).any() or (v >= self.backend.p).any():
                raise MalformedBackend("vector entries must be reduced mod p")
            return int(self.vec_to_index(v))
        i = int(ref)
        if not 0 <= i < self.size:
            raise MalformedBackend(f"element index {i} out of range 0..{self.size - 1}")
        return i

    def to_dict(self) -> dict:
        from .io import omega_group_to_dict
        return omega_group_to_dict(self)


# --------------------------------------------------------------------------
# term evaluation

class _IndexAlgebra:
    def __init__(self, G: OmegaGroup):
        self.G = G

    def zero(self):
        return np.int64(self.G.zero)

    def add(self, a, b):
        return self.G.add_table[a, b]

    def neg(self, a):
        return self.G.neg_table[a]

    def star(self, sym, a, b):
        return self.G.star_table(sym)[a, b]

    def unary(self, sym, a):
        return self.G.unary_table(sym)[a]


class _VectorAlgebra:
    """Evaluates terms directly on coefficient vectors (last axis)."""

    def __init__(self, G: OmegaGroup):
        self.G = G
        self.p = G.backend.p

    def zero(self):
        return np.zeros(self.G.backend.d, dtype=np.int64)

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def star(self, sym, a, b):
        base, opp = base_symbol(sym)
        if base not in self.G.signature.star_ops:
            raise UnknownSymbol(f"{sym!r} is not a star operation of this object")
        if opp:
            a, b = b, a
        C = self.G.backend.tensors[base]
        return np.einsum("...i,...j,ijk->...k", a, b, C) % self.p

    def unary(self, sym, a):
        if sym not in self.G.signature.unary_ops:
            raise UnknownSymbol(f"{sym!r} is not a unary operation of this object")
        M = self.G.backend.matrices[sym]
        return np.einsum("ij,...j->...i", M, a) % self.p


def eval_term(alg, term, env: dict):
    if isinstance(term, str):
        if term == "0":
            return alg.zero()
        return env[term]
    op, *args = term
    vals = [eval_term(alg, a, env) for a in args]
    if op == "+":
        if len(vals) != 2:
            raise ArityMismatch("+ takes two arguments")
        return alg.add(*vals)
    if op == "neg":
        if len(vals) != 1:
            raise ArityMismatch("neg takes one argument")
        return alg.neg(*vals)
    sig = alg.G.signature
    if base_symbol(op)[0] in sig.star_ops:
        if len(vals) != 2:
            raise ArityMismatch(f"{op} takes two arguments")
        return alg.star(op, *vals)
    if op in sig.unary_ops:
        if len(vals) != 1:
            raise ArityMismatch(f"{op} takes one argument")
        return alg.unary(op, *vals)
    raise UnknownSymbol(f"unknown operation {op!r} in term")


def _check_identity(report, G: OmegaGroup, law: str, ident: Identity, basis_only: bool,
                    max_witnesses: int) -> None:
    names = ident.variables
    if G.is_vector:
        alg = _VectorAlgebra(G)
        values = G.basis if basis_only else np.arange(G.size)
        if not basis_only:
            G._materialize_ok()
        domains = {v: (values, G.ref) for v in names}

        def fn(**kw):
            env = {k: G.index_to_vec(a) for k, a in kw.items()}
            lhs = eval_term(alg, ident.lhs, env)
            rhs = eval_term(alg, ident.rhs, env)
            return G.vec_to_index(lhs), G.vec_to_index(rhs)
    else:
        alg = _IndexAlgebra(G)
        domains = {v: (np.arange(G.size), G.ref) for v in names}

        def fn(**kw):
            return eval_term(alg, ident.lhs, kw), eval_term(alg, ident.rhs, kw)

    if not names:
        report.add_check(law)
        lhs, rhs = fn()
        if int(lhs) != int(rhs):
            report.fail(law, {}, G.ref(int(lhs)), G.ref(int(rhs)))
        return
    check_grid(report, law, domains, fn, out_ref=G.ref, max_witnesses=max_witnesses)


def structural_laws(sig: Signature) -> list[Identity]:
    """Group axioms, conditions (c) and (d) and Axiom 1 as identities."""
    laws = [
        Identity("associativity of +", ("+", ("+", "x", "y"), "z"), ("+", "x", ("+", "y", "z"))),
        Identity("left identity", ("+", "0", "x"), "x"),
        Identity("right identity", ("+", "x", "0"), "x"),
        Identity("inverse axiom", ("+", "x", ("neg", "x")), "0"),
        Identity("inverse axiom", ("+", ("neg", "x"), "x"), "0"),
    ]
    for s in sig.all_stars:
        laws.append(Identity(f"condition (c) [{s}]", (s, "x", ("+", "y", "z")),
                             ("+", (s, "x", "y"), (s, "x", "z"))))
    for w in sig.unary_ops:
        laws.append(Identity(f"condition (d) [{w}, +]", (w, ("+", "x", "y")),
                             ("+", (w, "x"), (w, "y"))))
        for s in sig.star_ops:
            laws.append(Identity(f"condition (d) [{w}, {s}]", (w, (s, "x", "y")),
                                 (s, (w, "x"), (w, "y"))))
    for s in sig.star_ops:
        laws.append(Identity(f"axiom 1 [{s}]", ("+", "x1", (s, "x2", "x3")),
                             ("+", (s, "x2", "x3"), "x1")))
    return laws


def validate_omega_group(G: OmegaGroup, max_witnesses: int = MAX_WITNESSES) -> ValidationReport:
    """Check group axioms, conditions (c)/(d), Axiom 1 and the signature identities.

    Table objects are checked on every assignment.  Vector objects are checked
    on basis tuples for everything that is multilinear (all structural laws
    hold by linearity once checked there) and exhaustively otherwise.
    """
    report = ValidationReport()
    sig = G.signature
    for law in structural_laws(sig):
        _check_identity(report, G, law.name, law, G.is_vector, max_witnesses)
    for ident in sig.identities:
        multilinear = ident.is_multilinear(sig.star_ops, sig.unary_ops)
        _check_identity(report, G, f"identity {ident.name}", ident,
                        G.is_vector and multilinear, max_witnesses)
    if not sig.star_ops:
        report.not_checked.append("axiom 1 (no star operations)")
    return report


def eval_op(G: OmegaGroup, symbol: str, args: Sequence):
    """Evaluate one operation symbol on element references."""
    sig = G.signature
    if symbol in ("0",):
        arity = 0
    elif symbol in ("neg",):
        arity = 1
    elif symbol == "-":
        arity = len(args) if len(args) in (1, 2) else 1
    elif symbol == "+" or base_symbol(symbol)[0] in sig.star_ops:
        arity = 2
    elif symbol in sig.unary_ops:
        arity = 1
    else:
        raise UnknownSymbol(f"{symbol!r} is not in the signature")
    if len(args) != arity:
        raise ArityMismatch(f"{symbol!r} expects {arity} argument(s), got {len(args)}")
    if G.is_vector:
        alg = _VectorAlgebra(G)
        vals =[G.index_to_vec(G.index(a)) for a in args]
        if symbol == "0":
            out = alg.zero()
        elif symbol == "-" and arity == 2:
            out = alg.add(vals[0], alg.neg(vals[1]))
        elif symbol in ("neg", "-"):
            out = alg.neg(vals[0])
        elif symbol == "+":
            out = alg.add(*vals)
        elif arity == 2:
            out = alg.star(symbol, *vals)
        else:
            out = alg.unary(symbol, *vals)
        return [int(c) for c in out]
    idx = [G.index(a) for a in args]
    if symbol == "0":
        return G.zero
    if symbol == "-" and arity == 2:
        return G.sub(*idx)
    if symbol in ("neg", "-"):
        return G.neg(idx[0])
    if symbol == "+":
        return G.add(*idx)
    if arity == 2:
        return G.star(symbol, *idx)
    return G.unary(symbol, idx[0])


def enumerate_elements(G: OmegaGroup, cap: int | None = None) -> list:
    """All elements in deterministic order (indices, or lexicographic vectors)."""
    cap = ENUM_CAP if cap is None else cap
    if G.size > cap:
        raise CapExceeded(f"carrier of size {G.size} exceeds enumeration cap {cap}")
    if G.is_vector:
        return [G.ref(i) for i in range(G.size)]
    return list(range(G.size))


# --------------------------------------------------------------------------
# maps between objects

def as_map(table, source: OmegaGroup, target: OmegaGroup, name: str = "map") -> np.ndarray:
    arr = np.asarray(table, dtype=np.int64)
    if arr.shape != (source.size,):
        raise MalformedBackend(f"{name} has length {arr.shape}, expected {source.size}")
    if arr.size and (arr.min() < 0 or arr.max() >= target.size):
        raise MalformedBackend(f"{name} leaves the target carrier")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _morphism_on_generators(A: OmegaGroup, B: OmegaGroup, phi: np.ndarray) -> bool:
    """Exact shortcut for morphisms out of large objects.

    ``phi(x + g) = phi(x) + phi(g)`` for every x and additive generator g
    makes phi additive, since every element of a finite group is a sum of
    generators.  Once phi is additive and both sides have biadditive stars,
    both sides of the star law are biadditive, so generator pairs suffice.
    """
    gens = A.additive_generators
    x = np.arange(A.size)[:, None]
    if not (phi[A.add_table[x, gens[None, :]]] == B.add_table[phi[x], phi[gens][None, :]]).all():
        return False
    gi, gj = gens[:, None], gens[None, :]
    for s in A.signature.star_ops:
        if not (phi[A.star_table(s)[gi, gj]] == B.star_table(s)[phi[gi], phi[gj]]).all():
            return False
    for w in A.signature.unary_ops:
        if not (phi[A.unary_table(w)] == B.unary_table(w)[phi]).all():
            return False
    return True


def check_morphism(report: ValidationReport, A: OmegaGroup, B: OmegaGroup, phi,
                   name: str = "map", max_witnesses: int = MAX_WITNESSES) -> bool:
    """Record whether ``phi: A -> B`` preserves +, every star and every unary op."""
    phi = np.asarray(phi)
    n = A.size
    if (n > 64 and A.stars_biadditive and B.stars_biadditive
            and _morphism_on_generators(A, B, phi)):
        report.add_check(f"{name} preserves +")
        for op in tuple(A.signature.star_ops) + tuple(A.signature.unary_ops):
            report.add_check(f"{name} preserves {op}")
        return True
    dom = {"x": (np.arange(n), A.ref), "y": (np.arange(n), A.ref)}
    ok = check_grid(report, f"{name} preserves +", dom,
                    lambda x, y: (phi[A.add_table[x, y]], B.add_table[phi[x], phi[y]]),
                    out_ref=B.ref, max_witnesses=max_witnesses)
    for s in A.signature.star_ops:
        ta, tb = A.star_table(s), B.star_table(s)
        ok &= check_grid(report, f"{name} preserves {s}", dom,
                         lambda x, y: (phi[ta[x, y]], tb[phi[x], phi[y]]),
                         out_ref=B.ref, max_witnesses=max_witnesses)
    for w in A.signature.unary_ops:
        ua, ub = A.unary_table(w), B.unary_table(w)
        ok &= check_grid(report, f"{name} preserves {w}", {"x": dom["x"]},
                         lambda x: (phi[ua[x]], ub[phi[x]]),
                         out_ref=B.ref, max_witnesses=max_witnesses)
    return bool(ok)


def is_morphism(A: OmegaGroup, B: OmegaGroup, phi) -> bool:
    return check_morphism(ValidationReport(), A, B, phi, max_witnesses=1)


def compose_maps(g, f) -> np.ndarray:
    """``g after f`` for index tables."""
    out = np.asarray(g)[np.asarray(f)]
    out.setflags(write=False)
    return out


def zero_map(A: OmegaGroup, B: OmegaGroup) -> np.ndarray:
    return _frozen(np.full(A.size, B.zero))


def identity_map(A: OmegaGroup) -> np.ndarray:
    return _frozen(np.arange(A.size))


def subobject(G: OmegaGroup, elements: Sequence[int], name: str | None = None):
    """Restrict ``G`` to a subset closed under every operation.

    Returns ``(H, embed)`` with ``H`` table-backed, its elements numbered in
    ascending order of ``elements``, and ``embed[i]`` the parent index.
    """
    elems = sorted(int(e) for e in set(elements))
    pos = {e: i for i, e in enumerate(elems)}
    emb = np.asarray(elems, dtype=np.int64)

    def restrict(table, law):
        sub = table[np.ix_(emb, emb)] if table.ndim == 2 else table[emb]
        try:
            return [[pos[int(v)] for v in row] for row in sub] if sub.ndim == 2 else [pos[int(v)] for v in sub]
        except KeyError:
            raise XmodkitError(f"subset is not closed under {law}") from None

    if G.zero not in pos:
        raise XmodkitError("subset does not contain zero")
    sig = G.signature
    H = OmegaGroup.from_tables(
        sig,
        restrict(G.add_table, "+"), restrict(G.neg_table, "neg"), pos[G.zero],
        {s: restrict(G.star_table(s), s) for s in sig.star_ops},
        {w: restrict(G.unary_table(w), w) for w in sig.unary_ops},
        name=name,
    )
    return H, _frozen(emb)


def kernel(phi, target: OmegaGroup) -> list[int]:
    return [int(i) for i in np.flatnonzero(np.asarray(phi) == target.zero)]


# --------------------------------------------------------------------------
# generators and closure-based map search

def closure(G: OmegaGroup, seeds: Sequence[int]) -> set[int]:
    known = {G.zero, *(int(s) for s in seeds)}
    order = list(known)
    stars = [G.star_table(s).tolist() for s in G.signature.star_ops]
    unary = [G.unary_table(w).tolist() for w in G.signature.unary_ops]
    add, neg = G._add_py, G._neg_py
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        new = [neg[x]] + [u[x] for u in unary]
        for y in order[:i]:
            new += [add[x][y], add[y][x]]
            for t in stars:
                new += [t[x][y], t[y][x]]
        for z in new:
            if z not in known:
                known.add(z)
                order.append(z)
    return known


def generators(G: OmegaGroup) -> list[int]:
    """A small generating set, chosen greedily in index order."""
    if G.is_vector:
        return [int(b) for b in G.basis]
    gens: list[int] = []
    span = closure(G, [])
    for x in range(G.size):
        if x not in span:
            gens.append(x)
            span = closure(G, gens)
            if len(span) == G.size:
                break
    return gens


def propagate(G: OmegaGroup, seed: dict[int, Any], rules) -> dict | None:
    """Extend values given on generators to all of ``G``.

    ``rules`` supplies ``plus(x, y, vx, vy)``, ``neg(x, vx)``,
    ``star(sym, x, y, vx, vy)`` and ``unary(sym, x, vx)`` computing the value
    forced on the combined element.  Every pair is visited, so the returned
    assignment is consistent with every rule, or None on the first conflict.
    """
    val = dict(seed)
    order = list(val)
    stars = [(s, G.star_table(s).tolist()) for s in G.signature.star_ops]
    unary = [(w, G.unary_table(w).tolist()) for w in G.signature.unary_ops]
    add, negt = G._add_py, G._neg_py

    def put(z, v):
        if z in val:
            return val[z] == v
        val[z] = v
        order.append(z)
        return True

    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        vx = val[x]
        if not put(negt[x], rules.neg(x, vx)):
            return None
        for w, u in unary:
            if not put(u[x], rules.unary(w, x, vx)):
                return None
        for y in order[:i]:
            vy = val[y]
            if not put(add[x][y], rules.plus(x, y, vx, vy)):
                return None
            if not put(add[y][x], rules.plus(y, x, vy, vx)):
                return None
            for s, t in stars:
                if not put(t[x][y], rules.star(s, x, y, vx, vy)):
                    return None
                if not put(t[y][x], rules.star(s, y, x, vy, vx)):
                    return None
    return val


class _HomRules:
    def __init__(self, B: OmegaGroup):
        self.B = B

    def plus(self, x, y, vx, vy):
        return self.B.add(vx, vy)

    def neg(self, x, vx):
        return self.B.neg(vx)

    def star(self, s, x, y, vx, vy):
        return self.B.star(s, vx, vy)

    def unary(self, w, x, vx):
        return self.B.unary(w, vx)


def homomorphisms(A: OmegaGroup, B: OmegaGroup, cap: int = BRUTE_CAP) -> Iterator[np.ndarray]:
    """All morphisms ``A -> B``, by assigning generator images and propagating."""
    require_same_signature(A, B)
    gens = generators(A)
    if B.size ** len(gens) > cap:
        raise CapExceeded(f"{B.size}^{len(gens)} generator assignments exceed cap {cap}")
    rules = _HomRules(B)
    for images in itertools.product(range(B.size), repeat=len(gens)):
        seed = {A.zero: B.zero}
        clash = False
        for g, v in zip(gens, images):
            if seed.get(g, v) != v:
                clash = True
            seed[g] = v
        if clash:
            continue
        val = propagate(A, seed, rules)
        if val is None or len(val) != A.size:
            continue
        phi = _frozen([val[i] for i in range(A.size)])
        if is_morphism(A, B, phi):
            yield phi


def isomorphisms(A: OmegaGroup, B: OmegaGroup, cap: int = BRUTE_CAP) -> Iterator[np.ndarray]:
    if A.size != B.size:
        return
    for phi in homomorphisms(A, B, cap):
        if len(set(phi.tolist())) == A.size:
            yield phi


def maps_equal(a, b) -> bool:
    return np.array_equal(np.asarray(a), np.asarray(b))


def groups_equal(A: OmegaGroup, B: OmegaGroup) -> bool:
    """Same signature shape and identical operation tables."""
    if A is B:
        return True
    if not A.signature.compatible(B.signature) or A.size != B.size or A.zero != B.zero:
        return False
    if A.is_vector and B.is_vector:
        a, b = A.backend, B.backend
        return (a.p == b.p and a.d == b.d
                and all(np.array_equal(a.tensors[k], b.tensors[k]) for k in a.tensors)
                and all(np.array_equal(a.matrices[k], b.matrices[k]) for k in a.matrices))
    return (np.array_equal(A.add_table, B.add_table)
            and np.array_equal(A.neg_table, B.neg_table)
            and all(np.array_equal(A.star_table(s), B.star_table(s)) for s in A.signature.star_ops)
            and all(np.array_equal(A.unary_table(w), B.unary_table(w)) for w in A.signature.unary_ops))


def matrix_map(A: OmegaGroup, B: OmegaGroup, M) -> np.ndarray:
    """Index table of the F_p-linear map with matrix ``M`` (shape d_B x d_A)."""
    M = np.asarray(M, dtype=np.int64)
    if not (A.is_vector and B.is_vector) or M.shape != (B.backend.d, A.backend.d):
        raise MalformedBackend(f"matrix of shape {M.shape} does not fit {A!r} -> {B!r}")
    return _frozen(B.vec_to_index(A.coords @ M.T))
