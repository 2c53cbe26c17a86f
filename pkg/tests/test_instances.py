import numpy as np
import pytest

import oracles
from xmodkit import fixtures as fx
from xmodkit.core import OmegaGroup, Signature, validate_omega_group
from xmodkit.errors import CharTwo, KindMismatch, NotLinear
from xmodkit.homotopy import (Derivation, enumerate_derivations, identity_derivation,
                              validate_derivation)
from xmodkit.instances import (FUNCTORS, dialg_to_leibniz, encode, functor_commutes_with_target,
                               liezation, specialized_derivation_check, transport_homotopy)
from xmodkit.xmod import identity_morphism, validate_crossed_module

CATALOGUE = fx.all_xmods()

# (source derivations, direct derivations in the image kind) at f = id, by loop search
TRANSPORT_COUNTS = {
    ("liezation", "id(T3)"): (10, 15),
    ("liezation", "id(F3[x]/x^2)"): (4, 81),
    ("liezation", "span(n)<T3"): (9, 9),
    ("dialg_to_leibniz", "id(T3 as dias)"): (10, 15),
    ("dialg_to_leibniz", "id(phi-dias)"): (4, 7),
}


def _kind(X):
    return X.signature.kind


def test_encode():
    enc = encode(fx.phi_dialgebra(3))
    assert enc.kind == "dias" and set(enc.op_dictionary) == {"vdash", "dashv"}
    assert encode(fx.s3()).op_dictionary == {}
    table_assoc = OmegaGroup.from_tables(Signature.preset("assoc"), [[0, 1], [1, 0]], [0, 1], 0,
                                         {"mul": [[0, 0], [0, 1]]})
    with pytest.raises(KindMismatch):
        encode(table_assoc)


def test_presets_validate():
    for G in (fx.triangular(3), fx.phi_dialgebra(3), fx.abelian_lie(),
              fx.assoc_as_dialgebra(fx.triangular(3))):
        assert validate_omega_group(G).ok, G.name


def test_null_derivation_under_every_kind():
    for X in CATALOGUE.values():
        d = identity_derivation(identity_morphism(X))
        assert specialized_derivation_check(_kind(X), d).ok


def test_abelian_lie_every_linear_map_passes():
    f = identity_morphism(CATALOGUE["id(abelian lie)"])
    n = 0
    for s in oracles.linear_maps(f.source.R, f.target.E):
        d = Derivation.build(f, s)
        assert specialized_derivation_check("lie", d).ok
        assert validate_derivation(d).ok
        n += 1
    assert n == 81


@pytest.mark.parametrize("name", ["id(F2[x]/x^2)", "id(F3[x]/x^2)", "id(T3)", "span(n)<T3",
                                  "id(phi-dias)", "id(T3 as dias)"])
def test_specialized_agrees_with_generic_on_linear_maps(name):
    X = CATALOGUE[name]
    f = identity_morphism(X)
    for s in oracles.linear_maps(f.source.R, f.target.E):
        d = Derivation.build(f, s)
        assert specialized_derivation_check(_kind(X), d).ok == validate_derivation(d).ok


@pytest.mark.parametrize("name", ["id(Z3)", "0(Klein)", "A3<S3", "Z3-0->S3"])
def test_group_formula_agrees_with_generic_on_all_maps(name):
    X = CATALOGUE[name]
    f = identity_morphism(X)
    for s in oracles.all_maps(X.R.size, X.E.size):
        d = Derivation.build(f, s)
        assert specialized_derivation_check("group", d).ok == validate_derivation(d).ok


def test_algebra_kinds_need_linear_maps():
    f = identity_morphism(CATALOGUE["id(F2[x]/x^2)"])
    with pytest.raises(NotLinear):
        specialized_derivation_check("assoc", Derivation.build(f, [0, 1, 1, 1]))


def test_kind_mismatch():
    d = identity_derivation(identity_morphism(CATALOGUE["id(T3)"]))
    with pytest.raises(KindMismatch):
        specialized_derivation_check("lie", d)
    with pytest.raises(KindMismatch):
        liezation(CATALOGUE["id(S3)"])
    with pytest.raises(KindMismatch):
        dialg_to_leibniz(CATALOGUE["id(T3)"])


def test_liezation_needs_odd_characteristic():
    with pytest.raises(CharTwo):
        liezation(CATALOGUE["id(F2[x]/x^2)"])


def test_commutative_source_gives_abelian_bracket():
    L = liezation(CATALOGUE["id(F3[x]/x^2)"])
    assert not L.E.backend.tensors["br"].any()
    assert validate_crossed_module(L).ok


def test_noncommutative_source_gives_nonzero_bracket():
    L = liezation(CATALOGUE["id(T3)"])
    assert L.E.backend.tensors["br"].any()
    assert _kind(L) == "lie"
    assert validate_crossed_module(L).ok
    assert validate_crossed_module(liezation(CATALOGUE["span(n)<T3"])).ok


def test_dialgebra_with_equal_products_gives_the_commutator():
    lb = dialg_to_leibniz(CATALOGUE["id(T3 as dias)"])
    lie = liezation(CATALOGUE["id(T3)"])
    assert np.array_equal(lb.E.backend.tensors["br"] % 3, lie.E.backend.tensors["br"] % 3)
    assert validate_crossed_module(lb).ok
    assert validate_crossed_module(dialg_to_leibniz(CATALOGUE["id(phi-dias)"])).ok


def test_transport_of_null_derivation():
    X = CATALOGUE["id(T3)"]
    d = transport_homotopy(liezation, identity_derivation(identity_morphism(X)))
    assert not d.s.any()


@pytest.mark.parametrize("functor,name", sorted(TRANSPORT_COUNTS))
def test_transport_lands_inside_the_image_kind(functor, name):
    F = FUNCTORS[functor]
    X = CATALOGUE[name]
    FX = F(X)
    f = identity_morphism(X)
    moved = []
    for d in enumerate_derivations(f):
        t = transport_homotopy(F, d, FX, FX)
        assert specialized_derivation_check(_kind(FX), t).ok
        assert functor_commutes_with_target(F, d, FX, FX)
        moved.append(t.s.tolist())
    direct = [d.s.tolist() for d in enumerate_derivations(identity_morphism(FX))]
    assert (len(moved), len(direct)) == TRANSPORT_COUNTS[(functor, name)]
    assert set(map(tuple, moved)) <= set(map(tuple, direct))
    assert direct == oracles.brute_derivations(identity_morphism(FX))
