import numpy as np
import pytest

import samplers
from xmodkit import core, fixtures as fx
from xmodkit.errors import (MooreTooLong, NotSimplicial, PrecrossedTarget,
                            RestrictionEscapesKernel, SourceTargetMismatch)
from xmodkit.homotopy import (are_homotopy_equivalent, enumerate_derivations,
                              homotopy_target, identity_derivation)
from xmodkit.simplicial import (SimplicialMap, TruncatedSimplicialObject, compose_simplicial_maps,
                                constant_homotopy,
                                constant_simplicial, identity_simplicial_map,
                                validate_simplicial, validate_simplicial_homotopy)
from xmodkit.transfer import (check_main2, lift_derivation, nerve, nerve_map, x1_map,
                              x1_object, zeta)
from xmodkit.xmod import (compose_morphisms, enumerate_morphisms, find_isomorphism,
                          identity_morphism, validate_crossed_module)

CATALOGUE = fx.all_xmods()


def _level_two_only(G):
    """Zero at levels 0 and 1, G at level 2, every structure map zero."""
    T = fx.trivial_group(G.signature)
    z = lambda A, B: core.zero_map(A, B)
    return TruncatedSimplicialObject.build(
        [T, T, G], [(), [z(T, T)] * 2, [z(G, T)] * 3], [[z(T, T)], [z(T, G)] * 2])


def test_round_trip_on_small_fixtures():
    for name in ("id(Z2)", "0(Z2)", "A3<S3", "Z4->Z2", "id(F3[x]/x^2)"):
        X = CATALOGUE[name]
        Y = x1_object(nerve(X, 2))
        assert validate_crossed_module(Y).ok
        assert find_isomorphism(X, Y) is not None, name


def test_round_trip_keeps_the_tables():
    X = CATALOGUE["Z3-0->S3"]
    Y = x1_object(nerve(X, 2))
    assert np.array_equal(Y.E.add_table, X.E.add_table)
    assert np.array_equal(Y.boundary, X.boundary)
    assert np.array_equal(Y.action.dot, X.action.dot)


def test_constant_object_has_zero_kernel():
    Y = x1_object(constant_simplicial(fx.s3()))
    assert Y.E.size == 1 and Y.R.size == 6


def test_trivial_nerve():
    S = nerve(CATALOGUE["trivial"], 3)
    assert [A.size for A in S.levels] == [1, 1, 1, 1]


def test_x1_preconditions():
    S = _level_two_only(fx.cyclic(2))
    assert validate_simplicial(S).ok
    with pytest.raises(MooreTooLong):
        x1_object(S)
    with pytest.raises(NotSimplicial):
        x1_object(constant_simplicial(fx.cyclic(2), 0))
    N = nerve(CATALOGUE["id(Z3)"], 2)
    d0, d1 = N.faces[1]
    broken = TruncatedSimplicialObject.build(N.levels, [(), [d1, d0], N.faces[2]], N.degeneracies)
    with pytest.raises(NotSimplicial):
        x1_object(broken)


def test_nerve_refuses_precrossed():
    with pytest.raises(PrecrossedTarget):
        nerve(fx.sign_precrossed())


def test_x1_of_identity_map():
    S = nerve(CATALOGUE["id(S3)"], 2)
    m = x1_map(identity_simplicial_map(S))
    assert m.f1.tolist() == list(range(6)) and m.f0.tolist() == list(range(6))


def test_x1_inverts_nerve_on_morphisms():
    for _, f, _ in samplers.morphism_pool()[::9]:
        m = x1_map(nerve_map(f, 2))
        assert np.array_equal(m.f1, f.f1) and np.array_equal(m.f0, f.f0)


def test_x1_is_functorial():
    X, Y, Z = CATALOGUE["0(Z2)"], CATALOGUE["0(Klein)"], CATALOGUE["0(Z2)"]
    A, B, C = nerve(X), nerve(Y), nerve(Z)
    for f in list(enumerate_morphisms(X, Y))[:6]:
        for g in list(enumerate_morphisms(Y, Z))[:6]:
            nf, ng = nerve_map(f, 2, A, B), nerve_map(g, 2, B, C)
            lhs = x1_map(compose_simplicial_maps(ng, nf))
            rhs = compose_morphisms(x1_map(ng), x1_map(nf))
            assert np.array_equal(lhs.f1, rhs.f1) and np.array_equal(lhs.f0, rhs.f0)


def test_restriction_must_stay_in_the_kernel():
    S = nerve(CATALOGUE["id(Z2)"], 2)
    maps = [core.identity_map(L) for L in S.levels]
    maps[1] = np.array([0, 1, 3, 2])
    with pytest.raises(RestrictionEscapesKernel):
        x1_map(SimplicialMap.build(S, S, maps), check=False)
    with pytest.raises(NotSimplicial):
        x1_map(SimplicialMap.build(S, S, maps))


def test_constant_homotopy_transfers_to_null_derivation():
    S = nerve(CATALOGUE["id(S3)"], 2)
    out = zeta(constant_homotopy(identity_simplicial_map(S)))
    assert out.success
    assert out.derivation.s.tolist() == [0] * 6


@pytest.mark.parametrize("name", ["id(Z2)", "0(Klein)", "id(S3)", "A3<S3", "Z3-0->S3",
                                  "id(T3)", "span(n)<T3", "id(phi-dias)"])
def test_zeta_recovers_lifted_derivations(name):
    X = CATALOGUE[name]
    S = nerve(X, 2)
    for d in enumerate_derivations(identity_morphism(X)):
        H = lift_derivation(d, S, S)
        assert validate_simplicial_homotopy(H).ok
        out = zeta(H)
        assert out.success, out.report.failed()
        assert np.array_equal(out.derivation.s, d.s)
        assert {"image in Ker d_0", "level-2 element in Ker d_0",
                "level-2 element in Ker d_1"} <= set(out.report.checks)


def test_zeta_between_different_nerves():
    X, Y = CATALOGUE["Z4->Z2"], CATALOGUE["0(Klein)"]
    A, B = nerve(X), nerve(Y)
    for f in enumerate_morphisms(X, Y):
        for d in enumerate_derivations(f)[:4]:
            H = lift_derivation(d, A, B)
            out = zeta(H)
            assert out.success and np.array_equal(out.derivation.s, d.s)
            g, back = homotopy_target(d), x1_map(H.g)
            assert np.array_equal(back.f1, g.f1) and np.array_equal(back.f0, g.f0)


def test_check_main2_identity():
    S = nerve(CATALOGUE["A3<S3"], 2)
    ident = identity_simplicial_map(S)
    H = constant_homotopy(ident)
    assert check_main2(S, S, ident, ident, H, H)


def test_check_main2_from_a_crossed_module_equivalence():
    X, Y = CATALOGUE["id(Z2)"], CATALOGUE["trivial"]
    f, g, d_gf, d_fg = are_homotopy_equivalent(X, Y)
    A, B = nerve(X), nerve(Y)
    nf, ng = nerve_map(f, 2, A, B), nerve_map(g, 2, B, A)
    H1 = lift_derivation(d_fg, B, B)
    H2 = lift_derivation(d_gf, A, A)
    assert check_main2(A, B, nf, ng, H1, H2)


def test_check_main2_rejects_mismatched_maps():
    S = nerve(CATALOGUE["id(Z2)"], 2)
    T = nerve(CATALOGUE["trivial"], 2)
    ident = identity_simplicial_map(S)
    H = constant_homotopy(ident)
    with pytest.raises(SourceTargetMismatch):
        check_main2(S, T, ident, ident, H, H)


def test_null_derivation_lifts_to_the_constant_homotopy():
    X = CATALOGUE["id(S3)"]
    S = nerve(X, 2)
    f = identity_morphism(X)
    H = lift_derivation(identity_derivation(f), S, S)
    C = constant_homotopy(nerve_map(f, 2, S, S))
    for key in C.h:
        assert np.array_equal(H.h[key], C.h[key])
