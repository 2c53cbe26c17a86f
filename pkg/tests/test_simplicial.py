import numpy as np
import pytest

from xmodkit import core, fixtures as fx
from xmodkit.errors import LevelMismatch, XmodkitError
from xmodkit.simplicial import (SimplicialHomotopy, SimplicialMap, TruncatedSimplicialObject,
                                compose_simplicial_maps, constant_homotopy, constant_simplicial,
                                identity_simplicial_map, moore_complex, moore_length_at_most,
                                validate_simplicial, validate_simplicial_homotopy,
                                validate_simplicial_map)
from xmodkit.transfer import nerve, nerve_map
from xmodkit.xmod import enumerate_morphisms

CATALOGUE = fx.all_xmods()


def _replace_faces(S, n, new_row):
    faces = [list(r) for r in S.faces]
    faces[n] = new_row
    return TruncatedSimplicialObject.build(S.levels, faces, S.degeneracies)


def test_constant_object():
    S = constant_simplicial(fx.s3())
    rep = validate_simplicial(S)
    assert rep.ok and not rep.not_checked
    assert moore_complex(S).sizes() == [6, 1, 1]
    assert moore_length_at_most(S, 0)


def test_truncation_bookkeeping_at_level_one():
    S = constant_simplicial(fx.cyclic(3), N=1)
    rep = validate_simplicial(S)
    assert rep.ok
    assert any(c.startswith("(i)") for c in rep.not_checked)
    assert "(iii) d_j s_j = id [n=0, j=0]" in rep.checks


def test_nerve_of_identity_on_z2():
    S = nerve(CATALOGUE["id(Z2)"], 2)
    assert [A.size for A in S.levels] == [2, 4, 8]
    assert validate_simplicial(S).ok
    assert moore_complex(S).sizes() == [2, 2, 1]


def test_nerve_face_formulas():
    X = CATALOGUE["Z4->Z2"]
    S = nerve(X, 2)
    nE, nR = X.E.size, X.R.size
    idx = lambda e2, e1, r: (e2 * nE + e1) * nR + r
    for e2 in range(nE):
        for e1 in range(nE):
            for r in range(nR):
                x = idx(e2, e1, r)
                assert S.d(2, 0)[x] == e1 * nR + r
                assert S.d(2, 1)[x] == X.E.add(e2, e1) * nR + r
                assert S.d(2, 2)[x] == e2 * nR + X.R.add(int(X.boundary[e1]), r)
    for e in range(nE):
        for r in range(nR):
            assert S.s(1, 0)[e * nR + r] == idx(0, e, r)
            assert S.s(1, 1)[e * nR + r] == idx(e, 0, r)


def test_swapped_faces_break_degeneracy_identity():
    X = CATALOGUE["id(Z2)"]
    S = nerve(X, 2)
    d0, d1, d2 = S.faces[2]
    bad = _replace_faces(S, 2, [d1, d0, d2])
    rep = validate_simplicial(bad)
    law = "(iii) d_j s_j = id [n=1, j=1]"
    assert law in rep.failed()
    # loop oracle for the first failing element
    s1 = S.s(1, 1)
    expected = next(x for x in range(S.levels[1].size) if d0[s1[x]] != x)
    v = rep.first(law)
    assert v.assignment == {"x": expected}
    assert v.lhs == int(d0[s1[expected]]) and v.rhs == expected


def test_swapped_lowest_faces_are_caught():
    S = nerve(CATALOGUE["id(Z3)"], 2)
    d0, d1 = S.faces[1]
    rep = validate_simplicial(_replace_faces(S, 1, [d1, d0]))
    assert not rep.ok


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_nerves_are_simplicial_with_short_moore_complex(name):
    X = CATALOGUE[name]
    S = nerve(X, 2)
    assert validate_simplicial(S).ok
    M = moore_complex(S)
    assert M.report.ok
    assert M.sizes() == [X.R.size, X.E.size, 1]
    assert moore_length_at_most(S, 1)


def test_higher_nerves():
    for N in (3, 4):
        S = nerve(CATALOGUE["id(Z2)"], N)
        assert validate_simplicial(S).ok
        assert moore_complex(S).sizes() == [2, 2] + [1] * (N - 1)
    with pytest.raises(XmodkitError):
        nerve(CATALOGUE["id(Z2)"], 5)


def test_moore_chain_condition_on_nerve_of_s3():
    S = nerve(CATALOGUE["id(S3)"], 3)
    M = moore_complex(S)
    assert "boundary 1 after boundary 2 = 0" in M.report.checks
    assert M.report.ok


def test_zero_object():
    S = constant_simplicial(fx.trivial_group())
    assert moore_complex(S).sizes() == [1, 1, 1]


def test_level_mismatch():
    G = fx.cyclic(2)
    ident = core.identity_map(G)
    with pytest.raises(LevelMismatch):
        TruncatedSimplicialObject.build([G, G], [[ident]], [[ident]])
    with pytest.raises(LevelMismatch):
        TruncatedSimplicialObject.build([G, G], [[ident, ident]], [])
    A = constant_simplicial(G, 2)
    B = constant_simplicial(G, 1)
    with pytest.raises(LevelMismatch):
        validate_simplicial_map(SimplicialMap(A, B, tuple([ident] * 3)))


def test_nerve_maps_are_simplicial():
    X, Y = CATALOGUE["A3<S3"], CATALOGUE["id(S3)"]
    A, B = nerve(X), nerve(Y)
    for m in enumerate_morphisms(X, Y):
        assert validate_simplicial_map(nerve_map(m, 2, A, B)).ok


def test_map_that_ignores_d0_is_rejected():
    S = nerve(CATALOGUE["id(Z2)"], 2)
    maps = [core.identity_map(L) for L in S.levels]
    # swap (1, 0) and (1, 1) at level 1 only
    maps[1] = np.array([0, 1, 3, 2])
    rep = validate_simplicial_map(SimplicialMap.build(S, S, maps))
    assert "f d_i = d_i f [n=1, i=0]" in rep.failed()


def test_identity_map_and_composition():
    S = nerve(CATALOGUE["id(S3)"], 2)
    ident = identity_simplicial_map(S)
    assert validate_simplicial_map(ident).ok
    assert validate_simplicial_map(compose_simplicial_maps(ident, ident)).ok


def test_constant_homotopy_is_valid():
    X, Y = CATALOGUE["0(Klein)"], CATALOGUE["0(Z2)"]
    A, B = nerve(X), nerve(Y)
    for m in enumerate_morphisms(X, Y):
        H = constant_homotopy(nerve_map(m, 2, A, B))
        rep = validate_simplicial_homotopy(H)
        assert rep.ok
        assert "(i) d_0 h_0 = f [n=0]" in rep.checks


def test_broken_homotopy_is_caught():
    S = constant_simplicial(fx.cyclic(3), 2)
    H = constant_homotopy(identity_simplicial_map(S))
    h = dict(H.h)
    h[(0, 0)] = np.array([0, 2, 1])
    rep = validate_simplicial_homotopy(SimplicialHomotopy.build(H.f, H.g, h))
    assert "(i) d_0 h_0 = f [n=0]" in rep.failed()
