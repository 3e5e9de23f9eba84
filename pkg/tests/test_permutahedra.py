import itertools
from fractions import Fraction

import pytest

from enveloping.exactlin import Vector
from enveloping.permutahedra import (
    OrderedPartition,
    act,
    act_vector,
    all_faces,
    boundary,
    build_contraction,
    chain_complex,
    enumerate_faces,
    nu,
    nu_vector,
)


def brute_force_faces(n, d):
    """Independent oracle: surjections {1..n} -> {1..d} up to nothing."""
    found = set()
    for values in itertools.product(range(1, d + 1), repeat=n):
        if set(values) != set(range(1, d + 1)):
            continue
        blocks = tuple(
            tuple(i for i in range(1, n + 1) if values[i - 1] == j)
            for j in range(1, d + 1)
        )
        found.add(blocks)
    return found


@pytest.mark.parametrize("n,total", [(1, 1), (2, 3), (3, 13), (4, 75)])
def test_face_counts(n, total):
    faces = all_faces(n)
    assert len(faces) == total
    assert len(set(faces)) == total
    for d in range(1, n + 1):
        got = {f.blocks for f in enumerate_faces(n, d)}
        assert got == brute_force_faces(n, d)


def test_single_faces():
    assert enumerate_faces(1, 1)[0].blocks == ((1,),)
    top = enumerate_faces(3, 1)[0]
    assert top.blocks == ((1, 2, 3),) and top.dim == 2


def F(*blocks):
    n = sum(len(b) for b in blocks)
    return OrderedPartition(n, blocks)


def test_boundary_of_vertex_and_edge():
    assert boundary(F((1,), (2,))).is_zero()
    b = boundary(F((1, 2)))
    assert b == Vector({F((1,), (2,)): Fraction(-1), F((2,), (1,)): Fraction(1)})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_boundary_squares_to_zero(n):
    for f in all_faces(n):
        assert boundary(f).apply(boundary).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_homology_is_one_point(n):
    dims = chain_complex(n).homology_dims()
    assert dims == {0: 1}


def test_action_signs():
    f = F((1,), (2,))
    assert act((1, 2), f) == (1, f)
    assert act((2, 1), f) == (1, F((2,), (1,)))
    assert act((2, 1), F((1, 2))) == (-1, F((1, 2)))


def test_action_is_chain_map_and_multiplicative():
    for sigma in itertools.permutations((1, 2, 3)):
        for f in all_faces(3):
            lhs = act_vector(sigma, boundary(f))
            s, g = act(sigma, f)
            assert boundary(g).scaled(s) == lhs
    for sigma in itertools.permutations((1, 2, 3)):
        for tau in itertools.permutations((1, 2, 3)):
            composite = tuple(sigma[tau[i - 1] - 1] for i in (1, 2, 3))
            for f in all_faces(3):
                s1, g1 = act(tau, f)
                s2, g2 = act(sigma, g1)
                s3, g3 = act(composite, f)
                assert (s1 * s2, g2) == (s3, g3)


def test_involution_values_and_properties():
    assert nu(F((1,), (2,))) == (1, F((2,), (1,)))
    assert nu(F((1, 2))) == (-1, F((1, 2)))
    for n in (2, 3, 4):
        for f in all_faces(n):
            s, g = nu(f)
            s2, back = nu(g)
            assert (s * s2, back) == (1, f)
            assert nu_vector(boundary(f)) == boundary(g).scaled(s)
    # commutes with the symmetric group action
    for sigma in itertools.permutations((1, 2, 3)):
        for f in all_faces(3):
            v = Vector.unit(f)
            assert act_vector(sigma, nu_vector(v)) == nu_vector(act_vector(sigma, v))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_contraction_identities(n):
    con = build_contraction(n)
    faces = all_faces(n)
    # FG = 1 on scalars
    assert con.F(con.G(Fraction(1))) == 1
    for f in faces:
        v = Vector.unit(f)
        # homotopy identity
        lhs = v - con.GF(v)
        rhs = boundary_vec(con.H(v)) + con.H(boundary_vec(v))
        assert lhs == rhs, (n, f)
        # side conditions
        assert con.F(con.H(v)) == 0
        assert con.H(con.H(v)).is_zero()
    assert con.H(con.G(Fraction(1))).is_zero()
    # H kills the top cell
    assert con.H(Vector.unit(con.top_cell)).is_zero()


def boundary_vec(v):
    return v.apply(boundary)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_contraction_equivariance(n):
    con = build_contraction(n)
    gens = []
    for i in range(1, n):
        sigma = list(range(1, n + 1))
        sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
        gens.append(tuple(sigma))
    for f in all_faces(n):
        v = Vector.unit(f)
        hv = con.H(v)
        for sigma in gens:
            assert con.H(act_vector(sigma, v)) == act_vector(sigma, hv)
        assert con.H(nu_vector(v)) == nu_vector(hv)


def test_n2_homotopy_matches_hand_computation():
    con = build_contraction(2)
    e12 = F((1,), (2,))
    e21 = F((2,), (1,))
    top = F((1, 2))
    assert con.H(Vector.unit(e12)) == Vector.unit(top, Fraction(-1, 2))
    assert con.H(Vector.unit(e21)) == Vector.unit(top, Fraction(1, 2))


def test_face_serialization():
    f = F((1, 3), (2,))
    assert f.serialize() == [[1, 3], [2]]
