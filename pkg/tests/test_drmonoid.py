import random
from itertools import product

import pytest

from drwitt.drmonoid import (AdelicModel, build_dr_monoid, check_monoid_axioms, check_projection,
                             dr_congruent, dr_key, functions_through, identity_congruence,
                             orbit_decomposition, projection, psi_action, random_congruence,
                             sim_N_congruence, torsion_field_galois, vector_congruence)
from drwitt.quadfield import QuadField, QuadIdeal, iter_ideals, parse_ideal, ray_class_group


@pytest.fixture(scope="module")
def Qi():
    return QuadField(1)


def T_of(K, lit):
    return build_dr_monoid(K, parse_ideal(K, lit))


def test_congruence_examples(Qi):
    one = QuadIdeal.unit(Qi)
    three = QuadIdeal.from_int(Qi, 3)
    assert not dr_congruent(one, three, three)
    for A in iter_ideals(Qi, 20):
        assert dr_congruent(A, A, three)
        for B in iter_ideals(Qi, 10):
            assert dr_congruent(A, B, one)


@pytest.mark.parametrize("d,lit", [(1, "(3)"), (1, "(2+2i)"), (5, "(2)"), (3, "(2)")])
def test_fast_key_matches_definition(d, lit):
    K = QuadField(d)
    f = parse_ideal(K, lit)
    pool = list(iter_ideals(K, 25))
    for A in pool:
        for B in pool:
            assert (dr_key(A, f) == dr_key(B, f)) == dr_congruent(A, B, f), (A, B)


@pytest.mark.parametrize("d,lit,size", [(1, "(2)", 3), (1, "(3)", 3), (5, "(1)", 2)])
def test_sizes(d, lit, size):
    T = T_of(QuadField(d), lit)
    assert len(T) == size
    assert check_monoid_axioms(T)


def test_verify_mode(Qi):
    assert len(build_dr_monoid(Qi, parse_ideal(Qi, "(6)"), verify=True)) == len(T_of(Qi, "(6)"))


def test_orbit_decomposition(Qi):
    dec = orbit_decomposition(T_of(Qi, "(2)"))
    assert sorted(len(v) for v in dec.values()) == [1, 1, 1]
    T = T_of(Qi, "(3)")
    dec = orbit_decomposition(T)
    assert len(dec[QuadIdeal.unit(Qi)]) == 2
    assert len(dec[QuadIdeal.from_int(Qi, 3)]) == 1
    assert sorted(dec[QuadIdeal.unit(Qi)]) == sorted(T.units)


def test_projection(Qi):
    T12, T6, T2 = (T_of(Qi, f"({n})") for n in (12, 6, 2))
    assert projection(T6, T6) == list(range(len(T6)))
    p62 = projection(T6, T2)
    assert check_projection(T6, T2, p62)
    p126 = projection(T12, T6)
    assert [p62[i] for i in p126] == projection(T12, T2)
    with pytest.raises(ValueError):
        projection(T2, T6)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_adelic_round_trip(Qi, N):
    T = T_of(Qi, f"({N})")
    model = AdelicModel(T, N)
    enc = [model.encode(i) for i in range(len(T))]
    assert len(set(enc)) == len(T)
    assert all(model.decode(x) == i for i, x in enumerate(enc))
    for i, j in product(range(len(T)), repeat=2):
        assert model.multiply(enc[i], enc[j]) == enc[T.mul[i][j]]
    assert enc[T.index_of(QuadIdeal.from_int(Qi, N))].rho == (0, 0)


def test_psi_action(Qi):
    T = T_of(Qi, "(6)")
    rng = random.Random(1)
    xi = [rng.randrange(5) for _ in range(len(T))]
    assert psi_action(T, xi, QuadIdeal.unit(Qi)) == xi
    P, Q = parse_ideal(Qi, "(2+i)"), parse_ideal(Qi, "(1+i)")
    assert psi_action(T, psi_action(T, xi, P), Q) == psi_action(T, psi_action(T, xi, Q), P)
    assert psi_action(T, [7] * len(T), P) == [7] * len(T)


def _brute_force(T, xi):
    n = len(T)
    part = []
    for x in range(n):
        for y in range(x):
            if all(xi[T.mul[x][z]] == xi[T.mul[y][z]] for z in range(n)):
                part.append(part[y])
                break
        else:
            part.append(x)
    return part


def test_vector_congruence(Qi):
    T = T_of(Qi, "(6)")
    n = len(T)
    assert vector_congruence(T, [list(range(n))]) == identity_congruence(T)
    assert len(vector_congruence(T, [[0] * n]).blocks()) == 1
    rng = random.Random(4)
    for _ in range(5):
        xi = [rng.randrange(2) for _ in range(n)]
        Q = vector_congruence(T, [xi])
        assert Q.is_congruence()
        brute = _brute_force(T, xi)
        assert all((Q.partition[x] == Q.partition[y]) == (brute[x] == brute[y])
                   for x in range(n) for y in range(n))


def test_functions_through(Qi):
    T = T_of(Qi, "(6)")
    n = len(T)
    assert len(functions_through(identity_congruence(T))) == n
    full = vector_congruence(T, [[0] * n])
    assert functions_through(full) == [[1] * n]
    rng = random.Random(6)
    for _ in range(5):
        Q = random_congruence(T, rng)
        assert vector_congruence(T, functions_through(Q)) == Q


def test_torsion_field_galois(Qi):
    C3 = ray_class_group(Qi, QuadIdeal.from_int(Qi, 3))
    assert torsion_field_galois(Qi, 3, (1, 0)).group.order == C3.order
    assert torsion_field_galois(Qi, 3, (0, 0)).group.order == 1
    # 3 is inert, so every nonzero residue mod 3 is a unit
    for x, y in product(range(3), repeat=2):
        if (x, y) != (0, 0):
            assert torsion_field_galois(Qi, 3, (x, y)).dbar.is_unit_ideal()
    gal = torsion_field_galois(Qi, 2, (1, 1))
    assert gal.dbar == parse_ideal(Qi, "(1+i)")


@pytest.mark.parametrize("d,N", [(1, 2), (1, 3), (2, 2), (5, 2)])
def test_sim_N_is_congruence(d, N):
    K = QuadField(d)
    T = build_dr_monoid(K, QuadIdeal.from_int(K, N))
    Q = sim_N_congruence(T, N)
    assert Q.is_congruence()
    # different gcd components are never identified
    for x, y in product(range(len(T)), repeat=2):
        if Q.partition[x] == Q.partition[y]:
            assert T.orbit_label[x] == T.orbit_label[y]
