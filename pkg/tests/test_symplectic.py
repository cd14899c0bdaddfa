import random
from fractions import Fraction

import mpmath
import pytest

from drwitt.quadfield import QuadField, QuadIdeal, iter_ideals
from drwitt.symplectic import (CMPointData, GSpElement, SiegelPoint, TypeDelta, congruent_form,
                               decompose_idele_g1, frobenius_reduce, gsp_act, mat_mul, mobius,
                               mult_matrix, random_alternating, random_gsp, riemann_form_cm,
                               tau_from_basis)


def test_frobenius_examples():
    U, delta = frobenius_reduce([[0, 1], [-1, 0]])
    assert delta.d == (1,) and U == [[1, 0], [0, 1]]
    assert frobenius_reduce([[0, 6], [-6, 0]])[1].d == (6,)
    U, delta = frobenius_reduce([[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 4], [0, 0, -4, 0]])
    assert delta.d == (2, 4)


def test_frobenius_random():
    rng = random.Random(0)
    for n in (4, 6):
        for _ in range(20):
            E = random_alternating(n, rng)
            U, delta = frobenius_reduce(E)
            assert congruent_form(U, E) == delta.J()


def test_frobenius_rejects():
    with pytest.raises(ValueError):
        frobenius_reduce([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        TypeDelta((2, 3))


def test_type_flags():
    assert TypeDelta((4,)).strong_ok and TypeDelta((3,)).embed_ok
    assert not TypeDelta((3,)).strong_ok and not TypeDelta((5, 5)).strong_ok
    assert len(TypeDelta((2, 4)).characteristics()) == 8


def _gauss_data(e):
    return CMPointData([1, 0, 1], [[1], [0, 1]], e)


def test_riemann_form_gauss():
    assert riemann_form_cm(_gauss_data([0, Fraction(1, 2)])) == [[0, 1], [-1, 0]]
    assert riemann_form_cm(_gauss_data([0, Fraction(3, 2)])) == [[0, 3], [-3, 0]]


def test_tau_from_basis():
    with mpmath.workprec(128):
        pt, _, sign = tau_from_basis([[mpmath.mpc(0, 1)]], [[mpmath.mpc(1)]], TypeDelta((1,)))
        assert sign == 1 and abs(pt.tau[0, 0] - 1j) < mpmath.mpf(2) ** -100
        r = mpmath.mpf(7) / 3
        pt2, _, _ = tau_from_basis([[r * mpmath.mpc(0.3, 1.2)]], [[r]], TypeDelta((1,)))
        assert abs(pt2.tau[0, 0] - mpmath.mpc(0.3, 1.2)) < mpmath.mpf(2) ** -100


def test_gsp_identity_and_inversion():
    with mpmath.workprec(128):
        pt = SiegelPoint(mpmath.matrix([[mpmath.mpc(0.1, 1.3)]]))
        one = TypeDelta((1,))
        ident = GSpElement.from_rows([[1, 0], [0, 1]])
        assert abs(gsp_act(ident, pt, one).tau[0, 0] - pt.tau[0, 0]) < mpmath.mpf(2) ** -110
        S = GSpElement.from_rows([[0, 1], [-1, 0]])
        i = SiegelPoint(mpmath.matrix([[mpmath.mpc(0, 1)]]))
        assert abs(gsp_act(S, i, one).tau[0, 0] - 1j) < mpmath.mpf(2) ** -110
        assert abs(gsp_act(S, pt, one).tau[0, 0] - mobius([[0, 1], [-1, 0]], pt.tau[0, 0])) \
            < mpmath.mpf(2) ** -110


@pytest.mark.parametrize("delta", [(1, 1), (1, 2), (2, 4)])
def test_gsp_cocycle(delta):
    prec = 160
    rng = random.Random(sum(delta))
    D = TypeDelta(delta)
    with mpmath.workprec(prec):
        pt = SiegelPoint(mpmath.matrix([[mpmath.mpc(0.1, 1.5), mpmath.mpc(0.2, 0.3)],
                                        [mpmath.mpc(0.2, 0.3), mpmath.mpc(-0.3, 1.1)]]))
        for _ in range(5):
            a, b = random_gsp(2, rng, D), random_gsp(2, rng, D)
            assert a.multiplier(D) > 0 and b.multiplier(D) > 0
            lhs = gsp_act(a @ b, pt, D).tau
            rhs = gsp_act(a, gsp_act(b, pt, D), D).tau
            scale = max(1, max(abs(x) for x in lhs))
            assert max(abs(x - y) for x, y in zip(lhs, rhs)) / scale < mpmath.mpf(2) ** (-prec + 12)


def test_decompose_trivial():
    K = QuadField(1)
    u, alpha = decompose_idele_g1(K, QuadIdeal.unit(K), 3)
    assert u == [[1, 0], [0, 1]] and alpha == GSpElement.from_rows([[1, 0], [0, 1]])


def test_decompose_principal_element():
    K = QuadField(1)
    pi = K.elem(2, 1)
    u, alpha = decompose_idele_g1(K, pi, 3)
    assert u == [[1, 0], [0, 1]]
    assert [list(r) for r in alpha.M] == mult_matrix(pi)
    assert alpha.multiplier(TypeDelta((1,))) == pi.norm()


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_decompose_random(N):
    K = QuadField(1)
    rng = random.Random(N)
    f = QuadIdeal.from_int(K, N)
    pool = [I for I in iter_ideals(K, 80) if I.is_coprime_to(f)]
    for _ in range(20):
        s = rng.choice(pool)
        u, alpha = decompose_idele_g1(K, s, N)
        assert alpha.multiplier(TypeDelta((1,))) > 0
        det = (u[0][0] * u[1][1] - u[0][1] * u[1][0]) % N
        assert pow(det, -1, N) is not None
        prod = mat_mul(u, [[int(x) for x in r] for r in alpha.M])
        assert [[x % N for x in r] for r in prod] == [[1, 0], [0, 1]]
