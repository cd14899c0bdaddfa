from fractions import Fraction

import mpmath
import pytest

from drwitt.errors import PoleError, PrecisionError
from drwitt.symplectic import SiegelPoint, TypeDelta
from drwitt.theta import (ThetaChar, TorsionIndex, choose_radius, classical_g1, j_theta, theta,
                          theta_null_vector, theta_ratio, wp_lattice, wp_theta)

PREC = 128
TOL = mpmath.mpf(2) ** (-PREC + 8)


def direct_theta(k, u, tau, M=60):
    """Plain g = 1 summation with a generous fixed window."""
    k = mpmath.mpf(k.numerator) / k.denominator
    return mpmath.fsum(mpmath.exp(2j * mpmath.pi * ((k + m) ** 2 * tau / 2 + u * (k + m)))
                       for m in range(-M, M + 1))


def close(a, b, tol=TOL):
    return abs(a - b) <= tol * max(1, abs(b))


def test_gauss_sum_oracle():
    with mpmath.workprec(PREC + 40):
        v = theta((0,), [0], mpmath.mpc(0, 1), PREC)
        assert close(v.value, mpmath.pi ** 0.25 / mpmath.gamma(0.75))
        assert close(v.value, direct_theta(Fraction(0), 0, mpmath.mpc(0, 1)))
        assert mpmath.nstr(mpmath.re(v.value), 11) == "1.0864348112"


def test_reindex_and_quasi_periodicity():
    tau = mpmath.mpc(0.2, 1.1)
    u = mpmath.mpc(0.3, 0.1)
    k = (Fraction(1, 3),)
    with mpmath.workprec(PREC + 40):
        a = theta(k, [u], tau, PREC).value
        assert close(theta((-k[0],), [-u], tau, PREC).value, a)
        shifted = theta(k, [u + 2], tau, PREC).value
        assert close(shifted, mpmath.exp(2j * mpmath.pi * 2 * mpmath.mpf(1) / 3) * a)


def test_ratio_examples():
    delta = TypeDelta((1,))
    tau = mpmath.mpc(0, 2)
    half = Fraction(1, 2)
    with mpmath.workprec(PREC + 40):
        a = TorsionIndex.of(Fraction(1, 3), Fraction(1, 5))
        r = theta_ratio(ThetaChar.of(half), ThetaChar.of(half), a, tau, delta, PREC)
        assert r.value == 1
        # theta^{1/2} vanishes at u = 1/2, so theta^0 / theta^{1/2} is a pole there
        with pytest.raises(PoleError):
            theta_ratio(ThetaChar.of(0), ThetaChar.of(half), TorsionIndex.of(0, half), tau, delta, PREC)
        r = theta_ratio(ThetaChar.of(0), ThetaChar.of(half), TorsionIndex.of(half, 0), tau, delta, PREC)
        u = tau / 2
        oracle = direct_theta(Fraction(0), u, tau) / direct_theta(half, u, tau)
        assert close(r.value, oracle)


def test_ratio_conjugation():
    delta = TypeDelta((4,))
    tau = mpmath.mpc(0, 1.3)
    k, l = ThetaChar.of(Fraction(1, 4)), ThetaChar.of(0)
    a = TorsionIndex.of(Fraction(1, 4), Fraction(1, 8))
    with mpmath.workprec(PREC + 40):
        v = theta_ratio(k, l, a, tau, delta, PREC).value
        # for pure imaginary tau, conj theta^k(u) = theta^k(-conj(u)), i.e. a2 changes sign
        w = theta_ratio(k, l, TorsionIndex.of(a.a1[0], -a.a2[0]), tau, delta, PREC).value
        assert close(w, mpmath.conj(v))
        # equivalently, negate a1 together with the characteristic
        w = theta_ratio(ThetaChar.of(-k.k[0]), l, TorsionIndex.of(-a.a1[0], a.a2[0]), tau, delta, PREC).value
        assert close(w, mpmath.conj(v))


def test_theta_nulls_delta4():
    delta = TypeDelta((4,))
    tau = mpmath.mpc(0, 1)
    with mpmath.workprec(PREC + 40):
        vals = theta_null_vector(tau, delta, PREC)
        assert len(vals) == 4
        for k, v in zip(delta.characteristics(), vals):
            assert close(v.value, direct_theta(k[0], 0, tau))
        shifted = theta_null_vector(tau + 32, delta, PREC)
        for v, w in zip(vals, shifted):
            assert close(v.value, w.value)
    with pytest.raises(ValueError):
        theta_null_vector(tau, TypeDelta((2,)), PREC)


def test_precision_doubling_and_truncation():
    tau = SiegelPoint(mpmath.matrix([[mpmath.mpc(0.1, 0.9), mpmath.mpc(0.25, 0.2)],
                                     [mpmath.mpc(0.25, 0.2), mpmath.mpc(-0.2, 1.2)]]))
    k = (Fraction(1, 2), Fraction(1, 3))
    u = [mpmath.mpc(0.2, 0.1), mpmath.mpc(-0.4, 0.05)]
    with mpmath.workprec(2 * PREC + 40):
        lo = theta(k, u, tau, PREC)
        hi = theta(k, u, tau, 2 * PREC)
        assert abs(lo.value - hi.value) <= lo.err + hi.err
        M = choose_radius(tau.min_eig_imag(), mpmath.sqrt(sum(mpmath.im(x) ** 2 for x in u)), 2, PREC)
        wide = theta(k, u, tau, PREC, radius=(3 * M) // 2 + 1)
        assert abs(lo.value - wide.value) <= lo.err + wide.err


def test_low_precision_rejected():
    with pytest.raises(PrecisionError):
        theta((0,), [0], mpmath.mpc(0, 1), 16)


def test_cm_j_values():
    with mpmath.workprec(256):
        ji = classical_g1("j", 256, tau=mpmath.mpc(0, 1)).value
        assert abs(ji - 1728) < mpmath.mpf(2) ** -200
        jr = classical_g1("j", 256, tau=(1 + mpmath.sqrt(3) * 1j) / 2).value
        assert abs(jr) < mpmath.mpf(2) ** -200


def test_wp_even_and_paths_agree():
    tau = mpmath.mpc(0.3, 1.4)
    z = mpmath.mpc(0.21, 0.37)
    with mpmath.workprec(PREC + 40):
        a = wp_lattice(z, tau, 1, PREC).value
        assert close(wp_lattice(-z, tau, 1, PREC).value, a)
        assert close(wp_theta(z, tau, PREC).value, a, mpmath.mpf(2) ** (-PREC + 16))
        assert close(j_theta(tau, PREC).value, classical_g1("j", PREC, tau=tau).value,
                     mpmath.mpf(2) ** (-PREC + 16))


def test_homothety_invariance():
    tau = mpmath.mpc(-0.1, 1.2)
    lam = mpmath.mpc(1.7, -0.4)
    with mpmath.workprec(PREC + 40):
        a = classical_g1("j", PREC, lattice=(tau, 1)).value
        b = classical_g1("j", PREC, lattice=(lam * tau, lam)).value
        assert close(a, b, mpmath.mpf(2) ** (-PREC + 16))
        f1 = classical_g1("fricke", PREC, lattice=(tau, 1), a=(Fraction(1, 3), 0)).value
        f2 = classical_g1("fricke", PREC, lattice=(lam * tau, lam), a=(Fraction(1, 3), 0)).value
        assert close(f1, f2, mpmath.mpf(2) ** (-PREC + 16))


def test_lattice_point_is_pole():
    with pytest.raises(PoleError):
        classical_g1("weber", PREC, tau=mpmath.mpc(0, 1), a=(1, 0))
