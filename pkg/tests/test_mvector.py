import csv
import io
from fractions import Fraction

import mpmath
import pytest

from drwitt.drmonoid import AdelicElement, AdelicModel, build_dr_monoid
from drwitt.mvector import (ModularVectorSpec, build_modular_vector, congruence_of_vector,
                            crosscheck_theta_path, defined_for, degree_audit, evaluate_component,
                            frobenius_congruence_check, lambda_action, psi_functoriality_check,
                            theta_ratio_spec, verify_equivariance)
from drwitt.quadfield import QuadField, QuadIdeal, parse_ideal
from drwitt.theta import TorsionIndex

PREC = 256
HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def Qi():
    return QuadField(1)


@pytest.fixture(scope="module")
def level2(Qi):
    T = build_dr_monoid(Qi, QuadIdeal.from_int(Qi, 2))
    return T, AdelicModel(T, 2)


@pytest.fixture(scope="module")
def weber2(level2):
    T, model = level2
    return build_modular_vector(ModularVectorSpec("weber", TorsionIndex.of(0, HALF)), T, PREC,
                                model=model)


def lemniscatic_weber():
    """2^8 3^4 g2^2/Delta p(1/2)^2 for Z + Z i via mpmath's Jacobi thetas."""
    q = mpmath.exp(-mpmath.pi)
    t3, t4 = mpmath.jtheta(3, 0, q), mpmath.jtheta(4, 0, q)
    t2 = mpmath.jtheta(2, 0, q)
    c = mpmath.pi ** 2 / 3
    e1, e2, e3 = c * (t3 ** 4 + t4 ** 4), c * (t2 ** 4 - t4 ** 4), -c * (t2 ** 4 + t3 ** 4)
    g2 = 2 * (e1 ** 2 + e2 ** 2 + e3 ** 2)
    g3 = 4 * e1 * e2 * e3
    disc = g2 ** 3 - 27 * g3 ** 2
    return 2 ** 8 * 3 ** 4 * g2 ** 2 / disc * e1 ** 2


def test_half_period_value(Qi, level2):
    T, model = level2
    x = AdelicElement(2, (1, 0), model.C.zero())
    spec = ModularVectorSpec("weber", TorsionIndex.of(0, HALF))
    with mpmath.workprec(PREC + 40):
        val, flags = evaluate_component(spec, x, model, PREC)
        oracle = lemniscatic_weber()
        assert abs(oracle - 5184) < mpmath.mpf(2) ** (-PREC + 8) * 5184
        assert abs(val.value - oracle) < mpmath.mpf(2) ** (-PREC + 8) * 5184
    assert flags == []


def test_a_zero_gives_j(level2):
    T, model = level2
    v = build_modular_vector(ModularVectorSpec("fricke", TorsionIndex.of(0, 0), 2), T, PREC, model=model)
    assert all(c.minpoly == [1, -1728] for c in v.values)


def test_rho_zero_is_renormalized_to_j(level2):
    T, model = level2
    x = AdelicElement(2, (0, 0), model.C.zero())
    val, flags = evaluate_component(ModularVectorSpec("weber", TorsionIndex.of(HALF, HALF)), x, model, PREC)
    assert "pole->j" in flags
    with mpmath.workprec(PREC):
        assert abs(val.value - 1728) < mpmath.mpf(2) ** -200


def test_weber_level2(weber2):
    assert weber2.recognized
    assert "representative-dependent" not in weber2.flags
    assert all(r["ok"] for r in degree_audit(weber2))
    assert all(r["pass"] for r in verify_equivariance(weber2))


def test_constant_theta_spec(level2):
    T, model = level2
    spec = theta_ratio_spec(TorsionIndex.of(0, HALF), Fraction(1, 4), Fraction(1, 4), level=2)
    v = build_modular_vector(spec, T, 128, model=model)
    assert all(c.minpoly == [1, -1] for c in v.values)
    assert all(r["pass"] for r in verify_equivariance(v))
    assert len(congruence_of_vector(v).blocks()) == 1


def test_theta_spec_pole_margin(Qi):
    # theta^{1/2}(u; omega) vanishes at u = 1/2, reached by rho = 1
    ok, bad = defined_for(theta_ratio_spec(TorsionIndex.of(0, HALF), 0, HALF, delta=1, level=2), Qi)
    assert not ok and (1, 0) in bad
    assert defined_for(theta_ratio_spec(TorsionIndex.of(0, HALF), HALF, 0, delta=4, level=2), Qi)[0]


def test_lambda_action(Qi, weber2):
    assert [c.minpoly for c in lambda_action(weber2, QuadIdeal.unit(Qi)).values] == \
        [c.minpoly for c in weber2.values]
    P, Q = parse_ideal(Qi, "(2+i)"), parse_ideal(Qi, "(3)")
    pq = lambda_action(lambda_action(weber2, P), Q)
    qp = lambda_action(lambda_action(weber2, Q), P)
    assert [c.minpoly for c in pq.values] == [c.minpoly for c in qp.values]
    assert psi_functoriality_check(weber2, P)["pass"]


def test_frobenius_constant_vector(Qi, level2):
    T, model = level2
    j = build_modular_vector(ModularVectorSpec("fricke", TorsionIndex.of(0, 0), 2), T, PREC, model=model)
    for lit in ("(3)", "(2+i)", "(1+i)"):
        assert frobenius_congruence_check(j, parse_ideal(Qi, lit))["pass"]
    with pytest.raises(ValueError):
        frobenius_congruence_check(j, parse_ideal(Qi, "(5)"))


def test_frobenius_weber(Qi, weber2):
    for lit in ("(3)", "(2+i)"):
        for modulus in ("norm", "prime"):
            assert frobenius_congruence_check(weber2, parse_ideal(Qi, lit), modulus)["pass"]


def test_crosscheck_trivial_point(level2):
    T, model = level2
    x = AdelicElement(2, (1, 0), model.C.zero())
    for a in (TorsionIndex.of(0, HALF), TorsionIndex.of(HALF, HALF)):
        assert crosscheck_theta_path(ModularVectorSpec("weber", a), x, model)["pass"]
    r = crosscheck_theta_path(ModularVectorSpec("j", TorsionIndex.of(0, 0), 2), x, model)
    assert r["pass"]


def test_serialization(weber2):
    obj = weber2.to_json()
    assert obj["spec"]["kind"] == "weber" and len(obj["components"]) == len(weber2)
    rows = list(csv.reader(io.StringIO(weber2.to_csv())))
    assert rows[0] == ["class", "orbit", "degree", "minpoly"] and len(rows) == len(weber2) + 1


def test_spec_validation():
    with pytest.raises(ValueError):
        ModularVectorSpec("sigma", TorsionIndex.of(0, HALF))
    with pytest.raises(ValueError):
        ModularVectorSpec("weber", TorsionIndex.of(0, Fraction(1, 3)), 2)
    with pytest.raises(ValueError):
        ModularVectorSpec("theta", TorsionIndex.of(0, HALF))


def test_jobs_matches_serial(Qi, weber2):
    T = weber2.table
    par = build_modular_vector(weber2.spec, T, PREC, jobs=2)
    assert [c.minpoly for c in par.values] == [c.minpoly for c in weber2.values]
