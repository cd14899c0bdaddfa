from fractions import Fraction

import mpmath
import pytest

from drwitt.errors import RecognitionFailure
from drwitt.lll import lll_reduce
from drwitt.quadfield import QuadField
from drwitt.recognize import (RecognitionConfig, is_irreducible, recognize, recognize_in_field,
                              try_recognize)

CFG = RecognitionConfig(prec=256)


def approx(x):
    with mpmath.workprec(300):
        return mpmath.mpc(x)


@pytest.mark.parametrize("expr,poly", [
    (lambda: mpmath.sqrt(2), [1, 0, -2]),
    (lambda: mpmath.mpf(1728), [1, -1728]),
    (lambda: (1 + mpmath.sqrt(5)) / 2, [1, -1, -1]),
    (lambda: mpmath.mpc(0, 1), [1, 0, 1]),
    (lambda: mpmath.cbrt(2) + 1, [1, -3, 3, -3]),
    (lambda: mpmath.mpf(-7) / 3, [3, 7]),
])
def test_forced_minimal_polynomials(expr, poly):
    with mpmath.workprec(300):
        v = recognize(approx(expr()), CFG)
    assert v.minpoly == poly
    assert is_irreducible(v.minpoly)


def test_transcendental_is_not_recognized():
    cfg = RecognitionConfig(prec=128, maxdeg=6)
    with mpmath.workprec(200):
        with pytest.raises(RecognitionFailure):
            recognize(approx(mpmath.pi), cfg)
        assert not try_recognize(approx(mpmath.e), cfg).recognized


def test_large_integer_exact():
    n = 5184 ** 9 - 5184
    with mpmath.workprec(450):
        v = recognize(mpmath.mpc(n), RecognitionConfig(prec=400))
    assert v.minpoly == [1, -n]


def test_refined_root():
    with mpmath.workprec(300):
        v = recognize(approx(mpmath.sqrt(3)), CFG)
        assert abs(v.refined(600) - mpmath.sqrt(3)) < mpmath.mpf(2) ** -250


def test_recognize_in_field():
    K = QuadField(1)
    with mpmath.workprec(300):
        c = mpmath.mpc(mpmath.mpf(3) / 7, -5)
        x, y, res = recognize_in_field(c, K, 256)
        assert (x, y) == (Fraction(3, 7), -5) and res < mpmath.mpf(2) ** -200
        K3 = QuadField(3)
        c = 2 + 3 * K3.omega_complex()
        x, y, _ = recognize_in_field(c, K3, 256)
        assert (x, y) == (2, 3)
        assert recognize_in_field(mpmath.mpc(mpmath.pi, 1), K, 256) is None


def test_lll_small_example():
    red = lll_reduce([[1, 0, 0, 1000], [0, 1, 0, 1414], [0, 0, 1, 1732]])
    assert all(len(r) == 4 for r in red)
    assert min(sum(x * x for x in r) for r in red) < 1000 ** 2
