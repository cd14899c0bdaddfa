"""Siegel theta functions with characteristics and g = 1 classical functions.

theta^k(u; tau) = sum over w in k + Z^g of exp(w^t tau w / 2 + u w) with
exp(t) = e^{2 pi i t}.  Values are returned as BigComplex: an mpmath complex
number together with an absolute error radius.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import mpmath

from .errors import PoleError, PrecisionError
from .symplectic import SiegelPoint, TypeDelta

LAMBDA_FLOOR = mpmath.mpf("0.05")


@dataclass
class BigComplex:
    value: object
    err: object
    prec: int

    def __post_init__(self):
        self.value = mpmath.mpc(self.value)
        self.err = mpmath.mpf(self.err)

    def _ulp(self, v):
        return abs(v) * mpmath.mpf(2) ** (-self.prec)

    def __add__(self, other):
        other = _big(other, self.prec)
        v = self.value + other.value
        return BigComplex(v, self.err + other.err + self._ulp(v), min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return BigComplex(-self.value, self.err, self.prec)

    def __sub__(self, other):
        return self + (-_big(other, self.prec))

    def __rsub__(self, other):
        return _big(other, self.prec) - self

    def __mul__(self, other):
        other = _big(other, self.prec)
        v = self.value * other.value
        e = (abs(self.value) * other.err + abs(other.value) * self.err
             + self.err * other.err + self._ulp(v))
        return BigComplex(v, e, min(self.prec, other.prec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _big(other, self.prec)
        den = abs(other.value)
        if den <= 2 * other.err:
            raise PoleError("denominator indistinguishable from zero")
        v = self.value / other.value
        e = (self.err + abs(v) * other.err) / (den - other.err) + self._ulp(v)
        return BigComplex(v, e, min(self.prec, other.prec))

    def __pow__(self, n):
        out = BigComplex(1, 0, self.prec)
        for _ in range(n):
            out = out * self
        return out

    def err2exp(self):
        if self.err == 0:
            return -self.prec
        return int(mpmath.floor(mpmath.log(self.err, 2))) + 1

    def digits(self):
        """Decimal digits certified by the error radius."""
        scale = max(abs(self.value), mpmath.mpf(1))
        bits = -self.err2exp() + int(mpmath.log(scale, 2))
        return max(1, min(int(bits * math.log10(2)), int(self.prec * math.log10(2))))

    def to_json(self):
        n = self.digits()
        return {"re": mpmath.nstr(mpmath.re(self.value), n, strip_zeros=False),
                "im": mpmath.nstr(mpmath.im(self.value), n, strip_zeros=False),
                "err2exp": self.err2exp()}

    def __repr__(self):
        return f"BigComplex({mpmath.nstr(self.value, 20)}, err=2^{self.err2exp()})"


def _big(x, prec):
    if isinstance(x, BigComplex):
        return x
    return BigComplex(x, 0, prec)


@dataclass(frozen=True)
class ThetaChar:
    k: tuple

    @classmethod
    def of(cls, *k):
        return cls(tuple(Fraction(x) % 1 for x in k))

    def check(self, delta):
        return all((Fraction(x) * d).denominator == 1 for x, d in zip(self.k, delta.d))

    def neg(self):
        return ThetaChar(tuple((-x) % 1 for x in self.k))


@dataclass(frozen=True)
class TorsionIndex:
    a1: tuple
    a2: tuple

    @classmethod
    def of(cls, a1, a2):
        a1 = tuple(Fraction(x) % 1 for x in (a1 if isinstance(a1, (list, tuple)) else [a1]))
        a2 = tuple(Fraction(x) % 1 for x in (a2 if isinstance(a2, (list, tuple)) else [a2]))
        return cls(a1, a2)

    @property
    def N(self):
        n = 1
        for x in self.a1 + self.a2:
            n = n * x.denominator // math.gcd(n, x.denominator)
        return n

    def is_zero(self):
        return all(x == 0 for x in self.a1 + self.a2)

    def to_json(self):
        return {"a1": [str(x) for x in self.a1], "a2": [str(x) for x in self.a2]}


def _mpf(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def _as_point(tau):
    if isinstance(tau, SiegelPoint):
        return tau
    if isinstance(tau, mpmath.matrix):
        return SiegelPoint(tau)
    return SiegelPoint(mpmath.matrix([[mpmath.mpc(tau)]]))


def tail_bound(lam, s, g, M):
    """Bound on the theta terms with max-norm index > M (k reduced to (-1/2, 1/2])."""
    total = mpmath.mpf(0)
    n = M + 1
    prev = None
    while True:
        r = n - mpmath.mpf(1) / 2
        term = 2 * g * (2 * n + 1) ** (g - 1) * mpmath.exp(-mpmath.pi * lam * r * r + 2 * mpmath.pi * s * r)
        total += term
        if prev is not None and r > s / lam and term < prev:
            ratio = term / prev
            if ratio < mpmath.mpf(1) / 2:
                # remaining terms decay faster than a geometric series with this ratio
                return total + term * ratio / (1 - ratio)
        prev = term
        n += 1


def choose_radius(lam, s, g, prec):
    target = mpmath.mpf(2) ** (-prec - 8)
    M = max(1, int(mpmath.ceil(s / lam)))
    while tail_bound(lam, s, g, M) >= target:
        M += 1
    return M


def theta(k, u, tau, prec=128, radius=None, lam_floor=LAMBDA_FLOOR):
    """Siegel theta with characteristic k at u (row vector) and tau in H_g."""
    if prec < 32:
        raise PrecisionError("prec must be at least 32 bits")
    pt = _as_point(tau)
    g = pt.g
    kk = [Fraction(x) for x in (k.k if isinstance(k, ThetaChar) else k)]
    wp = prec + 30
    with mpmath.workprec(wp):
        T = pt.tau
        u = [mpmath.mpc(x) for x in (u if isinstance(u, (list, tuple)) else [u])]
        lam = pt.min_eig_imag()
        if lam < lam_floor:
            raise PrecisionError(f"smallest eigenvalue of Im(tau) {mpmath.nstr(lam, 5)} is below the floor; reduce tau first")
        s = mpmath.sqrt(sum(mpmath.im(x) ** 2 for x in u))
        # reduce k into (-1/2, 1/2]; theta only depends on k mod Z^g
        kr = []
        for x in kk:
            x = x % 1
            if x > Fraction(1, 2):
                x -= 1
            kr.append(x)
        M = radius if radius is not None else choose_radius(lam, s, g, prec)
        kv = [_mpf(x) for x in kr]
        twopii = 2j * mpmath.pi
        total = mpmath.mpc(0)
        biggest = mpmath.mpf(0)
        count = 0
        for m in product(range(-M, M + 1), repeat=g):
            w = [kv[i] + m[i] for i in range(g)]
            quad = 0
            for i in range(g):
                row = 0
                for j in range(g):
                    row += T[i, j] * w[j]
                quad += w[i] * row
            lin = sum(u[i] * w[i] for i in range(g))
            term = mpmath.exp(twopii * (quad / 2 + lin))
            total += term
            a = abs(term)
            if a > biggest:
                biggest = a
            count += 1
        tail = tail_bound(lam, s, g, M)
        rounding = count * biggest * mpmath.mpf(2) ** (-wp + 4)
        return BigComplex(total, tail + rounding, prec)


def torsion_point(a, tau, delta):
    """u = a1 tau + a2 delta as a row vector."""
    pt = _as_point(tau)
    g = pt.g
    return [sum(_mpf(a.a1[i]) * pt.tau[i, j] for i in range(g)) + _mpf(a.a2[j]) * delta.d[j]
            for j in range(g)]


def theta_ratio(k, l, a, tau, delta, prec=128):
    with mpmath.workprec(prec + 30):
        u = torsion_point(a, tau, delta)
        num = theta(k, u, tau, prec)
        den = theta(l, u, tau, prec)
        if abs(den.value) <= 2 * den.err:
            raise PoleError(f"theta^{l} vanishes at the torsion point {a}")
        return num / den


def theta_null_vector(tau, delta, prec=128):
    if not delta.embed_ok:
        raise ValueError(f"type {delta.d} does not give a projective embedding (need d_1 >= 3)")
    return [theta(ThetaChar(k), [0] * delta.g, tau, prec) for k in delta.characteristics()]


# ---------------------------------------------------------------------------
# g = 1: Jacobi thetas via theta^k and Weierstrass data


def jacobi_thetas(z, tau, prec):
    """(theta1(z), theta2(z), theta3(z), theta4(z)) in the nome e^{pi i tau}, argument pi z."""
    half = Fraction(1, 2)
    z = mpmath.mpc(z)
    zh = z + mpmath.mpf(1) / 2
    t3 = theta((0,), [z], tau, prec)
    t4 = theta((0,), [zh], tau, prec)
    t2 = theta((half,), [z], tau, prec)
    t1 = -theta((half,), [zh], tau, prec)
    return t1, t2, t3, t4


def weierstrass_data_theta(tau, prec):
    """(g2, g3, e1, e2, e3) of the lattice Z tau + Z from theta nulls."""
    with mpmath.workprec(prec + 30):
        _, t2, t3, t4 = jacobi_thetas(0, tau, prec)
        c = BigComplex(mpmath.pi ** 2 / 3, 0, prec)
        a2, a3, a4 = t2 ** 4, t3 ** 4, t4 ** 4
        e1 = c * (a3 + a4)
        e2 = c * (a2 - a4)
        e3 = -(c * (a2 + a3))
        g2 = 2 * (e1 * e1 + e2 * e2 + e3 * e3)
        g3 = 4 * e1 * e2 * e3
        return g2, g3, e1, e2, e3


def wp_theta(z, tau, prec):
    """Weierstrass p of Z tau + Z at z via theta quotients."""
    with mpmath.workprec(prec + 30):
        t1, _, _, t4 = jacobi_thetas(z, tau, prec)
        _, t2, t3, _ = jacobi_thetas(0, tau, prec)
        if abs(t1.value) <= 2 * t1.err:
            raise PoleError("z is a lattice point")
        pi = BigComplex(mpmath.pi, 0, prec)
        q = pi * t2 * t3 * t4 / t1
        return q * q - BigComplex(mpmath.pi ** 2 / 3, 0, prec) * (t2 ** 4 + t3 ** 4)


def j_theta(tau, prec):
    with mpmath.workprec(prec + 30):
        _, t2, t3, t4 = jacobi_thetas(0, tau, prec)
        num = (t2 ** 8 + t3 ** 8 + t4 ** 8) ** 3
        den = (t2 * t3 * t4) ** 8
        return 32 * num / den


# ---------------------------------------------------------------------------
# g = 1: q-expansions on a reduced lattice


def reduce_lattice(w1, w2):
    """Gauss-reduce a lattice basis; returns (w1, w2) with tau = w1/w2 in the fundamental domain."""
    if mpmath.im(w1 / w2) < 0:
        w1 = -w1
    for _ in range(10000):
        tau = w1 / w2
        n = mpmath.nint(mpmath.re(tau))
        w1 = w1 - n * w2
        if abs(w1) < abs(w2) * (1 - mpmath.mpf(2) ** (-mpmath.mp.prec // 2)):
            w1, w2 = -w2, w1
        else:
            break
    return w1, w2


def _qterms(prec, q):
    aq = abs(q)
    if aq >= 1:
        raise PrecisionError("nome not inside the unit disc")
    return int(mpmath.ceil((prec + 40) * mpmath.log(2) / -mpmath.log(aq))) + 3


def eisenstein(tau, prec):
    """(E4, E6) at tau via Lambert series."""
    q = mpmath.exp(2j * mpmath.pi * tau)
    n_terms = _qterms(prec, q)
    e4 = mpmath.mpc(0)
    e6 = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, n_terms):
        qn *= q
        d = 1 - qn
        e4 += n ** 3 * qn / d
        e6 += n ** 5 * qn / d
    return 1 + 240 * e4, 1 - 504 * e6


def _err_of(v, prec):
    return abs(v) * mpmath.mpf(2) ** (-prec - 4) + mpmath.mpf(2) ** (-prec - 8)


def g2g3(w1, w2, prec):
    """Invariants of the lattice Z w1 + Z w2."""
    with mpmath.workprec(prec + 40):
        w1, w2 = reduce_lattice(mpmath.mpc(w1), mpmath.mpc(w2))
        tau = w1 / w2
        E4, E6 = eisenstein(tau, prec)
        g2 = 4 * mpmath.pi ** 4 / 3 * E4 / w2 ** 4
        g3 = 8 * mpmath.pi ** 6 / 27 * E6 / w2 ** 6
        return BigComplex(g2, _err_of(g2, prec), prec), BigComplex(g3, _err_of(g3, prec), prec)


def wp_lattice(z, w1, w2, prec):
    """Weierstrass p at z for the lattice Z w1 + Z w2 via the q-series."""
    with mpmath.workprec(prec + 40):
        w1, w2 = reduce_lattice(mpmath.mpc(w1), mpmath.mpc(w2))
        tau = w1 / w2
        x = mpmath.mpc(z) / w2
        # write x = c1 tau + c2 and reduce c1, c2 to [-1/2, 1/2)
        c1 = mpmath.im(x) / mpmath.im(tau)
        c2 = mpmath.re(x - c1 * tau)
        c1 -= mpmath.nint(c1)
        c2 -= mpmath.nint(c2)
        x = c1 * tau + c2
        if abs(x) < mpmath.mpf(2) ** (-prec // 2):
            raise PoleError("z is a lattice point")
        q = mpmath.exp(2j * mpmath.pi * tau)
        u = mpmath.exp(2j * mpmath.pi * x)
        n_terms = _qterms(prec, q) + 2
        s = mpmath.mpf(1) / 12 + u / (1 - u) ** 2
        qn = mpmath.mpc(1)
        for n in range(1, n_terms):
            qn *= q
            a = qn * u
            b = qn / u
            s += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
        val = (2j * mpmath.pi) ** 2 * s / w2 ** 2
        return BigComplex(val, _err_of(val, prec) * n_terms, prec)


def j_lattice(w1, w2, prec):
    g2, g3 = g2g3(w1, w2, prec)
    c = g2 ** 3
    return 1728 * c / (c - 27 * (g3 * g3))


WEBER_CONSTANTS = {"generic": -(2 ** 7) * 3 ** 5, "d1": 2 ** 8 * 3 ** 4, "d3": -(2 ** 9) * 3 ** 6}


def weber_variant(d):
    return {1: "d1", 3: "d3"}.get(d, "generic")


def weber_from_invariants(variant, g2, g3, p):
    delta = g2 ** 3 - 27 * (g3 * g3)
    c = WEBER_CONSTANTS[variant]
    if variant == "generic":
        return c * (g2 * g3 / delta) * p
    if variant == "d1":
        return c * (g2 * g2 / delta) * (p * p)
    return c * (g3 / delta) * (p * p * p)


def weber_lattice(variant, z, w1, w2, prec):
    g2, g3 = g2g3(w1, w2, prec)
    return weber_from_invariants(variant, g2, g3, wp_lattice(z, w1, w2, prec))


def weber_theta(variant, z, tau, prec):
    """Weber function of Z tau + Z at z, computed only from theta values."""
    g2, g3, _, _, _ = weierstrass_data_theta(tau, prec)
    return weber_from_invariants(variant, g2, g3, wp_theta(z, tau, prec))


def classical_g1(kind, prec=128, tau=None, lattice=None, z=None, a=None, variant="generic"):
    """Dispatcher for the g = 1 functions: weierstrass_p, g2, g3, j, fricke, weber."""
    with mpmath.workprec(prec + 40):
        if lattice is None:
            lattice = (mpmath.mpc(tau), mpmath.mpc(1))
        w1, w2 = (mpmath.mpc(x) for x in lattice)
        if a is not None:
            a1, a2 = (Fraction(x) for x in a)
            if a1.denominator == 1 and a2.denominator == 1:
                raise PoleError("torsion index maps to a lattice point")
            z = _mpf(a1) * w1 + _mpf(a2) * w2
        if kind == "g2":
            return g2g3(w1, w2, prec)[0]
        if kind == "g3":
            return g2g3(w1, w2, prec)[1]
        if kind == "j":
            return j_lattice(w1, w2, prec)
        if kind == "weierstrass_p":
            return wp_lattice(z, w1, w2, prec)
        if kind == "fricke":
            return weber_lattice("generic", z, w1, w2, prec)
        if kind == "weber":
            return weber_lattice(variant, z, w1, w2, prec)
    raise ValueError(f"unknown kind {kind}")
