"""Recognition of algebraic numbers from high-precision approximations."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import mpmath
from sympy import Poly, factor_list, symbols

from .errors import RecognitionFailure
from .lll import lll_reduce
from .theta import BigComplex

X = symbols("x")


@dataclass
class RecognitionConfig:
    maxdeg: int = 24
    height_bits: int = 128
    prec: int = 256


@dataclass
class AlgebraicValue:
    approx: BigComplex
    minpoly: list = None       # integer coefficients, highest degree first
    residual: object = None
    flags: list = field(default_factory=list)

    @property
    def degree(self):
        return len(self.minpoly) - 1 if self.minpoly else None

    @property
    def recognized(self):
        return self.minpoly is not None

    def refined(self, prec):
        """Root of the minimal polynomial closest to approx, at the given precision."""
        if not self.recognized:
            return self.approx.value
        with mpmath.workprec(prec + 20):
            if self.degree == 1:
                return mpmath.mpc(-mpmath.mpf(self.minpoly[1]) / self.minpoly[0])
            z = mpmath.mpc(self.approx.value)
            coeffs = self.minpoly
            der = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
            for _ in range(200):
                step = mpmath.polyval(coeffs, z) / mpmath.polyval(der, z)
                z -= step
                if abs(step) < mpmath.mpf(2) ** (-prec - 10) * max(1, abs(z)):
                    break
            return z

    def same_as(self, other, tol=None):
        if self.recognized and other.recognized and self.minpoly != other.minpoly:
            return False
        tol = tol if tol is not None else 4 * (self.approx.err + other.approx.err) + mpmath.mpf(2) ** (-self.approx.prec // 2)
        return abs(self.approx.value - other.approx.value) <= tol * max(1, abs(self.approx.value))

    def to_json(self):
        return {"minpoly": self.minpoly, "approx": self.approx.to_json(),
                "flags": list(self.flags)}


def _mp_int(x, scale):
    return int(mpmath.nint(x * scale))


def integer_relation(vals, prec_bits, height_bits=None):
    """Short integer vector c with sum c_i v_i ~ 0 for complex values v_i (LLL)."""
    n = len(vals)
    scale = mpmath.mpf(2) ** prec_bits
    use_im = any(abs(mpmath.im(v)) > mpmath.mpf(2) ** (-prec_bits // 2) for v in vals)
    rows = []
    for i, v in enumerate(vals):
        r = [int(i == j) for j in range(n)]
        r.append(_mp_int(mpmath.re(v), scale))
        if use_im:
            r.append(_mp_int(mpmath.im(v), scale))
        rows.append(r)
    red = lll_reduce(rows)
    return [row[:n] for row in red]


def _residual(coeffs, z):
    return abs(mpmath.polyval([mpmath.mpf(c) for c in coeffs], z))


def _normalize(coeffs):
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    coeffs = [c // g for c in coeffs] if g else coeffs
    if coeffs and coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def recognize(z, cfg=None):
    """Minimal polynomial of z (BigComplex or mpc) by lattice reduction over powers."""
    cfg = cfg or RecognitionConfig()
    if not isinstance(z, BigComplex):
        z = BigComplex(z, mpmath.mpf(2) ** (-cfg.prec), cfg.prec)
    with mpmath.workprec(cfg.prec + 40):
        v = z.value
        accuracy = min(cfg.prec, -z.err2exp())
        mag = max(1, int(mpmath.log(max(abs(v), 1), 2)))
        for deg in range(1, cfg.maxdeg + 1):
            bits = accuracy - deg * mag - 8
            if bits < 16:
                break
            powers = [v ** i for i in range(deg, -1, -1)]
            for cand in integer_relation(powers, bits)[:2]:
                coeffs = _normalize(cand)
                if len(coeffs) < 2:
                    continue
                hb = max(abs(c) for c in coeffs).bit_length()
                # a genuine relation is far shorter than a generic lattice vector
                if hb > cfg.height_bits or (deg + 1) * hb > bits - 32:
                    continue
                tol = mpmath.mpf(2) ** (-bits + hb + 16)
                res = _residual(coeffs, v)
                if res > tol:
                    continue
                best = _best_factor(coeffs, v)
                res = _residual(best, v)
                return AlgebraicValue(z, best, res)
    raise RecognitionFailure(f"no polynomial of degree <= {cfg.maxdeg} found")


def _best_factor(coeffs, v):
    """Irreducible factor of the polynomial that vanishes at v."""
    P = Poly(coeffs, X)
    _, facs = factor_list(P)
    best = None
    for f, _ in facs:
        c = _normalize([int(x) for x in Poly(f, X).all_coeffs()])
        r = _residual(c, v)
        if best is None or r < best[0]:
            best = (r, c)
    return best[1]


def is_irreducible(coeffs):
    _, facs = factor_list(Poly(coeffs, X))
    return len(facs) == 1 and facs[0][1] == 1


def try_recognize(z, cfg=None):
    try:
        return recognize(z, cfg)
    except RecognitionFailure:
        val = z if isinstance(z, BigComplex) else BigComplex(z, 0, (cfg or RecognitionConfig()).prec)
        return AlgebraicValue(val, None, None, ["unrecognized"])


def _rational(x, max_den, tol):
    """Best rational approximation with bounded denominator, or None."""
    q = Fraction(int(mpmath.floor(x)))
    frac = x - q.numerator
    if abs(frac) <= tol:
        return q
    h0, h1, k0, k1 = 0, 1, 1, 0
    t = frac
    for _ in range(400):
        a = int(mpmath.floor(t))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        if abs(frac - mpmath.mpf(h1) / k1) <= tol:
            return q + Fraction(h1, k1)
        t = t - a
        if t == 0:
            return None
        t = 1 / t
    return None


def recognize_in_field(c, K, prec_bits, height_bits=None):
    """Write c = x + y*omega with rationals x, y of bounded height.

    Returns (x, y, residual) or None.
    """
    w = K.omega_complex()
    with mpmath.workprec(prec_bits + 40):
        c = mpmath.mpc(c)
        mag = max(1, int(mpmath.log(max(abs(c), 1), 2)))
        hb = height_bits or max(8, (prec_bits - mag) // 3)
        tol = mpmath.mpf(2) ** (mag - prec_bits + 8)
        y = _rational(mpmath.im(c) / mpmath.im(w), 2 ** hb, tol)
        if y is None:
            return None
        x = _rational(mpmath.re(c) - y.numerator * mpmath.re(w) / y.denominator, 2 ** hb, tol)
        if x is None:
            return None
        res = abs(c - (mpmath.mpf(x.numerator) / x.denominator
                       + mpmath.mpf(y.numerator) / y.denominator * w))
        return x, y, res
