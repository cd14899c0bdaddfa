"""Modular vectors: special values of modular functions as functions on DR_{N O_K}.

Convention.  A class of DR_{N O_K} with representative A is encoded as
(rho, c) where rho is in A, (rho) A^-1 is coprime to N and c is the ray class
of A (rho)^-1.  Its value is taken on the torus C / s with s = (rho) A^-1 (so s
lies in the ray class -c) at the torsion point a*rho*m, where a = a1*omega + a2
and m is an element of s with m = 1 mod N.  This makes every vector
equivariant: v(B x) = v(x)^{sigma_B} for the Artin symbol of B.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .drmonoid import (AdelicElement, AdelicModel, MonoidCongruence, cached_dr_monoid,
                       identity_congruence, sim_N_congruence, vector_congruence)
from .errors import BudgetExhausted, PoleError, PrecisionError
from .quadfield import (QuadField, QuadIdeal, factor_ideal, is_principal, ray_class_group,
                        valuation)
from .recognize import AlgebraicValue, RecognitionConfig, recognize_in_field, try_recognize
from .symplectic import (SiegelPoint, TypeDelta, decompose_idele_g1, gsp_act, mult_matrix,
                         oriented_basis)
from .theta import (BigComplex, ThetaChar, TorsionIndex, j_lattice, j_theta, theta,
                    weber_lattice, weber_theta, weber_variant)

KINDS = ("weber", "fricke", "j", "theta")


@dataclass(frozen=True)
class ModularVectorSpec:
    kind: str
    a: TorsionIndex
    level: int = None
    pairs: tuple = ()          # theta kind: ((k, l, coeff), ...) meaning sum coeff * theta^k / theta^l
    delta: int = 4             # theta kind: type [delta]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.level is not None and self.level % self.a.N:
            raise ValueError("level must be a multiple of the denominator of a")
        if self.kind == "theta" and not self.pairs:
            raise ValueError("theta spec needs at least one (k, l, coeff) triple")

    @property
    def N(self):
        return self.level if self.level is not None else self.a.N

    def a_elem(self, K):
        return K.elem(self.a.a2[0], self.a.a1[0])

    def label(self):
        a = f"({self.a.a1[0]},{self.a.a2[0]})"
        if self.kind != "theta":
            return f"{self.kind}{a}"
        terms = "+".join(f"{c}*t[{k}]/t[{l}]" for k, l, c in self.pairs)
        return f"theta{a}[{self.delta}]:{terms}"

    def to_json(self):
        out = {"kind": self.kind, "a": self.a.to_json(), "N": self.N}
        if self.kind == "theta":
            out["delta"] = self.delta
            out["pairs"] = [[str(k), str(l), str(c)] for k, l, c in self.pairs]
        return out


def theta_ratio_spec(a, k, l=0, delta=4, level=None):
    return ModularVectorSpec("theta", a, level,
                             ((Fraction(k) % 1, Fraction(l) % 1, Fraction(1)),), delta)


# ---------------------------------------------------------------------------
# lattice path


def unit_point(s, N):
    """An element m of the integral ideal s with m = 1 mod N (s coprime to N)."""
    e1, e2 = s.zbasis()
    for x in range(N):
        for y in range(N):
            m = e1 * x + e2 * y
            d = m - 1
            if d.x % N == 0 and d.y % N == 0 and not m.is_zero():
                return m
    if N == 1:
        return e1
    raise ValueError(f"{s} is not coprime to {N}")


def lattice_of(model, x, twist=None):
    """Integral ideal s (coprime to N) carrying the value of x; twist multiplies it by (t)."""
    s = model.class_rep(model.C.neg(x.s_class))
    if twist is not None:
        s = s * QuadIdeal.principal(twist)
    return s


def _complex_basis(s):
    r1, r2 = oriented_basis(s)
    K = s.K
    return K.elem(r1[1], r1[0]).to_complex(), K.elem(r2[1], r2[0]).to_complex()


def _theta_combo(spec, u, tau, prec):
    total = None
    for k, l, c in spec.pairs:
        num = theta((k,), [u], tau, prec)
        den = theta((l,), [u], tau, prec)
        if abs(den.value) <= 2 * den.err:
            raise PoleError(f"theta^{l} vanishes at the torsion point")
        term = (num / den) * BigComplex(mpmath.mpf(c.numerator) / c.denominator, 0, prec)
        total = term if total is None else total + term
    return total


def evaluate_component(spec, x, model, prec=256, twist=None):
    """Value of the modular vector at the adelic element x; returns (BigComplex, flags)."""
    K = model.K
    N = model.N
    flags = []
    with mpmath.workprec(prec + 40):
        s = lattice_of(model, x, twist)
        m = unit_point(s, N)
        z = spec.a_elem(K) * model._lift(x.rho) * m
        w1, w2 = _complex_basis(s)
        if spec.kind == "theta":
            d = spec.delta
            tau = SiegelPoint(mpmath.matrix([[d * w1 / w2]]))
            u = d * z.to_complex() / w2
            return _theta_combo(spec, u, tau, prec), flags
        if spec.kind == "j" or s.contains(z):
            if spec.kind != "j":
                flags.append("pole->j")
            return j_lattice(w1, w2, prec), flags
        variant = "generic" if spec.kind == "fricke" else weber_variant(K.d)
        return weber_lattice(variant, z.to_complex(), w1, w2, prec), flags


def defined_for(spec, K, prec=128):
    """Exhaustive pole-margin check of the theta denominators at a*rho, rho in O/N.

    Returns (ok, bad residues).  Fricke and Weber specs are always defined since
    poles are renormalized to j.
    """
    if spec.kind != "theta":
        return True, []
    N = spec.N
    f = QuadIdeal.from_int(K, N)
    bad = []
    with mpmath.workprec(prec + 40):
        d = spec.delta
        tau = SiegelPoint(mpmath.matrix([[d * K.omega_complex()]]))
        for r in f.residues():
            z = spec.a_elem(K) * K.elem(*r)
            u = d * z.to_complex()
            for _, l, _ in spec.pairs:
                den = theta((l,), [u], tau, prec)
                if abs(den.value) <= 2 * den.err + mpmath.mpf(2) ** (-prec // 2):
                    bad.append(r)
                    break
    return not bad, bad


def _close(u, v, prec):
    tol = 4 * (u.err + v.err) + mpmath.mpf(2) ** (-prec + 32) * max(1, abs(u.value))
    return abs(u.value - v.value) <= tol


# ---------------------------------------------------------------------------
# Witt vectors


@dataclass
class WittVector:
    table: object
    values: list
    spec: object = None
    flags: list = field(default_factory=list)

    @property
    def conductor(self):
        return self.table.conductor

    def __len__(self):
        return len(self.values)

    @property
    def recognized(self):
        return all(v.recognized for v in self.values)

    def orbit_of(self, i):
        return self.table.orbit_label[i]

    def to_json(self):
        comps = []
        for i, v in enumerate(self.values):
            c = {"class": i, "rep": self.table.rep(i).literal(),
                 "orbit": self.orbit_of(i).literal()}
            c.update(v.to_json())
            comps.append(c)
        out = {"conductor": self.conductor.to_json(), "components": comps, "flags": list(self.flags)}
        if self.spec is not None:
            out["spec"] = self.spec.to_json()
        return out

    def csv_rows(self):
        rows = [["class", "orbit", "degree", "minpoly"]]
        for i, v in enumerate(self.values):
            mp = " ".join(str(c) for c in v.minpoly) if v.recognized else ""
            rows.append([i, self.orbit_of(i).literal(), v.degree if v.recognized else "", mp])
        return rows

    def to_csv(self):
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.csv_rows())
        return buf.getvalue()


@lru_cache(maxsize=8)
def _model(d, N):
    K = QuadField(d)
    return AdelicModel(cached_dr_monoid(K, QuadIdeal.from_int(K, N)), N)


def _component(spec, model, i, prec, recog, check_reps, recognize_values):
    x = model.encode(i)
    val, flags = evaluate_component(spec, x, model, prec)
    if check_reps and model.N > 1:
        t = model.K.elem(1, model.N)   # 1 + N*omega, a unit mod N
        val2, _ = evaluate_component(spec, x, model, prec, twist=t)
        if not _close(val, val2, prec):
            flags.append("representative-dependent")
    if recognize_values:
        av = try_recognize(val, recog)
    else:
        av = AlgebraicValue(val, None, None, ["not-recognized"])
    av.flags = list(av.flags) + flags
    return av


def _component_task(args):
    spec, d, N, i, prec, recog, check_reps, recognize_values = args
    return _component(spec, _model(d, N), i, prec, recog, check_reps, recognize_values)


def build_modular_vector(spec, T, prec=256, recog=None, jobs=1, check_reps=True,
                         recognize_values=True, model=None):
    """Evaluate and recognize the modular vector of ``spec`` on every class of T."""
    N = spec.N
    K = T.K
    if T.conductor != QuadIdeal.from_int(K, N):
        raise ValueError(f"table conductor {T.conductor} is not N O_K for N={N}")
    recog = recog or RecognitionConfig(prec=prec)
    if jobs > 1:
        args = [(spec, K.d, N, i, prec, recog, check_reps, recognize_values) for i in range(len(T))]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_component_task, args))
    else:
        model = model or AdelicModel(T, N)
        values = [_component(spec, model, i, prec, recog, check_reps, recognize_values)
                  for i in range(len(T))]
    flags = sorted({f for v in values for f in v.flags
                    if f in ("unrecognized", "representative-dependent")})
    return WittVector(T, values, spec, flags)


def degree_audit(v):
    """Per component: (degree, bound 2|C_{f/d}|, degree divides bound)."""
    T = v.table
    out = []
    for i, val in enumerate(v.values):
        d = T.orbit_label[i]
        bound = 2 * ray_class_group(T.K, T.conductor * d.inverse()).order
        deg = val.degree
        out.append({"class": i, "orbit": d.literal(), "degree": deg, "bound": bound,
                    "ok": deg is not None and bound % deg == 0})
    return out


def _poly_from_roots(roots):
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        nxt = coeffs + [mpmath.mpc(0)]
        for k in range(1, len(nxt)):
            nxt[k] -= r * coeffs[k - 1]
        coeffs = nxt
    return coeffs


def _field_str(x, y):
    return f"{x}+{y}*w"


def _mag_bits(vals):
    return max([1] + [int(mpmath.log(max(abs(z), 2), 2)) + 1 for z in vals])


def verify_equivariance(v, prec=None, tol_bits=64):
    """Orbit characteristic polynomials must have coefficients in K."""
    T = v.table
    K = T.K
    prec = prec or v.values[0].approx.prec
    report = []
    for orb in T.unit_action_orbits():
        with mpmath.workprec(prec + 40):
            vals = [v.values[i].refined(prec) for i in orb]
            coeffs = _poly_from_roots(vals)[1:]
            out, worst, ok = [], mpmath.mpf(0), True
            for c in coeffs:
                r = recognize_in_field(c, K, prec)
                if r is None:
                    ok = False
                    out.append(None)
                    continue
                x, y, res = r
                worst = max(worst, res)
                ok = ok and res < mpmath.mpf(2) ** (-tol_bits)
                out.append(_field_str(x, y))
        report.append({"orbit": orb, "label": T.orbit_label[orb[0]].literal(),
                       "coefficients": out, "residual": mpmath.nstr(worst, 5), "pass": ok})
    return report


def lambda_action(v, P):
    """(psi_P v)(x) = v(P x)."""
    T = v.table
    values = [v.values[T.times_ideal(P, i)] for i in range(len(T))]
    return WittVector(T, values, None, list(v.flags) + [f"psi{P.literal()}"])


def translated_spec(spec, pi):
    """Spec of psi_(pi) f_a = f_{a pi} for an element pi."""
    a = [spec.a.a1[0], spec.a.a2[0]]
    M = mult_matrix(pi)
    b = [a[0] * M[0][0] + a[1] * M[1][0], a[0] * M[0][1] + a[1] * M[1][1]]
    return ModularVectorSpec(spec.kind, TorsionIndex.of(b[0], b[1]), spec.N, spec.pairs, spec.delta)


def psi_functoriality_check(v, P, prec=None):
    """Compare psi_P v with the directly built vector of the translated spec (P principal)."""
    T = v.table
    K = T.K
    prec = prec or v.values[0].approx.prec
    pi = is_principal(P)
    if pi is None or not P.is_coprime_to(T.conductor):
        return {"applicable": False, "reason": "needs a principal ideal coprime to N"}
    direct = build_modular_vector(translated_spec(v.spec, pi), T, prec, check_reps=False,
                                  recognize_values=False)
    moved = lambda_action(v, P)
    agree = [_close(moved.values[i].approx, direct.values[i].approx, prec) for i in range(len(T))]
    return {"applicable": True, "P": P.literal(), "agree": agree, "pass": all(agree)}


def integrality_denominator(v, budget=64):
    """Smallest D with D*v(x) integral for every component."""
    polys = [val.minpoly for val in v.values]
    lead = 1
    for p in polys:
        lead = math.lcm(lead, p[0])
    for D in range(1, budget * lead + 1):
        if all(all((c * D ** i) % p[0] == 0 for i, c in enumerate(p)) for p in polys):
            return D
    raise BudgetExhausted(f"no integrality denominator up to {budget * lead}")


def frobenius_congruence_check(v, P, modulus="norm", denom_budget=64, prec=None):
    """psi_P w - w^{NP} for w = D v, checked orbit by orbit through K-rational char polys.

    modulus "norm": every conjugate product c_k is divisible by NP^k in O_K
    (all differences divisible by the integer NP).  modulus "prime": v_P(c_k) >= k.
    """
    T = v.table
    K = T.K
    if modulus not in ("norm", "prime"):
        raise ValueError("modulus must be 'norm' or 'prime'")
    fac = factor_ideal(P)
    if len(fac) != 1 or fac[0][1] != 1:
        raise ValueError(f"{P} is not a prime ideal")
    if not v.recognized:
        return {"P": P.literal(), "pass": False, "error": "unrecognized components"}
    D = integrality_denominator(v, denom_budget)
    Np = int(P.norm())
    prec = prec or v.values[0].approx.prec
    orbits = T.unit_action_orbits()
    psi = [T.times_ideal(P, i) for i in range(len(T))]
    base = [v.values[i].refined(prec) for i in range(len(T))]
    W = prec + (Np + 1) * max(len(o) for o in orbits) * _mag_bits([D * b for b in base]) + 64
    comps = [None] * len(T)
    orbit_reports = []
    with mpmath.workprec(W + 40):
        vals = [D * v.values[i].refined(W) for i in range(len(T))]
        for orb in orbits:
            zs = [vals[psi[i]] - vals[i] ** Np for i in orb]
            coeffs = _poly_from_roots(zs)[1:]
            ok = True
            shown = []
            for k, c in enumerate(coeffs, start=1):
                r = recognize_in_field(c, K, W - 16)
                if r is None or r[0].denominator != 1 or r[1].denominator != 1:
                    ok = False
                    shown.append(None)
                    continue
                x, y = int(r[0]), int(r[1])
                shown.append(_field_str(x, y))
                if modulus == "norm":
                    ok = ok and x % Np ** k == 0 and y % Np ** k == 0
                elif x or y:
                    ok = ok and valuation(QuadIdeal.principal(K.elem(x, y)), P) >= k
            for i in orb:
                comps[i] = ok
            orbit_reports.append({"orbit": orb, "coefficients": shown, "pass": ok})
    return {"P": P.literal(), "norm": Np, "modulus": modulus, "denominator": D,
            "components": comps, "orbits": orbit_reports, "pass": all(comps)}


# ---------------------------------------------------------------------------
# congruences from vectors


def value_eq(u, v):
    """Equality of AlgebraicValues: minimal polynomials first, numeric proximity second."""
    a, b = u.approx, v.approx
    prec = min(a.prec, b.prec)
    close = abs(a.value - b.value) <= 4 * (a.err + b.err) + mpmath.mpf(2) ** (-prec // 2) * max(1, abs(a.value))
    if u.recognized and v.recognized and u.minpoly != v.minpoly:
        if close:
            raise PrecisionError("distinct minimal polynomials but values within 4 err; refine precision")
        return False
    return close


def congruence_of_vector(v):
    """D_xi at the level of the table."""
    return vector_congruence(v.table, [v.values], eq=value_eq)


def family_congruence(vs):
    """D_Xi for a family: the finest partition refining every D_xi."""
    T = vs[0].table
    return vector_congruence(T, [v.values for v in vs], eq=value_eq)


def all_torsion_indices(N, include_zero=True):
    out = []
    for a1 in range(N):
        for a2 in range(N):
            if (a1, a2) == (0, 0) and not include_zero:
                continue
            out.append(TorsionIndex.of(Fraction(a1, N), Fraction(a2, N)))
    return out


def default_family(K, N, theta_ratios=True, delta=4):
    """Weber/j specs for every a with N a = 0, plus theta^k/theta^0 ratios of type [delta]."""
    specs = [ModularVectorSpec("weber", a, N) for a in all_torsion_indices(N)]
    if theta_ratios:
        for a in all_torsion_indices(N, include_zero=False):
            for k in range(1, delta):
                spec = theta_ratio_spec(a, Fraction(k, delta), 0, delta, N)
                if defined_for(spec, K)[0]:
                    specs.append(spec)
    return specs


def compare_with_simN(vs, N, T=None, model=None):
    T = T or vs[0].table
    analytic = family_congruence(vs)
    adelic = sim_N_congruence(T, N, model)
    return {"N": N, "d": T.K.d, "size": len(T), "vectors": len(vs),
            "analytic_blocks": analytic.blocks(), "simN_blocks": adelic.blocks(),
            "simN_is_identity": adelic == identity_congruence(T),
            "equal": analytic == adelic}


# ---------------------------------------------------------------------------
# theta path


def crosscheck_theta_path(spec, x, model, prec=192):
    """Evaluate through tau_s = alpha_s(tau_E) and a'' = a M_rho u_s, compare with the lattice path."""
    K = model.K
    N = model.N
    lattice, _ = evaluate_component(spec, x, model, prec)
    d = spec.delta if spec.kind == "theta" else 1
    delta = TypeDelta((d,))
    with mpmath.workprec(prec + 40):
        s = lattice_of(model, x)
        u, alpha = decompose_idele_g1(K, s, N)
        M = mult_matrix(model._lift(x.rho))
        a = [spec.a.a1[0], spec.a.a2[0]]
        ar = [a[0] * M[0][j] + a[1] * M[1][j] for j in range(2)]
        app = [sum(ar[i] * u[i][j] for i in range(2)) % 1 for j in range(2)]
        tauE = SiegelPoint(mpmath.matrix([[d * K.omega_complex()]]))
        tau_s = gsp_act(alpha, tauE, delta)
        t = tau_s.tau[0, 0]
        pt = (mpmath.mpf(app[0].numerator) / app[0].denominator) * t + \
            (mpmath.mpf(app[1].numerator) / app[1].denominator) * d
        if spec.kind == "theta":
            via = _theta_combo(spec, pt, tau_s, prec)
        elif spec.kind == "j" or all(c == 0 for c in app):
            via = j_theta(t, prec)
        else:
            variant = "generic" if spec.kind == "fricke" else weber_variant(K.d)
            via = weber_theta(variant, pt, t, prec)
        diff = abs(via.value - lattice.value)
        scale = max(1, abs(lattice.value))
    tol = mpmath.mpf(2) ** (-prec + 12)
    return {"rho": list(x.rho), "s_class": list(x.s_class), "a_pp": [str(c) for c in app],
            "tau_s": [mpmath.nstr(mpmath.re(t), 15), mpmath.nstr(mpmath.im(t), 15)],
            "diff": mpmath.nstr(diff / scale, 5), "pass": diff <= tol * scale}


def random_adelic_elements(model, count, rng):
    """Random (rho, c) pairs with rho in O/N and c in C_N (not canonicalized)."""
    res = model.f.residues()
    classes = model.C.elements()
    return [AdelicElement(model.N, rng.choice(res), rng.choice(classes)) for _ in range(count)]
