"""Finite Deligne-Ribet monoids DR_f over imaginary quadratic fields.

DR_f is the quotient of the monoid of nonzero integral ideals by the
congruence A ~_f B, which holds when A B^-1 = (t) for some t in 1 + f B^-1.
As a set it decomposes as the disjoint union over d | f of C_{f/d}; an ideal
A lands in the component d = gcd(A, f) at the ray class of A/d.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .abelian import enumerate_structure
from .errors import BudgetExhausted, VerificationError
from .quadfield import (QuadIdeal, divisors, is_principal, iter_ideals,
                        ray_class_group, residue_units, ideal_in_class)


def dr_congruent(A, B, f):
    """Definitional test of A ~_f B."""
    t0 = is_principal(A / B)
    if t0 is None:
        return False
    target = f / B
    for u in A.K.units():
        if target.contains(t0 * u - 1):
            return True
    return False


def dr_key(A, f):
    """Invariant separating the classes of DR_f: (gcd(A, f), ray class of A/gcd)."""
    d = A + f
    g = ray_class_group(A.K, _div(f, d))
    return (d.a, d.b, d.c), g.dlog(_div(A, d))


def _div(A, B):
    return A * B.inverse()


@dataclass(frozen=True)
class DRClass:
    conductor: QuadIdeal
    rep: QuadIdeal

    def __eq__(self, other):
        return (isinstance(other, DRClass) and self.conductor == other.conductor
                and dr_congruent(self.rep, other.rep, self.conductor))

    def __hash__(self):
        return hash(dr_key(self.rep, self.conductor))


def dr_target_size(K, f):
    return sum(ray_class_group(K, _div(f, d)).order for d in divisors(f))


@dataclass
class DRMonoidTable:
    K: object
    conductor: QuadIdeal
    elements: list
    mul: list
    units: list
    orbit_label: list
    keys: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.index_of(QuadIdeal.unit(self.K))

    def index_of(self, A):
        """Index of the class of the integral ideal A."""
        return self.keys[dr_key(A, self.conductor)]

    def rep(self, i):
        return self.elements[i].rep

    def times_ideal(self, A, i):
        return self.index_of(A * self.rep(i))

    def unit_action_orbits(self):
        seen = {}
        orbits = []
        for i in range(len(self)):
            if i in seen:
                continue
            orb = sorted({self.mul[u][i] for u in self.units})
            for j in orb:
                seen[j] = len(orbits)
            orbits.append(orb)
        return orbits

    def to_json(self):
        return {
            "conductor": self.conductor.to_json(),
            "elements": [e.rep.to_json() for e in self.elements],
            "mul": self.mul,
            "orbit_labels": [d.to_json() for d in self.orbit_label],
            "units": self.units,
        }


def build_dr_monoid(K, f, max_norm=10**6, verify=False):
    """Enumerate integral ideals by norm until every class of DR_f has a representative.

    Classes are bucketed with ``dr_key``; with ``verify`` every new
    representative is also checked against the definition (pairwise
    non-congruent) and every merge is confirmed with ``dr_congruent``.
    """
    target = dr_target_size(K, f)
    keys = {}
    reps = []
    for A in iter_ideals(K, max_norm):
        k = dr_key(A, f)
        if k in keys:
            if verify and not dr_congruent(A, reps[keys[k]], f):
                raise VerificationError(f"{A} and {reps[keys[k]]} share a key but are not congruent")
            continue
        if verify:
            for B in reps:
                if (B + f) == (A + f) and dr_congruent(A, B, f):
                    raise VerificationError(f"{A} and {B} are congruent but have distinct keys")
        keys[k] = len(reps)
        reps.append(A)
        if len(reps) == target:
            break
    else:
        raise BudgetExhausted(f"found {len(reps)} of {target} classes of DR_{f} up to norm {max_norm}")
    order = sorted(range(len(reps)), key=lambda i: reps[i].sort_key())
    reps = [reps[i] for i in order]
    keys = {dr_key(A, f): i for i, A in enumerate(reps)}
    n = len(reps)
    mul = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            mul[i][j] = mul[j][i] = keys[dr_key(reps[i] * reps[j], f)]
    labels = [A + f for A in reps]
    units = [i for i in range(n) if labels[i].is_unit_ideal()]
    return DRMonoidTable(K, f, [DRClass(f, A) for A in reps], mul, units, labels, keys)


@lru_cache(maxsize=None)
def cached_dr_monoid(K, f):
    return build_dr_monoid(K, f)


def check_monoid_axioms(T):
    n = len(T)
    e = T.identity
    m = T.mul
    for i in range(n):
        if m[e][i] != i:
            return False
        for j in range(n):
            if m[i][j] != m[j][i]:
                return False
            for k in range(n):
                if m[m[i][j]][k] != m[i][m[j][k]]:
                    return False
    return True


def unit_group_divisors(T):
    e = T.identity
    st, _, _ = enumerate_structure(T.units, lambda i, j: T.mul[i][j], e)
    return list(st.divisors)


def orbit_decomposition(T):
    """Map divisor literal -> element indices, grouped by gcd(rep, f)."""
    out = {}
    for i, d in enumerate(T.orbit_label):
        out.setdefault(d, []).append(i)
    return out


def projection(Tbig, Tsmall):
    """Index map DR_{f'} -> DR_f induced by the identity on representatives."""
    if not Tsmall.conductor.divides(Tbig.conductor):
        raise ValueError(f"{Tsmall.conductor} does not divide {Tbig.conductor}")
    return [Tsmall.index_of(e.rep) for e in Tbig.elements]


def check_projection(Tbig, Tsmall, pi):
    n = len(Tbig)
    if set(pi) != set(range(len(Tsmall))):
        return False
    if {pi[u] for u in Tbig.units} != set(Tsmall.units):
        return False
    return all(pi[Tbig.mul[i][j]] == Tsmall.mul[pi[i]][pi[j]] for i in range(n) for j in range(n))


def psi_action(T, xi, P):
    """(psi_P xi)(x) = xi(P x) for a function given as a list over T."""
    return [xi[T.times_ideal(P, i)] for i in range(len(T))]


# ---------------------------------------------------------------------------
# congruences


@dataclass
class MonoidCongruence:
    base: DRMonoidTable
    partition: list

    def blocks(self):
        out = {}
        for i, b in enumerate(self.partition):
            out.setdefault(b, []).append(i)
        return sorted(out.values())

    def canonical(self):
        return canonical_partition(self.partition)

    def __eq__(self, other):
        return self.canonical() == other.canonical()

    def is_congruence(self):
        T = self.base
        p = self.partition
        n = len(T)
        for x in range(n):
            for y in range(x + 1, n):
                if p[x] != p[y]:
                    continue
                if any(p[T.mul[x][z]] != p[T.mul[y][z]] for z in range(n)):
                    return False
        return True

    def join(self, other):
        uf = list(range(len(self.partition)))

        def find(i):
            while uf[i] != i:
                uf[i] = uf[uf[i]]
                i = uf[i]
            return i
        for p in (self.partition, other.partition):
            first = {}
            for i, b in enumerate(p):
                if b in first:
                    uf[find(i)] = find(first[b])
                else:
                    first[b] = i
        return MonoidCongruence(self.base, canonical_partition([find(i) for i in range(len(uf))]))

    def meet(self, other):
        return MonoidCongruence(self.base, canonical_partition(list(zip(self.partition, other.partition))))


def canonical_partition(labels):
    seen = {}
    return [seen.setdefault(b, len(seen)) for b in labels]


def _value_ids(values, eq):
    """Cluster arbitrary values into integer ids using an equality callback."""
    reps = []
    ids = []
    for v in values:
        for k, r in enumerate(reps):
            if (eq(v, r) if eq else v == r):
                ids.append(k)
                break
        else:
            ids.append(len(reps))
            reps.append(v)
    return ids


def vector_congruence(T, Xi, eq=None):
    """Coarsest congruence D_Xi: x ~ y iff xi(xz) = xi(yz) for all z and xi in Xi."""
    n = len(T)
    coded = []
    for xi in Xi:
        coded.append(_value_ids(xi, eq))
    sigs = []
    for x in range(n):
        sigs.append(tuple(c[T.mul[x][z]] for c in coded for z in range(n)))
    return MonoidCongruence(T, canonical_partition(sigs))


def functions_through(Q):
    """Block-indicator basis of the functions constant on the blocks of Q."""
    n = len(Q.partition)
    return [[int(i in blk) for i in range(n)] for blk in map(set, Q.blocks())]


def congruence_generated_by(T, pairs):
    n = len(T)
    uf = list(range(n))

    def find(i):
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i
    todo = list(pairs)
    while todo:
        x, y = todo.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        uf[rx] = ry
        for z in range(n):
            todo.append((T.mul[x][z], T.mul[y][z]))
    return MonoidCongruence(T, canonical_partition([find(i) for i in range(n)]))


def random_congruence(T, rng, npairs=None):
    n = len(T)
    k = npairs if npairs is not None else rng.randint(1, 2)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(k)]
    return congruence_generated_by(T, pairs)


def lambda_algebra_rank(T, E, rounds=3):
    """Rank of the span of the ring generated by E, its psi translates and constants."""
    n = len(T)
    gens = [[1] * n]
    for xi in E:
        for z in range(n):
            gens.append([xi[T.mul[x][z]] for x in range(n)])
    basis = _row_basis(gens)
    for _ in range(rounds):
        prods = [[a * b for a, b in zip(u, v)] for i, u in enumerate(basis) for v in basis[i:]]
        new = _row_basis(basis + prods)
        if len(new) == len(basis):
            break
        basis = new
    return len(basis), basis


def _row_basis(rows):
    """Echelon basis of the rational row span (exact)."""
    basis = []
    pivots = []
    for r in rows:
        v = [Fraction(x) for x in r]
        for b, p in zip(basis, pivots):
            if v[p]:
                c = v[p] / b[p]
                v = [x - c * y for x, y in zip(v, b)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is not None:
            basis.append(v)
            pivots.append(nz)
    return basis


def in_span(basis_rows, v):
    return len(_row_basis(list(basis_rows) + [v])) == len(_row_basis(basis_rows))


# ---------------------------------------------------------------------------
# adelic description at f = N O_K


@dataclass(frozen=True)
class AdelicElement:
    N: int
    rho: tuple
    s_class: tuple


class AdelicModel:
    """(O/N) x_{(O/N)^x} C_N with its encode/decode maps to DR_{N O_K}."""

    def __init__(self, T, N):
        K = T.K
        self.K = K
        self.N = N
        self.f = QuadIdeal.from_int(K, N)
        if T.conductor != self.f:
            raise ValueError("adelic model needs the table at conductor N O_K")
        self.T = T
        self.C = ray_class_group(K, self.f)
        R = residue_units(K, self.f)
        self.unit_residues = sorted({self.f.reduce_elem(K.elem(x, y))
                                     for (x, y) in self.f.residues() if (x, y) != (0, 0)
                                     and (QuadIdeal.principal(K.elem(x, y)) + self.f).is_unit_ideal()}) \
            if not self.f.is_unit_ideal() else [(0, 0)]
        self.R = R
        self._iota = {u: self.C.dlog(QuadIdeal.principal(self._lift(u))) for u in self.unit_residues}
        self._class_reps = {}

    def _lift(self, r):
        z = self.K.elem(*r)
        return self.K.elem(self.N) if z.is_zero() else z

    def iota(self, u):
        return self._iota[u]

    def mulres(self, r, u):
        return self.f.reduce_elem(self.K.elem(*r) * self.K.elem(*u))

    def class_rep(self, c):
        """Integral ideal coprime to N in ray class c."""
        if c not in self._class_reps:
            self._class_reps[c] = ideal_in_class(self.K, c, self.C.dlog, avoid=self.f)
        return self._class_reps[c]

    def encode_ideal(self, A):
        rho = self.find_rho(A)
        B = QuadIdeal.principal(rho) / A
        c = self.C.neg(self.C.dlog(B))
        return AdelicElement(self.N, self.f.reduce_elem(rho), c)

    def find_rho(self, A, box=40):
        """rho in A with (rho) A^-1 coprime to N."""
        K = self.K
        e1, e2 = A.zbasis()
        cands = []
        for r in range(0, box):
            for x in range(-r, r + 1):
                for y in (-r, r) if abs(x) != r else range(-r, r + 1):
                    if x == 0 and y == 0:
                        continue
                    cands.append((x, y))
            for x, y in cands:
                z = e1 * x + e2 * y
                if (QuadIdeal.principal(z) / A).is_coprime_to(self.f):
                    return z
            cands = []
        raise BudgetExhausted(f"no rho found for {A}")

    def encode(self, i):
        return self.canonical(self.encode_ideal(self.T.rep(i)))

    def canonical(self, x):
        """Minimal representative under (rho, c) ~ (rho u, c - iota(u))."""
        best = None
        for u in self.unit_residues:
            cand = (self.mulres(x.rho, u), self.C.add(x.s_class, self.C.neg(self.iota(u))))
            if best is None or cand < best:
                best = cand
        return AdelicElement(self.N, best[0], best[1])

    def decode(self, x):
        """DR class index of (rho lifted) * (ideal in class c)."""
        A = QuadIdeal.principal(self._lift(x.rho)) * self.class_rep(x.s_class)
        return self.T.index_of(A)

    def multiply(self, x, y):
        return self.canonical(AdelicElement(self.N, self.mulres(x.rho, y.rho),
                                            self.C.add(x.s_class, y.s_class)))


def torsion_field_galois(K, N, rho):
    """Finite-level model of Gal(K_{S_rho}/K) as C_{N/dbar}, dbar = gcd((rho), N)."""
    f = QuadIdeal.from_int(K, N)
    z = K.elem(*rho)
    dbar = f if z.is_zero() else (QuadIdeal.principal(z) + f)
    return TorsionFieldGalois(N, dbar, ray_class_group(K, _div(f, dbar)))


@dataclass
class TorsionFieldGalois:
    N: int
    dbar: QuadIdeal
    group: object


def sim_N_congruence(T, N, model=None):
    """The congruence ~_N on DR_{N O_K}, decided adelically."""
    model = model or AdelicModel(T, N)
    K = T.K
    C = model.C
    enc = [model.encode(i) for i in range(len(T))]
    proj_cache = {}

    def projector(rho):
        gal = torsion_field_galois(K, N, rho)
        key = (gal.dbar.a, gal.dbar.b, gal.dbar.c)
        if key not in proj_cache:
            G = gal.group
            imgs = [G.dlog(g) for g in C.generators]

            def proj(c, G=G, imgs=imgs):
                out = G.zero()
                for ci, v in zip(c, imgs):
                    out = G.add(out, tuple(ci * a for a in v))
                return out
            proj_cache[key] = (G, proj)
        return proj_cache[key]

    def related(x, y):
        G, proj = projector(x.rho)
        for u in model.unit_residues:
            if model.mulres(x.rho, u) != y.rho:
                continue
            if proj(x.s_class) == proj(C.add(model.iota(u), y.s_class)):
                return True
        return False

    n = len(T)
    uf = list(range(n))
    for i in range(n):
        for j in range(i):
            if related(enc[i], enc[j]):
                uf[i] = uf[j]
                break
    return MonoidCongruence(T, canonical_partition(uf))


def identity_congruence(T):
    return MonoidCongruence(T, list(range(len(T))))


def random_ideal(K, rng, max_norm=60, avoid=None):
    pool = [I for I in iter_ideals(K, max_norm) if avoid is None or I.is_coprime_to(avoid)]
    return rng.choice(pool)
