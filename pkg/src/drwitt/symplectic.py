"""Alternating integer forms, symplectic bases, Riemann forms and the GSp action.

Lattice conventions: a point of C^g / (Z^g tau + Z^g delta) is written as
x1 tau + x2 delta with row vectors x1, x2; a matrix alpha acts on coordinates
from the right.  For g = 1 the ring of integers uses the ordered basis
(omega, 1), so the coordinate row (x1, x2) means x1*omega + x2.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from sympy import Matrix

from .abelian import identity_matrix, mat_mul
from .errors import PrecisionError
from .quadfield import QuadElem, QuadIdeal


# ---------------------------------------------------------------------------
# Frobenius normal form of alternating integer matrices


def is_alternating(E):
    n = len(E)
    return all(E[i][j] == -E[j][i] for i in range(n) for j in range(n))


@dataclass(frozen=True)
class TypeDelta:
    d: tuple

    def __post_init__(self):
        for a, b in zip(self.d, self.d[1:]):
            if b % a:
                raise ValueError(f"type {self.d} breaks the divisor chain")
        if any(x <= 0 for x in self.d):
            raise ValueError("type entries must be positive")

    @property
    def g(self):
        return len(self.d)

    @property
    def embed_ok(self):
        return self.d[0] >= 3

    @property
    def strong_ok(self):
        d1 = self.d[0]
        return d1 >= 4 and (d1 % 2 == 0 or d1 % 3 == 0)

    def J(self):
        g = self.g
        M = [[0] * (2 * g) for _ in range(2 * g)]
        for i, di in enumerate(self.d):
            M[i][g + i] = di
            M[g + i][i] = -di
        return M

    def characteristics(self):
        """All k in delta^-1 Z^g / Z^g, lexicographic in delta*k."""
        out = [()]
        for di in self.d:
            out = [k + (Fraction(j, di),) for k in out for j in range(di)]
        return out

    def to_json(self):
        return {"d": list(self.d), "embed_ok": self.embed_ok, "strong_ok": self.strong_ok}


def frobenius_reduce(E):
    """Unimodular U with U E U^t = [[0, delta], [-delta, 0]].

    Alternating Smith elimination: pivot on the smallest nonzero entry,
    clear its row/column pair by symmetric basis changes, and enforce
    divisibility of the remaining block before splitting the pair off.
    """
    n = len(E)
    if n % 2 or not is_alternating(E):
        raise ValueError("expected an alternating matrix of even size")
    A = [list(map(int, r)) for r in E]
    U = identity_matrix(n)

    def add(src, dst, q):
        # basis change b_dst += q b_src
        if q == 0:
            return
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        for r in A:
            r[dst] += q * r[src]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    rest = list(range(n))
    pairs = []
    while rest:
        best = None
        for i in rest:
            for j in rest:
                if i != j and A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            raise ValueError("degenerate alternating matrix")
        s0, s1 = best
        if A[s0][s1] < 0:
            s0, s1 = s1, s0
        d = A[s0][s1]
        others = [k for k in rest if k not in (s0, s1)]
        dirty = False
        for k in others:
            add(s1, k, -(A[s0][k] // d))
            add(s0, k, A[s1][k] // d)
            if A[s0][k] or A[s1][k]:
                dirty = True
        if dirty:
            continue
        bad = next(((k, l) for k in others for l in others if A[k][l] % d), None)
        if bad is not None:
            add(bad[0], s0, 1)
            continue
        pairs.append((s0, s1, d))
        rest = others
    order = [p[0] for p in pairs] + [p[1] for p in pairs]
    U = [U[i] for i in order]
    delta = TypeDelta(tuple(p[2] for p in pairs))
    return U, delta


def congruent_form(U, E):
    return mat_mul(mat_mul(U, E), [list(r) for r in zip(*U)])


def random_unimodular(n, rng, steps=12):
    U = identity_matrix(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-3, 3)
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
    return U


def random_alternating(n, rng, bound=9):
    while True:
        E = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.randint(-bound, bound)
                E[i][j], E[j][i] = v, -v
        if Matrix(E).det() != 0:
            return E


# ---------------------------------------------------------------------------
# CM fields given by a monic integer polynomial


def _poly_mulmod(a, b, P):
    """Product of coefficient lists (low degree first) modulo monic P."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    n = len(P) - 1
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for i in range(n + 1):
                out[k - n + i] -= c * P[i]
    return (out + [Fraction(0)] * n)[:n]


def _power_sums(P, count):
    """Newton power sums p_0..p_{count-1} of the roots of monic P (exact)."""
    n = len(P) - 1
    e = [Fraction(1)]  # elementary symmetric with signs from P
    c = [Fraction(x) for x in P]  # low degree first, c[n] = 1
    p = [Fraction(n)]
    for k in range(1, count):
        s = Fraction(0)
        for i in range(1, min(k, n) + 1):
            coef = c[n - i]
            if i < k:
                s -= coef * p[k - i]
            else:
                s -= coef * k
        p.append(s)
    return p


def poly_trace(a, P):
    """Tr_{E/Q} of the element sum a_i x^i of E = Q[x]/P."""
    p = _power_sums(P, len(a) + 1)
    return sum(Fraction(ai) * p[i] for i, ai in enumerate(a))


def _polyval(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
    return acc


def find_conjugation(P, prec=256):
    """Polynomial q with q(r) = conj(r) on every root r of P (exact, verified)."""
    with mpmath.workprec(prec):
        roots = mpmath.polyroots(list(reversed([int(x) for x in P])), maxsteps=200, extraprec=prec)
        n = len(roots)
        V = mpmath.matrix([[r ** j for j in range(n)] for r in roots])
        rhs = mpmath.matrix([mpmath.conj(r) for r in roots])
        sol = mpmath.lu_solve(V, rhs)
        q = []
        for c in sol:
            if abs(mpmath.im(c)) > mpmath.mpf(2) ** (-prec // 3):
                raise ValueError("complex conjugation is not a polynomial over Q here")
            q.append(Fraction(mpmath.nstr(mpmath.re(c), prec // 4)).limit_denominator(10**12))
    # exact checks: P(q(x)) == 0 mod P and q(q(x)) == x mod P
    Pq = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for c in P:
        Pq = [u + c * v for u, v in zip(Pq, power)]
        power = _poly_mulmod(power, q, P)
    if any(Pq):
        raise ValueError("recognized conjugation does not preserve P")
    qq = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for c in q:
        qq = [u + c * v for u, v in zip(qq, power)]
        power = _poly_mulmod(power, q, P)
    if qq != [Fraction(int(i == 1)) for i in range(n)]:
        raise ValueError("recognized conjugation is not an involution")
    return q


def _compose(a, q, P):
    """a(q(x)) mod P."""
    n = len(P) - 1
    out = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for c in a:
        out = [u + Fraction(c) * v for u, v in zip(out, power)]
        power = _poly_mulmod(power, q, P)
    return out


@dataclass
class CMPointData:
    poly: list                 # monic integer polynomial, low degree first
    basis: list                # Z-basis of O_E as coefficient lists
    e: list                    # totally imaginary element
    n: int = 1
    cm_type: list = None       # indices of chosen roots (default: Im > 0)
    prec: int = 128
    roots: list = field(default=None, repr=False)

    @property
    def g(self):
        return (len(self.poly) - 1) // 2

    def all_roots(self):
        if self.roots is None:
            with mpmath.workprec(self.prec + 64):
                self.roots = mpmath.polyroots(list(reversed([int(x) for x in self.poly])),
                                              maxsteps=200, extraprec=self.prec + 64)
        return self.roots

    def phi(self):
        roots = self.all_roots()
        if self.cm_type is None:
            idx = [i for i, r in enumerate(roots) if mpmath.im(r) > 0]
        else:
            idx = list(self.cm_type)
        if len(idx) != self.g:
            raise ValueError("CM type must pick g roots")
        return [roots[i] for i in idx]

    def embed(self, a):
        with mpmath.workprec(self.prec + 64):
            return [_polyval(a, r) for r in self.phi()]


def riemann_form_cm(data):
    """Integral alternating matrix n * Tr(e * b_i * iota(b_j)) on the basis."""
    P = [Fraction(x) for x in data.poly]
    iota = find_conjugation(data.poly)
    with mpmath.workprec(data.prec):
        for v in data.embed(data.e):
            if not mpmath.im(v) > 0:
                raise ValueError("e fails Im(phi(e)) > 0 on the CM type")
    m = len(data.basis)
    conj_basis = [_compose(b, iota, P) for b in data.basis]
    E = [[None] * m for _ in range(m)]
    for i in range(m):
        ebi = _poly_mulmod([Fraction(x) for x in data.e], [Fraction(x) for x in data.basis[i]], P)
        for j in range(m):
            val = data.n * poly_trace(_poly_mulmod(ebi, conj_basis[j], P), P)
            if val.denominator != 1:
                raise ValueError(f"scaling n={data.n} does not make the form integral")
            E[i][j] = int(val)
    if not is_alternating(E):
        raise ValueError("trace form is not alternating; check e")
    return E


def check_riemann_conditions(data, E, prec=None):
    """Numeric J-invariance and positivity of the form given by E on Phi(basis).

    Returns (j_residual, min_eigenvalue) at the working precision.
    """
    prec = prec or data.prec
    g = data.g
    with mpmath.workprec(prec + 32):
        vecs = [data.embed(b) for b in data.basis]
        # real coordinates: rows are (Re u_1..Re u_g, Im u_1..Im u_g)
        L = mpmath.matrix(2 * g, 2 * g)
        for i, v in enumerate(vecs):
            for k in range(g):
                L[i, k] = mpmath.re(v[k])
                L[i, g + k] = mpmath.im(v[k])
        Linv = L ** -1
        Em = mpmath.matrix([[mpmath.mpf(x) for x in row] for row in E])
        # form on R^{2g}: psi(x, y) = x S y^t with S = Linv E Linv^t
        S = Linv * Em * Linv.T
        Jr = mpmath.matrix(2 * g, 2 * g)
        for k in range(g):
            Jr[k, g + k] = 1      # multiplication by i: (x, y) -> (-y, x) on (Re, Im)
            Jr[g + k, k] = -1
        JS = Jr * S * Jr.T
        jres = max(abs(JS[i, j] - S[i, j]) for i in range(2 * g) for j in range(2 * g))
        H = S * Jr.T  # psi(u, J u) = u S J^t u^t
        Hs = (H + H.T) / 2
        eig = mpmath.eigsy(Hs)[0]
        mineig = min(eig[i] for i in range(2 * g))
        # psi(u, v) for Phi-images must equal the trace form exactly
        e_emb = data.embed(data.e)
        direct = 0
        for i in range(2 * g):
            for j in range(2 * g):
                val = data.n * sum(e_emb[k] * (vecs[i][k] * mpmath.conj(vecs[j][k])
                                              - mpmath.conj(vecs[i][k]) * vecs[j][k]) for k in range(g))
                direct = max(direct, abs(val - E[i][j]))
    return jres, mineig, direct


# ---------------------------------------------------------------------------
# Siegel upper half space


@dataclass
class SiegelPoint:
    tau: object  # mpmath matrix

    @property
    def g(self):
        return self.tau.rows

    def check(self, tol=None):
        t = self.tau
        g = self.g
        tol = tol if tol is not None else mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
        sym = max(abs(t[i, j] - t[j, i]) for i in range(g) for j in range(g))
        if sym > tol:
            return False
        Y = mpmath.matrix(g, g)
        for i in range(g):
            for j in range(g):
                Y[i, j] = mpmath.im(t[i, j])
        try:
            mpmath.cholesky((Y + Y.T) / 2)
        except ValueError:
            return False
        return True

    def imag(self):
        g = self.g
        return mpmath.matrix([[mpmath.im(self.tau[i, j]) for j in range(g)] for i in range(g)])

    def min_eig_imag(self):
        Y = self.imag()
        Y = (Y + Y.T) / 2
        ev = mpmath.eigsy(Y)[0]
        return min(ev[i] for i in range(self.g))


def tau_from_basis(lams, mus, delta):
    """tau with Z^g lam + Z^g mu ~= Z^g tau + Z^g delta (columns in C^g)."""
    g = delta.g
    M = mpmath.matrix(g, g)
    Lm = mpmath.matrix(g, g)
    for j in range(g):
        for i in range(g):
            M[i, j] = mus[j][i]
            Lm[i, j] = lams[j][i]
    if abs(mpmath.det(M)) < mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
        raise ValueError("singular normalization matrix")
    D = mpmath.diag([mpmath.mpf(x) for x in delta.d])
    T = D * M ** -1
    tau = T * Lm
    tau = (tau + tau.T) / 2 if _is_symmetric(tau) else tau
    pt = SiegelPoint(tau)
    Y = pt.imag()
    ev = mpmath.eigsy((Y + Y.T) / 2)[0]
    evs = [ev[i] for i in range(g)]
    if all(x > 0 for x in evs):
        return pt, T, 1
    if all(x < 0 for x in evs):
        return SiegelPoint(-tau), T, -1
    raise ValueError("Im(tau) is indefinite for both orientations")


def _is_symmetric(t, tol=None):
    g = t.rows
    tol = tol or mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
    return all(abs(t[i, j] - t[j, i]) < tol for i in range(g) for j in range(g))


@dataclass(frozen=True)
class GSpElement:
    M: tuple  # rows of Fractions

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(Fraction(x) for x in r) for r in rows))

    @property
    def g(self):
        return len(self.M) // 2

    def blocks(self):
        g = self.g
        M = self.M
        a = [list(r[:g]) for r in M[:g]]
        b = [list(r[g:]) for r in M[:g]]
        c = [list(r[:g]) for r in M[g:]]
        d = [list(r[g:]) for r in M[g:]]
        return a, b, c, d

    def multiplier(self, delta):
        J = delta.J()
        L = mat_mul(mat_mul([list(r) for r in self.M], J), [list(r) for r in zip(*self.M)])
        nu = Fraction(L[0][self.g], J[0][self.g])
        for i in range(2 * self.g):
            for j in range(2 * self.g):
                if L[i][j] != nu * J[i][j]:
                    return None
        return nu

    def __matmul__(self, other):
        return GSpElement.from_rows(mat_mul([list(r) for r in self.M], [list(r) for r in other.M]))

    def to_json(self):
        return [[str(x) for x in r] for r in self.M]


def _mp(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def gsp_act(alpha, pt, delta):
    """tau -> (a tau + b delta)(c tau + d delta)^-1 delta."""
    nu = alpha.multiplier(delta)
    if nu is None or nu <= 0:
        raise ValueError("alpha is not in GSp^+ for this type")
    g = alpha.g
    a, b, c, d = (mpmath.matrix([[_mp(x) for x in r] for r in blk]) for blk in alpha.blocks())
    D = mpmath.diag([mpmath.mpf(x) for x in delta.d])
    num = a * pt.tau + b * D
    den = c * pt.tau + d * D
    if abs(mpmath.det(den)) < mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
        raise ValueError("c tau + d delta is not invertible")
    t = num * den ** -1 * D
    t = (t + t.T) / 2
    return SiegelPoint(t)


def mobius(M, tau):
    (a, b), (c, d) = M
    return (_mp(a) * tau + _mp(b)) / (_mp(c) * tau + _mp(d))


def random_gsp(g, rng, delta=None, steps=6):
    """Random element of GSp^+_{2g}(Q) for J_delta (conjugated from the standard J)."""
    n = 2 * g
    M = identity_matrix(n)
    M = [[Fraction(x) for x in r] for r in M]
    for _ in range(steps):
        kind = rng.randrange(4)
        G = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        if kind == 0:
            for i in range(g):
                for j in range(i, g):
                    v = rng.randint(-2, 2)
                    G[i][g + j] = G[j][g + i] = Fraction(v)
        elif kind == 1:
            for i in range(g):
                for j in range(i, g):
                    v = rng.randint(-2, 2)
                    G[g + i][j] = G[g + j][i] = Fraction(v)
        elif kind == 2:
            nu = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            for i in range(g):
                G[i][i] = nu
        else:
            i, j = rng.sample(range(g), 2) if g > 1 else (0, 0)
            if i != j:
                q = rng.randint(-2, 2)
                G[i][j] = Fraction(q)          # U
                G[g + j][g + i] = Fraction(-q)  # U^{-t}
        M = mat_mul(G, M)
    if delta is not None:
        Dg = [[Fraction(0)] * n for _ in range(n)]
        Di = [[Fraction(0)] * n for _ in range(n)]
        for i in range(g):
            Dg[i][i] = Di[i][i] = Fraction(1)
            Dg[g + i][g + i] = Fraction(delta.d[i])
            Di[g + i][g + i] = Fraction(1, delta.d[i])
        M = mat_mul(mat_mul(Dg, M), Di)
    return GSpElement.from_rows(M)


# ---------------------------------------------------------------------------
# g = 1 decomposition of eta(s)


def coords(z):
    """Row coordinates of z in the basis (omega, 1)."""
    return [z.y, z.x]


def mult_matrix(z):
    """Matrix of t -> t z acting on coordinate rows in the basis (omega, 1)."""
    K = z.K
    return [coords(K.omega * z), coords(z)]


def oriented_basis(I):
    """Basis (w1, w2) of the ideal with Im(w1/w2) > 0, as coordinate rows."""
    e1, e2 = I.zbasis()  # e1 = a/D (rational), e2 = (b + c w)/D
    # Im(e2/e1) > 0 since Im(omega) > 0 and c, a > 0
    return [coords(e2), coords(e1)]


def decompose_idele_g1(K, s, N):
    """(u mod N, alpha) with eta(s) = u alpha at the primes above N.

    For an element s (principal idele) alpha is its multiplication matrix and
    u is the identity.  For an ideal s coprime to N the idele is taken to be 1
    at the primes dividing N, alpha is an oriented basis matrix of s and
    u = alpha^-1 mod N.
    """
    if isinstance(s, QuadElem):
        alpha = GSpElement.from_rows(mult_matrix(s))
        if alpha.multiplier(TypeDelta((1,))) <= 0:
            raise ValueError("multiplication matrix has nonpositive determinant")
        return [[1, 0], [0, 1]], alpha
    if not s.is_coprime_to(QuadIdeal.from_int(K, N)):
        raise ValueError("s must be coprime to N")
    rows = oriented_basis(s)
    alpha = GSpElement.from_rows(rows)
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # inverse mod N of a rational matrix whose entries have denominators prime to N
    inv = [[rows[1][1] / det, -rows[0][1] / det], [-rows[1][0] / det, rows[0][0] / det]]
    u = [[_mod_frac(x, N) for x in r] for r in inv]
    return u, alpha


def _mod_frac(x, N):
    x = Fraction(x)
    if N == 1:
        return 0
    return (x.numerator * pow(x.denominator, -1, N)) % N


def zeta5_data(prec=128, n=1):
    """Q(zeta_5) with power basis and e = zeta - zeta^-1."""
    P = [1, 1, 1, 1, 1]
    basis = [[1], [0, 1], [0, 0, 1], [0, 0, 0, 1]]
    e = [1, 2, 1, 1]  # zeta - zeta^4 with zeta^4 = -1 - zeta - zeta^2 - zeta^3
    return CMPointData(P, basis, e, n=n, prec=prec)


def cm_point(data):
    """Riemann form, Frobenius reduction and tau_E for CM data."""
    E = riemann_form_cm(data)
    U, delta = frobenius_reduce(E)
    g = data.g
    with mpmath.workprec(data.prec + 32):
        vecs = [data.embed(b) for b in data.basis]
        new = [[sum(U[i][k] * vecs[k][c] for k in range(2 * g)) for c in range(g)] for i in range(2 * g)]
        pt, T, sign = tau_from_basis(new[:g], new[g:], delta)
        # reconstruction residual: T Phi(b_k) should be the integer combination of (tau | delta) columns
        Uinv = Matrix(U).inv()
        cols = [[pt.tau[r, j] * sign for r in range(g)] for j in range(g)] + \
               [[delta.d[j] if r == j else 0 for r in range(g)] for j in range(g)]
        res = mpmath.mpf(0)
        for k in range(2 * g):
            img = [sum(T[r, c] * vecs[k][c] for c in range(g)) for r in range(g)]
            comb = [sum(int(Uinv[k, j]) * cols[j][r] for j in range(2 * g)) for r in range(g)]
            res = max(res, max(abs(x - y) for x, y in zip(img, comb)))
        sym = max(abs(pt.tau[i, j] - pt.tau[j, i]) for i in range(g) for j in range(g))
    return {"E": E, "U": U, "delta": delta, "point": pt, "residual": res, "symmetry": sym,
            "orientation": sign}


def check_precision(prec):
    if prec < 32:
        raise PrecisionError("prec must be at least 32 bits")
