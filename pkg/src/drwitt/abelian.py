"""Finite abelian groups: Smith normal form and structure from enumeration.

Groups are presented as Z^m / (row span of a relation matrix).  After Smith
reduction ``U R V = diag(e_1, ..., e_m)`` an old exponent vector ``x`` maps to
``x V`` read modulo the elementary divisors.
"""

from dataclasses import dataclass, field


def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)]
            for i in range(len(A))]


def smith_normal_form(R):
    """Smith form of an integer matrix.

    Returns (D, U, V, Vinv) with U*R*V = D diagonal, each diagonal entry dividing
    the next, U and V unimodular and Vinv the inverse of V.
    """
    n = len(R)
    m = len(R[0]) if n else 0
    A = [list(map(int, row)) for row in R]
    U = identity_matrix(n)
    V = identity_matrix(m)
    Vi = identity_matrix(m)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(src, dst, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        # inverse: row_src -= q * row_dst
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    def add_row(src, dst, q):
        if q == 0:
            return
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    t = 0
    while t < min(n, m):
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, n):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                d = A[t][t]
                for i in range(t + 1, n):
                    for j in range(t + 1, m):
                        if A[i][j] % d:
                            add_row(i, t, 1)
                            done = False
                            break
                    if not done:
                        break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V, Vi


@dataclass
class GroupStructure:
    """Z^m modulo a full-rank relation lattice, in Smith coordinates.

    ``divisors`` keeps only the nontrivial invariants; ``columns`` are the
    matching columns of V used to translate old coordinates.
    """
    divisors: list
    V: list
    Vinv: list
    columns: list = field(default_factory=list)

    @property
    def order(self):
        o = 1
        for e in self.divisors:
            o *= e
        return o

    def reduce(self, x):
        """Translate an old exponent vector into reduced Smith coordinates."""
        out = []
        for e, c in zip(self.divisors, self.columns):
            out.append(sum(xi * self.V[i][c] for i, xi in enumerate(x)) % e)
        return tuple(out)

    def generator_vectors(self):
        """Old-coordinate exponent vectors of the Smith generators."""
        return [list(self.Vinv[c]) for c in self.columns]


def structure_from_relations(R):
    """Structure of Z^m / rowspan(R); R must have rank m."""
    m = len(R[0]) if R else 0
    if m == 0:
        return GroupStructure([], [], [], [])
    D, _, V, Vi = smith_normal_form(R)
    diag = [D[i][i] if i < len(D) else 0 for i in range(m)]
    if any(d == 0 for d in diag):
        raise ValueError("relation matrix is not of full rank")
    cols = [i for i, d in enumerate(diag) if d != 1]
    return GroupStructure([diag[i] for i in cols], V, Vi, cols)


def enumerate_structure(elements, mul, identity, key=lambda x: x):
    """Structure of a finite abelian group given by all of its elements.

    Returns (structure, gens, table) where ``gens`` are the elements used as
    primary generators and ``table`` maps key(element) -> old exponent vector
    over ``gens``.  Apply ``structure.reduce`` to get Smith coordinates.
    """
    table = {key(identity): (identity, ())}
    gens = []
    relations = []
    for g in elements:
        if key(g) in table:
            continue
        k = 1
        x = g
        while key(x) not in table:
            x = mul(x, g)
            k += 1
        v = table[key(x)][1]
        new = {}
        for h, vec in table.values():
            y = h
            for i in range(k):
                new[key(y)] = (y, vec + (i,))
                y = mul(y, g)
        table = new
        for r in relations:
            r.append(0)
        relations.append([-c for c in v] + [k])
        gens.append(g)
    # pad relation rows (earlier rows already padded as generators were added)
    structure = structure_from_relations(relations) if gens else GroupStructure([], [], [], [])
    return structure, gens, {kk: vec for kk, (_, vec) in table.items()}
