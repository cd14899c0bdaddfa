"""Exact integral LLL reduction (all arithmetic in Python integers)."""


def lll_reduce(basis, delta=(3, 4)):
    """LLL-reduce the rows of an integer matrix of full row rank.

    Uses the integral Gram-Schmidt formulation: d_i are the Gram
    determinants and lam[k][j] = d_j * mu[k][j], so no fractions appear.
    ``delta`` is the Lovasz constant as a fraction (num, den).
    """
    b = [list(map(int, r)) for r in basis]
    n = len(b)
    if n <= 1:
        return b
    dn, dd = delta
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def dot(x, y):
        return sum(p * q for p, q in zip(x, y))

    def gram(k):
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("basis rows are linearly dependent")
                d[k + 1] = u

    def redi(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    gram(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram(k)
        redi(k, k - 1)
        # Lovasz: d_k d_{k-2} < delta d_{k-1}^2 - lam^2  (1-based); here shifted by one
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swapi(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return b
