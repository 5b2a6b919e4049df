# Exact LLL over Q, nearest-plane rounding and integer relation search.
from fractions import Fraction

import mpmath


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def gram_schmidt(basis):
    """Return (B*, mu) for row vectors with Fraction entries."""
    bstar = []
    mu = [[Fraction(0)] * len(basis) for _ in basis]
    norms = []
    for i, b in enumerate(basis):
        v = list(b)
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = _dot(b, bstar[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    return bstar, mu, norms


def lll(basis, delta=Fraction(99, 100)):
    """LLL-reduce linearly independent rows.  Returns (reduced, transform)
    with reduced = transform * basis and transform unimodular."""
    b = [[Fraction(x) for x in row] for row in basis]
    n = len(b)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return b, u
    bstar, mu, norms = gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                for l in range(j + 1):
                    mu[k][l] -= q * (mu[j][l] if l < j else 1)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            bstar, mu, norms = gram_schmidt(b)
            k = max(k - 1, 1)
    return b, u


def babai(basis, target):
    """Nearest-plane coefficients c (integers) with sum c_i basis_i close to target.

    ``basis`` should already be LLL-reduced; entries are Fractions.
    """
    bstar, _, norms = gram_schmidt(basis)
    n = len(basis)
    coeffs = [0] * n
    t = [Fraction(x) for x in target]
    for i in range(n - 1, -1, -1):
        if norms[i] == 0:
            continue
        c = round(_dot(t, bstar[i]) / norms[i])
        coeffs[i] = c
        if c:
            t = [x - c * y for x, y in zip(t, basis[i])]
    return coeffs


def _mpfrac(x):
    # exact rational value of an mpf
    m, e = mpmath.mpf(x).man_exp
    m = int(m)
    return Fraction(m * 2 ** e) if e >= 0 else Fraction(m, 2 ** (-e))


def _rank_subset(rows, cols_count, tol):
    """Greedy column-pivoted elimination; returns (row pivots, col pivots)."""
    a = [list(r) for r in rows]
    m = len(a)
    rp, cp = [], []
    used_r = set()
    for _ in range(min(m, cols_count)):
        best, bi, bj = tol, None, None
        for i in range(m):
            if i in used_r:
                continue
            for j in range(cols_count):
                if j in cp:
                    continue
                if abs(a[i][j]) > best:
                    best, bi, bj = abs(a[i][j]), i, j
        if bi is None:
            break
        rp.append(bi)
        cp.append(bj)
        used_r.add(bi)
        for i in range(m):
            if i != bi and a[i][bj] != 0:
                f = a[i][bj] / a[bi][bj]
                a[i] = [x - f * y for x, y in zip(a[i], a[bi])]
    return rp, cp


def integer_relations(rows, height, bits):
    """Integer vectors in W = {V phi} for the m x D real matrix V (rows).

    Returns (rank_V, relations, phis, certified) where relations is a basis
    (integer row vectors) of Z^m intersect W found by LLL, phis are the
    corresponding solutions of V phi = z, and certified says every relation
    of Euclidean norm <= height lies in their span.
    """
    m = len(rows)
    D = len(rows[0]) if rows else 0
    with mpmath.workprec(bits):
        V = [[mpmath.mpf(x) for x in r] for r in rows]
        scale = max([abs(x) for r in V for x in r] + [mpmath.mpf(1)])
        tol = scale * mpmath.mpf(2) ** (-(bits * 3) // 4)
        rp, cp = _rank_subset(V, D, tol)
        rank = len(rp)
        if rank == 0:
            # W = {0}: no nonzero relation vectors
            return 0, [], [], True
        VB = mpmath.matrix([[V[i][j] for j in cp] for i in rp])
        VBinv = VB ** -1
        others = [i for i in range(m) if i not in rp]
        # equations z_i - v_i VB^{-1} z_B = 0 for i outside the pivot rows
        eqs = []
        for i in others:
            coef = [mpmath.mpf(0)] * m
            coef[i] = mpmath.mpf(1)
            vi = mpmath.matrix([[V[i][j] for j in cp]])
            c = vi * VBinv
            for k, ib in enumerate(rp):
                coef[ib] -= c[0, k]
            eqs.append(coef)
        N = mpmath.mpf(2) ** (bits // 2)
        basis = []
        for i in range(m):
            row = [Fraction(int(i == j)) for j in range(m)]
            row += [_mpfrac(N * e[i]) for e in eqs]
            basis.append(row)
        red, _ = lll(basis)
        zs = [[int(x) for x in r[:m]] for r in red]
        resid_tol = mpmath.mpf(2) ** (-(bits * 5) // 8)
        rels, non = [], []
        for z, r in zip(zs, red):
            res = max([abs(sum(e[j] * z[j] for j in range(m))) for e in eqs] + [mpmath.mpf(0)])
            nz = max(abs(x) for x in z)
            (rels if res <= resid_tol * (1 + nz) else non).append(r)
        # certificate: GS norms of the non-relation vectors after the relations
        _, _, norms = gram_schmidt(rels + non)
        certified = all(norms[k] > Fraction(int(height * 1.01) + 1) ** 2 for k in range(len(rels), len(rels) + len(non)))
        relations = [[int(x) for x in r[:m]] for r in rels]
        phis = []
        for z in relations:
            zb = mpmath.matrix([[mpmath.mpf(z[i])] for i in rp])
            sol = VBinv * zb
            phi = [mpmath.mpf(0)] * D
            for k, j in enumerate(cp):
                phi[j] = sol[k]
            phis.append(phi)
    return rank, relations, phis, certified
