"""Exact matrices over a number field, Bruhat decomposition, block (big cell)
factorizations relative to a standard parabolic, and the relative
decomposition g = w z v+ v-.
"""
from dataclasses import dataclass

from .errors import CoverageFailure, LdoError, Singular
from .weylcomb import PsiSet, WeylPerm, all_perms, coset_reps


class Matrix:
    __slots__ = ("K", "n", "rows", "_det")

    def __init__(self, K, rows):
        self.K = K
        self.rows = tuple(tuple(K(x) for x in r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise LdoError("matrix must be square")
        self._det = None

    @classmethod
    def _raw(cls, K, rows):
        m = cls.__new__(cls)
        m.K = K
        m.rows = tuple(tuple(r) for r in rows)
        m.n = len(m.rows)
        m._det = None
        return m

    @classmethod
    def identity(cls, K, n):
        one, zero = K.one(), K.zero()
        return cls._raw(K, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def weyl(cls, K, w):
        return cls(K, w.matrix())

    @classmethod
    def diag(cls, K, entries):
        n = len(entries)
        zero = K.zero()
        return cls._raw(K, [[K(entries[i]) if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(%s)" % [list(r) for r in self.rows]

    def __mul__(self, other):
        n = self.n
        cols = list(zip(*other.rows))
        zero = self.K.zero()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix._raw(self.K, out)

    def __neg__(self):
        return Matrix._raw(self.K, [[-x for x in r] for r in self.rows])

    def transpose(self):
        return Matrix._raw(self.K, list(zip(*self.rows)))

    def det(self):
        if self._det is None:
            self._det = _det(self.K, [list(r) for r in self.rows])
        return self._det

    def inverse(self):
        n = self.n
        a = [list(r) + [self.K.one() if i == j else self.K.zero() for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if p is None:
                raise Singular("matrix is not invertible")
            a[c], a[p] = a[p], a[c]
            inv = a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for r in range(n):
                if r != c and not a[r][c].is_zero():
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Matrix._raw(self.K, [r[n:] for r in a])

    def submatrix(self, rows, cols):
        return [[self.rows[i][j] for j in cols] for i in rows]

    def minor(self, rows, cols):
        return _det(self.K, self.submatrix(rows, cols))

    def is_monomial(self):
        for r in self.rows:
            if sum(1 for x in r if not x.is_zero()) != 1:
                return False
        for c in zip(*self.rows):
            if sum(1 for x in c if not x.is_zero()) != 1:
                return False
        return True

    def is_diagonal(self):
        return all(self.rows[i][j].is_zero() for i in range(self.n) for j in range(self.n) if i != j)

    def is_upper(self):
        return all(self.rows[i][j].is_zero() for i in range(self.n) for j in range(i))

    def is_lower(self):
        return self.transpose().is_upper()

    def is_identity(self):
        return self == Matrix.identity(self.K, self.n)

    def coords(self):
        return [[[str(c) for c in x.coords] for x in r] for r in self.rows]


def _det(K, a):
    """Fraction-free (Bareiss) determinant."""
    n = len(a)
    if n == 0:
        return K.one()
    a = [list(r) for r in a]
    sign = 1
    prev = K.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            p = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if p is None:
                return K.zero()
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def rank(K, a):
    a = [[K(x) for x in r] for r in a]
    if not a:
        return 0
    rk, col, ncols = 0, 0, len(a[0])
    while rk < len(a) and col < ncols:
        p = next((r for r in range(rk, len(a)) if not a[r][col].is_zero()), None)
        if p is None:
            col += 1
            continue
        a[rk], a[p] = a[p], a[rk]
        inv = a[rk][col].inverse()
        for r in range(rk + 1, len(a)):
            if not a[r][col].is_zero():
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        rk += 1
        col += 1
    return rk


def require_sl(g):
    if not g.det().is_one():
        raise Singular("determinant is %r, expected 1" % (g.det(),))


# ---- Bruhat ---------------------------------------------------------------


def bruhat(g):
    """g = b1 * w * b2 with b1, b2 upper triangular."""
    require_sl(g)
    K, n = g.K, g.n
    a = [list(r) for r in g.rows]
    linv = [list(r) for r in Matrix.identity(K, n).rows]
    rinv = [list(r) for r in Matrix.identity(K, n).rows]
    pivots = []  # (column, row)
    for j in range(n):
        # clear column j at rows already holding pivots (column operations)
        for k, q in pivots:
            if not a[q][j].is_zero():
                c = a[q][j] / a[q][k]
                for i in range(n):
                    if not a[i][k].is_zero():
                        a[i][j] = a[i][j] - c * a[i][k]
                rinv[k] = [x + c * y for x, y in zip(rinv[k], rinv[j])]
        p = max(i for i in range(n) if not a[i][j].is_zero())
        for i in range(p):
            if not a[i][j].is_zero():
                c = a[i][j] / a[p][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[p])]
                for r in range(n):
                    if not linv[r][i].is_zero():
                        linv[r][p] = linv[r][p] + c * linv[r][i]
        pivots.append((j, p))
    w = WeylPerm(tuple(p + 1 for _, p in pivots))
    wm = Matrix.weyl(K, w)
    M = Matrix._raw(K, a)
    D = wm.inverse() * M
    b1 = Matrix._raw(K, linv)
    b2 = D * Matrix._raw(K, rinv)
    return b1, w, b2


def bruhat_cell_oracle(g):
    """The unique w whose rank pattern on lower-left corners matches g."""
    K, n = g.K, g.n

    def pattern(m):
        return tuple(rank(K, m.submatrix(range(p, n), range(q + 1))) for p in range(n) for q in range(n))

    target = pattern(g)
    hits = [w for w in all_perms(n) if pattern(Matrix.weyl(K, w)) == target]
    if len(hits) != 1:
        raise LdoError("rank pattern matched %d permutations" % len(hits))
    return hits[0]


# ---- block factorizations ------------------------------------------------


def _blocks(psi):
    return [[i - 1 for i in blk] for blk in psi.blocks()]


def big_cell_factor(g, psi):
    """g = v_minus * z * v_plus (block lower unipotent, block diagonal,
    block upper unipotent) or None when a block pivot is singular."""
    K, n = g.K, g.n
    blocks = _blocks(psi)
    S = [list(r) for r in g.rows]
    one, zero = K.one(), K.zero()
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    D = [[zero] * n for _ in range(n)]
    for bi, blk in enumerate(blocks):
        P = Matrix._raw(K, [[S[i][j] for j in blk] for i in blk])
        if P.det().is_zero():
            return None
        Pinv = P.inverse()
        for a, i in enumerate(blk):
            for b, j in enumerate(blk):
                D[i][j] = S[i][j]
        rest = [i for blk2 in blocks[bi + 1:] for i in blk2]
        if not rest:
            break
        # L_rest,blk = S_rest,blk P^-1 ; U_blk,rest = P^-1 S_blk,rest
        lr = [[sum((S[i][blk[c]] * Pinv[c][b] for c in range(len(blk))), zero) for b in range(len(blk))] for i in rest]
        ur = [[sum((Pinv[a][c] * S[blk[c]][j] for c in range(len(blk))), zero) for j in rest] for a in range(len(blk))]
        for x, i in enumerate(rest):
            for b, j in enumerate(blk):
                L[i][j] = lr[x][b]
        for a, i in enumerate(blk):
            for y, j in enumerate(rest):
                U[i][j] = ur[a][y]
        for x, i in enumerate(rest):
            for y, j in enumerate(rest):
                acc = S[i][j]
                for b, k in enumerate(blk):
                    if not lr[x][b].is_zero():
                        acc = acc - lr[x][b] * S[k][j]
                S[i][j] = acc
    return Matrix._raw(K, L), Matrix._raw(K, D), Matrix._raw(K, U)


def block_leading_minors(g, psi):
    """Leading principal minors at each block boundary."""
    out, acc = [], 0
    for c in psi.composition[:-1]:
        acc += c
        out.append(g.minor(range(acc), range(acc)))
    return out


def is_block_lower_unipotent(m, psi):
    return _is_block_unipotent(m.transpose(), psi)


def is_block_upper_unipotent(m, psi):
    return _is_block_unipotent(m, psi)


def _is_block_unipotent(m, psi):
    b = psi.block_of()
    for i in range(m.n):
        for j in range(m.n):
            x = m[i][j]
            if i == j:
                if not x.is_one():
                    return False
            elif b[i + 1] == b[j + 1] or b[i + 1] > b[j + 1]:
                if not x.is_zero():
                    return False
    return True


def is_block_diagonal(m, psi):
    b = psi.block_of()
    return all(m[i][j].is_zero() for i in range(m.n) for j in range(m.n) if b[i + 1] != b[j + 1])


@dataclass
class GeneralizedFactor:
    """g = w1 * v_minus * z * v_plus * w2^-1."""

    w1: WeylPerm
    w2: WeylPerm
    psi: PsiSet
    v_minus: Matrix
    z: Matrix
    v_plus: Matrix

    def conjugated(self):
        K = self.v_minus.K
        W1 = Matrix.weyl(K, self.w1)
        W2 = Matrix.weyl(K, self.w2)
        return W1 * self.v_minus * W1.inverse(), W2 * self.v_plus * W2.inverse()

    def product(self):
        K = self.v_minus.K
        return Matrix.weyl(K, self.w1) * self.v_minus * self.z * self.v_plus * Matrix.weyl(K, self.w2).inverse()


def generalized_membership(g, w1, w2, psi):
    K = g.K
    h = Matrix.weyl(K, w1).inverse() * g * Matrix.weyl(K, w2)
    f = big_cell_factor(h, psi)
    if f is None:
        return None
    return GeneralizedFactor(w1, w2, psi, *f)


@dataclass
class RelativeBruhat:
    """g = w * z * v_plus * v_minus."""

    w: WeylPerm
    z: Matrix
    v_plus: Matrix
    v_minus: Matrix

    def product(self):
        return Matrix.weyl(self.z.K, self.w) * self.z * self.v_plus * self.v_minus


def _relative_at(g, w, psi):
    K = g.K
    h = Matrix.weyl(K, w).inverse() * g
    f = big_cell_factor(h.inverse(), psi)
    if f is None:
        return None
    lo, d, _ = f
    z = d.inverse()
    v_minus = lo.inverse()
    v_plus = z.inverse() * h * v_minus.inverse()
    return RelativeBruhat(w, z, v_plus, v_minus)


def relative_bruhat(g, psi, all_cosets=False):
    require_sl(g)
    found = []
    for w in coset_reps(psi):
        rb = _relative_at(g, w, psi)
        if rb is not None:
            if not all_cosets:
                return rb
            found.append(rb)
    if not found:
        raise CoverageFailure("no coset representative factors g")
    return found
