"""Exact arithmetic in K = Q[x]/(m), archimedean embeddings and normalized
absolute values.

Minimal polynomials are given highest-degree coefficient first (the order used
in configs), e.g. ``[1, 0, -2]`` for x^2 - 2.  Internally coordinates are kept
in the power basis 1, t, ..., t^(d-1).
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math

import mpmath

from . import _qpoly as qp
from .errors import (
    BadWitness,
    DivisionByZero,
    LdoError,
    NotMonic,
    Reducible,
    RootIsolationFailed,
)

DEFAULT_PRECISION = 128


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def mp_to_fraction(x, max_den=10**18):
    return Fraction(mpmath.nstr(x, 60, min_fixed=-math.inf, max_fixed=math.inf)).limit_denominator(max_den)


class Embedding:
    """An isolated root of the minimal polynomial.

    ``center`` is the midpoint of an inclusion disk of radius ``radius`` that
    contains exactly one root; for real roots the disk is symmetric about the
    real axis, so the root is real.
    """

    __slots__ = ("kind", "center", "radius")

    def __init__(self, kind, center, radius):
        self.kind = kind
        self.center = center
        self.radius = radius

    def __repr__(self):
        return "Embedding(%s, %s, r=%s)" % (self.kind, mpmath.nstr(self.center, 12), mpmath.nstr(self.radius, 3))


def _isolate(poly_asc, bits):
    """Durand-Kerner plus Gerschgorin inclusion disks.

    With nodes z_i and Weierstrass corrections W_i = p(z_i)/prod(z_i - z_j), p
    is the characteristic polynomial of diag(z) - 1 W^T, so every root lies in
    a disk centred at z_i - W_i of radius (d-1)|W_i|, and a component of k
    disks holds exactly k roots.
    """
    d = qp.deg(poly_asc)
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in poly_asc]
    with mpmath.workprec(bits + 32):
        if d == 1:
            c = -coeffs[0]
            return [Embedding("real", mpmath.mpf(c), mpmath.mpf(0))], []
        bound = 1 + max(abs(c) for c in coeffs[:-1])
        z = [bound * mpmath.mpc(0.4, 0.9) ** k for k in range(d)]

        def ev(x):
            acc = mpmath.mpc(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        tol = mpmath.mpf(2) ** (-(bits + 8))
        for _ in range(50 * d + 2 * bits):
            step = 0
            nz = []
            for i in range(d):
                den = mpmath.mpc(1)
                for j in range(d):
                    if j != i:
                        den *= z[i] - z[j]
                if den == 0:
                    den = tol
                w = ev(z[i]) / den
                nz.append(z[i] - w)
                step = max(step, abs(w))
            z = nz
            if step < tol * (1 + bound):
                break
        # symmetrize: snap near-real nodes to the axis, pair the rest exactly
        target = mpmath.mpf(2) ** (-(bits // 2))
        reals, uppers = [], []
        used = [False] * d
        order = sorted(range(d), key=lambda i: abs(z[i].imag))
        for i in order:
            if used[i]:
                continue
            if abs(z[i].imag) <= target:
                used[i] = True
                reals.append(mpmath.mpf(z[i].real))
                continue
            best, bj = None, None
            for j in range(d):
                if j != i and not used[j]:
                    dist = abs(z[j] - mpmath.conj(z[i]))
                    if best is None or dist < best:
                        best, bj = dist, j
            if bj is None:
                raise RootIsolationFailed("unpaired complex root")
            used[i] = used[bj] = True
            u = z[i] if z[i].imag > 0 else z[bj]
            v = (u + mpmath.conj(z[bj] if z[i].imag > 0 else z[i])) / 2
            uppers.append(mpmath.mpc(v.real, abs(v.imag)))
        nodes = [mpmath.mpc(r) for r in reals] + uppers + [mpmath.conj(u) for u in uppers]
        if len(nodes) != d:
            raise RootIsolationFailed("node count mismatch")
        slack = mpmath.mpf(2) ** (-bits)
        disks = []
        for i in range(d):
            den = mpmath.mpc(1)
            for j in range(d):
                if j != i:
                    den *= nodes[i] - nodes[j]
            if den == 0:
                raise RootIsolationFailed("coincident nodes")
            w = ev(nodes[i]) / den
            c = nodes[i] - w
            r = (d - 1) * abs(w) + slack * (1 + abs(c))
            disks.append((c, r))
        for i in range(d):
            for j in range(i + 1, d):
                if abs(disks[i][0] - disks[j][0]) <= disks[i][1] + disks[j][1]:
                    raise RootIsolationFailed("inclusion disks overlap")
            if disks[i][1] > target:
                raise RootIsolationFailed("error radius above precision target")
        nr = len(reals)
        out_r = [Embedding("real", mpmath.mpf(disks[i][0].real), disks[i][1]) for i in range(nr)]
        out_c = []
        for k in range(len(uppers)):
            c, r = disks[nr + k]
            if abs(c.imag) <= r:
                raise RootIsolationFailed("complex disk meets the real axis")
            out_c.append(Embedding("complex", c, r))
    out_r.sort(key=lambda e: e.center)
    out_c.sort(key=lambda e: (e.center.real, e.center.imag))
    return out_r, out_c


class NumberField:
    def __init__(self, minpoly, precision_bits=DEFAULT_PRECISION, integral_basis=None):
        coeffs = [to_fraction(c) for c in minpoly]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if len(coeffs) < 2:
            raise NotMonic("minimal polynomial must have degree >= 1")
        if coeffs[0] != 1:
            raise NotMonic("leading coefficient is %s, expected 1" % coeffs[0])
        self.minpoly = tuple(coeffs)
        self._asc = list(reversed(coeffs))
        self.degree = len(coeffs) - 1
        self.precision_bits = int(precision_bits)
        if not qp.is_squarefree(self._asc):
            raise Reducible("minimal polynomial is not squarefree")
        if self.degree > 1 and qp.rational_roots(self._asc):
            raise Reducible("minimal polynomial has a rational root")
        irr = qp.irreducible_small(self._asc)
        if irr is False:
            raise Reducible("minimal polynomial has a quadratic factor")
        # above degree 4 irreducibility is only partially checked
        self.irreducibility_unverified = irr is None
        last = None
        bits = self.precision_bits
        for _ in range(4):
            try:
                self.real_embeddings, self.complex_embeddings = _isolate(self._asc, bits)
                break
            except RootIsolationFailed as e:
                last = e
                bits *= 2
        else:
            raise RootIsolationFailed(str(last))
        self._build_tables()
        self.integral_basis = None
        if integral_basis is not None:
            self.integral_basis = tuple(self(b) for b in integral_basis)
            if len(self.integral_basis) != self.degree:
                raise LdoError("integral basis must have degree elements")
            self._ib_inverse = _rat_inverse([list(b.coords) for b in self.integral_basis])

    def _build_tables(self):
        # reduction of t^k for k < 2d - 1 in the power basis
        d = self.degree
        red = []
        cur = [Fraction(0)] * d
        cur[0] = Fraction(1)
        for k in range(2 * d - 1):
            red.append(tuple(cur))
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(d):
                    nxt[i] -= top * self._asc[i]
            cur = nxt
        self._red = red

    # numbers of places
    @property
    def r1(self):
        return len(self.real_embeddings)

    @property
    def r2(self):
        return len(self.complex_embeddings)

    def __repr__(self):
        return "NumberField(%s)" % [str(c) for c in self.minpoly]

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.K != self:
                raise LdoError("element of a different field")
            return x
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                raise LdoError("too many coordinates")
            c = [to_fraction(v) for v in x] + [Fraction(0)] * (self.degree - len(x))
            return FieldElement(self, c)
        c = [Fraction(0)] * self.degree
        c[0] = to_fraction(x)
        return FieldElement(self, c)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    @property
    def gen(self):
        if self.degree == 1:
            return self(-self._asc[0])
        return self([0, 1])

    def embeddings(self):
        """All complex embeddings: reals, then the upper member of each pair,
        then the conjugates in the same order."""
        r = [e.center for e in self.real_embeddings]
        c = [e.center for e in self.complex_embeddings]
        with mpmath.workprec(self.precision_bits + 64):
            return [mpmath.mpc(x) for x in r] + c + [mpmath.conj(x) for x in c]

    def archimedean_places(self):
        return [Place("real", i) for i in range(self.r1)] + [Place("complex", i) for i in range(self.r2)]

    def place_root(self, v):
        if v.kind == "real":
            return self.real_embeddings[v.index].center
        if v.kind == "complex":
            return self.complex_embeddings[v.index].center
        raise LdoError("finite place has no embedding")

    def root_at(self, v, bits):
        """Root for place v refined by Newton iteration to ``bits`` bits."""
        cache = self.__dict__.setdefault("_refined", {})
        key = (v.kind, v.index, bits)
        if key in cache:
            return cache[key]
        z = self.place_root(v)
        if bits > self.precision_bits:
            dp = qp.derivative(self._asc)
            with mpmath.workprec(bits + 16):
                z = mpmath.mpc(z) if v.kind == "complex" else mpmath.mpf(z)
                tol = mpmath.mpf(2) ** (-bits)
                for _ in range(64):
                    num = _horner(self._asc, z)
                    den = _horner(dp, z)
                    step = num / den
                    z = z - step
                    if abs(step) <= tol * (1 + abs(z)):
                        break
        cache[key] = z
        return z

    def is_totally_real(self):
        return self.r2 == 0

    def integral_coords(self, x):
        """Coordinates of x in the integral basis (power basis when none given)."""
        if self.integral_basis is None:
            return list(x.coords)
        return [sum(x.coords[i] * self._ib_inverse[i][j] for i in range(self.degree)) for j in range(self.degree)]

    def is_integral(self, x):
        """Integrality against the configured basis; over Q with finite places
        use :func:`is_s_integral`."""
        return all(c.denominator == 1 for c in self.integral_coords(x))


def _horner(asc, z):
    acc = 0
    for c in reversed(asc):
        acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
    return acc


def _rat_inverse(rows):
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LdoError("singular basis")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[n:] for r in a]


class FieldElement:
    __slots__ = ("K", "coords", "_hash")

    def __init__(self, K, coords):
        self.K = K
        self.coords = tuple(coords)
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.K is not self.K and other.K != self.K:
                raise LdoError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.K(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.K, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.K, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return FieldElement(self.K, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.K, [a * other for a in self.coords])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.K.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:d])
        red = self.K._red
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = red[k]
                for i in range(d):
                    out[i] += c * row[i]
        return FieldElement(self.K, out)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        g, s, _ = qp.xgcd(qp.trim(list(self.coords)), self.K._asc)
        if qp.deg(g) != 0:
            raise DivisionByZero("element is a zero divisor")
        return self.K(list(s[: self.K.degree]) if s else [0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.K.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.K(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coords == other.coords and (self.K is other.K or self.K == other.K)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def is_zero(self):
        return not any(self.coords)

    def is_one(self):
        return self.coords[0] == 1 and not any(self.coords[1:])

    def is_rational(self):
        return not any(self.coords[1:])

    def rational(self):
        if not self.is_rational():
            raise LdoError("element is not rational")
        return self.coords[0]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(str(c) if i == 0 else "%s*t^%d" % (c, i) if i > 1 else "%s*t" % c)
        return "(" + (" + ".join(terms) or "0") + ")"

    def mult_matrix(self):
        """Matrix of multiplication by self in the power basis (columns = images)."""
        d = self.K.degree
        cols = []
        t = self.K.gen
        cur = self
        for _ in range(d):
            cols.append(cur.coords)
            cur = cur * t
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def norm(self):
        return _frac_det(self.mult_matrix())

    def trace(self):
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def evaluate(self, root):
        """Image under the embedding sending the generator to ``root``."""
        acc = mpmath.mpc(0) if isinstance(root, mpmath.mpc) else mpmath.mpf(0)
        for c in reversed(self.coords):
            acc = acc * root + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def embed(self, v, bits=None):
        bits = bits or self.K.precision_bits
        with mpmath.workprec(bits):
            return self.evaluate(self.K.root_at(v, bits))

    def conjugates(self):
        with mpmath.workprec(self.K.precision_bits):
            return [self.evaluate(r) for r in self.K.embeddings()]


def _frac_det(m):
    n = len(m)
    a = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def nf_create(minpoly, precision_bits=DEFAULT_PRECISION, integral_basis=None):
    return NumberField(minpoly, precision_bits, integral_basis)


def fe_arith(a, b, op):
    if a.K != b.K:
        raise LdoError("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError("unknown op %r" % op)


@dataclass(frozen=True)
class Place:
    """kind is 'real' or 'complex' (index into the field's embedding lists)
    or 'finite' (index is the prime; only for K = Q)."""

    kind: str
    index: int

    @property
    def p(self):
        return self.index if self.kind == "finite" else None

    @property
    def archimedean(self):
        return self.kind != "finite"

    def label(self):
        if self.kind == "finite":
            return "p%d" % self.index
        return "%s%d" % (self.kind, self.index)

    def to_json(self):
        if self.kind == "finite":
            return {"kind": "finite", "p": self.index}
        return {"kind": self.kind, "index": self.index}


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PlaceSet:
    def __init__(self, K, places):
        places = tuple(places)
        if len(set(places)) != len(places):
            raise LdoError("places must be pairwise distinct")
        arch = [v for v in places if v.archimedean]
        if sorted(arch, key=lambda v: (v.kind, v.index)) != sorted(K.archimedean_places(), key=lambda v: (v.kind, v.index)):
            raise LdoError("S must contain every archimedean place exactly once")
        for v in places:
            if v.kind == "finite":
                if K.degree != 1:
                    raise LdoError("finite places are only supported over Q")
                if not _is_prime(v.index):
                    raise LdoError("%d is not prime" % v.index)
        self.K = K
        self.places = places
        self.ring_label = "O_S"

    def __len__(self):
        return len(self.places)

    def __iter__(self):
        return iter(self.places)

    def __getitem__(self, i):
        return self.places[i]

    def index(self, v):
        return self.places.index(v)

    @property
    def primes(self):
        return [v.index for v in self.places if v.kind == "finite"]


def _vp(q, p):
    if q == 0:
        raise ValueError("valuation of zero")
    num, den = q.numerator, q.denominator
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


def abs_value(x, v):
    """Normalized |x|_v as a float; complex places give the squared modulus."""
    if v.kind == "finite":
        q = x.rational()
        if q == 0:
            return 0.0
        return float(Fraction(v.index) ** (-_vp(q, v.index)))
    return float(abs_value_mp(x, v))


def abs_value_mp(x, v, bits=None):
    bits = bits or x.K.precision_bits
    with mpmath.workprec(bits):
        if v.kind == "finite":
            q = x.rational()
            if q == 0:
                return mpmath.mpf(0)
            return mpmath.mpf(v.index) ** (-_vp(q, v.index))
        y = x.embed(v, bits)
        if v.kind == "complex":
            return abs(y) ** 2
        return abs(y)


def log_abs(x, v, bits=None):
    """log |x|_v (mpf) at ``bits`` of working precision."""
    bits = bits or x.K.precision_bits
    with mpmath.workprec(bits):
        if v.kind == "finite":
            return -_vp(x.rational(), v.index) * mpmath.log(v.index)
        return mpmath.log(abs_value_mp(x, v, bits))


def product_formula_check(x, S):
    acc = mpmath.mpf(1)
    with mpmath.workprec(x.K.precision_bits):
        for v in S:
            acc *= abs_value_mp(x, v)
    return float(acc)


def is_s_integral(x, S):
    """Exact S-integrality; over Q denominators may only involve primes in S."""
    K = x.K
    if K.degree == 1:
        den = x.coords[0].denominator
        for p in S.primes:
            while den % p == 0:
                den //= p
        return den == 1
    return K.is_integral(x)


# ---- roots of polynomials inside K ----------------------------------------


def _poly_roots_mp(coeffs_desc):
    try:
        return mpmath.polyroots(coeffs_desc, maxsteps=200, extraprec=200)
    except mpmath.libmp.libhyper.NoConvergence:
        return mpmath.polyroots(coeffs_desc, maxsteps=2000, extraprec=800)


def field_roots(K, poly):
    """Roots in K of a polynomial with coefficients in K (highest first).

    Candidates are assembled from numerical roots under every embedding, then
    rationalized and verified exactly; only verified roots are returned.
    """
    poly = [K(c) for c in poly]
    while poly and poly[0].is_zero():
        poly.pop(0)
    if len(poly) < 2:
        return []
    d = K.degree
    roots = K.embeddings()
    with mpmath.workprec(K.precision_bits):
        per_emb = []
        nr, nc = K.r1, K.r2
        for k in range(nr + nc):
            cs = [c.evaluate(roots[k]) for c in poly]
            rs = _poly_roots_mp(cs)
            if k < nr:
                rs = [mpmath.mpf(z.real) for z in rs if abs(mpmath.im(z)) < mpmath.mpf(10) ** -20 * (1 + abs(z))]
            per_emb.append(rs)
        vand = mpmath.matrix([[r ** i for i in range(d)] for r in roots])
        found = []
        for choice in product(*per_emb):
            vals = list(choice) + [mpmath.conj(z) for z in choice[nr:]]
            try:
                sol = mpmath.lu_solve(vand, mpmath.matrix(vals))
            except ZeroDivisionError:
                continue
            if any(abs(mpmath.im(s)) > mpmath.mpf(10) ** -15 * (1 + abs(s)) for s in sol):
                continue
            cand = K([mp_to_fraction(mpmath.re(s)) for s in sol])
            acc = K.zero()
            for c in poly:
                acc = acc * cand + c
            if acc.is_zero() and cand not in found:
                found.append(cand)
    return found


def nth_roots(x, n):
    """All y in K with y^n = x."""
    K = x.K
    return field_roots(K, [K.one()] + [K.zero()] * (n - 1) + [-x])


def _cyclotomic(k):
    # ascending integer coefficients of the k-th cyclotomic polynomial
    p = [Fraction(-1)] + [Fraction(0)] * (k - 1) + [Fraction(1)]
    for dd in range(1, k):
        if k % dd == 0:
            p, r = qp.divmod_(p, _cyclotomic(dd))
            assert not r
    return p


def _euler_phi(k):
    return sum(1 for i in range(1, k + 1) if math.gcd(i, k) == 1)


def torsion_order(K):
    """Number of roots of unity in K."""
    if K.r1 > 0:
        return 2
    d = K.degree
    best = 2
    for k in range(3, 4 * d * d + 8):
        phi = _euler_phi(k)
        if d % phi:
            continue
        cyc = list(reversed(_cyclotomic(k)))
        if field_roots(K, cyc):
            best = max(best, k if k % 2 == 0 else 2 * k)
    return best


def is_cm_field(K, cm_witness=None):
    """'yes', 'no' or 'unknown'.

    A witness is (F minimal polynomial, d) with d given as coordinates over F
    (or a rational); it asserts K = F(sqrt(-d)).
    """
    if cm_witness is None:
        if K.r1 > 0:
            return "no"
        if K.degree == 2:
            return "yes"
        return "unknown"
    fpoly, dval = cm_witness
    try:
        F = nf_create(fpoly, K.precision_bits)
    except LdoError as e:
        raise BadWitness("subfield polynomial rejected: %s" % e) from e
    if K.degree != 2 * F.degree:
        raise BadWitness("degree of K is not twice the degree of F")
    d_F = F(dval if isinstance(dval, (list, tuple)) else [dval])
    if d_F.is_zero():
        raise BadWitness("d must be nonzero")
    if K.r1 > 0:
        return "no"
    # an embedding F -> K: a root beta of the F-polynomial inside K
    betas = field_roots(K, [K(c) for c in F.minpoly])
    if not betas:
        raise BadWitness("F does not embed in K")
    for beta in betas:
        dK = K.zero()
        for c in reversed(d_F.coords):
            dK = dK * beta + c
        if nth_roots(-dK, 2):
            break
    else:
        raise BadWitness("K is not generated by sqrt(-d) over F")
    if not F.is_totally_real():
        return "no"
    for e in F.real_embeddings:
        if d_F.evaluate(e.center) <= 0:
            return "no"
    return "yes"
