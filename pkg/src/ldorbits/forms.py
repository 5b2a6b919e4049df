"""Decomposable forms at the places of S: reduction to square systems, the
correspondence with group elements, density probing of values at S-integral
points, and the quantitative obstruction over CM fields.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, log
import math
import random

import numpy as np

from .errors import (
    BudgetExceeded,
    CmBoundViolation,
    LdoError,
    NotOverF,
    NotUnimodularizable,
    NoWitness,
    TrialsExhausted,
)
from .exactlin import Matrix, _det, rank
from .numfield import field_roots, is_cm_field, nf_create, nth_roots


@dataclass
class DecomposableForm:
    """f_v(x) = alpha_v * prod_i l_i^(v)(x) for each place v of S.

    ``forms[v]`` is a list of m coefficient vectors (length n_vars) over K.
    """

    S: object
    forms: list
    alpha: list = None

    def __post_init__(self):
        K = self.S.K
        self.forms = [[[K(c) for c in row] for row in fam] for fam in self.forms]
        if len(self.forms) != len(self.S):
            raise LdoError("one family of linear forms per place is required")
        self.m = len(self.forms[0])
        self.n_vars = len(self.forms[0][0])
        if self.alpha is None:
            self.alpha = [Fraction(1)] * len(self.S)
        for fam in self.forms:
            if len(fam) != self.m or any(len(r) != self.n_vars for r in fam):
                raise LdoError("inconsistent form shapes")
            if rank(K, fam) != self.m:
                raise LdoError("linear forms at a place are dependent")

    @property
    def K(self):
        return self.S.K

    def expand(self, v_index):
        """Coefficients of prod_i l_i as {exponent tuple: K element}."""
        K = self.K
        poly = {tuple([0] * self.n_vars): K.one()}
        for row in self.forms[v_index]:
            nxt = {}
            for mono, c in poly.items():
                for k, a in enumerate(row):
                    if a.is_zero():
                        continue
                    e = list(mono)
                    e[k] += 1
                    e = tuple(e)
                    nxt[e] = nxt.get(e, K.zero()) + c * a
            poly = {e: c for e, c in nxt.items() if not c.is_zero()}
        return poly

    def to_json(self):
        return {
            "forms": [[[[str(c) for c in x.coords] for x in row] for row in fam] for fam in self.forms],
            "alpha": [str(a) for a in self.alpha],
            "places": [v.to_json() for v in self.S],
        }


def _normalized(poly):
    key = min(poly)
    c = poly[key]
    return {e: x / c for e, x in poly.items()}


def proportionality_test(f):
    polys = [_normalized(f.expand(i)) for i in range(len(f.S))]
    return all(p == polys[0] for p in polys[1:])


def _proportional_rows(a, b):
    K = a[0].K
    return rank(K, [a, b]) < 2


def _nonprop_witness(f):
    fams = f.forms
    for v in range(len(fams)):
        for w in range(len(fams)):
            if v == w:
                continue
            for i, row in enumerate(fams[v]):
                if not any(_proportional_rows(row, other) for other in fams[w]):
                    return v, w, i
    return None


def reduce_to_square(f, trials=100, seed=0):
    if f.m > f.n_vars:
        raise LdoError("more forms than variables")
    if f.m == f.n_vars:
        return f
    wit = _nonprop_witness(f)
    if wit is None:
        raise NoWitness("every form is proportional to a form at every other place")
    v, w, i = wit
    K = f.K
    rng = random.Random(seed)
    for _ in range(trials):
        phi = [[rng.randint(-3, 3) for _ in range(f.m)] for _ in range(f.n_vars)]
        new = []
        for fam in f.forms:
            new.append([[sum((row[k] * phi[k][j] for k in range(f.n_vars)), K.zero()) for j in range(f.m)] for row in fam])
        if any(rank(K, fam) < f.m for fam in new):
            continue
        if any(_proportional_rows(new[v][i], other) for other in new[w]):
            continue
        return DecomposableForm(f.S, new, list(f.alpha))
    raise TrialsExhausted("no admissible substitution in %d trials" % trials)


def form_to_group(f):
    """(alpha', g) with f_v = alpha'_v * prod (g_v x)_i and det g_v = 1."""
    if f.m != f.n_vars:
        raise LdoError("form must be square")
    K = f.K
    alphas, gs = [], []
    for vi, fam in enumerate(f.forms):
        h = Matrix(K, fam)
        det = h.det()
        if det.is_zero():
            raise NotUnimodularizable("coefficient matrix is singular")
        rows = [list(r) for r in h.rows]
        inv = det.inverse()
        rows[0] = [x * inv for x in rows[0]]
        g = Matrix(K, rows)
        before = f.expand(vi)
        after = DecomposableForm(f.S, [rows if j == vi else f.forms[j] for j in range(len(f.S))]).expand(vi)
        if {e: c * det for e, c in after.items()} != before:
            raise LdoError("internal: normalized form does not re-expand")
        alphas.append((f.alpha[vi], det))
        gs.append(g)
    return alphas, gs


def numeric_alpha(K, v, alpha, det):
    """alpha * det as a number at place v (rational at finite places)."""
    if v.kind == "finite":
        return Fraction(alpha) * det.rational()
    return complex(Fraction(alpha)) * complex(det.embed(v))


# ---- density probing ---------------------------------------------------------


@dataclass
class ProbeResult:
    witness: list  # coordinates of z as strings, or None
    distance: float  # max over places of |f_v(z) - t_v|_v / eps_v at witness / best point
    best: list
    scanned: int

    def to_json(self):
        return {"witness": self.witness, "distance": self.distance, "best": self.best, "scanned": self.scanned}


def _smooth(primes, height):
    out = [1]
    for p in primes:
        emax = int(math.floor(log(height) / log(p) + 1e-12)) if height > 1 else 0
        out = [x * p ** e for x in out for e in range(emax + 1)]
    return sorted(out)


def _vp(q, p):
    if q == 0:
        return 10**9
    k = 0
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
        k += 1
    while b % p == 0:
        b //= p
        k -= 1
    return k


class _QForms:
    """Integer data of the linear forms over K = Q: l_i = ints[i] / dens[i]."""

    def __init__(self, f):
        self.f = f
        self.rows = []
        for fam in f.forms:
            ints, den = [], 1
            for row in fam:
                q = [c.rational() for c in row]
                L = 1
                for x in q:
                    L = L * x.denominator // gcd(L, x.denominator)
                ints.append([int(x * L) for x in q])
                den *= L
            self.rows.append((np.array(ints, dtype=np.int64), den))


def _primitive(H, D):
    a = np.arange(-H, H + 1, dtype=np.int64)
    return a if D == 1 else a[np.gcd(a, D) == 1]


def _finite_ratio(u, L, ints, den, alpha, t, p, eps, need=None):
    """|f_p(u / L) - t|_p / eps for integer rows u, by exact arithmetic
    modulo a power of p.  Values below the resolution p^-(cap) are reported
    at the resolution."""
    m = ints.shape[0]
    alpha, t = Fraction(alpha), Fraction(t)
    # f - t = (an td P - tn ad den L^m) / (ad td den L^m)
    den_all = alpha.denominator * t.denominator * den * L**m
    vden = _vp(Fraction(den_all), p)
    kmin = 0
    while p ** (-kmin) >= eps:
        kmin += 1
    cap = vden + kmin + 8
    M = p**cap
    c1 = alpha.numerator * t.denominator % M
    c0 = t.numerator * alpha.denominator * den * L**m % M
    if M < 2**31:
        lin = (u @ ints.T) % M
        P = np.ones(len(u), dtype=np.int64)
        for i in range(m):
            P = P * lin[:, i] % M
        N = (P * c1 - c0) % M
    else:
        lin = (u.astype(object) @ ints.T.astype(object)) % M
        P = np.ones(len(u), dtype=object)
        for i in range(m):
            P = P * lin[:, i] % M
        N = (P * c1 - c0) % M
    v = np.full(len(u), cap, dtype=np.int64)
    rem = N.copy()
    alive = rem != 0
    k = np.zeros(len(u), dtype=np.int64)
    while alive.any():
        div = alive & (rem % p == 0)
        k[div] += 1
        rem = np.where(div, rem // p, rem)
        alive = div
    nz = N != 0
    v[nz] = k[nz]
    out = np.power(float(p), -(v - vden).astype(float)) / eps
    # below the modular resolution: settle exactly
    for j in np.nonzero(~nz)[0]:
        lin_j = [sum(int(a) * int(b) for a, b in zip(u[j], row)) for row in ints]
        val = alpha * Fraction(math.prod(lin_j), den * L**m) - t
        out[j] = 0.0 if val == 0 else float(p) ** (-_vp(val, p)) / eps
    return out


def _denominator_tuples(primes, height, n):
    ds = _smooth(primes, height)
    return list(product(ds, repeat=n))


def density_probe(f, target, eps, height, budget=10**9, full_scan=False):
    """First z (deterministic order) with |f_v(z) - t_v|_v < eps_v at every v.

    Over K = Q each coordinate is a_i / D_i with |a_i| <= height and D_i an
    S-smooth number whose p-exponents are at most log_p(height); the scan
    runs over denominator tuples in lexicographic order, then numerators.
    The distance of a point is max_v |f_v(z) - t_v|_v / eps_v.
    """
    K = f.K
    S = f.S
    if K.degree != 1:
        return _density_probe_arch(f, target, eps, height, budget, full_scan)
    n = f.n_vars
    tuples = _denominator_tuples(S.primes, height, n)
    prim = {D: _primitive(height, D) for D in _smooth(S.primes, height)}
    total = sum(math.prod(len(prim[D]) for D in Ds) for Ds in tuples)
    if total > budget:
        raise BudgetExceeded("%d points exceed the budget %d" % (total, budget))
    data = _QForms(f)
    arch = [i for i, v in enumerate(S) if v.kind != "finite"]
    fin = [i for i, v in enumerate(S) if v.kind == "finite"]
    best, best_z = math.inf, None
    scanned = 0
    for Ds in tuples:
        grids = np.meshgrid(*[prim[D] for D in Ds], indexing="ij")
        a = np.stack([g.ravel() for g in grids], axis=1)
        if all(D == 1 for D in Ds):
            a = a[np.any(a != 0, axis=1)]
        scanned += len(a)
        z = a / np.array(Ds, dtype=float)
        ratio = np.zeros(len(a))
        for vi in arch:
            ints, den = data.rows[vi]
            val = float(Fraction(f.alpha[vi])) * np.prod(z @ ints.T.astype(float), axis=1) / den
            ratio = np.maximum(ratio, np.abs(val - float(target[vi])) / eps[vi])
        # only points that could still improve on the best need p-adic work
        cand = np.nonzero(ratio < max(best, 1.0) if not full_scan else ratio < best)[0]
        if len(cand) == 0:
            continue
        L = 1
        for D in Ds:
            L = L * D // gcd(L, D)
        u = a[cand] * np.array([L // D for D in Ds], dtype=np.int64)
        r = ratio[cand]
        for vi in fin:
            ints, den = data.rows[vi]
            r = np.maximum(r, _finite_ratio(u, L, ints, den, f.alpha[vi], target[vi], S[vi].index, eps[vi]))
        i = int(np.argmin(r))
        if r[i] < best:
            best = float(r[i])
            best_z = [str(Fraction(int(x), D)) for x, D in zip(a[cand[i]], Ds)]
        if not full_scan:
            hits = np.nonzero(r < 1)[0]
            if len(hits):
                j = int(hits[0])
                zz = [str(Fraction(int(x), D)) for x, D in zip(a[cand[j]], Ds)]
                return ProbeResult(zz, float(r[j]), best_z, scanned)
    if best < 1:
        return ProbeResult(best_z, best, best_z, scanned)
    return ProbeResult(None, best, best_z, scanned)


def _arch_values(f, vi, coords):
    """Complex values f_v(z) for z with integer power-basis coordinates
    (N, n, d)."""
    K = f.K
    v = f.S[vi]
    root = K.root_at(v, 64)
    basis = np.array([complex(root ** k) for k in range(K.degree)])
    z = coords.astype(float) @ basis  # (N, n)
    h = np.array([[complex(c.embed(v)) for c in row] for row in f.forms[vi]])
    lin = z @ h.T
    return complex(Fraction(f.alpha[vi])) * np.prod(lin, axis=1)


def _density_probe_arch(f, target, eps, height, budget, full_scan):
    K = f.K
    n, d = f.n_vars, K.degree
    m = n * d
    total = (2 * height + 1) ** m
    if total > budget:
        raise BudgetExceeded("%d points exceed the budget %d" % (total, budget))
    rng = np.arange(-height, height + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([rng] * m), indexing="ij"), axis=-1).reshape(-1, m)
    grid = grid[np.any(grid != 0, axis=1)]
    coords = grid.reshape(-1, n, d)
    ratio = np.zeros(len(grid))
    for vi, v in enumerate(f.S):
        vals = _arch_values(f, vi, coords)
        diff = np.abs(vals - complex(target[vi]))
        if v.kind == "complex":
            diff = diff * diff
        ratio = np.maximum(ratio, diff / eps[vi])
    i = int(np.argmin(ratio))
    best_z = [[int(c) for c in zz] for zz in coords[i]]
    hits = np.nonzero(ratio < 1)[0]
    if len(hits):
        j = int(hits[0]) if not full_scan else i
        return ProbeResult([[int(c) for c in zz] for zz in coords[j]], float(ratio[j]), best_z, len(grid))
    return ProbeResult(None, float(ratio[i]), best_z, len(grid))


def random_targets(S, count, seed):
    """Targets in [-2, 2] at real places and p-adic integers at finite places."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        t = []
        for v in S:
            if v.kind == "finite":
                t.append(Fraction(int(rng.integers(0, v.index ** 8))))
            else:
                t.append(Fraction(round(float(rng.uniform(-2, 2)), 6)).limit_denominator(10**6))
        out.append(t)
    return out


# ---- CM obstruction ---------------------------------------------------------


class CmSetup:
    """K = F(sqrt(-d)) with F given by its minimal polynomial and d in F.

    F-elements are coordinate vectors in the basis 1, b, ..., b^(e-1) where b
    is a root of the F polynomial inside K.
    """

    def __init__(self, K, f_minpoly, d):
        verdict = is_cm_field(K, (f_minpoly, d))
        if verdict != "yes":
            raise LdoError("K is not certified CM by the given witness")
        self.K = K
        self.F = nf_create(f_minpoly, K.precision_bits)
        self.e = self.F.degree
        dF = self.F(d if isinstance(d, (list, tuple)) else [d])
        found = None
        for beta in field_roots(K, [K(c) for c in self.F.minpoly]):
            dK = self._lift(beta, dF)
            roots = nth_roots(-dK, 2)
            if roots:
                found = (beta, roots[0], dK)
                break
        if found is None:
            raise LdoError("could not embed F(sqrt(-d)) into K")
        self.beta, self.s, self.dK = found
        self.dF = dF
        # K basis over Q: beta^i and s beta^i
        basis = [self.beta ** i for i in range(self.e)] + [self.s * self.beta ** i for i in range(self.e)]
        self._basis = basis
        self._inv = _solve_basis(K, basis)

    def _lift(self, beta, x):
        acc = self.K.zero()
        for c in reversed(x.coords):
            acc = acc * beta + c
        return acc

    def lift(self, x):
        return self._lift(self.beta, x)

    def split(self, z):
        """z = gamma + s delta with gamma, delta in F (coordinate lists)."""
        c = [sum(z.coords[i] * self._inv[i][j] for i in range(self.K.degree)) for j in range(self.K.degree)]
        return c[: self.e], c[self.e:]

    def in_F(self, x):
        _, dl = self.split(x)
        return not any(dl)

    def to_F(self, x):
        g, dl = self.split(x)
        if any(dl):
            raise NotOverF("%r is not in F" % (x,))
        return self.F(g)


def _solve_basis(K, basis):
    # inverse of the coordinate matrix of basis elements (rows = elements)
    from .numfield import _rat_inverse

    return _rat_inverse([list(b.coords) for b in basis])


def cm_constant(setup, S, l=1):
    """prod_j sigma_j(d) / (4 l^4) over the places of S (d rational gives the
    familiar (d/(4 l^4))^r)."""
    c = 1.0
    for v in S:
        dv = setup.dK.embed(v)
        c *= abs(complex(dv)) / (4 * l**4)
    return c


@dataclass
class CmVerdict:
    """Which alternatives hold at z; ``verdict`` names the first that does."""

    artin1: bool
    artin2: bool
    product: float
    C: float
    direction: complex = None

    @property
    def verdict(self):
        return "artin1" if self.artin1 else "artin2" if self.artin2 else "violation"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "artin1": self.artin1,
            "artin2": self.artin2,
            "product": self.product,
            "C": self.C,
            "direction": None if self.direction is None else [self.direction.real, self.direction.imag],
        }


def _normalization(f, setup):
    """prod_j |alpha_j det h_j|_j, the factor taking f to SL_2-normalized forms."""
    K = f.K
    out = 1.0
    for vi, v in enumerate(f.S):
        for row in f.forms[vi]:
            for c in row:
                if not setup.in_F(c):
                    raise NotOverF("coefficient %r is not in F" % (c,))
        det = Matrix(K, f.forms[vi]).det()
        val = complex(Fraction(f.alpha[vi])) * complex(det.embed(v))
        out *= abs(val) ** 2 if v.kind == "complex" else abs(val)
    return out


def cm_bound_check(f, setup, z, l=1, tol=1e-9):
    if f.n_vars != 2 or f.m != 2:
        raise LdoError("the obstruction is stated for binary forms")
    K = f.K
    z = [K(x) for x in z]
    C = cm_constant(setup, f.S, l) * _normalization(f, setup)
    vals = []
    for vi, v in enumerate(f.S):
        acc = complex(Fraction(f.alpha[vi]))
        for row in f.forms[vi]:
            lin = sum((a * x for a, x in zip(row, z)), K.zero())
            if lin.is_zero():
                raise LdoError("f(z) has a zero coordinate")
            acc *= complex(lin.embed(v))
        vals.append(acc)
    prod = 1.0
    for v, x in zip(f.S, vals):
        prod *= abs(x) ** 2 if v.kind == "complex" else abs(x)
    a1 = prod >= C * (1 - 1e-12)
    w = vals[0] / abs(vals[0])
    if all(abs((x * w.conjugate()).imag) <= tol * abs(x) for x in vals):
        return CmVerdict(a1, True, prod, C, w)
    g, dl = zip(*(setup.split(x) for x in z))
    det = setup.F(g[0]) * setup.F(dl[1]) - setup.F(g[1]) * setup.F(dl[0])
    # gamma, delta F-proportional: f_v(z) lies on R * sigma_v(w) for one w in K
    return CmVerdict(a1, det.is_zero(), prod, C)


@dataclass
class CmScanReport:
    points: int = 0
    excluded_zero: int = 0
    artin1: int = 0
    artin2: int = 0
    violations: int = 0
    min_product: float = math.inf
    examples: list = field(default_factory=list)

    def merge(self, other):
        self.points += other.points
        self.excluded_zero += other.excluded_zero
        self.artin1 += other.artin1
        self.artin2 += other.artin2
        self.violations += other.violations
        self.min_product = min(self.min_product, other.min_product)
        self.examples.extend(other.examples[: max(0, 10 - len(self.examples))])

    def to_json(self):
        return {
            "points": self.points,
            "excluded_zero": self.excluded_zero,
            "artin1": self.artin1,
            "artin2": self.artin2,
            "violations": self.violations,
            "min_product": self.min_product,
            "examples": self.examples,
        }


class CmBatchChecker:
    """Vectorized (Artin1 or Artin2) check for binary forms with coefficients
    in F, on points z = gamma + s delta with integer F-coordinates.

    Every sigma_j(s) is purely imaginary, so |l(z)|_j^2 splits as
    sigma_j(l(gamma))^2 + |sigma_j(s)|^2 sigma_j(l(delta))^2 and the product
    over places is assembled from per-half tables.  Points below the bound
    are settled with exact integer arithmetic in F.
    """

    def __init__(self, f, setup, l=1, tol=1e-9):
        if f.n_vars != 2 or f.m != 2:
            raise LdoError("the obstruction is stated for binary forms")
        if any(v.kind != "complex" for v in f.S):
            raise LdoError("a CM field has only complex places")
        self.f, self.setup, self.tol = f, setup, tol
        e = self.e = setup.e
        self.C = cm_constant(setup, f.S, l) * _normalization(f, setup)
        F = setup.F
        # exact integer multiplication table of F: b^i b^j = sum_k T[i][j][k] b^k
        T = np.zeros((e, e, e), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                prod = (F.gen ** i) * (F.gen ** j) if e > 1 else F.one()
                if any(c.denominator != 1 for c in prod.coords):
                    raise LdoError("F polynomial must be integral")
                T[i, j] = [int(c) for c in prod.coords]
        self.T = T
        P = len(f.S)
        self.coef = np.zeros((P, 2, 2 * e))
        self.c2 = np.zeros((P, 2))
        self.sval, self.hint = [], []
        self.scale = 1.0
        for j, v in enumerate(f.S):
            bv = complex(setup.beta.embed(v))
            sv = complex(setup.s.embed(v))
            if abs(bv.imag) > 1e-12 * (1 + abs(bv)) or abs(sv.real) > 1e-12 * abs(sv):
                raise LdoError("embedding is not compatible with the CM structure")
            self.sval.append(sv)
            self.c2[j, :] = sv.imag ** 2
            rows = []
            for i, row in enumerate(f.forms[j]):
                fr = [setup.to_F(c) for c in row]
                for k, x in enumerate(fr):
                    h = float(complex(row[k].embed(v)).real)
                    for cc in range(e):
                        self.coef[j, i, k * e + cc] = h * bv.real ** cc
                L = 1
                for x in fr:
                    for q in x.coords:
                        L = L * q.denominator // gcd(L, q.denominator)
                rows.append([[int(q * L) for q in x.coords] for x in fr])
            self.hint.append(np.array(rows, dtype=np.int64))  # (m, n, e)
            self.scale *= abs(complex(Fraction(f.alpha[j]))) ** 2
        self.c2 = self.c2.reshape(-1)
        self._flat = self.coef.reshape(2 * P, -1)

    def _fmul(self, a, b):
        # exact product of F-elements given as integer coordinate arrays (..., e)
        return np.einsum("...i,...j,ijk->...k", a, b, self.T)

    def _parts(self, flat):
        return flat.astype(float) @ self._flat.T  # (N, places * forms)

    def _settle(self, gam, dlt, rep):
        """Exact treatment of points below the bound."""
        N = len(gam)
        zero = np.zeros(N, dtype=bool)
        vals = []
        for j in range(len(self.sval)):
            hint = self.hint[j]
            for i in range(hint.shape[0]):
                lg = sum(self._fmul(np.broadcast_to(hint[i, k], gam[:, k].shape), gam[:, k]) for k in range(2))
                ld = sum(self._fmul(np.broadcast_to(hint[i, k], dlt[:, k].shape), dlt[:, k]) for k in range(2))
                zero |= ~np.any(lg != 0, axis=1) & ~np.any(ld != 0, axis=1)
            A = self._parts(gam.reshape(N, -1))[:, 2 * j:2 * j + 2]
            B = self._parts(dlt.reshape(N, -1))[:, 2 * j:2 * j + 2]
            lin = A + self.sval[j] * B
            vals.append(complex(Fraction(self.f.alpha[j])) * lin[:, 0] * lin[:, 1])
        prod = np.ones(N)
        for v in vals:
            prod *= np.abs(v) ** 2
        keep = ~zero
        rep.excluded_zero += int(zero.sum())
        a1 = keep & (prod >= self.C * (1 - 1e-12))
        rep.artin1 += int(a1.sum())
        idx = np.nonzero(keep & ~a1)[0]
        if len(idx):
            v0 = vals[0][idx]
            w = v0 / np.abs(v0)
            ray = np.ones(len(idx), dtype=bool)
            for v in vals:
                x = v[idx]
                ray &= np.abs((x * np.conj(w)).imag) <= self.tol * np.abs(x)
            det = self._fmul(gam[idx, 0], dlt[idx, 1]) - self._fmul(gam[idx, 1], dlt[idx, 0])
            ok = ray | ~np.any(det != 0, axis=1)
            rep.artin2 += int(ok.sum())
            bad = idx[~ok]
            rep.violations += int(len(bad))
            for j in bad[: max(0, 10 - len(rep.examples))]:
                rep.examples.append({"gamma": gam[j].tolist(), "delta": dlt[j].tolist(), "product": float(prod[j])})
        if keep.any():
            rep.min_product = min(rep.min_product, float(prod[keep].min()))

    def check(self, gam, dlt):
        """Paired points: gam, dlt int arrays (N, 2, e)."""
        rep = CmScanReport(points=len(gam))
        A = self._parts(gam.reshape(len(gam), -1))
        B = self._parts(dlt.reshape(len(dlt), -1))
        prod = self.scale * np.prod(A * A + self.c2 * B * B, axis=1)
        self._collect(rep, prod, lambda idx: (gam[idx], dlt[idx]))
        return rep

    def check_product(self, G, D):
        """Every pairing of gamma rows G (Ng, 2e) with delta rows D (Nd, 2e)."""
        rep = CmScanReport(points=len(G) * len(D))
        A = self._parts(G)
        B = self._parts(D)
        Asq, Bsq = A * A, self.c2 * B * B
        prod = np.full((len(G), len(D)), self.scale)
        for q in range(A.shape[1]):
            prod *= Asq[:, q, None] + Bsq[None, :, q]
        prod = prod.ravel()
        e = self.e
        self._collect(rep, prod, lambda idx: (G[idx // len(D)].reshape(-1, 2, e), D[idx % len(D)].reshape(-1, 2, e)))
        return rep

    def _collect(self, rep, prod, fetch):
        low = prod < self.C * (1 + 1e-9)
        high = ~low
        rep.artin1 += int(high.sum())
        if high.any():
            rep.min_product = min(rep.min_product, float(prod[high].min()))
        idx = np.nonzero(low)[0]
        if len(idx):
            gam, dlt = fetch(idx)
            self._settle(gam, dlt, rep)


def _l1_vectors(dim, H):
    """All integer vectors of the given dimension with L1 norm <= H, with norms."""
    vecs = [np.zeros((1, 0), dtype=np.int64)]
    for _ in range(dim):
        nxt = []
        for base in vecs:
            used = np.abs(base).sum(axis=1)
            for c in range(-H, H + 1):
                ok = used + abs(c) <= H
                if ok.any():
                    nxt.append(np.concatenate([base[ok], np.full((int(ok.sum()), 1), c, dtype=np.int64)], axis=1))
        vecs = [np.concatenate(nxt, axis=0)]
    v = vecs[0]
    norms = np.abs(v).sum(axis=1)
    order = np.argsort(norms, kind="stable")
    return v[order], norms[order]


def cm_scan(f, setup, height, l=1, chunk=2_000_000, raise_on_violation=True):
    """Exhaustive check over z = gamma + s delta with the integer coordinates
    of (gamma, delta) of total L1 norm <= height."""
    checker = CmBatchChecker(f, setup, l)
    e = setup.e
    half = 2 * e
    vecs, norms = _l1_vectors(half, height)
    counts = np.searchsorted(norms, np.arange(height + 1), side="right")  # #vectors with norm <= k
    report = CmScanReport()
    start = 0
    for a in range(height + 1):
        end = counts[a]
        group = vecs[start:end]
        start = end
        if len(group) == 0:
            continue
        partner = vecs[: counts[height - a]]
        step = max(1, chunk // max(1, len(partner)))
        for s0 in range(0, len(group), step):
            report.merge(checker.check_product(group[s0:s0 + step], partner))
    if report.violations and raise_on_violation:
        raise CmBoundViolation("%d points satisfy neither alternative, e.g. %s" % (report.violations, report.examples[:1]))
    return report


def two_place_diagnostic(f, height):
    """Value vectors at small points and their minimal pairwise gaps."""
    from scipy.spatial import cKDTree

    if len(f.S) != 2:
        raise LdoError("diagnostic is for two places")
    K = f.K
    if any(v.kind == "finite" for v in f.S):
        raise LdoError("diagnostic is implemented for archimedean places")
    if height <= 0:
        return {"points": 0, "distinct_values": 0, "min_gap": None, "histogram": []}
    n, d = f.n_vars, K.degree
    rng = np.arange(-height, height + 1)
    grid = np.stack(np.meshgrid(*([rng] * (n * d)), indexing="ij"), axis=-1).reshape(-1, n * d)
    grid = grid[np.any(grid != 0, axis=1)]
    coords = grid.reshape(-1, n, d)
    cols = []
    for vi in range(2):
        val = _arch_values(f, vi, coords)
        cols.append(val.real)
        if f.S[vi].kind == "complex":
            cols.append(val.imag)
    pts = np.stack(cols, axis=1)
    pts = pts[np.all(np.abs(pts) > 1e-12, axis=1)] if len(pts) else pts
    uniq = np.unique(np.round(pts, 9), axis=0)
    min_gap = None
    if len(uniq) >= 2:
        tree = cKDTree(uniq)
        dist, _ = tree.query(uniq, k=2)
        min_gap = float(dist[:, 1].min())
    mags = np.log10(np.abs(uniq).max(axis=1) + 1e-300) if len(uniq) else np.array([])
    hist, edges = np.histogram(mags, bins=10) if len(mags) else (np.array([]), np.array([]))
    return {
        "points": int(len(grid)),
        "distinct_values": int(len(uniq)),
        "min_gap": min_gap,
        "histogram": [[float(edges[i]), float(edges[i + 1]), int(hist[i])] for i in range(len(hist))],
    }
