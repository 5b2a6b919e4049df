"""More than two places: centralizer partitions and the homogeneous closure
prediction, the boundedness predicate for two-place torus sequences, limit
representatives, and a numerical systole scanner for divergence.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, gcd
import math

import numpy as np

from .errors import BudgetExceeded, LdoError, SearchBudgetExceeded, SpecViolatesHypotheses
from .exactlin import Matrix, big_cell_factor
from .numfield import is_cm_field
from .strata import ParabolicPair, orbit_rep
from .weylcomb import PsiSet, WeylPerm, all_perms


class IndexPartition:
    """A set partition of {1..n}; coarser partitions are larger."""

    __slots__ = ("n", "blocks")

    def __init__(self, n, blocks):
        blocks = [frozenset(b) for b in blocks if b]
        seen = set()
        for b in blocks:
            if seen & b:
                raise LdoError("blocks overlap")
            seen |= b
        if seen != set(range(1, n + 1)):
            raise LdoError("blocks must cover 1..n")
        self.n = n
        self.blocks = frozenset(blocks)

    @classmethod
    def discrete(cls, n):
        return cls(n, [{i} for i in range(1, n + 1)])

    @classmethod
    def single(cls, n):
        return cls(n, [set(range(1, n + 1))])

    def __eq__(self, other):
        return isinstance(other, IndexPartition) and self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __len__(self):
        return len(self.blocks)

    @property
    def dim(self):
        """Dimension of the diagonal torus of SL_n constant on blocks."""
        return len(self.blocks) - 1

    def sorted_blocks(self):
        return sorted((sorted(b) for b in self.blocks), key=lambda b: b[0])

    def __repr__(self):
        return "IndexPartition(%s)" % self.sorted_blocks()

    def refines(self, other):
        return all(any(b <= c for c in other.blocks) for b in self.blocks)

    def join(self, other):
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for part in (self, other):
            for b in part.blocks:
                b = sorted(b)
                for x in b[1:]:
                    parent[find(x)] = find(b[0])
        groups = {}
        for i in range(1, self.n + 1):
            groups.setdefault(find(i), set()).add(i)
        return IndexPartition(self.n, groups.values())

    def meet(self, other):
        return IndexPartition(self.n, [b & c for b in self.blocks for c in other.blocks if b & c])

    def to_json(self):
        return self.sorted_blocks()


def all_partitions(n):
    def rec(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for p in rec(rest):
            for i in range(len(p)):
                yield p[:i] + [p[i] | {first}] + p[i + 1:]
            yield p + [{first}]

    return [IndexPartition(n, p) for p in rec(list(range(1, n + 1)))]


def _zero_pattern_partition(nonzero, n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(n):
            if i != j and nonzero[i][j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i + 1)
    return IndexPartition(n, groups.values())


def centralizer_partition(x):
    """Blocks on which a diagonal t must be constant to commute with x."""
    nz = [[not x[i][j].is_zero() for j in range(x.n)] for i in range(x.n)]
    return _zero_pattern_partition(nz, x.n)


@dataclass
class BlockGroup:
    """Block-preserving unimodular maps for a partition: the group of g in
    SL_n with g W_B = W_B, W_B spanned by the coordinates in block B."""

    partition: IndexPartition

    def contains(self, g):
        b = {}
        for k, blk in enumerate(self.partition.sorted_blocks()):
            for i in blk:
                b[i - 1] = k
        return g.det().is_one() and all(
            g[i][j].is_zero() for i in range(g.n) for j in range(g.n) if b[i] != b[j]
        )

    def lie_basis(self):
        """Rational n x n matrices spanning the Lie algebra."""
        n = self.partition.n
        out = []
        for i in range(n - 1):
            h = [[Fraction(0)] * n for _ in range(n)]
            h[i][i], h[i + 1][i + 1] = Fraction(1), Fraction(-1)
            out.append(h)
        for blk in self.partition.sorted_blocks():
            for a in blk:
                for c in blk:
                    if a != c:
                        e = [[Fraction(0)] * n for _ in range(n)]
                        e[a - 1][c - 1] = Fraction(1)
                        out.append(e)
        return out

    def torus_rank(self):
        return self.partition.n - 1

    def derived_dimension(self):
        basis = self.lie_basis()
        comms = []
        for x in basis:
            for y in basis:
                comms.append(_bracket(x, y))
        return _frac_rank([sum(m, []) for m in comms])

    def expected_derived_dimension(self):
        return sum(len(b) ** 2 - 1 for b in self.partition.blocks)

    def structure_ok(self):
        return self.torus_rank() == self.partition.n - 1 and self.derived_dimension() == self.expected_derived_dimension()


def _bracket(x, y):
    n = len(x)
    xy = [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    yx = [[sum(y[i][k] * x[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[xy[i][j] - yx[i][j] for j in range(n)] for i in range(n)]


def _frac_rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rk, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rk < len(rows) and col < ncols:
        p = next((r for r in range(rk, len(rows)) if rows[r][col] != 0), None)
        if p is None:
            col += 1
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        for r in range(rk + 1, len(rows)):
            if rows[r][col]:
                f = rows[r][col] / rows[rk][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rk])]
        rk += 1
        col += 1
    return rk


CM_LABELS = {"no": "non-CM verified", "yes": "CM", "unknown": "unknown"}


@dataclass
class ClosurePrediction:
    partition: IndexPartition
    omegas: list
    h: list
    dense: bool
    cm_guard: str
    warnings: list = field(default_factory=list)

    @property
    def group(self):
        return BlockGroup(self.partition)

    def to_json(self):
        return {
            "partition": self.partition.to_json(),
            "omegas": [list(w.perm) for w in self.omegas],
            "dense": self.dense,
            "cm_guard": self.cm_guard,
            "h": [m.coords() for m in self.h],
            "warnings": self.warnings,
        }


def maximize_centralizer(gs, budget=120**3, cm_witness=None):
    """Exhaustive search over omega in W^(r-1) maximizing the number of
    blocks of the join of centralizer_partition(omega_i g_i g_r^-1)."""
    r = len(gs)
    if r < 3:
        raise LdoError("need at least three places")
    n = gs[0].n
    K = gs[0].K
    if factorial(n) ** (r - 1) > budget:
        raise SearchBudgetExceeded("search space %d exceeds budget %d" % (factorial(n) ** (r - 1), budget))
    gr_inv = gs[-1].inverse()
    xs = [g * gr_inv for g in gs[:-1]]
    perms = all_perms(n)
    choices = []
    for x in xs:
        nz = [[not x[i][j].is_zero() for j in range(n)] for i in range(n)]
        seen = {}
        for w in perms:
            # row a of w x is +- row w^-1(a) of x
            winv = w.inverse()
            pat = [nz[winv(a + 1) - 1] for a in range(n)]
            part = _zero_pattern_partition(pat, n)
            if part not in seen:
                seen[part] = w
        choices.append(sorted(((w, p) for p, w in seen.items()), key=lambda t: t[0].perm))
    best = None
    for combo in product(*choices):
        part = combo[0][1]
        for _, p in combo[1:]:
            part = part.join(p)
        if best is None or len(part) > len(best[1]):
            best = ([w for w, _ in combo], part)
            if len(part) == n:
                break
    omegas, part = best
    gr = gs[-1]
    h = [Matrix.weyl(K, w).inverse() * gr for w in omegas] + [gr]
    verdict = is_cm_field(K, cm_witness)
    guard = CM_LABELS[verdict]
    warnings = []
    if verdict != "no":
        warnings.append(
            "field is %s: the predicted closure is only an outer bound, the actual closure may be"
            " contained in a countable union of smaller homogeneous sets" % guard
        )
    if part.dim == n - 1:
        warnings.append("all components are simultaneously monomial: the orbit is closed")
    return ClosurePrediction(part, omegas, h, part.dim == 0, guard, warnings)


def centralizer_oracle(gs):
    """Brute force over every omega tuple with explicit commutation solving:
    returns the maximal dimension of the common centralizer."""
    n = gs[0].n
    K = gs[0].K
    gr_inv = gs[-1].inverse()
    xs = [g * gr_inv for g in gs[:-1]]
    best = -1
    for combo in product(all_perms(n), repeat=len(xs)):
        mats = [Matrix.weyl(K, w) * x for w, x in zip(combo, xs)]
        best = max(best, commuting_diagonal_dim(mats))
    return best


def commuting_diagonal_dim(mats):
    """dim of {diagonal t with trace 0 : t x = x t for all x} solved exactly
    (the Lie algebra of the centralizing torus)."""
    n = mats[0].n
    # (t x - x t)_{ij} = (t_i - t_j) x_ij
    rows = []
    for x in mats:
        for i in range(n):
            for j in range(n):
                if i != j and not x[i][j].is_zero():
                    r = [Fraction(0)] * n
                    r[i], r[j] = Fraction(1), Fraction(-1)
                    rows.append(r)
    rows.append([Fraction(1)] * n)
    return n - _frac_rank(rows)


# ---- boundedness of two-place torus sequences -----------------------------


@dataclass
class SeqSpec:
    """Growth rates per simple root: log|alpha_k(s_n)|_1 ~ s_rates[k] * n and
    log|alpha_k(t_n)|_2 ~ t_rates[k] * n (rationals)."""

    s_rates: list
    t_rates: list

    def torus_logs(self, rates, n_size):
        # diagonal log entries x with x_k - x_{k+1} = rate_k and sum 0
        x = [Fraction(0)]
        for rt in rates:
            x.append(x[-1] - Fraction(rt))
        mean = sum(x) / n_size
        return [v - mean for v in x]


def prop43_bounded(g1, g2, psi, spec):
    n = g1.n
    s = [Fraction(x) for x in spec.s_rates]
    t = [Fraction(x) for x in spec.t_rates]
    if len(s) != n - 1 or len(t) != n - 1:
        raise SpecViolatesHypotheses("one rate per simple root is required")
    if len(psi.subset) == n - 1:
        raise SpecViolatesHypotheses("psi must be a proper subset of the simple roots")
    for k in range(1, n):
        if s[k - 1] < 0:
            raise SpecViolatesHypotheses("|alpha_%d(s_n)| must stay bounded below" % k)
        if k in psi.subset:
            if t[k - 1] != 0:
                raise SpecViolatesHypotheses("|alpha_%d(t_n)| must stay pinched" % k)
        elif t[k - 1] >= 0:
            raise SpecViolatesHypotheses("|alpha_%d(t_n)| must tend to 0" % k)
    cond_i = big_cell_factor(g1 * g2.inverse(), psi) is not None
    cond_ii = all(a + b == 0 for a, b in zip(s, t))
    return cond_i and cond_ii


def limit_representative(g1, g2, w1, w2, psi):
    return orbit_rep(g1, g2, ParabolicPair(w1, psi, w2))


# ---- systole scanning -------------------------------------------------------


@dataclass
class TorusPath:
    """t(s) acts at place v on coordinate i by |t_i|_v = exp(s * rates[v][i])
    (normalized absolute values)."""

    rates: list
    params: list


@dataclass
class SystoleReport:
    step: int
    parameter: float
    systole: float
    argmin: list
    search_height: int


def _smooth_numbers(primes, bound):
    out = [1]
    for p in primes:
        nxt = []
        for x in out:
            y = x
            while y <= bound:
                nxt.append(y)
                y *= p
        out = nxt
    return sorted(set(out))


def _vp_array(values, p):
    # p-adic valuation of nonzero int64 values (object arrays for big ints)
    v = np.zeros(values.shape, dtype=np.int64)
    cur = values.copy()
    mask = cur != 0
    while True:
        div = mask & (cur % p == 0)
        if not div.any():
            break
        v[div] += 1
        cur = np.where(div, cur // p, cur)
    return v


def _point_chunks(K, S, n, height, chunk):
    """Yield (coords (N, n, d) int64, D (N,) int64) for nonzero z in O^n."""
    d = K.degree
    denoms = _smooth_numbers(S.primes, height) if K.degree == 1 else [1]
    rng = np.arange(-height, height + 1, dtype=np.int64)
    m = n * d
    total = (2 * height + 1) ** m
    for D in denoms:
        # enumerate the integer box in chunks via mixed radix indices
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            coords = np.empty((len(idx), m), dtype=np.int64)
            rem = idx
            for k in range(m - 1, -1, -1):
                coords[:, k] = rng[rem % (2 * height + 1)]
                rem = rem // (2 * height + 1)
            keep = np.any(coords != 0, axis=1)
            if D > 1:
                # skip a/D when a/D has a smaller denominator (duplicates)
                g = np.gcd.reduce(np.concatenate([coords, np.full((len(idx), 1), D)], axis=1), axis=1)
                keep &= g == 1
            coords = coords[keep]
            yield coords.reshape(-1, n, d), D


def _place_abs(K, v, g, coords, D):
    """|(g z)_i|_v for every point (N, n)."""
    n = g.n
    if v.kind == "finite":
        p = v.index
        a = coords[:, :, 0]
        out = np.empty(a.shape, dtype=float)
        for i in range(n):
            row = [g[i][j].rational() for j in range(n)]
            L = 1
            for q in row:
                L = L * q.denominator // gcd(L, q.denominator)
            ints = np.array([int(q * L) for q in row], dtype=np.int64)
            num = a @ ints
            vL = 0
            while L % p == 0:
                L //= p
                vL += 1
            vD = 0
            DD = D
            while DD % p == 0:
                DD //= p
                vD += 1
            val = _vp_array(num, p) - vL - vD
            out[:, i] = np.where(num == 0, 0.0, np.power(float(p), -val.astype(float)))
        return out
    bits = 64
    root = K.root_at(v, bits)
    if K.integral_basis is not None:
        basis = [complex(b.evaluate(root)) for b in K.integral_basis]
    else:
        basis = [complex(root ** k) for k in range(K.degree)]
    gv = np.array([[complex(g[i][j].evaluate(root)) for j in range(n)] for i in range(n)])
    z = coords.astype(float) @ np.array(basis) / D  # (N, n)
    y = z @ gv.T
    a = np.abs(y)
    return a * a if v.kind == "complex" else a


def systole_scan(gs, S, path, height, budget=10**7, chunk=10**6):
    """min over nonzero z in O^n (coordinates bounded by height) of
    max_v max_i |(t_v g_v z)_i|_v for each parameter of the path."""
    K = gs[0].K
    n = gs[0].n
    if len(gs) != len(S):
        raise LdoError("one matrix per place is required")
    denoms = _smooth_numbers(S.primes, height) if K.degree == 1 else [1]
    count = len(denoms) * (2 * height + 1) ** (n * K.degree)
    if count > budget:
        raise BudgetExceeded("%d lattice points per step exceed the budget %d" % (count, budget))
    rates = np.array(path.rates, dtype=float)  # (r, n)
    params = np.array(path.params, dtype=float)
    best = np.full(len(params), np.inf)
    arg = [None] * len(params)
    for coords, D in _point_chunks(K, S, n, height, chunk):
        if len(coords) == 0:
            continue
        logs = []
        for v, g in zip(S, gs):
            with np.errstate(divide="ignore"):
                logs.append(np.log(_place_abs(K, v, g, coords, D)))
        L = np.stack(logs, axis=1)  # (N, r, n)
        for k, s in enumerate(params):
            val = np.max(L + s * rates[None, :, :], axis=(1, 2))
            i = int(np.argmin(val))
            if val[i] < best[k]:
                best[k] = val[i]
                z = coords[i]
                arg[k] = [[str(Fraction(int(c), D)) for c in zi] for zi in z]
    return [
        SystoleReport(k, float(params[k]), float(math.exp(best[k])), arg[k], height)
        for k in range(len(params))
    ]

