"""Stratification of the closure of a locally divergent orbit for two places:
admissible parabolic pairs, orbit representatives, the closure poset and the
closedness and counting statements that go with it.

All orbit data is modulo the torus action; representatives are K-rational.
"""
from dataclasses import dataclass, field
from itertools import product

from .errors import LdoError, NotAdmissible, TheoremViolation
from .exactlin import (
    Matrix,
    _det,
    generalized_membership,
    rank,
)
from .numfield import is_s_integral, nth_roots
from .weylcomb import (
    PsiSet,
    WeylPerm,
    all_perms,
    all_psi,
    coset_reps,
    flag_of,
    n_psi_count,
)


@dataclass(frozen=True)
class ParabolicPair:
    w1: WeylPerm
    psi: PsiSet
    w2: WeylPerm

    @property
    def flags(self):
        return flag_of(self.w1, self.psi, opposite=True), flag_of(self.w2, self.psi)

    def contained_in(self, other):
        a, b = self.flags
        c, d = other.flags
        return a.refines(c) and b.refines(d)

    def sort_key(self):
        return (len(self.psi.subset), sorted(self.psi.subset), self.w1.perm, self.w2.perm)

    def label(self):
        return "(%s,%s,%s)" % (self.w1, self.psi.label(), self.w2)

    def to_json(self):
        f1, f2 = self.flags
        return {
            "w1": list(self.w1.perm),
            "psi": sorted(self.psi.subset),
            "w2": list(self.w2.perm),
            "flags": [f1.label(), f2.label()],
        }


@dataclass
class OrbitRep:
    pair: ParabolicPair
    left_factor: Matrix
    right_factor: Matrix
    base: tuple

    def point(self):
        g1, g2 = self.base
        return self.left_factor * g1, self.right_factor * g2

    def to_json(self):
        return {
            "pair": self.pair.to_json(),
            "left_factor": self.left_factor.coords(),
            "right_factor": self.right_factor.coords(),
        }


@dataclass
class LocalComponent:
    """One place's component of g: an optional real diagonal part times an
    optional K-rational matrix.  ``matrix`` is None when the component is
    not of that form."""

    matrix: object = None
    diagonal: list = None


def is_locally_divergent(components):
    # rank_{K_v} SL_n = rank_K SL_n = n - 1 for every place, so only the
    # K-rational part matters
    return all(c.matrix is not None for c in components)


def is_orbit_closed(*gs):
    gs = list(gs)
    if len(gs) < 2:
        return True
    last_inv = gs[-1].inverse()
    return all((g * last_inv).is_monomial() for g in gs[:-1])


def _canonical(pairs):
    return sorted(pairs, key=lambda p: p.sort_key())


def admissible_set(g1, g2, with_factors=False):
    g = g1 * g2.inverse()
    n = g.n
    out = []
    for psi in all_psi(n):
        reps = coset_reps(psi)
        for w1, w2 in product(reps, reps):
            f = generalized_membership(g, w1, w2, psi)
            if f is not None:
                out.append((ParabolicPair(w1, psi, w2), f))
    out.sort(key=lambda x: x[0].sort_key())
    pairs = [p for p, _ in out]
    if not any(len(p.psi.subset) == n - 1 for p in pairs):
        raise TheoremViolation("G x G is missing from the admissible set")
    if not any(not p.psi.subset for p in pairs):
        raise TheoremViolation("no admissible pair of minimal parabolics")
    return out if with_factors else pairs


def _orbit_rep_from_factor(g1, g2, pair, f):
    K = g1.K
    W1 = Matrix.weyl(K, pair.w1)
    W2 = Matrix.weyl(K, pair.w2)
    left = W1 * f.v_minus.inverse() * W1.inverse()
    right = W2 * f.v_plus * W2.inverse()
    # the factors are products of K-matrices, hence K-rational; recheck the
    # defining identity exactly
    if W1 * f.v_minus * f.z * f.v_plus * W2.inverse() != g1 * g2.inverse():
        raise TheoremViolation("factorization does not reproduce g1 g2^-1")
    return OrbitRep(pair, left, right, (g1, g2))


def orbit_rep(g1, g2, pair):
    g = g1 * g2.inverse()
    f = generalized_membership(g, pair.w1, pair.w2, pair.psi)
    if f is None:
        raise NotAdmissible("%s is not admissible for g" % pair.label())
    return _orbit_rep_from_factor(g1, g2, pair, f)


def sum_n_psi_squared(n):
    return sum(n_psi_count(p) ** 2 for p in all_psi(n))


@dataclass
class ClosurePoset:
    nodes: list
    relation: list  # (i, j) with node i strictly contained in node j
    hasse: list
    closed_nodes: list
    top: int
    orbit_equal_top: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "nodes": [nd.pair.to_json() for nd in self.nodes],
            "hasse_edges": [list(e) for e in self.hasse],
            "closed_nodes": self.closed_nodes,
            "top": self.top,
            "orbit_equal_top": self.orbit_equal_top,
            "counts": self.counts,
            "note": "orbit representatives are defined modulo the torus action",
        }

    def to_dot(self):
        lines = ["digraph strata {", "  rankdir=BT;"]
        closed = set(self.closed_nodes)
        for i, nd in enumerate(self.nodes):
            shape = "doublecircle" if i in closed else "circle"
            lines.append('  n%d [label="%s", shape=%s];' % (i, nd.pair.label(), shape))
        for a, b in self.hasse:
            lines.append("  n%d -> n%d;" % (a, b))
        lines.append("}")
        return "\n".join(lines) + "\n"


def closure_poset(g1, g2):
    n = g1.n
    items = admissible_set(g1, g2, with_factors=True)
    nodes = [_orbit_rep_from_factor(g1, g2, p, f) for p, f in items]
    pairs = [nd.pair for nd in nodes]
    rel = [(i, j) for i, a in enumerate(pairs) for j, b in enumerate(pairs) if i != j and a.contained_in(b)]
    rel_set = set(rel)
    hasse = [(i, j) for i, j in rel if not any((i, k) in rel_set and (k, j) in rel_set for k in range(len(pairs)))]
    closed = [i for i in range(len(pairs)) if not any((j, i) in rel_set for j in range(len(pairs)))]
    top = next(i for i, p in enumerate(pairs) if len(p.psi.subset) == n - 1)
    for i in closed:
        if pairs[i].psi.subset:
            raise TheoremViolation("minimal admissible pair %s is not minimal parabolic" % pairs[i].label())
    for i in range(len(pairs)):
        if i != top and (i, top) not in rel_set:
            raise TheoremViolation("node %s is not below G x G" % pairs[i].label())
    bound_total = sum_n_psi_squared(n)
    bound_closed = n_psi_count(PsiSet.empty(n)) ** 2
    if len(nodes) > bound_total or len(closed) > bound_closed:
        raise TheoremViolation("stratum count exceeds its bound")
    equal_top = []
    if is_orbit_closed(g1, g2):
        # every stratum then coincides with the closed top orbit
        equal_top = list(range(len(nodes)))
    counts = {
        "total": len(nodes),
        "closed": len(closed),
        "bound_total": bound_total,
        "bound_closed": bound_closed,
    }
    return ClosurePoset(nodes, rel, hasse, closed, top, equal_top, counts)


# ---- orbit equality --------------------------------------------------------


def twisted_minors(g):
    """Leading principal minors of w1^-1 g w2 for all (w1, w2) in W x W."""
    K, n = g.K, g.n
    out = []
    for w1 in all_perms(n):
        W1i = Matrix.weyl(K, w1).inverse()
        for w2 in all_perms(n):
            h = W1i * g * Matrix.weyl(K, w2)
            out.extend(h.minor(range(k), range(k)) for k in range(1, n))
    return out


def generic_position(g):
    return all(not m.is_zero() for m in twisted_minors(g))


def _diag_solution_space(M, N):
    """Basis of {d : M diag(d) N is diagonal} over K."""
    K, n = M.K, M.n
    # entry (i, j) of M D N is sum_k M[i][k] d_k N[k][j]
    eqs = [[M[i][k] * N[k][j] for k in range(n)] for i in range(n) for j in range(n) if i != j]
    return _nullspace(K, eqs, n)


def _nullspace(K, rows, m):
    a = [list(r) for r in rows]
    piv_cols = []
    rk = 0
    for col in range(m):
        p = next((r for r in range(rk, len(a)) if not a[r][col].is_zero()), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        inv = a[rk][col].inverse()
        a[rk] = [x * inv for x in a[rk]]
        for r in range(len(a)):
            if r != rk and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        piv_cols.append(col)
        rk += 1
    free = [c for c in range(m) if c not in piv_cols]
    basis = []
    for fc in free:
        v = [K.zero()] * m
        v[fc] = K.one()
        for r, pc in enumerate(piv_cols):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


@dataclass
class EqualityVerdict:
    verdict: str
    gamma: object = None
    t: tuple = None
    reason: str = ""

    def to_json(self):
        return {
            "verdict": self.verdict,
            "gamma": self.gamma.coords() if self.gamma is not None else None,
            "reason": self.reason,
        }


def _check_gamma(a, b, gamma, S):
    """t_i = b_i gamma^-1 a_i^-1 diagonal for both components and gamma in SL_n(O)."""
    K = gamma.K
    if not gamma.det().is_one():
        return None
    if not all(is_s_integral(x, S) for r in gamma.rows for x in r):
        return None
    gi = gamma.inverse()
    if not all(is_s_integral(x, S) for r in gi.rows for x in r):
        return None
    ts = []
    for ai, bi in zip(a, b):
        t = bi * gi * ai.inverse()
        if not t.is_diagonal():
            return None
        ts.append(t)
    return tuple(ts)


def orbit_equal_heuristic(a, b, S, height_bound=10):
    """Decide whether two representatives give the same orbit T a Gamma.

    The diagonal D1 = b1 gamma^-1 a1^-1 ranges over a K-linear space cut out
    by diagonality of D2 = (b2 b1^-1) D1 (a1 a2^-1); when that space has
    dimension <= 1 the question is settled exactly, otherwise a bounded
    search is run.
    """
    if a.base[0] != b.base[0] or a.base[1] != b.base[1]:
        raise LdoError("representatives must share the base point")
    pa, pb = a.point(), b.point()
    K, n = pa[0].K, pa[0].n
    e = Matrix.identity(K, n)
    if pa[0] == pb[0] and pa[1] == pb[1]:
        return EqualityVerdict("equal", e, (e, e), "identical representatives")
    M = pb[1] * pb[0].inverse()
    N = pa[0] * pa[1].inverse()
    basis = _diag_solution_space(M, N)
    if not basis:
        return EqualityVerdict("distinct", reason="no diagonal solution")
    a1i, b1i = pa[0], pb[0].inverse()

    def try_diag(d):
        if any(x.is_zero() for x in d):
            return None
        D1 = Matrix.diag(K, d)
        gamma_inv = b1i * D1 * a1i
        try:
            gamma = gamma_inv.inverse()
        except LdoError:
            return None
        ts = _check_gamma(pa, pb, gamma, S)
        return (gamma, ts) if ts else None

    if len(basis) == 1:
        d0 = basis[0]
        if any(x.is_zero() for x in d0):
            return EqualityVerdict("distinct", reason="diagonal solutions are singular")
        det0 = K.one()
        for x in d0:
            det0 = det0 * x
        for lam in nth_roots(det0.inverse(), n):
            hit = try_diag([lam * x for x in d0])
            if hit:
                return EqualityVerdict("equal", hit[0], hit[1], "unique scaling")
        return EqualityVerdict("distinct", reason="no scaling gives an S-integral gamma")
    # bounded search over small integer combinations of the solution basis
    k = len(basis)
    rng = range(-height_bound, height_bound + 1)
    budget = 200000
    count = 0
    for coeffs in product(rng, repeat=k):
        count += 1
        if count > budget:
            break
        d = [sum((c * bv[i] for c, bv in zip(coeffs, basis)), K.zero()) for i in range(n)]
        det = K.one()
        for x in d:
            det = det * x
        if not det.is_one():
            continue
        hit = try_diag(d)
        if hit:
            return EqualityVerdict("equal", hit[0], hit[1], "bounded search")
    if a.pair != b.pair and generic_position(a.base[0] * a.base[1].inverse()):
        return EqualityVerdict("distinct", reason="generic position, no relation at height %d" % height_bound)
    return EqualityVerdict("undecided", reason="search bound %d exhausted" % height_bound)
