"""Type A Weyl group combinatorics: signed permutation representatives,
standard parabolics as compositions, flag types, the two equivalent
density conditions, and the rational cone splitting lemma.

Permutations are 1-based tuples: ``perm[j-1]`` is the image of j.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .errors import HypothesisViolated, NoSplitFound, TheoremViolation


def _sign(perm):
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, c = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j] - 1
                c += 1
            if c % 2 == 0:
                s = -s
    return s


@dataclass(frozen=True, order=True)
class WeylPerm:
    perm: tuple

    @property
    def n(self):
        return len(self.perm)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n):
        return cls(tuple(range(n, 0, -1)))

    def __call__(self, j):
        return self.perm[j - 1]

    def __mul__(self, other):
        # composition self o other
        return WeylPerm(tuple(self.perm[other.perm[j] - 1] for j in range(self.n)))

    def inverse(self):
        inv = [0] * self.n
        for j, pj in enumerate(self.perm):
            inv[pj - 1] = j + 1
        return WeylPerm(tuple(inv))

    def sign(self):
        return _sign(self.perm)

    def length(self):
        p = self.perm
        return sum(1 for i in range(self.n) for j in range(i + 1, self.n) if p[i] > p[j])

    def matrix(self):
        """Monomial 0/+-1 matrix with determinant 1 (integer entries)."""
        n = self.n
        m = [[0] * n for _ in range(n)]
        for j in range(n):
            m[self.perm[j] - 1][j] = 1
        if self.sign() < 0:
            m[self.perm[n - 1] - 1][n - 1] = -1
        return m

    def __str__(self):
        return "".join(str(x) for x in self.perm) if self.n < 10 else ",".join(map(str, self.perm))


def all_perms(n):
    return [WeylPerm(p) for p in permutations(range(1, n + 1))]


@dataclass(frozen=True)
class PsiSet:
    n: int
    subset: frozenset

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        if any(not 1 <= i <= self.n - 1 for i in self.subset):
            raise ValueError("simple root index out of range")

    @classmethod
    def empty(cls, n):
        return cls(n, frozenset())

    @classmethod
    def full(cls, n):
        return cls(n, frozenset(range(1, n)))

    @classmethod
    def from_composition(cls, comp):
        n = sum(comp)
        cuts = set()
        acc = 0
        for c in comp[:-1]:
            acc += c
            cuts.add(acc)
        return cls(n, frozenset(i for i in range(1, n) if i not in cuts))

    @property
    def composition(self):
        comp, cur = [], 1
        for i in range(1, self.n):
            if i in self.subset:
                cur += 1
            else:
                comp.append(cur)
                cur = 1
        comp.append(cur)
        return tuple(comp)

    def blocks(self):
        """Blocks of 1-based indices, in order."""
        out, start = [], 1
        for c in self.composition:
            out.append(tuple(range(start, start + c)))
            start += c
        return out

    def block_of(self):
        b = {}
        for k, blk in enumerate(self.blocks()):
            for i in blk:
                b[i] = k
        return b

    def label(self):
        return "{" + ",".join(str(i) for i in sorted(self.subset)) + "}"

    def __lt__(self, other):
        return (len(self.subset), sorted(self.subset)) < (len(other.subset), sorted(other.subset))


def all_psi(n):
    out = []
    for k in range(n):
        for c in combinations(range(1, n), k):
            out.append(PsiSet(n, frozenset(c)))
    return out


@dataclass(frozen=True)
class FlagType:
    ordered_partition: tuple  # tuple of frozensets

    @classmethod
    def of(cls, blocks):
        return cls(tuple(frozenset(b) for b in blocks))

    def refines(self, other):
        """True iff self's parabolic is contained in other's: other arises by
        merging consecutive blocks of self."""
        i = 0
        mine = self.ordered_partition
        for big in other.ordered_partition:
            acc = set()
            while i < len(mine) and acc != big:
                if not mine[i] <= big:
                    return False
                acc |= mine[i]
                i += 1
            if acc != big:
                return False
        return i == len(mine)

    def label(self):
        return "|".join("".join(str(x) for x in sorted(b)) for b in self.ordered_partition)


def in_w_psi(w, psi):
    return all({w(i) for i in blk} == set(blk) for blk in psi.blocks())


def coset_key(w, psi):
    return tuple(frozenset(w(i) for i in blk) for blk in psi.blocks())


def coset_rep(w, psi):
    """Minimal length representative of w W_psi (increasing on every block)."""
    out = [0] * w.n
    for blk in psi.blocks():
        imgs = sorted(w(i) for i in blk)
        for i, x in zip(blk, imgs):
            out[i - 1] = x
    return WeylPerm(tuple(out))


_REPS_CACHE = {}


def coset_reps(psi):
    key = (psi.n, psi.subset)
    if key not in _REPS_CACHE:
        reps = sorted({coset_rep(w, psi) for w in all_perms(psi.n)})
        _REPS_CACHE[key] = reps
    return _REPS_CACHE[key]


def flag_of(w, psi, opposite=False):
    """Flag type of w P_psi w^-1 (or of w P_psi^- w^-1)."""
    blocks = [[w(i) for i in blk] for blk in psi.blocks()]
    if opposite:
        blocks = blocks[::-1]
    return FlagType.of(blocks)


def n_psi_count(psi):
    out = factorial(psi.n)
    for c in psi.composition:
        out //= factorial(c)
    return out


def flags_with_pattern(comp):
    """Every ordered partition of {1..n} with the given block sizes."""
    n = sum(comp)

    def rec(rest, sizes):
        if not sizes:
            yield ()
            return
        for c in combinations(sorted(rest), sizes[0]):
            for tail in rec(rest - set(c), sizes[1:]):
                yield (frozenset(c),) + tail

    return [FlagType(p) for p in rec(set(range(1, n + 1)), list(comp))]


def main1_tests(w, psi):
    """(membership of w0 w in W_psi, root-set inclusion); they must agree."""
    pi = WeylPerm.longest(w.n) * w
    cond_i = in_w_psi(pi, psi)
    b = psi.block_of()
    cond_iii = all(
        pi(i) < pi(j) for i in range(1, w.n + 1) for j in range(1, w.n + 1) if b[i] < b[j]
    )
    if cond_i != cond_iii:
        raise TheoremViolation("density conditions disagree for w=%s, psi=%s" % (w, psi.label()))
    return cond_i, cond_iii


# ---- rational cone splitting ---------------------------------------------


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _normalize(ineq):
    a, b = ineq
    s = max([abs(x) for x in a] + [abs(b)])
    if s == 0:
        return (tuple(a), b)
    return (tuple(x / s for x in a), b / s)


def fm_feasible_point(ineqs, n):
    """A rational point w with a.w >= b for every (a, b), or None.

    Exact Fourier-Motzkin elimination with back substitution.
    """
    systems = []
    cur = list({_normalize((tuple(Fraction(x) for x in a), Fraction(b))) for a, b in ineqs})
    for k in range(n - 1, -1, -1):
        systems.append(cur)
        pos, neg, zero = [], [], []
        for a, b in cur:
            (pos if a[k] > 0 else neg if a[k] < 0 else zero).append((a, b))
        nxt = set(zero)
        for ap, bp in pos:
            for an, bn in neg:
                # combine to cancel variable k
                lp, ln = -an[k], ap[k]
                a = tuple(lp * x + ln * y for x, y in zip(ap, an))
                b = lp * bp + ln * bn
                nxt.add(_normalize((a, b)))
        cur = list(nxt)
    for a, b in cur:
        if b > 0:
            return None
    w = [Fraction(0)] * n
    for k in range(n):
        sys_k = systems[n - 1 - k]
        lo, hi = None, None
        for a, b in sys_k:
            if a[k] == 0:
                continue
            rest = sum(a[j] * w[j] for j in range(k))
            bound = (b - rest) / a[k]
            if a[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            w[k] = (lo + hi) / 2
        elif lo is not None:
            w[k] = lo + 1
        elif hi is not None:
            w[k] = hi - 1
        else:
            w[k] = Fraction(0)
    if not all(_dot(a, w) >= b for a, b in ineqs):
        return None
    return w


def _proportional(u, v):
    return _rank([u, v]) < 2


def check_split(v_list, i0, w):
    others = [v for i, v in enumerate(v_list) if i != i0]
    n = len(v_list[0])
    return _dot(w, v_list[i0]) < 0 and all(_dot(w, v) > 0 for v in others) and _rank(others) == n


def cone_split(v_list, v):
    """Index i0 (0-based) and w with (w, v_i0) < 0 < (w, v_i) for i != i0."""
    vs = [[Fraction(x) for x in u] for u in v_list]
    v = [Fraction(x) for x in v]
    m, n = len(vs), len(v)
    if m <= n:
        raise HypothesisViolated("need more vectors than the dimension")
    if any(len(u) != n for u in vs):
        raise HypothesisViolated("dimension mismatch")
    if any(_dot(u, v) <= 0 for u in vs):
        raise HypothesisViolated("every vector must pair positively with v")
    for i in range(m):
        for j in range(i + 1, m):
            if _proportional(vs[i], vs[j]):
                raise HypothesisViolated("vectors %d and %d are proportional" % (i, j))
    if _rank(vs) < n:
        raise HypothesisViolated("vectors do not span")
    for i0 in range(m):
        others = [u for i, u in enumerate(vs) if i != i0]
        if _rank(others) < n:
            continue
        ineqs = [(u, 1) for u in others] + [([-x for x in vs[i0]], 1)]
        w = fm_feasible_point(ineqs, n)
        if w is not None:
            if not check_split(vs, i0, w):
                raise NoSplitFound("internal: split failed re-verification")
            return i0, w
    raise NoSplitFound("no vector can be separated from the others")


# ---- horospherical data ---------------------------------------------------


def horospherical_data(t, v, rel_tol=1e-12):
    """Sort indices by decreasing |t_i|_v; returns (psi, w) with w(k) the
    index in position k and psi grouping equal absolute values."""
    from .numfield import abs_value

    n = t.n
    vals = [abs_value(t[i][i], v) for i in range(n)]
    order = sorted(range(n), key=lambda i: -vals[i])
    w = WeylPerm(tuple(i + 1 for i in order))
    sub = set()
    for k in range(n - 1):
        a, b = vals[order[k]], vals[order[k + 1]]
        if abs(a - b) <= rel_tol * max(a, b):
            sub.add(k + 1)
    return PsiSet(n, frozenset(sub)), w
