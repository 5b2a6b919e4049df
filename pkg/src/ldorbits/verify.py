"""Randomized fuzzing of the statements that must never fail: relative
Bruhat coverage, existence of cone splittings, the CM lower bound and the
equivalence of the two density conditions.
"""
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import TheoremViolation
from .exactlin import Matrix, relative_bruhat
from .weylcomb import all_perms, all_psi, cone_split, main1_tests, _rank


@dataclass
class FuzzReport:
    cases: dict = field(default_factory=dict)
    alarms: list = field(default_factory=list)
    seconds: dict = field(default_factory=dict)

    @property
    def total(self):
        return sum(self.cases.values())

    def to_json(self):
        return {"cases": self.cases, "total": self.total, "alarms": self.alarms, "seconds": self.seconds}


def random_sl(K, n, rng, bound=3):
    """Random element of SL_n(K) as a product of elementary matrices."""
    m = Matrix.identity(K, n)
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2)
        rows = [list(r) for r in Matrix.identity(K, n).rows]
        rows[i][j] = K([rng.randint(-bound, bound) for _ in range(K.degree)])
        m = m * Matrix(K, rows)
    # a random signed permutation breaks any bias towards the big cell
    w = rng.choice(all_perms(n))
    return Matrix.weyl(K, w) * m


def fuzz_relative_bruhat(K, cases, seed, n=3):
    rng = random.Random(seed)
    psis = all_psi(n)
    alarms = []
    for _ in range(cases):
        g = random_sl(K, n, rng)
        psi = rng.choice(psis)
        try:
            rb = relative_bruhat(g, psi)
            if rb.product() != g:
                raise TheoremViolation("relative decomposition does not reproduce g")
        except TheoremViolation as e:
            alarms.append({"check": "relative_bruhat", "error": str(e), "g": g.coords(), "psi": psi.label()})
    return alarms


def random_cone_instance(rng, n, m, bound=6):
    v = [rng.randint(-bound, bound) for _ in range(n)]
    if not any(v):
        v[0] = 1
    out = []
    tries = 0
    while len(out) < m and tries < 1000:
        tries += 1
        u = [rng.randint(-bound, bound) for _ in range(n)]
        if sum(a * b for a, b in zip(u, v)) <= 0:
            continue
        if any(_rank([u, x]) < 2 for x in out):
            continue
        out.append(u)
    if len(out) < m or _rank(out) < n:
        return None
    return out, v


def fuzz_cone_split(cases, seed):
    rng = random.Random(seed)
    alarms = []
    done = 0
    while done < cases:
        n = rng.choice([2, 3])
        m = n + rng.randint(1, 3)
        inst = random_cone_instance(rng, n, m)
        if inst is None:
            continue
        done += 1
        vs, v = inst
        try:
            cone_split(vs, v)
        except TheoremViolation as e:
            alarms.append({"check": "cone_split", "error": str(e), "vectors": vs, "v": v})
    return alarms


def fuzz_main1(max_n=5):
    alarms, count = [], 0
    for n in range(1, max_n + 1):
        for psi in all_psi(n):
            for w in all_perms(n):
                count += 1
                try:
                    main1_tests(w, psi)
                except TheoremViolation as e:
                    alarms.append({"check": "main1", "error": str(e)})
    return count, alarms


def cm_fixture():
    """K = Q(sqrt2, i), F = Q(sqrt2), forms xy and x(x+y) at the two complex places."""
    from .forms import CmSetup, DecomposableForm
    from .numfield import PlaceSet, nf_create

    K = nf_create([1, 0, -2, 0, 9])
    S = PlaceSet(K, K.archimedean_places())
    f = DecomposableForm(S, [[[1, 0], [0, 1]], [[1, 0], [1, 1]]])
    return f, CmSetup(K, [1, 0, -2], 1)


def random_cm_forms(setup, S, rng, count, bound=2):
    """Binary forms with coefficients in F, invertible at every place."""
    from .forms import DecomposableForm

    K = setup.K
    out = []
    while len(out) < count:
        fams = []
        for _ in S:
            while True:
                rows = [[setup.lift(setup.F([rng.randint(-bound, bound) for _ in range(setup.e)])) for _ in range(2)] for _ in range(2)]
                if not Matrix(K, rows).det().is_zero():
                    break
            fams.append(rows)
        out.append(DecomposableForm(S, fams))
    return out


def fuzz_cm_bound(cases, seed, coord_bound=30, batch=50_000):
    from .forms import CmBatchChecker

    rng = random.Random(seed)
    nprng = np.random.default_rng(seed)
    f0, setup = cm_fixture()
    forms = [f0] + random_cm_forms(setup, f0.S, rng, 9)
    alarms, done, k = [], 0, 0
    checkers = [CmBatchChecker(f, setup) for f in forms]
    while done < cases:
        size = min(batch, cases - done)
        gam = nprng.integers(-coord_bound, coord_bound + 1, size=(size, 2, setup.e))
        dlt = nprng.integers(-coord_bound, coord_bound + 1, size=(size, 2, setup.e))
        # a quarter of each batch is made F-proportional to exercise the second alternative
        q = size // 4
        lam = nprng.integers(-3, 4, size=(q, 1, setup.e))
        dlt[:q] = checkers[0]._fmul(np.broadcast_to(lam, gam[:q].shape), gam[:q])
        rep = checkers[k % len(checkers)].check(gam, dlt)
        if rep.violations:
            alarms.append({"check": "cm_bound", "examples": rep.examples})
        done += size
        k += 1
    return alarms


def run_fuzz(total=10**6, seed=0, bruhat_cases=10_000, cone_cases=10_000):
    """Split the case budget across the checks; the CM bound takes the bulk
    since it is vectorized."""
    from .numfield import nf_create

    rep = FuzzReport()
    t = time.time()
    count, alarms = fuzz_main1()
    rep.cases["main1"] = count
    rep.alarms += alarms
    rep.seconds["main1"] = time.time() - t

    t = time.time()
    rep.alarms += fuzz_relative_bruhat(nf_create([1, 0]), bruhat_cases, seed)
    rep.cases["relative_bruhat"] = bruhat_cases
    rep.seconds["relative_bruhat"] = time.time() - t

    t = time.time()
    rep.alarms += fuzz_cone_split(cone_cases, seed)
    rep.cases["cone_split"] = cone_cases
    rep.seconds["cone_split"] = time.time() - t

    t = time.time()
    rest = max(0, total - rep.total)
    rep.alarms += fuzz_cm_bound(rest, seed)
    rep.cases["cm_bound"] = rest
    rep.seconds["cm_bound"] = time.time() - t
    return rep
