import random
from math import factorial

import pytest

from ldorbits.errors import NotAdmissible
from ldorbits.exactlin import Matrix
from ldorbits.numfield import PlaceSet, nf_create
from ldorbits.strata import (
    LocalComponent,
    ParabolicPair,
    admissible_set,
    closure_poset,
    generic_position,
    is_locally_divergent,
    is_orbit_closed,
    orbit_equal_heuristic,
    orbit_rep,
    sum_n_psi_squared,
)
from ldorbits.weylcomb import PsiSet, WeylPerm, all_perms, all_psi

Q = nf_create([1, 0])
K2 = nf_create([1, 0, -2])


def n_psi_oracle(n):
    # compositions of n: n!/prod(c_i!) cosets for each block structure
    def comps(k):
        if k == 0:
            yield []
            return
        for first in range(1, k + 1):
            for rest in comps(k - first):
                yield [first] + rest

    total = 0
    for c in comps(n):
        m = factorial(n)
        for x in c:
            m //= factorial(x)
        total += m * m
    return total


def test_sum_n_psi_squared():
    assert [sum_n_psi_squared(n) for n in (2, 3, 4)] == [n_psi_oracle(n) for n in (2, 3, 4)] == [5, 55, 1077]


def test_local_divergence():
    e = Matrix.identity(Q, 2)
    assert is_locally_divergent([LocalComponent(e), LocalComponent(e)])
    assert is_locally_divergent([LocalComponent(e, [2 ** 0.5, 2 ** -0.5])])
    assert not is_locally_divergent([LocalComponent(e), LocalComponent(None)])


def test_orbit_closed_examples():
    e = Matrix.identity(Q, 2)
    w0 = Matrix.weyl(Q, WeylPerm.longest(2))
    assert is_orbit_closed(e, e, e)
    assert is_orbit_closed(w0, e)
    assert not is_orbit_closed(Matrix(Q, [[1, 1], [0, 1]]), e)


def test_sl2_generic_admissible():
    g1 = Matrix(K2, [[1, 1], [1, 2]])
    e = Matrix.identity(K2, 2)
    pairs = admissible_set(g1, e)
    assert len(pairs) == 5
    assert sum(1 for p in pairs if not p.psi.subset) == 4
    assert sum(1 for p in pairs if len(p.psi.subset) == 1) == 1


def test_identity_contains_diagonal_pairs():
    e = Matrix.identity(Q, 3)
    pairs = set(admissible_set(e, e))
    for w in all_perms(3):
        assert ParabolicPair(w, PsiSet.empty(3), w) in pairs


def test_orbit_rep_examples():
    g1 = Matrix(Q, [[1, 1], [1, 2]])
    e = Matrix.identity(Q, 2)
    I = WeylPerm.identity(2)
    top = orbit_rep(g1, e, ParabolicPair(I, PsiSet.full(2), I))
    assert top.left_factor == e and top.right_factor == e
    rep = orbit_rep(g1, e, ParabolicPair(I, PsiSet.empty(2), I))
    # left factor is (v^-)^-1, right factor is v for the LU of g1
    assert rep.left_factor == Matrix(Q, [[1, 0], [-1, 1]])
    assert rep.right_factor == Matrix(Q, [[1, 1], [0, 1]])
    with pytest.raises(NotAdmissible):
        orbit_rep(Matrix(Q, [[0, -1], [1, 0]]), e, ParabolicPair(I, PsiSet.empty(2), I))


def test_orbit_rep_equivariance():
    rng = random.Random(4)
    for _ in range(3):
        rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        g1 = Matrix(Q, rows)
        if g1.det().is_zero():
            continue
        e = Matrix.identity(Q, 3)
        for pair in admissible_set(g1, e)[::6]:
            rep = orbit_rep(g1, e, pair)
            for u1 in all_perms(3):
                for u2 in all_perms(3):
                    U1, U2 = Matrix.weyl(Q, u1), Matrix.weyl(Q, u2)
                    moved = ParabolicPair(u1 * pair.w1, pair.psi, u2 * pair.w2)
                    other = orbit_rep(U1 * g1, U2 * e, moved)
                    assert other.left_factor == U1 * rep.left_factor * U1.inverse()
                    assert other.right_factor == U2 * rep.right_factor * U2.inverse()


@pytest.mark.parametrize("n", [2, 3])
def test_generic_counts_reach_bound(n):
    rng = random.Random(n)
    done = 0
    while done < 100:
        g1 = Matrix(Q, [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
        if g1.det().is_zero() or not generic_position(g1):
            continue
        done += 1
        assert len(admissible_set(g1, Matrix.identity(Q, n))) == sum_n_psi_squared(n)


def test_poset_sl2():
    g1 = Matrix(K2, [[1, 1], [1, 2]])
    P = closure_poset(g1, Matrix.identity(K2, 2))
    assert P.counts["total"] == 5 and P.counts["closed"] == 4
    assert all((i, P.top) in P.relation for i in P.closed_nodes)
    assert P.to_dot().count("doublecircle") == 4


def test_poset_sl3_generic():
    g1 = Matrix(Q, [[3, 4, 2], [1, -1, 2], [3, 2, 3]])
    P = closure_poset(g1, Matrix.identity(Q, 3))
    assert (P.counts["total"], P.counts["closed"]) == (55, 36)
    assert all(not P.nodes[i].pair.psi.subset for i in P.closed_nodes)


def test_monomial_collapse():
    base = Matrix.weyl(Q, WeylPerm((2, 3, 1)))
    e = Matrix.identity(Q, 3)
    P = closure_poset(base, e)
    assert P.orbit_equal_top == list(range(len(P.nodes)))
    S = PlaceSet(Q, Q.archimedean_places())
    for nd in P.nodes:
        v = orbit_equal_heuristic(nd, P.nodes[P.top], S)
        assert v.verdict == "equal" and v.gamma is not None


def test_equality_heuristic_generic_sl2():
    g1 = Matrix(Q, [[1, 1], [1, 2]])
    e = Matrix.identity(Q, 2)
    P = closure_poset(g1, e)
    S = PlaceSet(Q, Q.archimedean_places())
    a = P.nodes[P.closed_nodes[0]]
    assert orbit_equal_heuristic(a, a, S).verdict == "equal"
    b = P.nodes[P.closed_nodes[1]]
    assert orbit_equal_heuristic(a, b, S, 10).verdict == "distinct"
