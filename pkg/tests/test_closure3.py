import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ldorbits.closure3 import (
    BlockGroup,
    IndexPartition,
    SeqSpec,
    TorusPath,
    all_partitions,
    centralizer_oracle,
    centralizer_partition,
    commuting_diagonal_dim,
    limit_representative,
    maximize_centralizer,
    prop43_bounded,
    systole_scan,
)
from ldorbits.errors import BudgetExceeded, LdoError, SearchBudgetExceeded, SpecViolatesHypotheses
from ldorbits.exactlin import Matrix
from ldorbits.numfield import Place, PlaceSet, nf_create
from ldorbits.strata import ParabolicPair, orbit_rep
from ldorbits.weylcomb import PsiSet, WeylPerm

Q = nf_create([1, 0])
QS = PlaceSet(Q, [Place("real", 0)])


def block4():
    return Matrix(Q, [[1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 2, 1], [0, 0, 1, 1]])


def test_partition_lattice_axioms():
    for n in range(1, 5):
        parts = all_partitions(n)
        for a in parts:
            assert a.join(a) == a and a.meet(a) == a
            for b in parts:
                j, m = a.join(b), a.meet(b)
                assert j == b.join(a) and m == b.meet(a)
                assert a.refines(j) and b.refines(j) and m.refines(a) and m.refines(b)
                assert a.join(a.meet(b)) == a and a.meet(a.join(b)) == a
    # Bell numbers
    assert [len(all_partitions(n)) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_centralizer_examples():
    assert centralizer_partition(Matrix.identity(Q, 3)) == IndexPartition.discrete(3)
    assert centralizer_partition(Matrix(Q, [[1, 1, 1], [1, 2, 1], [1, 1, 3]])) == IndexPartition.single(3)
    p = centralizer_partition(block4())
    assert p.sorted_blocks() == [[1, 2], [3, 4]] and p.dim == 1


def test_centralizer_matches_commutation_solver():
    rng = random.Random(8)
    for _ in range(100):
        rows = [[rng.choice([0, 0, rng.randint(-3, 3)]) for _ in range(4)] for _ in range(4)]
        x = Matrix(Q, rows)
        assert centralizer_partition(x).dim == commuting_diagonal_dim([x])


def test_maximize_identity():
    e = Matrix.identity(Q, 3)
    pred = maximize_centralizer([e, e, e])
    assert pred.partition == IndexPartition.discrete(3) and not pred.dense
    assert any("closed" in w for w in pred.warnings)


def test_maximize_block_fixture():
    e = Matrix.identity(Q, 4)
    pred = maximize_centralizer([block4(), e, e])
    assert pred.partition.sorted_blocks() == [[1, 2], [3, 4]]
    assert not pred.dense
    assert pred.partition.dim == centralizer_oracle([block4(), e, e]) == 1
    assert pred.group.contains(Matrix(Q, [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert pred.cm_guard == "non-CM verified"


def test_maximize_dense_fixture():
    g1 = Matrix(Q, [[1, 1], [1, 2]])
    g2 = Matrix(Q, [[2, 1], [1, 1]])
    e = Matrix.identity(Q, 2)
    pred = maximize_centralizer([g1, g2, e])
    assert pred.dense and centralizer_oracle([g1, g2, e]) == 0


def test_maximize_absorbs_monomial_factor():
    e = Matrix.identity(Q, 4)
    base = maximize_centralizer([block4(), e, e]).partition
    for w in [WeylPerm((2, 1, 4, 3)), WeylPerm((3, 4, 1, 2)), WeylPerm((4, 1, 2, 3))]:
        W = Matrix.weyl(Q, w)
        assert maximize_centralizer([W * block4(), e, e]).partition == base


def test_maximize_guards():
    e = Matrix.identity(Q, 5)
    with pytest.raises(SearchBudgetExceeded):
        maximize_centralizer([e] * 5)
    with pytest.raises(LdoError):
        maximize_centralizer([e, e])


def test_cm_guard_warning():
    K = nf_create([1, 0, 1])
    e = Matrix.identity(K, 2)
    pred = maximize_centralizer([e, e, e], cm_witness=([1, 0], 1))
    assert pred.cm_guard == "CM" and pred.warnings


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_block_group_structure(n):
    for part in all_partitions(n):
        if len(part) >= 2:
            assert BlockGroup(part).structure_ok()


def test_prop43_examples():
    e = Matrix.identity(Q, 2)
    psi = PsiSet.empty(2)
    assert prop43_bounded(e, e, psi, SeqSpec([1], [-1]))
    w0 = Matrix.weyl(Q, WeylPerm.longest(2))
    assert not prop43_bounded(w0, e, psi, SeqSpec([1], [-1]))
    x = Matrix(Q, [[1, 1], [1, 2]])
    assert prop43_bounded(x, e, psi, SeqSpec([1], [-1]))
    assert not prop43_bounded(x, e, psi, SeqSpec([2], [-1]))
    with pytest.raises(SpecViolatesHypotheses):
        prop43_bounded(x, e, psi, SeqSpec([1], [1]))


def test_prop43_unbounded_matches_systole_decay():
    # root growth 2n at one place against decay -n at the other: the product
    # of root values grows and the systole drops towards zero
    K = nf_create([1, 0, -2])
    x = Matrix(K, [[1, 1], [1, 2]])
    e = Matrix.identity(K, 2)
    Q2 = PlaceSet(K, K.archimedean_places())
    path = TorusPath([[1, -1], [-Fraction(1, 2), Fraction(1, 2)]], [1, 2, 3, 4])
    reps = systole_scan([x, e], Q2, path, 8)
    vals = [r.systole for r in reps]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    bounded = systole_scan([x, e], Q2, TorusPath([[Fraction(1, 2), -Fraction(1, 2)], [-Fraction(1, 2), Fraction(1, 2)]], [1, 2, 3, 4]), 8)
    assert min(r.systole for r in bounded) > 0.1


def test_limit_representative_delegates():
    x = Matrix(Q, [[1, 1], [1, 2]])
    e = Matrix.identity(Q, 2)
    I = WeylPerm.identity(2)
    a = limit_representative(x, e, I, I, PsiSet.empty(2))
    b = orbit_rep(x, e, ParabolicPair(I, PsiSet.empty(2), I))
    assert a.left_factor == b.left_factor and a.right_factor == b.right_factor


def test_systole_examples():
    e = Matrix.identity(Q, 2)
    reps = systole_scan([e], QS, TorusPath([[1, -1]], [1, 2, 3, 0]), 1000)
    for r in reps[:3]:
        assert abs(r.systole - math.exp(-r.parameter)) < 1e-9
        assert r.argmin == [["0"], ["1"]] or r.argmin == [["0"], ["-1"]]
    assert reps[3].systole == pytest.approx(1.0)


def test_systole_s_units():
    Q23 = PlaceSet(Q, [Place("real", 0), Place("finite", 2), Place("finite", 3)])
    e = Matrix.identity(Q, 2)
    # t scales coordinate 1 by 2^s at the real place and 2^-s at the 2-adic place
    path = TorusPath([[math.log(2), -math.log(2)], [-math.log(2), math.log(2)], [0, 0]], [1, 2, 3])
    reps = systole_scan([e, e, e], Q23, path, 20)
    # brute-force oracle over the same box of a/D with D 3-smooth times 2-smooth
    for r in reps:
        s = r.parameter
        best = math.inf
        for D in (1, 2, 3, 4, 6, 8, 9, 12, 16, 18):
            for a in range(-20, 21):
                for b in range(-20, 21):
                    if a == 0 and b == 0:
                        continue
                    za, zb = Fraction(a, D), Fraction(b, D)
                    re = max(abs(za) * 2 ** s, abs(zb) * 2 ** -s)

                    def pabs(q, p):
                        if q == 0:
                            return 0.0
                        v = 0
                        num, den = q.numerator, q.denominator
                        while num % p == 0:
                            num //= p
                            v += 1
                        while den % p == 0:
                            den //= p
                            v -= 1
                        return float(p) ** -v

                    two = max(pabs(za, 2) * 2 ** -s, pabs(zb, 2) * 2 ** s)
                    three = max(pabs(za, 3), pabs(zb, 3))
                    best = min(best, max(re, two, three))
        assert r.systole == pytest.approx(best, rel=1e-12)


def test_systole_budget():
    e = Matrix.identity(Q, 2)
    with pytest.raises(BudgetExceeded):
        systole_scan([e], QS, TorusPath([[1, -1]], [1]), 10**4, budget=10**6)


def test_systole_monotone_in_height():
    x = Matrix(Q, [[1, 1], [1, 2]])
    path = TorusPath([[1, -1]], [2.5])
    vals = [systole_scan([x], QS, path, h)[0].systole for h in (2, 5, 20, 80)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
