import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ldorbits.errors import DegenerateLattice, NeedSuppliedUnits, NotAUnit
from ldorbits.numfield import Place, PlaceSet, nf_create
from ldorbits.sunits import _cf_fundamental_unit, unit_closure_classify, unit_group_build, unit_reduce


def pell_oracle(d):
    # smallest y > 0 with x^2 - d y^2 = +-1, by direct search
    y = 1
    while True:
        for s in (-1, 1):
            x2 = d * y * y + s
            x = math.isqrt(x2)
            if x > 0 and x * x == x2:
                return x, y
        y += 1


@pytest.mark.parametrize("d", [2, 3, 6, 7, 11, 14, 19, 22, 23])
def test_fundamental_unit_matches_pell_search(d):
    x, y, half = _cf_fundamental_unit(d)
    assert not half
    assert (x, y) == pell_oracle(d)


def test_half_integral_units():
    # d = 5: (1 + sqrt5)/2; d = 13: (3 + sqrt13)/2
    assert _cf_fundamental_unit(5) == (0, 1, True)
    x, y, half = _cf_fundamental_unit(13)
    assert half and (x, y) == (1, 1)


def test_sqrt2_group():
    K = nf_create([1, 0, -2])
    U = unit_group_build(PlaceSet(K, K.archimedean_places()))
    assert U.rank == 1 and U.torsion_order == 2
    assert U.fundamental_units[0] in (1 + K.gen, 1 - K.gen, -1 + K.gen, -1 - K.gen)


def test_rational_groups():
    Q = nf_create([1, 0])
    U = unit_group_build(PlaceSet(Q, [Place("real", 0), Place("finite", 2), Place("finite", 3)]))
    assert U.rank == 2 and [u.rational() for u in U.fundamental_units] == [2, 3]
    U0 = unit_group_build(PlaceSet(Q, [Place("real", 0)]))
    assert U0.rank == 0 and U0.torsion_order == 2


def test_unit_validation_guards():
    Q = nf_create([1, 0])
    S = PlaceSet(Q, [Place("real", 0), Place("finite", 2)])
    with pytest.raises(NotAUnit):
        unit_group_build(S, [Q(3)])
    with pytest.raises(DegenerateLattice):
        unit_group_build(S, [Q(2), Q(4)])
    K = nf_create([1, -3, 0, 1])
    with pytest.raises(NeedSuppliedUnits):
        unit_group_build(PlaceSet(K, K.archimedean_places()))


def brute_kappa(loga, rows, box):
    best = math.inf
    for e in box:
        res = [la + sum(x * r[i] for x, r in zip(e, rows)) for i, la in enumerate(loga)]
        best = min(best, max(abs(x) for x in res))
    return math.exp(best)


def test_reduce_sqrt2_example():
    K = nf_create([1, 0, -2])
    U = unit_group_build(PlaceSet(K, K.archimedean_places()))
    exps, kappa = unit_reduce([math.exp(10), math.exp(-10)], U)
    opt = brute_kappa([10, -10], U.log_matrix, [(k,) for k in range(-20, 21)])
    assert kappa == pytest.approx(opt, rel=1e-12)
    assert kappa <= 1 + math.sqrt(2) + 1e-6


def test_reduce_identity_and_rank_two():
    Q = nf_create([1, 0])
    U = unit_group_build(PlaceSet(Q, [Place("real", 0), Place("finite", 2), Place("finite", 3)]))
    assert unit_reduce([1, 1, 1], U) == ([0, 0], 1.0)
    exps, kappa = unit_reduce([36, 0.25, 1 / 9], U)
    box = [(a, b) for a in range(-5, 6) for b in range(-5, 6)]
    assert kappa == pytest.approx(brute_kappa([math.log(36), math.log(0.25), math.log(1 / 9)], U.log_matrix, box))
    assert kappa <= 6


@settings(max_examples=25, deadline=None)
@given(st.floats(-30, 30), st.integers(1, 3))
def test_reduce_bound_property(s, m):
    K = nf_create([1, 0, -2])
    U = unit_group_build(PlaceSet(K, K.archimedean_places()))
    exps, kappa = unit_reduce([math.exp(s), math.exp(-s)], U, m)
    assert all(e % m == 0 for e in exps)
    # one step of the lattice spacing bounds the log error
    assert math.log(kappa) <= m * math.log(1 + math.sqrt(2)) / 2 + 1e-9


def test_closure_discrete_ray_circle():
    K = nf_create([1, 0, -2])
    U = unit_group_build(PlaceSet(K, K.archimedean_places()))
    assert unit_closure_classify(U, Place("real", 0)).verdict == "discrete"

    C = nf_create([1, 0, -3, -1])
    t = C.gen
    Uc = unit_group_build(PlaceSet(C, C.archimedean_places()), [t, t + 1])
    v = unit_closure_classify(Uc, Place("real", 0))
    assert v.verdict == "ray" and v.witness["max_gap"] < 0.1

    Q4 = nf_create([1, -2, 1, -2, 1])
    t = Q4.gen
    S4 = PlaceSet(Q4, Q4.archimedean_places())
    U4 = unit_group_build(S4, [t, t - 1])
    v = unit_closure_classify(U4, Place("complex", 0))
    assert v.verdict == "circle_times_cyclic"
    assert v.witness["log_abs_deviation"] < 1e-30


def test_closure_q_three_places_is_ray():
    Q = nf_create([1, 0])
    U = unit_group_build(PlaceSet(Q, [Place("real", 0), Place("finite", 2), Place("finite", 3)]))
    assert unit_closure_classify(U, Place("real", 0)).verdict == "ray"
