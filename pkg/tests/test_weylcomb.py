from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from ldorbits.errors import HypothesisViolated
from ldorbits.numfield import Place, nf_create
from ldorbits.exactlin import Matrix
from ldorbits.weylcomb import (
    FlagType,
    PsiSet,
    WeylPerm,
    all_perms,
    all_psi,
    check_split,
    cone_split,
    coset_reps,
    flags_with_pattern,
    horospherical_data,
    main1_tests,
    n_psi_count,
)


def test_group_laws():
    for n in (2, 3, 4):
        perms = all_perms(n)
        e = WeylPerm.identity(n)
        for w in perms:
            assert w * w.inverse() == e
            m = np.array(w.matrix())
            assert round(np.linalg.det(m)) == 1
        w0 = WeylPerm.longest(n)
        assert w0.length() == n * (n - 1) // 2 and w0 * w0 == e


def test_matrix_is_a_homomorphism_up_to_sign():
    for a, b in product(all_perms(3), repeat=2):
        lhs = np.abs(np.array((a * b).matrix()))
        rhs = np.abs(np.array(a.matrix()) @ np.array(b.matrix()))
        assert (lhs == rhs).all()


def test_composition_round_trip():
    for n in range(1, 6):
        for psi in all_psi(n):
            assert PsiSet.from_composition(psi.composition) == psi


def test_flag_counts():
    assert n_psi_count(PsiSet.empty(2)) == 2
    assert n_psi_count(PsiSet(3, {1})) == 3
    assert n_psi_count(PsiSet.full(3)) == 1
    for n in range(1, 6):
        for psi in all_psi(n):
            assert len(coset_reps(psi)) == n_psi_count(psi) == len(flags_with_pattern(psi.composition))


def test_flag_refinement():
    fine = FlagType.of([{1}, {2}, {3}])
    assert fine.refines(FlagType.of([{1, 2}, {3}]))
    assert not fine.refines(FlagType.of([{1, 3}, {2}]))
    assert FlagType.of([{1, 2, 3}]).refines(FlagType.of([{1, 2, 3}]))


def test_main1_examples():
    assert main1_tests(WeylPerm.longest(3), PsiSet.empty(3)) == (True, True)
    assert main1_tests(WeylPerm.identity(3), PsiSet.empty(3)) == (False, False)


def test_main1_exhaustive_n4():
    for psi in all_psi(4):
        for w in all_perms(4):
            a, b = main1_tests(w, psi)
            assert a == b


def lp_split_exists(vs, v):
    # LP oracle: is there w with (w, v_i0) <= -1 and (w, v_i) >= 1 elsewhere?
    vs = np.array(vs, dtype=float)
    n = vs.shape[1]
    for i0 in range(len(vs)):
        others = np.delete(vs, i0, axis=0)
        if np.linalg.matrix_rank(others) < n:
            continue
        A = np.vstack([-others, vs[i0:i0 + 1]])
        b = -np.ones(len(A))
        res = linprog(np.zeros(n), A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
        if res.status == 0:
            return True
    return False


def test_cone_split_examples():
    with pytest.raises(HypothesisViolated):
        cone_split([[1], [2]], [1])
    vs = [[1, 0], [0, 1], [1, 1]]
    i0, w = cone_split(vs, [1, 1])
    assert check_split(vs, i0, w)
    vs = [[1, 0], [0, 1], [2, 1], [1, 2]]
    i0, w = cone_split(vs, [1, 1])
    assert check_split(vs, i0, w)


vec = st.lists(st.integers(-5, 5), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec, min_size=4, max_size=6), vec)
def test_cone_split_agrees_with_lp(vs, v):
    from ldorbits.weylcomb import _rank

    if not any(v) or any(sum(a * b for a, b in zip(u, v)) <= 0 for u in vs):
        return
    if any(_rank([a, b]) < 2 for i, a in enumerate(vs) for b in vs[i + 1:]) or _rank(vs) < 3:
        return
    i0, w = cone_split(vs, v)
    assert check_split(vs, i0, w)
    assert lp_split_exists(vs, v)


def test_horospherical_data():
    Q = nf_create([1, 0])
    inf = Place("real", 0)
    psi, w = horospherical_data(Matrix.diag(Q, [4, 1, Fraction(1, 4)]), inf)
    assert psi == PsiSet.empty(3) and w == WeylPerm.identity(3)
    psi, w = horospherical_data(Matrix.diag(Q, [1, 1, 1]), inf)
    assert psi == PsiSet.full(3)
    psi, w = horospherical_data(Matrix.diag(Q, [Fraction(1, 4), 4, 1]), inf)
    assert psi == PsiSet.empty(3) and w.perm == (2, 3, 1)
