import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from vqfueter.errors import DomainError, PointOutsideOmegaA
from vqfueter.fueter import MultiIndex, PointH, mu_alpha, multi_indices_upto
from vqfueter.quat import QMatrix, Quaternion, min_eigenvalue
from vqfueter.rkhs import (CoefficientFamily, arveson_closed_form, backward_shift, gram_matrix,
                           kernel_eval, kernel_tail, multiplier_kernel_gram, shift, shift_adjoint,
                           structural_defect)
from vqfueter.sampling import random_ball_point, random_qmatrix, random_quaternion
from vqfueter.series import FueterSeries, evaluate, star_mul

ARVESON = CoefficientFamily.arveson()


def int_series(rng, degree, shape=(1, 1)):
    terms = {a: QMatrix(rng.integers(-4, 5, shape + (4,)).astype(float))
             for a in multi_indices_upto(degree)}
    return FueterSeries(shape, terms)


def inner(c, f, g):
    """Weighted pairing sum_alpha c_alpha conj(g_alpha) f_alpha for scalar series."""
    total = Quaternion(0.0)
    for a in set(f.support()) | set(g.support()):
        fa = Quaternion.coerce(f.coeff(a).data[0, 0])
        ga = Quaternion.coerce(g.coeff(a).data[0, 0])
        total = total + ga.conj() * fa * float(c(a))
    return total


def test_arveson_weights_are_exact():
    assert ARVESON((0, 0, 0)) == 1
    assert ARVESON((1, 1, 0)) == Fraction(1, 2)
    assert ARVESON((2, 1, 1)) == Fraction(2, 24)
    with pytest.raises(DomainError):
        CoefficientFamily.custom({(0, 0, 0): 0})((0, 0, 0))
    with pytest.raises(ValueError):
        CoefficientFamily("other")


def test_kernel_trunc_zero_is_one(rng):
    x, y = random_ball_point(rng, 0.9), random_ball_point(rng, 0.9)
    assert kernel_eval(ARVESON, x, y, 0) == Quaternion(1.0)
    with pytest.raises(ValueError):
        kernel_eval(ARVESON, x, y, -1)


def test_kernel_diagonal_matches_geometric_sum(rng):
    for _ in range(20):
        x = random_ball_point(rng, 0.8)
        r2 = abs(x.q) ** 2
        k = kernel_eval(ARVESON, x, x, 40)
        assert abs(k.vec) < 1e-12
        assert abs(k.w - 1 / (1 - r2)) <= kernel_tail(ARVESON, x, x, 40) + 1e-12
        assert abs(arveson_closed_form(x, x) - 1 / (1 - r2)) < 1e-12


def test_kernel_is_hermitian_symmetric(rng):
    for _ in range(10):
        x, y = random_ball_point(rng, 0.9), random_ball_point(rng, 0.9)
        assert abs(kernel_eval(ARVESON, x, y, 12) - kernel_eval(ARVESON, y, x, 12).conj()) < 1e-13


def test_kernel_agrees_with_closed_form(rng):
    for _ in range(10):
        x, y = random_ball_point(rng, 0.7), random_ball_point(rng, 0.7)
        gap = abs(kernel_eval(ARVESON, x, y, 40) - arveson_closed_form(x, y))
        assert gap <= kernel_tail(ARVESON, x, y, 40) + 1e-12


def test_kernel_tail_edge_cases():
    x = PointH(0.0, 0.6, 0.0, 0.0)
    assert kernel_tail(ARVESON, x, x, 3) == pytest.approx(0.36 ** 4 / 0.64)
    assert kernel_tail(ARVESON, PointH(0, 1, 0, 0), x, 3) == pytest.approx(0.6 ** 4 / 0.4)
    assert math.isinf(kernel_tail(ARVESON, PointH(0, 1, 0, 0), PointH(0, 1, 0, 0), 3))
    assert math.isinf(kernel_tail(CoefficientFamily.custom(lambda a: 1), x, x, 3))


def test_gram_examples(rng):
    x = random_ball_point(rng, 0.7)
    G1 = gram_matrix(ARVESON, [x], 10)
    assert G1.shape == (1, 1)
    assert abs(Quaternion.coerce(G1.data[0, 0]) - kernel_eval(ARVESON, x, x, 10)) < 1e-14
    pts = [random_ball_point(rng, 0.7) for _ in range(5)]
    G = gram_matrix(ARVESON, pts, 20)
    assert (G - G.H).max_abs() < 1e-13
    assert min_eigenvalue(G) >= -1e-10
    dup = gram_matrix(ARVESON, [pts[0], pts[0]], 20)
    assert min_eigenvalue(dup) == pytest.approx(0.0, abs=1e-10)


def test_shift_examples():
    f = FueterSeries.monomial((1, 0, 2))
    assert shift(2, f) == FueterSeries.monomial((1, 1, 2))
    assert backward_shift(3, f) == FueterSeries.monomial((1, 0, 1), 2 / 3)
    assert backward_shift(2, f).is_zero()
    assert backward_shift(1, FueterSeries.identity(1)).is_zero()
    with pytest.raises(ValueError):
        shift(0, f)


def test_shift_then_backward_sums_back(rng):
    f = int_series(rng, 4)
    f0 = FueterSeries.constant(f.coeff((0, 0, 0)))
    total = sum((shift(u, backward_shift(u, f)) for u in (1, 2, 3)), FueterSeries.zero())
    assert total.max_abs_diff(f - f0) < 1e-14


def test_shift_adjoint_examples():
    c = CoefficientFamily.custom(lambda a: 2 ** a.order)
    f = FueterSeries.monomial((0, 2, 0))
    assert shift_adjoint(2, c, f) == FueterSeries.monomial((0, 1, 0), 2.0)
    assert shift_adjoint(1, c, f).is_zero()


@pytest.mark.parametrize("family", [ARVESON, CoefficientFamily.custom(lambda a: 1 + a[0] + 2 * a[2])])
def test_shift_adjoint_relation(rng, family):
    for _ in range(5):
        f, g = int_series(rng, 3), int_series(rng, 4)
        for u in (1, 2, 3):
            lhs = inner(family, shift(u, f), g)
            rhs = inner(family, f, shift_adjoint(u, family, g))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_arveson_adjoint_is_backward_shift(rng):
    f = int_series(rng, 5, (2, 1))
    for u in (1, 2, 3):
        assert shift_adjoint(u, ARVESON, f) == backward_shift(u, f)


def test_structural_defect_examples():
    assert structural_defect(ARVESON, (1, 1, 0)) == 0
    assert structural_defect(ARVESON, (3, 0, 5)) == 0
    ones = CoefficientFamily.custom(lambda a: 1)
    assert structural_defect(ones, (1, 1, 0)) == -1
    assert structural_defect(ones, (1, 0, 0)) == 0
    with pytest.raises(ValueError):
        structural_defect(ARVESON, (0, 0, 0))


def test_structural_defect_vanishes_for_arveson():
    for a in multi_indices_upto(8):
        if a.order:
            assert structural_defect(ARVESON, a) == 0


def reference_multiplier_gram(S, pts, trunc):
    n = S.shape[0]
    blocks = []
    for x in pts:
        row = []
        for y in pts:
            cell = QMatrix.zeros(n, n)
            for a in multi_indices_upto(trunc):
                w = float(1 / ARVESON(a))
                mono = FueterSeries.monomial(a, QMatrix.identity(n))
                Px = evaluate(star_mul(mono, S), x)
                Py = evaluate(star_mul(mono, S), y)
                scal = mu_alpha(x, a) * mu_alpha(y, a).conj()
                cell = cell + (QMatrix.identity(n) * scal - Px @ Py.H) * w
            row.append(cell)
        blocks.append(row)
    return QMatrix.block(blocks)


def test_multiplier_gram_matches_reference(rng):
    S = FueterSeries((2, 1), {a: random_qmatrix(rng, 2, 1, 0.3) for a in multi_indices_upto(2)})
    pts = [random_ball_point(rng, 0.6) for _ in range(3)]
    fast = multiplier_kernel_gram(S, pts, 5)
    slow = reference_multiplier_gram(S, pts, 5)
    assert fast.shape == (6, 6)
    assert (fast - slow).max_abs() < 1e-12


def test_multiplier_gram_of_zero_is_the_kernel(rng):
    pts = [random_ball_point(rng, 0.6) for _ in range(4)]
    G = multiplier_kernel_gram(FueterSeries.zero((1, 1)), pts, 10)
    assert (G - gram_matrix(ARVESON, pts, 10)).max_abs() < 1e-14


def test_constant_multipliers(rng):
    pts = [random_ball_point(rng, 0.6) for _ in range(4)]
    c = random_quaternion(rng)
    small = FueterSeries.monomial((0, 0, 0), c * (0.9 / abs(c)))
    big = FueterSeries.monomial((0, 0, 0), c * (2.0 / abs(c)))
    assert min_eigenvalue(multiplier_kernel_gram(small, pts, 20)) >= -1e-10
    assert min_eigenvalue(multiplier_kernel_gram(big, pts, 20)) < -1e-3


def test_multiplier_gram_warns_outside_the_ball():
    with pytest.warns(PointOutsideOmegaA):
        multiplier_kernel_gram(FueterSeries.zero((1, 1)), [PointH(0.9, 0.9, 0.0, 0.0)], 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        multiplier_kernel_gram(FueterSeries.zero((1, 1)), [PointH(0.1, 0.5, 0.0, 0.0)], 2)
