import itertools
import json

import numpy as np
import pytest

from vqfueter.errors import ShapeMismatch, SingularConstantTerm
from vqfueter.fueter import MultiIndex, PointH, c_alpha_n, expand_qn, multi_indices, multi_indices_upto
from vqfueter.operators import SeriesField, apply_Vq
from vqfueter.quat import E1, E2, E3, ONE, QMatrix, Quaternion
from vqfueter.sampling import random_point, random_qmatrix, random_quaternion
from vqfueter.series import (FueterSeries, ck_extend, evaluate, linear_pencil, split_blocks,
                             star_inverse, star_mul, star_resolvent, variable_row)


def random_series(rng, shape, degree, integer=False):
    terms = {}
    for a in multi_indices_upto(degree):
        if integer:
            terms[a] = QMatrix(rng.integers(-3, 4, shape + (4,)).astype(float))
        else:
            terms[a] = random_qmatrix(rng, *shape)
    return FueterSeries(shape, terms)


def slice_point(rng):
    return PointH(0.0, *rng.uniform(-1, 1, 3))


def test_canonical_form():
    f = FueterSeries((1, 1), {(2, 0, 0): 1.0, (0, 0, 0): 0.0, (0, 1, 0): E1}, trunc=1)
    assert f.support() == [MultiIndex(0, 1, 0)]
    assert f.coeff((0, 0, 0)) == QMatrix.zeros(1, 1)
    g = FueterSeries.from_scalars({(1, 1, 0): 2.0, (0, 0, 1): 1.0, (3, 0, 0): E2})
    assert g.support() == sorted(g.support(), key=MultiIndex.sort_key)
    assert g.degree == 3 and FueterSeries.zero().degree == -1
    with pytest.raises(ShapeMismatch):
        FueterSeries((1, 2), {(0, 0, 0): QMatrix.identity(2)})


def test_json_roundtrip(rng):
    f = random_series(rng, (2, 3), 2)
    obj = json.loads(json.dumps(f.to_json()))
    assert [t["alpha"] for t in obj["terms"]] == [a.to_json() for a in multi_indices_upto(2)]
    assert FueterSeries.from_json(obj) == f
    assert json.dumps(FueterSeries.from_json(obj).to_json()) == json.dumps(f.to_json())
    obj["terms"].append(obj["terms"][0])
    with pytest.raises(ValueError):
        FueterSeries.from_json(obj)


def test_ck_extend_examples(rng):
    assert ck_extend({(2, 0, 1): 1.0}) == FueterSeries.monomial((2, 0, 1))
    assert ck_extend({}).is_zero()
    with pytest.raises(ShapeMismatch):
        ck_extend({(1, 0, 0): 1.0, (0, 1, 0): QMatrix.identity(2)})


def test_ck_extend_reproduces_boundary_data(rng):
    for _ in range(10):
        poly = {a: random_quaternion(rng) for a in multi_indices_upto(4) if rng.random() < 0.5}
        x = slice_point(rng)
        direct = Quaternion(0.0)
        for a, c in poly.items():
            direct = direct + c * MultiIndex(*a).monomial(x.xvec)
        got = Quaternion.coerce(evaluate(ck_extend(poly), x).data[0, 0])
        assert abs(got - direct) < 1e-12


def test_evaluate_examples(rng):
    assert evaluate(FueterSeries.zero((2, 2)), random_point(rng)) == QMatrix.zeros(2, 2)
    x = slice_point(rng)
    c = random_qmatrix(rng, 2, 2)
    single = evaluate(FueterSeries.monomial((1, 2, 0), c), x)
    assert single == c * MultiIndex(1, 2, 0).monomial(x.xvec)
    for n in range(5):
        y = random_point(rng)
        assert abs(Quaternion.coerce(evaluate(expand_qn(n), y).data[0, 0]) - y.q ** n) < 1e-10 * max(1, abs(y.q) ** n)


def test_star_of_monomials_is_exact(rng):
    for a, b in itertools.product(multi_indices_upto(2), repeat=2):
        c, d = random_quaternion(rng), random_quaternion(rng)
        prod = star_mul(FueterSeries.monomial(a, c), FueterSeries.monomial(b, d))
        assert prod == FueterSeries.monomial(MultiIndex(*a) + b, c * d)


def test_star_identity_and_shapes(rng):
    f = random_series(rng, (2, 3), 3)
    assert star_mul(f, FueterSeries.identity(3)) == f
    assert star_mul(FueterSeries.identity(2), f) == f
    with pytest.raises(ShapeMismatch):
        star_mul(f, f)


def test_star_is_associative_and_bilinear(rng):
    f = random_series(rng, (2, 2), 3, integer=True)
    g = random_series(rng, (2, 3), 2, integer=True)
    h = random_series(rng, (3, 1), 3, integer=True)
    assert star_mul(star_mul(f, g), h) == star_mul(f, star_mul(g, h))
    g2 = random_series(rng, (2, 3), 4, integer=True)
    assert star_mul(f, g * 2.0 + g2 * -3.0) == star_mul(f, g) * 2.0 + star_mul(f, g2) * -3.0
    assert star_mul(f * 5.0, g) == star_mul(f, g) * 5.0


def test_star_is_not_commutative():
    f = FueterSeries.monomial((1, 0, 0), E1)
    g = FueterSeries.monomial((0, 1, 0), E2)
    assert star_mul(f, g) == FueterSeries.monomial((1, 1, 0), E3)
    assert star_mul(g, f) == FueterSeries.monomial((1, 1, 0), -E3)


def test_star_factors_pointwise_on_the_slice(rng):
    for _ in range(10):
        f = random_series(rng, (2, 3), 4)
        g = random_series(rng, (3, 2), 3)
        x = slice_point(rng)
        lhs = evaluate(star_mul(f, g), x)
        assert (lhs - evaluate(f, x) @ evaluate(g, x)).max_abs() < 1e-12


def test_star_does_not_factor_off_the_slice():
    f = FueterSeries.monomial((1, 0, 0), E2)
    g = FueterSeries.monomial((0, 1, 0))
    x = PointH(0.7, 0.3, -0.8, 0.5)
    gap = evaluate(star_mul(f, g), x) - evaluate(f, x) @ evaluate(g, x)
    assert gap.max_abs() > 1e-3


def test_truncation_is_propagated(rng):
    f = random_series(rng, (1, 1), 3).truncate(3)
    g = random_series(rng, (1, 1), 2)
    assert star_mul(f, g).trunc == 3
    assert star_mul(f, g).degree == 3
    assert (f + g.truncate(2)).trunc == 2
    assert g.trunc is None


def test_intrinsic_powers_multiply(rng):
    for n, m in ((1, 1), (2, 1), (2, 3), (3, 3)):
        b = float(rng.normal())
        c = random_quaternion(rng)
        lhs = star_mul(expand_qn(n) * b, expand_qn(m) * c)
        assert lhs.max_abs_diff(expand_qn(n + m) * (c * b)) < 1e-12
        for gamma in multi_indices(n + m):
            conv = Quaternion(0.0)
            for alpha in multi_indices(n):
                beta = MultiIndex(*gamma) - alpha
                if min(beta) >= 0:
                    conv = conv + c_alpha_n(alpha, n) * c_alpha_n(beta, m)
            assert abs(conv - c_alpha_n(gamma, n + m)) < 1e-12


def test_star_inverse_examples(rng):
    assert star_inverse(FueterSeries.identity(2), 5) == FueterSeries.identity(2).truncate(5)
    c = random_quaternion(rng) * 0.3
    f = FueterSeries.identity(1) - FueterSeries.monomial((1, 0, 0), c)
    g = star_inverse(f, 8)
    want = FueterSeries.from_scalars({(k, 0, 0): c ** k for k in range(9)})
    assert g.max_abs_diff(want) < 1e-15
    with pytest.raises(SingularConstantTerm):
        star_inverse(FueterSeries.monomial((1, 0, 0)), 3)
    with pytest.raises(ShapeMismatch):
        star_inverse(random_series(rng, (1, 2), 1), 3)


def test_star_inverse_is_two_sided(rng):
    f = random_series(rng, (2, 2), 3) * 0.3 + FueterSeries.identity(2)
    g = star_inverse(f, 7)
    one = FueterSeries.identity(2)
    assert star_mul(f, g).truncate(7).max_abs_diff(one) < 1e-12
    assert star_mul(g, f).truncate(7).max_abs_diff(one) < 1e-12


def test_variable_row_and_blocks(rng):
    row = variable_row()
    x = random_point(rng)
    vals = evaluate(row, x)
    from vqfueter.fueter import mu_row
    assert (vals - mu_row(x)).max_abs() < 1e-15
    A = random_qmatrix(rng, 6, 2)
    assert QMatrix.vstack(split_blocks(A)) == A
    with pytest.raises(ShapeMismatch):
        split_blocks(random_qmatrix(rng, 4, 2))


def test_star_resolvent_examples(rng):
    assert star_resolvent(QMatrix.zeros(3, 1), 4) == FueterSeries.identity(1).truncate(4)
    a = random_quaternion(rng) * 0.5
    A = QMatrix.from_rows([[a], [0.0], [0.0]])
    want = FueterSeries.from_scalars({(k, 0, 0): a ** k for k in range(7)})
    assert star_resolvent(A, 6).max_abs_diff(want) < 1e-15


def test_star_resolvent_word_sums(rng):
    N = 2
    A = random_qmatrix(rng, 3 * N, N) * 0.5
    blocks = split_blocks(A)
    res = star_resolvent(A, 4)
    for gamma in multi_indices_upto(4):
        letters = [u for u, k in zip((0, 1, 2), gamma) for _ in range(k)]
        total = QMatrix.identity(N) * 0.0
        for word in set(itertools.permutations(letters)):
            prod = QMatrix.identity(N)
            for u in word:
                prod = prod @ blocks[u]
            total = total + prod
        if not letters:
            total = QMatrix.identity(N)
        assert (res.coeff(gamma) - total).max_abs() < 1e-12


def test_series_evaluations_are_regular(rng):
    for _ in range(10):
        f = SeriesField(random_series(rng, (1, 2), 5) * 0.2)
        for _ in range(20):
            x = random_point(rng, min_vec=0.1)
            assert apply_Vq(f, x).max_abs() <= 1e-6
